//! Small named structures used throughout the tests and the CLI examples.

use std::sync::Arc;

use crate::frame::InformationFrame;
use crate::mapping::f_on_object;
use crate::order::{FinitePoset, MonotoneMap};
use crate::rough::CfSpace;
use crate::set::BitSet;

/// One token `t`, `Con_t = {∅, {t}}`, and `t` entailed by both.
pub fn f_unit() -> InformationFrame {
    let t = BitSet::singleton(0);
    InformationFrame::from_closures(
        vec!["t".into()],
        vec![vec![(BitSet::EMPTY, t), (t, t)]],
        None,
    )
    .expect("unit frame is well typed")
}

pub fn p_chain2() -> FinitePoset {
    FinitePoset::chain(2)
}

pub fn p_diamond() -> FinitePoset {
    FinitePoset::diamond()
}

/// `F(P_chain2)` over its full basis.
pub fn f_chain2() -> InformationFrame {
    let p = p_chain2();
    f_on_object(&p, p.all()).expect("chain is a domain")
}

/// `F(P_diamond)` over its full basis.
pub fn f_diamond() -> InformationFrame {
    let p = p_diamond();
    f_on_object(&p, p.all()).expect("diamond is a domain")
}

/// The automorphism of the diamond exchanging `a` and `b`.
pub fn diamond_swap() -> MonotoneMap {
    let p = Arc::new(p_diamond());
    MonotoneMap::new(p.clone(), p, vec![0, 2, 1, 3]).expect("swap is monotone")
}

/// `U = {u}`, `Θ = {(u, u)}`, `𝔉 = {{u}}`.
pub fn u_unit() -> CfSpace {
    CfSpace::new(vec!["u".into()], &[(0, 0)], vec![BitSet::singleton(0)])
        .expect("unit space is well typed")
}

/// `U = {u}`, `Θ = ∅`, `𝔉 = {∅}`.
pub fn u_empty_f() -> CfSpace {
    CfSpace::new(vec!["u".into()], &[], vec![BitSet::EMPTY]).expect("space is well typed")
}
