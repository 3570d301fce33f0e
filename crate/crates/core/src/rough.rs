//! Generalized approximation spaces, their approximation operators, and
//! CF-approximation spaces.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::set::{canonicalize, BitSet, Relation, MAX_WIDTH};
use crate::witness::{Candidate, Minimum, Violation};
use crate::{check_id, raised_cap};

/// Largest universe for which the operator laws quantify over all subsets.
pub const LAW_UNIVERSE_CAP: usize = 12;

/// Largest `Θ̄(F)` whose subsets are searched for a minimal (CF) witness.
pub const WITNESS_SEARCH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoughError {
    #[error("invalid element id `{0}`")]
    InvalidId(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// A set `U` with an arbitrary binary relation `Θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaSpace {
    universe: Vec<String>,
    theta: Relation,
}

impl GaSpace {
    pub fn new(universe: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, RoughError> {
        let n = universe.len();
        let mut theta = Relation::empty(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(RoughError::UnknownElement(x.max(y).to_string()));
            }
            theta.insert(x, y);
        }
        Self::from_relation(universe, theta)
    }

    pub fn from_relation(universe: Vec<String>, theta: Relation) -> Result<Self, RoughError> {
        if universe.len() > MAX_WIDTH {
            return Err(RoughError::TooLarge {
                size: universe.len(),
                limit: MAX_WIDTH,
            });
        }
        for (k, u) in universe.iter().enumerate() {
            if !check_id(u) {
                return Err(RoughError::InvalidId(u.clone()));
            }
            if universe[..k].contains(u) {
                return Err(RoughError::DuplicateElement(u.clone()));
            }
        }
        assert_eq!(theta.size(), universe.len());
        Ok(GaSpace { universe, theta })
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.universe.iter().position(|u| u == id)
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn theta(&self) -> &Relation {
        &self.theta
    }

    /// `Θ_s(x) = {y : x Θ y}`.
    pub fn theta_s(&self, x: usize) -> Result<BitSet, RoughError> {
        if x >= self.len() {
            return Err(RoughError::UnknownElement(x.to_string()));
        }
        Ok(self.theta.row(x))
    }

    /// `Θ̄(X) = {x : Θ_s(x) ∩ X ≠ ∅}`.
    pub fn upper(&self, x: BitSet) -> BitSet {
        (0..self.len())
            .filter(|&u| self.theta.row(u).intersects(x))
            .collect()
    }

    /// `Θ̲(X) = {x : Θ_s(x) ⊆ X}`.
    pub fn lower(&self, x: BitSet) -> BitSet {
        (0..self.len())
            .filter(|&u| self.theta.row(u).is_subset(x))
            .collect()
    }

    /// Check the operator laws by quantifying over every subset of `U`.
    pub fn operator_laws(&self) -> Result<OperatorLaws, RoughError> {
        let n = self.len();
        let limit = raised_cap(LAW_UNIVERSE_CAP);
        if n > limit {
            return Err(RoughError::TooLarge { size: n, limit });
        }
        let all = self.all();
        let upper: Vec<BitSet> = (0..1u64 << n)
            .map(|b| self.upper(BitSet::from_bits(b)))
            .collect();
        let up = |x: BitSet| upper[x.bits() as usize];
        let reflexive = self.theta.is_reflexive();
        let transitive = self.theta.is_transitive();
        let mut laws = OperatorLaws {
            reflexive,
            transitive,
            extensive: true,
            idempotent_below: true,
            failures: Vec::new(),
        };
        let mut fail = |law: &str, x: BitSet, names: &[String]| {
            laws.failures.push(format!(
                "{law}: X={}",
                crate::witness::compact_set(x, names)
            ));
        };
        if !up(BitSet::EMPTY).is_empty() {
            fail("empty", BitSet::EMPTY, &self.universe);
        }
        for x in all.subsets() {
            let ux = up(x);
            // one-element extensions suffice for monotonicity
            if all
                .difference(x)
                .iter()
                .any(|e| !ux.is_subset(up(x.with(e))))
            {
                fail("monotonicity", x, &self.universe);
            }
            if !x.is_subset(ux) {
                laws.extensive = false;
            }
            if !up(ux).is_subset(ux) {
                laws.idempotent_below = false;
            }
            if transitive && ux.subsets().any(|y| !up(y).is_subset(ux)) {
                fail("absorption", x, &self.universe);
            }
            if self.lower(x) != all.difference(up(all.difference(x))) {
                fail("duality", x, &self.universe);
            }
        }
        if laws.reflexive != laws.extensive {
            laws.failures
                .push("reflexivity: biconditional fails".into());
        }
        if laws.transitive != laws.idempotent_below {
            laws.failures
                .push("transitivity: biconditional fails".into());
        }
        Ok(laws)
    }
}

/// Outcome of [`GaSpace::operator_laws`]. The relational flags and the
/// operator flags are computed independently; the laws say they agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorLaws {
    pub reflexive: bool,
    pub transitive: bool,
    /// `X ⊆ Θ̄(X)` for every `X`.
    pub extensive: bool,
    /// `Θ̄(Θ̄(X)) ⊆ Θ̄(X)` for every `X`.
    pub idempotent_below: bool,
    pub failures: Vec<String>,
}

impl OperatorLaws {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const THETA_TRANSITIVITY: &str = "theta-transitivity";
pub const CF_CONDITION: &str = "cf";

/// A GA-space with a family `𝔉` of subsets, kept in canonical order.
pub struct CfSpace {
    base: GaSpace,
    family: Vec<BitSet>,
    report: OnceLock<CfReport>,
}

impl Clone for CfSpace {
    fn clone(&self) -> Self {
        CfSpace {
            base: self.base.clone(),
            family: self.family.clone(),
            report: self.report.clone(),
        }
    }
}

impl PartialEq for CfSpace {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.family == other.family
    }
}

impl Eq for CfSpace {}

impl fmt::Debug for CfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam: Vec<String> = self
            .family
            .iter()
            .map(|&s| crate::witness::compact_set(s, self.universe()))
            .collect();
        f.debug_struct("CfSpace")
            .field("universe", &self.base.universe)
            .field("theta", &self.base.theta)
            .field("family", &fam)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfReport {
    pub violations: Vec<Violation>,
    pub topological: bool,
    /// Family indices of every `T` with `T ⊆ Θ̄(F)` for all `F ∈ 𝔉`.
    pub m_witnesses: Vec<usize>,
    /// `𝔉 = ∅`: accepted, but `C(U)` would have no tokens.
    pub empty_family: bool,
}

impl CfReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_m(&self) -> bool {
        !self.m_witnesses.is_empty()
    }

    pub fn violation(&self, condition: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.condition == condition)
    }
}

impl CfSpace {
    pub fn new(
        universe: Vec<String>,
        pairs: &[(usize, usize)],
        family: Vec<BitSet>,
    ) -> Result<Self, RoughError> {
        Self::from_parts(GaSpace::new(universe, pairs)?, family)
    }

    pub fn from_parts(base: GaSpace, mut family: Vec<BitSet>) -> Result<Self, RoughError> {
        let all = base.all();
        if let Some(bad) = family.iter().find(|f| !f.is_subset(all)) {
            let e = bad.difference(all).first().unwrap_or(0);
            return Err(RoughError::UnknownElement(e.to_string()));
        }
        canonicalize(&mut family);
        if family.len() > MAX_WIDTH {
            return Err(RoughError::TooLarge {
                size: family.len(),
                limit: MAX_WIDTH,
            });
        }
        Ok(CfSpace {
            base,
            family,
            report: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &GaSpace {
        &self.base
    }

    pub fn universe(&self) -> &[String] {
        self.base.universe()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn family(&self) -> &[BitSet] {
        &self.family
    }

    pub fn family_index(&self, f: BitSet) -> Option<usize> {
        crate::set::position(&self.family, f)
    }

    pub fn upper(&self, x: BitSet) -> BitSet {
        self.base.upper(x)
    }

    pub fn lower(&self, x: BitSet) -> BitSet {
        self.base.lower(x)
    }

    /// Members `G ∈ 𝔉` with `G ⊆ Θ̄(F)`, as family indices.
    pub fn below(&self, f: usize) -> BitSet {
        let up = self.upper(self.family[f]);
        self.family
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_subset(up))
            .map(|(k, _)| k)
            .collect()
    }

    /// `below` for every member, in family order.
    pub fn below_all(&self) -> Vec<BitSet> {
        (0..self.family.len()).map(|f| self.below(f)).collect()
    }

    /// Transitivity, (CF), the topological flag and the (M) witnesses.
    pub fn validate(&self) -> &CfReport {
        self.report.get_or_init(|| self.compute_report())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid()
    }

    fn compute_report(&self) -> CfReport {
        let mut violations = Vec::new();
        let theta = self.base.theta();
        let n = self.len();
        let names = [self.universe()];
        let mut trans = Minimum::default();
        for x in 0..n {
            for y in theta.row(x).iter() {
                for z in theta.row(y).difference(theta.row(x)).iter() {
                    trans.offer(
                        Candidate::new()
                            .token("x", 0, x)
                            .token("y", 0, y)
                            .token("z", 0, z),
                    );
                }
            }
        }
        if let Some(c) = trans.into_inner() {
            violations.push(c.render(THETA_TRANSITIVITY, &names));
        }

        let ups: Vec<BitSet> = self.family.iter().map(|&f| self.upper(f)).collect();
        let mut cf = Minimum::default();
        for (fi, &f) in self.family.iter().enumerate() {
            let up = ups[fi];
            // Θ̄ is monotone, so K = Θ̄(F) is the hardest case.
            let holds = |k: BitSet| {
                (0..self.family.len()).any(|g| self.family[g].is_subset(up) && k.is_subset(ups[g]))
            };
            if holds(up) {
                continue;
            }
            let k = if up.len() <= raised_cap(WITNESS_SEARCH_CAP) {
                up.subsets_canonical()
                    .into_iter()
                    .find(|&k| !holds(k))
                    .expect("Θ̄(F) itself fails")
            } else {
                up
            };
            cf.offer(Candidate::new().set("F", 0, f).set("K", 0, k));
        }
        if let Some(c) = cf.into_inner() {
            violations.push(c.render(CF_CONDITION, &names));
        }

        let m_witnesses = (0..self.family.len())
            .filter(|&t| ups.iter().all(|&u| self.family[t].is_subset(u)))
            .collect();
        CfReport {
            violations,
            topological: theta.is_reflexive(),
            m_witnesses,
            empty_family: self.family.is_empty(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("u{i}")).collect()
    }

    #[test]
    fn operators_on_fixtures() {
        let u = fixtures::u_unit();
        let x = BitSet::singleton(0);
        assert_eq!(u.upper(x), x);
        assert_eq!(u.lower(x), x);
        let e = fixtures::u_empty_f();
        assert_eq!(e.upper(x), BitSet::EMPTY);
        assert_eq!(e.lower(x), x);
        assert_eq!(e.base().theta_s(0), Ok(BitSet::EMPTY));
        assert!(e.base().theta_s(1).is_err());
    }

    #[test]
    fn chain_successor_sets() {
        let g = GaSpace::new(ids(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.theta_s(0), Ok(BitSet::from_indices([1, 2])));
        assert_eq!(g.theta_s(1), Ok(BitSet::singleton(2)));
        assert_eq!(g.theta_s(2), Ok(BitSet::EMPTY));
    }

    #[test]
    fn laws_on_fixtures() {
        let laws = fixtures::u_unit().base().operator_laws().unwrap();
        assert!(laws.passed() && laws.reflexive && laws.transitive);
        let laws = fixtures::u_empty_f().base().operator_laws().unwrap();
        assert!(laws.passed());
        assert!(!laws.reflexive && !laws.extensive);
        assert!(laws.transitive && laws.idempotent_below);
    }

    #[test]
    fn fixture_flags() {
        let r = fixtures::u_unit().validate().clone();
        assert!(r.valid() && r.topological);
        assert_eq!(r.m_witnesses, vec![0]);
        let r = fixtures::u_empty_f().validate().clone();
        assert!(r.valid() && !r.topological);
        assert_eq!(r.m_witnesses, vec![0]);
    }

    #[test]
    fn cf_violation_has_empty_witness() {
        let u = CfSpace::new(vec!["u".into()], &[], vec![BitSet::singleton(0)]).unwrap();
        let r = u.validate();
        let v = r.violation(CF_CONDITION).expect("(CF) fails");
        assert_eq!(v.get("F"), Some("{u}"));
        assert_eq!(v.get("K"), Some("{}"));
    }

    #[test]
    fn transitivity_witness() {
        let u = CfSpace::new(ids(3), &[(0, 1), (1, 2)], vec![BitSet::EMPTY]).unwrap();
        let v = u.validate().violation(THETA_TRANSITIVITY).unwrap().clone();
        assert_eq!(v.to_string(), "theta-transitivity: x=u0 y=u1 z=u2");
    }

    #[test]
    fn empty_family_is_flagged() {
        let u = CfSpace::new(ids(1), &[(0, 0)], vec![]).unwrap();
        let r = u.validate();
        assert!(r.valid() && r.empty_family && !r.has_m());
    }
}
