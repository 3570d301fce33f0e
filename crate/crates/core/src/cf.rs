//! CF-approximable relations, the functors `C` and `E` between
//! CF-approximation spaces and information frames, and the natural
//! isomorphisms `δ = (Υ, Γ)` and `γ = (Q, P)`.
//!
//! Relations compose diagrammatically, like mappings: `d.then(&o)` is
//! `F (Δ ∘ Ω) G ⇔ ∃E. F Δ E ∧ E Ω G`.

use std::sync::Arc;

use thiserror::Error;

use crate::frame::{FrameError, InformationFrame};
use crate::mapping::{ApproximableMapping, FrameIsoPair, MappingError};
use crate::raised_cap;
use crate::rough::{CfSpace, GaSpace, RoughError};
use crate::set::{BitSet, Relation, MAX_WIDTH};
use crate::witness::{compact_set, Candidate, Minimum, Violation};

/// Hard caps for building `E(C(U))` and `C(E(A))`.
pub const DELTA_UNIVERSE_CAP: usize = 3;
pub const DELTA_FAMILY_CAP: usize = 3;
pub const GAMMA_TOKEN_CAP: usize = 3;
pub const GAMMA_CON_CAP: usize = 4;
/// Largest `{G : G ⊆ Θ̄(F)}` for which `C(U)` lists every subset.
pub const C_BELOW_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error(
        "spaces do not match: the target of the first relation is not the source of the second"
    )]
    SpaceMismatch,
    #[error("the family is empty, so the derived frame has no tokens")]
    EmptyFamily,
    #[error("structure is not valid: {0}")]
    NotValid(String),
    #[error("{0} is not a member of the family")]
    NotAMember(String),
    #[error("{what} is {size}, above the limit of {limit}")]
    SizeExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Rough(#[from] RoughError),
}

pub const EXISTENCE: &str = "existence";
pub const SOURCE_WEAKENING: &str = "source-weakening";
pub const TARGET_WEAKENING: &str = "target-weakening";
pub const INTERPOLATION: &str = "interpolation";
pub const PAIRING: &str = "pairing";

fn same_space(a: &Arc<CfSpace>, b: &Arc<CfSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn cap(what: &'static str, size: usize, default: usize) -> Result<(), CfError> {
    let limit = raised_cap(default);
    if size > limit {
        return Err(CfError::SizeExceeded { what, size, limit });
    }
    Ok(())
}

/// `Δ ⊆ 𝔉 × 𝔉′`, stored as rows over family indices.
#[derive(Debug, Clone)]
pub struct CfRelation {
    source: Arc<CfSpace>,
    target: Arc<CfSpace>,
    rows: Vec<BitSet>,
}

impl PartialEq for CfRelation {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && same_space(&self.source, &other.source)
            && same_space(&self.target, &other.target)
    }
}

impl Eq for CfRelation {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfRelationReport {
    pub violations: Vec<Violation>,
}

impl CfRelationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, condition: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.condition == condition)
    }
}

impl CfRelation {
    /// From pairs of family members; checks membership only.
    pub fn new(
        source: Arc<CfSpace>,
        target: Arc<CfSpace>,
        pairs: &[(BitSet, BitSet)],
    ) -> Result<Self, CfError> {
        let mut rows = vec![BitSet::EMPTY; source.family().len()];
        for &(f, g) in pairs {
            let fi = source
                .family_index(f)
                .ok_or_else(|| CfError::NotAMember(compact_set(f, source.universe())))?;
            let gi = target
                .family_index(g)
                .ok_or_else(|| CfError::NotAMember(compact_set(g, target.universe())))?;
            rows[fi] = rows[fi].with(gi);
        }
        Ok(CfRelation {
            source,
            target,
            rows,
        })
    }

    pub fn from_rows(source: Arc<CfSpace>, target: Arc<CfSpace>, rows: Vec<BitSet>) -> Self {
        assert_eq!(rows.len(), source.family().len());
        let all = BitSet::full(target.family().len());
        assert!(rows.iter().all(|r| r.is_subset(all)));
        CfRelation {
            source,
            target,
            rows,
        }
    }

    /// `F Id G ⇔ G ⊆ Θ̄(F)`.
    pub fn identity(space: Arc<CfSpace>) -> Self {
        let rows = space.below_all();
        CfRelation {
            source: space.clone(),
            target: space,
            rows,
        }
    }

    pub fn source(&self) -> &Arc<CfSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CfSpace> {
        &self.target
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn relates(&self, f: usize, g: usize) -> bool {
        self.rows[f].contains(g)
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// `(F, G)` pairs as family indices, in order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(f, r)| r.iter().map(move |g| (f, g)))
    }

    /// `Δ ∘ Ω`, `self` first.
    pub fn then(&self, next: &CfRelation) -> Result<Self, CfError> {
        if !same_space(&self.target, &next.source) {
            return Err(CfError::SpaceMismatch);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .fold(BitSet::EMPTY, |acc, e| acc.union(next.rows[e]))
            })
            .collect();
        Ok(CfRelation {
            source: self.source.clone(),
            target: next.target.clone(),
            rows,
        })
    }

    /// Conditions (1) through (5), each with a least witness.
    pub fn validate(&self) -> CfRelationReport {
        let src = &self.source;
        let tgt = &self.target;
        let below = src.below_all();
        let below2 = tgt.below_all();
        let fam = src.family();
        let fam2 = tgt.family();
        let names = [src.universe(), tgt.universe()];
        let mut violations = Vec::new();
        let mut report = |cond: &'static str, m: Minimum| {
            if let Some(c) = m.into_inner() {
                violations.push(c.render(cond, &names));
            }
        };

        let mut m = Minimum::default();
        for (f, r) in self.rows.iter().enumerate() {
            if r.is_empty() {
                m.offer(Candidate::new().set("F", 0, fam[f]));
            }
        }
        report(EXISTENCE, m);

        let mut m = Minimum::default();
        for f2 in 0..fam.len() {
            for f in below[f2].iter() {
                for g in self.rows[f].difference(self.rows[f2]).iter() {
                    m.offer(
                        Candidate::new()
                            .set("F", 0, fam[f])
                            .set("F'", 0, fam[f2])
                            .set("G", 1, fam2[g]),
                    );
                }
            }
        }
        report(SOURCE_WEAKENING, m);

        let mut m = Minimum::default();
        for (f, &r) in self.rows.iter().enumerate() {
            for g in r.iter() {
                for g2 in below2[g].difference(r).iter() {
                    m.offer(
                        Candidate::new()
                            .set("F", 0, fam[f])
                            .set("G", 1, fam2[g])
                            .set("G'", 1, fam2[g2]),
                    );
                }
            }
        }
        report(TARGET_WEAKENING, m);

        let mut m = Minimum::default();
        for (f, &r) in self.rows.iter().enumerate() {
            for g in r.iter() {
                let ok = below[f]
                    .iter()
                    .any(|fh| self.rows[fh].iter().any(|gh| below2[gh].contains(g)));
                if !ok {
                    m.offer(Candidate::new().set("F", 0, fam[f]).set("G", 1, fam2[g]));
                }
            }
        }
        report(INTERPOLATION, m);

        let mut m = Minimum::default();
        for (f, &r) in self.rows.iter().enumerate() {
            for g in r.iter() {
                for g2 in r.iter().filter(|&g2| g2 >= g) {
                    let pair = BitSet::from_indices([g, g2]);
                    if !r.iter().any(|gh| pair.is_subset(below2[gh])) {
                        m.offer(
                            Candidate::new()
                                .set("F", 0, fam[f])
                                .set("G", 1, fam2[g])
                                .set("G'", 1, fam2[g2]),
                        );
                    }
                }
            }
        }
        report(PAIRING, m);

        CfRelationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid()
    }
}

fn require_valid_space(space: &CfSpace) -> Result<(), CfError> {
    match space.validate().violations.first() {
        Some(v) => Err(CfError::NotValid(v.to_string())),
        None => Ok(()),
    }
}

fn require_valid_frame(frame: &InformationFrame) -> Result<(), CfError> {
    match frame.validate().violations.first() {
        Some(v) => Err(CfError::NotValid(v.to_string())),
        None => Ok(()),
    }
}

/// Token id of a family member in `C(U)`: `[u0,u1]`, `[]` for `∅`.
pub fn member_id(f: BitSet, universe: &[String]) -> String {
    let inner: Vec<&str> = f.iter().map(|u| universe[u].as_str()).collect();
    format!("[{}]", inner.join(","))
}

/// Element id of `(X, i)` in `E(A)`: `(t0,t1|t2)`, `(|t)` for `X = ∅`.
pub fn pair_id(i: usize, x: BitSet, tokens: &[String]) -> String {
    let inner: Vec<&str> = x.iter().map(|t| tokens[t].as_str()).collect();
    format!("({}|{})", inner.join(","), tokens[i])
}

/// `C(U)`: tokens are the members of `𝔉` in family order,
/// `Con_F = {{F}} ∪ P({G : G ⊆ Θ̄(F)})` and
/// `𝔛 ⊩_F G ⇔ ∃E ∈ 𝔛 ∪ {F}. G ⊆ Θ̄(E)`. The least (M) witness, if any, is
/// the designated truth element.
pub fn c_on_object(space: &CfSpace) -> Result<InformationFrame, CfError> {
    require_valid_space(space)?;
    let report = space.validate();
    if report.empty_family {
        return Err(CfError::EmptyFamily);
    }
    let below = space.below_all();
    if let Some(b) = below.iter().map(|b| b.len()).max() {
        cap("members below a member", b, C_BELOW_CAP)?;
    }
    let tokens = space
        .family()
        .iter()
        .map(|&f| member_id(f, space.universe()))
        .collect();
    let families = (0..below.len())
        .map(|p| {
            let mut sets: Vec<BitSet> = below[p].subsets().collect();
            sets.push(BitSet::singleton(p));
            crate::set::canonicalize(&mut sets);
            sets.into_iter()
                .map(|x| {
                    let c = x
                        .with(p)
                        .iter()
                        .fold(BitSet::EMPTY, |acc, e| acc.union(below[e]));
                    (x, c)
                })
                .collect()
        })
        .collect();
    let truth = report.m_witnesses.first().copied();
    Ok(InformationFrame::from_closures(tokens, families, truth)?)
}

/// The universe of `E(A)` in order: `(i, X)` for each token `i` and each
/// `X ∈ Con_i`, in consistency-family order.
pub fn e_pairs(frame: &InformationFrame) -> Vec<(usize, BitSet)> {
    (0..frame.len())
        .flat_map(|i| frame.con(i).iter().map(move |&x| (i, x)))
        .collect()
}

/// `E(A)`: `U = ⋃ Con_i × {i}`, `(X, i) Θ (Y, j) ⇔ Y ⊢_j {i} ∪ X`, and
/// `𝔉` the singletons of `U`. A member's family index equals its
/// universe index.
pub fn e_on_object(frame: &InformationFrame) -> Result<CfSpace, CfError> {
    require_valid_frame(frame)?;
    let pairs = e_pairs(frame);
    if pairs.len() > MAX_WIDTH {
        return Err(CfError::SizeExceeded {
            what: "universe of E(A)",
            size: pairs.len(),
            limit: MAX_WIDTH,
        });
    }
    let universe = pairs
        .iter()
        .map(|&(i, x)| pair_id(i, x, frame.tokens()))
        .collect();
    let theta = Relation::from_fn(pairs.len(), |u, v| {
        let (i, x) = pairs[u];
        let (j, y) = pairs[v];
        x.with(i).is_subset(frame.closure_or_empty(j, y))
    });
    let family = (0..pairs.len()).map(BitSet::singleton).collect();
    Ok(CfSpace::from_parts(
        GaSpace::from_relation(universe, theta)?,
        family,
    )?)
}

/// `C(Δ) = H_Δ`: `𝔛 H_F G ⇔ ∃Z ∈ 𝔛 ∪ {F}. Z Δ G`, between frames that
/// must be `C` of the relation's source and target.
pub fn c_on_morphism_with(
    d: &CfRelation,
    source: Arc<InformationFrame>,
    target: Arc<InformationFrame>,
) -> ApproximableMapping {
    assert_eq!(source.len(), d.source.family().len());
    assert_eq!(target.len(), d.target.family().len());
    let rel = (0..source.len())
        .map(|p| {
            source
                .con(p)
                .iter()
                .map(|x| {
                    x.with(p)
                        .iter()
                        .fold(BitSet::EMPTY, |acc, z| acc.union(d.rows[z]))
                })
                .collect()
        })
        .collect();
    ApproximableMapping::from_images(source, target, rel)
}

pub fn c_on_morphism(d: &CfRelation) -> Result<ApproximableMapping, CfError> {
    let a = Arc::new(c_on_object(&d.source)?);
    let b = Arc::new(c_on_object(&d.target)?);
    Ok(c_on_morphism_with(d, a, b))
}

/// `E(H) = Δ_H`: `{(X, i)} Δ_H {(Y, j)} ⇔ X H_i ({j} ∪ Y)`, between spaces
/// that must be `E` of the mapping's source and target.
pub fn e_on_morphism_with(
    h: &ApproximableMapping,
    source: Arc<CfSpace>,
    target: Arc<CfSpace>,
) -> CfRelation {
    let sp = e_pairs(h.source());
    let tp = e_pairs(h.target());
    assert_eq!(sp.len(), source.family().len());
    assert_eq!(tp.len(), target.family().len());
    let rows = sp
        .iter()
        .map(|&(i, x)| {
            let img = h.image(i, x);
            tp.iter()
                .enumerate()
                .filter(|(_, &(j, y))| y.with(j).is_subset(img))
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    CfRelation::from_rows(source, target, rows)
}

pub fn e_on_morphism(h: &ApproximableMapping) -> Result<CfRelation, CfError> {
    let a = Arc::new(e_on_object(h.source())?);
    let b = Arc::new(e_on_object(h.target())?);
    Ok(e_on_morphism_with(h, a, b))
}

/// `δ_U`: `Υ : U → E(C(U))` and `Γ : E(C(U)) → U`.
#[derive(Debug, Clone)]
pub struct Delta {
    pub space: Arc<CfSpace>,
    pub cu: Arc<InformationFrame>,
    pub ecu: Arc<CfSpace>,
    pub upsilon: CfRelation,
    pub gamma: CfRelation,
}

pub fn delta(space: &Arc<CfSpace>) -> Result<Delta, CfError> {
    cap("universe", space.len(), DELTA_UNIVERSE_CAP)?;
    cap("family", space.family().len(), DELTA_FAMILY_CAP)?;
    let cu = Arc::new(c_on_object(space)?);
    let ecu = Arc::new(e_on_object(&cu)?);
    let below = space.below_all();
    let pairs = e_pairs(&cu);
    // F Υ {(𝔜, G)} ⇔ ∀K ∈ {G} ∪ 𝔜. K ⊆ Θ̄(F)
    let up_rows = below
        .iter()
        .map(|&b| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(g, y))| y.with(g).is_subset(b))
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    // {(𝔛, F)} Γ G ⇔ ∃K ∈ {F} ∪ 𝔛. G ⊆ Θ̄(K)
    let gamma_rows = pairs
        .iter()
        .map(|&(f, x)| {
            x.with(f)
                .iter()
                .fold(BitSet::EMPTY, |acc, k| acc.union(below[k]))
        })
        .collect();
    Ok(Delta {
        upsilon: CfRelation::from_rows(space.clone(), ecu.clone(), up_rows),
        gamma: CfRelation::from_rows(ecu.clone(), space.clone(), gamma_rows),
        space: space.clone(),
        cu,
        ecu,
    })
}

impl Delta {
    /// Names of the failed checks: validity of both directions, both
    /// roundtrips, and agreement of `E(C(U))`'s relation with the explicit
    /// formula `∀K ∈ {F} ∪ 𝔛 ∃Z ∈ {G} ∪ 𝔜. K ⊆ Θ̄(Z)`.
    pub fn roundtrip_failures(&self) -> Result<Vec<&'static str>, CfError> {
        let mut out = Vec::new();
        if !self.upsilon.is_valid() {
            out.push("upsilon valid");
        }
        if !self.gamma.is_valid() {
            out.push("gamma valid");
        }
        if self.upsilon.then(&self.gamma)? != CfRelation::identity(self.space.clone()) {
            out.push("upsilon then gamma");
        }
        if self.gamma.then(&self.upsilon)? != CfRelation::identity(self.ecu.clone()) {
            out.push("gamma then upsilon");
        }
        if self.explicit_theta() != *self.ecu.base().theta() {
            out.push("theta formula");
        }
        Ok(out)
    }

    fn explicit_theta(&self) -> Relation {
        let fam = self.space.family();
        let pairs = e_pairs(&self.cu);
        Relation::from_fn(pairs.len(), |u, v| {
            let (f, x) = pairs[u];
            let (g, y) = pairs[v];
            x.with(f).iter().all(|k| {
                y.with(g)
                    .iter()
                    .any(|z| fam[k].is_subset(self.space.upper(fam[z])))
            })
        })
    }
}

/// `E(C(Δ))` through the functors, checked against the explicit formula
/// `∀K ∈ 𝔜 ∪ {G} ∃L ∈ 𝔛 ∪ {F}. L Δ K`.
pub fn ec_on_morphism(d: &CfRelation, a: &Delta, b: &Delta) -> Result<CfRelation, CfError> {
    let cd = c_on_morphism_with(d, a.cu.clone(), b.cu.clone());
    let ecd = e_on_morphism_with(&cd, a.ecu.clone(), b.ecu.clone());
    let sp = e_pairs(&a.cu);
    let tp = e_pairs(&b.cu);
    let explicit: Vec<BitSet> = sp
        .iter()
        .map(|&(f, x)| {
            let reach = x
                .with(f)
                .iter()
                .fold(BitSet::EMPTY, |acc, l| acc.union(d.rows[l]));
            tp.iter()
                .enumerate()
                .filter(|(_, &(g, y))| y.with(g).is_subset(reach))
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    if explicit != ecd.rows {
        return Err(CfError::NotValid(
            "E(C(Δ)) disagrees with its explicit formula".into(),
        ));
    }
    Ok(ecd)
}

/// Naturality of `δ` at `Δ : U → U′`: `Υ_U ∘ E(C(Δ)) = Δ ∘ Υ_{U′}`.
pub fn delta_naturality(d: &CfRelation, a: &Delta, b: &Delta) -> Result<bool, CfError> {
    let ecd = ec_on_morphism(d, a, b)?;
    let left = a.upsilon.then(&ecd)?;
    let right = d.then(&b.upsilon)?;
    Ok(left == right)
}

/// `γ_A`: `Q : A → C(E(A))` and `P : C(E(A)) → A`.
#[derive(Debug, Clone)]
pub struct Gamma {
    pub frame: Arc<InformationFrame>,
    pub ea: Arc<CfSpace>,
    pub cea: Arc<InformationFrame>,
    pub pair: FrameIsoPair,
}

pub fn gamma(frame: &Arc<InformationFrame>) -> Result<Gamma, CfError> {
    cap("token count", frame.len(), GAMMA_TOKEN_CAP)?;
    let widest = (0..frame.len())
        .map(|i| frame.con(i).len())
        .max()
        .unwrap_or(0);
    cap("consistency family", widest, GAMMA_CON_CAP)?;
    let ea = Arc::new(e_on_object(frame)?);
    let cea = Arc::new(c_on_object(&ea)?);
    let pairs = e_pairs(frame);
    // X Q_i {(Y, j)} ⇔ X ⊢_i {j} ∪ Y
    let q = (0..frame.len())
        .map(|i| {
            frame
                .closures(i)
                .iter()
                .map(|&c| {
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(_, &(j, y))| y.with(j).is_subset(c))
                        .map(|(v, _)| v)
                        .collect()
                })
                .collect()
        })
        .collect();
    // 𝔛 P_{(X, i)} a ⇔ ∃(Z, c) ∈ 𝔛 ∪ {(X, i)}. Z ⊢_c a
    let p = (0..cea.len())
        .map(|u| {
            cea.con(u)
                .iter()
                .map(|xs| {
                    xs.with(u).iter().fold(BitSet::EMPTY, |acc, v| {
                        let (c, z) = pairs[v];
                        acc.union(frame.closure_or_empty(c, z))
                    })
                })
                .collect()
        })
        .collect();
    Ok(Gamma {
        pair: FrameIsoPair {
            forward: ApproximableMapping::from_images(frame.clone(), cea.clone(), q),
            backward: ApproximableMapping::from_images(cea.clone(), frame.clone(), p),
        },
        frame: frame.clone(),
        ea,
        cea,
    })
}

impl Gamma {
    /// Validity and truth respect of both directions, and both roundtrips.
    pub fn roundtrip_failures(&self) -> Result<Vec<&'static str>, CfError> {
        let mut out = Vec::new();
        for (name, h) in [("Q", &self.pair.forward), ("P", &self.pair.backward)] {
            let r = h.validate();
            if !r.valid() {
                out.push(if name == "Q" { "Q valid" } else { "P valid" });
            }
            if r.respects_truth == Some(false) {
                out.push(if name == "Q" { "Q truth" } else { "P truth" });
            }
        }
        out.extend(self.pair.roundtrip_failures()?);
        Ok(out)
    }
}

/// `C(E(H))` through the functors, checked against the explicit formula
/// `𝔛 H̃_{(X, a)} {(Y, b)} ⇔ ∃(Z, d) ∈ {(X, a)} ∪ 𝔛. Z H_d ({b} ∪ Y)`.
pub fn ce_on_morphism(
    h: &ApproximableMapping,
    a: &Gamma,
    b: &Gamma,
) -> Result<ApproximableMapping, CfError> {
    let eh = e_on_morphism_with(h, a.ea.clone(), b.ea.clone());
    let ceh = c_on_morphism_with(&eh, a.cea.clone(), b.cea.clone());
    let sp = e_pairs(&a.frame);
    let tp = e_pairs(&b.frame);
    for u in 0..a.cea.len() {
        for (k, &xs) in a.cea.con(u).iter().enumerate() {
            let expect: BitSet = tp
                .iter()
                .enumerate()
                .filter(|(_, &(bj, y))| {
                    xs.with(u).iter().any(|v| {
                        let (d, z) = sp[v];
                        y.with(bj).is_subset(h.image(d, z))
                    })
                })
                .map(|(v, _)| v)
                .collect();
            if ceh.images(u)[k] != expect {
                return Err(CfError::NotValid(
                    "C(E(H)) disagrees with its explicit formula".into(),
                ));
            }
        }
    }
    Ok(ceh)
}

/// Naturality of `γ` at `H : A → A′`: `Q_A ∘ C(E(H)) = H ∘ Q_{A′}`.
pub fn gamma_naturality(h: &ApproximableMapping, a: &Gamma, b: &Gamma) -> Result<bool, CfError> {
    let ceh = ce_on_morphism(h, a, b)?;
    let left = a.pair.forward.then(&ceh)?;
    let right = h.then(&b.pair.forward)?;
    Ok(left == right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn unit() -> Arc<CfSpace> {
        Arc::new(fixtures::u_unit())
    }

    #[test]
    fn identity_on_unit() {
        let id = CfRelation::identity(unit());
        assert_eq!(id.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
        assert!(id.is_valid());
    }

    #[test]
    fn empty_relation_violates_existence() {
        let u = unit();
        let d = CfRelation::new(u.clone(), u, &[]).unwrap();
        let v = d.validate();
        assert_eq!(v.violation(EXISTENCE).unwrap().get("F"), Some("{u}"));
    }

    #[test]
    fn c_of_fixtures() {
        let f = c_on_object(&fixtures::u_unit()).unwrap();
        assert_eq!(f.tokens(), ["[u]"]);
        let p = f.classify().unwrap();
        assert!(p.algebraic && p.strong);
        assert_eq!(f.truth(), Some(0));
        let f = c_on_object(&fixtures::u_empty_f()).unwrap();
        assert_eq!(f.tokens(), ["[]"]);
        let p = f.classify().unwrap();
        assert!(p.strong);
        assert_eq!(f.truth(), Some(0));
    }

    #[test]
    fn c_of_empty_family_is_rejected() {
        let u = CfSpace::new(vec!["u".into()], &[(0, 0)], vec![]).unwrap();
        assert_eq!(c_on_object(&u), Err(CfError::EmptyFamily));
    }

    #[test]
    fn e_of_unit_frame() {
        let e = e_on_object(&fixtures::f_unit()).unwrap();
        assert_eq!(e.universe(), ["(|t)", "(t|t)"]);
        assert_eq!(e.base().theta().pair_count(), 4);
        let r = e.validate();
        assert!(r.valid() && r.topological && r.has_m());
        assert_eq!(r.m_witnesses[0], 0);
    }

    #[test]
    fn functors_on_identities() {
        let u = unit();
        let cid = c_on_morphism(&CfRelation::identity(u.clone())).unwrap();
        let cu = Arc::new(c_on_object(&u).unwrap());
        assert_eq!(cid, ApproximableMapping::identity(cu));
        let f = Arc::new(fixtures::f_unit());
        let eid = e_on_morphism(&ApproximableMapping::identity(f.clone())).unwrap();
        assert!(eid.is_valid());
        assert_eq!(
            eid,
            CfRelation::identity(Arc::new(e_on_object(&f).unwrap()))
        );
    }

    #[test]
    fn delta_on_fixtures() {
        for u in [fixtures::u_unit(), fixtures::u_empty_f()] {
            let d = delta(&Arc::new(u)).unwrap();
            assert!(d.roundtrip_failures().unwrap().is_empty());
        }
    }

    #[test]
    fn gamma_on_fixtures() {
        for f in [fixtures::f_unit(), fixtures::f_chain2()] {
            let g = gamma(&Arc::new(f)).unwrap();
            assert!(g.roundtrip_failures().unwrap().is_empty());
        }
    }

    #[test]
    fn gamma_caps() {
        let f = Arc::new(fixtures::f_diamond());
        assert!(matches!(gamma(&f), Err(CfError::SizeExceeded { .. })));
    }
}
