//! Approximable mappings between frames, and the functors `D` and `F`
//! together with the natural isomorphisms `η = (S, T)` and `τ = (st, sp)`.
//!
//! Composition is written in diagrammatic order: `g.then(&h)` applies `g`
//! first, matching `X (G ∘ H)_i a ⇔ ∃e ∃V ∈ Con_e. X G_i ({e} ∪ V) ∧ V H_e a`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::frame::InformationFrame;
use crate::order::{FinitePoset, MonotoneMap, OrderError};
use crate::set::{position, BitSet, Relation};
use crate::states::{StateDomain, StateError};
use crate::witness::{compact_set, Candidate, Minimum, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error(
        "frames do not match: the target of the first mapping is not the source of the second"
    )]
    FrameMismatch,
    #[error("{set} is not consistent at `{token}`")]
    Untyped { token: String, set: String },
    #[error("unknown target token index {0}")]
    UnknownToken(usize),
    #[error("image {0} is not a state of the target frame")]
    ImageNotAState(String),
    #[error("function is not Scott continuous")]
    NotContinuous,
    #[error("roundtrip failed: {0}")]
    Roundtrip(String),
    #[error("derived lemma violated: {0}")]
    DerivedLemmaViolated(Violation),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

pub const TARGET_CUT: &str = "target-cut";
pub const MONOTONICITY: &str = "monotonicity";
pub const SOURCE_CUT: &str = "source-cut";
pub const TRANSFER: &str = "transfer";
pub const INTERPOLATION: &str = "interpolation";
pub const SPLIT_SOURCE: &str = "split-interpolation-source";
pub const SPLIT_TARGET: &str = "split-interpolation-target";
pub const STRENGTHENED_CUT: &str = "strengthened-cut";

/// `H = (H_i)`, stored as images: `rel[i][k] = { b : X H_i b }` for the
/// `k`-th consistent set `X` of token `i`.
#[derive(Debug, Clone)]
pub struct ApproximableMapping {
    source: Arc<InformationFrame>,
    target: Arc<InformationFrame>,
    rel: Vec<Vec<BitSet>>,
}

impl PartialEq for ApproximableMapping {
    fn eq(&self, other: &Self) -> bool {
        self.rel == other.rel
            && same_frame(&self.source, &other.source)
            && same_frame(&self.target, &other.target)
    }
}

impl Eq for ApproximableMapping {}

pub(crate) fn same_frame(a: &Arc<InformationFrame>, b: &Arc<InformationFrame>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingReport {
    pub violations: Vec<Violation>,
    /// `∅ H_t t′` for the designated truth elements, when both exist.
    pub respects_truth: Option<bool>,
}

impl MappingReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, condition: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.condition == condition)
    }
}

impl ApproximableMapping {
    /// From pairs `(X, b)` per source token; checks typing only.
    pub fn new(
        source: Arc<InformationFrame>,
        target: Arc<InformationFrame>,
        pairs: Vec<Vec<(BitSet, usize)>>,
    ) -> Result<Self, MappingError> {
        assert_eq!(pairs.len(), source.len());
        let mut rel: Vec<Vec<BitSet>> = (0..source.len())
            .map(|i| vec![BitSet::EMPTY; source.con(i).len()])
            .collect();
        for (i, ps) in pairs.into_iter().enumerate() {
            for (x, b) in ps {
                if b >= target.len() {
                    return Err(MappingError::UnknownToken(b));
                }
                let k = source
                    .con_index(i, x)
                    .ok_or_else(|| MappingError::Untyped {
                        token: source.token(i).to_string(),
                        set: compact_set(x, source.tokens()),
                    })?;
                rel[i][k] = rel[i][k].with(b);
            }
        }
        Ok(ApproximableMapping {
            source,
            target,
            rel,
        })
    }

    /// From images aligned with the consistency families of the source.
    pub fn from_images(
        source: Arc<InformationFrame>,
        target: Arc<InformationFrame>,
        rel: Vec<Vec<BitSet>>,
    ) -> Self {
        assert_eq!(rel.len(), source.len());
        for (i, r) in rel.iter().enumerate() {
            assert_eq!(r.len(), source.con(i).len());
            assert!(r.iter().all(|b| b.is_subset(target.all())));
        }
        ApproximableMapping {
            source,
            target,
            rel,
        }
    }

    /// `Id_A = (⊢_i)`.
    pub fn identity(frame: Arc<InformationFrame>) -> Self {
        let rel = (0..frame.len())
            .map(|i| frame.closures(i).to_vec())
            .collect();
        ApproximableMapping {
            source: frame.clone(),
            target: frame,
            rel,
        }
    }

    pub fn source(&self) -> &Arc<InformationFrame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<InformationFrame> {
        &self.target
    }

    pub fn images(&self, i: usize) -> &[BitSet] {
        &self.rel[i]
    }

    /// `h_i(X) = { b : X H_i b }`; empty for `X ∉ Con_i`.
    pub fn image(&self, i: usize, x: BitSet) -> BitSet {
        self.source
            .con_index(i, x)
            .map_or(BitSet::EMPTY, |k| self.rel[i][k])
    }

    pub fn relates(&self, i: usize, x: BitSet, b: usize) -> bool {
        self.image(i, x).contains(b)
    }

    pub fn pair_count(&self) -> usize {
        self.rel.iter().flatten().map(|b| b.len()).sum()
    }

    /// All `(i, X, b)` triples.
    pub fn triples(&self) -> impl Iterator<Item = (usize, BitSet, usize)> + '_ {
        (0..self.source.len()).flat_map(move |i| {
            self.source
                .con(i)
                .iter()
                .zip(&self.rel[i])
                .flat_map(move |(&x, m)| m.iter().map(move |b| (i, x, b)))
        })
    }

    fn family(&self, i: usize) -> impl Iterator<Item = (BitSet, BitSet, BitSet)> + '_ {
        self.source
            .family(i)
            .zip(self.rel[i].iter().copied())
            .map(|((x, c), m)| (x, c, m))
    }

    /// `G ∘ H`, `self` first.
    pub fn then(&self, next: &ApproximableMapping) -> Result<Self, MappingError> {
        if !same_frame(&self.target, &next.source) {
            return Err(MappingError::FrameMismatch);
        }
        let mid = &next.source;
        let mut memo: HashMap<BitSet, BitSet> = HashMap::new();
        let rel = self
            .rel
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&n| {
                        *memo.entry(n).or_insert_with(|| {
                            n.iter().fold(BitSet::EMPTY, |acc, e| {
                                mid.con(e)
                                    .iter()
                                    .zip(&next.rel[e])
                                    .filter(|(v, _)| v.is_subset(n))
                                    .fold(acc, |acc, (_, &h)| acc.union(h))
                            })
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(ApproximableMapping {
            source: self.source.clone(),
            target: next.target.clone(),
            rel,
        })
    }

    /// Conditions (a) through (e), plus the truth flag.
    pub fn validate(&self) -> MappingReport {
        MappingChecker::new(self).run()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid()
    }

    /// `∅ H_t t′` for the designated truth elements of both frames.
    pub fn respects_truth(&self) -> Option<bool> {
        let t = self.source.truth()?;
        let t2 = self.target.truth()?;
        Some(self.relates(t, BitSet::EMPTY, t2))
    }

    /// Split interpolation (both halves) and the strengthened cut.
    pub fn derived_lemma_violations(&self) -> Vec<Violation> {
        let (a, b) = (&self.source, &self.target);
        let names = [a.tokens(), b.tokens()];
        let mut out = Vec::new();
        let mut src = Minimum::default();
        let mut tgt = Minimum::default();
        let mut cut = Minimum::default();
        for i in 0..a.len() {
            for (x, c, m) in self.family(i) {
                // X H_i F ⇒ ∃c ∃U. X ⊢_i {c} ∪ U ∧ U H_c F, decided at F = h_i(X)
                let source_ok = |f: BitSet| {
                    c.iter().any(|k| {
                        self.family(k)
                            .any(|(u, _, hu)| u.is_subset(c) && f.is_subset(hu))
                    })
                };
                if !source_ok(m) {
                    let f = smallest(m, |f| !source_ok(f));
                    src.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .set("X", 0, x)
                            .set("F", 1, f),
                    );
                }
                // X H_i F ⇒ ∃e ∃V. X H_i {e} ∪ V ∧ V ⊢′_e F
                let target_ok = |f: BitSet| {
                    m.iter()
                        .any(|e| b.family(e).any(|(v, cv)| v.is_subset(m) && f.is_subset(cv)))
                };
                if !target_ok(m) {
                    let f = smallest(m, |f| !target_ok(f));
                    tgt.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .set("X", 0, x)
                            .set("F", 1, f),
                    );
                }
                // X ⊢_i ({j} ∪ Y) ∧ Y H_j b ⇒ X H_i b
                for j in c.iter() {
                    for (y, _, hy) in self.family(j) {
                        if y.is_subset(c) {
                            if let Some(bad) = hy.difference(m).first() {
                                cut.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .token("j", 0, j)
                                        .set("Y", 0, y)
                                        .token("b", 1, bad),
                                );
                            }
                        }
                    }
                }
            }
        }
        for (name, min) in [
            (SPLIT_SOURCE, src),
            (SPLIT_TARGET, tgt),
            (STRENGTHENED_CUT, cut),
        ] {
            if let Some(c) = min.into_inner() {
                out.push(c.render(name, &names));
            }
        }
        out
    }

    pub fn check_derived_lemmas(&self) -> Result<(), MappingError> {
        match self.derived_lemma_violations().into_iter().next() {
            Some(v) => Err(MappingError::DerivedLemmaViolated(v)),
            None => Ok(()),
        }
    }
}

/// The least subset of `m` (canonical order) satisfying `fails`.
fn smallest(m: BitSet, fails: impl Fn(BitSet) -> bool) -> BitSet {
    m.subsets_canonical()
        .into_iter()
        .find(|&f| fails(f))
        .expect("the largest set fails")
}

struct MappingChecker<'a> {
    h: &'a ApproximableMapping,
    out: Vec<Violation>,
}

impl<'a> MappingChecker<'a> {
    fn new(h: &'a ApproximableMapping) -> Self {
        MappingChecker { h, out: Vec::new() }
    }

    fn report(&mut self, condition: &'static str, min: Minimum) -> bool {
        let names = [self.h.source.tokens(), self.h.target.tokens()];
        match min.into_inner() {
            Some(c) => {
                self.out.push(c.render(condition, &names));
                false
            }
            None => true,
        }
    }

    fn run(mut self) -> MappingReport {
        self.target_cut();
        let monotone = self.monotonicity();
        self.source_cut(monotone);
        self.transfer();
        self.interpolation();
        MappingReport {
            violations: self.out,
            respects_truth: self.h.respects_truth(),
        }
    }

    /// (a) `X H_i ({k} ∪ Y) ∧ Y ⊢′_k b ⇒ X H_i b`: the image is closed in
    /// the target frame.
    fn target_cut(&mut self) {
        let (h, b) = (self.h, &*self.h.target);
        let mut memo: HashMap<BitSet, bool> = HashMap::new();
        let closed = |m: BitSet| {
            m.iter().all(|k| {
                b.family(k)
                    .all(|(y, cy)| !y.is_subset(m) || cy.is_subset(m))
            })
        };
        let mut min = Minimum::default();
        for i in 0..h.source.len() {
            for (x, _, m) in h.family(i) {
                if *memo.entry(m).or_insert_with(|| closed(m)) {
                    continue;
                }
                for k in m.iter() {
                    for (y, cy) in b.family(k) {
                        if y.is_subset(m) {
                            if let Some(bad) = cy.difference(m).first() {
                                min.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .token("k", 1, k)
                                        .set("Y", 1, y)
                                        .token("b", 1, bad),
                                );
                            }
                        }
                    }
                }
            }
        }
        self.report(TARGET_CUT, min);
    }

    /// (b) `X ⊆ X′ ∧ X H_i b ⇒ X′ H_i b`. The source frame's consistency
    /// families are downward closed, so one-element extensions decide.
    fn monotonicity(&mut self) -> bool {
        let (h, a) = (self.h, &*self.h.source);
        let broken = (0..a.len()).any(|i| {
            h.family(i).any(|(x, _, m)| {
                a.all().difference(x).iter().any(|t| {
                    a.con_index(i, x.with(t))
                        .is_some_and(|k| !m.is_subset(h.rel[i][k]))
                })
            })
        });
        let mut min = Minimum::default();
        if broken {
            for i in 0..a.len() {
                for (x, _, m) in h.family(i) {
                    for (x2, _, m2) in h.family(i) {
                        if x.is_subset(x2) {
                            if let Some(bad) = m.difference(m2).first() {
                                min.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .set("X'", 0, x2)
                                        .token("b", 1, bad),
                                );
                            }
                        }
                    }
                }
            }
        }
        self.report(MONOTONICITY, min)
    }

    /// (c) `X ⊢_i X′ ∧ X′ H_i b ⇒ X H_i b`. Given monotonicity and a sound
    /// source, `X′ = [X]_i` decides.
    fn source_cut(&mut self, monotone: bool) {
        let (h, a) = (self.h, &*self.h.source);
        let broken = !monotone
            || (0..a.len()).any(|i| {
                h.family(i).any(|(_, c, m)| match a.con_index(i, c) {
                    Some(k) => !h.rel[i][k].is_subset(m),
                    None => true,
                })
            });
        let mut min = Minimum::default();
        if broken {
            for i in 0..a.len() {
                for (x, c, m) in h.family(i) {
                    for (x2, _, m2) in h.family(i) {
                        if x2.is_subset(c) {
                            if let Some(bad) = m2.difference(m).first() {
                                min.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .set("X'", 0, x2)
                                        .token("b", 1, bad),
                                );
                            }
                        }
                    }
                }
            }
        }
        self.report(SOURCE_CUT, min);
    }

    /// (d) `i R j ∧ X H_i b ⇒ X H_j b`.
    fn transfer(&mut self) {
        let (h, a) = (self.h, &*self.h.source);
        let mut min = Minimum::default();
        for (i, j) in a.accessibility().pairs() {
            for (x, _, m) in h.family(i) {
                if let Some(bad) = m.difference(h.image(j, x)).first() {
                    min.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .token("j", 0, j)
                            .set("X", 0, x)
                            .token("b", 1, bad),
                    );
                }
            }
        }
        self.report(TRANSFER, min);
    }

    /// (e) `X H_i F ⇒ ∃c ∃e ∃U ∃V. X ⊢_i ({c} ∪ U) ∧ U H_c ({e} ∪ V) ∧
    /// V ⊢′_e F`. Monotone in `F`, so `F = h_i(X)` decides; the search
    /// depends only on `([X]_i, h_i(X))`.
    fn interpolation(&mut self) {
        let (h, a, b) = (self.h, &*self.h.source, &*self.h.target);
        // For a target set n: closures [V]′_e with {e} ∪ V ⊆ n.
        let mut reach: HashMap<BitSet, Vec<BitSet>> = HashMap::new();
        let mut reach_of = |n: BitSet| -> Vec<BitSet> {
            reach
                .entry(n)
                .or_insert_with(|| {
                    n.iter()
                        .flat_map(|e| {
                            b.family(e)
                                .filter(|(v, _)| v.is_subset(n))
                                .map(|(_, cv)| cv)
                                .collect::<Vec<_>>()
                        })
                        .collect()
                })
                .clone()
        };
        let mut memo: HashMap<(BitSet, BitSet), bool> = HashMap::new();
        let mut min = Minimum::default();
        for i in 0..a.len() {
            for (x, c, m) in h.family(i) {
                let middles: Vec<BitSet> = c
                    .iter()
                    .flat_map(|k| {
                        h.family(k)
                            .filter(|(u, _, _)| u.is_subset(c))
                            .map(|(_, _, hu)| hu)
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let reaches: Vec<Vec<BitSet>> = middles.iter().map(|&n| reach_of(n)).collect();
                let holds = |f: BitSet| reaches.iter().flatten().any(|cv| f.is_subset(*cv));
                let ok = *memo.entry((c, m)).or_insert_with(|| holds(m));
                if !ok {
                    let f = smallest(m, |f| !holds(f));
                    min.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .set("X", 0, x)
                            .set("F", 1, f),
                    );
                }
            }
        }
        self.report(INTERPOLATION, min);
    }
}

/// `D(H)`: the Scott-continuous function between the state domains,
/// `x ↦ { a : ∃i ∃X ∈ Con_i. {i} ∪ X ⊆ x ∧ X H_i a }`.
pub fn d_on_morphism(
    h: &ApproximableMapping,
    source: &StateDomain,
    target: &StateDomain,
) -> Result<MonotoneMap, MappingError> {
    assert!(same_frame(source.frame(), &h.source) && same_frame(target.frame(), &h.target));
    let mut graph = Vec::with_capacity(source.len());
    for &x in source.states() {
        let img = apply_to_state(h, x);
        let k = target
            .index_of(img)
            .ok_or_else(|| MappingError::ImageNotAState(compact_set(img, h.target.tokens())))?;
        graph.push(k);
    }
    let map = MonotoneMap::new(source.poset().clone(), target.poset().clone(), graph)?;
    if !map.is_scott_continuous()? {
        return Err(MappingError::NotContinuous);
    }
    Ok(map)
}

/// The set `D(H)(x)` for a token set `x`.
pub fn apply_to_state(h: &ApproximableMapping, x: BitSet) -> BitSet {
    x.iter().fold(BitSet::EMPTY, |acc, i| {
        h.family(i)
            .filter(|(s, _, _)| s.is_subset(x))
            .fold(acc, |acc, (_, _, m)| acc.union(m))
    })
}

/// `F(D)` with the given basis: tokens are the basis elements, in the
/// poset's order, with `CON_i = {{i}} ∪ P(↓↓_B i)` and
/// `X ⊨_i a ⇔ ∃b ∈ X ∪ {i}. a ≪ b`. The least element, when it exists, is
/// the designated truth element.
pub fn f_on_object(poset: &FinitePoset, basis: BitSet) -> Result<InformationFrame, MappingError> {
    poset.check_basis(basis)?;
    let wb = poset.way_below()?;
    let elems: Vec<usize> = basis.iter().collect();
    let tokens: Vec<String> = elems.iter().map(|&e| poset.id(e).to_string()).collect();
    // token index ↔ element
    let approx_tokens = |e: usize| -> BitSet {
        elems
            .iter()
            .enumerate()
            .filter(|&(_, &b)| wb.contains(b, e))
            .map(|(t, _)| t)
            .collect()
    };
    let mut families = Vec::with_capacity(elems.len());
    for (ti, &i) in elems.iter().enumerate() {
        let mut sets: Vec<BitSet> = approx_tokens(i).subsets().collect();
        sets.push(BitSet::singleton(ti));
        crate::set::canonicalize(&mut sets);
        let fam = sets
            .into_iter()
            .map(|x| {
                let c = x
                    .with(ti)
                    .iter()
                    .fold(BitSet::EMPTY, |acc, t| acc.union(approx_tokens(elems[t])));
                (x, c)
            })
            .collect();
        families.push(fam);
    }
    let truth = poset
        .bottom()
        .and_then(|b| elems.iter().position(|&e| e == b));
    Ok(InformationFrame::from_closures(tokens, families, truth).expect("F(D) is well typed"))
}

/// `F(f)` for a continuous `f` between posets taken with full bases:
/// `X F(f)_i a ⇔ ∃c ∈ X ∪ {i}. a ≪′ f(c)`.
pub fn f_on_morphism(
    f: &MonotoneMap,
    source: Arc<InformationFrame>,
    target: Arc<InformationFrame>,
) -> Result<ApproximableMapping, MappingError> {
    if !f.is_scott_continuous()? {
        return Err(MappingError::NotContinuous);
    }
    assert_eq!(source.len(), f.source().len());
    assert_eq!(target.len(), f.target().len());
    let wb = f.target().way_below()?;
    let rel = (0..source.len())
        .map(|i| {
            source
                .con(i)
                .iter()
                .map(|&x| {
                    x.with(i)
                        .iter()
                        .fold(BitSet::EMPTY, |acc, c| acc.union(wb.column(f.apply(c))))
                })
                .collect()
        })
        .collect();
    Ok(ApproximableMapping::from_images(source, target, rel))
}

/// A pair of mutually inverse morphisms.
#[derive(Debug, Clone)]
pub struct FrameIsoPair {
    pub forward: ApproximableMapping,
    pub backward: ApproximableMapping,
}

impl FrameIsoPair {
    /// Both composites against the identities; returns the failing side.
    pub fn roundtrip_failures(&self) -> Result<Vec<&'static str>, MappingError> {
        let mut out = Vec::new();
        let fb = self.forward.then(&self.backward)?;
        if fb != ApproximableMapping::identity(self.forward.source.clone()) {
            out.push("forward then backward");
        }
        let bf = self.backward.then(&self.forward)?;
        if bf != ApproximableMapping::identity(self.backward.source.clone()) {
            out.push("backward then forward");
        }
        Ok(out)
    }
}

/// `η_A`: `S_A : A → F(D(A))` and `T_A : F(D(A)) → A`.
#[derive(Debug, Clone)]
pub struct Eta {
    pub domain: StateDomain,
    /// `F(D(A))`, whose tokens are the states of `A`.
    pub fda: Arc<InformationFrame>,
    pub pair: FrameIsoPair,
}

/// `F(D(A))` for a state domain.
pub fn fd_of(domain: &StateDomain) -> Result<Arc<InformationFrame>, MappingError> {
    let p = domain.poset();
    Ok(Arc::new(f_on_object(p, p.all())?))
}

pub fn eta(frame: &Arc<InformationFrame>) -> Result<Eta, MappingError> {
    let domain = StateDomain::new(frame.clone())?;
    eta_with(frame, domain)
}

pub fn eta_with(frame: &Arc<InformationFrame>, domain: StateDomain) -> Result<Eta, MappingError> {
    let fda = fd_of(&domain)?;
    let wb = domain.poset().way_below()?;
    // X S_i u ⇔ u ≪ [X]_i
    let s_rel = (0..frame.len())
        .map(|i| {
            frame
                .closures(i)
                .iter()
                .map(|&c| {
                    let k = domain.index_of(c).expect("principal sets are states");
                    wb.column(k)
                })
                .collect()
        })
        .collect();
    // 𝔛 T_u a ⇔ ∃v. 𝔛 ⊨_u v ∧ a ∈ v
    let states = domain.states();
    let t_rel = (0..fda.len())
        .map(|u| {
            fda.closures(u)
                .iter()
                .map(|&vs| vs.iter().fold(BitSet::EMPTY, |acc, v| acc.union(states[v])))
                .collect()
        })
        .collect();
    let s = ApproximableMapping::from_images(frame.clone(), fda.clone(), s_rel);
    let t = ApproximableMapping::from_images(fda.clone(), frame.clone(), t_rel);
    Ok(Eta {
        domain,
        fda,
        pair: FrameIsoPair {
            forward: s,
            backward: t,
        },
    })
}

/// `F(D(H)) : F(D(A)) → F(D(A′))` built from two `η` components.
pub fn fd_on_morphism(
    h: &ApproximableMapping,
    a: &Eta,
    b: &Eta,
) -> Result<ApproximableMapping, MappingError> {
    let dh = d_on_morphism(h, &a.domain, &b.domain)?;
    f_on_morphism(&dh, a.fda.clone(), b.fda.clone())
}

/// Naturality of `η` at `H : A → A′`: `S_A ∘ F(D(H)) = H ∘ S_{A′}`.
pub fn eta_naturality(h: &ApproximableMapping, a: &Eta, b: &Eta) -> Result<bool, MappingError> {
    let fdh = fd_on_morphism(h, a, b)?;
    let left = a.pair.forward.then(&fdh)?;
    let right = h.then(&b.pair.forward)?;
    Ok(left == right)
}

/// `τ_D`: `st : D → D(F(D))` and `sp : D(F(D)) → D`.
#[derive(Debug, Clone)]
pub struct Tau {
    pub fd: Arc<InformationFrame>,
    pub domain: StateDomain,
    pub st: MonotoneMap,
    pub sp: MonotoneMap,
}

pub fn tau(poset: &Arc<FinitePoset>) -> Result<Tau, MappingError> {
    let fd = Arc::new(f_on_object(poset, poset.all())?);
    let domain = StateDomain::new(fd.clone())?;
    let wb = poset.way_below()?;
    let mut st_graph = Vec::with_capacity(poset.len());
    for x in 0..poset.len() {
        let approximants = wb.column(x);
        let k = domain
            .index_of(approximants)
            .ok_or_else(|| MappingError::ImageNotAState(compact_set(approximants, fd.tokens())))?;
        st_graph.push(k);
    }
    let mut sp_graph = Vec::with_capacity(domain.len());
    for &s in domain.states() {
        if !poset.is_directed(s) {
            return Err(MappingError::Roundtrip(format!(
                "state {} is not directed",
                compact_set(s, fd.tokens())
            )));
        }
        let lub = poset.lub(s).ok_or_else(|| {
            MappingError::Roundtrip(format!("state {} has no lub", compact_set(s, fd.tokens())))
        })?;
        sp_graph.push(lub);
    }
    let st = MonotoneMap::new(poset.clone(), domain.poset().clone(), st_graph)?;
    let sp = MonotoneMap::new(domain.poset().clone(), poset.clone(), sp_graph)?;
    Ok(Tau { fd, domain, st, sp })
}

impl Tau {
    /// `sp ∘ st = id` and `st ∘ sp = id`, both continuous.
    pub fn roundtrip_failures(&self) -> Result<Vec<&'static str>, MappingError> {
        let mut out = Vec::new();
        if !self.st.is_scott_continuous()? || !self.sp.is_scott_continuous()? {
            out.push("st or sp not continuous");
        }
        if self.st.then(&self.sp) != MonotoneMap::identity(self.st.source().clone()) {
            out.push("sp(st(x)) != x");
        }
        if self.sp.then(&self.st) != MonotoneMap::identity(self.sp.source().clone()) {
            out.push("st(sp(x)) != x");
        }
        Ok(out)
    }
}

/// Naturality of `τ` at `f : D → D′`: `D(F(f))(st x) = st′(f x)` for all
/// `x`, and `D(F(f))` agrees with `{ a : ∃i ≪ x. a ≪′ f(i) }`.
pub fn tau_naturality(f: &MonotoneMap, a: &Tau, b: &Tau) -> Result<bool, MappingError> {
    let ff = f_on_morphism(f, a.fd.clone(), b.fd.clone())?;
    let dff = d_on_morphism(&ff, &a.domain, &b.domain)?;
    let wb = f.source().way_below()?;
    let wb2 = f.target().way_below()?;
    for x in 0..f.source().len() {
        let left = dff.apply(a.st.apply(x));
        let right = b.st.apply(f.apply(x));
        if left != right {
            return Ok(false);
        }
        let formula = wb
            .column(x)
            .iter()
            .fold(BitSet::EMPTY, |acc, i| acc.union(wb2.column(f.apply(i))));
        if b.domain.states()[left] != formula {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relation view of a mapping, used for display and tests: pairs
/// `((i, X), b)`.
pub fn as_pairs(h: &ApproximableMapping) -> Vec<(usize, BitSet, usize)> {
    h.triples().collect()
}

/// Position of `X` in `Con_i`, re-exported for callers building images.
pub fn con_position(frame: &InformationFrame, i: usize, x: BitSet) -> Option<usize> {
    position(frame.con(i), x)
}

/// The way-below relation of a state domain, convenience for callers.
pub fn state_way_below(domain: &StateDomain) -> Result<Relation, MappingError> {
    Ok(domain.poset().way_below()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_on_unit_frame() {
        let f = Arc::new(fixtures::f_unit());
        let id = ApproximableMapping::identity(f.clone());
        assert_eq!(
            as_pairs(&id),
            vec![(0, BitSet::EMPTY, 0), (0, BitSet::singleton(0), 0)]
        );
        let r = id.validate();
        assert!(r.valid(), "{:?}", r.violations);
        assert_eq!(id.then(&id).unwrap(), id);
        assert!(id.check_derived_lemmas().is_ok());
    }

    #[test]
    fn chain2_frame_shape() {
        let f = f_on_object(&FinitePoset::chain(2), BitSet::full(2)).unwrap();
        assert_eq!(f.con(0), &[BitSet::EMPTY, BitSet::singleton(0)]);
        assert_eq!(f.con(1).len(), 4);
        assert_eq!(f.closure(1, BitSet::singleton(0)), Some(BitSet::full(2)));
        assert_eq!(f.closure(1, BitSet::EMPTY), Some(BitSet::full(2)));
        assert_eq!(f.closure(0, BitSet::EMPTY), Some(BitSet::singleton(0)));
        let p = f.classify().unwrap();
        assert!(p.strong && p.algebraic);
        assert_eq!(p.truth_elements, BitSet::singleton(0));
        assert_eq!(f.truth(), Some(0));
    }

    #[test]
    fn one_point_poset_gives_unit_frame() {
        let f = f_on_object(&FinitePoset::chain(1), BitSet::full(1)).unwrap();
        let renamed = f.with_tokens(vec!["t".into()]).unwrap().with_truth(None);
        assert_eq!(renamed, fixtures::f_unit());
    }

    #[test]
    fn dropping_a_superset_pair_breaks_monotonicity() {
        let f = Arc::new(fixtures::f_unit());
        let h =
            ApproximableMapping::new(f.clone(), f.clone(), vec![vec![(BitSet::EMPTY, 0)]]).unwrap();
        let r = h.validate();
        let v = r.violation(MONOTONICITY).expect("monotonicity must fail");
        assert_eq!(v.get("X"), Some("{}"));
        assert_eq!(v.get("X'"), Some("{t}"));
        assert_eq!(v.get("b"), Some("t"));
    }

    #[test]
    fn swap_on_diamond() {
        let d = Arc::new(FinitePoset::diamond());
        let swap = MonotoneMap::new(d.clone(), d.clone(), vec![0, 2, 1, 3]).unwrap();
        let fd = Arc::new(f_on_object(&d, d.all()).unwrap());
        let h = f_on_morphism(&swap, fd.clone(), fd.clone()).unwrap();
        assert!(h.validate().valid());
        assert_eq!(h.validate().respects_truth, Some(true));
        assert!(h.check_derived_lemmas().is_ok());
        assert_eq!(
            h.then(&h).unwrap(),
            ApproximableMapping::identity(fd.clone())
        );
    }

    #[test]
    fn constant_bottom_map() {
        let d = Arc::new(FinitePoset::diamond());
        let c = MonotoneMap::constant(d.clone(), d.clone(), 0);
        let fd = Arc::new(f_on_object(&d, d.all()).unwrap());
        let h = f_on_morphism(&c, fd.clone(), fd).unwrap();
        assert!(h.validate().valid());
        assert!(h.triples().all(|(_, _, b)| b == 0));
    }

    #[test]
    fn eta_on_fixtures() {
        for f in [
            fixtures::f_unit(),
            fixtures::f_chain2(),
            fixtures::f_diamond(),
        ] {
            let f = Arc::new(f);
            let e = eta(&f).unwrap();
            assert!(e.pair.forward.validate().valid());
            assert!(e.pair.backward.validate().valid());
            assert!(e.pair.roundtrip_failures().unwrap().is_empty());
        }
    }

    #[test]
    fn tau_on_fixtures() {
        let c = Arc::new(FinitePoset::chain(2));
        let t = tau(&c).unwrap();
        assert_eq!(t.domain.states()[t.st.apply(1)], BitSet::full(2));
        assert!(t.roundtrip_failures().unwrap().is_empty());
        let d = Arc::new(FinitePoset::diamond());
        let t = tau(&d).unwrap();
        let swap = MonotoneMap::new(d.clone(), d.clone(), vec![0, 2, 1, 3]).unwrap();
        assert!(tau_naturality(&swap, &t, &t).unwrap());
    }

    #[test]
    fn d_of_swap_is_an_automorphism() {
        let d = Arc::new(FinitePoset::diamond());
        let fd = Arc::new(f_on_object(&d, d.all()).unwrap());
        let swap = MonotoneMap::new(d.clone(), d.clone(), vec![0, 2, 1, 3]).unwrap();
        let h = f_on_morphism(&swap, fd.clone(), fd.clone()).unwrap();
        let dom = StateDomain::new(fd).unwrap();
        let dh = d_on_morphism(&h, &dom, &dom).unwrap();
        assert_eq!(dom.len(), 4);
        let mut g = dh.graph().to_vec();
        assert_ne!(g, (0..4).collect::<Vec<_>>());
        g.sort();
        assert_eq!(g, vec![0, 1, 2, 3]);
    }
}
