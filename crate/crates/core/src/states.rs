//! States of a frame and the induced domain `D(A)`.

use std::sync::Arc;

use thiserror::Error;

use crate::frame::{FrameError, InformationFrame};
use crate::order::{FinitePoset, OrderError};
use crate::raised_cap;
use crate::set::{canonicalize, BitSet, Relation};
use crate::witness::compact_set;

/// Default bound on the number of tokens for brute-force state
/// enumeration.
pub const STATE_TOKEN_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("the frame has no states")]
    EmptyStateSpace,
    #[error("{size} tokens exceed the state enumeration limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("theorem violated: {0}")]
    TheoremViolated(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

fn check_cap(f: &InformationFrame) -> Result<(), StateError> {
    let limit = raised_cap(STATE_TOKEN_CAP);
    if f.len() > limit {
        Err(StateError::TooLarge {
            size: f.len(),
            limit,
        })
    } else {
        Ok(())
    }
}

/// Finite consistency: every `F ⊆ x` is consistent at some `i ∈ x`.
pub fn finitely_consistent(f: &InformationFrame, x: BitSet) -> bool {
    x.subsets().all(|g| x.iter().any(|i| f.is_consistent(i, g)))
}

/// Closure: `i ∈ x`, `X ⊆ x`, `X ⊢_i a` imply `a ∈ x`.
pub fn entailment_closed(f: &InformationFrame, x: BitSet) -> bool {
    x.iter()
        .all(|i| f.family(i).all(|(s, c)| !s.is_subset(x) || c.is_subset(x)))
}

/// Completeness: every `a ∈ x` is entailed at some `i ∈ x` from some
/// `X ⊆ x`.
pub fn complete(f: &InformationFrame, x: BitSet) -> bool {
    let derivable = x.iter().fold(BitSet::EMPTY, |acc, i| {
        f.family(i)
            .filter(|(s, _)| s.is_subset(x))
            .fold(acc, |acc, (_, c)| acc.union(c))
    });
    x.is_subset(derivable)
}

/// The three conditions of the definition of a state.
pub fn is_state(f: &InformationFrame, x: BitSet) -> bool {
    finitely_consistent(f, x) && entailment_closed(f, x) && complete(f, x)
}

/// The single condition that replaces finite consistency and
/// completeness: each `F ⊆ x` is entailed at some `i ∈ x` from some
/// `X ⊆ x`.
pub fn satisfies_st(f: &InformationFrame, x: BitSet) -> bool {
    let reachable: Vec<BitSet> = x
        .iter()
        .flat_map(|i| {
            f.family(i)
                .filter(move |(s, _)| s.is_subset(x))
                .map(|(_, c)| c)
        })
        .collect();
    x.subsets()
        .all(|g| reachable.iter().any(|c| g.is_subset(*c)))
}

/// States by the definition, sorted by size then lexicographically.
pub fn states_by_definition(f: &InformationFrame) -> Result<Vec<BitSet>, StateError> {
    check_cap(f)?;
    let mut out: Vec<BitSet> = f.all().subsets().filter(|&x| is_state(f, x)).collect();
    canonicalize(&mut out);
    Ok(out)
}

/// States via the combined condition plus closure.
pub fn states_by_st(f: &InformationFrame) -> Result<Vec<BitSet>, StateError> {
    check_cap(f)?;
    let mut out: Vec<BitSet> = f
        .all()
        .subsets()
        .filter(|&x| entailment_closed(f, x) && satisfies_st(f, x))
        .collect();
    canonicalize(&mut out);
    Ok(out)
}

/// All states. For valid frames both enumerations are run and must agree.
pub fn enumerate_states(f: &InformationFrame) -> Result<Vec<BitSet>, StateError> {
    let direct = states_by_definition(f)?;
    if f.is_valid() {
        let via_st = states_by_st(f)?;
        if direct != via_st {
            return Err(StateError::Inconsistent(format!(
                "state enumerations disagree: {} by definition, {} via the combined condition",
                direct.len(),
                via_st.len()
            )));
        }
    }
    Ok(direct)
}

/// `D(A)`: the states under inclusion.
#[derive(Debug, Clone)]
pub struct StateDomain {
    frame: Arc<InformationFrame>,
    states: Vec<BitSet>,
    poset: Arc<FinitePoset>,
    /// Indices of states of the form `[X]_i`.
    basis: BitSet,
    /// Least generator `(i, X)` per state, when it is principal.
    generators: Vec<Option<(usize, BitSet)>>,
}

/// Least `(i, X)` with `[X]_i = z`, ordered by `|X|`, then `i`, then `X`.
fn least_generator(f: &InformationFrame, z: BitSet) -> Option<(usize, BitSet)> {
    let mut best: Option<(usize, usize, BitSet)> = None;
    for i in 0..f.len() {
        for (x, c) in f.family(i) {
            if c == z {
                let cand = (x.len(), i, x);
                let better = match best {
                    None => true,
                    Some(b) => {
                        (cand.0, cand.1) < (b.0, b.1)
                            || ((cand.0, cand.1) == (b.0, b.1) && x.canonical_cmp(b.2).is_lt())
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
    }
    best.map(|(_, i, x)| (i, x))
}

/// Id of a state: `[t0,t1]_t2` for its least generator, or `x(t0,t1)`
/// listing its members when it has none.
pub fn state_id(f: &InformationFrame, z: BitSet, generator: Option<(usize, BitSet)>) -> String {
    match generator {
        Some((i, x)) => {
            let inner = compact_set(x, f.tokens());
            format!("[{}]_{}", &inner[1..inner.len() - 1], f.token(i))
        }
        None => {
            let inner = compact_set(z, f.tokens());
            format!("x({})", &inner[1..inner.len() - 1])
        }
    }
}

impl StateDomain {
    /// Builds `D(A)` and checks that it is directed-complete with lubs given
    /// by union and that every state is the directed union of the
    /// principal states below it.
    pub fn new(frame: Arc<InformationFrame>) -> Result<Self, StateError> {
        let dom = Self::build(frame)?;
        dom.check_structure()?;
        Ok(dom)
    }

    /// As [`StateDomain::new`] without the structural checks.
    pub fn build(frame: Arc<InformationFrame>) -> Result<Self, StateError> {
        let states = enumerate_states(&frame)?;
        if states.is_empty() {
            return Err(StateError::EmptyStateSpace);
        }
        let generators: Vec<_> = states.iter().map(|&z| least_generator(&frame, z)).collect();
        let ids = states
            .iter()
            .zip(&generators)
            .map(|(&z, &g)| state_id(&frame, z, g))
            .collect();
        let poset = FinitePoset::from_leq_fn(ids, |a, b| states[a].is_subset(states[b]))?;
        let basis = generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_some())
            .map(|(k, _)| k)
            .collect();
        Ok(StateDomain {
            frame,
            states,
            poset: Arc::new(poset),
            basis,
            generators,
        })
    }

    pub fn frame(&self) -> &Arc<InformationFrame> {
        &self.frame
    }

    pub fn states(&self) -> &[BitSet] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    /// Indices of the principal states `[X]_i`.
    pub fn canonical_basis(&self) -> BitSet {
        self.basis
    }

    pub fn generator(&self, k: usize) -> Option<(usize, BitSet)> {
        self.generators[k]
    }

    pub fn index_of(&self, state: BitSet) -> Option<usize> {
        crate::set::position(&self.states, state)
    }

    /// Index of `[X]_i`.
    pub fn principal_index(&self, i: usize, x: BitSet) -> Result<usize, StateError> {
        let z = self.frame.principal(i, x)?;
        self.index_of(z)
            .ok_or_else(|| StateError::Inconsistent(format!("[X]_i = {z:?} is not a state")))
    }

    fn check_structure(&self) -> Result<(), StateError> {
        let f = &self.frame;
        for i in 0..f.len() {
            for (x, z) in f.family(i) {
                if self.index_of(z).is_none() {
                    return Err(StateError::Inconsistent(format!(
                        "[{}]_{} is not a state",
                        compact_set(x, f.tokens()),
                        f.token(i)
                    )));
                }
            }
        }
        for &z in &self.states {
            let below: Vec<BitSet> = (0..f.len())
                .filter(|&i| z.contains(i))
                .flat_map(|i| {
                    f.family(i)
                        .filter(move |(x, _)| x.is_subset(z))
                        .map(|(_, c)| c)
                })
                .collect();
            let union = below.iter().fold(BitSet::EMPTY, |a, &c| a.union(c));
            if union != z {
                return Err(StateError::Inconsistent(format!(
                    "state {z:?} is not the union of its principal substates"
                )));
            }
            let directed = below.iter().all(|&a| {
                below
                    .iter()
                    .all(|&b| below.iter().any(|&c| a.union(b).is_subset(c)))
            });
            if !directed {
                return Err(StateError::Inconsistent(format!(
                    "principal substates of {z:?} are not directed"
                )));
            }
        }
        for d in self.poset.directed_subsets()? {
            let union = d.iter().fold(BitSet::EMPTY, |a, k| a.union(self.states[k]));
            let Some(k) = self.index_of(union) else {
                return Err(StateError::Inconsistent(format!(
                    "union {union:?} of a directed family is not a state"
                )));
            };
            if self.poset.lub(d) != Some(k) {
                return Err(StateError::Inconsistent(
                    "lub of a directed family differs from its union".into(),
                ));
            }
        }
        Ok(())
    }

    /// `x ≪ y ⇔ ∃i ∃V ∈ Con_i. {i} ∪ V ⊆ y ∧ V ⊢_i x`, evaluated literally.
    pub fn approx_by_entailment(&self, x: usize, y: usize) -> bool {
        let (sx, sy) = (self.states[x], self.states[y]);
        let f = &self.frame;
        sy.iter()
            .any(|i| f.family(i).any(|(v, c)| v.is_subset(sy) && sx.is_subset(c)))
    }

    pub fn approx_relation(&self) -> Relation {
        Relation::from_fn(self.len(), |x, y| self.approx_by_entailment(x, y))
    }

    /// Compares the entailment characterization with the definitional
    /// way-below relation of the inclusion order.
    pub fn check_approx_agrees(&self) -> Result<(), StateError> {
        let wb = self.poset.way_below()?;
        let ent = self.approx_relation();
        if wb != ent {
            let (x, y) = (0..self.len())
                .flat_map(|x| (0..self.len()).map(move |y| (x, y)))
                .find(|&(x, y)| wb.contains(x, y) != ent.contains(x, y))
                .unwrap();
            return Err(StateError::Inconsistent(format!(
                "way-below and its entailment characterization differ at ({}, {})",
                self.poset.id(x),
                self.poset.id(y)
            )));
        }
        Ok(())
    }

    /// Order properties of `D(A)`, with the conditional implications of
    /// the frame properties asserted.
    ///
    /// Conservativity is checked against local lubs only: the L-domain
    /// notion includes pointedness, which conservativity does not give.
    pub fn properties(&self) -> Result<DomainProperties, StateError> {
        let p = &self.poset;
        let props = DomainProperties {
            pointed: p.is_pointed(),
            algebraic: p.is_algebraic(p.all())?,
            local_lubs: p.has_local_lubs(),
            l_domain: p.is_l_domain(),
            least: p.bottom(),
        };
        if let Ok(fp) = self.frame.classify() {
            if fp.conservative && !props.local_lubs {
                return Err(StateError::TheoremViolated(
                    "conservative frame whose domain lacks local lubs".into(),
                ));
            }
            if fp.algebraic && !props.algebraic {
                return Err(StateError::TheoremViolated(
                    "algebraic frame whose domain is not algebraic".into(),
                ));
            }
            for t in fp.truth_elements.iter() {
                let least = self.frame.closure_or_empty(t, BitSet::EMPTY);
                if props.least.map(|k| self.states[k]) != Some(least) {
                    return Err(StateError::TheoremViolated(format!(
                        "truth element {} but [{{}}]_{} is not the least state",
                        self.frame.token(t),
                        self.frame.token(t)
                    )));
                }
            }
        }
        Ok(props)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainProperties {
    pub pointed: bool,
    pub algebraic: bool,
    pub local_lubs: bool,
    pub l_domain: bool,
    pub least: Option<usize>,
}

/// `D(A)` for a frame.
pub fn induced_domain(frame: &Arc<InformationFrame>) -> Result<StateDomain, StateError> {
    StateDomain::new(frame.clone())
}
