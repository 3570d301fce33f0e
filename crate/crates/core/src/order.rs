//! Finite posets viewed as domains.
//!
//! Every directed subset of a finite poset has a greatest element, so the
//! way-below relation collapses to the order and every element is compact.
//! Nothing here relies on that: [`FinitePoset::way_below`] evaluates the
//! definition over all directed subsets, and the collapse is something the
//! tests check rather than something the code assumes.

use std::sync::Arc;

use thiserror::Error;

use crate::set::{BitSet, Relation, MAX_WIDTH};
use crate::{check_id, raised_cap};

/// Default bound on the carrier size for operations that enumerate all
/// subsets of a poset (directed subsets, way-below, bases).
pub const SUBSET_ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("a poset needs at least one element")]
    Empty,
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("invalid element id `{0}`")]
    InvalidId(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("{size} elements exceed the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not reflexive: {0} is not below itself")]
    NotReflexive(String),
    #[error("not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),
    #[error("invalid basis: no directed set of basis approximants has lub {0}")]
    InvalidBasis(String),
    #[error("map is not total: {0} has no image")]
    NotTotal(String),
    #[error("map image {0} lies outside the target")]
    ImageOutOfRange(usize),
    #[error("map is not Scott continuous")]
    NotContinuous,
}

/// A partial order on `0..n` with string ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    ids: Vec<String>,
    /// `up[x] = { y : x ⊑ y }`
    up: Vec<BitSet>,
    /// `down[x] = { y : y ⊑ x }`
    down: Vec<BitSet>,
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("ids", &self.ids)
            .field("leq", &self.leq_relation())
            .finish()
    }
}

impl FinitePoset {
    /// Validate a raw relation given as index pairs `(x, y)` meaning `x ⊑ y`.
    ///
    /// Axioms are checked in the order antisymmetry, reflexivity,
    /// transitivity, and the lexicographically least witness of the first
    /// failing axiom is reported.
    pub fn new(ids: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = ids.len();
        Self::check_ids(&ids)?;
        let mut rel = Relation::empty(n);
        for &(x, y) in pairs {
            if x >= n {
                return Err(OrderError::UnknownElement(x.to_string()));
            }
            if y >= n {
                return Err(OrderError::UnknownElement(y.to_string()));
            }
            rel.insert(x, y);
        }
        Self::from_relation(ids, &rel)
    }

    /// Validate a relation given by its matrix.
    pub fn from_relation(ids: Vec<String>, rel: &Relation) -> Result<Self, OrderError> {
        Self::check_ids(&ids)?;
        let n = ids.len();
        assert_eq!(rel.size(), n, "relation size must match the element list");
        for x in 0..n {
            for y in x + 1..n {
                if rel.contains(x, y) && rel.contains(y, x) {
                    return Err(OrderError::NotAntisymmetric(ids[x].clone(), ids[y].clone()));
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| !rel.contains(x, x)) {
            return Err(OrderError::NotReflexive(ids[x].clone()));
        }
        for x in 0..n {
            for y in rel.row(x).iter() {
                if let Some(z) = rel.row(y).difference(rel.row(x)).first() {
                    return Err(OrderError::NotTransitive(
                        ids[x].clone(),
                        ids[y].clone(),
                        ids[z].clone(),
                    ));
                }
            }
        }
        Ok(Self::from_rows_unchecked(ids, rel.rows().to_vec()))
    }

    /// Build from an order predicate known to be a partial order.
    pub fn from_leq_fn(
        ids: Vec<String>,
        leq: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        let rel = Relation::from_fn(ids.len(), leq);
        Self::from_relation(ids, &rel)
    }

    fn check_ids(ids: &[String]) -> Result<(), OrderError> {
        if ids.is_empty() {
            return Err(OrderError::Empty);
        }
        if ids.len() > MAX_WIDTH {
            return Err(OrderError::TooLarge {
                size: ids.len(),
                limit: MAX_WIDTH,
            });
        }
        for (k, id) in ids.iter().enumerate() {
            if !check_id(id) {
                return Err(OrderError::InvalidId(id.clone()));
            }
            if ids[..k].contains(id) {
                return Err(OrderError::DuplicateId(id.clone()));
            }
        }
        Ok(())
    }

    fn from_rows_unchecked(ids: Vec<String>, up: Vec<BitSet>) -> Self {
        let n = ids.len();
        let down = (0..n)
            .map(|y| (0..n).filter(|&x| up[x].contains(y)).collect())
            .collect();
        FinitePoset { ids, up, down }
    }

    /// The chain `0 ⊑ 1 ⊑ .. ⊑ n-1` with ids `"0"`, `"1"`, ...
    pub fn chain(n: usize) -> Self {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::from_leq_fn(ids, |x, y| x <= y).expect("chain is a partial order")
    }

    /// The discrete order on `n` elements with ids `"0"`, `"1"`, ...
    pub fn antichain(n: usize) -> Self {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::from_leq_fn(ids, |x, y| x == y).expect("antichain is a partial order")
    }

    /// `⊥ ⊑ a, b ⊑ ⊤` with `a` and `b` incomparable.
    pub fn diamond() -> Self {
        let ids = ["bot", "a", "b", "top"].map(String::from).to_vec();
        Self::from_leq_fn(ids, |x, y| x == y || x == 0 || y == 3)
            .expect("diamond is a partial order")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up(&self, x: usize) -> BitSet {
        self.up[x]
    }

    pub fn down(&self, x: usize) -> BitSet {
        self.down[x]
    }

    pub fn leq_relation(&self) -> Relation {
        Relation::from_rows(self.up.clone())
    }

    /// Same carrier with the order reversed.
    pub fn dual(&self) -> Self {
        Self::from_rows_unchecked(self.ids.clone(), self.down.clone())
    }

    /// Copy with new ids, keeping the order.
    pub fn relabeled(&self, ids: Vec<String>) -> Result<Self, OrderError> {
        assert_eq!(ids.len(), self.len());
        Self::check_ids(&ids)?;
        Ok(Self::from_rows_unchecked(ids, self.up.clone()))
    }

    /// `⋂ ↑s` over `s ∈ set`; every element when `set` is empty.
    pub fn upper_bounds(&self, set: BitSet) -> BitSet {
        set.iter()
            .fold(self.all(), |acc, s| acc.intersection(self.up[s]))
    }

    /// The least element of `set`, if any.
    pub fn least_of(&self, set: BitSet) -> Option<usize> {
        set.iter().find(|&u| set.is_subset(self.up[u]))
    }

    /// The greatest element of `set`, if any.
    pub fn greatest_of(&self, set: BitSet) -> Option<usize> {
        set.iter().find(|&u| set.is_subset(self.down[u]))
    }

    pub fn lub(&self, set: BitSet) -> Option<usize> {
        self.least_of(self.upper_bounds(set))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least_of(self.all())
    }

    pub fn is_pointed(&self) -> bool {
        self.bottom().is_some()
    }

    /// Nonempty, and every pair of members has an upper bound inside.
    pub fn is_directed(&self, set: BitSet) -> bool {
        !set.is_empty()
            && set.iter().all(|a| {
                set.iter()
                    .all(|b| self.up[a].intersection(self.up[b]).intersects(set))
            })
    }

    fn subset_cap(&self) -> Result<(), OrderError> {
        let limit = raised_cap(SUBSET_ENUMERATION_CAP);
        if self.len() > limit {
            Err(OrderError::TooLarge {
                size: self.len(),
                limit,
            })
        } else {
            Ok(())
        }
    }

    /// All directed subsets, in increasing bit order.
    pub fn directed_subsets(&self) -> Result<Vec<BitSet>, OrderError> {
        self.subset_cap()?;
        Ok(self
            .all()
            .subsets()
            .filter(|&s| self.is_directed(s))
            .collect())
    }

    /// `x ≪ y` computed from the definition: for every directed `S` whose
    /// lub exists and lies above `y`, some member of `S` lies above `x`.
    pub fn way_below(&self) -> Result<Relation, OrderError> {
        let n = self.len();
        let mut rows = vec![self.all(); n];
        for s in self.directed_subsets()? {
            let Some(m) = self.lub(s) else { continue };
            let avoiding: BitSet = (0..n).filter(|&x| !self.up[x].intersects(s)).collect();
            for x in avoiding.iter() {
                rows[x] = rows[x].difference(self.down[m]);
            }
        }
        Ok(Relation::from_rows(rows))
    }

    /// Elements with `x ≪ x`, from a precomputed way-below relation.
    pub fn compact_elements(&self, wb: &Relation) -> BitSet {
        (0..self.len()).filter(|&x| wb.contains(x, x)).collect()
    }

    /// `B` is a basis when, for each `x`, some directed subset of
    /// `{ b ∈ B : b ≪ x }` has lub `x`. Returns the first `x` that fails.
    pub fn basis_failure(&self, basis: BitSet, wb: &Relation) -> Result<Option<usize>, OrderError> {
        self.subset_cap()?;
        Ok((0..self.len()).find(|&x| {
            let approximants = basis.intersection(wb.column(x));
            !approximants
                .subsets()
                .any(|s| self.is_directed(s) && self.lub(s) == Some(x))
        }))
    }

    pub fn check_basis(&self, basis: BitSet) -> Result<(), OrderError> {
        let wb = self.way_below()?;
        match self.basis_failure(basis, &wb)? {
            Some(x) => Err(OrderError::InvalidBasis(self.ids[x].clone())),
            None => Ok(()),
        }
    }

    /// Validates `basis`, then reports whether the compact elements form a
    /// basis.
    pub fn is_algebraic(&self, basis: BitSet) -> Result<bool, OrderError> {
        let wb = self.way_below()?;
        if let Some(x) = self.basis_failure(basis, &wb)? {
            return Err(OrderError::InvalidBasis(self.ids[x].clone()));
        }
        let compact = self.compact_elements(&wb);
        Ok(self.basis_failure(compact, &wb)?.is_none())
    }

    /// Every pair bounded above by `z` has a least upper bound inside `↓z`.
    pub fn has_local_lubs(&self) -> bool {
        (0..self.len()).all(|z| {
            let below = self.down[z];
            below.iter().all(|x| {
                below.iter().all(|y| {
                    let bounds = self.up[x].intersection(self.up[y]).intersection(below);
                    self.least_of(bounds).is_some()
                })
            })
        })
    }

    pub fn is_l_domain(&self) -> bool {
        self.is_pointed() && self.has_local_lubs()
    }

    /// Hasse diagram edges `(x, y)`: `x ⊏ y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            let above = self.up[x].without(x);
            for y in above.iter() {
                let between = above.intersection(self.down[y]).without(y);
                if between.is_empty() {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Violations of the standard laws of `≪` on a poset, as readable strings.
///
/// Checked: transitivity, `≪ ⊆ ⊑`, `u ⊑ x ≪ y ⊑ z ⇒ u ≪ z`, `⊥ ≪ x` for
/// every `x` when pointed, and interpolation `M ≪ x ⇒ ∃v. M ≪ v ≪ x` for
/// finite `M`. Interpolation is tested for the largest `M`, the set of all
/// approximants of `x`, which covers every smaller `M` with the same `v`.
pub fn way_below_law_violations(p: &FinitePoset, wb: &Relation) -> Vec<String> {
    let n = p.len();
    let mut out = Vec::new();
    if !wb.is_transitive() {
        out.push("way-below is not transitive".to_string());
    }
    for (x, y) in wb.pairs() {
        if !p.leq(x, y) {
            out.push(format!(
                "{} << {} but not {} <= {}",
                p.id(x),
                p.id(y),
                p.id(x),
                p.id(y)
            ));
        }
        for u in p.down(x).iter() {
            for z in p.up(y).iter() {
                if !wb.contains(u, z) {
                    out.push(format!(
                        "{} <= {} << {} <= {} but not {} << {}",
                        p.id(u),
                        p.id(x),
                        p.id(y),
                        p.id(z),
                        p.id(u),
                        p.id(z)
                    ));
                }
            }
        }
    }
    if let Some(b) = p.bottom() {
        for x in 0..n {
            if !wb.contains(b, x) {
                out.push(format!("bottom is not way-below {}", p.id(x)));
            }
        }
    }
    for x in 0..n {
        let m = wb.column(x);
        let ok = (0..n).any(|v| wb.contains(v, x) && m.iter().all(|a| wb.contains(a, v)));
        if !ok {
            out.push(format!(
                "no interpolant between the approximants of {} and {}",
                p.id(x),
                p.id(x)
            ));
        }
    }
    out
}

/// Order bijection `p → q` if one exists. Candidates are tried in index
/// order, so the result is the lexicographically first isomorphism.
pub fn poset_isomorphic(p: &FinitePoset, q: &FinitePoset) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() {
        return None;
    }
    let degree = |r: &FinitePoset, x: usize| (r.up(x).len(), r.down(x).len());
    let mut pd: Vec<_> = (0..n).map(|x| degree(p, x)).collect();
    let mut qd: Vec<_> = (0..n).map(|x| degree(q, x)).collect();
    let (pdeg, qdeg) = (pd.clone(), qd.clone());
    pd.sort_unstable();
    qd.sort_unstable();
    if pd != qd {
        return None;
    }
    let mut assign = vec![usize::MAX; n];
    let mut used = BitSet::EMPTY;
    fn go(
        x: usize,
        p: &FinitePoset,
        q: &FinitePoset,
        pdeg: &[(usize, usize)],
        qdeg: &[(usize, usize)],
        assign: &mut Vec<usize>,
        used: &mut BitSet,
    ) -> bool {
        if x == p.len() {
            return true;
        }
        for y in 0..q.len() {
            if used.contains(y) || pdeg[x] != qdeg[y] {
                continue;
            }
            let consistent = (0..x)
                .all(|w| p.leq(w, x) == q.leq(assign[w], y) && p.leq(x, w) == q.leq(y, assign[w]));
            if !consistent {
                continue;
            }
            assign[x] = y;
            *used = used.with(y);
            if go(x + 1, p, q, pdeg, qdeg, assign, used) {
                return true;
            }
            *used = used.without(y);
        }
        false
    }
    go(0, p, q, &pdeg, &qdeg, &mut assign, &mut used).then_some(assign)
}

/// A total function between two posets, given by its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    graph: Vec<usize>,
}

impl MonotoneMap {
    /// Checks totality and range only; monotonicity is a separate query.
    pub fn new(
        source: Arc<FinitePoset>,
        target: Arc<FinitePoset>,
        graph: Vec<usize>,
    ) -> Result<Self, OrderError> {
        if graph.len() < source.len() {
            return Err(OrderError::NotTotal(source.id(graph.len()).to_string()));
        }
        if graph.len() > source.len() {
            return Err(OrderError::UnknownElement(graph.len().to_string()));
        }
        if let Some(&y) = graph.iter().find(|&&y| y >= target.len()) {
            return Err(OrderError::ImageOutOfRange(y));
        }
        Ok(MonotoneMap {
            source,
            target,
            graph,
        })
    }

    pub fn identity(p: Arc<FinitePoset>) -> Self {
        let graph = (0..p.len()).collect();
        MonotoneMap {
            source: p.clone(),
            target: p,
            graph,
        }
    }

    pub fn constant(source: Arc<FinitePoset>, target: Arc<FinitePoset>, value: usize) -> Self {
        assert!(value < target.len());
        let graph = vec![value; source.len()];
        MonotoneMap {
            source,
            target,
            graph,
        }
    }

    pub fn source(&self) -> &Arc<FinitePoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePoset> {
        &self.target
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    pub fn apply(&self, x: usize) -> usize {
        self.graph[x]
    }

    pub fn image(&self, set: BitSet) -> BitSet {
        set.iter().map(|x| self.graph[x]).collect()
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &MonotoneMap) -> MonotoneMap {
        assert_eq!(*self.target, *next.source, "maps do not compose");
        MonotoneMap {
            source: self.source.clone(),
            target: next.target.clone(),
            graph: self.graph.iter().map(|&y| next.graph[y]).collect(),
        }
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.source.len()).all(|x| {
            self.source
                .up(x)
                .iter()
                .all(|y| self.target.leq(self.graph[x], self.graph[y]))
        })
    }

    /// `⊔ f[S] = f(⊔ S)` for every directed `S` with a lub. On finite
    /// posets this coincides with monotonicity, which is asserted.
    pub fn is_scott_continuous(&self) -> Result<bool, OrderError> {
        let mut ok = true;
        for s in self.source.directed_subsets()? {
            if let Some(m) = self.source.lub(s) {
                if self.target.lub(self.image(s)) != Some(self.graph[m]) {
                    ok = false;
                    break;
                }
            }
        }
        assert_eq!(
            ok,
            self.is_monotone(),
            "continuity must coincide with monotonicity"
        );
        Ok(ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Directed subsets by checking every subset pairwise, without the
    /// bitset helpers.
    fn directed_oracle(p: &FinitePoset) -> usize {
        let n = p.len();
        let mut count = 0;
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let ok = members.iter().all(|&a| {
                members
                    .iter()
                    .all(|&b| members.iter().any(|&c| p.leq(a, c) && p.leq(b, c)))
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn chain2_directed_subsets() {
        let p = FinitePoset::chain(2);
        let d = p.directed_subsets().unwrap();
        assert_eq!(
            d,
            vec![
                BitSet::from_indices([0]),
                BitSet::from_indices([1]),
                BitSet::from_indices([0, 1])
            ]
        );
    }

    #[test]
    fn diamond_has_thirteen_directed_subsets() {
        // 4 singletons, 5 comparable pairs, 3 triples through top, and all four
        let p = FinitePoset::diamond();
        assert_eq!(directed_oracle(&p), 13);
        assert_eq!(p.directed_subsets().unwrap().len(), 13);
    }

    #[test]
    fn antichain_directed_subsets_are_singletons() {
        let p = FinitePoset::antichain(2);
        assert_eq!(
            p.directed_subsets().unwrap(),
            vec![BitSet::singleton(0), BitSet::singleton(1)]
        );
    }

    #[test]
    fn lubs() {
        let d = FinitePoset::diamond();
        assert_eq!(d.lub(BitSet::from_indices([1, 2])), Some(3));
        assert_eq!(FinitePoset::chain(2).lub(BitSet::full(2)), Some(1));
        assert_eq!(FinitePoset::antichain(2).lub(BitSet::full(2)), None);
        assert_eq!(d.lub(BitSet::EMPTY), Some(0));
    }

    #[test]
    fn validation_errors() {
        let e = FinitePoset::new(ids(&["0", "1"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(e, OrderError::NotAntisymmetric("0".into(), "1".into()));
        let e = FinitePoset::new(ids(&["0", "1"]), &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap_err();
        assert_eq!(e, OrderError::NotAntisymmetric("0".into(), "1".into()));
        let e = FinitePoset::new(ids(&["0", "1"]), &[(0, 0)]).unwrap_err();
        assert_eq!(e, OrderError::NotReflexive("1".into()));
        let e = FinitePoset::new(
            ids(&["a", "b", "c"]),
            &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
        )
        .unwrap_err();
        assert_eq!(
            e,
            OrderError::NotTransitive("a".into(), "b".into(), "c".into())
        );
        assert_eq!(
            FinitePoset::new(vec![], &[]).unwrap_err(),
            OrderError::Empty
        );
        assert_eq!(
            FinitePoset::new(ids(&["a", "a"]), &[(0, 0), (1, 1)]).unwrap_err(),
            OrderError::DuplicateId("a".into())
        );
    }

    #[test]
    fn way_below_collapses_on_fixtures() {
        for p in [
            FinitePoset::chain(1),
            FinitePoset::chain(2),
            FinitePoset::diamond(),
            FinitePoset::antichain(3),
        ] {
            let wb = p.way_below().unwrap();
            assert_eq!(wb, p.leq_relation());
            assert!(way_below_law_violations(&p, &wb).is_empty());
        }
        assert_eq!(FinitePoset::diamond().way_below().unwrap().pair_count(), 9);
    }

    #[test]
    fn properties_of_fixtures() {
        let d = FinitePoset::diamond();
        assert!(d.is_pointed());
        assert!(d.is_l_domain());
        assert!(!FinitePoset::antichain(2).is_pointed());
        let c = FinitePoset::chain(2);
        assert_eq!(c.is_algebraic(BitSet::full(2)), Ok(true));
        assert_eq!(
            c.is_algebraic(BitSet::singleton(0)),
            Err(OrderError::InvalidBasis("1".into()))
        );
    }

    #[test]
    fn not_l_domain() {
        // ⊥ below a, b; both below c and d: {a, b} has two minimal bounds.
        let p = FinitePoset::from_leq_fn(ids(&["bot", "a", "b", "c", "d", "top"]), |x, y| {
            x == y || x == 0 || y == 5 || (matches!(x, 1 | 2) && matches!(y, 3 | 4))
        })
        .unwrap();
        assert!(p.is_pointed());
        assert!(!p.has_local_lubs());
        assert!(!p.is_l_domain());
    }

    #[test]
    fn continuity_of_fixture_maps() {
        let d = Arc::new(FinitePoset::diamond());
        let swap = MonotoneMap::new(d.clone(), d.clone(), vec![0, 2, 1, 3]).unwrap();
        assert_eq!(swap.is_scott_continuous(), Ok(true));
        assert_eq!(
            MonotoneMap::identity(d.clone()).is_scott_continuous(),
            Ok(true)
        );
        assert_eq!(
            MonotoneMap::constant(d.clone(), d.clone(), 2).is_scott_continuous(),
            Ok(true)
        );
        let bad = MonotoneMap::new(d.clone(), d.clone(), vec![3, 1, 2, 0]).unwrap();
        assert_eq!(bad.is_scott_continuous(), Ok(false));
    }

    #[test]
    fn isomorphisms() {
        let c = FinitePoset::chain(2);
        let r = FinitePoset::from_leq_fn(ids(&["x", "y"]), |a, b| a == b || (a == 1 && b == 0))
            .unwrap();
        assert_eq!(poset_isomorphic(&c, &r), Some(vec![1, 0]));
        assert_eq!(poset_isomorphic(&c, &FinitePoset::antichain(2)), None);
        let d = FinitePoset::diamond();
        let iso = poset_isomorphic(&d, &d.dual()).unwrap();
        // brute force over all 24 bijections
        let mut count = 0;
        let perms = permutations(4);
        for perm in &perms {
            let ok = (0..4).all(|x| (0..4).all(|y| d.leq(x, y) == d.dual().leq(perm[x], perm[y])));
            if ok {
                count += 1;
                assert!(
                    perms.iter().position(|q| q == perm) >= perms.iter().position(|q| *q == iso)
                );
            }
        }
        assert_eq!(count, 2);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn covers_of_diamond() {
        assert_eq!(
            FinitePoset::diamond().covers(),
            vec![(0, 1), (0, 2), (1, 3), (2, 3)]
        );
    }
}
