//! Information frames: validation of the eight axioms, the derived lemmas,
//! and the conservative / algebraic / strong / truth-element classifiers.
//!
//! A frame stores, for each token `i`, its consistent sets `Con_i` in
//! canonical order together with their closures `[X]_i = { a : X ⊢_i a }`.
//! Entailment is therefore extensional: `X ⊢_i a` iff `X ∈ Con_i` and
//! `a ∈ [X]_i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::check_id;
use crate::set::{position, BitSet, Relation, MAX_WIDTH};
use crate::witness::{Candidate, Minimum, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs at least one token")]
    Empty,
    #[error("{0} tokens exceed the limit of 64")]
    TooManyTokens(usize),
    #[error("duplicate token `{0}`")]
    DuplicateToken(String),
    #[error("invalid token id `{0}`")]
    InvalidId(String),
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("entailment at `{token}` uses {set}, which is not in its consistency family")]
    EntailmentUntyped { token: String, set: String },
    #[error("frame is not valid: {0}")]
    NotValidated(String),
    #[error("{set} is not consistent at `{token}`")]
    NotConsistent { token: String, set: String },
    #[error("derived lemma violated: {0}")]
    DerivedLemmaViolated(Violation),
}

/// Flags from the conservative, algebraic, strong and truth-element
/// conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameProperties {
    pub conservative: bool,
    pub algebraic: bool,
    pub strong: bool,
    pub truth_elements: BitSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameReport {
    pub violations: Vec<Violation>,
    /// Present exactly when the frame is valid.
    pub properties: Option<FrameProperties>,
}

impl FrameReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, condition: &str) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }

    pub fn violation(&self, condition: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.condition == condition)
    }
}

pub const SELF_CONSISTENCY: &str = "self-consistency";
pub const CONSISTENCY_PRESERVATION: &str = "consistency-preservation";
pub const SOUNDNESS: &str = "soundness";
pub const WEAKENING: &str = "weakening";
pub const CUT: &str = "cut";
pub const CONSISTENCY_TRANSFER: &str = "consistency-transfer";
pub const ENTAILMENT_TRANSFER: &str = "entailment-transfer";
pub const INTERPOLATION: &str = "interpolation";
pub const DESIGNATED_TRUTH: &str = "designated-truth";
pub const STRONG_CUT: &str = "strong-cut";
pub const LOCAL_INTERPOLATION_1: &str = "local-interpolation-1";
pub const LOCAL_INTERPOLATION_2: &str = "local-interpolation-2";

pub struct InformationFrame {
    tokens: Vec<String>,
    con: Vec<Vec<BitSet>>,
    closure: Vec<Vec<BitSet>>,
    truth: Option<usize>,
    report: OnceLock<FrameReport>,
}

impl Clone for InformationFrame {
    fn clone(&self) -> Self {
        InformationFrame {
            tokens: self.tokens.clone(),
            con: self.con.clone(),
            closure: self.closure.clone(),
            truth: self.truth,
            report: self.report.clone(),
        }
    }
}

impl PartialEq for InformationFrame {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
            && self.con == other.con
            && self.closure == other.closure
            && self.truth == other.truth
    }
}

impl Eq for InformationFrame {}

impl fmt::Debug for InformationFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("InformationFrame");
        d.field("tokens", &self.tokens);
        for i in 0..self.len() {
            let ent: Vec<_> = self.con[i].iter().zip(&self.closure[i]).collect();
            d.field(&self.tokens[i], &ent);
        }
        d.field("truth", &self.truth).finish()
    }
}

fn check_tokens(tokens: &[String]) -> Result<(), FrameError> {
    if tokens.is_empty() {
        return Err(FrameError::Empty);
    }
    if tokens.len() > MAX_WIDTH {
        return Err(FrameError::TooManyTokens(tokens.len()));
    }
    for (k, t) in tokens.iter().enumerate() {
        if !check_id(t) {
            return Err(FrameError::InvalidId(t.clone()));
        }
        if tokens[..k].contains(t) {
            return Err(FrameError::DuplicateToken(t.clone()));
        }
    }
    Ok(())
}

impl InformationFrame {
    /// Build a frame from consistency families and entailment pairs
    /// `(X, a)` per token. Only typing is checked here; the axioms are the
    /// business of [`InformationFrame::validate`].
    pub fn new(
        tokens: Vec<String>,
        con: Vec<Vec<BitSet>>,
        ent: Vec<Vec<(BitSet, usize)>>,
        truth: Option<usize>,
    ) -> Result<Self, FrameError> {
        check_tokens(&tokens)?;
        let n = tokens.len();
        assert_eq!(con.len(), n);
        assert_eq!(ent.len(), n);
        let all = BitSet::full(n);
        let mut sorted_con = Vec::with_capacity(n);
        for sets in con {
            let mut sets = sets;
            for s in &sets {
                if !s.is_subset(all) {
                    let bad = s.difference(all).first().unwrap();
                    return Err(FrameError::UnknownToken(bad.to_string()));
                }
            }
            crate::set::canonicalize(&mut sets);
            sorted_con.push(sets);
        }
        let mut closure: Vec<Vec<BitSet>> = sorted_con
            .iter()
            .map(|c| vec![BitSet::EMPTY; c.len()])
            .collect();
        for (i, pairs) in ent.into_iter().enumerate() {
            for (x, a) in pairs {
                if a >= n {
                    return Err(FrameError::UnknownToken(a.to_string()));
                }
                let Some(k) = position(&sorted_con[i], x) else {
                    return Err(FrameError::EntailmentUntyped {
                        token: tokens[i].clone(),
                        set: crate::witness::compact_set(x, &tokens),
                    });
                };
                closure[i][k] = closure[i][k].with(a);
            }
        }
        if let Some(t) = truth {
            if t >= n {
                return Err(FrameError::UnknownToken(t.to_string()));
            }
        }
        Ok(InformationFrame {
            tokens,
            con: sorted_con,
            closure,
            truth,
            report: OnceLock::new(),
        })
    }

    /// Build from `(X, [X]_i)` pairs per token.
    pub fn from_closures(
        tokens: Vec<String>,
        families: Vec<Vec<(BitSet, BitSet)>>,
        truth: Option<usize>,
    ) -> Result<Self, FrameError> {
        let con = families
            .iter()
            .map(|f| f.iter().map(|&(x, _)| x).collect())
            .collect();
        let ent = families
            .iter()
            .map(|f| {
                f.iter()
                    .flat_map(|&(x, c)| c.iter().map(move |a| (x, a)))
                    .collect()
            })
            .collect();
        Self::new(tokens, con, ent, truth)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t == id)
    }

    pub fn all(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// `Con_i` in canonical order.
    pub fn con(&self, i: usize) -> &[BitSet] {
        &self.con[i]
    }

    /// Closures aligned with [`InformationFrame::con`].
    pub fn closures(&self, i: usize) -> &[BitSet] {
        &self.closure[i]
    }

    /// `(X, [X]_i)` pairs of token `i`.
    pub fn family(&self, i: usize) -> impl Iterator<Item = (BitSet, BitSet)> + '_ {
        self.con[i]
            .iter()
            .copied()
            .zip(self.closure[i].iter().copied())
    }

    pub fn con_index(&self, i: usize, x: BitSet) -> Option<usize> {
        position(&self.con[i], x)
    }

    pub fn is_consistent(&self, i: usize, x: BitSet) -> bool {
        self.con_index(i, x).is_some()
    }

    /// `[X]_i`, or `None` when `X ∉ Con_i`.
    pub fn closure(&self, i: usize, x: BitSet) -> Option<BitSet> {
        self.con_index(i, x).map(|k| self.closure[i][k])
    }

    /// `[X]_i` with `∅` for inconsistent `X`, matching "X ⊢_i a is false".
    pub fn closure_or_empty(&self, i: usize, x: BitSet) -> BitSet {
        self.closure(i, x).unwrap_or(BitSet::EMPTY)
    }

    pub fn entails(&self, i: usize, x: BitSet, a: usize) -> bool {
        self.closure_or_empty(i, x).contains(a)
    }

    /// `X ⊢_i Y`: every member of `Y` is entailed. Holds vacuously for
    /// `Y = ∅` only when `X ∈ Con_i`.
    pub fn entails_set(&self, i: usize, x: BitSet, y: BitSet) -> bool {
        self.closure(i, x).is_some_and(|c| y.is_subset(c))
    }

    /// `[X]_i` as a checked operation.
    pub fn principal(&self, i: usize, x: BitSet) -> Result<BitSet, FrameError> {
        self.closure(i, x).ok_or_else(|| FrameError::NotConsistent {
            token: self.tokens[i].clone(),
            set: crate::witness::compact_set(x, &self.tokens),
        })
    }

    /// Designated truth element (metadata, checked by validation).
    pub fn truth(&self) -> Option<usize> {
        self.truth
    }

    pub fn with_truth(&self, truth: Option<usize>) -> Self {
        let mut f = self.clone();
        f.truth = truth;
        f.report = OnceLock::new();
        f
    }

    pub fn with_tokens(&self, tokens: Vec<String>) -> Result<Self, FrameError> {
        check_tokens(&tokens)?;
        assert_eq!(tokens.len(), self.len());
        let mut f = self.clone();
        f.tokens = tokens;
        f.report = OnceLock::new();
        Ok(f)
    }

    /// Total number of entailment pairs.
    pub fn entailment_count(&self) -> usize {
        self.closure.iter().flatten().map(|c| c.len()).sum()
    }

    /// `i R j ⇔ {i} ∈ Con_j`.
    pub fn accessibility(&self) -> Relation {
        Relation::from_fn(self.len(), |i, j| {
            self.is_consistent(j, BitSet::singleton(i))
        })
    }

    /// The report for this frame, computed once.
    pub fn validate(&self) -> &FrameReport {
        self.report.get_or_init(|| {
            let violations = Checker::new(self).run();
            let properties = violations.is_empty().then(|| self.properties());
            FrameReport {
                violations,
                properties,
            }
        })
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid()
    }

    /// The four property flags; requires a valid frame.
    pub fn classify(&self) -> Result<FrameProperties, FrameError> {
        let report = self.validate();
        match (&report.properties, report.violations.first()) {
            (Some(p), _) => Ok(*p),
            (None, Some(v)) => Err(FrameError::NotValidated(v.to_string())),
            (None, None) => unreachable!("valid reports carry properties"),
        }
    }

    /// Tokens `t` with `∅ ⊢_i t` for every `i`, by direct scan. Needs no
    /// validity.
    pub fn truth_elements(&self) -> BitSet {
        (0..self.len()).fold(self.all(), |acc, i| {
            acc.intersection(self.closure_or_empty(i, BitSet::EMPTY))
        })
    }

    fn properties(&self) -> FrameProperties {
        let n = self.len();
        let r = self.accessibility();
        let conservative = r.pairs().all(|(i, j)| {
            self.family(i)
                .all(|(x, cx)| self.closure_or_empty(j, x).is_subset(cx))
        });
        let algebraic = (0..n).all(|i| self.family(i).all(|(x, cx)| x.with(i).is_subset(cx)));
        let strong = (0..n).all(|i| {
            let own = BitSet::singleton(i);
            let from_self = self.closure_or_empty(i, own);
            self.con[i]
                .iter()
                .all(|&x| x == own || x.is_subset(from_self))
        });
        FrameProperties {
            conservative,
            algebraic,
            strong,
            truth_elements: self.truth_elements(),
        }
    }

    /// Strong cut and both local interpolation lemmas, checked
    /// exhaustively. On a valid frame the result is always empty.
    pub fn derived_lemma_violations(&self) -> Vec<Violation> {
        let n = self.len();
        let names = [&self.tokens[..]];
        let mut out = Vec::new();

        // X ⊢_i ({j} ∪ Y) ∧ Y ⊢_j a ⇒ X ⊢_i a
        let mut min = Minimum::default();
        for i in 0..n {
            for (x, m) in self.family(i) {
                for j in m.iter() {
                    for (y, cy) in self.family(j) {
                        if y.is_subset(m) {
                            if let Some(a) = cy.difference(m).first() {
                                min.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .token("j", 0, j)
                                        .set("Y", 0, y)
                                        .token("a", 0, a),
                                );
                            }
                        }
                    }
                }
            }
        }
        if let Some(c) = min.into_inner() {
            out.push(c.render(STRONG_CUT, &names));
        }

        // X ⊢_i Y ⇒ ∃Z ∈ Con_i. X ⊢_i Z ∧ Z ⊢_i Y, and
        // X ⊢_i Y ⇒ ∃e. X ⊢_i e ∧ Y ∈ Con_e.
        // Both are monotone in Y, so the largest Y = [X]_i decides.
        let mut min1 = Minimum::default();
        let mut min2 = Minimum::default();
        for i in 0..n {
            for (x, m) in self.family(i) {
                let one = self
                    .family(i)
                    .any(|(z, cz)| z.is_subset(m) && m.is_subset(cz));
                if !one {
                    min1.offer(self.smallest_failing_y(i, x, m, |y| {
                        self.family(i)
                            .any(|(z, cz)| z.is_subset(m) && y.is_subset(cz))
                    }));
                }
                let two = m.iter().any(|e| self.is_consistent(e, m));
                if !two {
                    min2.offer(self.smallest_failing_y(i, x, m, |y| {
                        m.iter().any(|e| self.is_consistent(e, y))
                    }));
                }
            }
        }
        if let Some(c) = min1.into_inner() {
            out.push(c.render(LOCAL_INTERPOLATION_1, &names));
        }
        if let Some(c) = min2.into_inner() {
            out.push(c.render(LOCAL_INTERPOLATION_2, &names));
        }
        out
    }

    pub fn check_derived_lemmas(&self) -> Result<(), FrameError> {
        match self.derived_lemma_violations().into_iter().next() {
            Some(v) => Err(FrameError::DerivedLemmaViolated(v)),
            None => Ok(()),
        }
    }

    fn smallest_failing_y(
        &self,
        i: usize,
        x: BitSet,
        m: BitSet,
        holds: impl Fn(BitSet) -> bool,
    ) -> Candidate {
        let y = m
            .subsets_canonical()
            .into_iter()
            .find(|&y| !holds(y))
            .expect("the largest set fails");
        Candidate::new()
            .token("i", 0, i)
            .set("X", 0, x)
            .set("Y", 0, y)
    }
}

/// Runs the eight axioms. Each check first decides whether a violation
/// exists, using shortcuts that are exact given the conditions already
/// found to hold, and only then searches for the least witness.
struct Checker<'a> {
    f: &'a InformationFrame,
    out: Vec<Violation>,
    names: [&'a [String]; 1],
}

impl<'a> Checker<'a> {
    fn new(f: &'a InformationFrame) -> Self {
        Checker {
            f,
            out: Vec::new(),
            names: [&f.tokens[..]],
        }
    }

    fn report(&mut self, condition: &'static str, min: Minimum) -> bool {
        match min.into_inner() {
            Some(c) => {
                self.out.push(c.render(condition, &self.names));
                false
            }
            None => true,
        }
    }

    fn run(mut self) -> Vec<Violation> {
        self.self_consistency();
        let preserved = self.consistency_preservation();
        let sound = self.soundness();
        let weak = self.weakening(preserved);
        self.cut(preserved && sound && weak);
        self.consistency_transfer();
        self.entailment_transfer();
        self.interpolation();
        self.designated_truth();
        self.out
    }

    fn self_consistency(&mut self) {
        let f = self.f;
        let mut min = Minimum::default();
        if let Some(i) = (0..f.len()).find(|&i| !f.is_consistent(i, BitSet::singleton(i))) {
            min.offer(Candidate::new().token("i", 0, i));
        }
        self.report(SELF_CONSISTENCY, min);
    }

    /// `Y ⊆ X ∈ Con_i ⇒ Y ∈ Con_i`. Closure under removing one element at
    /// a time is equivalent.
    fn consistency_preservation(&mut self) -> bool {
        let f = self.f;
        let broken = (0..f.len()).any(|i| {
            f.con[i]
                .iter()
                .any(|&x| x.iter().any(|a| !f.is_consistent(i, x.without(a))))
        });
        let mut min = Minimum::default();
        if broken {
            for i in 0..f.len() {
                for &x in &f.con[i] {
                    for y in x.subsets() {
                        if !f.is_consistent(i, y) {
                            min.offer(
                                Candidate::new()
                                    .token("i", 0, i)
                                    .set("Y", 0, y)
                                    .set("X", 0, x),
                            );
                        }
                    }
                }
            }
        }
        self.report(CONSISTENCY_PRESERVATION, min)
    }

    /// `X ∈ Con_i ∧ Y ⊆ [X]_i ⇒ Y ∈ Con_i`, memoized on `([X]_i, i)`.
    fn soundness(&mut self) -> bool {
        let f = self.f;
        let mut memo: HashMap<(usize, BitSet), Option<BitSet>> = HashMap::new();
        let mut min = Minimum::default();
        for i in 0..f.len() {
            for (x, m) in f.family(i) {
                let missing = *memo.entry((i, m)).or_insert_with(|| {
                    m.subsets_canonical()
                        .into_iter()
                        .find(|&y| !f.is_consistent(i, y))
                });
                if let Some(y) = missing {
                    min.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .set("X", 0, x)
                            .set("Y", 0, y),
                    );
                }
            }
        }
        self.report(SOUNDNESS, min)
    }

    /// `X ⊆ Y`, both in `Con_i`, `X ⊢_i a ⇒ Y ⊢_i a`. With consistency
    /// preserved, one-element extensions suffice to detect a failure.
    fn weakening(&mut self, preserved: bool) -> bool {
        let f = self.f;
        let n = f.len();
        let broken = if preserved {
            (0..n).any(|i| {
                f.family(i).any(|(x, cx)| {
                    f.all()
                        .difference(x)
                        .iter()
                        .any(|a| f.closure(i, x.with(a)).is_some_and(|cy| !cx.is_subset(cy)))
                })
            })
        } else {
            true
        };
        let mut min = Minimum::default();
        if broken {
            for i in 0..n {
                for (x, cx) in f.family(i) {
                    for (y, cy) in f.family(i) {
                        if x.is_subset(y) {
                            if let Some(a) = cx.difference(cy).first() {
                                min.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .set("Y", 0, y)
                                        .token("a", 0, a),
                                );
                            }
                        }
                    }
                }
            }
        }
        self.report(WEAKENING, min)
    }

    /// `X ⊢_i Y ∧ Y ⊢_i a ⇒ X ⊢_i a`. Given preservation, soundness and
    /// weakening, `Y = [X]_i` is the hardest case.
    fn cut(&mut self, shortcut: bool) {
        let f = self.f;
        let n = f.len();
        let broken = if shortcut {
            (0..n).any(|i| {
                f.family(i)
                    .any(|(_, m)| !f.closure_or_empty(i, m).is_subset(m))
            })
        } else {
            true
        };
        let mut min = Minimum::default();
        if broken {
            for i in 0..n {
                for (x, m) in f.family(i) {
                    for (y, cy) in f.family(i) {
                        if y.is_subset(m) {
                            if let Some(a) = cy.difference(m).first() {
                                min.offer(
                                    Candidate::new()
                                        .token("i", 0, i)
                                        .set("X", 0, x)
                                        .set("Y", 0, y)
                                        .token("a", 0, a),
                                );
                            }
                        }
                    }
                }
            }
        }
        self.report(CUT, min);
    }

    fn consistency_transfer(&mut self) {
        let f = self.f;
        let r = f.accessibility();
        let mut min = Minimum::default();
        for (i, j) in r.pairs() {
            if let Some(&x) = f.con[i].iter().find(|&&x| !f.is_consistent(j, x)) {
                min.offer(
                    Candidate::new()
                        .token("i", 0, i)
                        .token("j", 0, j)
                        .set("X", 0, x),
                );
            }
        }
        self.report(CONSISTENCY_TRANSFER, min);
    }

    fn entailment_transfer(&mut self) {
        let f = self.f;
        let r = f.accessibility();
        let mut min = Minimum::default();
        for (i, j) in r.pairs() {
            for (x, cx) in f.family(i) {
                if let Some(a) = cx.difference(f.closure_or_empty(j, x)).first() {
                    min.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .token("j", 0, j)
                            .set("X", 0, x)
                            .token("a", 0, a),
                    );
                }
            }
        }
        self.report(ENTAILMENT_TRANSFER, min);
    }

    /// `X ⊢_i Y ⇒ ∃e ∃Z ∈ Con_e. X ⊢_i ({e} ∪ Z) ∧ Z ⊢_e Y`. The
    /// condition only gets harder as `Y` grows, so `Y = [X]_i` decides;
    /// the search for an interpolant depends only on `[X]_i`.
    fn interpolation(&mut self) {
        let f = self.f;
        let n = f.len();
        let mut memo: HashMap<BitSet, bool> = HashMap::new();
        let interpolates = |m: BitSet, y: BitSet| {
            m.iter()
                .any(|e| f.family(e).any(|(z, cz)| z.is_subset(m) && y.is_subset(cz)))
        };
        let mut min = Minimum::default();
        for i in 0..n {
            for (x, m) in f.family(i) {
                let ok = *memo.entry(m).or_insert_with(|| interpolates(m, m));
                if !ok {
                    let y = m
                        .subsets_canonical()
                        .into_iter()
                        .find(|&y| !interpolates(m, y))
                        .expect("the largest set fails");
                    min.offer(
                        Candidate::new()
                            .token("i", 0, i)
                            .set("X", 0, x)
                            .set("Y", 0, y),
                    );
                }
            }
        }
        self.report(INTERPOLATION, min);
    }

    fn designated_truth(&mut self) {
        let f = self.f;
        let mut min = Minimum::default();
        if let Some(t) = f.truth {
            if let Some(i) = (0..f.len()).find(|&i| !f.entails(i, BitSet::EMPTY, t)) {
                min.offer(Candidate::new().token("t", 0, t).token("i", 0, i));
            }
        }
        self.report(DESIGNATED_TRUTH, min);
    }
}

impl fmt::Display for FrameProperties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flags = Vec::new();
        if self.strong {
            flags.push("strong");
        }
        if self.algebraic {
            flags.push("algebraic");
        }
        if self.conservative {
            flags.push("conservative");
        }
        if flags.is_empty() {
            flags.push("plain");
        }
        write!(f, "{}", flags.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(ix: &[usize]) -> BitSet {
        BitSet::from_indices(ix.iter().copied())
    }

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn unit_frame_is_everything() {
        let f = fixtures::f_unit();
        let report = f.validate();
        assert!(report.valid(), "{:?}", report.violations);
        let p = f.classify().unwrap();
        assert!(p.conservative && p.algebraic && p.strong);
        assert_eq!(p.truth_elements, s(&[0]));
        assert_eq!(f.accessibility(), Relation::from_fn(1, |_, _| true));
        assert!(f.check_derived_lemmas().is_ok());
    }

    #[test]
    fn missing_empty_set_breaks_preservation() {
        let f = InformationFrame::new(
            names(&["t"]),
            vec![vec![s(&[0])]],
            vec![vec![(s(&[0]), 0)]],
            None,
        )
        .unwrap();
        let r = f.validate();
        let v = r
            .violation(CONSISTENCY_PRESERVATION)
            .expect("preservation must fail");
        assert_eq!(v.get("Y"), Some("{}"));
        assert_eq!(v.get("X"), Some("{t}"));
        assert!(matches!(f.classify(), Err(FrameError::NotValidated(_))));
    }

    /// Independent search for an interpolation failure: literal
    /// quantification over every Y ⊆ [X]_i, e and Z ∈ Con_e.
    fn interpolation_oracle(f: &InformationFrame) -> bool {
        (0..f.len()).any(|i| {
            f.con(i).iter().any(|&x| {
                let m = f.closure(i, x).unwrap();
                m.subsets().any(|y| {
                    !(0..f.len()).any(|e| {
                        f.con(e)
                            .iter()
                            .any(|&z| f.entails_set(i, x, z.with(e)) && f.entails_set(e, z, y))
                    })
                })
            })
        })
    }

    #[test]
    fn interpolation_failure_is_reported() {
        // s entails a from nothing, but a only ever entails b.
        let tokens = names(&["s", "a", "b"]);
        let con = vec![
            vec![s(&[]), s(&[0]), s(&[1])],
            vec![s(&[]), s(&[1]), s(&[2])],
            vec![s(&[]), s(&[2])],
        ];
        let ent = vec![
            vec![(s(&[]), 1), (s(&[0]), 1), (s(&[1]), 1)],
            vec![(s(&[]), 2), (s(&[1]), 2), (s(&[2]), 2)],
            vec![(s(&[]), 2), (s(&[2]), 2)],
        ];
        let f = InformationFrame::new(tokens, con, ent, None).unwrap();
        assert!(interpolation_oracle(&f));
        let v = f
            .validate()
            .violation(INTERPOLATION)
            .expect("interpolation must fail");
        assert_eq!(v.get("i"), Some("s"));
        assert_eq!(v.get("X"), Some("{}"));
        assert_eq!(v.get("Y"), Some("{a}"));
    }

    #[test]
    fn no_entailment_frame_is_invalid_and_has_no_truth() {
        let tokens = names(&["p", "q"]);
        let con = vec![vec![s(&[]), s(&[0])], vec![s(&[]), s(&[1])]];
        let f = InformationFrame::new(tokens, con, vec![vec![], vec![]], None).unwrap();
        assert_eq!(f.truth_elements(), BitSet::EMPTY);
        // With nothing entailed, `X ⊢_i ∅` has no interpolating e.
        assert!(f.validate().violates(INTERPOLATION));
    }

    #[test]
    fn designated_truth_is_checked() {
        let f = fixtures::f_unit().with_truth(Some(0));
        assert!(f.is_valid());
        let tokens = names(&["p", "q"]);
        let con = vec![vec![s(&[]), s(&[0])], vec![s(&[]), s(&[1])]];
        let ent = vec![
            vec![(s(&[]), 0), (s(&[0]), 0)],
            vec![(s(&[]), 1), (s(&[1]), 1)],
        ];
        let g = InformationFrame::new(tokens, con, ent, Some(0)).unwrap();
        let v = g.validate().violation(DESIGNATED_TRUTH).unwrap();
        assert_eq!(v.get("i"), Some("q"));
        assert!(g.with_truth(None).is_valid());
    }

    #[test]
    fn untyped_entailment_is_rejected() {
        let e = InformationFrame::new(
            names(&["t"]),
            vec![vec![s(&[])]],
            vec![vec![(s(&[0]), 0)]],
            None,
        )
        .unwrap_err();
        assert!(matches!(e, FrameError::EntailmentUntyped { .. }));
    }
}
