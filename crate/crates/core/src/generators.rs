//! Exhaustive and seeded-random generation of small structures.
//!
//! Every stream is deterministic. Random choices come from xoshiro256**
//! seeded through SplitMix64 (`seed_from_u64`), so a seed names the same
//! stream on every platform.

use std::sync::Arc;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use thiserror::Error;

use crate::cf::CfRelation;
use crate::frame::InformationFrame;
use crate::mapping::ApproximableMapping;
use crate::order::FinitePoset;
use crate::raised_cap;
use crate::rough::CfSpace;
use crate::set::{canonicalize, BitSet, Relation};

pub const POSET_LIMIT: usize = 5;
pub const FRAME_TOKEN_LIMIT: usize = 3;
pub const FRAME_CON_LIMIT: usize = 4;
pub const CF_UNIVERSE_LIMIT: usize = 3;
pub const CF_FAMILY_LIMIT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{what} bound {size} exceeds the limit of {limit}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}

fn check(what: &'static str, size: usize, default: usize) -> Result<(), GenError> {
    let limit = raised_cap(default);
    if size > limit {
        return Err(GenError::BoundExceeded { what, size, limit });
    }
    Ok(())
}

/// Size caps for the exhaustive streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenBounds {
    pub max_tokens: usize,
    /// Largest `|Con_i|` in generated frames.
    pub max_con: usize,
    /// Largest universe of generated CF-spaces.
    pub max_elements: usize,
    /// Largest `|𝔉|` of generated CF-spaces.
    pub max_family: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds {
            max_tokens: FRAME_TOKEN_LIMIT,
            max_con: FRAME_CON_LIMIT,
            max_elements: CF_UNIVERSE_LIMIT,
            max_family: CF_FAMILY_LIMIT,
        }
    }
}

/// Every partial order on `0..n` with ids `"0"`, `"1"`, ... Each pair
/// `x < y` of labels is unrelated, `x ⊑ y` or `y ⊑ x`; candidates are
/// filtered for transitivity.
pub fn enum_posets(n: usize) -> Result<Vec<FinitePoset>, GenError> {
    check("poset size", n, POSET_LIMIT)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    let total = 3u64.pow(pairs.len() as u32);
    let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut rel = Relation::from_fn(n, |x, y| x == y);
        for &(x, y) in &pairs {
            match code % 3 {
                1 => rel.insert(x, y),
                2 => rel.insert(y, x),
                _ => {}
            }
            code /= 3;
        }
        if rel.is_transitive() {
            out.push(FinitePoset::from_relation(ids.clone(), &rel).expect("order by construction"));
        }
    }
    Ok(out)
}

/// One token's local data: `Con_i` in canonical order with aligned
/// closures.
type Local = (Vec<BitSet>, Vec<BitSet>);

/// Downward closed families over `0..n` containing `{i}`, of size at most
/// `max_con`.
fn con_candidates(n: usize, i: usize, max_con: usize) -> Vec<Vec<BitSet>> {
    let nonempty: Vec<BitSet> = BitSet::full(n)
        .subsets_canonical()
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let mut out = Vec::new();
    let m = nonempty.len();
    for pick in BitSet::full(m).subsets_canonical() {
        if pick.len() + 1 > max_con {
            break;
        }
        let mut fam: Vec<BitSet> = pick.iter().map(|k| nonempty[k]).collect();
        if !fam.contains(&BitSet::singleton(i)) {
            continue;
        }
        fam.push(BitSet::EMPTY);
        let closed = fam
            .iter()
            .all(|x| x.iter().all(|e| fam.contains(&x.without(e))));
        if closed {
            canonicalize(&mut fam);
            out.push(fam);
        }
    }
    out
}

/// Closure assignments on one family that satisfy weakening, cut and the
/// nonemptiness forced by interpolation. Soundness holds because every
/// closure is drawn from the family, which is downward closed.
fn local_options(con: &[BitSet]) -> Vec<Local> {
    let choices: Vec<BitSet> = con.iter().copied().filter(|c| !c.is_empty()).collect();
    let k = con.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let cl: Vec<BitSet> = idx.iter().map(|&c| choices[c]).collect();
        let weakening =
            (0..k).all(|a| (0..k).all(|b| !con[a].is_subset(con[b]) || cl[a].is_subset(cl[b])));
        let cut = weakening
            && (0..k).all(|a| (0..k).all(|b| !con[b].is_subset(cl[a]) || cl[b].is_subset(cl[a])));
        if cut {
            out.push((con.to_vec(), cl));
        }
        // odometer
        let mut p = 0;
        loop {
            if p == k {
                return out;
            }
            idx[p] += 1;
            if idx[p] < choices.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Every valid frame on `1..=max_tokens` tokens `t0, t1, ...` with
/// `|Con_i| ≤ max_con`. The least truth element, when there is one, is
/// designated.
pub fn enum_frames(bounds: &GenBounds) -> Result<Vec<InformationFrame>, GenError> {
    check("token count", bounds.max_tokens, FRAME_TOKEN_LIMIT)?;
    check("consistency family size", bounds.max_con, FRAME_CON_LIMIT)?;
    let mut out = Vec::new();
    for n in 1..=bounds.max_tokens {
        out.extend(frames_on(n, bounds.max_con));
    }
    Ok(out)
}

fn frames_on(n: usize, max_con: usize) -> Vec<InformationFrame> {
    let tokens: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let per_token: Vec<Vec<Local>> = (0..n)
        .map(|i| {
            con_candidates(n, i, max_con)
                .iter()
                .flat_map(|c| local_options(c))
                .collect()
        })
        .collect();
    let total: usize = per_token.iter().map(Vec::len).product();
    (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut locals = Vec::with_capacity(n);
            for opts in &per_token {
                locals.push(&opts[code % opts.len()]);
                code /= opts.len();
            }
            // consistency transfer, cheaply, before the full check
            for i in 0..n {
                for j in 0..n {
                    if locals[j].0.contains(&BitSet::singleton(i))
                        && !locals[i].0.iter().all(|x| locals[j].0.contains(x))
                    {
                        return None;
                    }
                }
            }
            let families = locals
                .iter()
                .map(|(con, cl)| con.iter().copied().zip(cl.iter().copied()).collect())
                .collect();
            let f = InformationFrame::from_closures(tokens.clone(), families, None)
                .expect("well typed by construction");
            if !f.is_valid() {
                return None;
            }
            let t = f.truth_elements().first();
            Some(if t.is_some() { f.with_truth(t) } else { f })
        })
        .collect()
}

/// Every valid CF-space on universes `u0, u1, ...` of size
/// `1..=max_elements` with `1 ≤ |𝔉| ≤ max_family`.
pub fn enum_cf_spaces(bounds: &GenBounds) -> Result<Vec<CfSpace>, GenError> {
    check("universe size", bounds.max_elements, CF_UNIVERSE_LIMIT)?;
    check("family size", bounds.max_family, CF_FAMILY_LIMIT)?;
    let mut out = Vec::new();
    for n in 1..=bounds.max_elements {
        let universe: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
        let subsets = BitSet::full(n).subsets_canonical();
        let families: Vec<Vec<BitSet>> = BitSet::full(subsets.len())
            .subsets_canonical()
            .into_iter()
            .filter(|p| !p.is_empty() && p.len() <= bounds.max_family)
            .map(|p| p.iter().map(|k| subsets[k]).collect())
            .collect();
        let found: Vec<CfSpace> = (0..1u64 << (n * n))
            .into_par_iter()
            .flat_map_iter(|code| {
                let theta = Relation::from_fn(n, |x, y| code >> (x * n + y) & 1 == 1);
                let ok = theta.is_transitive();
                let universe = universe.clone();
                families.iter().filter(move |_| ok).filter_map(move |fam| {
                    let base =
                        crate::rough::GaSpace::from_relation(universe.clone(), theta.clone())
                            .expect("ids are valid");
                    let s = CfSpace::from_parts(base, fam.clone()).expect("well typed");
                    s.is_valid().then_some(s)
                })
            })
            .collect();
        out.extend(found);
    }
    Ok(out)
}

/// A random approximable mapping, or `None` when the seeded candidate is
/// not one. The seed relation relates `∅` at every source token to one
/// random target token and adds further pairs sparsely; it is then closed
/// under the target cut, monotonicity, the source cut and transfer, and
/// the result is kept only if it also interpolates.
pub fn random_mapping(
    a: &Arc<InformationFrame>,
    b: &Arc<InformationFrame>,
    seed: u64,
) -> Option<ApproximableMapping> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let nb = b.len() as u64;
    let mut rel: Vec<Vec<BitSet>> = (0..a.len())
        .map(|i| {
            a.con(i)
                .iter()
                .map(|x| {
                    let mut img = BitSet::EMPTY;
                    if x.is_empty() {
                        img = img.with((rng.next_u64() % nb) as usize);
                    }
                    for t in 0..b.len() {
                        if rng.next_u64() % 8 == 0 {
                            img = img.with(t);
                        }
                    }
                    img
                })
                .collect()
        })
        .collect();
    close_mapping(a, b, &mut rel);
    let h = ApproximableMapping::from_images(a.clone(), b.clone(), rel);
    h.is_valid().then_some(h)
}

fn close_mapping(a: &InformationFrame, b: &InformationFrame, rel: &mut [Vec<BitSet>]) {
    let access = a.accessibility();
    loop {
        let mut changed = false;
        for i in 0..a.len() {
            for (k, &x) in a.con(i).iter().enumerate() {
                let mut img = rel[i][k];
                // X H_i ({c} ∪ Y), Y ⊢′_c e ⇒ X H_i e
                loop {
                    let before = img;
                    for c in img.iter() {
                        for (y, cl) in b.family(c) {
                            if y.is_subset(img) {
                                img = img.union(cl);
                            }
                        }
                    }
                    if img == before {
                        break;
                    }
                }
                // X ⊢_i X′, X′ H_i e ⇒ X H_i e
                let cx = a.closure_or_empty(i, x);
                for (k2, &x2) in a.con(i).iter().enumerate() {
                    if x2.is_subset(cx) {
                        img = img.union(rel[i][k2]);
                    }
                }
                if img != rel[i][k] {
                    rel[i][k] = img;
                    changed = true;
                }
                // monotonicity
                for (k2, &x2) in a.con(i).iter().enumerate() {
                    if x.is_subset(x2) && !img.is_subset(rel[i][k2]) {
                        rel[i][k2] = rel[i][k2].union(img);
                        changed = true;
                    }
                }
                // transfer along i R j
                for j in access.row(i).iter() {
                    if let Some(k2) = a.con_index(j, x) {
                        if !img.is_subset(rel[j][k2]) {
                            rel[j][k2] = rel[j][k2].union(img);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Up to `count` valid mappings from consecutive seeds starting at `seed`,
/// trying at most `attempts` seeds.
pub fn random_mappings(
    a: &Arc<InformationFrame>,
    b: &Arc<InformationFrame>,
    seed: u64,
    count: usize,
    attempts: u64,
) -> Vec<ApproximableMapping> {
    (seed..seed.saturating_add(attempts))
        .filter_map(|s| random_mapping(a, b, s))
        .take(count)
        .collect()
}

pub const MAPPING_TOKEN_LIMIT: usize = 2;

/// Nonempty token sets of `b` closed under its entailments: the possible
/// images of a consistent set under a mapping into `b`.
fn closed_sets(b: &InformationFrame) -> Vec<BitSet> {
    b.all()
        .subsets()
        .filter(|&n| {
            !n.is_empty()
                && n.iter().all(|c| {
                    b.family(c)
                        .all(|(y, cl)| !y.is_subset(n) || cl.is_subset(n))
                })
        })
        .collect()
}

/// Every approximable mapping from `a` to `b`, for frames of at most two
/// tokens. Images range over the closed sets of `b`; monotonicity, the
/// source cut and transfer prune the search, and each complete candidate
/// is validated in full.
pub fn enum_mappings(
    a: &Arc<InformationFrame>,
    b: &Arc<InformationFrame>,
) -> Result<Vec<ApproximableMapping>, GenError> {
    check("mapping source tokens", a.len(), MAPPING_TOKEN_LIMIT)?;
    check("mapping target tokens", b.len(), MAPPING_TOKEN_LIMIT)?;
    let images = closed_sets(b);
    let slots: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|i| (0..a.con(i).len()).map(move |k| (i, k)))
        .collect();
    let access = a.accessibility();
    let consistent = |rel: &[Vec<BitSet>], filled: &[bool], s: usize| -> bool {
        let (i, k) = slots[s];
        let x = a.con(i)[k];
        let img = rel[i][k];
        let cx = a.closure_or_empty(i, x);
        (0..s).all(|t| {
            let (j, l) = slots[t];
            if !filled[t] {
                return true;
            }
            let y = a.con(j)[l];
            let other = rel[j][l];
            if i == j {
                let cy = a.closure_or_empty(j, y);
                (!x.is_subset(y) || img.is_subset(other))
                    && (!y.is_subset(x) || other.is_subset(img))
                    && (!y.is_subset(cx) || other.is_subset(img))
                    && (!x.is_subset(cy) || img.is_subset(other))
            } else {
                (x != y || !access.contains(i, j) || img.is_subset(other))
                    && (x != y || !access.contains(j, i) || other.is_subset(img))
            }
        })
    };
    let mut rel: Vec<Vec<BitSet>> = (0..a.len())
        .map(|i| vec![BitSet::EMPTY; a.con(i).len()])
        .collect();
    let mut filled = vec![false; slots.len()];
    let mut out = Vec::new();
    type Prune<'p> = dyn Fn(&[Vec<BitSet>], &[bool], usize) -> bool + 'p;
    fn go(
        s: usize,
        slots: &[(usize, usize)],
        images: &[BitSet],
        rel: &mut Vec<Vec<BitSet>>,
        filled: &mut Vec<bool>,
        ok: &Prune,
        emit: &mut dyn FnMut(&[Vec<BitSet>]),
    ) {
        if s == slots.len() {
            emit(rel);
            return;
        }
        let (i, k) = slots[s];
        for &img in images {
            rel[i][k] = img;
            filled[s] = true;
            if ok(rel, filled, s) {
                go(s + 1, slots, images, rel, filled, ok, emit);
            }
        }
        filled[s] = false;
    }
    go(
        0,
        &slots,
        &images,
        &mut rel,
        &mut filled,
        &consistent,
        &mut |r: &[Vec<BitSet>]| {
            let h = ApproximableMapping::from_images(a.clone(), b.clone(), r.to_vec());
            if h.is_valid() {
                out.push(h);
            }
        },
    );
    Ok(out)
}

/// A random CF-approximable relation, or `None`. Every `F` is related to
/// one random `G` plus sparse extra pairs; the relation is closed under
/// conditions (2) and (3) and kept when (1), (4) and (5) also hold.
pub fn random_cf_relation(u: &Arc<CfSpace>, v: &Arc<CfSpace>, seed: u64) -> Option<CfRelation> {
    if v.family().is_empty() {
        return None;
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let m = v.family().len();
    let mut rows: Vec<BitSet> = (0..u.family().len())
        .map(|_| {
            let mut r = BitSet::singleton((rng.next_u64() % m as u64) as usize);
            for g in 0..m {
                if rng.next_u64() % 8 == 0 {
                    r = r.with(g);
                }
            }
            r
        })
        .collect();
    let below = u.below_all();
    let below2 = v.below_all();
    loop {
        let mut changed = false;
        for f2 in 0..rows.len() {
            let mut r = rows[f2];
            for f in below[f2].iter() {
                r = r.union(rows[f]);
            }
            for g in r.iter() {
                r = r.union(below2[g]);
            }
            if r != rows[f2] {
                rows[f2] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let d = CfRelation::from_rows(u.clone(), v.clone(), rows);
    d.is_valid().then_some(d)
}

/// The frame on the tokens in `keep`, reindexed in order, with
/// consistency families and closures cut down to them.
pub fn restrict(frame: &InformationFrame, keep: BitSet) -> InformationFrame {
    let old: Vec<usize> = keep.iter().collect();
    let squeeze = |s: BitSet| -> BitSet {
        old.iter()
            .enumerate()
            .filter(|(_, &o)| s.contains(o))
            .map(|(k, _)| k)
            .collect()
    };
    let tokens = old.iter().map(|&o| frame.token(o).to_string()).collect();
    let families = old
        .iter()
        .map(|&o| {
            frame
                .family(o)
                .filter(|(x, _)| x.is_subset(keep))
                .map(|(x, c)| (squeeze(x), squeeze(c.intersection(keep))))
                .collect()
        })
        .collect();
    let truth = frame.truth().and_then(|t| old.iter().position(|&o| o == t));
    InformationFrame::from_closures(tokens, families, truth).expect("restriction is well typed")
}

fn edit_family(
    frame: &InformationFrame,
    i: usize,
    f: impl Fn(BitSet, BitSet) -> Option<(BitSet, BitSet)>,
) -> InformationFrame {
    let families = (0..frame.len())
        .map(|j| {
            frame
                .family(j)
                .filter_map(|(x, c)| if j == i { f(x, c) } else { Some((x, c)) })
                .collect()
        })
        .collect();
    InformationFrame::from_closures(frame.tokens().to_vec(), families, frame.truth())
        .expect("edits keep typing")
}

/// Greedily shrink a frame while `fails` still holds: drop tokens, then
/// consistent sets (with their supersets), then single entailment pairs,
/// until no single step keeps the failure.
pub fn shrink_frame(
    frame: &InformationFrame,
    fails: impl Fn(&InformationFrame) -> bool,
) -> InformationFrame {
    let mut cur = frame.clone();
    assert!(fails(&cur), "shrink needs a failing frame");
    'outer: loop {
        if cur.len() > 1 {
            for t in 0..cur.len() {
                let next = restrict(&cur, cur.all().without(t));
                if fails(&next) {
                    cur = next;
                    continue 'outer;
                }
            }
        }
        for i in 0..cur.len() {
            for &x in cur.con(i) {
                if x.is_empty() {
                    continue;
                }
                let next = edit_family(&cur, i, |y, c| (!x.is_subset(y)).then_some((y, c)));
                if fails(&next) {
                    cur = next;
                    continue 'outer;
                }
            }
            for (x, c) in cur.family(i).collect::<Vec<_>>() {
                for e in c.iter() {
                    let next = edit_family(&cur, i, |y, d| {
                        Some((y, if y == x { d.without(e) } else { d }))
                    });
                    if fails(&next) {
                        cur = next;
                        continue 'outer;
                    }
                }
            }
        }
        return cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enum_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 19, 219]);
        assert!(enum_posets(6).is_err());
    }

    #[test]
    fn unit_frame_is_enumerated() {
        let b = GenBounds {
            max_tokens: 1,
            ..GenBounds::default()
        };
        let frames = enum_frames(&b).unwrap();
        let unit = fixtures::f_unit();
        assert!(frames
            .iter()
            .any(|f| f.with_tokens(vec!["t".into()]).unwrap().with_truth(None) == unit));
    }

    #[test]
    fn bounds_are_enforced() {
        let b = GenBounds {
            max_tokens: 9,
            ..GenBounds::default()
        };
        assert!(matches!(
            enum_frames(&b),
            Err(GenError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn unit_space_is_enumerated() {
        let b = GenBounds {
            max_elements: 1,
            ..GenBounds::default()
        };
        let spaces = enum_cf_spaces(&b).unwrap();
        let unit = fixtures::u_unit();
        let renamed: Vec<_> = spaces
            .iter()
            .map(|s| {
                CfSpace::new(
                    vec!["u".into()],
                    &s.base().theta().pairs().collect::<Vec<_>>(),
                    s.family().to_vec(),
                )
                .unwrap()
            })
            .collect();
        assert!(renamed.contains(&unit));
    }

    #[test]
    fn random_mapping_on_unit_is_identity() {
        let f = Arc::new(fixtures::f_unit());
        for seed in 0..20 {
            let h = random_mapping(&f, &f, seed).expect("identity is reachable");
            assert_eq!(h, ApproximableMapping::identity(f.clone()));
        }
    }

    #[test]
    fn unit_frame_has_only_the_identity() {
        let f = Arc::new(fixtures::f_unit());
        assert_eq!(
            enum_mappings(&f, &f).unwrap(),
            vec![ApproximableMapping::identity(f.clone())]
        );
    }

    #[test]
    fn streams_are_reproducible() {
        let f = Arc::new(fixtures::f_diamond());
        let a = random_mappings(&f, &f, 7, 5, 200);
        let b = random_mappings(&f, &f, 7, 5, 200);
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }

    #[test]
    fn shrink_reaches_one_token() {
        // three independent unit tokens; t0 loses ∅ ⊢ t0
        let s = |i| BitSet::singleton(i);
        let fam = |i| vec![(BitSet::EMPTY, s(i)), (s(i), s(i))];
        let mut families: Vec<Vec<(BitSet, BitSet)>> = (0..3).map(fam).collect();
        families[0][0].1 = BitSet::EMPTY;
        let tokens = (0..3).map(|i| format!("t{i}")).collect();
        let f = InformationFrame::from_closures(tokens, families, None).unwrap();
        assert!(!f.is_valid());
        let small = shrink_frame(&f, |g| !g.is_valid());
        assert!(small.len() <= 2 && !small.is_valid());
        for t in 0..small.len() {
            if small.len() > 1 {
                assert!(restrict(&small, small.all().without(t)).is_valid());
            }
        }
    }
}
