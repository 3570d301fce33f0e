//! Brute-force oracles, written against the definitions with plain `u32`
//! masks and no library helpers, compared with the library on every
//! small instance.

use std::collections::BTreeSet;
use std::sync::Arc;

use dfk_core::generators::{enum_cf_spaces, enum_frames, enum_posets, GenBounds};
use dfk_core::order::FinitePoset;
use dfk_core::set::{BitSet, Relation};
use dfk_core::states::enumerate_states;
use dfk_core::{cf, fixtures, CfSpace, GaSpace, InformationFrame};

fn mask(b: BitSet) -> u32 {
    b.iter().fold(0, |m, i| m | 1 << i)
}

fn bits(m: u32) -> BitSet {
    BitSet::from_indices((0..32).filter(|i| m >> i & 1 == 1))
}

fn sub(a: u32, b: u32) -> bool {
    a & !b == 0
}

/// Every subset of `m`.
fn subsets(m: u32) -> impl Iterator<Item = u32> {
    (0..=m).filter(move |s| sub(*s, m))
}

// ------------------------------------------------------------------ posets

/// Orders on `0..n` as `leq[x]` = mask of elements above `x`.
fn naive_posets(n: usize) -> BTreeSet<Vec<u32>> {
    let pairs = n * n;
    let mut out = BTreeSet::new();
    for code in 0u64..1 << pairs {
        let leq = |x: usize, y: usize| code >> (x * n + y) & 1 == 1;
        let refl = (0..n).all(|x| leq(x, x));
        let anti = (0..n).all(|x| (0..n).all(|y| x == y || !(leq(x, y) && leq(y, x))));
        let trans =
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(leq(x, y) && leq(y, z)) || leq(x, z))));
        if refl && anti && trans {
            out.insert(
                (0..n)
                    .map(|x| (0..n).filter(|&y| leq(x, y)).fold(0, |m, y| m | 1 << y))
                    .collect(),
            );
        }
    }
    out
}

fn up_masks(p: &FinitePoset) -> Vec<u32> {
    (0..p.len()).map(|x| mask(p.up(x))).collect()
}

#[test]
fn labeled_poset_counts() {
    for (n, expected) in [(1, 1), (2, 3), (3, 19), (4, 219)] {
        let naive = naive_posets(n);
        assert_eq!(naive.len(), expected, "n={n}");
        let lib: BTreeSet<Vec<u32>> = enum_posets(n).unwrap().iter().map(up_masks).collect();
        assert_eq!(lib, naive, "n={n}");
    }
    // too slow to brute-force in a test; the published labeled count
    assert_eq!(enum_posets(5).unwrap().len(), 4231);
}

#[test]
fn way_below_matches_the_definition() {
    for n in 1..=4 {
        for p in enum_posets(n).unwrap() {
            let up = up_masks(&p);
            let leq = |x: usize, y: usize| up[x] >> y & 1 == 1;
            let directed = |s: u32| {
                s != 0
                    && (0..n).filter(|&a| s >> a & 1 == 1).all(|a| {
                        (0..n)
                            .filter(|&b| s >> b & 1 == 1)
                            .all(|b| (0..n).any(|c| s >> c & 1 == 1 && leq(a, c) && leq(b, c)))
                    })
            };
            // a finite directed set has a greatest element, which is its lub
            let lub = |s: u32| {
                (0..n).find(|&c| s >> c & 1 == 1 && (0..n).all(|a| s >> a & 1 == 0 || leq(a, c)))
            };
            let all = (1u32 << n) - 1;
            let wb = p.way_below().unwrap();
            for x in 0..n {
                for y in 0..n {
                    let naive = subsets(all).filter(|&s| directed(s)).all(|s| {
                        !leq(y, lub(s).unwrap()) || (0..n).any(|d| s >> d & 1 == 1 && leq(x, d))
                    });
                    assert_eq!(wb.contains(x, y), naive, "{:?} {x} {y}", p.ids());
                }
            }
        }
    }
}

// ------------------------------------------------------------------ frames

/// `con[i]` holds the consistent masks; `ent[i][X]` the mask entailed by X.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Naive {
    n: usize,
    con: Vec<Vec<u32>>,
    ent: Vec<Vec<u32>>,
}

impl Naive {
    fn of(f: &InformationFrame) -> Self {
        let n = f.len();
        let mut con = Vec::new();
        let mut ent = Vec::new();
        for i in 0..n {
            let mut c: Vec<u32> = f.con(i).iter().map(|&x| mask(x)).collect();
            c.sort();
            con.push(c);
            ent.push(
                (0u32..1 << n)
                    .map(|x| {
                        if f.is_consistent(i, bits(x)) {
                            (0..n)
                                .filter(|&a| f.entails(i, bits(x), a))
                                .fold(0, |m, a| m | 1 << a)
                        } else {
                            0
                        }
                    })
                    .collect(),
            );
        }
        Naive { n, con, ent }
    }

    fn is_con(&self, i: usize, x: u32) -> bool {
        self.con[i].contains(&x)
    }

    fn local_ok(&self, i: usize) -> bool {
        let all = (1u32 << self.n) - 1;
        let c = |x| self.is_con(i, x);
        let e = |x: u32| self.ent[i][x as usize];
        c(1 << i)
            && self.con[i].iter().all(|&x| subsets(x).all(c))
            && self.con[i].iter().all(|&x| subsets(e(x)).all(c))
            && self.con[i].iter().all(|&x| {
                subsets(all)
                    .filter(|&y| c(y) && sub(x, y))
                    .all(|y| sub(e(x), e(y)))
            })
            && self.con[i]
                .iter()
                .all(|&x| subsets(e(x)).filter(|&y| c(y)).all(|y| sub(e(y), e(x))))
    }

    fn global_ok(&self) -> bool {
        let n = self.n;
        let r = |i: usize, j: usize| self.is_con(j, 1 << i);
        for i in 0..n {
            for j in 0..n {
                if r(i, j) {
                    if !self.con[i].iter().all(|&x| self.is_con(j, x)) {
                        return false;
                    }
                    if !self.con[i]
                        .iter()
                        .all(|&x| sub(self.ent[i][x as usize], self.ent[j][x as usize]))
                    {
                        return false;
                    }
                }
            }
        }
        for i in 0..n {
            for &x in &self.con[i] {
                let ex = self.ent[i][x as usize];
                for y in subsets(ex) {
                    let found = (0..n).any(|e| {
                        self.con[e]
                            .iter()
                            .any(|&z| sub(z | 1 << e, ex) && sub(y, self.ent[e][z as usize]))
                    });
                    if !found {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All valid frames on `n` tokens.
    fn enumerate(n: usize) -> BTreeSet<Naive> {
        let sets = 1usize << n;
        let mut locals: Vec<Vec<(Vec<u32>, Vec<u32>)>> = vec![Vec::new(); n];
        for (i, slot) in locals.iter_mut().enumerate() {
            for fam in 0u32..1 << sets {
                let con: Vec<u32> = (0..sets as u32).filter(|x| fam >> x & 1 == 1).collect();
                let slots: Vec<(u32, usize)> = con
                    .iter()
                    .flat_map(|&x| (0..n).map(move |a| (x, a)))
                    .collect();
                for pick in 0u64..1 << slots.len() {
                    let mut ent = vec![0u32; sets];
                    for (k, &(x, a)) in slots.iter().enumerate() {
                        if pick >> k & 1 == 1 {
                            ent[x as usize] |= 1 << a;
                        }
                    }
                    let mut probe = Naive {
                        n,
                        con: vec![vec![]; n],
                        ent: vec![vec![0; sets]; n],
                    };
                    probe.con[i] = con.clone();
                    probe.ent[i] = ent.clone();
                    if probe.local_ok(i) {
                        slot.push((con.clone(), ent));
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; n];
        loop {
            let f = Naive {
                n,
                con: (0..n).map(|i| locals[i][idx[i]].0.clone()).collect(),
                ent: (0..n).map(|i| locals[i][idx[i]].1.clone()).collect(),
            };
            if f.global_ok() {
                out.insert(f);
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < locals[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        out
    }

    /// States by the three defining conditions.
    fn states(&self) -> BTreeSet<u32> {
        let n = self.n;
        let all = (1u32 << n) - 1;
        subsets(all)
            .filter(|&x| {
                let members = || (0..n).filter(move |&i| x >> i & 1 == 1);
                let fin = subsets(x).all(|f| members().any(|i| self.is_con(i, f)));
                let closed = members().all(|i| {
                    subsets(x)
                        .filter(|&y| self.is_con(i, y))
                        .all(|y| sub(self.ent[i][y as usize], x))
                });
                let complete = members().all(|a| {
                    members().any(|i| {
                        subsets(x)
                            .any(|y| self.is_con(i, y) && self.ent[i][y as usize] >> a & 1 == 1)
                    })
                });
                fin && closed && complete
            })
            .collect()
    }
}

#[test]
fn frame_stream_matches_brute_force_up_to_two_tokens() {
    let bounds = GenBounds {
        max_tokens: 2,
        ..GenBounds::default()
    };
    let lib = enum_frames(&bounds).unwrap();
    for n in 1..=2 {
        let naive = Naive::enumerate(n);
        let got: BTreeSet<Naive> = lib.iter().filter(|f| f.len() == n).map(Naive::of).collect();
        assert_eq!(
            got.len(),
            lib.iter().filter(|f| f.len() == n).count(),
            "duplicates at n={n}"
        );
        assert_eq!(got, naive, "n={n}");
    }
}

#[test]
fn library_validator_agrees_on_generated_frames() {
    for f in enum_frames(&GenBounds::default()).unwrap() {
        let nf = Naive::of(&f);
        assert!((0..nf.n).all(|i| nf.local_ok(i)) && nf.global_ok());
    }
}

#[test]
fn states_match_the_definition() {
    for f in enum_frames(&GenBounds::default()).unwrap() {
        let naive = Naive::of(&f).states();
        let lib: BTreeSet<u32> = enumerate_states(&f)
            .unwrap()
            .into_iter()
            .map(mask)
            .collect();
        assert_eq!(lib, naive, "{:?}", f.tokens());
    }
}

#[test]
fn fixture_state_counts() {
    assert_eq!(Naive::of(&fixtures::f_unit()).states().len(), 1);
    assert_eq!(Naive::of(&fixtures::f_chain2()).states().len(), 2);
    assert_eq!(Naive::of(&fixtures::f_diamond()).states().len(), 4);
}

// ------------------------------------------------------------ rough sets

fn naive_upper(theta: &[u32], x: u32) -> u32 {
    (0..theta.len())
        .filter(|&u| theta[u] & x != 0)
        .fold(0, |m, u| m | 1 << u)
}

fn naive_lower(theta: &[u32], x: u32) -> u32 {
    (0..theta.len())
        .filter(|&u| sub(theta[u], x))
        .fold(0, |m, u| m | 1 << u)
}

fn relation(theta: &[u32]) -> Relation {
    let n = theta.len();
    Relation::from_fn(n, |x, y| theta[x] >> y & 1 == 1)
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("u{i}")).collect()
}

#[test]
fn operators_match_the_definition() {
    for n in 1..=3 {
        let all = (1u32 << n) - 1;
        for code in 0u32..1 << (n * n) {
            let theta: Vec<u32> = (0..n).map(|x| code >> (x * n) & all).collect();
            let g = GaSpace::from_relation(ids(n), relation(&theta)).unwrap();
            for x in subsets(all) {
                assert_eq!(mask(g.upper(bits(x))), naive_upper(&theta, x));
                assert_eq!(mask(g.lower(bits(x))), naive_lower(&theta, x));
            }
        }
    }
}

/// Validity, topological flag and (M) flag, from the definitions.
fn naive_cf(theta: &[u32], family: &[u32]) -> (bool, bool, bool) {
    let n = theta.len();
    let transitive =
        (0..n).all(|x| (0..n).all(|y| theta[x] >> y & 1 == 0 || sub(theta[y], theta[x])));
    let cf = family.iter().all(|&f| {
        let uf = naive_upper(theta, f);
        subsets(uf).all(|k| {
            family
                .iter()
                .any(|&g| sub(k, naive_upper(theta, g)) && sub(g, uf))
        })
    });
    let reflexive = (0..n).all(|x| theta[x] >> x & 1 == 1);
    let m = family
        .iter()
        .any(|&t| family.iter().all(|&f| sub(t, naive_upper(theta, f))));
    (transitive && cf, reflexive, m)
}

#[test]
fn cf_spaces_match_brute_force() {
    let bounds = GenBounds::default();
    let mut naive = BTreeSet::new();
    for n in 1..=bounds.max_elements {
        let all = (1u32 << n) - 1;
        let members: Vec<u32> = subsets(all).collect();
        let mut families: Vec<Vec<u32>> = Vec::new();
        for pick in 1u32..1 << members.len() {
            if (pick.count_ones() as usize) <= bounds.max_family {
                families.push(
                    members
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| pick >> k & 1 == 1)
                        .map(|(_, &m)| m)
                        .collect(),
                );
            }
        }
        for code in 0u32..1 << (n * n) {
            let theta: Vec<u32> = (0..n).map(|x| code >> (x * n) & all).collect();
            for fam in &families {
                let (valid, topo, m) = naive_cf(&theta, fam);
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|x| (0..n).map(move |y| (x, y)))
                    .filter(|&(x, y)| theta[x] >> y & 1 == 1)
                    .collect();
                let s =
                    CfSpace::new(ids(n), &pairs, fam.iter().map(|&f| bits(f)).collect()).unwrap();
                let r = s.validate();
                assert_eq!(r.valid(), valid, "theta {theta:?} family {fam:?}");
                if valid {
                    assert_eq!(r.topological, topo);
                    assert_eq!(r.has_m(), m);
                    naive.insert((theta.clone(), fam.clone()));
                }
            }
        }
    }
    let lib: BTreeSet<(Vec<u32>, Vec<u32>)> = enum_cf_spaces(&bounds)
        .unwrap()
        .iter()
        .map(|s| {
            let theta = (0..s.len())
                .map(|x| mask(s.base().theta().row(x)))
                .collect();
            let mut fam: Vec<u32> = s.family().iter().map(|&f| mask(f)).collect();
            fam.sort();
            (theta, fam)
        })
        .collect();
    assert_eq!(lib, naive);
}

#[test]
fn c_of_a_space_matches_its_definition() {
    for s in enum_cf_spaces(&GenBounds::default()).unwrap() {
        let s = Arc::new(s);
        let f = cf::c_on_object(&s).unwrap();
        let fam: Vec<u32> = s.family().iter().map(|&x| mask(x)).collect();
        let theta: Vec<u32> = (0..s.len())
            .map(|x| mask(s.base().theta().row(x)))
            .collect();
        let m = fam.len();
        let below = |a: usize| -> u32 {
            let ua = naive_upper(&theta, fam[a]);
            (0..m)
                .filter(|&g| sub(fam[g], ua))
                .fold(0, |acc, g| acc | 1 << g)
        };
        let nf = Naive::of(&f);
        for a in 0..m {
            let mut con: Vec<u32> = subsets(below(a)).chain([1 << a]).collect();
            con.sort();
            con.dedup();
            assert_eq!(nf.con[a], con);
            for &x in &con {
                let e = (0..m)
                    .filter(|&g| {
                        (0..m)
                            .filter(|&k| x >> k & 1 == 1)
                            .chain([a])
                            .any(|k| sub(fam[g], naive_upper(&theta, fam[k])))
                    })
                    .fold(0, |acc, g| acc | 1 << g);
                assert_eq!(nf.ent[a][x as usize], e);
            }
        }
    }
}

// ---------------------------------------------------------------- mappings

/// Every image assignment validated by the full checker, against the
/// pruned search, wherever the candidate space is small enough to list.
#[test]
fn mapping_search_misses_nothing() {
    use dfk_core::generators::enum_mappings;
    use dfk_core::ApproximableMapping;

    let small: Vec<Arc<InformationFrame>> = enum_frames(&GenBounds::default())
        .unwrap()
        .into_iter()
        .filter(|f| f.len() <= 2)
        .map(Arc::new)
        .collect();
    let mut compared = 0;
    for a in &small {
        for b in &small {
            let slots: usize = (0..a.len()).map(|i| a.con(i).len()).sum();
            let per = 1u64 << b.len();
            let total = per.pow(slots as u32);
            if total > 1 << 12 {
                continue;
            }
            let mut brute = Vec::new();
            for mut code in 0..total {
                let rel: Vec<Vec<BitSet>> = (0..a.len())
                    .map(|i| {
                        (0..a.con(i).len())
                            .map(|_| {
                                let m = (code % per) as u32;
                                code /= per;
                                bits(m)
                            })
                            .collect()
                    })
                    .collect();
                let h = ApproximableMapping::from_images(a.clone(), b.clone(), rel);
                if h.is_valid() {
                    brute.push(h);
                }
            }
            let mut found = enum_mappings(a, b).unwrap();
            let key = |h: &ApproximableMapping| {
                format!(
                    "{:?}",
                    (0..a.len())
                        .map(|i| h.images(i).iter().map(|&x| mask(x)).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                )
            };
            brute.sort_by_key(key);
            found.sort_by_key(key);
            assert_eq!(found, brute, "{:?} -> {:?}", a.tokens(), b.tokens());
            compared += 1;
        }
    }
    assert!(compared > 100, "only {compared} pairs compared");
}
