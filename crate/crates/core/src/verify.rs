//! Exhaustive verification suites over the generator streams.
//!
//! Each numbered check returns a [`Criterion`] with the number of
//! instances examined and the first failures found. Suites group them;
//! `equivalence` runs everything.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;

use crate::cf::{self, CfRelation};
use crate::fixtures;
use crate::frame::InformationFrame;
use crate::generators::{self, GenBounds};
use crate::io::{self, Document, Structure};
use crate::mapping::{self, ApproximableMapping};
use crate::order::{way_below_law_violations, FinitePoset, MonotoneMap};
use crate::rough::{CfSpace, GaSpace};
use crate::set::{BitSet, Relation};
use crate::states::{self, StateDomain};

/// Failures kept per criterion; the total is always counted.
const KEPT_FAILURES: usize = 10;

#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.checked > 0
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>2} {} {}: {} checked, {} failed, {:.2}s",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.checked,
            self.failure_count,
            self.elapsed.as_secs_f64()
        )
    }
}

struct Tally {
    id: u8,
    title: &'static str,
    start: Instant,
    checked: usize,
    failure_count: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(id: u8, title: &'static str) -> Self {
        Tally {
            id,
            title,
            start: Instant::now(),
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Count an instance whose check either passes or explains itself.
    fn result<E: fmt::Display>(&mut self, what: &str, r: Result<bool, E>) {
        match r {
            Ok(ok) => self.check(ok, || what.to_string()),
            Err(e) => {
                self.checked += 1;
                self.fail(format!("{what}: {e}"));
            }
        }
    }

    fn finish(self) -> Criterion {
        Criterion {
            id: self.id,
            title: self.title,
            checked: self.checked,
            failure_count: self.failure_count,
            failures: self.failures,
            elapsed: self.start.elapsed(),
        }
    }
}

/// Bounds for the suites. The defaults are the acceptance bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub gen: GenBounds,
    /// Largest poset for the way-below collapse.
    pub poset_max: usize,
    /// Largest poset for the `τ` roundtrips.
    pub tau_max: usize,
    /// Largest universe for the operator laws over all relations.
    pub rough_max: usize,
    /// Random morphism instances for each naturality square.
    pub random_morphisms: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            gen: GenBounds::default(),
            poset_max: 4,
            tau_max: 5,
            rough_max: 4,
            random_morphisms: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Order,
    Frames,
    Functors,
    Rough,
    Equivalence,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "order" => Ok(Suite::Order),
            "frames" => Ok(Suite::Frames),
            "functors" => Ok(Suite::Functors),
            "rough" => Ok(Suite::Rough),
            "equivalence" => Ok(Suite::Equivalence),
            _ => Err(format!(
                "unknown suite `{s}`; expected order, frames, functors, rough or equivalence"
            )),
        }
    }
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Order => &[1, 4],
            Suite::Frames => &[2, 3],
            Suite::Functors => &[5, 8],
            Suite::Rough => &[6, 7],
            Suite::Equivalence => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

pub fn run_criterion(id: u8, opts: &VerifyOptions) -> Criterion {
    match id {
        1 => way_below_collapse(opts),
        2 => frame_theorems(opts),
        3 => eta_roundtrips(opts),
        4 => tau_roundtrips(opts),
        5 => functor_laws(opts),
        6 => rough_laws(opts),
        7 => cf_transport(opts),
        8 => delta_gamma_roundtrips(opts),
        9 => fixture_regressions(),
        10 => io_round_trips(opts),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Criterion> {
    suite
        .criteria()
        .iter()
        .map(|&c| run_criterion(c, opts))
        .collect()
}

fn posets_up_to(n: usize) -> Vec<FinitePoset> {
    (1..=n)
        .flat_map(|k| generators::enum_posets(k).expect("within bounds"))
        .collect()
}

fn frames(opts: &VerifyOptions) -> Vec<Arc<InformationFrame>> {
    generators::enum_frames(&opts.gen)
        .expect("within bounds")
        .into_iter()
        .map(Arc::new)
        .collect()
}

fn spaces(opts: &VerifyOptions) -> Vec<Arc<CfSpace>> {
    generators::enum_cf_spaces(&opts.gen)
        .expect("within bounds")
        .into_iter()
        .map(Arc::new)
        .collect()
}

/// 1: on every poset the definitional way-below equals the order, and the
/// way-below laws hold.
pub fn way_below_collapse(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(1, "finite collapse of way-below");
    for (k, p) in posets_up_to(opts.poset_max).iter().enumerate() {
        match p.way_below() {
            Ok(wb) => {
                let laws = way_below_law_violations(p, &wb);
                t.check(wb == p.leq_relation() && laws.is_empty(), || {
                    format!(
                        "poset #{k}: {}",
                        laws.first().map_or("way-below differs from order", |s| s)
                    )
                });
            }
            Err(e) => t.result::<_>(&format!("poset #{k}"), Err::<bool, _>(e)),
        }
    }
    t.finish()
}

/// 2: derived lemmas, both state characterizations, principal states,
/// directed unions and the entailment form of way-below.
pub fn frame_theorems(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(2, "frame theorem suite");
    let results: Vec<Result<(), String>> = frames(opts)
        .par_iter()
        .map(|f| {
            f.check_derived_lemmas().map_err(|e| e.to_string())?;
            let a = states::states_by_definition(f).map_err(|e| e.to_string())?;
            let b = states::states_by_st(f).map_err(|e| e.to_string())?;
            if a != b {
                return Err("state characterizations differ".into());
            }
            for i in 0..f.len() {
                for &c in f.closures(i) {
                    if !states::is_state(f, c) {
                        return Err(format!("a principal set at {} is not a state", f.token(i)));
                    }
                }
            }
            // checks directed unions and principal substates on construction
            let d = StateDomain::new(f.clone()).map_err(|e| e.to_string())?;
            d.check_approx_agrees().map_err(|e| e.to_string())?;
            d.properties().map_err(|e| e.to_string())?;
            Ok(())
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        t.check(r.is_ok(), || format!("frame #{k}: {}", r.unwrap_err()));
    }
    t.finish()
}

/// 3: `S ∘ T = Id` and `T ∘ S = Id` on every generated frame.
pub fn eta_roundtrips(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(3, "eta roundtrips");
    let results: Vec<Result<Vec<&'static str>, String>> = frames(opts)
        .par_iter()
        .map(|f| {
            let e = mapping::eta(f).map_err(|e| e.to_string())?;
            let mut out = e.pair.roundtrip_failures().map_err(|e| e.to_string())?;
            if !e.pair.forward.is_valid() {
                out.push("S valid");
            }
            if !e.pair.backward.is_valid() {
                out.push("T valid");
            }
            Ok(out)
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let ok = matches!(&r, Ok(v) if v.is_empty());
        t.check(ok, || format!("frame #{k}: {r:?}"));
    }
    t.finish()
}

/// 4: `sp ∘ st = id` and `st ∘ sp = id` on every poset.
pub fn tau_roundtrips(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(4, "tau roundtrips");
    let results: Vec<Result<Vec<&'static str>, String>> = posets_up_to(opts.tau_max)
        .into_par_iter()
        .map(|p| {
            let tau = mapping::tau(&Arc::new(p)).map_err(|e| e.to_string())?;
            tau.roundtrip_failures().map_err(|e| e.to_string())
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let ok = matches!(&r, Ok(v) if v.is_empty());
        t.check(ok, || format!("poset #{k}: {r:?}"));
    }
    t.finish()
}

/// All monotone maps `p → q`.
fn monotone_maps(p: &Arc<FinitePoset>, q: &Arc<FinitePoset>) -> Vec<MonotoneMap> {
    let (n, m) = (p.len(), q.len());
    let total = m.pow(n as u32);
    (0..total)
        .filter_map(|mut code| {
            let graph: Vec<usize> = (0..n)
                .map(|_| {
                    let y = code % m;
                    code /= m;
                    y
                })
                .collect();
            let f = MonotoneMap::new(p.clone(), q.clone(), graph).ok()?;
            f.is_monotone().then_some(f)
        })
        .collect()
}

struct FrameCtx {
    frame: Arc<InformationFrame>,
    eta: mapping::Eta,
    gamma: Option<cf::Gamma>,
    ea: Arc<CfSpace>,
}

fn frame_ctx(f: &Arc<InformationFrame>) -> Result<FrameCtx, String> {
    let eta = mapping::eta(f).map_err(|e| e.to_string())?;
    let gamma = match cf::gamma(f) {
        Ok(g) => Some(g),
        Err(cf::CfError::SizeExceeded { .. }) => None,
        Err(e) => return Err(e.to_string()),
    };
    let ea = match &gamma {
        Some(g) => g.ea.clone(),
        None => Arc::new(cf::e_on_object(f).map_err(|e| e.to_string())?),
    };
    Ok(FrameCtx {
        frame: f.clone(),
        eta,
        gamma,
        ea,
    })
}

/// Naturality of `η` and `γ` at `h`, and validity of `E(h)`.
fn mapping_squares(h: &ApproximableMapping, a: &FrameCtx, b: &FrameCtx) -> Result<(), String> {
    if !mapping::eta_naturality(h, &a.eta, &b.eta).map_err(|e| e.to_string())? {
        return Err("eta square".into());
    }
    if let (Some(ga), Some(gb)) = (&a.gamma, &b.gamma) {
        if !cf::gamma_naturality(h, ga, gb).map_err(|e| e.to_string())? {
            return Err("gamma square".into());
        }
    }
    let eh = cf::e_on_morphism_with(h, a.ea.clone(), b.ea.clone());
    if !eh.is_valid() {
        return Err("E(h) not CF-approximable".into());
    }
    Ok(())
}

/// `D` and `E` preserve the composite `g ∘ h`.
fn mapping_composite(
    g: &ApproximableMapping,
    h: &ApproximableMapping,
    a: &FrameCtx,
    b: &FrameCtx,
    c: &FrameCtx,
) -> Result<(), String> {
    let gh = g.then(h).map_err(|e| e.to_string())?;
    let d = |m: &ApproximableMapping, x: &FrameCtx, y: &FrameCtx| {
        mapping::d_on_morphism(m, &x.eta.domain, &y.eta.domain).map_err(|e| e.to_string())
    };
    if d(&gh, a, c)? != d(g, a, b)?.then(&d(h, b, c)?) {
        return Err("D composite".into());
    }
    let e = |m: &ApproximableMapping, x: &FrameCtx, y: &FrameCtx| {
        cf::e_on_morphism_with(m, x.ea.clone(), y.ea.clone())
    };
    if e(&gh, a, c) != e(g, a, b).then(&e(h, b, c)).map_err(|e| e.to_string())? {
        return Err("E composite".into());
    }
    Ok(())
}

struct SpaceCtx {
    space: Arc<CfSpace>,
    delta: cf::Delta,
}

/// Naturality of `δ` at `d`, validity of `C(d)`.
fn relation_squares(d: &CfRelation, a: &SpaceCtx, b: &SpaceCtx) -> Result<(), String> {
    if !cf::delta_naturality(d, &a.delta, &b.delta).map_err(|e| e.to_string())? {
        return Err("delta square".into());
    }
    let cd = cf::c_on_morphism_with(d, a.delta.cu.clone(), b.delta.cu.clone());
    let r = cd.validate();
    if !r.valid() {
        return Err(format!("C(d) not approximable: {}", r.violations[0]));
    }
    if r.respects_truth == Some(false) {
        return Err("C(d) does not respect truth".into());
    }
    Ok(())
}

fn relation_composite(
    d: &CfRelation,
    o: &CfRelation,
    a: &SpaceCtx,
    b: &SpaceCtx,
    c: &SpaceCtx,
) -> Result<(), String> {
    let doo = d.then(o).map_err(|e| e.to_string())?;
    if !doo.is_valid() {
        return Err("composite not CF-approximable".into());
    }
    let cm = |r: &CfRelation, x: &SpaceCtx, y: &SpaceCtx| {
        cf::c_on_morphism_with(r, x.delta.cu.clone(), y.delta.cu.clone())
    };
    let left = cm(&doo, a, c);
    let right = cm(d, a, b).then(&cm(o, b, c)).map_err(|e| e.to_string())?;
    if left != right {
        return Err("C composite".into());
    }
    Ok(())
}

/// 5: identity and composite laws for `D`, `F`, `C`, `E`, and the four
/// naturality squares, on every mapping between frames of at most two
/// tokens, every relation between spaces with at most two members, every
/// monotone map between posets of at most three elements, and at least
/// `random_morphisms` seeded random instances of each morphism kind.
pub fn functor_laws(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(5, "functor laws and naturality");
    let all_frames = frames(opts);
    let ctxs: Vec<Result<FrameCtx, String>> = all_frames.par_iter().map(frame_ctx).collect();
    let mut fc = Vec::new();
    for (k, c) in ctxs.into_iter().enumerate() {
        match c {
            Ok(c) => fc.push(c),
            Err(e) => t.fail(format!("frame #{k}: {e}")),
        }
    }

    let fc = &fc;

    // identities for D and E
    for (k, c) in fc.iter().enumerate() {
        let id = ApproximableMapping::identity(c.frame.clone());
        let d = mapping::d_on_morphism(&id, &c.eta.domain, &c.eta.domain);
        t.check(
            matches!(&d, Ok(m) if *m == MonotoneMap::identity(c.eta.domain.poset().clone())),
            || format!("frame #{k}: D(Id) is not the identity"),
        );
        let e = cf::e_on_morphism_with(&id, c.ea.clone(), c.ea.clone());
        t.check(e == CfRelation::identity(c.ea.clone()), || {
            format!("frame #{k}: E(Id) is not the identity")
        });
    }

    // every mapping between frames of at most two tokens
    let small: Vec<usize> = (0..fc.len()).filter(|&k| fc[k].frame.len() <= 2).collect();
    let small = &small;
    let pairs: Vec<(usize, usize)> = small
        .iter()
        .flat_map(|&a| small.iter().map(move |&b| (a, b)))
        .collect();
    let exhaustive: Vec<(usize, usize, Vec<ApproximableMapping>)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let maps = generators::enum_mappings(&fc[a].frame, &fc[b].frame).expect("small");
            (a, b, maps)
        })
        .collect();
    let results: Vec<(usize, usize, Result<(), String>)> = exhaustive
        .par_iter()
        .flat_map_iter(|(a, b, maps)| {
            maps.iter()
                .map(move |h| (*a, *b, mapping_squares(h, &fc[*a], &fc[*b])))
        })
        .collect();
    for (a, b, r) in results {
        t.check(r.is_ok(), || {
            format!("mapping #{a} -> #{b}: {}", r.unwrap_err())
        });
    }
    // composites over the exhaustive lists
    let by_pair: std::collections::HashMap<(usize, usize), &Vec<ApproximableMapping>> =
        exhaustive.iter().map(|(a, b, m)| ((*a, *b), m)).collect();
    let triples: Vec<(usize, usize, usize)> = small
        .iter()
        .flat_map(|&a| {
            small
                .iter()
                .flat_map(move |&b| small.iter().map(move |&c| (a, b, c)))
        })
        .collect();
    let results: Vec<Result<(), String>> = triples
        .par_iter()
        .flat_map_iter(|&(a, b, c)| {
            let gs = by_pair[&(a, b)];
            let hs = by_pair[&(b, c)];
            gs.iter().flat_map(move |g| {
                hs.iter()
                    .map(move |h| mapping_composite(g, h, &fc[a], &fc[b], &fc[c]))
            })
        })
        .collect();
    for r in results {
        t.check(r.is_ok(), || format!("composite: {}", r.unwrap_err()));
    }

    // seeded random mappings across all frames
    let mut rng = Xoshiro256StarStar::seed_from_u64(opts.seed);
    let mut found = 0;
    let mut attempts = 0u64;
    while found < opts.random_morphisms && attempts < 200 * opts.random_morphisms as u64 {
        attempts += 1;
        let pick = |rng: &mut Xoshiro256StarStar| (rng.next_u64() % fc.len() as u64) as usize;
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let s = rng.next_u64();
        let Some(g) = generators::random_mapping(&fc[a].frame, &fc[b].frame, s) else {
            continue;
        };
        found += 1;
        let r = mapping_squares(&g, &fc[a], &fc[b]);
        t.check(r.is_ok(), || {
            format!("random mapping seed {s}: {}", r.unwrap_err())
        });
        let s2 = rng.next_u64();
        if let Some(h) = generators::random_mappings(&fc[b].frame, &fc[c].frame, s2, 1, 50).pop() {
            let r = mapping_composite(&g, &h, &fc[a], &fc[b], &fc[c]);
            t.check(r.is_ok(), || {
                format!("random composite seeds {s}/{s2}: {}", r.unwrap_err())
            });
        }
    }
    if found < opts.random_morphisms {
        t.fail(format!("only {found} random mappings found"));
    }

    // F and τ over monotone maps between small posets
    let posets: Vec<Arc<FinitePoset>> = posets_up_to(3).into_iter().map(Arc::new).collect();
    let taus: Vec<mapping::Tau> = posets
        .iter()
        .map(|p| mapping::tau(p).expect("finite posets are domains"))
        .collect();
    for (k, p) in posets.iter().enumerate() {
        let fid = mapping::f_on_morphism(
            &MonotoneMap::identity(p.clone()),
            taus[k].fd.clone(),
            taus[k].fd.clone(),
        );
        t.check(
            matches!(&fid, Ok(m) if *m == ApproximableMapping::identity(taus[k].fd.clone())),
            || format!("poset #{k}: F(id) is not the identity"),
        );
    }
    let results: Vec<Result<(), String>> = (0..posets.len())
        .into_par_iter()
        .flat_map_iter(|a| (0..posets.len()).map(move |b| (a, b)))
        .flat_map_iter(|(a, b)| {
            let taus = &taus;
            monotone_maps(&posets[a], &posets[b])
                .into_iter()
                .map(
                    move |f| match mapping::tau_naturality(&f, &taus[a], &taus[b]) {
                        Ok(true) => Ok(()),
                        Ok(false) => Err(format!("tau square at poset #{a} -> #{b}")),
                        Err(e) => Err(e.to_string()),
                    },
                )
        })
        .collect();
    for r in results {
        t.check(r.is_ok(), || r.unwrap_err());
    }
    let tiny: Vec<usize> = (0..posets.len())
        .filter(|&k| posets[k].len() <= 2)
        .collect();
    for &a in &tiny {
        for &b in &tiny {
            for &c in &tiny {
                for f in monotone_maps(&posets[a], &posets[b]) {
                    for g in monotone_maps(&posets[b], &posets[c]) {
                        let fm = |m: &MonotoneMap, x: usize, y: usize| {
                            mapping::f_on_morphism(m, taus[x].fd.clone(), taus[y].fd.clone())
                        };
                        let ok = match (fm(&f.then(&g), a, c), fm(&f, a, b), fm(&g, b, c)) {
                            (Ok(fg), Ok(ff), Ok(gg)) => ff.then(&gg).is_ok_and(|x| x == fg),
                            _ => false,
                        };
                        t.check(ok, || format!("F composite at posets #{a}, #{b}, #{c}"));
                    }
                }
            }
        }
    }

    // C and δ over CF-approximable relations
    let sps = spaces(opts);
    let sc: Vec<SpaceCtx> = sps
        .par_iter()
        .filter_map(|s| {
            cf::delta(s).ok().map(|delta| SpaceCtx {
                space: s.clone(),
                delta,
            })
        })
        .collect();
    if sc.len() != sps.len() {
        t.fail(format!("{} spaces without delta", sps.len() - sc.len()));
    }
    for (k, c) in sc.iter().enumerate() {
        let cid = cf::c_on_morphism_with(
            &CfRelation::identity(c.space.clone()),
            c.delta.cu.clone(),
            c.delta.cu.clone(),
        );
        t.check(
            cid == ApproximableMapping::identity(c.delta.cu.clone()),
            || format!("space #{k}: C(Id) is not the identity"),
        );
    }
    let small: Vec<usize> = (0..sc.len())
        .filter(|&k| sc[k].space.len() <= 2 && sc[k].space.family().len() <= 2)
        .collect();
    let results: Vec<Result<(), String>> = small
        .par_iter()
        .flat_map_iter(|&a| small.iter().map(move |&b| (a, b)))
        .flat_map_iter(|(a, b)| {
            let (u, v) = (&sc[a], &sc[b]);
            let m = v.space.family().len();
            let n = u.space.family().len();
            (0..1u64 << (n * m)).filter_map(move |code| {
                let rows = (0..n)
                    .map(|f| BitSet::from_bits(code >> (f * m) & ((1 << m) - 1)))
                    .collect();
                let d = CfRelation::from_rows(u.space.clone(), v.space.clone(), rows);
                d.is_valid().then(|| relation_squares(&d, u, v))
            })
        })
        .collect();
    for r in results {
        t.check(r.is_ok(), || format!("relation: {}", r.unwrap_err()));
    }
    let mut found = 0;
    let mut attempts = 0u64;
    while found < opts.random_morphisms && attempts < 200 * opts.random_morphisms as u64 {
        attempts += 1;
        let pick = |rng: &mut Xoshiro256StarStar| (rng.next_u64() % sc.len() as u64) as usize;
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let s = rng.next_u64();
        let Some(d) = generators::random_cf_relation(&sc[a].space, &sc[b].space, s) else {
            continue;
        };
        found += 1;
        let r = relation_squares(&d, &sc[a], &sc[b]);
        t.check(r.is_ok(), || {
            format!("random relation seed {s}: {}", r.unwrap_err())
        });
        let s2 = rng.next_u64();
        if let Some(o) = (s2..s2 + 50)
            .find_map(|x| generators::random_cf_relation(&sc[b].space, &sc[c].space, x))
        {
            let r = relation_composite(&d, &o, &sc[a], &sc[b], &sc[c]);
            t.check(r.is_ok(), || {
                format!("random composite seeds {s}/{s2}: {}", r.unwrap_err())
            });
        }
    }
    if found < opts.random_morphisms {
        t.fail(format!("only {found} random relations found"));
    }
    t.finish()
}

/// 6: operator laws on every relation over universes of up to
/// `rough_max` elements.
pub fn rough_laws(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(6, "rough-set operator laws");
    for n in 1..=opts.rough_max {
        let ids: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
        let failures: Vec<(u64, String)> = (0..1u64 << (n * n))
            .into_par_iter()
            .filter_map(|code| {
                let theta = Relation::from_fn(n, |x, y| code >> (x * n + y) & 1 == 1);
                let g = GaSpace::from_relation(ids.clone(), theta).expect("ids are valid");
                match g.operator_laws() {
                    Ok(l) if l.passed() => None,
                    Ok(l) => Some((code, l.failures.join("; "))),
                    Err(e) => Some((code, e.to_string())),
                }
            })
            .collect();
        t.checked += 1usize << (n * n);
        for (code, msg) in failures {
            t.fail(format!("n={n} relation {code:#x}: {msg}"));
        }
    }
    t.finish()
}

/// 7: `C` and `E` transport the space and frame properties.
pub fn cf_transport(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(7, "CF transport");
    let results: Vec<Result<(), String>> = spaces(opts)
        .par_iter()
        .map(|s| {
            let r = s.validate();
            let f = Arc::new(cf::c_on_object(s).map_err(|e| e.to_string())?);
            let p = f.classify().map_err(|e| e.to_string())?;
            if !p.strong {
                return Err("C(U) is not strong".into());
            }
            if r.topological && !p.algebraic {
                return Err("topological but C(U) is not algebraic".into());
            }
            if r.has_m() && (f.truth().is_none() || p.truth_elements.is_empty()) {
                return Err("(M) but C(U) has no truth element".into());
            }
            StateDomain::new(f).map_err(|e| format!("D(C(U)): {e}"))?;
            Ok(())
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        t.check(r.is_ok(), || format!("space #{k}: {}", r.unwrap_err()));
    }
    let results: Vec<Result<(), String>> = frames(opts)
        .par_iter()
        .map(|f| {
            let p = f.classify().map_err(|e| e.to_string())?;
            let e = cf::e_on_object(f).map_err(|e| e.to_string())?;
            let r = e.validate();
            if !r.valid() {
                return Err(format!("E(A) invalid: {}", r.violations[0]));
            }
            if r.topological != p.algebraic {
                return Err("topological(E(A)) differs from algebraic(A)".into());
            }
            if !p.truth_elements.is_empty() && !r.has_m() {
                return Err("truth element but E(A) lacks (M)".into());
            }
            Ok(())
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        t.check(r.is_ok(), || format!("frame #{k}: {}", r.unwrap_err()));
    }
    t.finish()
}

/// 8: both roundtrips of `δ` on every space and of `γ` on every frame.
pub fn delta_gamma_roundtrips(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(8, "delta and gamma roundtrips");
    let results: Vec<Result<Vec<&'static str>, String>> = spaces(opts)
        .par_iter()
        .map(|s| {
            cf::delta(s)
                .and_then(|d| d.roundtrip_failures())
                .map_err(|e| e.to_string())
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let ok = matches!(&r, Ok(v) if v.is_empty());
        t.check(ok, || format!("space #{k}: {r:?}"));
    }
    let results: Vec<Result<Vec<&'static str>, String>> = frames(opts)
        .par_iter()
        .map(|f| {
            cf::gamma(f)
                .and_then(|g| g.roundtrip_failures())
                .map_err(|e| e.to_string())
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let ok = matches!(&r, Ok(v) if v.is_empty());
        t.check(ok, || format!("frame #{k}: {r:?}"));
    }
    t.finish()
}

/// 9: the named fixtures.
pub fn fixture_regressions() -> Criterion {
    let mut t = Tally::new(9, "fixture regressions");
    let count = |f: InformationFrame| states::enumerate_states(&f).map(|s| s.len()).ok();
    t.check(count(fixtures::f_unit()) == Some(1), || {
        "F_unit state count".into()
    });
    t.check(count(fixtures::f_chain2()) == Some(2), || {
        "F(P_chain2) state count".into()
    });
    t.check(count(fixtures::f_diamond()) == Some(4), || {
        "F(P_diamond) state count".into()
    });
    let unit = fixtures::u_unit();
    let r = unit.validate();
    t.check(r.valid() && r.topological && r.has_m(), || {
        "U_unit flags".into()
    });
    let e = fixtures::u_empty_f();
    let r = e.validate();
    t.check(r.valid() && !r.topological && r.has_m(), || {
        "U_emptyF flags".into()
    });
    t.finish()
}

fn round_trip(doc: &Document) -> Result<bool, io::IoError> {
    let text = io::serialize(doc);
    let back = io::parse(&text)?;
    Ok(io::serialize(&back) == text && back == *doc)
}

/// 10: every generated structure survives `serialize ∘ parse ∘ serialize`
/// byte for byte.
pub fn io_round_trips(opts: &VerifyOptions) -> Criterion {
    let mut t = Tally::new(10, "text format round trips");
    for (k, p) in posets_up_to(opts.poset_max).into_iter().enumerate() {
        let mut doc = Document::new();
        doc.push("p", Structure::Poset(Arc::new(p)));
        t.result(&format!("poset #{k}"), round_trip(&doc));
    }
    let fs = frames(opts);
    for (k, f) in fs.iter().enumerate() {
        let mut doc = Document::new();
        doc.push("a", Structure::Frame(f.clone()));
        if let Some(h) =
            generators::random_mappings(f, f, opts.seed.wrapping_add(k as u64), 1, 20).pop()
        {
            doc.push(
                "h",
                Structure::Mapping {
                    source: "a".into(),
                    target: "a".into(),
                    mapping: h,
                },
            );
        }
        t.result(&format!("frame #{k}"), round_trip(&doc));
    }
    for (k, s) in spaces(opts).iter().enumerate() {
        let mut doc = Document::new();
        doc.push("u", Structure::CfSpace(s.clone()));
        if let Some(d) = generators::random_cf_relation(s, s, opts.seed.wrapping_add(k as u64)) {
            doc.push(
                "d",
                Structure::CfRelation {
                    source: "u".into(),
                    target: "u".into(),
                    relation: d,
                },
            );
        }
        t.result(&format!("space #{k}"), round_trip(&doc));
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass() {
        assert!(fixture_regressions().passed());
    }

    #[test]
    fn suites_parse() {
        assert_eq!("rough".parse::<Suite>(), Ok(Suite::Rough));
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(Suite::Equivalence.criteria().len(), 10);
    }
}
