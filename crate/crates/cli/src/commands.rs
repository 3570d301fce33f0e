use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use dfk_core::cf;
use dfk_core::generators::{self, GenBounds};
use dfk_core::io::{self, Document, Structure};
use dfk_core::mapping;
use dfk_core::set::render_set;
use dfk_core::states::{self, StateDomain};
use dfk_core::verify::{self, Suite, VerifyOptions};
use dfk_core::{CfSpace, InformationFrame};

use crate::report::Report;
use crate::{Functor, Kind, Via};

/// A report, or none when the command wrote its result elsewhere, and
/// whether every check passed.
pub type Outcome = Result<(Option<Report>, bool)>;

fn load(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn save(path: &Path, doc: &Document) -> Result<()> {
    fs::write(path, io::serialize(doc)).with_context(|| format!("writing {}", path.display()))
}

fn frame_summary(f: &InformationFrame) -> Result<String> {
    let p = f.classify()?;
    let flags: Vec<&str> = [
        (p.strong, "strong"),
        (p.algebraic, "algebraic"),
        (p.conservative, "conservative"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    let truth: Vec<&str> = p.truth_elements.iter().map(|i| f.token(i)).collect();
    let mut out = String::from("valid");
    if !flags.is_empty() {
        out.push_str("; ");
        out.push_str(&flags.join(" "));
    }
    out.push_str("; truth: ");
    out.push_str(&if truth.is_empty() {
        "none".into()
    } else {
        truth.join(" ")
    });
    Ok(out)
}

fn space_summary(s: &CfSpace) -> String {
    let r = s.validate();
    let mut out = String::from("valid");
    if r.topological {
        out.push_str("; topological");
    }
    if r.has_m() {
        out.push_str("; (M)");
    }
    out
}

pub fn check(path: &Path) -> Outcome {
    let doc = load(path)?;
    let mut r = Report::new();
    let mut ok = true;
    for item in &doc.items {
        r.line("ITEM", format!("{} ({})", item.name, item.structure.kind()));
        let violations: Vec<String> = match &item.structure {
            Structure::Poset(p) => {
                let pointed = if p.is_pointed() { "; pointed" } else { "" };
                r.line("RESULT", format!("valid; {} elements{pointed}", p.len()));
                continue;
            }
            Structure::Frame(f) => {
                let rep = f.validate();
                if rep.valid() {
                    r.line("RESULT", frame_summary(f)?);
                    continue;
                }
                rep.violations.iter().map(|v| v.to_string()).collect()
            }
            Structure::CfSpace(s) => {
                let rep = s.validate();
                if rep.valid() {
                    r.line("RESULT", space_summary(s));
                    continue;
                }
                rep.violations.iter().map(|v| v.to_string()).collect()
            }
            Structure::Mapping { mapping: h, .. } => {
                let rep = h.validate();
                if rep.valid() {
                    let t = match rep.respects_truth {
                        Some(true) => "; respects truth",
                        Some(false) => "; does not respect truth",
                        None => "",
                    };
                    r.line("RESULT", format!("valid{t}"));
                    continue;
                }
                rep.violations.iter().map(|v| v.to_string()).collect()
            }
            Structure::CfRelation { relation: d, .. } => {
                let rep = d.validate();
                if rep.valid() {
                    r.line("RESULT", "valid");
                    continue;
                }
                rep.violations.iter().map(|v| v.to_string()).collect()
            }
        };
        ok = false;
        r.line("RESULT", "invalid");
        for v in violations {
            r.line("VIOLATION", v);
        }
    }
    Ok((Some(r), ok))
}

fn pick_frame(doc: &Document, name: Option<&str>) -> Result<(String, Arc<InformationFrame>)> {
    doc.items
        .iter()
        .find_map(|n| match &n.structure {
            Structure::Frame(f) if name.is_none_or(|x| x == n.name) => {
                Some((n.name.clone(), f.clone()))
            }
            _ => None,
        })
        .ok_or_else(|| match name {
            Some(x) => anyhow!("no frame named `{x}`"),
            None => anyhow!("the file contains no frame"),
        })
}

pub fn states(path: &Path, name: Option<&str>) -> Outcome {
    let doc = load(path)?;
    let (name, f) = pick_frame(&doc, name)?;
    let mut r = Report::new();
    r.line("FRAME", name);
    let rep = f.validate();
    if !rep.valid() {
        r.line("RESULT", "invalid");
        for v in &rep.violations {
            r.line("VIOLATION", v.to_string());
        }
        return Ok((Some(r), false));
    }
    let d = match StateDomain::new(f.clone()) {
        Ok(d) => d,
        Err(e) => {
            let n = states::enumerate_states(&f).map_or(0, |s| s.len());
            r.line("STATES", n.to_string());
            r.line("ERROR", e.to_string());
            return Ok((Some(r), false));
        }
    };
    let p = d.poset();
    r.line("STATES", d.len().to_string());
    for (k, &z) in d.states().iter().enumerate() {
        r.line(
            "STATE",
            format!("{} = {}", p.id(k), render_set(z, f.tokens())),
        );
    }
    for (x, y) in p.covers() {
        r.line("EDGE", format!("{} < {}", p.id(x), p.id(y)));
    }
    Ok((Some(r), true))
}

pub fn apply(functor: Functor, path: &Path, out: &Path) -> Outcome {
    let doc = load(path)?;
    let mut frames: HashMap<&str, Arc<InformationFrame>> = HashMap::new();
    let mut spaces: HashMap<&str, Arc<CfSpace>> = HashMap::new();
    let mut result = Document::new();
    for item in &doc.items {
        let name = item.name.as_str();
        let s = &item.structure;
        let produced = match (functor, s) {
            (Functor::D, Structure::Frame(f)) => {
                let d = StateDomain::new(f.clone()).with_context(|| format!("D({name})"))?;
                Structure::Poset(d.poset().clone())
            }
            (Functor::F, Structure::Poset(p)) => {
                let f = mapping::f_on_object(p, p.all()).with_context(|| format!("F({name})"))?;
                Structure::Frame(Arc::new(f))
            }
            (Functor::C, Structure::CfSpace(u)) => {
                let f = Arc::new(cf::c_on_object(u).with_context(|| format!("C({name})"))?);
                frames.insert(name, f.clone());
                Structure::Frame(f)
            }
            (Functor::C, Structure::CfRelation { source, target, relation }) => {
                let d = cf::c_on_morphism_with(relation, frames[source.as_str()].clone(), frames[target.as_str()].clone());
                Structure::Mapping {
                    source: source.clone(),
                    target: target.clone(),
                    mapping: d,
                }
            }
            (Functor::E, Structure::Frame(f)) => {
                let u = Arc::new(cf::e_on_object(f).with_context(|| format!("E({name})"))?);
                spaces.insert(name, u.clone());
                Structure::CfSpace(u)
            }
            (Functor::E, Structure::Mapping { source, target, mapping }) => {
                let d = cf::e_on_morphism_with(mapping, spaces[source.as_str()].clone(), spaces[target.as_str()].clone());
                Structure::CfRelation {
                    source: source.clone(),
                    target: target.clone(),
                    relation: d,
                }
            }
            (_, s) => bail!(
                "{functor:?} does not apply to `{name}` ({}); D takes frames, F posets, C cfspaces and cfrelations, E frames and mappings",
                s.kind()
            ),
        };
        result.push(name, produced);
    }
    save(out, &result)?;
    let mut r = Report::new();
    r.line("FUNCTOR", format!("{functor:?}"));
    r.line("ITEMS", result.items.len().to_string());
    r.line("WROTE", out.display().to_string());
    Ok((Some(r), true))
}

pub fn roundtrip(path: &Path, via: Via) -> Outcome {
    let doc = load(path)?;
    let mut r = Report::new();
    let mut ok = true;
    let mut any = false;
    for item in &doc.items {
        let (labels, failures) = match (via, &item.structure) {
            (Via::Domains, Structure::Frame(f)) => (
                "S∘T = Id, T∘S = Id",
                mapping::eta(f)?.pair.roundtrip_failures()?,
            ),
            (Via::Domains, Structure::Poset(p)) => (
                "sp∘st = id, st∘sp = id",
                mapping::tau(p)?.roundtrip_failures()?,
            ),
            (Via::Frames, Structure::CfSpace(u)) => {
                ("Υ∘Γ = Id, Γ∘Υ = Id", cf::delta(u)?.roundtrip_failures()?)
            }
            (Via::Cfspaces, Structure::Frame(f)) => {
                ("Q∘P = Id, P∘Q = Id", cf::gamma(f)?.roundtrip_failures()?)
            }
            (_, s) => {
                r.line("SKIPPED", format!("{} ({})", item.name, s.kind()));
                continue;
            }
        };
        any = true;
        if failures.is_empty() {
            r.line("ROUNDTRIP", format!("{}: {labels}", item.name));
        } else {
            ok = false;
            for f in failures {
                r.line("FAILED", format!("{}: {f}", item.name));
            }
        }
    }
    if !any {
        bail!(
            "nothing in {} can make a round trip via {via:?}",
            path.display()
        );
    }
    Ok((Some(r), ok))
}

fn parse_bounds(text: &str, keys: &[&str]) -> Result<HashMap<String, usize>> {
    let mut out = HashMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("bound `{part}` is not of the form key=value"))?;
        let (k, v) = (k.trim(), v.trim());
        if !keys.contains(&k) {
            bail!("unknown bound `{k}`; expected one of {}", keys.join(", "));
        }
        let n = v.parse().with_context(|| format!("bound `{k}`"))?;
        out.insert(k.to_string(), n);
    }
    Ok(out)
}

fn gen_bounds(b: &HashMap<String, usize>) -> GenBounds {
    let d = GenBounds::default();
    GenBounds {
        max_tokens: *b.get("tokens").unwrap_or(&d.max_tokens),
        max_con: *b.get("con").unwrap_or(&d.max_con),
        max_elements: *b.get("elements").unwrap_or(&d.max_elements),
        max_family: *b.get("family").unwrap_or(&d.max_family),
    }
}

pub fn generate(
    kind: Kind,
    bounds: &str,
    seed: Option<u64>,
    count: Option<usize>,
    out: Option<&Path>,
) -> Outcome {
    let b = parse_bounds(bounds, &["tokens", "con", "elements", "family"])?;
    let gb = gen_bounds(&b);
    let (prefix, mut all): (&str, Vec<Structure>) = match kind {
        Kind::Poset => {
            let n = *b.get("elements").unwrap_or(&3);
            let limit = dfk_core::raised_cap(generators::POSET_LIMIT);
            if n > limit {
                bail!("bound elements={n} exceeds the poset cap {limit}; set DFK_MAX_BOUND to raise it");
            }
            let mut v = Vec::new();
            for k in 1..=n {
                v.extend(
                    generators::enum_posets(k)?
                        .into_iter()
                        .map(|p| Structure::Poset(Arc::new(p))),
                );
            }
            ("p", v)
        }
        Kind::Frame => (
            "a",
            generators::enum_frames(&gb)?
                .into_iter()
                .map(|f| Structure::Frame(Arc::new(f)))
                .collect(),
        ),
        Kind::Cfspace => (
            "u",
            generators::enum_cf_spaces(&gb)?
                .into_iter()
                .map(|s| Structure::CfSpace(Arc::new(s)))
                .collect(),
        ),
    };
    let total = all.len();
    let keep = count
        .unwrap_or(if seed.is_some() { 1 } else { total })
        .min(total);
    if let Some(seed) = seed {
        // partial Fisher-Yates: the first `keep` slots are a uniform sample
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        for i in 0..keep {
            let j = i + (rng.next_u64() % (total - i) as u64) as usize;
            all.swap(i, j);
        }
    }
    all.truncate(keep);
    let mut doc = Document::new();
    for (k, s) in all.into_iter().enumerate() {
        doc.push(format!("{prefix}{k}"), s);
    }
    match out {
        Some(path) => {
            save(path, &doc)?;
            let mut r = Report::new();
            r.line("ENUMERATED", total.to_string());
            r.line("GENERATED", doc.items.len().to_string());
            r.line("WROTE", path.display().to_string());
            Ok((Some(r), true))
        }
        None => {
            print!("{}", io::serialize(&doc));
            Ok((None, true))
        }
    }
}

pub fn verify(suite: &str, bounds: &str, seed: u64) -> Outcome {
    let suite: Suite = suite.parse().map_err(|e: String| anyhow!(e))?;
    let b = parse_bounds(
        bounds,
        &[
            "tokens", "con", "elements", "family", "posets", "tau", "rough", "random",
        ],
    )?;
    let d = VerifyOptions::default();
    let opts = VerifyOptions {
        gen: gen_bounds(&b),
        poset_max: *b.get("posets").unwrap_or(&d.poset_max),
        tau_max: *b.get("tau").unwrap_or(&d.tau_max),
        rough_max: *b.get("rough").unwrap_or(&d.rough_max),
        random_morphisms: *b.get("random").unwrap_or(&d.random_morphisms),
        seed,
    };
    check_verify_bounds(&opts)?;
    let mut r = Report::new();
    r.line("SUITE", format!("{suite:?}").to_lowercase());
    r.line("SEED", seed.to_string());
    let mut ok = true;
    for c in verify::run_suite(suite, &opts) {
        ok &= c.passed();
        r.line(
            "CRITERION",
            format!(
                "{} {} {}; checked {}; failed {}",
                c.id,
                if c.passed() { "PASS" } else { "FAIL" },
                c.title,
                c.checked,
                c.failure_count
            ),
        );
        for w in &c.failures {
            r.line("WITNESS", format!("{} {w}", c.id));
        }
        r.volatile(
            "ELAPSED",
            format!("{} {:.3}s", c.id, c.elapsed.as_secs_f64()),
        );
    }
    r.line("RESULT", if ok { "PASS" } else { "FAIL" });
    Ok((Some(r), ok))
}

/// The suites enumerate eagerly; refuse sizes the generators would reject
/// before any work starts.
fn check_verify_bounds(o: &VerifyOptions) -> Result<()> {
    let cap = |what: &str, v: usize, limit: usize| {
        if v > dfk_core::raised_cap(limit) {
            bail!("bound {what}={v} exceeds the cap {limit}; set DFK_MAX_BOUND to raise it");
        }
        Ok(())
    };
    cap("posets", o.poset_max, generators::POSET_LIMIT)?;
    cap("tau", o.tau_max, generators::POSET_LIMIT)?;
    cap("rough", o.rough_max, 4)?;
    Ok(())
}
