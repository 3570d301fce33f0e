//! The acceptance matrix: criteria 1 to 10 at their stated bounds, one
//! line per criterion. Lines go straight to stderr so they show up even
//! when the harness captures output.

use std::io::Write;
use std::time::Duration;

use dfk_core::verify::{run_criterion, Criterion, VerifyOptions};

/// Wall-clock budgets, where one is stated.
fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(10)),
        2 => Some(Duration::from_secs(300)),
        4 => Some(Duration::from_secs(60)),
        6 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

/// Exact instance counts, where the population is fixed by the bounds.
fn expected_count(id: u8) -> Option<usize> {
    match id {
        // labeled posets on 1..=4 elements
        1 => Some(1 + 3 + 19 + 219),
        // plus 4231 on five elements
        4 => Some(1 + 3 + 19 + 219 + 4231),
        // every relation on 1..=4 elements
        6 => Some(2 + 16 + 512 + 65536),
        9 => Some(5),
        _ => None,
    }
}

fn verdict(c: &Criterion) -> Result<(), String> {
    if !c.passed() {
        return Err(format!(
            "{} failures, first: {:?}",
            c.failure_count,
            c.failures.first()
        ));
    }
    if let Some(n) = expected_count(c.id) {
        if c.checked != n {
            return Err(format!("checked {} instances, expected {n}", c.checked));
        }
    }
    if let Some(b) = budget(c.id) {
        if c.elapsed > b {
            return Err(format!(
                "took {:.2}s, budget {}s",
                c.elapsed.as_secs_f64(),
                b.as_secs()
            ));
        }
    }
    Ok(())
}

#[test]
fn acceptance_matrix() {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for id in 1..=10 {
        let c = run_criterion(id, &opts);
        let v = verdict(&c);
        let status = if v.is_ok() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            err,
            "acceptance {:>2} {status}: {} ({} checked, {:.2}s)",
            c.id,
            c.title,
            c.checked,
            c.elapsed.as_secs_f64()
        );
        if let Err(why) = v {
            let _ = writeln!(err, "    {why}");
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
