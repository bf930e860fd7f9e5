//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails if a criterion fails unexpectedly; the one criterion
//! known to be unattainable as stated prints FAIL and asserts the computed
//! values instead.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use steenrod_poly::hai_bridge::{counterexample_report, counterexample_report_for, free_module, reference_f_dim};
use steenrod_poly::steenrod::{adem_normalize, AdemConvention, SteenrodAlgebra};
use steenrod_poly::strictpoly::{hom_p, FunctorSpec};
use steenrod_poly::unstable::{build_f1, hom_u};
use steenrod_poly::verify::*;
use steenrod_poly::{Prime, Result};

struct Line {
    id: &'static str,
    passed: bool,
    /// Failure was anticipated and its computed values were confirmed.
    expected_failure: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

fn all(outcomes: Vec<Outcome>) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for o in outcomes {
        let (b, d) = o?;
        ok &= b;
        parts.push(d);
    }
    Ok((ok, parts.join(" | ")))
}

fn timed(id: &'static str, budget_s: u64, f: impl FnOnce() -> Result<(bool, String)>) -> Line {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    Line { id, passed: passed && elapsed <= budget, expected_failure: false, detail, elapsed, budget }
}

fn c1() -> Result<(bool, String)> {
    let p2 = pr(2);
    let p3 = pr(3);
    let zero = adem_normalize(&[1, 1], p2).is_zero();
    let p2p2 = adem_normalize(&[2, 2], p2) == SteenrodAlgebra::new(p2, AdemConvention::Printed).monomial(&[3, 1]);
    let p3_11 = adem_normalize(&[1, 1], p3) == SteenrodAlgebra::new(p3, AdemConvention::Printed).monomial(&[2]);
    let (a2, f2) = associativity(p2, AdemConvention::Printed, 500, 11)?;
    let (a3, f3) = associativity(p3, AdemConvention::Signed, 500, 11)?;
    let idem = adem_idempotence(p2, 500, 11)?.0 && adem_idempotence(p3, 500, 11)?.0;
    Ok((
        zero && p2p2 && p3_11 && f2 == 0 && f3 == 0 && idem,
        format!(
            "P1P1=0: {zero}, P2P2=P3P1: {p2p2}, P1P1=P2 at p=3 (printed): {p3_11}, idempotent: {idem}, \
             associative {a2}/500 at p=2, {a3}/500 at p=3 (signed)"
        ),
    ))
}

fn c6_p3() -> Result<(bool, bool, String)> {
    let p = pr(3);
    let r = counterexample_report(p, 32)?;
    let direct = hom_u(&free_module(2, p, 32)?, &build_f1(p, 32)?, 32)?.dim();
    let g = counterexample_report_for(p, 3, 32)?;
    let literal = r.dim_p == 0 && direct == 1;
    // F(2) sits in degrees 3^a + 3^b, none a power of 3, so Hom_U(F(2), F(1)) = 0.
    let confirmed = r.dim_p == 0 && direct == 0 && r.dim_u == 0 && g.dim_p == 0 && g.dim_u == 1;
    Ok((
        literal,
        confirmed,
        format!(
            "p=3: dim Hom_P(Γ2,Γ1) = {}, dim Hom_U(F(2),F(1)) = {direct} (claimed 1; zero for degree reasons); \
             analogue Γ3→Γ1: dimP = {}, dimU = {}, witness {:?}",
            r.dim_p, g.dim_p, g.dim_u, g.witness
        ),
    ))
}

fn main() -> ExitCode {
    let p2 = pr(2);
    let p3 = pr(3);
    let mut lines = vec![
        timed("1", 5, c1),
        timed("2", 30, || all(vec![action_consistency(p2, 64, 200, 21), action_consistency(p3, 81, 50, 21)])),
        timed("3", 20, || all((1..=3).map(|n| free_invariants_identity(p2, n, 40)).collect())),
        timed("4", 60, || {
            let dim_p = hom_p(&FunctorSpec::Gamma(vec![2, 1]), &FunctorSpec::SymParam { d: 3, m: 1 }, 3, p2)?.dim();
            let (ok, detail) = headline_example(p2, &[24, 32, 48])?;
            let f = reference_f_dim(&[2, 1], 1, p2);
            Ok((ok && dim_p == 1 && f == Some(2), format!("{detail} (Hom_P recomputed: {dim_p})")))
        }),
        timed("5", 600, || {
            all(vec![theorem_sweep(p2, 3, 2, &[24, 32, 48]), theorem_sweep(p3, 2, 1, &[27, 54, 81])])
        }),
    ];

    let start = Instant::now();
    let p2_part = counterexample(p2, 32);
    let p3_part = c6_p3();
    let elapsed = start.elapsed();
    let (ok2, d2) = p2_part.unwrap_or_else(|e| (false, format!("error: {e}")));
    let (lit3, conf3, d3) = p3_part.unwrap_or_else(|e| (false, false, format!("error: {e}")));
    lines.push(Line {
        id: "6 (p=2)",
        passed: ok2 && elapsed <= Duration::from_secs(5),
        expected_failure: false,
        detail: d2,
        elapsed,
        budget: Duration::from_secs(5),
    });
    lines.push(Line {
        id: "6 (p=3)",
        passed: lit3,
        expected_failure: !lit3 && conf3,
        detail: d3,
        elapsed,
        budget: Duration::from_secs(5),
    });

    lines.push(timed("7", 5, || reduced_witness(p2, 48)));
    lines.push(timed("8", 20, || all(vec![stee_properties(p2, 64, 100, 31), stee_properties(p3, 81, 100, 31)])));
    lines.push(timed("9", 60, || {
        let mut v = Vec::new();
        for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            v.push(modnil_free_tensor(p2, n, m, 128, 16));
        }
        for n in 1..=3 {
            v.push(modnil_tensor_power(p2, n, 128, 16));
        }
        v.push(modnil_omega(p2, &[2, 1], 3, 128, 16));
        all(v)
    }));
    lines.push(timed("10", 120, || {
        let mut v: Vec<Outcome> = [2, 3, 5].iter().map(|&p| comb_oracle(pr(p), 256, 8)).collect();
        v.push(comb_blocks(p2, 3, 8));
        v.push(comb_blocks(p3, 3, 8));
        v.push(comb_warning_instance());
        all(v)
    }));

    let mut unexpected = 0;
    for l in &lines {
        let tag = if l.passed { "PASS" } else { "FAIL" };
        let note = if l.expected_failure { " [unattainable as stated; computed values confirmed]" } else { "" };
        println!(
            "{tag} criterion {}: {} ({:.2}s, budget {}s){note}",
            l.id,
            l.detail,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs()
        );
        if !l.passed && !l.expected_failure {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
