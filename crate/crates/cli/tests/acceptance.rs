//! End-to-end acceptance: one PASS/FAIL line per criterion. Tolerances are
//! pinned here rather than read from the configuration, so loosening a
//! default cannot make this suite pass.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use hpowers_cli::measure;
use hpowers_heisenberg::SliceGrid;
use hpowers_rumin::LaplacianConvention;

const SEED: u64 = 20_240_601;

const RESIDUE_REL: f64 = 1e-8;
const RESIDUE_CASES: usize = 50;
const HOMOGENEITY_REL: f64 = 1e-12;
const REDUCTION_ABS: f64 = 1e-10;
const DEGREE_ABS: f64 = 0.1;
const GRID_DRIFT: f64 = 0.1;
const PROBE_RATIO: f64 = 10.0;
const COMPLEX_REL: f64 = 1e-10;
const LMAX: usize = 40;
const WEYL_ABS: f64 = 0.15;
const CONTOUR_REL: f64 = 1e-8;
const SEMIGROUP_REL: f64 = 1e-10;
const SEMIGROUP_PAIRS: usize = 10;
const CONVENTIONS: [f64; 2] = [1.0, 2.0];

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: String) -> Outcome {
    Outcome { passed, summary }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let t = start.elapsed();
    if let Some(limit) = limit {
        o.summary.push_str(&format!("; {:.2}s (limit {}s)", t.as_secs_f64(), limit.as_secs()));
        o.passed &= t < limit;
    } else {
        o.summary.push_str(&format!("; {:.2}s", t.as_secs_f64()));
    }
    o
}

fn criterion_1() -> Outcome {
    let r = measure::binomial_match(4).unwrap();
    let bad: Vec<_> = r.iter().filter(|m| !m.mismatched_depths.is_empty()).map(|m| m.operator.clone()).collect();
    outcome(r.len() == 10 && bad.is_empty(), format!("{} operators, {} differ from the binomial oracle {bad:?}", r.len(), bad.len()))
}

fn criterion_2() -> Outcome {
    let r = measure::parametrix_battery(3).unwrap();
    let ok = r.len() == 5 && r.iter().all(|p| p.first_failure.is_none() && p.lower_order_terms && p.bookkeeping);
    let fails: Vec<_> = r.iter().filter(|p| p.first_failure.is_some()).map(|p| (&p.operator, p.first_failure)).collect();
    outcome(ok, format!("{} operators, nonzero residuals {fails:?}", r.len()))
}

fn criterion_3() -> Outcome {
    let r = measure::residue_matrix(SEED, RESIDUE_CASES, 512).unwrap();
    outcome(
        r.cases == RESIDUE_CASES && r.worst_relative_error < RESIDUE_REL && r.normalizations_exact,
        format!("worst rel. err {:.3e} over {} cases, normalizations exact: {}", r.worst_relative_error, r.cases, r.normalizations_exact),
    )
}

fn criterion_4() -> Outcome {
    let r = measure::homogeneity_audit(SEED, 4).unwrap();
    outcome(
        r.worst_resolvent_error < HOMOGENEITY_REL && r.worst_power_error < HOMOGENEITY_REL && r.degree_law,
        format!(
            "resolvent {:.3e} (unscaled {:.3e}) over {} terms, power {:.3e} (unscaled {:.3e}) over {} parts, degree law {}",
            r.worst_resolvent_error,
            r.worst_resolvent_error_unscaled,
            r.resolvent_terms,
            r.worst_power_error,
            r.worst_power_error_unscaled,
            r.power_parts,
            r.degree_law
        ),
    )
}

fn criterion_5() -> Outcome {
    let r = measure::reduction(SEED, 4).unwrap();
    outcome(
        r.constant_mismatches.is_empty() && r.constant_worst_deviation < REDUCTION_ABS && r.variable_worst_deviation < REDUCTION_ABS,
        format!(
            "constant: {} symbolic mismatches, {:.3e} (raw {:.3e}); variable: {:.3e} (raw {:.3e})",
            r.constant_mismatches.len(),
            r.constant_worst_deviation,
            r.constant_worst_raw,
            r.variable_worst_deviation,
            r.variable_worst_raw
        ),
    )
}

fn criterion_6() -> Outcome {
    let r = measure::star_degrees(1.0, SliceGrid::new(8.0, 128).unwrap()).unwrap();
    let worst = r.iter().map(|s| s.worst_degree_error()).fold(0.0, f64::max);
    let drift = r.iter().map(|s| s.grid_drift).fold(0.0, f64::max);
    outcome(
        r.len() == 6 && worst <= DEGREE_ABS && drift < GRID_DRIFT,
        format!("{} pairs, worst |fitted - (m1+m2)| {worst:.4}, grid drift 128->256 {:.2}%", r.len(), 100.0 * drift),
    )
}

fn criterion_7() -> Outcome {
    let lambdas = measure::parse_sweep("0:2:0.1").unwrap();
    let r = measure::non_microlocality(1.0, SliceGrid::new(8.0, 128).unwrap(), 0.1, 1e-4, &lambdas).unwrap();
    let h = &r.probe.heisenberg_diff;
    let margin = h.value / h.noise_floor.max(h.grid_drift);
    let gap_ok = r.gap.points[0].lambda == 0.0
        && r.gap.points[0].fraction == 0.0
        && r.gap.points[1..].iter().all(|p| p.lambda > 0.0 && p.fraction > 0.0);
    let min_positive = r.gap.points[1..].iter().map(|p| p.fraction).fold(f64::INFINITY, f64::min);
    outcome(
        r.probe.classical_diff == 0.0 && margin > PROBE_RATIO && gap_ok,
        format!(
            "classical diff {}, Heisenberg diff {:.3e} vs noise floor {:.3e} and grid drift {:.3e} (margin {margin:.3e}), gap fraction 0 at lambda=0 and >= {min_positive:.3e} on {} positive lambdas",
            r.probe.classical_diff,
            h.value,
            h.noise_floor,
            h.grid_drift,
            r.gap.points.len() - 1
        ),
    )
}

fn criterion_8() -> Outcome {
    let rs: Vec<_> = CONVENTIONS.iter().map(|&c| measure::complex_validity(c, LMAX).unwrap()).collect();
    let ok = rs.iter().all(|r| r.worst_complex_defect < COMPLEX_REL && r.worst_db_defect < COMPLEX_REL);
    let s: Vec<String> = rs
        .iter()
        .map(|r| format!("c={}: complex {:.2e}, d_b^2 {:.2e}", r.c, r.worst_complex_defect, r.worst_db_defect))
        .collect();
    outcome(ok, format!("levels 0..={LMAX}; {}", s.join("; ")))
}

fn criterion_9() -> Outcome {
    let dims: Vec<_> = CONVENTIONS.iter().map(|&c| (c, measure::harmonic(c, LaplacianConvention::default(), LMAX).unwrap())).collect();
    outcome(dims.iter().all(|(_, d)| *d == [1, 0, 0, 1]), format!("harmonic dimensions {dims:?} (Betti numbers of S^3: [1, 0, 0, 1])"))
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut s = Vec::new();
    for c in CONVENTIONS {
        for w in measure::weyl(c, LaplacianConvention::default(), LMAX).unwrap() {
            let target = measure::weyl_target(w.slot);
            ok &= (w.exponent - target).abs() <= WEYL_ABS;
            s.push(format!("c={c} slot {}: {:.3} (target {target})", w.slot, w.exponent));
        }
    }
    outcome(ok, s.join(", "))
}

fn criterion_11() -> Outcome {
    let mut ok = true;
    let mut s = Vec::new();
    for c in CONVENTIONS {
        let r = measure::power_agreement(c, LaplacianConvention::default(), 10, SEED, SEMIGROUP_PAIRS).unwrap();
        ok &= r.worst_contour_deviation < CONTOUR_REL && r.worst_semigroup_deviation < SEMIGROUP_REL && r.pairs.len() == SEMIGROUP_PAIRS;
        s.push(format!(
            "c={c}: contour vs eigen {:.2e}, semigroup {:.2e} over {} pairs",
            r.worst_contour_deviation,
            r.worst_semigroup_deviation,
            r.pairs.len()
        ));
    }
    outcome(ok, s.join("; "))
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hpowers"))
            .args(["verify", "all", "--seed", "7", "--jobs", jobs, "--emit"])
            .arg(&path)
            .env_remove("HPOWERS_CONFIG")
            .env_remove("HPOWERS_SEED")
            .status()
            .unwrap();
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (c1, a) = run("first.json", "1");
    let (c2, b) = run("second.json", "2");
    outcome(
        !a.is_empty() && a == b && c1 == Some(0) && c2 == Some(0),
        format!("two runs: {} and {} bytes, identical: {}, exit codes {c1:?} {c2:?}", a.len(), b.len(), a == b),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: Vec<(u8, &str, Option<u64>, fn() -> Outcome)> = vec![
        (1, "Seeley/binomial exact match", Some(10), criterion_1),
        (2, "parametrix residual", Some(30), criterion_2),
        (3, "residue calculus", None, criterion_3),
        (4, "homogeneity audits", None, criterion_4),
        (5, "integer-power reduction", None, criterion_5),
        (6, "Heisenberg star degree additivity", Some(300), criterion_6),
        (7, "non-microlocality", None, criterion_7),
        (8, "Rumin complex validity", None, criterion_8),
        (9, "cohomology recovery", None, criterion_9),
        (10, "Weyl exponents", Some(120), criterion_10),
        (11, "spectral complex powers", None, criterion_11),
        (12, "determinism of verify all", None, criterion_12),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        let o = timed(limit.map(Duration::from_secs), f);
        // written past the harness's capture so the lines show in plain `cargo test` output
        let mut out = std::io::stdout().lock();
        writeln!(out, "criterion {id:>2} {}: {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.summary).unwrap();
        out.flush().unwrap();
        if !o.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
