//! Invariant suites. Each check compares a measurement against the
//! configured tolerance; suites run their checks on up to `jobs` threads and
//! aggregate in a fixed order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::CliError;
use crate::measure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracle,
    Seeley,
    Heisenberg,
    Rumin,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Oracle, Suite::Seeley, Suite::Heisenberg, Suite::Rumin];
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// Acceptance criterion this check belongs to; 0 for supporting checks.
    pub criterion: u8,
    pub suite: Suite,
    pub name: String,
    pub measured: Value,
    pub requirement: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

fn check(criterion: u8, suite: Suite, name: impl Into<String>, measured: Value, requirement: impl Into<String>, passed: bool) -> Check {
    Check {
        criterion,
        suite,
        name: name.into(),
        measured,
        requirement: requirement.into(),
        passed,
        detail: None,
    }
}

fn below(criterion: u8, suite: Suite, name: impl Into<String>, v: f64, tol: f64) -> Check {
    check(criterion, suite, name, json!(v), format!("< {tol:e}"), v < tol)
}

fn with_detail(mut c: Check, detail: impl Serialize) -> Check {
    c.detail = Some(serde_json::to_value(detail).expect("detail serializes"));
    c
}

type Task<'a> = (u8, Suite, Box<dyn Fn() -> Result<Vec<Check>, CliError> + Send + Sync + 'a>);

fn tasks(cfg: &Config) -> Vec<Task<'_>> {
    let t = &cfg.tolerances;
    let mut v: Vec<Task> = Vec::new();
    v.push((
        1,
        Suite::Oracle,
        Box::new(move || {
            let r = measure::binomial_match(cfg.seeley.depth)?;
            let bad: Vec<_> = r.iter().filter(|m| !m.mismatched_depths.is_empty()).collect();
            let c = check(
                1,
                Suite::Oracle,
                format!("complex powers equal the binomial oracle through depth {}", cfg.seeley.depth),
                json!(bad.len()),
                format!("0 of {} operators differ", r.len()),
                bad.is_empty() && r.len() == 10,
            );
            Ok(vec![with_detail(c, &r)])
        }),
    ));
    v.push((
        2,
        Suite::Seeley,
        Box::new(move || {
            let d = cfg.seeley.parametrix_depth;
            let r = measure::parametrix_battery(d)?;
            let ok = r.iter().all(|p| p.first_failure.is_none() && p.lower_order_terms && p.bookkeeping);
            let failures = r.iter().filter(|p| p.first_failure.is_some()).count();
            let c = check(2, Suite::Seeley, format!("parametrix residual vanishes through depth {d}"), json!(failures), "0 nonzero residuals", ok);
            Ok(vec![with_detail(c, &r)])
        }),
    ));
    v.push((
        3,
        Suite::Oracle,
        Box::new(move || {
            let r = measure::residue_matrix(cfg.run.seed, cfg.contour.residue_cases, cfg.contour.nodes)?;
            Ok(vec![
                with_detail(
                    below(3, Suite::Oracle, "closed-form residue matches contour quadrature", r.worst_relative_error, t.residue_rel),
                    &r,
                ),
                check(3, Suite::Oracle, "residue normalizations at s = 0 and s = 1", json!(r.normalizations_exact), "exact", r.normalizations_exact),
            ])
        }),
    ));
    v.push((
        4,
        Suite::Seeley,
        Box::new(move || {
            let r = measure::homogeneity_audit(cfg.run.seed, cfg.seeley.depth)?;
            Ok(vec![
                with_detail(
                    below(4, Suite::Seeley, "resolvent terms are parametrically homogeneous", r.worst_resolvent_error, t.homogeneity_rel),
                    json!({"terms": r.resolvent_terms, "unscaled_error": r.worst_resolvent_error_unscaled}),
                ),
                with_detail(
                    below(4, Suite::Seeley, "power parts have degree ms - j", r.worst_power_error, t.homogeneity_rel),
                    json!({"parts": r.power_parts, "unscaled_error": r.worst_power_error_unscaled}),
                ),
                check(4, Suite::Seeley, "exact degree law of power terms", json!(r.degree_law), "holds", r.degree_law),
            ])
        }),
    ));
    v.push((
        5,
        Suite::Seeley,
        Box::new(move || {
            let r = measure::reduction(cfg.run.seed, cfg.seeley.depth)?;
            Ok(vec![
                with_detail(
                    check(
                        5,
                        Suite::Seeley,
                        "integer-power reduction is exact for constant coefficients",
                        json!(r.constant_mismatches.len()),
                        "0 symbolic mismatches",
                        r.constant_mismatches.is_empty(),
                    ),
                    &r.constant_mismatches,
                ),
                with_detail(
                    below(5, Suite::Seeley, "integer-power reduction, constant coefficients, numeric", r.constant_worst_deviation, t.reduction_abs),
                    json!({ "raw": r.constant_worst_raw }),
                ),
                with_detail(
                    below(5, Suite::Seeley, "integer-power reduction, variable coefficients", r.variable_worst_deviation, t.reduction_abs),
                    json!({ "raw": r.variable_worst_raw }),
                ),
            ])
        }),
    ));
    v.push((
        0,
        Suite::Oracle,
        Box::new(move || {
            let r = measure::torus_semigroup(4)?;
            Ok(vec![with_detail(
                below(0, Suite::Oracle, "torus functional calculus: P^(1/2) P^(1/2) = P", r.worst_semigroup_error, 1e-14),
                json!({"eigenvalues": r.eigenvalues_checked}),
            )])
        }),
    ));
    v.push((
        6,
        Suite::Heisenberg,
        Box::new(move || {
            let grid = hpowers_heisenberg::SliceGrid::new(cfg.grid.l, cfg.grid.n)?;
            let r = measure::star_degrees(cfg.heisenberg.kappa, grid)?;
            let worst = r.iter().map(|s| s.worst_degree_error()).fold(0.0, f64::max);
            let drift = r.iter().map(|s| s.grid_drift).fold(0.0, f64::max);
            let summary: Vec<Value> = r
                .iter()
                .map(|s| json!({"m1": s.m1, "m2": s.m2, "fitted_degrees": s.fitted_degrees, "grid_drift": s.grid_drift}))
                .collect();
            Ok(vec![
                with_detail(
                    check(6, Suite::Heisenberg, "star product degrees add", json!(worst), format!("<= {}", t.degree_abs), worst <= t.degree_abs),
                    summary,
                ),
                below(6, Suite::Heisenberg, "star product grid drift n -> 2n", drift, t.grid_drift),
            ])
        }),
    ));
    v.push((
        7,
        Suite::Heisenberg,
        Box::new(move || {
            let grid = hpowers_heisenberg::SliceGrid::new(cfg.grid.l, cfg.grid.n)?;
            let lambdas = measure::parse_sweep("0:2:0.1")?;
            let r = measure::non_microlocality(cfg.heisenberg.kappa, grid, cfg.heisenberg.rho, cfg.heisenberg.stencil_eps, &lambdas)?;
            let h = &r.probe.heisenberg_diff;
            // margin over the larger of the two error bars
            let margin = h.value / h.noise_floor.max(h.grid_drift);
            let gap_ok = r.gap.points.iter().all(|p| if p.lambda == 0.0 { p.fraction == 0.0 } else { p.fraction > 0.0 });
            Ok(vec![
                check(7, Suite::Heisenberg, "classical probe difference", json!(r.probe.classical_diff), "= 0", r.probe.classical_diff == 0.0),
                with_detail(
                    check(
                        7,
                        Suite::Heisenberg,
                        "Heisenberg probe difference over noise floor and grid drift",
                        json!(margin),
                        format!("> {}", t.probe_ratio),
                        h.exceeds(t.probe_ratio),
                    ),
                    h,
                ),
                with_detail(
                    check(7, Suite::Heisenberg, "parametric domain gap", json!(gap_ok), "0 at lambda = 0, positive after", gap_ok),
                    &r.gap.points,
                ),
            ])
        }),
    ));
    for c in measure::conventions(cfg.rumin.c) {
        let conv = cfg.convention();
        let lmax = cfg.rumin.lmax;
        v.push((
            8,
            Suite::Rumin,
            Box::new(move || {
                let r = measure::complex_validity(c, lmax)?;
                Ok(vec![
                    below(8, Suite::Rumin, format!("c = {c}: D1 d0 = 0 and d2 D1 = 0 through level {lmax}"), r.worst_complex_defect, t.complex_rel),
                    below(8, Suite::Rumin, format!("c = {c}: d_b^2 = -eps(dtheta) L_X0 through level {lmax}"), r.worst_db_defect, t.complex_rel),
                ])
            }),
        ));
        v.push((
            9,
            Suite::Rumin,
            Box::new(move || {
                let dims = measure::harmonic(c, conv, lmax)?;
                Ok(vec![check(9, Suite::Rumin, format!("c = {c}: harmonic dimensions"), json!(dims), "[1, 0, 0, 1]", dims == [1, 0, 0, 1])])
            }),
        ));
        v.push((
            10,
            Suite::Rumin,
            Box::new(move || {
                let fits = measure::weyl(c, conv, lmax)?;
                Ok(fits
                    .iter()
                    .map(|w| {
                        let target = measure::weyl_target(w.slot);
                        with_detail(
                            check(
                                10,
                                Suite::Rumin,
                                format!("c = {c}: Weyl exponent of slot {}", w.slot),
                                json!(w.exponent),
                                format!("{target} +- {}", t.weyl_abs),
                                (w.exponent - target).abs() <= t.weyl_abs,
                            ),
                            json!({"window": w.window, "lambda_complete": w.lambda_complete}),
                        )
                    })
                    .collect())
            }),
        ));
        v.push((
            11,
            Suite::Rumin,
            Box::new(move || {
                let r = measure::power_agreement(c, conv, cfg.rumin.power_lmax, cfg.run.seed, cfg.rumin.semigroup_pairs)?;
                Ok(vec![
                    with_detail(
                        below(11, Suite::Rumin, format!("c = {c}: contour powers match functional calculus"), r.worst_contour_deviation, t.contour_rel),
                        json!({"exponents": r.exponents, "levels": r.levels}),
                    ),
                    with_detail(
                        below(11, Suite::Rumin, format!("c = {c}: semigroup law"), r.worst_semigroup_deviation, t.semigroup_rel),
                        json!({"pairs": r.pairs}),
                    ),
                ])
            }),
        ));
    }
    v
}

/// Run `items` on up to `jobs` threads; results keep the input order.
pub fn ordered_parallel<T: Send>(jobs: usize, items: Vec<Box<dyn Fn() -> T + Send + Sync + '_>>) -> Vec<T> {
    let n = items.len();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let out = items[i]();
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|o| o.expect("every task ran")).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub suites: Vec<Suite>,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

pub fn run(cfg: &Config, suites: &[Suite]) -> Summary {
    let mut selected: Vec<Task> = tasks(cfg).into_iter().filter(|(_, s, _)| suites.contains(s)).collect();
    selected.sort_by_key(|(c, _, _)| *c);
    let meta: Vec<(u8, Suite)> = selected.iter().map(|(c, s, _)| (*c, *s)).collect();
    let work: Vec<Box<dyn Fn() -> Result<Vec<Check>, CliError> + Send + Sync>> = selected.into_iter().map(|(_, _, f)| f).collect();
    let results = ordered_parallel(cfg.run.jobs, work);
    let mut checks = Vec::new();
    for ((criterion, suite), r) in meta.into_iter().zip(results) {
        match r {
            Ok(cs) => checks.extend(cs),
            Err(e) => checks.push(check(criterion, suite, "measurement aborted", json!(e.to_string()), "completes", false)),
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    let mut suites = suites.to_vec();
    suites.sort();
    suites.dedup();
    Summary {
        suites,
        checks,
        passed,
        failed,
        all_passed: failed == 0,
    }
}

impl Summary {
    pub fn lines(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                let id = if c.criterion == 0 { " -".to_string() } else { format!("{:>2}", c.criterion) };
                format!("{} [{id}] {}: {} ({})\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured, c.requirement)
            })
            .collect()
    }
}
