//! Subcommand bodies. Each returns the report text and whether its checks
//! passed; emission and exit codes are handled by the caller.

use std::path::Path;

use hpowers_core::seeley::{complex_power_terms, resolvent_terms, rho_bound, verify_parametrix};
use hpowers_core::{part_difference, ChartBox, ClassicalSymbol, PowerBasisTerm};
use hpowers_heisenberg::probes::{microlocality_probe, parametric_domain_gap, star_product, ConePerturbation};
use hpowers_heisenberg::{HHomogeneousSymbol, SliceGrid};
use hpowers_rumin::complex::Slot;
use hpowers_rumin::power::contour_check;
use hpowers_rumin::spectrum::{laplacian_block, spectrum};
use hpowers_rumin::Su2Frame;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::CliError;
use crate::measure;
use crate::report::{envelope, format_float, provenance_lines, to_canonical_json};
use crate::verify::{self, Suite};

pub struct Outcome {
    pub text: String,
    pub passed: bool,
    /// Human-readable lines for stderr.
    pub log: String,
}

impl Outcome {
    fn json(command: &str, cfg: &Config, result: Value, passed: bool) -> Outcome {
        Outcome {
            text: to_canonical_json(&envelope(command, cfg, result)),
            passed,
            log: String::new(),
        }
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    s.trim()
        .replace(' ', "")
        .parse::<Complex64>()
        .map_err(|_| CliError::Usage(format!("not a complex number: {s:?}")))
}

pub fn load_operator(path: &Path) -> Result<ClassicalSymbol, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    ClassicalSymbol::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn term_json(t: &PowerBasisTerm) -> Value {
    json!({
        "scalar": t.scalar.to_string(),
        "numerator": t.numerator.to_string(),
        "exponent": {"s": t.exponent.a.to_string(), "shift": t.exponent.b.to_string()},
    })
}

fn reference_point(d: usize) -> (Vec<f64>, Vec<f64>) {
    (vec![0.0; d], vec![1.0; d])
}

pub fn powers(cfg: &Config, operator: &Path, depth: usize, s: Complex64) -> Result<Outcome, CliError> {
    let p = load_operator(operator)?;
    let bound = rho_bound(&p, &ChartBox::unit(p.dim()))?;
    let e = complex_power_terms(&p, depth)?;
    let (x, xi) = reference_point(p.dim());
    let parts: Vec<Value> = e.parts.iter().map(|part| Value::Array(part.iter().map(term_json).collect())).collect();
    let values: Vec<Value> = (0..=depth)
        .map(|j| {
            let v = e.eval_part(j, &x, &xi, s);
            json!([v.re, v.im])
        })
        .collect();
    let result = json!({
        "dim": p.dim(),
        "order": p.order(),
        "depth": depth,
        "s": [s.re, s.im],
        "ellipticity_bound": bound.certified,
        "base": e.base.to_string(),
        "parts": parts,
        "degree_law": e.degree_law_holds(),
        "reference_point": {"x": x, "xi": xi},
        "values": values,
    });
    let passed = e.degree_law_holds();
    Ok(Outcome::json("powers", cfg, result, passed))
}

pub fn resolvent(cfg: &Config, operator: &Path, depth: usize) -> Result<Outcome, CliError> {
    let p = load_operator(operator)?;
    let q = resolvent_terms(&p, depth)?;
    let report = verify_parametrix(&p, &q, depth);
    let terms: Vec<Value> = q
        .all_terms()
        .iter()
        .map(|t| json!({"j": t.j, "k": t.k, "numerator": t.numerator.to_string()}))
        .collect();
    let result = json!({
        "order": p.order(),
        "depth": depth,
        "base": q.base.to_string(),
        "terms": terms,
        "parametrix_exact": report.is_exact(),
        "first_failure": report.first_failure(),
    });
    Ok(Outcome::json("resolvent", cfg, result, report.is_exact()))
}

pub fn oracle_compare(cfg: &Config, operator: &Path, depth: usize) -> Result<Outcome, CliError> {
    let p = load_operator(operator)?;
    if !p.is_constant_coefficient() {
        return Err(CliError::Input("the binomial oracle needs constant coefficients".into()));
    }
    let e = complex_power_terms(&p, depth)?;
    let oracle = hpowers_core::oracle::binomial_expansion_oracle(&p, depth)?;
    let mut diffs = Vec::new();
    for j in 0..=depth {
        let d = part_difference(&e.parts[j], &oracle[j], &e.base)?;
        if !d.is_zero() {
            let by_power: Vec<Value> = d.by_s_power.iter().map(|(k, poly)| json!({"s_power": k, "coefficient": poly.to_string()})).collect();
            diffs.push(json!({"depth": j, "slope": d.slope.to_string(), "min_offset": d.min_offset.to_string(), "terms": by_power}));
        }
    }
    let passed = diffs.is_empty();
    let result = json!({"depth": depth, "differences": diffs});
    Ok(Outcome::json("oracle compare", cfg, result, passed))
}

pub struct StarArgs<'a> {
    pub deg1: f64,
    pub deg2: f64,
    pub n: usize,
    pub left: Option<&'a str>,
    pub right: Option<&'a str>,
}

pub fn heisenberg_star(cfg: &Config, a: StarArgs) -> Result<Outcome, CliError> {
    let p1 = match a.left {
        Some(src) => HHomogeneousSymbol::parse(src, a.deg1)?,
        None => measure::star_left(a.deg1)?,
    };
    let p2 = match a.right {
        Some(src) => HHomogeneousSymbol::parse(src, a.deg2)?,
        None => measure::star_right(a.deg2)?,
    };
    let grid = SliceGrid::new(cfg.grid.l, a.n)?;
    let r = star_product(&p1, &p2, cfg.heisenberg.kappa, grid)?;
    let mean = r.fitted_degrees.iter().sum::<f64>() / r.fitted_degrees.len() as f64;
    let spread = r.fitted_degrees.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max);
    let passed = r.worst_degree_error() <= cfg.tolerances.degree_abs && r.grid_drift < cfg.tolerances.grid_drift;
    let result = json!({
        "value": mean,
        "noise_floor": spread,
        "grid_drift": r.grid_drift,
        "target_degree": a.deg1 + a.deg2,
        "report": r,
    });
    Ok(Outcome::json("heisenberg star", cfg, result, passed))
}

/// `axis=(a,b,c),angle=t[,degree=m]`.
pub fn parse_cone(spec: &str) -> Result<ConePerturbation, CliError> {
    let bad = |why: &str| CliError::Usage(format!("cone {spec:?}: {why}"));
    let mut axis = None;
    let mut angle = None;
    let mut degree = -1.5;
    let mut rest = spec.trim();
    while !rest.is_empty() {
        let (key, tail) = rest.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let (value, tail) = if tail.starts_with('(') {
            let close = tail.find(')').ok_or_else(|| bad("unclosed parenthesis"))?;
            (&tail[1..close], &tail[close + 1..])
        } else {
            tail.split_once(',').map(|(v, t)| (v, t)).unwrap_or((tail, ""))
        };
        rest = tail.trim_start_matches(',').trim();
        match key.trim() {
            "axis" => {
                let v: Vec<f64> = value.split(',').map(|c| c.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad("axis components"))?;
                if v.len() != 3 {
                    return Err(bad("axis needs three components"));
                }
                axis = Some([v[0], v[1], v[2]]);
            }
            "angle" => angle = Some(value.trim().parse::<f64>().map_err(|_| bad("angle"))?),
            "degree" => degree = value.trim().parse::<f64>().map_err(|_| bad("degree"))?,
            other => return Err(bad(&format!("unknown key {other:?}"))),
        }
    }
    let axis = axis.ok_or_else(|| bad("missing axis"))?;
    let angle = angle.ok_or_else(|| bad("missing angle"))?;
    if !(angle > 0.0) || axis.iter().all(|&a| a == 0.0) {
        return Err(bad("angle must be positive and axis nonzero"));
    }
    Ok(ConePerturbation {
        axis,
        angle,
        amplitude: HHomogeneousSymbol::gauge_power(degree),
    })
}

pub fn heisenberg_probe(cfg: &Config, cone: &str, xi0: [f64; 3]) -> Result<Outcome, CliError> {
    let dp = parse_cone(cone)?;
    let grid = SliceGrid::new(cfg.grid.l, cfg.grid.n)?;
    let p1 = HHomogeneousSymbol::gauge_power(-2.0);
    let p2 = HHomogeneousSymbol::gauge_power(-1.5);
    let r = microlocality_probe(&p1, &p2, &dp, xi0, cfg.heisenberg.kappa, grid)?;
    let h = r.heisenberg_diff;
    let passed = r.classical_diff == 0.0 && h.exceeds(cfg.tolerances.probe_ratio);
    let result = json!({
        "value": h.value,
        "noise_floor": h.noise_floor,
        "grid_drift": h.grid_drift,
        "classical_diff": r.classical_diff,
        "xi0": xi0,
        "cone": {"axis": dp.axis, "angle": dp.angle, "degree": dp.amplitude.degree},
    });
    Ok(Outcome::json("heisenberg probe", cfg, result, passed))
}

pub fn heisenberg_gap(cfg: &Config, sweep: &str) -> Result<Outcome, CliError> {
    let lambdas = measure::parse_sweep(sweep)?;
    let grid = SliceGrid::new(cfg.grid.l, cfg.grid.n)?;
    let r = parametric_domain_gap(cfg.heisenberg.rho, &lambdas, cfg.heisenberg.stencil_eps, measure::GAP_POINT, cfg.heisenberg.kappa, grid)?;
    let passed = r.points.iter().all(|p| if p.lambda == 0.0 { p.fraction == 0.0 } else { p.fraction > 0.0 });
    let drift = r.points.iter().map(|p| (p.fraction - p.refined_fraction).abs()).fold(0.0, f64::max);
    let worst = r.points.iter().filter(|p| p.lambda > 0.0).map(|p| p.fraction).fold(f64::INFINITY, f64::min);
    let result = json!({
        "value": if worst.is_finite() { worst } else { 0.0 },
        "noise_floor": 1.0 / r.stencil_size.max(1) as f64,
        "grid_drift": drift,
        "report": r,
    });
    Ok(Outcome::json("heisenberg gap", cfg, result, passed))
}

pub fn rumin_spectrum(cfg: &Config, slot: &str, lmax: usize) -> Result<Outcome, CliError> {
    let slot = Slot::parse(slot)?;
    let frame = Su2Frame::new(cfg.rumin.c)?;
    let entries = spectrum(&frame, cfg.convention(), slot, lmax)?;
    let mut text = provenance_lines(cfg);
    text.push_str("slot,level,index,eigenvalue,multiplicity\n");
    for e in &entries {
        text.push_str(&format!("{},{},{},{},{}\n", e.slot, e.level, e.index, format_float(e.eigenvalue), e.multiplicity));
    }
    Ok(Outcome {
        text,
        passed: true,
        log: format!("{} eigenvalues for slot {} through level {lmax}\n", entries.len(), slot.label()),
    })
}

pub fn rumin_powers(cfg: &Config, slot: &str, s: Complex64, check: &str) -> Result<Outcome, CliError> {
    if check != "contour" {
        return Err(CliError::Usage(format!("unknown check {check:?}; expected \"contour\"")));
    }
    let slot = Slot::parse(slot)?;
    let frame = Su2Frame::new(cfg.rumin.c)?;
    let mut checks = Vec::new();
    for level in 0..=cfg.rumin.power_lmax {
        checks.push(contour_check(&laplacian_block(&frame, cfg.convention(), level)?, slot, s));
    }
    let worst = checks.iter().map(|c| c.contour_deviation).fold(0.0, f64::max);
    let passed = worst < cfg.tolerances.contour_rel;
    let result = json!({
        "slot": slot.label(),
        "s": [s.re, s.im],
        "c": cfg.rumin.c,
        "worst_contour_deviation": worst,
        "kernel_projected": checks.iter().any(|c| c.kernel_projected),
        "levels": checks,
    });
    Ok(Outcome::json("rumin powers", cfg, result, passed))
}

pub fn verify(cfg: &Config, command: &str, suites: &[Suite]) -> Result<Outcome, CliError> {
    let summary = verify::run(cfg, suites);
    let log = summary.lines();
    let passed = summary.all_passed;
    let mut out = Outcome::json(command, cfg, serde_json::to_value(&summary).expect("summary serializes"), passed);
    out.log = log;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_specs() {
        let c = parse_cone("axis=(0,1,0),angle=0.3").unwrap();
        assert_eq!(c.axis, [0.0, 1.0, 0.0]);
        assert_eq!(c.angle, 0.3);
        let c = parse_cone("angle=0.2, axis=(1, 0, 0), degree=-1").unwrap();
        assert_eq!(c.amplitude.degree, -1.0);
        assert!(parse_cone("axis=(0,1),angle=0.3").is_err());
        assert!(parse_cone("axis=(0,1,0)").is_err());
        assert!(parse_cone("axis=(0,1,0),angle=0.3,width=2").is_err());
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("-0.5+0i").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.5 + 1i").unwrap(), Complex64::new(0.5, 1.0));
        assert!(parse_complex("half").is_err());
    }
}
