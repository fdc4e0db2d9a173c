//! Run configuration: a sectioned `key = value` file (TOML), schema-checked.
//!
//! Every field has a default, so an empty file is a valid configuration.
//! Unknown sections or keys are rejected so that typos cannot silently fall
//! back to defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub run: RunSection,
    pub grid: GridSection,
    pub contour: ContourSection,
    pub seeley: SeeleySection,
    pub heisenberg: HeisenbergSection,
    pub rumin: RuminSection,
    pub tolerances: Tolerances,
    pub paths: Paths,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Seeds every random sample drawn by the invariant checks.
    pub seed: u64,
    /// Worker threads for independent checks inside one command.
    pub jobs: usize,
}

/// Slice grid `[−L, L]²` with `n` nodes per axis for the star product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub l: f64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourSection {
    /// Nodes per contour segment for the scalar residue quadrature.
    pub nodes: usize,
    /// Number of random `(k, μ, s)` residue cases.
    pub residue_cases: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeeleySection {
    pub depth: usize,
    /// Depth of the exact parametrix check on the variable battery.
    pub parametrix_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeisenbergSection {
    pub kappa: f64,
    /// Parametric region `ρ‖ξ‖² > λ` for the domain-gap probe.
    pub rho: f64,
    /// Relative kernel weight defining the star-product stencil.
    pub stencil_eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuminSection {
    /// Bracket constant `[X₁, X₂] = −c X₀`.
    pub c: f64,
    pub lmax: usize,
    /// Highest level for the contour cross-check of complex powers.
    pub power_lmax: usize,
    /// `Δ₀ = a0 d₀*d₀`, `Δ₂ = a2 d₂d₂*`.
    pub a0: f64,
    pub a2: f64,
    /// Random `(s, t)` pairs for the semigroup check.
    pub semigroup_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub residue_rel: f64,
    pub homogeneity_rel: f64,
    pub reduction_abs: f64,
    pub degree_abs: f64,
    pub grid_drift: f64,
    pub probe_ratio: f64,
    pub complex_rel: f64,
    pub weyl_abs: f64,
    pub contour_rel: f64,
    pub semigroup_rel: f64,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// Default report destination when `--emit` is absent; stdout if unset.
    pub emit: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { seed: 0, jobs: 1 }
    }
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { l: 8.0, n: 128 }
    }
}

impl Default for ContourSection {
    fn default() -> Self {
        ContourSection {
            nodes: 512,
            residue_cases: 50,
        }
    }
}

impl Default for SeeleySection {
    fn default() -> Self {
        SeeleySection {
            depth: 4,
            parametrix_depth: 3,
        }
    }
}

impl Default for HeisenbergSection {
    fn default() -> Self {
        HeisenbergSection {
            kappa: 1.0,
            rho: 0.1,
            stencil_eps: 1e-4,
        }
    }
}

impl Default for RuminSection {
    fn default() -> Self {
        RuminSection {
            c: 2.0,
            lmax: 40,
            power_lmax: 10,
            a0: 2.0,
            a2: 2.0,
            semigroup_pairs: 10,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residue_rel: 1e-8,
            homogeneity_rel: 1e-12,
            reduction_abs: 1e-10,
            degree_abs: 0.1,
            grid_drift: 0.1,
            probe_ratio: 10.0,
            complex_rel: 1e-10,
            weyl_abs: 0.15,
            contour_rel: 1e-8,
            semigroup_rel: 1e-10,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            run: RunSection::default(),
            grid: GridSection::default(),
            contour: ContourSection::default(),
            seeley: SeeleySection::default(),
            heisenberg: HeisenbergSection::default(),
            rumin: RuminSection::default(),
            tolerances: Tolerances::default(),
            paths: Paths::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Config(vec![e.to_string().trim().to_string()]))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(vec![format!("cannot read {}: {e}", path.display())]))?;
        Config::parse(&text)
    }

    /// Collects every schema violation rather than stopping at the first.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut errs = Vec::new();
        let t = &self.tolerances;
        for (name, v) in [
            ("residue_rel", t.residue_rel),
            ("homogeneity_rel", t.homogeneity_rel),
            ("reduction_abs", t.reduction_abs),
            ("degree_abs", t.degree_abs),
            ("grid_drift", t.grid_drift),
            ("probe_ratio", t.probe_ratio),
            ("complex_rel", t.complex_rel),
            ("weyl_abs", t.weyl_abs),
            ("contour_rel", t.contour_rel),
            ("semigroup_rel", t.semigroup_rel),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                errs.push(format!("tolerances.{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.grid.l > 0.0 && self.grid.l.is_finite()) {
            errs.push(format!("grid.l must be positive, got {}", self.grid.l));
        }
        if self.grid.n < 8 || self.grid.n % 2 != 0 {
            errs.push(format!("grid.n must be even and at least 8, got {}", self.grid.n));
        }
        if self.contour.nodes < 8 {
            errs.push(format!("contour.nodes must be at least 8, got {}", self.contour.nodes));
        }
        if self.seeley.depth > 8 || self.seeley.parametrix_depth > 8 {
            errs.push("seeley depths above 8 are not supported".to_string());
        }
        if !self.heisenberg.kappa.is_finite() {
            errs.push("heisenberg.kappa must be finite".to_string());
        }
        if !(self.heisenberg.rho > 0.0) {
            errs.push(format!("heisenberg.rho must be positive, got {}", self.heisenberg.rho));
        }
        if !(self.heisenberg.stencil_eps > 0.0 && self.heisenberg.stencil_eps < 1.0) {
            errs.push(format!("heisenberg.stencil_eps must lie in (0, 1), got {}", self.heisenberg.stencil_eps));
        }
        if !(self.rumin.c > 0.0 && self.rumin.c.is_finite()) {
            errs.push(format!("rumin.c must be positive, got {}", self.rumin.c));
        }
        if !(self.rumin.a0 > 0.0 && self.rumin.a2 > 0.0) {
            errs.push("rumin.a0 and rumin.a2 must be positive".to_string());
        }
        if self.rumin.lmax < hpowers_rumin::spectrum::MIN_LMAX {
            errs.push(format!(
                "rumin.lmax must be at least {}, got {}",
                hpowers_rumin::spectrum::MIN_LMAX,
                self.rumin.lmax
            ));
        }
        if self.run.jobs == 0 {
            errs.push("run.jobs must be at least 1".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(errs))
        }
    }

    /// Canonical text of the effective configuration; the hash is taken
    /// over this, so two files differing only in layout hash equally.
    /// `jobs` and output paths do not change results and are excluded.
    pub fn canonical(&self) -> String {
        let mut c = self.clone();
        c.run.jobs = 1;
        c.paths = Paths::default();
        toml::to_string(&c).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn convention(&self) -> hpowers_rumin::LaplacianConvention {
        hpowers_rumin::LaplacianConvention {
            a0: self.rumin.a0,
            a2: self.rumin.a2,
        }
    }
}
