//! Suite configuration, read from a TOML file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, rename = "space")]
    pub spaces: Vec<SpaceSpec>,
    #[serde(default, rename = "family")]
    pub families: Vec<FamilySpec>,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
}

fn default_seed() -> u64 {
    20_240_601
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: PathBuf::from("kantlab-out") }
    }
}

/// Per-verdict tolerance overrides; unset entries keep the checker's own value.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub explicit: Option<f64>,
    pub pointwise: Option<f64>,
    /// Relative move of a family sup between the two finest grids of a refinement.
    pub refine: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKindSpec {
    Circle,
    GaussLine,
    WeightedLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialId {
    Quadratic,
    DoubleWell,
    Flat,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub id: String,
    pub kind: SpaceKindSpec,
    pub n: usize,
    pub half_width: Option<f64>,
    pub potential: Option<PotentialId>,
    pub curvature_lower: Option<f64>,
    /// Dimension parameter N; infinite when absent.
    pub dimension: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Constant,
    Trig,
    GaussianRatio,
    GaussianBumps,
    VonMises,
    Plateau,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub id: String,
    pub space: String,
    pub kind: FamilyKind,
    #[serde(default)]
    pub amplitudes: Vec<f64>,
    #[serde(default)]
    pub frequencies: Vec<u32>,
    #[serde(default)]
    pub means: Vec<f64>,
    #[serde(default)]
    pub sigmas: Vec<f64>,
    #[serde(default)]
    pub concentrations: Vec<f64>,
    #[serde(default)]
    pub half_widths: Vec<f64>,
    pub floor: Option<f64>,
}

/// Every checker the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckerId {
    HllSqrt2,
    HllGeneral,
    Thm1FiniteN,
    Thm1Infty,
    WeakType,
    Orlicz,
    LemmaGaussian,
    GaussianWeak,
    EntropyCd0,
    EntropyGauss,
    EntropyNegk,
    EntropyDecay,
    Harnack,
    LogHarnack,
    ReverseIsoperimetry,
    HopfLaxDuality,
    GradientBound,
    SeqBound,
}

impl CheckerId {
    pub fn name(self) -> &'static str {
        match self {
            CheckerId::HllSqrt2 => "hll_sqrt2",
            CheckerId::HllGeneral => "hll_general",
            CheckerId::Thm1FiniteN => "thm1_finite_n",
            CheckerId::Thm1Infty => "thm1_infty",
            CheckerId::WeakType => "weak_type",
            CheckerId::Orlicz => "orlicz",
            CheckerId::LemmaGaussian => "lemma_gaussian",
            CheckerId::GaussianWeak => "gaussian_weak",
            CheckerId::EntropyCd0 => "entropy_cd0",
            CheckerId::EntropyGauss => "entropy_gauss",
            CheckerId::EntropyNegk => "entropy_negk",
            CheckerId::EntropyDecay => "entropy_decay",
            CheckerId::Harnack => "harnack",
            CheckerId::LogHarnack => "log_harnack",
            CheckerId::ReverseIsoperimetry => "reverse_isoperimetry",
            CheckerId::HopfLaxDuality => "hopf_lax_duality",
            CheckerId::GradientBound => "gradient_bound",
            CheckerId::SeqBound => "seq_bound",
        }
    }

    /// Checkers evaluated on a density family.
    pub fn needs_family(self) -> bool {
        !matches!(
            self,
            CheckerId::Harnack
                | CheckerId::LogHarnack
                | CheckerId::ReverseIsoperimetry
                | CheckerId::HopfLaxDuality
                | CheckerId::SeqBound
        )
    }

    /// Checkers evaluated on random configurations drawn on a space.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            CheckerId::Harnack | CheckerId::LogHarnack | CheckerId::ReverseIsoperimetry | CheckerId::HopfLaxDuality
        )
    }
}

/// Geometric grid of positive times.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub checker: CheckerId,
    pub family: Option<String>,
    pub space: Option<String>,
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub n_dim: Vec<f64>,
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default)]
    pub u: Vec<f64>,
    #[serde(default)]
    pub c_level: Vec<f64>,
    #[serde(default)]
    pub k: Vec<f64>,
    #[serde(default)]
    pub a: Vec<f64>,
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub k_max: Vec<usize>,
    pub t_grid: Option<GridSpec>,
    /// Number of random configurations for the randomized checkers.
    pub configs: Option<usize>,
}

impl SuiteConfig {
    pub fn from_path(path: &Path) -> Result<SuiteConfig, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let cfg = Self::from_toml(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<SuiteConfig, HarnessError> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn space(&self, id: &str) -> Option<&SpaceSpec> {
        self.spaces.iter().find(|s| s.id == id)
    }

    pub fn family(&self, id: &str) -> Option<&FamilySpec> {
        self.families.iter().find(|f| f.id == id)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        let mut ids = BTreeSet::new();
        for s in &self.spaces {
            if !ids.insert(s.id.as_str()) {
                return bad(format!("space `{}`: duplicate id", s.id));
            }
            if s.kind == SpaceKindSpec::WeightedLine && s.potential.is_none() {
                return bad(format!("space `{}`: weighted_line needs `potential`", s.id));
            }
        }
        let mut fam_ids = BTreeSet::new();
        for f in &self.families {
            if !fam_ids.insert(f.id.as_str()) {
                return bad(format!("family `{}`: duplicate id", f.id));
            }
            if self.space(&f.space).is_none() {
                return bad(format!("family `{}`: unknown space `{}`", f.id, f.space));
            }
        }
        for tol in [self.tolerances.explicit, self.tolerances.pointwise, self.tolerances.refine].into_iter().flatten() {
            if !(tol > 0.0) {
                return bad(format!("tolerances: values must be > 0, got {tol}"));
            }
        }
        for (i, c) in self.checks.iter().enumerate() {
            let at = format!("check[{i}] ({})", c.checker.name());
            if c.checker.needs_family() {
                match &c.family {
                    Some(f) if self.family(f).is_some() => {}
                    Some(f) => return bad(format!("{at}: unknown family `{f}`")),
                    None => return bad(format!("{at}: `family` is required")),
                }
            } else if c.checker != CheckerId::SeqBound {
                match &c.space {
                    Some(s) if self.space(s).is_some() => {}
                    Some(s) => return bad(format!("{at}: unknown space `{s}`")),
                    None => return bad(format!("{at}: `space` is required")),
                }
            }
            for (name, grid) in [
                ("p", &c.p),
                ("q", &c.q),
                ("n_dim", &c.n_dim),
                ("t", &c.t),
                ("u", &c.u),
                ("c_level", &c.c_level),
                ("k", &c.k),
                ("a", &c.a),
                ("alpha", &c.alpha),
            ] {
                if grid.is_empty() && required_grids(c.checker).contains(&name) {
                    return bad(format!("{at}: parameter grid `{name}` must be non-empty"));
                }
                if grid.iter().any(|v| v.is_nan()) {
                    return bad(format!("{at}: parameter grid `{name}` contains NaN"));
                }
            }
            if c.checker == CheckerId::SeqBound && c.k_max.is_empty() {
                return bad(format!("{at}: parameter grid `k_max` must be non-empty"));
            }
            if let Some(g) = c.t_grid {
                if !(g.lo > 0.0 && g.hi >= g.lo && g.n >= 1) {
                    return bad(format!("{at}: t_grid needs 0 < lo <= hi and n >= 1"));
                }
            }
            if c.configs == Some(0) {
                return bad(format!("{at}: configs must be positive"));
            }
        }
        Ok(())
    }
}

/// Grids a checker cannot run without.
pub fn required_grids(c: CheckerId) -> &'static [&'static str] {
    match c {
        CheckerId::Thm1FiniteN => &["p", "q", "n_dim"],
        CheckerId::Thm1Infty => &["q"],
        CheckerId::WeakType | CheckerId::Orlicz => &["q", "c_level"],
        CheckerId::LemmaGaussian => &["q", "t"],
        CheckerId::GaussianWeak => &["q", "u"],
        CheckerId::EntropyCd0 | CheckerId::EntropyGauss | CheckerId::EntropyDecay => &["t"],
        CheckerId::EntropyNegk => &["t", "k"],
        CheckerId::GradientBound => &["q"],
        CheckerId::SeqBound => &["a", "alpha"],
        _ => &[],
    }
}
