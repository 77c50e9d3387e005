//! Spaces, density families and semigroup operators built from a config.

use std::collections::BTreeMap;

use kantlab_core::measure::{
    family_gaussian_bumps, family_gaussian_ratio, family_plateau, family_trig, family_von_mises, Density,
};
use kantlab_core::semigroup::SemigroupOperator;
use kantlab_core::space::{
    build_circle, build_gauss_line, build_weighted_line, potentials, SpaceRef, DEFAULT_HALF_WIDTH,
};

use crate::config::{CheckerId, FamilyKind, FamilySpec, PotentialId, SpaceKindSpec, SpaceSpec, SuiteConfig};
use crate::error::HarnessError;

/// Half-width of weighted lines when the config gives none.
pub const DEFAULT_WEIGHTED_HALF_WIDTH: f64 = 3.0;

pub struct World {
    pub spaces: BTreeMap<String, SpaceRef>,
    pub families: BTreeMap<String, Vec<Density>>,
    pub operators: BTreeMap<String, SemigroupOperator>,
}

fn context<T>(what: &str, id: &str, r: kantlab_core::Result<T>) -> Result<T, HarnessError> {
    r.map_err(|e| {
        if e.is_numerical() {
            HarnessError::Core(e)
        } else {
            HarnessError::Config(format!("{what} `{id}`: {e}"))
        }
    })
}

pub fn build_space(spec: &SpaceSpec) -> Result<SpaceRef, HarnessError> {
    let built = match spec.kind {
        SpaceKindSpec::Circle => build_circle(spec.n),
        SpaceKindSpec::GaussLine => build_gauss_line(spec.n, spec.half_width.unwrap_or(DEFAULT_HALF_WIDTH)),
        SpaceKindSpec::WeightedLine => {
            let hw = spec.half_width.unwrap_or(DEFAULT_WEIGHTED_HALF_WIDTH);
            let (v, k_lo): (fn(f64) -> f64, f64) = match spec.potential {
                Some(PotentialId::Quadratic) | None => (potentials::quadratic, 1.0),
                Some(PotentialId::DoubleWell) => (potentials::double_well, potentials::DOUBLE_WELL_CURVATURE_LOWER),
                Some(PotentialId::Flat) => (potentials::flat, 0.0),
            };
            build_weighted_line(spec.n, hw, v, spec.curvature_lower.unwrap_or(k_lo))
        }
    };
    let mut space = context("space", &spec.id, built)?;
    if spec.kind != SpaceKindSpec::WeightedLine {
        if let Some(k) = spec.curvature_lower {
            space = space.with_curvature_lower(k);
        }
    }
    if let Some(n_dim) = spec.dimension {
        space = context("space", &spec.id, space.with_dimension(n_dim))?;
    }
    Ok(space)
}

pub fn build_family(spec: &FamilySpec, space: &SpaceRef) -> Result<Vec<Density>, HarnessError> {
    let built = match spec.kind {
        FamilyKind::Constant => Ok(vec![Density::uniform(space).with_label("constant")]),
        FamilyKind::Trig => family_trig(space, &spec.amplitudes, &spec.frequencies),
        FamilyKind::GaussianRatio => family_gaussian_ratio(space, &spec.means, &spec.sigmas),
        FamilyKind::GaussianBumps => family_gaussian_bumps(space, &spec.means, &spec.sigmas),
        FamilyKind::VonMises => family_von_mises(space, &spec.concentrations),
        FamilyKind::Plateau => family_plateau(space, &spec.half_widths, spec.floor.unwrap_or(0.05)),
    };
    let fam = context("family", &spec.id, built)?;
    if fam.is_empty() {
        return Err(HarnessError::Config(format!("family `{}`: parameter lists produce no densities", spec.id)));
    }
    Ok(fam)
}

fn uses_operator(c: CheckerId) -> bool {
    matches!(
        c,
        CheckerId::LemmaGaussian
            | CheckerId::EntropyCd0
            | CheckerId::EntropyGauss
            | CheckerId::EntropyNegk
            | CheckerId::EntropyDecay
            | CheckerId::Harnack
            | CheckerId::LogHarnack
            | CheckerId::ReverseIsoperimetry
            | CheckerId::GradientBound
    )
}

impl World {
    /// Builds every space and family, and one operator per space some check evolves.
    pub fn build(cfg: &SuiteConfig) -> Result<World, HarnessError> {
        let mut spaces = BTreeMap::new();
        for s in &cfg.spaces {
            spaces.insert(s.id.clone(), build_space(s)?);
        }
        let mut families = BTreeMap::new();
        for f in &cfg.families {
            families.insert(f.id.clone(), build_family(f, &spaces[&f.space])?);
        }
        let mut operators = BTreeMap::new();
        for c in cfg.checks.iter().filter(|c| uses_operator(c.checker)) {
            let space_id = match &c.family {
                Some(f) if c.checker.needs_family() => cfg.family(f).map(|f| f.space.clone()),
                _ => c.space.clone(),
            };
            let Some(id) = space_id else { continue };
            if let std::collections::btree_map::Entry::Vacant(slot) = operators.entry(id) {
                let op = context("space", slot.key(), SemigroupOperator::for_space(&spaces[slot.key()]))?;
                slot.insert(op);
            }
        }
        Ok(World { spaces, families, operators })
    }
}
