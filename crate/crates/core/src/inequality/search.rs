use alloc::vec::Vec;

use super::InequalityReport;
use crate::error::{Error, Result};
use crate::measure::Density;

/// Outcome of a sweep of one checker over a density family and a parameter grid.
#[derive(Debug, Clone)]
pub struct ConstantSearch {
    pub sup_ratio: f64,
    /// (family index, parameter index) of the first case attaining the sup.
    pub argmax: Option<(usize, usize)>,
    /// Row-major over (family, parameter).
    pub reports: Vec<InequalityReport>,
}

impl ConstantSearch {
    pub fn argmax_report(&self, grid_len: usize) -> Option<&InequalityReport> {
        self.argmax.map(|(i, j)| &self.reports[i * grid_len + j])
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(InequalityReport::passed)
    }
}

/// Empirical best constant: the sup of the ratio over family × grid.
pub fn constant_search<P, F>(checker: F, family: &[Density], param_grid: &[P]) -> Result<ConstantSearch>
where
    F: Fn(&Density, &P) -> Result<InequalityReport>,
{
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if param_grid.is_empty() {
        return Err(Error::Invalid("empty parameter grid".into()));
    }
    let mut reports = Vec::with_capacity(family.len() * param_grid.len());
    let mut sup = f64::NEG_INFINITY;
    let mut argmax = None;
    for (i, f) in family.iter().enumerate() {
        for (j, prm) in param_grid.iter().enumerate() {
            let r = checker(f, prm)?;
            if r.ratio > sup {
                sup = r.ratio;
                argmax = Some((i, j));
            }
            reports.push(r);
        }
    }
    Ok(ConstantSearch { sup_ratio: sup.max(0.0), argmax, reports })
}
