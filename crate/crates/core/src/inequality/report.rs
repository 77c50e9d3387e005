use alloc::string::String;

use crate::params::InequalityParams;

/// How a report decides pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// All constants are explicit: pass iff ratio ≤ 1 + tol.
    ExplicitConstant,
    /// Pointwise inequality: pass iff the worst slack rhs − lhs ≥ −tol.
    Pointwise,
    /// Unknown constant: the ratio is reported, nothing is asserted.
    ConstantFree,
}

/// Both sides of one inequality evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs/rhs, with 0/0 = 0 and x/0 = ∞ for x > 0.
    pub ratio: f64,
    /// rhs − lhs at the worst evaluation point.
    pub slack: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub params: InequalityParams,
    pub grid_n: usize,
    pub notes: String,
}

pub fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

impl InequalityReport {
    pub fn new(
        name: &'static str,
        lhs: f64,
        rhs: f64,
        verdict: Verdict,
        tolerance: f64,
        params: InequalityParams,
        grid_n: usize,
    ) -> Self {
        InequalityReport {
            name,
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
            slack: rhs - lhs,
            verdict,
            tolerance,
            params,
            grid_n,
            notes: String::new(),
        }
    }

    pub fn explicit(name: &'static str, lhs: f64, rhs: f64, tol: f64, params: InequalityParams, grid_n: usize) -> Self {
        Self::new(name, lhs, rhs, Verdict::ExplicitConstant, tol, params, grid_n)
    }

    pub fn constant_free(name: &'static str, lhs: f64, rhs: f64, params: InequalityParams, grid_n: usize) -> Self {
        Self::new(name, lhs, rhs, Verdict::ConstantFree, 0.0, params, grid_n)
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    /// `None` for constant-free checks.
    pub fn pass(&self) -> Option<bool> {
        match self.verdict {
            Verdict::ExplicitConstant => Some(self.ratio <= 1.0 + self.tolerance),
            Verdict::Pointwise => Some(self.slack >= -self.tolerance),
            Verdict::ConstantFree => None,
        }
    }

    pub fn passed(&self) -> bool {
        self.pass().unwrap_or(true)
    }
}
