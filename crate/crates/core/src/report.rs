use serde::{Deserialize, Serialize};

/// Relative slack granted to every certified inequality. It only absorbs
/// floating-point evaluation of the two sides.
pub const RELATIVE_SLACK: f64 = 1e-9;

/// A checked claim `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    /// `lhs <= rhs` up to [`RELATIVE_SLACK`] of the larger side.
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = RELATIVE_SLACK * lhs.abs().max(rhs.abs());
        Inequality {
            lhs,
            rhs,
            holds: lhs <= rhs + slack,
        }
    }

    /// `lhs <= rhs + slack` with an absolute slack.
    pub fn with_absolute_slack(lhs: f64, rhs: f64, slack: f64) -> Self {
        Inequality {
            lhs,
            rhs,
            holds: lhs <= rhs + slack,
        }
    }

    /// An upper bound: `actual <= bound`.
    pub fn upper(actual: f64, bound: f64) -> Self {
        Self::new(actual, bound)
    }

    /// A lower bound: `bound <= actual`.
    pub fn lower(bound: f64, actual: f64) -> Self {
        Self::new(bound, actual)
    }

    /// `lhs / rhs`; at most one (up to slack) when the claim holds.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}
