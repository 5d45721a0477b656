//! End-to-end checkers built on the lower layers.

mod holonomic;
mod matveev;
mod scan;
mod smale;
mod sz;

pub use holonomic::{check_holonomic_bound, HolonomicReport, SpecialForm};
pub use matveev::{matveev_bound, matveev_crossover, matveev_table, MatveevRow};
pub use scan::{scan, ResumeToken, ScanReport, ScanStatus, SMYTH_CONSTANT};
pub use smale::{
    check_smale_bound, critical_values, diagonal_series, growth_radius, CriticalValue, RationalMap,
    SmaleReport,
};
pub use sz::{
    check_atoral_bound, check_sz_bound, essential_spikes, AtoralReport, Classification, SzTrace,
};

use serde::{Deserialize, Serialize};

use crate::geometry::DEFAULT_PRECISION_CAP;

/// Tunables shared by every checker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// Root enclosure radius target.
    pub tol: f64,
    /// Truncation order for series work.
    pub order: usize,
    /// Largest working precision for root refinement, in bits.
    pub precision_cap: u32,
    /// Multiplier on capacity bounds in Hankel decay diagnostics.
    pub slack: f64,
    /// Relative shortfall tolerated by holonomic height bounds.
    pub holonomic_slack: f64,
    /// Work units (polynomials times degree) a single scan call may spend.
    pub scan_budget: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: 1e-12,
            order: 128,
            precision_cap: DEFAULT_PRECISION_CAP,
            slack: 1.5,
            holonomic_slack: 0.05,
            scan_budget: 50_000_000,
        }
    }
}
