use serde::{Deserialize, Serialize};

/// Default seed for every randomized probe.
pub const DEFAULT_SEED: u64 = 0xFD15C;

/// Numeric slack used throughout the verifiers.
///
/// Every comparison that stands in for an exact statement about real numbers
/// goes through one of these fields, so a report can say exactly which
/// slack it was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Closed-disc membership: `d(x, c) <= r + eps_mem`.
    pub eps_mem: f64,
    /// Triangle-inequality slack for metric axiom checks.
    pub eps_tri: f64,
    /// `Tx` and `x` are treated as equal when `d(x, Tx) <= eps_fix`.
    pub eps_fix: f64,
    /// `|zeta(0,0)| <= eps_zero` passes the first simulation axiom.
    pub eps_zero: f64,
    /// Strict inequalities closer than this to equality are undetermined.
    pub eps_strict: f64,
    /// Target accuracy of 1-D infimum refinement and radius bisection.
    pub tau_rho: f64,
    /// Lipschitz bound used to turn a sampled minimum into a safe lower radius.
    pub slope_cap: f64,
    /// Offset placed on both sides of every registered breakpoint.
    pub breakpoint_offset: f64,
    /// Bisection tolerance for fixed-point root refinement.
    pub root_tol: f64,
    /// Maximum number of witnesses kept per check.
    pub witness_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_mem: 1e-12,
            eps_tri: 1e-9,
            eps_fix: 1e-9,
            eps_zero: 1e-12,
            eps_strict: 1e-12,
            tau_rho: 1e-6,
            slope_cap: 2.0,
            breakpoint_offset: 1e-6,
            root_tol: 1e-9,
            witness_cap: 100,
        }
    }
}
