use serde::{Deserialize, Serialize};

use crate::exec::ExecMode;
use crate::quadrature::QuadratureSpec;

/// Every tunable threshold in one place. All of these are heuristics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Config {
    pub quadrature: QuadratureSpec,
    pub exec: ExecMode,
    pub moments: MomentConfig,
    pub classes: ClassConfig,
    pub trend: TrendConfig,
    pub kernel: KernelConfig,
}

impl Config {
    pub fn sequential(mut self) -> Self {
        self.exec = ExecMode::Sequential;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentConfig {
    /// Exponents at or beyond this use the Laplace backend directly for
    /// exponential weights.
    pub asymptotic_crossover: f64,
    /// A quadrature estimate worse than this falls back to the Laplace backend.
    pub fallback_rel_err: f64,
}

impl Default for MomentConfig {
    fn default() -> Self {
        MomentConfig {
            asymptotic_crossover: 1e6,
            fallback_rel_err: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassConfig {
    /// Largest change of `ln ratio` across the last decade that still counts as a plateau.
    pub plateau_slope: f64,
    /// Ratio growth across the last decade that counts as divergence.
    pub growth_factor: f64,
    /// Lower-doubling ratios must stay above `1 + delta`.
    pub delta: f64,
    /// Relative decline of `ln ratio` per decade that counts as drifting to 1.
    pub decline: f64,
    pub k_ladder: Vec<f64>,
    pub points_per_decade: usize,
    /// Smallest `1 − r` of the default radius grid.
    pub min_distance: f64,
    /// Same, for weights with exponential decay.
    pub min_distance_exponential: f64,
    /// Largest exponent of the default moment grid.
    pub max_exponent: f64,
}

impl Default for ClassConfig {
    fn default() -> Self {
        ClassConfig {
            plateau_slope: 0.05,
            growth_factor: 10.0,
            delta: 0.05,
            decline: 0.05,
            k_ladder: vec![2.0, 4.0, 8.0, 16.0],
            points_per_decade: 20,
            min_distance: 1e-6,
            min_distance_exponential: 1e-3,
            max_exponent: 1e4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    pub window: usize,
    pub min_samples: usize,
    /// Growth of `ln value` across the window that marks divergence.
    pub slope: f64,
    /// A value this many times the first one also marks divergence.
    pub ceiling: f64,
    /// Relative variation across the window below which a profile is bounded.
    pub bounded_variation: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            window: 20,
            min_samples: 30,
            slope: 0.05,
            ceiling: 1e6,
            bounded_variation: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Series truncation target, relative to the sum of term moduli (floor 1).
    pub tol: f64,
    pub max_terms: usize,
    /// Cap on `|z||ζ|`.
    pub max_product: f64,
    pub max_order: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            tol: 1e-14,
            max_terms: 200_000,
            max_product: 0.99,
            max_order: 8,
        }
    }
}
