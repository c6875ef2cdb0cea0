use bergman_core::classes::WeightClassSummary;
use bergman_core::conditions::ConditionProfile;
use bergman_core::exp_classifier::ClassificationReport;
use bergman_core::projection::MonomialProjection;
use bergman_core::suite::SuiteReport;
use bergman_core::{Backend, Config};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA: &str = "bergman-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub version: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub config: Config,
    pub elapsed_seconds: f64,
    pub results: Results,
}

impl ReportDocument {
    pub fn new(command: Vec<String>, config: Config, elapsed_seconds: f64, results: Results) -> Self {
        ReportDocument {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            config,
            elapsed_seconds,
            results,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Moments {
        weight: String,
        rows: Vec<MomentRow>,
    },
    WeightClasses(Box<WeightClassSummary>),
    Condition {
        omega: String,
        nu: String,
        profile: ConditionProfile,
    },
    Kernel {
        weight: String,
        z: Complex64,
        k: usize,
        rows: Vec<KernelRow>,
    },
    MonomialProjection {
        omega: String,
        phi: String,
        rows: Vec<MonomialProjection>,
    },
    ExtremalBound {
        omega: String,
        nu: String,
        p: f64,
        /// Set when some test function has infinite norm, i.e. σ is not a weight.
        infinite: bool,
        rows: Vec<ExtremalRow>,
    },
    GridProjection {
        omega: String,
        maximal: bool,
        rings: usize,
        nodes: usize,
        rows: Vec<GridRow>,
    },
    ExpClassification(Box<ClassificationReport>),
    Suite(SuiteReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub x: f64,
    pub ln: f64,
    pub value: f64,
    pub rel_err: f64,
    pub backend: Backend,
    pub underflow: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub zeta: Complex64,
    pub value: Complex64,
    pub err_bound: f64,
    pub terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRow {
    pub n: usize,
    /// `‖P_ω f_n‖/‖f_n‖` in `L^p_ν`, `None` when `‖f_n‖` is infinite.
    pub ratio: Option<f64>,
    pub ln_ratio: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub z: Complex64,
    pub value: Complex64,
    /// The input at `z`; the plain projection reproduces it.
    pub input: Complex64,
    pub err: f64,
}
