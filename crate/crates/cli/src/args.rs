use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "bergman", version, about = "Numerical diagnostics for weighted Bergman projections")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Relative tolerance for every radial integral.
    #[arg(long, env = "BERGMAN_REL_TOL", value_parser = rel_tol, global = true)]
    pub rel_tol: Option<f64>,

    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Moments ω_x = ∫₀¹ r^x ω(r) dr.
    Moments {
        #[arg(long)]
        weight: String,
        /// Exponents, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Likely membership in the upper doubling, lower doubling, moment-decay and doubling classes.
    ClassifyWeight {
        #[arg(long)]
        weight: String,
    },
    /// D_p, A_p or M_p profile of a weight pair.
    Condition(ConditionArgs),
    /// Bergman kernel B_ζ(z) = Σ c_n (ζ̄z)ⁿ, or its k-th derivative in z.
    Kernel {
        #[arg(long)]
        weight: String,
        #[arg(long, value_parser = complex, allow_negative_numbers = true)]
        z: Complex64,
        /// Points ζ, comma separated, each written like `0.3+0.1i`.
        #[arg(long, value_parser = complex, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        zeta: Vec<Complex64>,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Bergman projections of test functions.
    #[command(subcommand)]
    Project(ProjectCommand),
    /// Boundedness of P_ω on L^p_ν for a pair of exponential weights.
    ExpClassify {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        /// `alpha=..,beta=..,l=..` for ν.
        #[arg(long)]
        nu: String,
        /// `alpha=..,beta=..,l=..` for ω.
        #[arg(long)]
        omega: String,
        /// Also compute the D_p sequence up to this n and compare its trend.
        #[arg(long)]
        corroborate: Option<usize>,
    },
    /// Run the acceptance battery.
    Suite {
        /// Criterion numbers to run, comma separated; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConditionKind {
    Dp,
    Ap,
    Mp,
}

#[derive(Args, Debug)]
pub struct ConditionArgs {
    #[arg(value_enum)]
    pub kind: ConditionKind,
    #[arg(long)]
    pub omega: String,
    #[arg(long)]
    pub nu: String,
    #[arg(long, value_parser = parse_p)]
    pub p: f64,
    /// Largest n for `dp`.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Radii for `ap` and `mp`, comma separated; a default grid otherwise.
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<f64>,
}

#[derive(Subcommand, Debug)]
pub enum ProjectCommand {
    /// Closed-form projection of ζⁿφ(|ζ|) for n = 0..=N.
    Monomial {
        #[arg(long)]
        omega: String,
        /// Radial factor φ; 1 by default.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Lower bounds for ‖P_ω‖ on L^p_ν from the extremal test functions.
    Extremal {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        nu: String,
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Projection of a polynomial sampled on a polar grid.
    Grid {
        #[arg(long)]
        omega: String,
        /// Coefficients c₀, c₁, ..., comma separated.
        #[arg(long, value_parser = complex, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        poly: Vec<Complex64>,
        /// Target points, comma separated.
        #[arg(long, value_parser = complex, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        at: Vec<Complex64>,
        /// Use |kernel| (the maximal projection); the polynomial must then be nonnegative on the grid.
        #[arg(long)]
        maximal: bool,
    },
}

fn complex(s: &str) -> Result<Complex64, String> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| format!("malformed complex number '{s}' (write e.g. 0.5, 0.3-0.2i or 1i)"))
}

fn parse_p(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("malformed number '{s}'"))?;
    if p > 1.0 && p.is_finite() {
        Ok(p)
    } else {
        Err(format!("p must lie in (1,∞), got '{s}'"))
    }
}

fn rel_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("malformed number '{s}'"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(format!("tolerance must lie in (0,1), got '{s}'"))
    }
}
