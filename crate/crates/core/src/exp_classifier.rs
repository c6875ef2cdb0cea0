//! Boundedness of `P_ω` on `L^p_ν` for a pair of exponential weights
//! `ν = exp(−α/(1−r^l)^β)`, `ω = exp(−α̃/(1−r^{l̃})^{β̃})`.
//!
//! `P_ω` is bounded exactly when `β = β̃` and `α̃ = (2α/p)(l̃/l)^β`. Every
//! other pair is unbounded, for one of five reasons reported as the deciding
//! branch. The rule can be checked against the numerical `D_p` profile with
//! [`corroborate`].

use serde::{Deserialize, Serialize};

use crate::conditions::{dp_sequence, Trend};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::weight::RadialWeight;

/// Relative tolerance on `α̃ = (2α/p)(l̃/l)^β`.
pub const BOUNDED_REL_TOL: f64 = 1e-12;
/// Inputs this close to the bounded manifold, but off it, carry a warning.
pub const PROXIMITY_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpWeightParams {
    pub p: f64,
    /// `ν`.
    pub alpha: f64,
    pub beta: f64,
    pub l: f64,
    /// `ω`.
    pub alpha_t: f64,
    pub beta_t: f64,
    pub l_t: f64,
}

impl ExpWeightParams {
    pub fn new(p: f64, nu: (f64, f64, f64), omega: (f64, f64, f64)) -> Result<Self> {
        let params = ExpWeightParams {
            p,
            alpha: nu.0,
            beta: nu.1,
            l: nu.2,
            alpha_t: omega.0,
            beta_t: omega.1,
            l_t: omega.2,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::domain(format!("p must lie in (1,∞), got {}", self.p)));
        }
        for (name, a, b, l) in [("ν", self.alpha, self.beta, self.l), ("ω", self.alpha_t, self.beta_t, self.l_t)] {
            if !(a > 0.0 && a.is_finite() && l > 0.0 && l.is_finite() && b > 0.0 && b <= 1.0) {
                return Err(Error::domain(format!(
                    "{name} needs α > 0, β ∈ (0,1], l > 0; got α={a}, β={b}, l={l}"
                )));
            }
        }
        Ok(())
    }

    pub fn nu(&self) -> RadialWeight {
        RadialWeight::Exponential {
            alpha: self.alpha,
            beta: self.beta,
            l: self.l,
        }
    }

    pub fn omega(&self) -> RadialWeight {
        RadialWeight::Exponential {
            alpha: self.alpha_t,
            beta: self.beta_t,
            l: self.l_t,
        }
    }

    /// The `α̃` that makes the pair bounded, when `β = β̃`.
    pub fn bounded_alpha_t(&self) -> f64 {
        2.0 * self.alpha / self.p * (self.l_t / self.l).powf(self.beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    BetaMismatchSigmaNotWeight,
    BetaMismatchExponentRace,
    AlphaBelowAp,
    AlphaEqualAp,
    AlphaFNegative,
    BoundedCase,
}

impl Branch {
    pub fn verdict(self) -> Verdict {
        if self == Branch::BoundedCase {
            Verdict::Bounded
        } else {
            Verdict::Unbounded
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corroboration {
    pub n_max: usize,
    pub available: bool,
    pub trend: Option<Trend>,
    pub sigma_not_weight: bool,
    #[serde(with = "crate::nonfinite::option")]
    pub log_dp_last: Option<f64>,
    pub consistent: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub params: ExpWeightParams,
    pub verdict: Verdict,
    pub branch: Branch,
    /// `B(α, β, l)` for `ν` and `B(α̃, β̃, l̃)` for `ω`.
    pub b_nu: f64,
    pub b_omega: f64,
    /// `α` after rescaling `l` to `l̃`, when `β = β̃`.
    pub alpha_rescaled: Option<f64>,
    /// `(2α/p)(l̃/l)^β`, when `β = β̃`.
    pub bounded_alpha_t: Option<f64>,
    #[serde(with = "crate::nonfinite::option")]
    pub f_value: Option<f64>,
    pub warning: Option<String>,
    pub corroboration: Option<Corroboration>,
}

/// `B(α,β,l) = l^{−β/(β+1)} α^{1/(β+1)} (β^{1/(β+1)} + β^{−1/(β+1)})`.
pub fn bconst(alpha: f64, beta: f64, l: f64) -> f64 {
    let t = 1.0 / (beta + 1.0);
    l.powf(-beta * t) * alpha.powf(t) * (beta.powf(t) + beta.powf(-t))
}

/// `f(α̃) = p^{−t}α^t + (α̃ − α/p)^t − 2^{1−t}α̃^t` with `t = 1/(β+1)`,
/// defined for `α̃ > α/p`. It vanishes only at `α̃ = 2α/p` and is negative elsewhere.
pub fn step3_f(alpha_t: f64, alpha: f64, p: f64, beta: f64) -> Result<f64> {
    if !(alpha_t > alpha / p) {
        return Err(Error::domain(format!("f is defined for α̃ > α/p = {}, got {alpha_t}", alpha / p)));
    }
    let t = 1.0 / (beta + 1.0);
    Ok(p.powf(-t) * alpha.powf(t) + (alpha_t - alpha / p).powf(t) - 2f64.powf(1.0 - t) * alpha_t.powf(t))
}

/// Replaces `ν`'s `(α, l)` by `((l̃/l)^β α, l̃)`, which changes `ν` only up to
/// bounded factors.
pub fn rescale_l(params: &ExpWeightParams) -> Result<ExpWeightParams> {
    if params.beta != params.beta_t {
        return Err(Error::domain(format!(
            "rescaling needs β = β̃, got {} and {}",
            params.beta, params.beta_t
        )));
    }
    let mut out = *params;
    out.alpha = (params.l_t / params.l).powf(params.beta) * params.alpha;
    out.l = params.l_t;
    Ok(out)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn classify(params: &ExpWeightParams) -> Result<ClassificationReport> {
    params.validate()?;
    let mut report = ClassificationReport {
        params: *params,
        verdict: Verdict::Unbounded,
        branch: Branch::BoundedCase,
        b_nu: bconst(params.alpha, params.beta, params.l),
        b_omega: bconst(params.alpha_t, params.beta_t, params.l_t),
        alpha_rescaled: None,
        bounded_alpha_t: None,
        f_value: None,
        warning: None,
        corroboration: None,
    };
    let branch = if params.beta > params.beta_t {
        Branch::BetaMismatchSigmaNotWeight
    } else if params.beta_t > params.beta {
        Branch::BetaMismatchExponentRace
    } else {
        let r = rescale_l(params)?;
        let target = params.bounded_alpha_t();
        report.alpha_rescaled = Some(r.alpha);
        report.bounded_alpha_t = Some(target);
        let threshold = r.alpha / params.p;
        let off = rel_diff(params.alpha_t, target);
        if off <= BOUNDED_REL_TOL {
            Branch::BoundedCase
        } else {
            if off <= PROXIMITY_REL {
                report.warning = Some(format!(
                    "α̃ is within {off:.1e} of the bounded value {target}; boundedness holds only on that exact curve"
                ));
            }
            if rel_diff(params.alpha_t, threshold) <= BOUNDED_REL_TOL {
                Branch::AlphaEqualAp
            } else if params.alpha_t < threshold {
                Branch::AlphaBelowAp
            } else {
                report.f_value = Some(step3_f(params.alpha_t, r.alpha, params.p, params.beta)?);
                Branch::AlphaFNegative
            }
        }
    };
    report.branch = branch;
    report.verdict = branch.verdict();
    Ok(report)
}

/// Classifies and then checks the verdict against the trend of the `D_p`
/// profile for `n = 0..=n_max`.
pub fn corroborate(params: &ExpWeightParams, n_max: usize, cfg: &Config) -> Result<ClassificationReport> {
    if n_max < 100 {
        return Err(Error::domain(format!("corroboration needs N ≥ 100, got {n_max}")));
    }
    let mut report = classify(params)?;
    let corr = match dp_sequence(&params.omega(), &params.nu(), params.p, n_max, cfg) {
        Ok(prof) => {
            let trend = prof.trend.trend;
            let consistent = match report.verdict {
                Verdict::Bounded => trend != Trend::Diverging,
                Verdict::Unbounded => trend == Trend::Diverging,
            };
            Corroboration {
                n_max,
                available: true,
                trend: Some(trend),
                sigma_not_weight: prof.sigma_not_weight,
                log_dp_last: prof.log_values.last().copied(),
                consistent,
                note: prof.trend.reason.clone().or_else(|| prof.diagnostics.first().cloned()),
            }
        }
        Err(e) => Corroboration {
            n_max,
            available: false,
            trend: None,
            sigma_not_weight: false,
            log_dp_last: None,
            consistent: false,
            note: Some(e.to_string()),
        },
    };
    report.corroboration = Some(corr);
    Ok(report)
}

/// Parameter tuples covering every branch, sized so that divergence shows by
/// `n = 200`.
pub fn example_grid() -> Vec<ExpWeightParams> {
    let mk = |p, nu, om| ExpWeightParams::new(p, nu, om).expect("valid example");
    vec![
        // bounded
        mk(2.0, (1.0, 0.5, 1.0), (1.0, 0.5, 1.0)),
        mk(2.0, (2.0, 1.0, 1.0), (2.0, 1.0, 1.0)),
        mk(3.0, (3.0, 0.5, 1.0), (2.0, 0.5, 1.0)),
        mk(1.5, (1.5, 1.0, 2.0), (1.0, 1.0, 1.0)),
        mk(2.0, (1.0, 0.5, 4.0), (0.5, 0.5, 1.0)),
        // β > β̃
        mk(2.0, (1.0, 1.0, 1.0), (1.0, 0.5, 1.0)),
        mk(3.0, (2.0, 0.75, 1.0), (4.0, 0.5, 1.0)),
        mk(1.5, (1.0, 1.0, 2.0), (3.0, 0.25, 1.0)),
        // β̃ > β
        mk(2.0, (1.0, 0.5, 1.0), (1.0, 0.75, 1.0)),
        mk(2.0, (4.0, 0.5, 1.0), (2.0, 1.0, 1.0)),
        mk(3.0, (2.0, 0.25, 1.0), (3.0, 0.5, 2.0)),
        // α̃ < α/p
        mk(2.0, (4.0, 1.0, 1.0), (1.0, 1.0, 1.0)),
        mk(3.0, (6.0, 0.5, 1.0), (1.0, 0.5, 1.0)),
        mk(2.0, (4.0, 1.0, 2.0), (0.5, 1.0, 1.0)),
        // α̃ = α/p
        mk(2.0, (1.0, 1.0, 1.0), (0.5, 1.0, 1.0)),
        mk(2.0, (8.0, 1.0, 1.0), (4.0, 1.0, 1.0)),
        mk(4.0, (8.0, 0.5, 1.0), (2.0, 0.5, 1.0)),
        // f < 0
        mk(2.0, (4.0, 1.0, 1.0), (12.0, 1.0, 1.0)),
        mk(2.0, (4.0, 1.0, 1.0), (2.4, 1.0, 1.0)),
        mk(3.0, (6.0, 0.5, 1.0), (10.0, 0.5, 1.0)),
        mk(1.5, (3.0, 1.0, 1.0), (2.5, 1.0, 1.0)),
    ]
}
