//! The two-weight criteria `D_p`, `A_p` and `M_p` as sampled profiles.
//!
//! Every quotient is assembled in log space from moments and weighted tails.
//! When `σ = (ω/ν^{1/p})^{p'}` is not integrable the profile is empty and its
//! trend is `Diverging`, which is what the criteria evaluate to in that case.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::classes::{classify_weight, geometric, Verdict};
use crate::config::{Config, TrendConfig};
use crate::error::{Error, Result};
use crate::moments::{log_moment, log_weighted_tail_at};
use crate::quadrature::{log_integrate_interval, log_integrate_radial, LogTerm, RadialPoint};
use crate::special::log_add_exp;
use crate::weight::{conjugate, sigma_weight, RadialWeight};
use crate::DecayClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Dp,
    Ap,
    Mp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Bounded,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendVerdict {
    pub trend: Trend,
    /// Growth of `ln value` across the last window.
    #[serde(with = "crate::nonfinite::float")]
    pub statistic: f64,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionProfile {
    pub criterion: Criterion,
    pub p: f64,
    /// `n` for `D_p`, `r` for `A_p` and `M_p`.
    #[serde(with = "crate::nonfinite::vec")]
    pub axis: Vec<f64>,
    #[serde(with = "crate::nonfinite::vec")]
    pub log_values: Vec<f64>,
    #[serde(with = "crate::nonfinite::float")]
    pub log_sup: f64,
    pub trend: TrendVerdict,
    pub sigma_not_weight: bool,
    pub diagnostics: Vec<String>,
}

impl ConditionProfile {
    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }

    pub fn sup_estimate(&self) -> f64 {
        self.log_sup.exp()
    }

    fn from_logs(criterion: Criterion, p: f64, axis: Vec<f64>, log_values: Vec<f64>, cfg: &Config) -> Self {
        let trend = classify_trend(&log_values, &cfg.trend);
        ConditionProfile {
            criterion,
            p,
            log_sup: log_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            axis,
            log_values,
            trend,
            sigma_not_weight: false,
            diagnostics: Vec::new(),
        }
    }

    fn not_a_weight(criterion: Criterion, p: f64, message: String) -> Self {
        ConditionProfile {
            criterion,
            p,
            axis: Vec::new(),
            log_values: Vec::new(),
            log_sup: f64::INFINITY,
            trend: TrendVerdict {
                trend: Trend::Diverging,
                statistic: f64::INFINITY,
                reason: Some(format!("sigma is not a weight: {message}")),
            },
            sigma_not_weight: true,
            diagnostics: vec![message],
        }
    }

    /// Keeps the prefix computed before an accuracy failure and marks the
    /// trend inconclusive; other errors propagate.
    fn from_partial(
        criterion: Criterion,
        p: f64,
        axis: &[f64],
        results: Vec<Result<f64>>,
        cfg: &Config,
    ) -> Result<Self> {
        let mut logs = Vec::with_capacity(results.len());
        let mut failure = None;
        for r in results {
            match r {
                Ok(v) => logs.push(v),
                Err(e @ Error::Accuracy { .. }) => {
                    failure = Some(e);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let mut prof = ConditionProfile::from_logs(criterion, p, axis[..logs.len()].to_vec(), logs, cfg);
        if let Some(e) = failure {
            prof.diagnostics.push(format!("stopped at axis index {}: {e}", prof.log_values.len()));
            prof.trend = TrendVerdict {
                trend: Trend::Inconclusive,
                statistic: prof.trend.statistic,
                reason: Some("moment evaluation lost accuracy".into()),
            };
        }
        Ok(prof)
    }
}

/// Trend of the last window of a log-scale profile.
pub fn classify_trend(log_values: &[f64], cfg: &TrendConfig) -> TrendVerdict {
    if log_values.len() < cfg.min_samples || cfg.window < 2 {
        return TrendVerdict {
            trend: Trend::Inconclusive,
            statistic: f64::NAN,
            reason: Some(format!("{} samples, need {}", log_values.len(), cfg.min_samples)),
        };
    }
    let w = &log_values[log_values.len() - cfg.window.min(log_values.len())..];
    let growth = w[w.len() - 1] - w[0];
    let increasing = w.windows(2).all(|p| p[1] > p[0]);
    let over_ceiling = w[w.len() - 1] - log_values[0] >= cfg.ceiling.ln();
    let (lo, hi) = w
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let trend = if increasing && (growth >= cfg.slope || over_ceiling) {
        Trend::Diverging
    } else if -(lo - hi).exp_m1() < cfg.bounded_variation {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    };
    TrendVerdict {
        trend,
        statistic: growth,
        reason: None,
    }
}

/// `ln` of the `D_p` quotient `ν_{np+1}^{1/p} σ_{np'+1}^{1/p'} / ω_{2n+1}` at real `n`.
pub fn log_dp_quotient(
    omega: &RadialWeight,
    nu: &RadialWeight,
    sigma: &RadialWeight,
    p: f64,
    n: f64,
    cfg: &Config,
) -> Result<f64> {
    let pp = conjugate(p);
    let lv = log_moment(nu, n * p + 1.0, cfg)?.ln;
    let ls = log_moment(sigma, n * pp + 1.0, cfg)?.ln;
    let lw = log_moment(omega, 2.0 * n + 1.0, cfg)?.ln;
    Ok(lv / p + ls / pp - lw)
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must lie in (1,∞), got {p}")));
    }
    Ok(())
}

/// `σ`, or the `NotAWeight` message.
fn sigma_or_message(omega: &RadialWeight, nu: &RadialWeight, p: f64) -> Result<std::result::Result<RadialWeight, String>> {
    match sigma_weight(omega, nu, p) {
        Ok(s) => Ok(Ok(s)),
        Err(Error::NotAWeight(m)) => Ok(Err(m)),
        Err(e) => Err(e),
    }
}

/// `D_p` quotients at `n = 0, …, n_max`.
pub fn dp_sequence(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    n_max: usize,
    cfg: &Config,
) -> Result<ConditionProfile> {
    let ns: Vec<f64> = (0..=n_max).map(|n| n as f64).collect();
    dp_profile_at(omega, nu, p, &ns, cfg)
}

/// `D_p` quotients at arbitrary real `n ≥ 0`; with a dense grid this is the
/// fractional-index variant of [`dp_sequence`].
pub fn dp_profile_at(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    ns: &[f64],
    cfg: &Config,
) -> Result<ConditionProfile> {
    check_p(p)?;
    let sigma = match sigma_or_message(omega, nu, p)? {
        Ok(s) => s,
        Err(m) => return Ok(ConditionProfile::not_a_weight(Criterion::Dp, p, m)),
    };
    let results = cfg.exec.map(ns, |&n| log_dp_quotient(omega, nu, &sigma, p, n, cfg));
    ConditionProfile::from_partial(Criterion::Dp, p, ns, results, cfg)
}

/// Radii for `A_p`/`M_p` profiles of a pair; the grid stops at `1 − r = 10⁻³`
/// if any weight involved decays exponentially.
pub fn default_pair_radii(weights: &[&RadialWeight], cfg: &Config) -> Vec<f64> {
    let exponential = weights
        .iter()
        .any(|w| matches!(w.decay_class(), DecayClass::Exponential { .. }));
    let floor = if exponential {
        cfg.classes.min_distance_exponential
    } else {
        cfg.classes.min_distance
    };
    let mut radii = vec![0.0];
    radii.extend(geometric(0.5, floor, cfg.classes.points_per_decade).into_iter().map(|u| 1.0 - u));
    radii
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("radii must be nonempty and strictly increasing"));
    }
    if !(radii[0] >= 0.0 && radii[radii.len() - 1] < 1.0) {
        return Err(Error::domain("radii must lie in [0,1)"));
    }
    Ok(())
}

fn lwt(w: &RadialWeight, r: f64, cfg: &Config) -> Result<f64> {
    Ok(log_weighted_tail_at(w, RadialPoint::from_r(r), cfg)?.ln)
}

/// `A_p` quotients `(∫_r^1 νt)^{1/p}(∫_r^1 σt)^{1/p'} / ∫_r^1 ωt` on the radii.
pub fn ap_profile(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    radii: &[f64],
    cfg: &Config,
) -> Result<ConditionProfile> {
    check_p(p)?;
    check_radii(radii)?;
    let sigma = match sigma_or_message(omega, nu, p)? {
        Ok(s) => s,
        Err(m) => return Ok(ConditionProfile::not_a_weight(Criterion::Ap, p, m)),
    };
    let pp = conjugate(p);
    let results = cfg.exec.map(radii, |&r| {
        Ok(lwt(nu, r, cfg)? / p + lwt(&sigma, r, cfg)? / pp - lwt(omega, r, cfg)?)
    });
    ConditionProfile::from_partial(Criterion::Ap, p, radii, results, cfg)
}

/// `ln ∫_a^b ν(s)s / (∫_s^1 ω(t)t dt)^p ds`, integrated in `y = −ln(1−s)`.
fn log_mp_inner_piece(omega: &RadialWeight, nu: &RadialWeight, p: f64, a: f64, b: f64, cfg: &Config) -> Result<f64> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |y: f64| {
        let pt = RadialPoint::from_ln_u(-y);
        if pt.r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match log_weighted_tail_at(omega, pt, cfg) {
            Ok(w) => {
                (nu.log_parts(&pt) + LogTerm::new(pt.ln_r - p * w.ln, 1.0)).value(&pt)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };
    let ya = -(-a).ln_1p();
    let yb = -(-b).ln_1p();
    let est = log_integrate_interval(f, ya, yb, &[], &cfg.quadrature);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !est.ln.is_finite() && est.ln != f64::NEG_INFINITY {
        return Err(Error::Accuracy {
            message: "M_p inner integral is not finite".into(),
            ln_estimate: est.ln,
            rel_err: f64::INFINITY,
        });
    }
    Ok(est.ln)
}

/// `M_p` values `(∫_0^r νs/(∫_s^1 ωt)^p ds + 1)^{1/p} (∫_r^1 σt)^{1/p'}` on the radii.
pub fn mp_profile(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    radii: &[f64],
    cfg: &Config,
) -> Result<ConditionProfile> {
    check_p(p)?;
    check_radii(radii)?;
    let sigma = match sigma_or_message(omega, nu, p)? {
        Ok(s) => s,
        Err(m) => return Ok(ConditionProfile::not_a_weight(Criterion::Mp, p, m)),
    };
    let pp = conjugate(p);
    let mut edges = vec![0.0];
    edges.extend_from_slice(radii);
    let pieces: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let piece_logs = cfg.exec.map(&pieces, |&(a, b)| {
        if b > a {
            log_mp_inner_piece(omega, nu, p, a, b, cfg)
        } else {
            Ok(f64::NEG_INFINITY)
        }
    });
    let tails = cfg.exec.map(radii, |&r| lwt(&sigma, r, cfg));
    let mut acc = f64::NEG_INFINITY;
    let mut results = Vec::with_capacity(radii.len());
    for (piece, tail) in piece_logs.into_iter().zip(tails) {
        results.push(piece.and_then(|lp| {
            acc = log_add_exp(acc, lp);
            Ok(log_add_exp(acc, 0.0) / p + tail? / pp)
        }));
    }
    ConditionProfile::from_partial(Criterion::Mp, p, radii, results, cfg)
}

/// Smallest Hölder slack seen on a pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderSlack {
    /// `min_r A_p(r) − 1`.
    #[serde(with = "crate::nonfinite::float")]
    pub ap: f64,
    /// `min_n D_p(ω,ω)(n) − 1`.
    #[serde(with = "crate::nonfinite::float")]
    pub dp_self: f64,
    /// `min_n D_p(ω,ν)(n) − 1`, which Hölder also bounds below by 0.
    #[serde(with = "crate::nonfinite::float")]
    pub dp_pair: f64,
}

impl HolderSlack {
    pub fn worst(&self) -> f64 {
        self.ap.min(self.dp_self).min(self.dp_pair)
    }
}

pub fn holder_floor_check(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    radii: &[f64],
    n_max: usize,
    cfg: &Config,
) -> Result<HolderSlack> {
    let sigma = sigma_weight(omega, nu, p)?;
    let min_slack = |prof: &ConditionProfile| {
        prof.log_values.iter().cloned().fold(f64::INFINITY, f64::min).exp_m1()
    };
    let ap = ap_profile(omega, nu, p, radii, cfg)?;
    let ns: Vec<f64> = (0..=n_max).map(|n| n as f64).collect();
    let self_logs: Vec<f64> = cfg
        .exec
        .map(&ns, |&n| log_dp_quotient(omega, omega, omega, p, n, cfg))
        .into_iter()
        .collect::<Result<_>>()?;
    let pair_logs: Vec<f64> = cfg
        .exec
        .map(&ns, |&n| log_dp_quotient(omega, nu, &sigma, p, n, cfg))
        .into_iter()
        .collect::<Result<_>>()?;
    let fold_min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min).exp_m1();
    Ok(HolderSlack {
        ap: min_slack(&ap),
        dp_self: fold_min(&self_logs),
        dp_pair: fold_min(&pair_logs),
    })
}

/// Both sides of `∫_t^1 (ω/h)^{p'} s ds = p'(∫_t^1 σ s ds)^{1/p'}` with
/// `h(s) = ν(s)^{1/p}(∫_s^1 σ(u)u du)^{1/(pp')}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub t: Vec<f64>,
    #[serde(with = "crate::nonfinite::vec")]
    pub lhs: Vec<f64>,
    #[serde(with = "crate::nonfinite::vec")]
    pub rhs: Vec<f64>,
    #[serde(with = "crate::nonfinite::vec")]
    pub rel_err: Vec<f64>,
    #[serde(with = "crate::nonfinite::float")]
    pub max_rel_err: f64,
    pub skipped: Vec<(f64, String)>,
}

pub fn integration_identity_check(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    ts: &[f64],
    cfg: &Config,
) -> Result<IdentityCheck> {
    check_p(p)?;
    let sigma = sigma_weight(omega, nu, p)?;
    let pp = conjugate(p);
    let subst = cfg.quadrature.policy.substitution(sigma.decay_class());
    let mut breaks = omega.breakpoints();
    breaks.extend(nu.breakpoints());
    let side = |t: f64| -> Result<(f64, f64)> {
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let est = log_integrate_radial(
            |pt| {
                let tail = match log_weighted_tail_at(&sigma, *pt, cfg) {
                    Ok(v) => v.ln,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        return LogTerm::regular(f64::NEG_INFINITY);
                    }
                };
                // p'(ln ω − ln h) + ln s
                omega.log_parts(pt).scaled(pp)
                    + nu.log_parts(pt).scaled(-pp / p)
                    + LogTerm::regular(-tail / p + pt.ln_r)
            },
            RadialPoint::from_r(t),
            subst,
            &breaks,
            &cfg.quadrature,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let lhs = est.ln;
        let rhs = pp.ln() + lwt(&sigma, t, cfg)? / pp;
        Ok((lhs, rhs))
    };
    let results = cfg.exec.map(ts, |&t| side(t));
    let mut out = IdentityCheck {
        t: Vec::new(),
        lhs: Vec::new(),
        rhs: Vec::new(),
        rel_err: Vec::new(),
        max_rel_err: 0.0,
        skipped: Vec::new(),
    };
    for (&t, r) in ts.iter().zip(results) {
        match r {
            Ok((l, rr)) if l.is_finite() && rr.is_finite() => {
                let e = (l - rr).exp_m1().abs();
                out.t.push(t);
                out.lhs.push(l.exp());
                out.rhs.push(rr.exp());
                out.rel_err.push(e);
                out.max_rel_err = out.max_rel_err.max(e);
            }
            Ok(_) => out.skipped.push((t, "σ tail underflows".into())),
            Err(e @ Error::Accuracy { .. }) => out.skipped.push((t, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Consistency of criteria and class verdicts on one pair. A sub-check is
/// `None` when its hypothesis does not hold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub dp_trend: Trend,
    pub ap_trend: Trend,
    pub omega_dhat: Verdict,
    pub nu_dhat: Verdict,
    pub omega_m: Verdict,
    pub nu_m: Verdict,
    /// `ω ∈ D̂` ⇒ `D_p` and `A_p` trends agree.
    pub dp_ap_agree: Option<bool>,
    /// `D_p` bounded ⇒ `ω ∈ D̂ ⟺ ν ∈ D̂`.
    pub dhat_transfers: Option<bool>,
    /// `D_p` bounded and `ν ∈ M` ⇒ `ω ∈ M`.
    pub m_transfers: Option<bool>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        [self.dp_ap_agree, self.dhat_transfers, self.m_transfers]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

pub fn class_transfer_checks(
    omega: &RadialWeight,
    nu: &RadialWeight,
    p: f64,
    n_max: usize,
    cfg: &Config,
) -> Result<TransferReport> {
    let dp = dp_sequence(omega, nu, p, n_max, cfg)?;
    let ap = ap_profile(omega, nu, p, &default_pair_radii(&[omega, nu], cfg), cfg)?;
    let wc = classify_weight(omega, cfg)?;
    let nc = classify_weight(nu, cfg)?;
    let bounded = dp.trend.trend == Trend::Bounded;
    let member = |v: Verdict| v == Verdict::LikelyMember;
    Ok(TransferReport {
        dp_trend: dp.trend.trend,
        ap_trend: ap.trend.trend,
        omega_dhat: wc.dhat.verdict,
        nu_dhat: nc.dhat.verdict,
        omega_m: wc.m.verdict,
        nu_m: nc.m.verdict,
        dp_ap_agree: member(wc.dhat.verdict).then(|| dp.trend.trend == ap.trend.trend),
        dhat_transfers: bounded.then(|| member(wc.dhat.verdict) == member(nc.dhat.verdict)),
        m_transfers: (bounded && member(nc.m.verdict)).then(|| member(wc.m.verdict)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn std(a: f64) -> RadialWeight {
        RadialWeight::standard(a).unwrap()
    }

    fn tc() -> TrendConfig {
        TrendConfig::default()
    }

    #[test]
    fn trend_rules() {
        let flat = vec![0.0; 40];
        assert_eq!(classify_trend(&flat, &tc()).trend, Trend::Bounded);
        let grow: Vec<f64> = (0..200).map(|n| 0.1 * (n as f64).sqrt()).collect();
        assert_eq!(classify_trend(&grow, &tc()).trend, Trend::Diverging);
        let wobble: Vec<f64> = (0..60)
            .map(|n| if n % 2 == 0 { 1.2f64.ln() } else { 0.8f64.ln() })
            .collect();
        assert_eq!(classify_trend(&wobble, &tc()).trend, Trend::Inconclusive);
        assert_eq!(classify_trend(&flat[..10], &tc()).trend, Trend::Inconclusive);
    }

    #[test]
    fn trend_ceiling_counts_as_divergence() {
        // slow growth in the window, but far above the first value
        let mut v: Vec<f64> = vec![0.0; 10];
        v.extend((0..30).map(|i| 20.0 + 1e-4 * i as f64));
        assert_eq!(classify_trend(&v, &tc()).trend, Trend::Diverging);
    }

    #[test]
    fn dp_of_equal_unit_weights_is_one() {
        let c = cfg();
        let w = RadialWeight::unit();
        let prof = dp_sequence(&w, &w, 2.0, 50, &c).unwrap();
        assert!(prof.log_values.iter().all(|l| l.abs() < 1e-13));
        assert_eq!(prof.trend.trend, Trend::Bounded);
    }

    #[test]
    fn dp_standard_pair_matches_gamma_formula() {
        // ω = Std 1, ν = Std 0, p = 2: σ = (4/3)·Std 2 and every moment is a Beta value
        let c = cfg();
        let prof = dp_sequence(&std(1.0), &std(0.0), 2.0, 200, &c).unwrap();
        for (n, l) in prof.log_values.iter().enumerate().step_by(17) {
            let n = n as f64;
            let nu = 1.0 / (2.0 * n + 2.0);
            let sigma = (4.0 / 3.0) * 3.0 * 2.0 * 4.0 / ((2.0 * n + 2.0) * (2.0 * n + 4.0) * (2.0 * n + 6.0));
            let omega = 4.0 / ((2.0 * n + 2.0) * (2.0 * n + 4.0));
            let want = (nu * sigma).sqrt() / omega;
            assert!((l.exp() / want - 1.0).abs() < 1e-12, "n={n}");
        }
        assert_eq!(prof.trend.trend, Trend::Bounded);
    }

    #[test]
    fn not_a_weight_short_circuits() {
        let c = cfg();
        let prof = dp_sequence(&std(0.0), &std(2.0), 2.0, 10, &c).unwrap();
        assert!(prof.sigma_not_weight);
        assert_eq!(prof.trend.trend, Trend::Diverging);
        let prof = ap_profile(&std(0.0), &std(3.0), 2.0, &[0.0, 0.5], &c).unwrap();
        assert_eq!(prof.trend.trend, Trend::Diverging);
    }

    #[test]
    fn ap_equal_weights_is_one_everywhere() {
        let c = cfg();
        let w = RadialWeight::exponential(1.0, 0.5, 1.0).unwrap();
        let radii = default_pair_radii(&[&w], &c);
        let prof = ap_profile(&w, &w, 3.0, &radii, &c).unwrap();
        assert!(prof.log_values.iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn ap_at_zero_is_ratio_of_norms() {
        // ω = Std 0, ν = Std 1, p = 2: σ = 1/(2(1−r²)) is not integrable, so use
        // ω = Std 1, ν = Std 0 where σ = (4/3)·Std 2 with ∫σt = (4/3)/2
        let c = cfg();
        let prof = ap_profile(&std(1.0), &std(0.0), 2.0, &[0.0], &c).unwrap();
        let want = (0.5f64 * (2.0 / 3.0)).sqrt() / 0.5;
        assert!((prof.values()[0] - want).abs() < 1e-13);
    }

    #[test]
    fn mp_unit_weights() {
        let c = cfg();
        let w = RadialWeight::unit();
        let prof = mp_profile(&w, &w, 2.0, &[0.0, 0.5], &c).unwrap();
        assert!((prof.values()[0] - 0.5f64.sqrt()).abs() < 1e-13);
        // inner = 2(1/(1−s²))|_0^{1/2} = 2/3 and ∫_{1/2}^1 t dt = 3/8
        let want = ((5.0 / 3.0) * 0.375f64).sqrt();
        assert!((prof.values()[1] - want).abs() < 1e-10, "{}", prof.values()[1]);
    }

    #[test]
    fn holder_slack_nonnegative() {
        let c = cfg();
        let radii = default_pair_radii(&[&std(0.0)], &c);
        let s = holder_floor_check(&std(1.0), &std(1.0), 2.0, &radii, 50, &c).unwrap();
        assert!(s.ap.abs() < 1e-12 && s.dp_pair.abs() < 1e-12);
        assert!(s.dp_self >= -1e-12);
        let s = holder_floor_check(&std(1.0), &std(0.0), 2.0, &radii, 50, &c).unwrap();
        assert!(s.worst() >= -1e-9, "{s:?}");
        let e = RadialWeight::exponential(1.0, 1.0, 1.0).unwrap();
        let s = holder_floor_check(&e, &e, 3.0, &[0.0, 0.5, 0.9], 100, &c).unwrap();
        assert!(s.dp_self >= -1e-9);
    }

    #[test]
    fn identity_for_unit_weights() {
        let c = cfg();
        let w = RadialWeight::unit();
        let chk = integration_identity_check(&w, &w, 2.0, &[0.0], &c).unwrap();
        assert!((chk.lhs[0] - 2f64.sqrt()).abs() < 1e-9);
        assert!((chk.rhs[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identity_for_bounded_exponential_pair() {
        let c = cfg();
        let w = RadialWeight::exponential(1.0, 0.5, 1.0).unwrap();
        let chk = integration_identity_check(&w, &w, 2.0, &[0.0, 0.5, 0.9], &c).unwrap();
        assert!(chk.skipped.is_empty());
        assert!(chk.max_rel_err < 1e-6, "{chk:?}");
    }

    #[test]
    fn dense_mode_matches_integers() {
        let c = cfg();
        let a = dp_sequence(&std(1.0), &std(0.0), 2.0, 5, &c).unwrap();
        let b = dp_profile_at(&std(1.0), &std(0.0), 2.0, &[0.0, 0.5, 1.0, 1.5, 2.0], &c).unwrap();
        assert_eq!(a.log_values[1], b.log_values[2]);
        assert_eq!(a.log_values[2], b.log_values[4]);
    }
}
