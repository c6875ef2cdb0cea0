//! Numerical membership tests for the weight classes `D̂`, `Ď`, `D` and `M`.
//!
//! Membership is a statement about `r → 1` (or `x → ∞`), so every verdict is
//! read off the last decade of a geometric grid and is only ever "likely".
//! Ratios are computed from log-tails and log-moments, so they are exactly
//! invariant under scaling of the weight.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::moments::{log_moment, log_tail_at};
use crate::quadrature::{DecayClass, RadialPoint};
use crate::weight::RadialWeight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassName {
    Dhat,
    Dcheck,
    Mclass,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LikelyMember,
    LikelyNonmember,
    Inconclusive,
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (LikelyMember, LikelyMember) => LikelyMember,
            (LikelyNonmember, _) | (_, LikelyNonmember) => LikelyNonmember,
            _ => Inconclusive,
        }
    }
}

/// Outcome of one class test together with the grid that backs it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMembershipReport {
    pub class_name: ClassName,
    pub verdict: Verdict,
    /// `Ĉ`: the largest ratio for `D̂`, the smallest for `Ď` and `M`.
    #[serde(with = "crate::nonfinite::option")]
    pub constant: Option<f64>,
    /// The `K` (or `q`) the ratios were taken with.
    #[serde(with = "crate::nonfinite::option")]
    pub k: Option<f64>,
    /// Smallest local decay rate of `ω_x` in `ln x` (`M` only).
    #[serde(with = "crate::nonfinite::option")]
    pub eta: Option<f64>,
    /// Smallest local decay rate of `∫_r^1 ω(s)s ds` in `ln(1−r)` (`Ď` only).
    #[serde(with = "crate::nonfinite::option")]
    pub tail_power: Option<f64>,
    /// Radii or exponents.
    #[serde(with = "crate::nonfinite::vec")]
    pub grid: Vec<f64>,
    #[serde(with = "crate::nonfinite::vec")]
    pub ratios: Vec<f64>,
    /// For the moment form of the `D̂` test: agreement with the tail form.
    pub agrees_with_tail_test: Option<bool>,
}

impl ClassMembershipReport {
    fn new(class_name: ClassName, verdict: Verdict, grid: Vec<f64>, log_ratios: &[f64]) -> Self {
        ClassMembershipReport {
            class_name,
            verdict,
            constant: None,
            k: None,
            eta: None,
            tail_power: None,
            grid,
            ratios: log_ratios.iter().map(|l| l.exp()).collect(),
            agrees_with_tail_test: None,
        }
    }
}

/// Default radii: geometric in `1 − r` from 0.5 down to the configured floor.
pub fn default_radii(w: &RadialWeight, cfg: &Config) -> Vec<f64> {
    distances(w, cfg).into_iter().map(|u| 1.0 - u).collect()
}

fn distances(w: &RadialWeight, cfg: &Config) -> Vec<f64> {
    let floor = match w.decay_class() {
        DecayClass::Exponential { .. } => cfg.classes.min_distance_exponential,
        _ => cfg.classes.min_distance,
    };
    geometric(0.5, floor, cfg.classes.points_per_decade)
}

/// Default exponents: geometric from 1 to the configured maximum.
pub fn default_exponents(cfg: &Config) -> Vec<f64> {
    geometric(1.0, cfg.classes.max_exponent, cfg.classes.points_per_decade)
}

/// Points from `a` to `b` (either order), `per_decade` per factor of ten,
/// both ends included.
pub fn geometric(a: f64, b: f64, per_decade: usize) -> Vec<f64> {
    let decades = (b / a).log10().abs();
    let n = ((decades * per_decade as f64).round() as usize).max(1);
    let step = (b / a).ln() / n as f64;
    (0..=n).map(|i| if i == n { b } else { a * (step * i as f64).exp() }).collect()
}

fn check_grid(radii: &[f64]) -> Result<()> {
    if radii.len() < 2 {
        return Err(Error::domain("grid needs at least two points"));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    if !(radii[0] >= 0.0) || !(radii[radii.len() - 1] < 1.0) {
        return Err(Error::domain("radii must lie in [0,1)"));
    }
    Ok(())
}

/// Start index of the last decade: radii with `1 − r ≤ 10(1 − r_last)`, or
/// exponents with `x ≥ x_last / 10`.
fn last_decade(scale: &[f64], toward_zero: bool) -> usize {
    let last = scale[scale.len() - 1];
    let idx = if toward_zero {
        scale.iter().position(|&s| s <= 10.0 * last * (1.0 + 1e-12))
    } else {
        scale.iter().position(|&s| s >= last / 10.0 * (1.0 - 1e-12))
    };
    idx.unwrap_or(0).min(scale.len() - 2)
}

fn upper_verdict(log_ratios: &[f64], start: usize, cfg: &Config) -> Verdict {
    let tail = &log_ratios[start..];
    let change = tail[tail.len() - 1] - tail[0];
    if change.abs() <= cfg.classes.plateau_slope {
        Verdict::LikelyMember
    } else if tail.windows(2).all(|w| w[1] >= w[0]) && change >= cfg.classes.growth_factor.ln() {
        Verdict::LikelyNonmember
    } else {
        Verdict::Inconclusive
    }
}

enum Lower {
    Member,
    Declining,
    Undecided,
}

fn lower_verdict(log_ratios: &[f64], start: usize, cfg: &Config) -> Lower {
    let tail = &log_ratios[start..];
    let first = tail[0];
    let last = tail[tail.len() - 1];
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let declining = last < (1.0 - cfg.classes.decline) * first;
    if min >= cfg.classes.delta.ln_1p() && !declining {
        Lower::Member
    } else if declining {
        Lower::Declining
    } else {
        Lower::Undecided
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn log_tails(w: &RadialWeight, us: &[f64], cfg: &Config) -> Result<Vec<f64>> {
    cfg.exec
        .map(us, |&u| log_tail_at(w, RadialPoint::from_u(u), cfg).map(|v| v.ln))
        .into_iter()
        .collect()
}

fn log_moments(w: &RadialWeight, xs: &[f64], cfg: &Config) -> Result<Vec<f64>> {
    cfg.exec
        .map(xs, |&x| log_moment(w, x, cfg).map(|v| v.ln))
        .into_iter()
        .collect()
}

/// `ω̂(r)/ω̂((1+r)/2)` over the grid.
pub fn dhat_profile(w: &RadialWeight, radii: &[f64], cfg: &Config) -> Result<ClassMembershipReport> {
    check_grid(radii)?;
    let us: Vec<f64> = radii.iter().map(|r| 1.0 - r).collect();
    let mut all = us.clone();
    all.extend(us.iter().map(|u| u / 2.0));
    let tails = log_tails(w, &all, cfg)?;
    let n = us.len();
    let log_ratios: Vec<f64> = (0..n).map(|i| tails[i] - tails[n + i]).collect();
    let verdict = upper_verdict(&log_ratios, last_decade(&us, true), cfg);
    let mut rep = ClassMembershipReport::new(ClassName::Dhat, verdict, radii.to_vec(), &log_ratios);
    rep.constant = Some(max_of(&log_ratios).exp());
    Ok(rep)
}

fn dcheck_single(w: &RadialWeight, k: f64, us: &[f64], cfg: &Config) -> Result<(Vec<f64>, Lower)> {
    let mut all = us.to_vec();
    all.extend(us.iter().map(|u| u / k));
    let tails = log_tails(w, &all, cfg)?;
    let n = us.len();
    let log_ratios: Vec<f64> = (0..n).map(|i| tails[i] - tails[n + i]).collect();
    let v = lower_verdict(&log_ratios, last_decade(us, true), cfg);
    Ok((log_ratios, v))
}

fn weighted_tail_power(w: &RadialWeight, us: &[f64], cfg: &Config) -> Result<f64> {
    let start = last_decade(us, true);
    let tail_us = &us[start..];
    let lw: Vec<f64> = cfg
        .exec
        .map(tail_us, |&u| {
            crate::moments::log_weighted_tail_at(w, RadialPoint::from_u(u), cfg).map(|v| v.ln)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let slopes: Vec<f64> = (1..tail_us.len())
        .map(|i| (lw[i - 1] - lw[i]) / (tail_us[i - 1] / tail_us[i]).ln())
        .collect();
    Ok(min_of(&slopes))
}

fn ladder(k: f64, cfg: &Config) -> Vec<f64> {
    let mut ks = vec![k];
    ks.extend(cfg.classes.k_ladder.iter().cloned().filter(|&x| x != k));
    ks
}

/// `ω̂(r)/ω̂(1−(1−r)/K)` over the grid, trying the `K` ladder if `k` fails.
pub fn dcheck_profile(
    w: &RadialWeight,
    k: f64,
    radii: &[f64],
    cfg: &Config,
) -> Result<ClassMembershipReport> {
    if !(k > 1.0) {
        return Err(Error::domain(format!("K must exceed 1, got {k}")));
    }
    check_grid(radii)?;
    let us: Vec<f64> = radii.iter().map(|r| 1.0 - r).collect();
    lower_search(ClassName::Dcheck, k, radii, cfg, |kk| dcheck_single(w, kk, &us, cfg)).and_then(
        |mut rep| {
            if rep.verdict == Verdict::LikelyMember {
                rep.tail_power = Some(weighted_tail_power(w, &us, cfg)?);
            }
            Ok(rep)
        },
    )
}

fn lower_search<F>(class: ClassName, k: f64, grid: &[f64], cfg: &Config, run: F) -> Result<ClassMembershipReport>
where
    F: Fn(f64) -> Result<(Vec<f64>, Lower)>,
{
    let mut first: Option<(f64, Vec<f64>)> = None;
    let mut all_decline = true;
    for kk in ladder(k, cfg) {
        let (log_ratios, v) = run(kk)?;
        match v {
            Lower::Member => {
                let mut rep =
                    ClassMembershipReport::new(class, Verdict::LikelyMember, grid.to_vec(), &log_ratios);
                rep.k = Some(kk);
                rep.constant = Some(min_of(&log_ratios).exp());
                return Ok(rep);
            }
            Lower::Declining => {}
            Lower::Undecided => all_decline = false,
        }
        if first.is_none() {
            first = Some((kk, log_ratios));
        }
    }
    let (kk, log_ratios) = first.expect("ladder is never empty");
    let verdict = if all_decline {
        Verdict::LikelyNonmember
    } else {
        Verdict::Inconclusive
    };
    let mut rep = ClassMembershipReport::new(class, verdict, grid.to_vec(), &log_ratios);
    rep.k = Some(kk);
    rep.constant = Some(min_of(&log_ratios).exp());
    Ok(rep)
}

fn check_exponents(xs: &[f64]) -> Result<()> {
    if xs.len() < 2 || xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("exponent grid must be strictly increasing with two or more points"));
    }
    if !(xs[0] >= 1.0) {
        return Err(Error::domain("exponents must be at least 1"));
    }
    Ok(())
}

fn moment_ratios(w: &RadialWeight, k: f64, xs: &[f64], cfg: &Config) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut all = xs.to_vec();
    all.extend(xs.iter().map(|x| k * x));
    let m = log_moments(w, &all, cfg)?;
    let n = xs.len();
    Ok(((0..n).map(|i| m[i] - m[n + i]).collect(), m[..n].to_vec()))
}

/// `ω_x/ω_{Kx}` over the exponents, trying the `K` ladder if `k` fails.
pub fn m_profile(w: &RadialWeight, k: f64, xs: &[f64], cfg: &Config) -> Result<ClassMembershipReport> {
    if !(k > 1.0) {
        return Err(Error::domain(format!("K must exceed 1, got {k}")));
    }
    check_exponents(xs)?;
    let start = last_decade(xs, false);
    let mut rep = lower_search(ClassName::Mclass, k, xs, cfg, |kk| {
        let (lr, _) = moment_ratios(w, kk, xs, cfg)?;
        let v = lower_verdict(&lr, start, cfg);
        Ok((lr, v))
    })?;
    let (_, lm) = moment_ratios(w, rep.k.unwrap_or(k), xs, cfg)?;
    let slopes: Vec<f64> = (1..xs.len()).map(|i| (lm[i - 1] - lm[i]) / (xs[i] / xs[i - 1]).ln()).collect();
    rep.eta = Some(min_of(&slopes));
    Ok(rep)
}

/// The moment form of the `D̂` test, `ω_x/ω_{qx}`, cross-checked against the
/// tail form on the default radii.
pub fn moment_doubling_profile(
    w: &RadialWeight,
    q: f64,
    xs: &[f64],
    cfg: &Config,
) -> Result<ClassMembershipReport> {
    if !(q > 1.0) {
        return Err(Error::domain(format!("q must exceed 1, got {q}")));
    }
    check_exponents(xs)?;
    let (lr, _) = moment_ratios(w, q, xs, cfg)?;
    let verdict = upper_verdict(&lr, last_decade(xs, false), cfg);
    let mut rep = ClassMembershipReport::new(ClassName::Dhat, verdict, xs.to_vec(), &lr);
    rep.k = Some(q);
    rep.constant = Some(max_of(&lr).exp());
    let tail = dhat_profile(w, &default_radii(w, cfg), cfg)?;
    rep.agrees_with_tail_test = Some(tail.verdict == verdict);
    Ok(rep)
}

/// All class verdicts for one weight on the default grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightClassSummary {
    pub weight: String,
    pub dhat: ClassMembershipReport,
    pub dhat_moments: ClassMembershipReport,
    pub dcheck: ClassMembershipReport,
    pub m: ClassMembershipReport,
    pub d: Verdict,
}

impl WeightClassSummary {
    pub fn verdict(&self, class: ClassName) -> Verdict {
        match class {
            ClassName::Dhat => self.dhat.verdict,
            ClassName::Dcheck => self.dcheck.verdict,
            ClassName::Mclass => self.m.verdict,
            ClassName::D => self.d,
        }
    }
}

pub fn classify_weight(w: &RadialWeight, cfg: &Config) -> Result<WeightClassSummary> {
    let radii = default_radii(w, cfg);
    let xs = default_exponents(cfg);
    let dhat = dhat_profile(w, &radii, cfg)?;
    let dhat_moments = moment_doubling_profile(w, 2.0, &xs, cfg)?;
    let dcheck = dcheck_profile(w, 2.0, &radii, cfg)?;
    let m = m_profile(w, 2.0, &xs, cfg)?;
    let d = dhat.verdict.and(dcheck.verdict);
    Ok(WeightClassSummary {
        weight: w.to_string(),
        dhat,
        dhat_moments,
        dcheck,
        m,
        d,
    })
}
