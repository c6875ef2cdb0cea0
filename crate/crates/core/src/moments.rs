//! Tail integrals and moments `ω_x = ∫_0^1 r^x ω(r) dr`.
//!
//! Every quantity has a `log_` form that never underflows. Closed forms are
//! used for the standard, boundary and rapidly increasing kinds where they
//! exist; everything else goes through log-space quadrature, with the Laplace
//! backend covering exponential weights at very large exponents.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::asymptotic::laplace_log_moment;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::quadrature::{log_integrate_radial, LogEstimate, LogTerm, RadialPoint};
use crate::special::{ln_gamma, ln_gamma_ratio};
use crate::weight::{Composite, RadialWeight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ClosedForm,
    Quadrature,
    Asymptotic,
}

/// A positive quantity held as its logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub ln: f64,
    pub rel_err: f64,
    pub backend: Backend,
}

/// Linear-scale view of a [`LogValue`]; `underflow` is set when the value is
/// below the smallest normal double and `value` is then 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlainValue {
    pub value: f64,
    pub rel_err: f64,
    pub backend: Backend,
    pub underflow: bool,
}

impl LogValue {
    fn closed(ln: f64) -> Self {
        LogValue {
            ln,
            rel_err: 0.0,
            backend: Backend::ClosedForm,
        }
    }

    pub fn plain(&self) -> PlainValue {
        let underflow = self.ln < f64::MIN_POSITIVE.ln();
        PlainValue {
            value: if underflow { 0.0 } else { self.ln.exp() },
            rel_err: self.rel_err,
            backend: self.backend,
            underflow,
        }
    }

    fn shifted(mut self, d: f64) -> Self {
        self.ln += d;
        self
    }
}

fn from_quadrature(est: LogEstimate, what: &str, cfg: &Config) -> Result<LogValue> {
    if est.ln.is_nan() || est.ln == f64::INFINITY {
        return Err(Error::Accuracy {
            message: format!("{what}: quadrature produced a non-finite value"),
            ln_estimate: est.ln,
            rel_err: f64::INFINITY,
        });
    }
    if est.ln == f64::NEG_INFINITY {
        return Err(Error::domain(format!("{what}: the integral vanishes")));
    }
    if !est.converged && est.rel_err > cfg.moments.fallback_rel_err {
        return Err(Error::Accuracy {
            message: format!("{what}: quadrature did not converge"),
            ln_estimate: est.ln,
            rel_err: est.rel_err,
        });
    }
    Ok(LogValue {
        ln: est.ln,
        rel_err: est.rel_err,
        backend: Backend::Quadrature,
    })
}

fn single_factor(c: &Composite) -> Option<&RadialWeight> {
    match c.factors.as_slice() {
        [(w, e)] if *e == 1.0 && c.radial_power == 0.0 => Some(w),
        _ => None,
    }
}

fn check_radius(r: f64) -> Result<RadialPoint> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius {r} outside [0,1)")));
    }
    Ok(RadialPoint::from_r(r))
}

fn radial_quadrature(
    w: &RadialWeight,
    from: RadialPoint,
    shift: f64,
    cfg: &Config,
    what: &str,
) -> Result<LogValue> {
    let subst = cfg.quadrature.policy.substitution(w.decay_class());
    let est = log_integrate_radial(
        |p| {
            let d = w.log_parts(p);
            if shift == 0.0 {
                d
            } else {
                d + LogTerm::regular(shift * p.ln_r)
            }
        },
        from,
        subst,
        &w.breakpoints(),
        &cfg.quadrature,
    );
    from_quadrature(est, what, cfg)
}

/// `ln ∫_p^1 w(s) ds` at a radial point.
pub fn log_tail_at(w: &RadialWeight, p: RadialPoint, cfg: &Config) -> Result<LogValue> {
    match w {
        RadialWeight::Standard { alpha } if *alpha == 0.0 => Ok(LogValue::closed(p.ln_u)),
        RadialWeight::Boundary { alpha } => Ok(LogValue::closed((alpha + 1.0) * p.ln_u)),
        RadialWeight::Composite(c) => match single_factor(c) {
            Some(inner) => Ok(log_tail_at(inner, p, cfg)?.shifted(c.log_scale)),
            None => radial_quadrature(w, p, 0.0, cfg, "tail integral"),
        },
        _ => radial_quadrature(w, p, 0.0, cfg, "tail integral"),
    }
}

/// `ln ∫_p^1 w(s) s ds` at a radial point.
pub fn log_weighted_tail_at(w: &RadialWeight, p: RadialPoint, cfg: &Config) -> Result<LogValue> {
    match w {
        RadialWeight::Standard { alpha } => {
            Ok(LogValue::closed((alpha + 1.0) * p.ln_one_minus_r2() - std::f64::consts::LN_2))
        }
        RadialWeight::Boundary { alpha } => {
            let a1 = alpha + 1.0;
            Ok(LogValue::closed(a1 * p.ln_u + (-(a1 / (a1 + 1.0)) * p.u).ln_1p()))
        }
        RadialWeight::RapidlyIncreasing { alpha } => {
            let big_l = 1.0 - p.ln_one_minus_r2();
            Ok(LogValue::closed(
                (1.0 - alpha) * big_l.ln() - (2.0 * (alpha - 1.0)).ln(),
            ))
        }
        RadialWeight::Composite(c) => match single_factor(c) {
            Some(inner) => Ok(log_weighted_tail_at(inner, p, cfg)?.shifted(c.log_scale)),
            None => radial_quadrature(w, p, 1.0, cfg, "weighted tail integral"),
        },
        _ => radial_quadrature(w, p, 1.0, cfg, "weighted tail integral"),
    }
}

/// `ln ω̂(r) = ln ∫_r^1 w(s) ds`.
pub fn log_tail_integral(w: &RadialWeight, r: f64, cfg: &Config) -> Result<LogValue> {
    log_tail_at(w, check_radius(r)?, cfg)
}

/// `ω̂(r) = ∫_r^1 w(s) ds`.
pub fn tail_integral(w: &RadialWeight, r: f64, cfg: &Config) -> Result<PlainValue> {
    Ok(log_tail_integral(w, r, cfg)?.plain())
}

/// `ln ∫_r^1 w(t) t dt`.
pub fn log_weighted_tail_integral(w: &RadialWeight, r: f64, cfg: &Config) -> Result<LogValue> {
    log_weighted_tail_at(w, check_radius(r)?, cfg)
}

/// `∫_r^1 w(t) t dt`.
pub fn weighted_tail_integral(w: &RadialWeight, r: f64, cfg: &Config) -> Result<PlainValue> {
    Ok(log_weighted_tail_integral(w, r, cfg)?.plain())
}

fn exponential_params(w: &RadialWeight) -> Option<(f64, f64, f64, f64)> {
    match w {
        RadialWeight::Exponential { alpha, beta, l } => Some((*alpha, *beta, *l, 0.0)),
        RadialWeight::Composite(c) => {
            single_factor(c).and_then(exponential_params).map(|(a, b, l, s)| (a, b, l, s + c.log_scale))
        }
        _ => None,
    }
}

/// `ln ω_x` through the Laplace backend, for exponential weights.
pub fn asymptotic_log_moment(w: &RadialWeight, x: f64) -> Option<LogValue> {
    let (a, b, l, scale) = exponential_params(w)?;
    laplace_log_moment(a, b, l, x).map(|(ln, rel_err)| LogValue {
        ln: ln + scale,
        rel_err,
        backend: Backend::Asymptotic,
    })
}

/// `ln ω_x`, choosing the backend as described in the module docs.
pub fn log_moment(w: &RadialWeight, x: f64, cfg: &Config) -> Result<LogValue> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("moment exponent must be a finite x ≥ 0, got {x}")));
    }
    log_moment_shifted(w, x, cfg)
}

fn log_moment_shifted(w: &RadialWeight, x: f64, cfg: &Config) -> Result<LogValue> {
    match w {
        RadialWeight::Standard { alpha } => Ok(LogValue::closed(
            ln_gamma(alpha + 2.0) - std::f64::consts::LN_2 - ln_gamma_ratio((x + 1.0) / 2.0, alpha + 1.0),
        )),
        RadialWeight::Boundary { alpha } => Ok(LogValue::closed(
            ln_gamma(alpha + 2.0) - ln_gamma_ratio(x + 1.0, alpha + 1.0),
        )),
        RadialWeight::Composite(c) if c.factors.is_empty() => {
            Ok(LogValue::closed(c.log_scale - (x + c.radial_power + 1.0).ln()))
        }
        RadialWeight::Composite(c) if single_factor(c).is_some() => {
            Ok(log_moment_shifted(single_factor(c).unwrap(), x, cfg)?.shifted(c.log_scale))
        }
        RadialWeight::Composite(c)
            if matches!(c.factors.as_slice(), [(RadialWeight::Standard { .. } | RadialWeight::Boundary { .. }, e)] if *e == 1.0)
                && x + c.radial_power > -1.0 =>
        {
            Ok(log_moment_shifted(&c.factors[0].0, x + c.radial_power, cfg)?.shifted(c.log_scale))
        }
        _ => {
            if x >= cfg.moments.asymptotic_crossover {
                if let Some(v) = asymptotic_log_moment(w, x) {
                    return Ok(v);
                }
            }
            match radial_quadrature(w, RadialPoint::from_r(0.0), x, cfg, "moment") {
                Ok(v) => Ok(v),
                Err(e) => asymptotic_log_moment(w, x).ok_or(e),
            }
        }
    }
}

/// `ω_x`; see [`PlainValue`] for the underflow contract.
pub fn moment(w: &RadialWeight, x: f64, cfg: &Config) -> Result<PlainValue> {
    Ok(log_moment(w, x, cfg)?.plain())
}

/// Moments of one weight, cached by exponent. Safe to share between threads.
#[derive(Debug)]
pub struct MomentTable {
    weight: RadialWeight,
    cfg: Config,
    cache: RwLock<HashMap<u64, LogValue>>,
}

impl MomentTable {
    pub fn new(weight: RadialWeight, cfg: &Config) -> Self {
        MomentTable {
            weight,
            cfg: cfg.clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn weight(&self) -> &RadialWeight {
        &self.weight
    }

    pub fn log_moment(&self, x: f64) -> Result<LogValue> {
        let key = x.to_bits();
        if let Some(v) = self.cache.read().expect("moment cache poisoned").get(&key) {
            return Ok(*v);
        }
        let v = log_moment(&self.weight, x, &self.cfg)?;
        self.cache.write().expect("moment cache poisoned").insert(key, v);
        Ok(v)
    }

    pub fn moment(&self, x: f64) -> Result<PlainValue> {
        Ok(self.log_moment(x)?.plain())
    }

    /// Fill the cache for many exponents at once, using the configured execution mode.
    pub fn prefetch(&self, xs: &[f64]) -> Result<()> {
        let missing: Vec<f64> = {
            let cache = self.cache.read().expect("moment cache poisoned");
            xs.iter().copied().filter(|x| !cache.contains_key(&x.to_bits())).collect()
        };
        let results = self.cfg.exec.map(&missing, |&x| log_moment(&self.weight, x, &self.cfg));
        let mut cache = self.cache.write().expect("moment cache poisoned");
        for (x, v) in missing.iter().zip(results) {
            cache.insert(x.to_bits(), v?);
        }
        Ok(())
    }

    /// Cached entries sorted by exponent.
    pub fn entries(&self) -> Vec<(f64, LogValue)> {
        let cache = self.cache.read().expect("moment cache poisoned");
        let mut v: Vec<(f64, LogValue)> = cache.iter().map(|(k, v)| (f64::from_bits(*k), *v)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }
}
