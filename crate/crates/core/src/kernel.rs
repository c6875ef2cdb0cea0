//! The reproducing kernel `B_z(ζ) = Σ (z̄ζ)ⁿ / (2ω_{2n+1})` and its derivatives.
//!
//! Terms are summed as `exp(t_n − M)·e^{inθ}` with `t_n` the log-modulus, so
//! kernels of exponential weights, whose coefficients grow like `e^{c√n}`,
//! never overflow. Log-convexity of the moments makes the term ratios
//! nonincreasing, and the tail after `N` terms is bounded by
//! `a_{N+1}/(1 − a_{N+2}/a_{N+1})`.

use std::cell::RefCell;
use std::f64::consts::{LN_2, PI};
use std::sync::RwLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::moments::{log_moment, log_weighted_tail_integral};
use crate::quadrature::log_integrate_interval;
use crate::special::log_add_exp;
use crate::weight::RadialWeight;

const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    /// Bound on the truncated tail.
    pub err_bound: f64,
    pub terms: usize,
}

/// Kernel coefficients `c_n = 1/(2ω_{2n+1})` of one weight, computed on demand
/// and cached.
pub struct KernelSeries {
    weight: RadialWeight,
    cfg: Config,
    log_c: RwLock<Vec<f64>>,
}

impl KernelSeries {
    pub fn new(weight: RadialWeight, cfg: &Config) -> Self {
        KernelSeries {
            weight,
            cfg: cfg.clone(),
            log_c: RwLock::new(Vec::new()),
        }
    }

    pub fn weight(&self) -> &RadialWeight {
        &self.weight
    }

    /// `ln c_n`.
    pub fn log_coefficient(&self, n: usize) -> Result<f64> {
        {
            let c = self.log_c.read().expect("coefficient cache poisoned");
            if n < c.len() {
                return Ok(c[n]);
            }
        }
        let mut c = self.log_c.write().expect("coefficient cache poisoned");
        while c.len() <= n {
            let start = c.len();
            let xs: Vec<f64> = (start..start + CHUNK).map(|m| 2.0 * m as f64 + 1.0).collect();
            let fresh = self.cfg.exec.map(&xs, |&x| log_moment(&self.weight, x, &self.cfg));
            for v in fresh {
                c.push(-LN_2 - v?.ln);
            }
        }
        Ok(c[n])
    }

    fn check(&self, a: Complex64, b: Complex64, k: usize) -> Result<()> {
        let (ra, rb) = (a.norm(), b.norm());
        if !(ra < 1.0 && rb < 1.0) {
            return Err(Error::domain(format!("points must lie in the unit disc, got |·| = {ra}, {rb}")));
        }
        if ra * rb > self.cfg.kernel.max_product {
            return Err(Error::domain(format!(
                "|z||ζ| = {} exceeds the cap {}",
                ra * rb,
                self.cfg.kernel.max_product
            )));
        }
        if k > self.cfg.kernel.max_order {
            return Err(Error::domain(format!(
                "derivative order {k} exceeds the cap {}",
                self.cfg.kernel.max_order
            )));
        }
        Ok(())
    }

    /// `Σ_m (m+k)!/m! · c_{m+k} · w^m`.
    fn series(&self, w: Complex64, k: usize) -> Result<KernelValue> {
        let ln_fact = |m: usize| (1..=k).map(|j| ((m + j) as f64).ln()).sum::<f64>();
        let log_term = |m: usize| -> Result<f64> { Ok(self.log_coefficient(m + k)? + ln_fact(m)) };
        let rho = w.norm();
        if rho == 0.0 {
            return Ok(KernelValue {
                value: Complex64::new(log_term(0)?.exp(), 0.0),
                err_bound: 0.0,
                terms: 1,
            });
        }
        let ln_rho = rho.ln();
        let theta = w.arg();
        let tol = self.cfg.kernel.tol.ln();
        let mut logs = vec![log_term(0)?];
        let mut abs_sum = logs[0];
        let mut next = log_term(1)? + ln_rho;
        let (n_terms, ln_bound) = loop {
            let m = logs.len();
            let after = log_term(m + 1)? + (m + 1) as f64 * ln_rho;
            let ratio = after - next;
            if ratio < 0.0 {
                let ln_bound = next - (-ratio.exp()).ln_1p();
                if ln_bound <= tol + abs_sum.max(0.0) {
                    break (m, ln_bound);
                }
            }
            if m >= self.cfg.kernel.max_terms {
                return Err(Error::Accuracy {
                    message: format!("kernel series needs more than {m} terms"),
                    ln_estimate: abs_sum,
                    rel_err: (ln_bound_or(next, ratio) - abs_sum).exp(),
                });
            }
            abs_sum = log_add_exp(abs_sum, next);
            logs.push(next);
            next = after;
        };
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &t) in logs.iter().enumerate().rev() {
            acc += Complex64::from_polar((t - top).exp(), m as f64 * theta);
        }
        let scale = top.exp();
        Ok(KernelValue {
            value: acc * scale,
            err_bound: ln_bound.exp(),
            terms: n_terms,
        })
    }

    /// `B_z(ζ)`.
    pub fn eval(&self, z: Complex64, zeta: Complex64) -> Result<KernelValue> {
        self.check(z, zeta, 0)?;
        self.series(z.conj() * zeta, 0)
    }

    /// `(B_ζ)^{(k)}(z) = Σ_{n≥k} n!/(n−k)! ζ̄ⁿ z^{n−k} c_n`.
    pub fn derivative(&self, zeta: Complex64, z: Complex64, k: usize) -> Result<KernelValue> {
        if k == 0 {
            return self.eval(zeta, z);
        }
        self.check(zeta, z, k)?;
        let s = self.series(zeta.conj() * z, k)?;
        let lead = zeta.conj().powu(k as u32);
        Ok(KernelValue {
            value: s.value * lead,
            err_bound: s.err_bound * lead.norm(),
            terms: s.terms,
        })
    }
}

fn ln_bound_or(next: f64, ratio: f64) -> f64 {
    if ratio < 0.0 {
        next - (-ratio.exp()).ln_1p()
    } else {
        f64::INFINITY
    }
}

/// `B^ω_z(ζ)`.
pub fn kernel_eval(w: &RadialWeight, z: Complex64, zeta: Complex64, cfg: &Config) -> Result<KernelValue> {
    KernelSeries::new(w.clone(), cfg).eval(z, zeta)
}

/// `(B^ω_ζ)^{(k)}(z)`, the `k`-th derivative in the evaluation point.
pub fn kernel_derivative_eval(
    w: &RadialWeight,
    zeta: Complex64,
    z: Complex64,
    k: usize,
    cfg: &Config,
) -> Result<KernelValue> {
    KernelSeries::new(w.clone(), cfg).derivative(zeta, z, k)
}

/// `M₁(r, f) = (1/2π)∫|f(re^{iθ})|dθ`, by trapezoid sums on doubling grids.
pub fn integral_mean_m1<F>(f: F, r: f64, tol: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut n = 16usize;
    let mut sum = 0.0;
    for j in 0..n {
        sum += f(Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64))?.norm();
    }
    let mut mean = sum / n as f64;
    while n < 1 << 18 {
        for j in 0..n {
            sum += f(Complex64::from_polar(r, PI * (2 * j + 1) as f64 / n as f64))?.norm();
        }
        n *= 2;
        let refined = sum / n as f64;
        if (refined - mean).abs() <= tol * refined.max(f64::MIN_POSITIVE) {
            return Ok(refined);
        }
        mean = refined;
    }
    Err(Error::Accuracy {
        message: format!("integral mean did not settle with {n} points"),
        ln_estimate: mean.ln(),
        rel_err: f64::NAN,
    })
}

/// `E(ω, |z|, k) = ∫_0^{|z|} dt / ((1−t)^{k+1} ∫_t^1 ω(s)s ds) + 1`.
pub fn kernel_mean_estimate(w: &RadialWeight, z_abs: f64, k: usize, cfg: &Config) -> Result<f64> {
    if !(0.0..1.0).contains(&z_abs) {
        return Err(Error::domain(format!("|z| = {z_abs} outside [0,1)")));
    }
    if z_abs == 0.0 {
        return Ok(1.0);
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let est = log_integrate_interval(
        |t| match log_weighted_tail_integral(w, t, cfg) {
            Ok(v) => -((k + 1) as f64) * (-t).ln_1p() - v.ln,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        0.0,
        z_abs,
        &[],
        &cfg.quadrature,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est.ln.exp() + 1.0)
}

/// Ratios `M₁(s, (B_z)^{(k)}) / E(ω, s|z|, k)` along `s`, for `z` on the
/// positive axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanProbe {
    pub z: f64,
    pub k: usize,
    pub s: Vec<f64>,
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

pub fn kernel_mean_probe(w: &RadialWeight, z: f64, k: usize, ss: &[f64], cfg: &Config) -> Result<MeanProbe> {
    let series = KernelSeries::new(w.clone(), cfg);
    let zc = Complex64::new(z, 0.0);
    let ratios: Vec<f64> = cfg
        .exec
        .map(ss, |&s| {
            let m1 = integral_mean_m1(|zeta| Ok(series.derivative(zc, zeta, k)?.value), s, 1e-8)?;
            Ok(m1 / kernel_mean_estimate(w, s * z, k, cfg)?)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(MeanProbe {
        z,
        k,
        s: ss.to_vec(),
        ratios,
        min,
        max,
    })
}
