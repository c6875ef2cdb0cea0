//! Adaptive Gauss–Kronrod quadrature and log-space integration over `[a, 1)`.
//!
//! Radial integrands here routinely span hundreds of orders of magnitude, so
//! everything above the plain [`integrate`] works with the logarithm of the
//! integrand: locate the maximum `M`, integrate `exp(F − M)`, and report
//! `M + ln I`. Near `r = 1` the integral is moved to a half-line by one of the
//! [`Substitution`]s, chosen from the weight's decay class.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::special::log_add_exp;

/// Tolerances and endpoint policy for every radial integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub policy: SubstitutionPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
            policy: SubstitutionPolicy::ByDecayClass,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_subdivisions > 0
    }
}

/// How the tail of the integral near `r = 1` is mapped onto a half-line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Substitution {
    /// `y = −ln(1−r)`; turns `(1−r)^a` into `e^{−(a+1)y}`.
    LogDistance,
    /// `z = ln(−ln(1−r))`; for densities like `1/((1−r) ln^a)` whose decay in
    /// `y` is only polynomial.
    DoubleLog,
    /// `v = (1−r^l)^{−β}`; maps `exp(−c/(1−r^l)^β)` to `exp(−c v)`.
    BoundaryLayer { beta: f64, l: f64 },
}

/// Boundary behaviour of a density, used to pick a [`Substitution`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayClass {
    Polynomial,
    Exponential { beta: f64, l: f64 },
    Blowup,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SubstitutionPolicy {
    ByDecayClass,
    Fixed(Substitution),
}

impl SubstitutionPolicy {
    pub fn substitution(&self, class: DecayClass) -> Substitution {
        match self {
            SubstitutionPolicy::Fixed(s) => *s,
            SubstitutionPolicy::ByDecayClass => match class {
                DecayClass::Polynomial => Substitution::LogDistance,
                DecayClass::Exponential { beta, l } => Substitution::BoundaryLayer { beta, l },
                DecayClass::Blowup | DecayClass::Generic => Substitution::DoubleLog,
            },
        }
    }
}

/// A log-density split as `regular + u_power · ln(1 − r)`. Keeping the power
/// of `1 − r` separate lets boundary singularities cancel exactly against the
/// substitution Jacobian instead of in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogTerm {
    pub regular: f64,
    pub u_power: f64,
}

impl LogTerm {
    pub fn new(regular: f64, u_power: f64) -> Self {
        LogTerm { regular, u_power }
    }

    pub fn regular(regular: f64) -> Self {
        LogTerm { regular, u_power: 0.0 }
    }

    pub fn value(&self, p: &RadialPoint) -> f64 {
        if self.u_power == 0.0 || self.regular == f64::NEG_INFINITY {
            self.regular
        } else {
            self.regular + self.u_power * p.ln_u
        }
    }

    pub fn scaled(self, e: f64) -> Self {
        LogTerm {
            regular: if e == 0.0 { 0.0 } else { e * self.regular },
            u_power: e * self.u_power,
        }
    }
}

impl std::ops::Add for LogTerm {
    type Output = LogTerm;
    fn add(self, o: LogTerm) -> LogTerm {
        LogTerm {
            regular: self.regular + o.regular,
            u_power: self.u_power + o.u_power,
        }
    }
}

/// A radius carried together with `1 − r` and both logarithms, so that points
/// extremely close to the boundary keep full relative precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialPoint {
    pub r: f64,
    pub u: f64,
    pub ln_r: f64,
    pub ln_u: f64,
}

impl RadialPoint {
    pub fn from_r(r: f64) -> Self {
        let u = 1.0 - r;
        RadialPoint {
            r,
            u,
            ln_r: r.ln(),
            ln_u: u.ln(),
        }
    }

    pub fn from_u(u: f64) -> Self {
        RadialPoint {
            r: 1.0 - u,
            u,
            ln_r: (-u).ln_1p(),
            ln_u: u.ln(),
        }
    }

    pub fn from_ln_u(ln_u: f64) -> Self {
        let u = ln_u.exp();
        RadialPoint {
            r: 1.0 - u,
            u,
            ln_r: (-u).ln_1p(),
            ln_u,
        }
    }

    /// `ln(1 − r²)`.
    pub fn ln_one_minus_r2(&self) -> f64 {
        self.ln_u + (2.0 - self.u).ln()
    }
}

impl Substitution {
    /// Variable value corresponding to `p`.
    pub fn t_of(&self, p: &RadialPoint) -> f64 {
        match *self {
            Substitution::LogDistance => -p.ln_u,
            Substitution::DoubleLog => (-p.ln_u).ln(),
            Substitution::BoundaryLayer { beta, l } => {
                let q = -(l * p.ln_r).exp_m1();
                q.powf(-beta)
            }
        }
    }

    /// Radial point at `t` and `ln |dr/dt|`.
    pub fn point(&self, t: f64) -> (RadialPoint, LogTerm) {
        match *self {
            Substitution::LogDistance => (RadialPoint::from_ln_u(-t), LogTerm::new(0.0, 1.0)),
            Substitution::DoubleLog => (RadialPoint::from_ln_u(-t.exp()), LogTerm::new(t, 1.0)),
            Substitution::BoundaryLayer { beta, l } => {
                let ln_v = t.ln();
                let q = (-ln_v / beta).exp();
                let ln_1mq = (-q).ln_1p();
                let ln_r = ln_1mq / l;
                let u = -ln_r.exp_m1();
                let p = RadialPoint {
                    r: ln_r.exp(),
                    u,
                    ln_r,
                    ln_u: u.ln(),
                };
                let ln_jac = -(l * beta).ln() + (1.0 / l - 1.0) * ln_1mq - (1.0 / beta + 1.0) * ln_v;
                (p, LogTerm::regular(ln_jac))
            }
        }
    }
}

/// Result of a linear-scale integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
}

/// Result of a log-scale integral: `ln ∫`, with relative error of `∫`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogEstimate {
    pub ln: f64,
    pub rel_err: f64,
    pub converged: bool,
}

impl LogEstimate {
    pub fn zero() -> Self {
        LogEstimate {
            ln: f64::NEG_INFINITY,
            rel_err: 0.0,
            converged: true,
        }
    }

    /// `ln(e^a + e^b)` with errors combined.
    pub fn plus(self, other: LogEstimate) -> LogEstimate {
        let ln = log_add_exp(self.ln, other.ln);
        if ln == f64::NEG_INFINITY {
            return LogEstimate::zero();
        }
        let share = |e: &LogEstimate| {
            if e.ln == f64::NEG_INFINITY {
                0.0
            } else {
                e.rel_err * (e.ln - ln).exp()
            }
        };
        LogEstimate {
            ln,
            rel_err: share(&self) + share(&other),
            converged: self.converged && other.converged,
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

/// One 21-point Gauss–Kronrod panel with the QUADPACK error heuristic.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integration over the sorted breakpoints `points` (at least two).
pub fn integrate<F: Fn(f64) -> f64>(f: F, points: &[f64], spec: &QuadratureSpec) -> Estimate {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut settled = Vec::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, err) = gk21(&f, w[0], w[1]);
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value,
                err,
            });
        }
    }
    let totals = |heap: &BinaryHeap<Panel>, settled: &[Panel]| {
        heap.iter()
            .chain(settled.iter())
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err))
    };
    let mut splits = 0;
    loop {
        let (value, err) = totals(&heap, &settled);
        if !value.is_finite() || !err.is_finite() {
            return Estimate {
                value,
                abs_err: err,
                converged: false,
            };
        }
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if err <= target {
            return Estimate {
                value,
                abs_err: err,
                converged: true,
            };
        }
        if splits >= spec.max_subdivisions {
            return Estimate {
                value,
                abs_err: err,
                converged: false,
            };
        }
        let Some(worst) = heap.pop() else {
            // every panel is at the resolution limit; accept the roundoff floor
            return Estimate {
                value,
                abs_err: err,
                converged: err <= 1e3 * target,
            };
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs()) {
            settled.push(worst);
            continue;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        splits += 1;
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if (hi - lo) <= 1e-13 * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 || f1.is_nan() {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn valid(v: f64) -> bool {
    !v.is_nan() && v != f64::INFINITY
}

/// `ln ∫_a^b exp(F(t)) dt` for a log-integrand `F` on a finite interval.
pub fn log_integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> LogEstimate {
    if b <= a {
        return LogEstimate::zero();
    }
    const SCAN: usize = 48;
    let mut best = (a, f64::NEG_INFINITY);
    let mut samples = Vec::with_capacity(SCAN + 2);
    for i in 0..=SCAN {
        let t = a + (b - a) * i as f64 / SCAN as f64;
        let v = f(t);
        samples.push(t);
        if valid(v) && v > best.1 {
            best = (t, v);
        }
    }
    if best.1 == f64::NEG_INFINITY {
        return LogEstimate::zero();
    }
    let h = (b - a) / SCAN as f64;
    let (tp, vp) = golden_max(&f, (best.0 - h).max(a), (best.0 + h).min(b));
    let (peak, m) = if valid(vp) && vp > best.1 { (tp, vp) } else { best };

    let mut pts: Vec<f64> = (0..=8).map(|k| a + (b - a) * k as f64 / 8.0).collect();
    pts.push(peak);
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    finish_points(&mut pts, a, b);
    let est = integrate(|t| (f(t) - m).exp(), &pts, spec);
    to_log(est, m)
}

fn finish_points(pts: &mut Vec<f64>, a: f64, b: f64) {
    pts.retain(|&x| x >= a && x <= b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
}

fn to_log(est: Estimate, shift: f64) -> LogEstimate {
    if est.value <= 0.0 {
        return LogEstimate {
            ln: f64::NEG_INFINITY,
            rel_err: if est.abs_err > 0.0 { f64::INFINITY } else { 0.0 },
            converged: est.converged && est.abs_err == 0.0,
        };
    }
    LogEstimate {
        ln: shift + est.value.ln(),
        rel_err: est.abs_err / est.value,
        converged: est.converged,
    }
}

/// Drop below the running maximum after which the half-line march stops.
const NEGLIGIBLE: f64 = 46.0;

/// `ln ∫_{t0}^∞ exp(F(t)) dt`. `F` must eventually decrease to `−∞`.
pub fn log_integrate_halfline<F: Fn(f64) -> f64>(
    f: F,
    t0: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> LogEstimate {
    let mut pts = vec![t0];
    let mut vals = vec![f(t0)];
    let mut run_max = if valid(vals[0]) { vals[0] } else { f64::NEG_INFINITY };
    let mut h = 0.125 * (1.0 + t0.abs()).min(8.0);
    let mut stopped = false;
    for _ in 0..600 {
        let t = pts[pts.len() - 1] + h;
        let v = f(t);
        let prev = vals[vals.len() - 1];
        pts.push(t);
        vals.push(v);
        if valid(v) && v > run_max {
            run_max = v;
        }
        if run_max > f64::NEG_INFINITY && (v < run_max - NEGLIGIBLE && v < prev && pts.len() > 4) {
            stopped = true;
            break;
        }
        h *= 1.2;
    }
    if run_max == f64::NEG_INFINITY {
        return LogEstimate {
            converged: stopped,
            ..LogEstimate::zero()
        };
    }
    let k = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| valid(**v))
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = pts[k.saturating_sub(1)];
    let hi = pts[(k + 1).min(pts.len() - 1)];
    let (tp, vp) = golden_max(&f, lo, hi);
    let (peak, m) = if valid(vp) && vp > vals[k] { (tp, vp) } else { (pts[k], vals[k]) };

    let end = pts[pts.len() - 1];
    let mut partition: Vec<f64> = pts.clone();
    partition.push(peak);
    partition.extend(breaks.iter().copied());
    finish_points(&mut partition, t0, end);
    let mut est = integrate(|t| (f(t) - m).exp(), &partition, spec);

    // remainder past the last march point, from the final log-slope
    let n = vals.len();
    if n >= 2 {
        let slope = (vals[n - 1] - vals[n - 2]) / (pts[n - 1] - pts[n - 2]);
        let tail = if slope < 0.0 {
            (vals[n - 1] - m).exp() / -slope
        } else {
            f64::INFINITY
        };
        est.value += if tail.is_finite() { tail } else { 0.0 };
        est.abs_err += tail;
    }
    est.converged &= stopped;
    to_log(est, m)
}

/// Radius below which radial integrals are done directly in `r`.
pub const SPLIT_RADIUS: f64 = 0.5;

/// `ln ∫_{from}^1 exp(F(p)) dr` for a log-integrand on radial points.
pub fn log_integrate_radial<F: Fn(&RadialPoint) -> LogTerm>(
    f: F,
    from: RadialPoint,
    subst: Substitution,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> LogEstimate {
    let mut total = LogEstimate::zero();
    let start = if from.r < SPLIT_RADIUS {
        let inner: Vec<f64> = breaks.iter().copied().filter(|&b| b > from.r && b < SPLIT_RADIUS).collect();
        let direct = log_integrate_interval(
            |r| {
                let p = RadialPoint::from_r(r);
                f(&p).value(&p)
            },
            from.r,
            SPLIT_RADIUS,
            &inner,
            spec,
        );
        total = total.plus(direct);
        RadialPoint::from_r(SPLIT_RADIUS)
    } else {
        from
    };
    let t0 = subst.t_of(&start);
    let mapped: Vec<f64> = breaks
        .iter()
        .filter(|&&b| b > start.r && b < 1.0)
        .map(|&b| subst.t_of(&RadialPoint::from_r(b)))
        .collect();
    let outer = log_integrate_halfline(
        |t| {
            let (p, jac) = subst.point(t);
            let v = f(&p);
            if v.regular == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                (v + jac).value(&p)
            }
        },
        t0,
        &mapped,
        spec,
    );
    total.plus(outer)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
