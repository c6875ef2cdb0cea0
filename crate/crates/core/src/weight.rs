//! Radial weights on the unit disc and the derived weight σ.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::quadrature::{DecayClass, LogTerm, RadialPoint};

/// A radial density `w(r)` on `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialWeight {
    /// `(α+1)(1−r²)^α`, `α > −1`.
    Standard { alpha: f64 },
    /// `(α+1)(1−r)^α`, `α > −1`.
    Boundary { alpha: f64 },
    /// `exp(−α/(1−r^l)^β)`.
    Exponential { alpha: f64, beta: f64, l: f64 },
    /// `1/((1−r²)(1 − ln(1−r²))^α)`, `α > 1`.
    RapidlyIncreasing { alpha: f64 },
    Tabulated(Tabulated),
    Composite(Composite),
}

/// Density sampled at increasing radii, interpolated monotonically and held
/// constant outside the sampled range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    interp: Pchip,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

/// `exp(log_scale) · r^radial_power · Π w_i(r)^{e_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Composite {
    pub log_scale: f64,
    pub radial_power: f64,
    pub factors: Vec<(RadialWeight, f64)>,
}

/// Leading behaviour of a density as `u = 1 − r → 0`:
/// `exp(−Σ c_k u^{−β_k}) · u^power · ln(1/u)^log_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySignature {
    pub exp_terms: Vec<ExpTerm>,
    pub power: f64,
    pub log_power: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpTerm {
    pub beta: f64,
    pub coef: f64,
    /// Sum of absolute contributions, to tell cancellation from a true zero.
    pub magnitude: f64,
    pub l: f64,
}

/// Relative size below which a combined exponential coefficient counts as cancelled.
const CANCEL_TOL: f64 = 1e-12;

impl BoundarySignature {
    fn flat() -> Self {
        BoundarySignature {
            exp_terms: Vec::new(),
            power: 0.0,
            log_power: 0.0,
        }
    }

    fn scaled(mut self, e: f64) -> Self {
        for t in &mut self.exp_terms {
            t.coef *= e;
            t.magnitude *= e.abs();
        }
        self.power *= e;
        self.log_power *= e;
        self
    }

    fn merge(mut self, other: BoundarySignature) -> Self {
        for t in other.exp_terms {
            match self
                .exp_terms
                .iter_mut()
                .find(|s| (s.beta - t.beta).abs() <= CANCEL_TOL * s.beta)
            {
                Some(s) => {
                    s.coef += t.coef;
                    s.magnitude += t.magnitude;
                }
                None => self.exp_terms.push(t),
            }
        }
        self.power += other.power;
        self.log_power += other.log_power;
        self
    }

    /// The exponential term that dominates at the boundary, if any survives cancellation.
    pub fn leading_exp(&self) -> Option<ExpTerm> {
        self.exp_terms
            .iter()
            .filter(|t| t.coef.abs() > CANCEL_TOL * t.magnitude)
            .copied()
            .max_by(|a, b| a.beta.total_cmp(&b.beta))
    }

    fn has_cancellation(&self) -> bool {
        self.exp_terms
            .iter()
            .any(|t| t.magnitude > 0.0 && t.coef.abs() <= CANCEL_TOL * t.magnitude)
    }

    pub fn is_integrable(&self) -> bool {
        if let Some(t) = self.leading_exp() {
            return t.coef > 0.0;
        }
        if (self.power + 1.0).abs() <= 1e-12 {
            self.log_power < -1.0
        } else {
            self.power > -1.0
        }
    }

    pub fn decay_class(&self) -> DecayClass {
        if let Some(t) = self.leading_exp() {
            if t.coef > 0.0 {
                return DecayClass::Exponential { beta: t.beta, l: t.l };
            }
            return DecayClass::Generic;
        }
        if (self.power + 1.0).abs() <= 1e-12 {
            DecayClass::Blowup
        } else if self.log_power != 0.0 || self.has_cancellation() {
            DecayClass::Generic
        } else {
            DecayClass::Polynomial
        }
    }
}

impl Tabulated {
    /// Build from `(radius, density)` samples. Radii must be nondecreasing in
    /// `[0, 1)`; repeated radii must repeat the density.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        let mut xs: Vec<f64> = Vec::with_capacity(samples.len());
        let mut ys: Vec<f64> = Vec::with_capacity(samples.len());
        for &(r, d) in samples {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::domain(format!("tabulated radius {r} outside [0,1)")));
            }
            if !(d >= 0.0) || !d.is_finite() {
                return Err(Error::domain(format!("tabulated density {d} at r={r} is not a nonnegative number")));
            }
            if let Some(&last) = xs.last() {
                if r < last {
                    return Err(Error::domain(format!("tabulated radii decrease at r={r}")));
                }
                if r == last {
                    if d != ys[ys.len() - 1] {
                        return Err(Error::domain(format!("conflicting densities at repeated radius {r}")));
                    }
                    continue;
                }
            }
            xs.push(r);
            ys.push(d);
        }
        if xs.len() < 2 {
            return Err(Error::domain("a tabulated weight needs at least two distinct radii"));
        }
        if ys[ys.len() - 1] <= 0.0 {
            return Err(Error::domain(
                "the last tabulated density must be positive (the tail integral would vanish)",
            ));
        }
        Ok(Tabulated {
            interp: Pchip::new(xs, ys),
            source: None,
        })
    }

    /// Two-column text: radius and density per line, separated by whitespace
    /// or a comma. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(Error::parse(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(format!("line {}: malformed number '{s}'", lineno + 1)))
            };
            samples.push((num(cols[0])?, num(cols[1])?));
        }
        Tabulated::new(&samples)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut t = Tabulated::from_text(&text)?;
        t.source = Some(path.display().to_string());
        Ok(t)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.interp.eval(r)
    }

    pub fn knots(&self) -> &[f64] {
        self.interp.knots()
    }

    fn has_zeros(&self) -> bool {
        self.interp.values().iter().any(|&v| v <= 0.0)
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

impl RadialWeight {
    pub fn standard(alpha: f64) -> Result<Self> {
        let w = RadialWeight::Standard { alpha };
        w.validate()?;
        Ok(w)
    }

    pub fn boundary(alpha: f64) -> Result<Self> {
        let w = RadialWeight::Boundary { alpha };
        w.validate()?;
        Ok(w)
    }

    pub fn exponential(alpha: f64, beta: f64, l: f64) -> Result<Self> {
        let w = RadialWeight::Exponential { alpha, beta, l };
        w.validate()?;
        Ok(w)
    }

    pub fn rapidly_increasing(alpha: f64) -> Result<Self> {
        let w = RadialWeight::RapidlyIncreasing { alpha };
        w.validate()?;
        Ok(w)
    }

    /// The constant density 1.
    pub fn unit() -> Self {
        RadialWeight::Standard { alpha: 0.0 }
    }

    /// `r^k`, as a profile rather than a weight.
    pub fn power(k: f64) -> Self {
        RadialWeight::Composite(Composite {
            log_scale: 0.0,
            radial_power: k,
            factors: Vec::new(),
        })
    }

    /// `c · self`.
    pub fn scaled(&self, c: f64) -> Self {
        RadialWeight::Composite(Composite {
            log_scale: c.ln(),
            radial_power: 0.0,
            factors: vec![(self.clone(), 1.0)],
        })
    }

    /// `r^radial_power · Π w_i^{e_i}`. Composite factors are flattened, equal
    /// factors merged and unit factors dropped, so `ω·ω^{-1}` cancels exactly.
    pub fn product(radial_power: f64, factors: Vec<(RadialWeight, f64)>) -> Self {
        let mut out = Composite {
            log_scale: 0.0,
            radial_power,
            factors: Vec::new(),
        };
        for (w, e) in factors {
            match w {
                RadialWeight::Composite(c) => {
                    out.log_scale += e * c.log_scale;
                    out.radial_power += e * c.radial_power;
                    out.factors.extend(c.factors.into_iter().map(|(fw, fe)| (fw, fe * e)));
                }
                other => out.factors.push((other, e)),
            }
        }
        let mut merged: Vec<(RadialWeight, f64)> = Vec::with_capacity(out.factors.len());
        for (w, e) in out.factors {
            match merged.iter_mut().find(|(m, _)| *m == w) {
                Some(slot) => slot.1 += e,
                None => merged.push((w, e)),
            }
        }
        merged.retain(|(w, e)| *e != 0.0 && *w != RadialWeight::unit());
        out.log_scale += fold_powers(&mut merged);
        fold_exponentials(&mut merged);
        out.factors = merged;
        RadialWeight::Composite(out)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RadialWeight::Standard { alpha } => check(alpha > -1.0 && alpha.is_finite(), || {
                format!("standard weight needs alpha > -1, got {alpha}")
            }),
            RadialWeight::Boundary { alpha } => check(alpha > -1.0 && alpha.is_finite(), || {
                format!("boundary weight needs alpha > -1, got {alpha}")
            }),
            RadialWeight::Exponential { alpha, beta, l } => {
                check(alpha > 0.0 && alpha.is_finite(), || format!("exponential weight needs alpha > 0, got {alpha}"))?;
                check(beta > 0.0 && beta <= 1.0, || format!("exponential weight needs beta in (0,1], got {beta}"))?;
                check(l > 0.0 && l.is_finite(), || format!("exponential weight needs l > 0, got {l}"))
            }
            RadialWeight::RapidlyIncreasing { alpha } => check(alpha > 1.0 && alpha.is_finite(), || {
                format!("rapidly increasing weight needs alpha > 1, got {alpha}")
            }),
            RadialWeight::Tabulated(_) => Ok(()),
            RadialWeight::Composite(ref c) => {
                check(c.log_scale.is_finite() && c.radial_power.is_finite(), || {
                    "composite scale and power must be finite".to_string()
                })?;
                for (w, e) in &c.factors {
                    check(e.is_finite(), || "composite exponents must be finite".to_string())?;
                    w.validate()?;
                }
                Ok(())
            }
        }
    }

    /// `ln w` at a radial point; `−∞` where the density vanishes.
    pub fn ln_density(&self, p: &RadialPoint) -> f64 {
        self.log_parts(p).value(p)
    }

    /// `ln w` split into a regular part and an exact power of `1 − r`.
    pub fn log_parts(&self, p: &RadialPoint) -> LogTerm {
        match *self {
            RadialWeight::Standard { alpha } => {
                if alpha == 0.0 {
                    LogTerm::regular(0.0)
                } else {
                    LogTerm::new((alpha + 1.0).ln() + alpha * (2.0 - p.u).ln(), alpha)
                }
            }
            RadialWeight::Boundary { alpha } => LogTerm::new((alpha + 1.0).ln(), alpha),
            RadialWeight::Exponential { alpha, beta, l } => {
                let q = -(l * p.ln_r).exp_m1();
                LogTerm::regular(-alpha * (-beta * q.ln()).exp())
            }
            RadialWeight::RapidlyIncreasing { alpha } => {
                let l2 = p.ln_one_minus_r2();
                LogTerm::new(-(2.0 - p.u).ln() - alpha * (1.0 - l2).ln(), -1.0)
            }
            RadialWeight::Tabulated(ref t) => LogTerm::regular(t.eval(p.r).ln()),
            RadialWeight::Composite(ref c) => {
                let mut acc = LogTerm::regular(c.log_scale);
                if c.radial_power != 0.0 {
                    acc.regular += c.radial_power * p.ln_r;
                }
                for (w, e) in &c.factors {
                    if *e != 0.0 {
                        acc = acc + w.log_parts(p).scaled(*e);
                    }
                }
                acc
            }
        }
    }

    /// Density at `r ∈ [0, 1)`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        Ok(self.log_evaluate(r)?.exp())
    }

    pub fn log_evaluate(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::domain(format!("radius {r} outside [0,1)")));
        }
        Ok(self.ln_density(&RadialPoint::from_r(r)))
    }

    pub fn signature(&self) -> BoundarySignature {
        match *self {
            RadialWeight::Standard { alpha } | RadialWeight::Boundary { alpha } => BoundarySignature {
                power: alpha,
                ..BoundarySignature::flat()
            },
            RadialWeight::Exponential { alpha, beta, l } => {
                let coef = alpha * l.powf(-beta);
                BoundarySignature {
                    exp_terms: vec![ExpTerm {
                        beta,
                        coef,
                        magnitude: coef,
                        l,
                    }],
                    ..BoundarySignature::flat()
                }
            }
            RadialWeight::RapidlyIncreasing { alpha } => BoundarySignature {
                power: -1.0,
                log_power: -alpha,
                ..BoundarySignature::flat()
            },
            RadialWeight::Tabulated(_) => BoundarySignature::flat(),
            RadialWeight::Composite(ref c) => c
                .factors
                .iter()
                .fold(BoundarySignature::flat(), |acc, (w, e)| acc.merge(w.signature().scaled(*e))),
        }
    }

    pub fn decay_class(&self) -> DecayClass {
        match *self {
            RadialWeight::Standard { .. } | RadialWeight::Boundary { .. } | RadialWeight::Tabulated(_) => {
                DecayClass::Polynomial
            }
            RadialWeight::Exponential { beta, l, .. } => DecayClass::Exponential { beta, l },
            RadialWeight::RapidlyIncreasing { .. } => DecayClass::Blowup,
            RadialWeight::Composite(_) => self.signature().decay_class(),
        }
    }

    /// Whether the density is integrable on `[0, 1)`, judged from its boundary behaviour.
    pub fn is_integrable(&self) -> bool {
        self.signature().is_integrable()
    }

    /// Smallest `r0` such that the density is positive on `[r0, 1)`.
    pub fn positive_from(&self) -> f64 {
        match self {
            RadialWeight::Tabulated(t) => {
                let vals = t.interp.values();
                let knots = t.knots();
                match vals.iter().rposition(|&v| v <= 0.0) {
                    None => 0.0,
                    Some(i) => knots[i],
                }
            }
            RadialWeight::Composite(c) => c
                .factors
                .iter()
                .map(|(w, _)| w.positive_from())
                .fold(0.0, f64::max),
            _ => 0.0,
        }
    }

    fn has_zeros(&self) -> bool {
        match self {
            RadialWeight::Tabulated(t) => t.has_zeros(),
            RadialWeight::Composite(c) => c.factors.iter().any(|(w, e)| *e != 0.0 && w.has_zeros()),
            _ => false,
        }
    }

    /// Interpolation knots and other kinks, as quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadialWeight::Tabulated(t) => t.knots().to_vec(),
            RadialWeight::Composite(c) => {
                let mut v: Vec<f64> = c.factors.iter().flat_map(|(w, _)| w.breakpoints()).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }

    /// Parse the weight mini-language: `std:alpha=A`, `boundary:alpha=A`,
    /// `exp:alpha=A,beta=B,l=L`, `ri:alpha=A` or `tab:PATH`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("weight spec '{spec}' lacks a kind prefix")))?;
        match kind {
            "std" => {
                let kv = parse_keys(rest, &["alpha"])?;
                RadialWeight::standard(kv[0])
            }
            "boundary" => {
                let kv = parse_keys(rest, &["alpha"])?;
                let w = RadialWeight::Boundary { alpha: kv[0] };
                w.validate()?;
                Ok(w)
            }
            "exp" => {
                let kv = parse_keys(rest, &["alpha", "beta", "l"])?;
                RadialWeight::exponential(kv[0], kv[1], kv[2])
            }
            "ri" => {
                let kv = parse_keys(rest, &["alpha"])?;
                RadialWeight::rapidly_increasing(kv[0])
            }
            "tab" => {
                if rest.is_empty() {
                    return Err(Error::parse("tab: needs a file path"));
                }
                Ok(RadialWeight::Tabulated(Tabulated::from_file(Path::new(rest))?))
            }
            other => Err(Error::parse(format!("unknown weight kind '{other}'"))),
        }
    }
}

/// Parse `k1=v1,k2=v2,...`, requiring exactly the keys in `keys` (any order).
pub fn parse_keys(text: &str, keys: &[&str]) -> Result<Vec<f64>> {
    let mut out: Vec<Option<f64>> = vec![None; keys.len()];
    for item in text.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("expected key=value, found '{item}'")))?;
        let idx = keys
            .iter()
            .position(|&key| key == k.trim())
            .ok_or_else(|| Error::parse(format!("unknown key '{}'", k.trim())))?;
        if out[idx].is_some() {
            return Err(Error::parse(format!("duplicate key '{}'", k.trim())));
        }
        let val: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("malformed number '{}' for key '{}'", v.trim(), k.trim())))?;
        out[idx] = Some(val);
    }
    out.iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| Error::parse(format!("missing key '{k}'"))))
        .collect()
}

impl fmt::Display for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialWeight::Standard { alpha } => write!(f, "std:alpha={alpha}"),
            RadialWeight::Boundary { alpha } => write!(f, "boundary:alpha={alpha}"),
            RadialWeight::Exponential { alpha, beta, l } => write!(f, "exp:alpha={alpha},beta={beta},l={l}"),
            RadialWeight::RapidlyIncreasing { alpha } => write!(f, "ri:alpha={alpha}"),
            RadialWeight::Tabulated(t) => match &t.source {
                Some(s) => write!(f, "tab:{s}"),
                None => write!(f, "tab:<{} samples>", t.knots().len()),
            },
            RadialWeight::Composite(c) => {
                write!(f, "{:.6}", c.log_scale.exp())?;
                if c.radial_power != 0.0 {
                    write!(f, "·r^{}", c.radial_power)?;
                }
                for (w, e) in &c.factors {
                    write!(f, "·[{w}]^{e}")?;
                }
                Ok(())
            }
        }
    }
}

/// Conjugate exponent `p/(p−1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Replaces all standard factors by one, and likewise for boundary factors,
/// when the folded exponent is still a weight. Returns the log-scale picked up.
fn fold_powers(factors: &mut Vec<(RadialWeight, f64)>) -> f64 {
    let mut scale = 0.0;
    for standard in [true, false] {
        let alpha_of = |w: &RadialWeight| match *w {
            RadialWeight::Standard { alpha } if standard => Some(alpha),
            RadialWeight::Boundary { alpha } if !standard => Some(alpha),
            _ => None,
        };
        let picked: Vec<(f64, f64)> = factors.iter().filter_map(|(w, e)| alpha_of(w).map(|a| (a, *e))).collect();
        if picked.len() < 2 && !picked.iter().any(|&(_, e)| e != 1.0) {
            continue;
        }
        let gamma: f64 = picked.iter().map(|&(a, e)| a * e).sum();
        if !(gamma > -1.0) {
            continue;
        }
        scale += picked.iter().map(|&(a, e)| e * (a + 1.0).ln()).sum::<f64>() - (gamma + 1.0).ln();
        factors.retain(|(w, _)| alpha_of(w).is_none());
        if gamma != 0.0 || !standard {
            let w = if standard {
                RadialWeight::Standard { alpha: gamma }
            } else {
                RadialWeight::Boundary { alpha: gamma }
            };
            factors.push((w, 1.0));
        }
    }
    scale
}

/// Folds exponential factors of one shape `(β, l)` into one factor when the
/// combined coefficient is positive, and drops them when it cancels.
fn fold_exponentials(factors: &mut Vec<(RadialWeight, f64)>) {
    let mut i = 0;
    while i < factors.len() {
        let RadialWeight::Exponential { beta, l, .. } = factors[i].0 else {
            i += 1;
            continue;
        };
        let same = |w: &RadialWeight| matches!(*w, RadialWeight::Exponential { beta: b, l: ll, .. } if b == beta && ll == l);
        let group: Vec<(f64, f64)> = factors
            .iter()
            .filter_map(|(w, e)| match *w {
                RadialWeight::Exponential { alpha, .. } if same(w) => Some((alpha, *e)),
                _ => None,
            })
            .collect();
        let alpha: f64 = group.iter().map(|&(a, e)| a * e).sum();
        let magnitude: f64 = group.iter().map(|&(a, e)| (a * e).abs()).sum();
        if group.len() == 1 && group[0].1 == 1.0 {
            i += 1;
        } else if alpha.abs() <= CANCEL_TOL * magnitude {
            factors.retain(|(w, _)| !same(w));
        } else if alpha > 0.0 {
            factors.retain(|(w, _)| !same(w));
            factors.insert(i, (RadialWeight::Exponential { alpha, beta, l }, 1.0));
            i += 1;
        } else {
            i += 1;
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CANCEL_TOL * a.abs().max(b.abs())
}

/// `σ = ω^{p'} ν^{−p'/p}`. Pairs of standard weights and exponential pairs
/// with matching shape reduce to a single closed-form kind.
pub fn sigma_weight(omega: &RadialWeight, nu: &RadialWeight, p: f64) -> Result<RadialWeight> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must lie in (1,∞), got {p}")));
    }
    omega.validate()?;
    nu.validate()?;
    if nu.has_zeros() {
        return Err(Error::domain("σ needs ν > 0 wherever ω is supported; ν has zeros"));
    }
    if omega == nu {
        return Ok(omega.clone());
    }
    let pp = conjugate(p);
    match (omega, nu) {
        (RadialWeight::Standard { alpha: a_w }, RadialWeight::Standard { alpha: a_n })
        | (RadialWeight::Boundary { alpha: a_w }, RadialWeight::Boundary { alpha: a_n }) => {
            let gamma = pp * (a_w - a_n / p);
            if gamma <= -1.0 {
                return Err(Error::NotAWeight(format!(
                    "σ behaves like (1−r)^{gamma:.6}, which is not integrable"
                )));
            }
            let log_scale = pp * (a_w + 1.0).ln() - (pp / p) * (a_n + 1.0).ln() - (gamma + 1.0).ln();
            let inner = if matches!(omega, RadialWeight::Standard { .. }) {
                RadialWeight::Standard { alpha: gamma }
            } else {
                RadialWeight::Boundary { alpha: gamma }
            };
            Ok(RadialWeight::Composite(Composite {
                log_scale,
                radial_power: 0.0,
                factors: vec![(inner, 1.0)],
            }))
        }
        (
            RadialWeight::Exponential {
                alpha: at,
                beta: bt,
                l: lt,
            },
            RadialWeight::Exponential { alpha: a, beta: b, l },
        ) if close(*bt, *b) && close(*lt, *l) => {
            let c = pp * (at - a / p);
            if c.abs() <= CANCEL_TOL * pp * at {
                Ok(RadialWeight::unit())
            } else if c < 0.0 {
                Err(Error::NotAWeight(format!(
                    "σ = exp({:.6}/(1−r^l)^β) grows without bound",
                    -c
                )))
            } else {
                Ok(RadialWeight::Exponential {
                    alpha: c,
                    beta: *b,
                    l: *l,
                })
            }
        }
        _ => {
            let sigma = RadialWeight::product(0.0, vec![(omega.clone(), pp), (nu.clone(), -pp / p)]);
            if sigma.is_integrable() {
                Ok(sigma)
            } else {
                Err(Error::NotAWeight(format!("σ for ω={omega}, ν={nu}, p={p} is not integrable")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evaluation_examples() {
        assert_eq!(RadialWeight::unit().evaluate(0.5).unwrap(), 1.0);
        let e = RadialWeight::exponential(1.0, 1.0, 1.0).unwrap();
        assert!((e.evaluate(0.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert!(matches!(e.evaluate(1.0), Err(Error::Domain(_))));
        assert!(matches!(e.evaluate(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn tabulated_standard_samples() {
        let samples: Vec<(f64, f64)> = (0..=100)
            .map(|i| {
                let r = i as f64 / 101.0;
                (r, 2.0 * (1.0 - r * r))
            })
            .collect();
        let w = RadialWeight::Tabulated(Tabulated::new(&samples).unwrap());
        let exact = RadialWeight::standard(1.0).unwrap().evaluate(0.3).unwrap();
        assert!((w.evaluate(0.3).unwrap() - exact).abs() < 1e-4);
        assert!((exact - 1.82).abs() < 1e-14);
    }

    #[test]
    fn tabulated_rejects_bad_input() {
        assert!(Tabulated::new(&[(0.1, 1.0), (0.05, 1.0)]).is_err());
        assert!(Tabulated::new(&[(0.1, 1.0), (0.2, 0.0)]).is_err());
        assert!(Tabulated::new(&[(0.1, 1.0), (1.0, 1.0)]).is_err());
        assert!(Tabulated::new(&[(0.1, 1.0), (0.1, 1.0), (0.2, 2.0)]).is_ok());
        assert!(Tabulated::from_text("0.1 1\n0.2 x\n").is_err());
        let t = Tabulated::from_text("# r d\n0.0, 1\n0.5 2 # comment\n\n0.9 3\n").unwrap();
        assert_eq!(t.knots(), &[0.0, 0.5, 0.9]);
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(RadialWeight::parse("std:alpha=1").unwrap(), RadialWeight::Standard { alpha: 1.0 });
        assert_eq!(
            RadialWeight::parse("exp:l=2,alpha=1,beta=0.5").unwrap(),
            RadialWeight::Exponential {
                alpha: 1.0,
                beta: 0.5,
                l: 2.0
            }
        );
        assert_eq!(RadialWeight::parse("boundary:alpha=0.5").unwrap(), RadialWeight::Boundary { alpha: 0.5 });
        assert!(matches!(RadialWeight::parse("boundary:alpha=-1"), Err(Error::Domain(_))));
        assert!(matches!(RadialWeight::parse("std:alpha=1,gamma=2"), Err(Error::Parse(_))));
        assert!(matches!(RadialWeight::parse("std:alpha=abc"), Err(Error::Parse(_))));
        assert!(matches!(RadialWeight::parse("exp:alpha=1,beta=0.5"), Err(Error::Parse(_))));
        assert!(matches!(RadialWeight::parse("std:alpha=1,alpha=1"), Err(Error::Parse(_))));
        assert!(matches!(RadialWeight::parse("foo:alpha=1"), Err(Error::Parse(_))));
        assert!(matches!(RadialWeight::parse("std:alpha=-2"), Err(Error::Domain(_))));
        assert!(matches!(RadialWeight::parse("ri:alpha=1"), Err(Error::Domain(_))));
        assert!(matches!(RadialWeight::parse("tab:/nonexistent/file"), Err(Error::Io(_))));
    }

    #[test]
    fn display_round_trips_through_parse() {
        for spec in ["std:alpha=2.5", "exp:alpha=1,beta=0.5,l=3", "ri:alpha=2"] {
            let w = RadialWeight::parse(spec).unwrap();
            assert_eq!(RadialWeight::parse(&w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn sigma_of_equal_weights_is_the_weight() {
        for w in [RadialWeight::unit(), RadialWeight::exponential(1.0, 0.5, 2.0).unwrap()] {
            for p in [1.5, 2.0, 3.0] {
                assert_eq!(sigma_weight(&w, &w, p).unwrap(), w);
            }
        }
    }

    #[test]
    fn sigma_exponential_pairs() {
        let nu = RadialWeight::exponential(1.0, 0.5, 1.0).unwrap();
        let om = RadialWeight::exponential(0.8, 0.5, 1.0).unwrap();
        // p' (α̃ − α/p) = 2 (0.8 − 0.5)
        match sigma_weight(&om, &nu, 2.0).unwrap() {
            RadialWeight::Exponential { alpha, beta, l } => {
                assert!((alpha - 0.6).abs() < 1e-15);
                assert_eq!((beta, l), (0.5, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        let om_equal = RadialWeight::exponential(0.5, 0.5, 1.0).unwrap();
        assert_eq!(sigma_weight(&om_equal, &nu, 2.0).unwrap(), RadialWeight::unit());
        let om_small = RadialWeight::exponential(0.4, 0.5, 1.0).unwrap();
        assert!(matches!(sigma_weight(&om_small, &nu, 2.0), Err(Error::NotAWeight(_))));
        // β > β̃
        let nu_steep = RadialWeight::exponential(1.0, 0.75, 1.0).unwrap();
        assert!(matches!(sigma_weight(&om, &nu_steep, 2.0), Err(Error::NotAWeight(_))));
        // β̃ > β: σ decays with the larger exponent
        let om_steep = RadialWeight::exponential(1.0, 0.75, 1.0).unwrap();
        let s = sigma_weight(&om_steep, &nu, 2.0).unwrap();
        assert_eq!(s.decay_class(), DecayClass::Exponential { beta: 0.75, l: 1.0 });
    }

    #[test]
    fn sigma_matches_pointwise_definition() {
        let om = RadialWeight::exponential(2.0, 0.5, 3.0).unwrap();
        let nu = RadialWeight::exponential(1.0, 0.5, 1.0).unwrap();
        let p: f64 = 2.5;
        let s = sigma_weight(&om, &nu, p).unwrap();
        let pp = conjugate(p);
        for &r in &[0.0, 0.3, 0.9, 0.99] {
            let direct = pp * om.log_evaluate(r).unwrap() - pp / p * nu.log_evaluate(r).unwrap();
            assert!((s.log_evaluate(r).unwrap() - direct).abs() < 1e-10 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn standard_sigma_integrability_threshold() {
        let w0 = RadialWeight::unit();
        let w2 = RadialWeight::standard(2.0).unwrap();
        assert!(matches!(sigma_weight(&w0, &w2, 2.0), Err(Error::NotAWeight(_))));
        let w1 = RadialWeight::standard(1.0).unwrap();
        let s = sigma_weight(&w1, &w0, 2.0).unwrap();
        // 4 (1−r²)²
        assert!((s.evaluate(0.5).unwrap() - 4.0 * 0.75f64.powi(2)).abs() < 1e-13);
    }

    #[test]
    fn sigma_requires_positive_nu() {
        let t = Tabulated::new(&[(0.0, 0.0), (0.5, 1.0), (0.9, 1.0)]).unwrap();
        let nu = RadialWeight::Tabulated(t);
        assert!(matches!(sigma_weight(&RadialWeight::unit(), &nu, 2.0), Err(Error::Domain(_))));
        assert_eq!(nu.positive_from(), 0.0);
    }

    #[test]
    fn composite_signatures() {
        let ri = RadialWeight::rapidly_increasing(2.0).unwrap();
        assert_eq!(ri.decay_class(), DecayClass::Blowup);
        assert!(ri.is_integrable());
        let sq = RadialWeight::product(0.0, vec![(ri.clone(), 2.0)]);
        assert!(RadialWeight::product(0.0, vec![(ri.clone(), 0.5)]).is_integrable());
        assert!(!sq.is_integrable());
        let cancel = RadialWeight::product(
            0.0,
            vec![
                (RadialWeight::exponential(2.0, 1.0, 2.0).unwrap(), 1.0),
                (RadialWeight::exponential(1.0, 1.0, 1.0).unwrap(), -1.0),
            ],
        );
        assert!(cancel.is_integrable());
        assert_eq!(cancel.decay_class(), DecayClass::Generic);
    }

    #[test]
    fn standard_factors_fold_into_one() {
        let a = RadialWeight::standard(1.0).unwrap();
        let b = RadialWeight::standard(2.0).unwrap();
        let folded = RadialWeight::product(1.5, vec![(a.clone(), 2.0), (b.clone(), -0.5)]);
        let RadialWeight::Composite(c) = &folded else { panic!("expected a composite") };
        assert_eq!(c.factors, vec![(RadialWeight::Standard { alpha: 1.0 }, 1.0)]);
        for r in [0.0f64, 0.2, 0.7, 0.99] {
            let direct = r.powf(1.5) * a.evaluate(r).unwrap().powi(2) / b.evaluate(r).unwrap().sqrt();
            assert!((folded.evaluate(r).unwrap() - direct).abs() <= 1e-13 * direct.max(1e-300));
        }
        let e1 = RadialWeight::exponential(2.0, 0.5, 1.0).unwrap();
        let e2 = RadialWeight::exponential(1.0, 0.5, 1.0).unwrap();
        let folded = RadialWeight::product(0.0, vec![(e1.clone(), 2.0), (e2.clone(), -2.0)]);
        let RadialWeight::Composite(c) = &folded else { panic!("expected a composite") };
        assert_eq!(c.factors, vec![(RadialWeight::Exponential { alpha: 2.0, beta: 0.5, l: 1.0 }, 1.0)]);
        let gone = RadialWeight::product(0.0, vec![(e1.clone(), 0.5), (e2.clone(), -1.0)]);
        assert_eq!(gone, RadialWeight::power(0.0));
        // a non-integrable fold is left alone so that integrability is still reported
        assert!(!RadialWeight::product(0.0, vec![(e1, -1.0)]).is_integrable());
        let bad = RadialWeight::product(0.0, vec![(b, -1.0)]);
        assert!(!bad.is_integrable());
    }

    proptest! {
        #[test]
        fn scaling_shifts_log_density(c in 0.01f64..100.0, r in 0.0f64..0.999) {
            let w = RadialWeight::standard(1.5).unwrap();
            let s = w.scaled(c);
            let diff = s.log_evaluate(r).unwrap() - w.log_evaluate(r).unwrap();
            prop_assert!((diff - c.ln()).abs() < 1e-12);
        }

        #[test]
        fn densities_nonnegative(alpha in 0.1f64..5.0, beta in 0.05f64..1.0, l in 0.2f64..4.0, r in 0.0f64..0.9999) {
            let ws = [
                RadialWeight::standard(alpha - 0.9).unwrap(),
                RadialWeight::exponential(alpha, beta, l).unwrap(),
                RadialWeight::rapidly_increasing(alpha + 1.0).unwrap(),
            ];
            for w in ws {
                let v = w.evaluate(r).unwrap();
                prop_assert!(v >= 0.0 && v.is_finite());
            }
        }
    }
}
