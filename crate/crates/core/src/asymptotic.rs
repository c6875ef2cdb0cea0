//! Laplace-method moments of exponential weights.
//!
//! With `y = −ln(1−r)` the moment integrand is `exp(g(y))`,
//! `g(y) = x ln r − α(1−r^l)^{−β} − y`, which has a single interior maximum.
//! Expanding to fourth order around it gives the leading term plus the first
//! correction `g⁗/(8g''²) + 5g‴²/(24|g''|³)`; the size of that correction is
//! reported as the relative error bracket.

use std::f64::consts::PI;

use crate::jet::Jet;

fn g_jet(y: f64, x: f64, alpha: f64, beta: f64, l: f64) -> Jet {
    let yj = Jet::variable(y);
    let u = (-y).exp();
    let r = -(-yj).exp() + 1.0;
    let mut ln_r = r.ln();
    ln_r.c[0] = (-u).ln_1p();
    let mut q = -(ln_r.scale(l).exp()) + 1.0;
    q.c[0] = -(l * ln_r.c[0]).exp_m1();
    ln_r.scale(x) - q.powf(-beta).scale(alpha) - yj
}

/// Stationary point of `g`, by bracketed Newton on `g'`.
fn stationary_point(x: f64, alpha: f64, beta: f64, l: f64) -> Option<f64> {
    let slope = |y: f64| g_jet(y, x, alpha, beta, l).c[1];
    let mut lo = 1e-3;
    if !(slope(lo) > 0.0) {
        return None;
    }
    let mut hi = 1.0;
    while slope(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1400.0 {
            return None;
        }
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let j = g_jet(y, x, alpha, beta, l);
        let d1 = j.c[1];
        let d2 = 2.0 * j.c[2];
        if d1 > 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let newton = y - d1 / d2;
        let next = if d2 < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - y).abs() <= 1e-15 * y.abs().max(1.0) || hi - lo <= 1e-15 * hi {
            return Some(next);
        }
        y = next;
    }
    Some(y)
}

/// `(ln ω_x, relative error bracket)` for `ω = exp(−α/(1−r^l)^β)`.
pub fn laplace_log_moment(alpha: f64, beta: f64, l: f64, x: f64) -> Option<(f64, f64)> {
    let y = stationary_point(x, alpha, beta, l)?;
    let j = g_jet(y, x, alpha, beta, l);
    let g0 = j.value();
    let a = -j.derivative(2);
    if !(a > 0.0) {
        return None;
    }
    let g3 = j.derivative(3);
    let g4 = j.derivative(4);
    let corr = g4 / (8.0 * a * a) + 5.0 * g3 * g3 / (24.0 * a * a * a);
    if !(corr > -0.5) || !corr.is_finite() {
        return None;
    }
    let ln = g0 + 0.5 * (2.0 * PI / a).ln() + corr.ln_1p();
    Some((ln, corr.abs().max(1e-12)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{log_integrate_radial, QuadratureSpec, RadialPoint, Substitution};
    use crate::weight::RadialWeight;

    fn quad(alpha: f64, beta: f64, l: f64, x: f64) -> f64 {
        let w = RadialWeight::exponential(alpha, beta, l).unwrap();
        log_integrate_radial(
            |p| w.log_parts(p) + crate::quadrature::LogTerm::regular(x * p.ln_r),
            RadialPoint::from_r(0.0),
            Substitution::BoundaryLayer { beta, l },
            &[],
            &QuadratureSpec::default(),
        )
        .ln
    }

    #[test]
    fn agrees_with_quadrature_within_bracket() {
        for &(a, b, l) in &[(1.0, 1.0, 1.0), (1.0, 0.5, 1.0), (2.0, 0.75, 3.0), (0.5, 0.25, 0.5)] {
            for &x in &[1e3, 1e4, 1e5] {
                let (ln, bracket) = laplace_log_moment(a, b, l, x).unwrap();
                let q = quad(a, b, l, x);
                assert!(
                    (ln - q).abs() <= bracket,
                    "({a},{b},{l}) x={x}: laplace {ln} quad {q} bracket {bracket}"
                );
            }
        }
    }

    #[test]
    fn leading_exponent_for_large_x() {
        // ln ω_x ≈ −2√x for α = β = l = 1
        let (ln, _) = laplace_log_moment(1.0, 1.0, 1.0, 1e4).unwrap();
        let lead = -2.0 * 2f64.sqrt() * 5000f64.sqrt();
        assert!((ln - lead).abs() < 0.1 * lead.abs());
    }

    #[test]
    fn bracket_shrinks_with_x() {
        let (_, b1) = laplace_log_moment(1.0, 0.5, 1.0, 1e3).unwrap();
        let (_, b2) = laplace_log_moment(1.0, 0.5, 1.0, 1e6).unwrap();
        assert!(b2 < b1);
    }
}
