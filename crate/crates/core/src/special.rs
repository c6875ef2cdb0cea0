//! Log-gamma ratios that stay accurate when both arguments are large.
//!
//! Moments of the standard weights reduce to Beta functions, and the kernel
//! coefficients need `ln Γ(a+b) − ln Γ(a)` for large `a`. Evaluating that
//! difference through two separate `ln Γ` calls loses roughly `log10(ln Γ(a))`
//! digits, so the ratio is computed directly from the Stirling series with the
//! leading terms cancelled analytically.

/// Argument above which the Stirling series is used.
const STIRLING_MIN: f64 = 30.0;

/// Stirling remainder `ln Γ(z) − [(z−½)ln z − z + ½ln 2π]` for `z ≥ 30`.
fn stirling_tail(z: f64) -> f64 {
    let z2 = z * z;
    let inv = 1.0 / z;
    let inv2 = 1.0 / z2;
    inv * (1.0 / 12.0
        + inv2
            * (-1.0 / 360.0
                + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))))
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    if x.fract() == 0.0 && x <= 23.0 {
        // (x−1)! is exact in f64 up to 22!.
        return (2..x as u64).map(|k| k as f64).product::<f64>().ln();
    }
    statrs::function::gamma::ln_gamma(x)
}

/// `ln Γ(a+b) − ln Γ(a)` for `a > 0`, `a + b > 0`.
pub fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && a + b > 0.0, "ln_gamma_ratio({a}, {b}) out of domain");
    if b == 0.0 {
        return 0.0;
    }
    if a < STIRLING_MIN || a + b < STIRLING_MIN {
        let lo = a.min(a + b);
        let k = (STIRLING_MIN - lo).ceil().max(0.0);
        // ratio(a,b) = ratio(a+k,b) − Σ_{j<k} ln(1 + b/(a+j))
        let mut corr = 0.0;
        let mut j = 0.0;
        while j < k {
            corr += (b / (a + j)).ln_1p();
            j += 1.0;
        }
        return ln_gamma_ratio(a + k, b) - corr;
    }
    let big = a;
    b * big.ln() + (big + b - 0.5) * (b / big).ln_1p() - b + stirling_tail(big + b)
        - stirling_tail(big)
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    // B(a,b) = Γ(b) / [Γ(a+b)/Γ(a)]
    ln_gamma(b) - ln_gamma_ratio(a, b)
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
