//! Truncated Taylor arithmetic, used to get the first four derivatives of a
//! log-density at the Laplace point without hand-deriving each weight family.

use std::ops::{Add, Mul, Neg, Sub};

pub const ORDER: usize = 5;

/// Taylor coefficients `c[k] = f^{(k)}(x0) / k!` for `k < ORDER`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; ORDER],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; ORDER];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; ORDER];
        c[0] = x0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        self.c[k] * fact
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Jet { c }
    }

    pub fn exp(self) -> Self {
        let mut out = [0.0; ORDER];
        out[0] = self.c[0].exp();
        for k in 1..ORDER {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * out[k - j];
            }
            out[k] = acc / k as f64;
        }
        Jet { c: out }
    }

    pub fn ln(self) -> Self {
        let a0 = self.c[0];
        let mut out = [0.0; ORDER];
        out[0] = a0.ln();
        for k in 1..ORDER {
            let mut acc = 0.0;
            for (j, o) in out.iter().enumerate().take(k).skip(1) {
                acc += j as f64 * o * self.c[k - j];
            }
            out[k] = (self.c[k] - acc / k as f64) / a0;
        }
        Jet { c: out }
    }

    pub fn powf(self, e: f64) -> Self {
        self.ln().scale(e).exp()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        Jet { c }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; ORDER];
        for i in 0..ORDER {
            for j in 0..ORDER - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_composite_function() {
        // f(x) = exp(-1/(1-x)) at x0 = 0.3
        let x0 = 0.3;
        let x = Jet::variable(x0);
        let f = (-(x.scale(-1.0) + 1.0).powf(-1.0)).exp();
        let g = |x: f64| (-1.0 / (1.0 - x)).exp();
        assert!((f.value() - g(x0)).abs() < 1e-15);
        // central differences for the first two derivatives
        let h = 1e-4;
        let d1 = (g(x0 + h) - g(x0 - h)) / (2.0 * h);
        let d2 = (g(x0 + h) - 2.0 * g(x0) + g(x0 - h)) / (h * h);
        assert!((f.derivative(1) - d1).abs() < 1e-7);
        assert!((f.derivative(2) - d2).abs() < 1e-5);
    }

    #[test]
    fn ln_inverts_exp() {
        let x = Jet::variable(0.7);
        let y = (x * x + 2.0).exp().ln();
        let z = x * x + 2.0;
        for k in 0..ORDER {
            assert!((y.c[k] - z.c[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn power_rule() {
        // d^4/dx^4 x^{2.5} = 2.5·1.5·0.5·(−0.5) x^{−1.5}
        let x0: f64 = 1.7;
        let j = Jet::variable(x0).powf(2.5);
        let exact = 2.5 * 1.5 * 0.5 * -0.5 * x0.powf(-1.5);
        assert!((j.derivative(4) - exact).abs() < 1e-12);
    }
}
