//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes).

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

impl Pchip {
    /// `xs` strictly increasing, at least two knots.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && xs.len() == ys.len());
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                let (a, b) = (delta[i - 1], delta[i]);
                if a * b > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    slopes[i] = (w1 + w2) / (w1 / a + w2 / b);
                }
            }
            slopes[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Pchip { xs, ys, slopes }
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Value at `x`, constant beyond the outer knots.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.xs.partition_point(|&k| k <= x) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_knots_and_lines() {
        let p = Pchip::new(vec![0.0, 1.0, 3.0, 4.0], vec![1.0, 2.0, 4.0, 5.0]);
        for (x, y) in [(0.0, 1.0), (1.0, 2.0), (3.0, 4.0), (4.0, 5.0), (2.0, 3.0), (3.5, 4.5)] {
            assert!((p.eval(x) - y).abs() < 1e-14);
        }
    }

    #[test]
    fn smooth_function_accuracy() {
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 101.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * (1.0 - x * x)).collect();
        let p = Pchip::new(xs, ys);
        assert!((p.eval(0.3) - 1.82).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn stays_within_data_range(ys in proptest::collection::vec(0.0f64..10.0, 3..20), t in 0.0f64..1.0) {
            let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64 * 0.1).collect();
            let x = t * xs[xs.len() - 1];
            let i = ((x / 0.1).floor() as usize).min(ys.len() - 2);
            let p = Pchip::new(xs, ys.clone());
            let v = p.eval(x);
            let lo = ys[i].min(ys[i + 1]);
            let hi = ys[i].max(ys[i + 1]);
            prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }
}
