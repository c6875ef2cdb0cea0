use bergman_core::conditions::{dp_sequence, Trend};
use bergman_core::exp_classifier::{corroborate, ExpWeightParams, Verdict};
use bergman_core::grid::{PolarGrid, PolarGridFunction};
use bergman_core::kernel::KernelSeries;
use bergman_core::moments::log_moment;
use bergman_core::projection::{project_grid, AnalyticPolynomial};
use bergman_core::{Config, MomentTable, RadialWeight};
use num_complex::Complex64;
use proptest::prelude::*;

fn exp(alpha: f64, beta: f64) -> RadialWeight {
    RadialWeight::exponential(alpha, beta, 1.0).unwrap()
}

#[test]
fn kernel_coefficients_come_from_moments() {
    let cfg = Config::default();
    for w in [RadialWeight::standard(1.5).unwrap(), exp(1.0, 0.5), RadialWeight::rapidly_increasing(2.0).unwrap()] {
        let series = KernelSeries::new(w.clone(), &cfg);
        for n in [0, 1, 7, 40] {
            let want = -(2.0f64.ln() + log_moment(&w, 2.0 * n as f64 + 1.0, &cfg).unwrap().ln);
            let got = series.log_coefficient(n).unwrap();
            assert!((got - want).abs() < 1e-12, "{w} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn moment_table_agrees_with_direct_calls() {
    let cfg = Config::default();
    let w = exp(2.0, 1.0);
    let table = MomentTable::new(w.clone(), &cfg);
    let xs = [0.0, 1.0, 2.5, 30.0, 400.0];
    table.prefetch(&xs).unwrap();
    for x in xs {
        assert_eq!(table.log_moment(x).unwrap().ln, log_moment(&w, x, &cfg).unwrap().ln);
    }
    assert_eq!(table.entries().len(), xs.len());
}

#[test]
fn saved_grid_gives_the_same_projection() {
    let cfg = Config::default();
    let w = RadialWeight::standard(2.0).unwrap();
    let grid = PolarGrid::for_weight(&w, &cfg).unwrap();
    let poly = AnalyticPolynomial::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, -1.0), Complex64::new(2.0, 1.0)]);
    let f = PolarGridFunction::sample(&grid, |z| poly.eval(z));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    f.save(&path).unwrap();
    let g = PolarGridFunction::load(&path).unwrap();
    assert_eq!(f, g);

    let targets = [Complex64::new(0.1, 0.2), Complex64::new(-0.5, 0.0)];
    let a = project_grid(&w, &f, &targets, &cfg).unwrap();
    let b = project_grid(&w, &g, &targets, &cfg).unwrap();
    assert_eq!(a, b);
    for v in a {
        assert!((v.value - poly.eval(v.z)).norm() < 1e-6);
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let par = Config::default();
    let seq = Config::default().sequential();
    let (omega, nu) = (exp(2.0, 1.0), exp(3.0, 1.0));
    let a = dp_sequence(&omega, &nu, 2.0, 60, &par).unwrap();
    let b = dp_sequence(&omega, &nu, 2.0, 60, &seq).unwrap();
    assert_eq!(a.log_values, b.log_values);
}

#[test]
fn corroboration_follows_the_rule() {
    let cfg = Config::default();
    let bounded = ExpWeightParams::new(3.0, (3.0, 0.5, 1.0), (2.0, 0.5, 1.0)).unwrap();
    let r = corroborate(&bounded, 150, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Bounded);
    assert_eq!(r.corroboration.unwrap().trend, Some(Trend::Bounded));

    let unbounded = ExpWeightParams::new(2.0, (4.0, 1.0, 1.0), (1.0, 1.0, 1.0)).unwrap();
    let r = corroborate(&unbounded, 150, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Unbounded);
    assert_eq!(r.corroboration.unwrap().trend, Some(Trend::Diverging));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_is_hermitian(
        a in 0.0f64..0.9, s in 0.0f64..std::f64::consts::TAU,
        b in 0.0f64..0.9, t in 0.0f64..std::f64::consts::TAU,
        alpha in 0.2f64..3.0,
    ) {
        let cfg = Config::default();
        let series = KernelSeries::new(exp(alpha, 1.0), &cfg);
        let z = Complex64::from_polar(a, s);
        let zeta = Complex64::from_polar(b, t);
        let lhs = series.eval(z, zeta).unwrap();
        let rhs = series.eval(zeta, z).unwrap();
        prop_assert!((lhs.value - rhs.value.conj()).norm() <= 1e-12 * lhs.value.norm().max(1.0));
    }

    #[test]
    fn dp_ignores_common_scaling(c in 0.01f64..100.0, p in 1.2f64..4.0) {
        let cfg = Config::default();
        let omega = RadialWeight::standard(1.0).unwrap();
        let nu = RadialWeight::standard(0.5).unwrap();
        let plain = dp_sequence(&omega, &nu, p, 20, &cfg).unwrap();
        let scaled = dp_sequence(&omega.scaled(c), &nu.scaled(c), p, 20, &cfg).unwrap();
        for (a, b) in plain.log_values.iter().zip(&scaled.log_values) {
            prop_assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }
}
