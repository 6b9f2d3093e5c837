use goursat_core::boundary::FnData;
use goursat_core::laplace::{
    evolution_deviation, evolution_rows, laplace, tail_bound, truncated_laplace, vanishing_region,
    vanishing_region_witness, GrowthSpec,
};
use goursat_core::{BoundaryFunction, Complex64, Error, Grid, GrowthBound, QuadratureSpec};
use proptest::prelude::*;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn evolution_law_for_the_ramp() {
    let grid = Grid::uniform((0.0, 30.0), 4, (-1.0, 0.0), 3).unwrap();
    let zetas = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0)];
    let rows = evolution_rows(&"ramp".parse().unwrap(), &grid, &quad(), &zetas, &[0.0, -0.5, -1.0]).unwrap();
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let closed = (-r.y / r.zeta).exp() * (1.0 - (-r.zeta).exp()) / (r.zeta * r.zeta);
        assert!((r.rhs - closed).norm() <= 1e-10 * closed.norm());
        assert!(r.deviation <= 1e-5, "{r:?}");
    }
}

#[test]
fn evolution_rejects_bad_inputs() {
    let grid = Grid::uniform((0.0, 5.0), 3, (-1.0, 0.0), 3).unwrap();
    let ramp: BoundaryFunction = "ramp".parse().unwrap();
    assert!(evolution_deviation(&ramp, &grid, &quad(), &[Complex64::new(1.0, 0.0)], &[-2.0]).is_err());
    assert!(matches!(
        evolution_deviation(&ramp, &grid, &quad(), &[Complex64::new(-1.0, 0.0)], &[0.0]),
        Err(Error::Abscissa { .. })
    ));
    assert!(matches!(
        evolution_deviation(&"one".parse().unwrap(), &grid, &quad(), &[Complex64::new(1.0, 0.0)], &[0.0]),
        Err(Error::Compatibility { .. })
    ));
}

#[test]
fn exponential_tail_bound_is_honest() {
    let theta = 0.5;
    let data = FnData::new(move |x: f64| 2.0 * (theta * x).exp());
    let growth = GrowthBound::new(2.0, theta, 1.0).unwrap();
    let z = Complex64::new(1.5, 3.0);
    for x_max in [2.0, 5.0, 10.0] {
        let bound = tail_bound(&growth, z.re, x_max).unwrap();
        let tail = truncated_laplace(&data, z, 60.0, &quad()).unwrap() - truncated_laplace(&data, z, x_max, &quad()).unwrap();
        assert!(tail.norm() <= bound, "{x_max}");
    }
    let f = BoundaryFunction::one().with_growth(growth);
    let ev = laplace(&f, Complex64::new(1.0, 0.0), 20.0, &quad()).unwrap();
    assert!(ev.tail_bound > 0.0);
}

#[test]
fn growth_spec_invariants() {
    assert_eq!(GrowthSpec::new(0.75, 1.0, 2.0).unwrap().qpp, Some(1.5));
    assert_eq!(GrowthSpec::new(0.5, 1.0, 2.0).unwrap().qpp, None);
    assert!(GrowthSpec::new(0.0, 1.0, 1.0).is_err());
    assert!(GrowthSpec::new(1.2, 1.0, 1.0).is_err());
    assert!(GrowthSpec::new(1.0, -1.0, 1.0).is_err());
}

#[test]
fn region_is_the_lens() {
    for (t1, t2) in [(0.3, 0.8), (1.0, 0.5), (2.0, 2.0)] {
        let c = 1.0 / (2.0 * t2);
        for i in 0..200 {
            for k in -100..=100 {
                let z = Complex64::new(0.013 * i as f64 + 0.001, 0.017 * k as f64);
                let lens = z.re > t1 && (z - c).norm() < c;
                let near_edge = (z.re - t1).abs() < 1e-9 || ((z - c).norm() - c).abs() < 1e-9;
                if !near_edge {
                    assert_eq!(vanishing_region(z, t1, t2), lens, "{z} {t1} {t2}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transform_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, re in 0.3f64..3.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        let f = |x: f64| (1.3 * x).sin();
        let g = |x: f64| (-(x - 1.0) * (x - 1.0)).exp();
        let combo = FnData::new(move |x| alpha * f(x) + beta * g(x));
        let lhs = truncated_laplace(&combo, z, 20.0, &quad()).unwrap();
        let rhs = truncated_laplace(&FnData::new(f), z, 20.0, &quad()).unwrap() * alpha
            + truncated_laplace(&FnData::new(g), z, 20.0, &quad()).unwrap() * beta;
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn nonempty_exactly_below_the_hyperbola(t1 in 0.2f64..5.0, t2 in 0.2f64..5.0) {
        let p = t1 * t2;
        prop_assume!(p <= 0.8 || p >= 1.0);
        prop_assert_eq!(vanishing_region_witness(t1, t2, 0.01).is_some(), p < 1.0);
    }
}
