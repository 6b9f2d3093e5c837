use goursat_core::grid::FnSurface;
use goursat_core::picard::{glue_residual, picard_iterate, picard_solve, quadrature_residual, CharacteristicLine};
use goursat_core::riemann::{riemann_solve, BesselJ00Surface};
use goursat_core::{BoundaryFunction, Complex64, Field, Grid, QuadratureSpec, Rectangle, Surface};
use proptest::prelude::*;
use std::sync::Arc;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn parse(s: &str) -> BoundaryFunction {
    s.parse().unwrap()
}

#[test]
fn picard_matches_riemann_on_a_suite() {
    let table = BoundaryFunction::table(vec![-2.0, -1.0, 0.0, 1.0, 2.0], vec![0.5, -0.5, 0.0, 1.0, 0.2]).unwrap();
    let pairs = [
        ("ramp", "zero"),
        ("zero", "ramp"),
        ("one", "one"),
        ("sin:1", "poly:0,1"),
        ("sin:2.5", "sin:-0.7"),
        ("gauss:0,1", "one"),
        ("poly:1,1,1", "poly:1,-1"),
        ("poly:0,0,0,0.5", "zero"),
        ("gauss:1,0.3", "gauss:-1,0.3"),
        ("ramp", "sin:3"),
    ];
    let grid = Grid::uniform((0.0, 2.0), 9, (-2.0, 0.0), 9).unwrap();
    let mut cases: Vec<(BoundaryFunction, BoundaryFunction)> = pairs.iter().map(|(f, g)| (parse(f), parse(g))).collect();
    cases.push((table, parse("zero")));
    for (f, g) in &cases {
        let (p, report) = picard_solve(f, g, &grid, &quad(), 1e-10, 50).unwrap();
        let r = riemann_solve(f, g, &grid, &quad()).unwrap();
        let d = p.sup_distance(&r).unwrap();
        assert!(d <= 1e-6, "f={f} g={g}: {d:e} after {} iterations", report.iterations);
    }
}

#[test]
fn residual_is_additive_under_splitting() {
    let u = BesselJ00Surface { scale: 1.0 };
    let wobble = FnSurface::new(|x: f64, y: f64| Complex64::new((x * y).sin() + x * x, y.cos()));
    for c in [-0.4, 0.1, 0.7] {
        let whole = Rectangle::new(-0.5, 1.0, -1.0, 1.0).unwrap();
        let lo = Rectangle::new(-0.5, 1.0, -1.0, c).unwrap();
        let hi = Rectangle::new(-0.5, 1.0, c, 1.0).unwrap();
        for s in [&u as &dyn Surface, &wobble] {
            let sum = quadrature_residual(s, &lo, &quad()).unwrap() + quadrature_residual(s, &hi, &quad()).unwrap();
            assert!((sum - quadrature_residual(s, &whole, &quad()).unwrap()).norm() <= 1e-10);
        }
    }
}

/// A field with zero traces on both axes and small residuals everywhere is
/// itself small: `|w| <= eps / (1 - A)` with `A = max|x| * max|y|`.
#[test]
fn uniqueness_at_desk_scale() {
    let (a_lo, a_hi, b_lo, b_hi): (f64, f64, f64, f64) = (-0.8, 0.8, -0.9, 0.9);
    let big_a = a_lo.abs().max(a_hi) * b_lo.abs().max(b_hi);
    let grid = Grid::uniform((a_lo, a_hi), 9, (b_lo, b_hi), 9).unwrap();
    let perturbations: Vec<Box<dyn Fn(f64, f64) -> f64 + Send + Sync>> = vec![
        Box::new(|x, y| 1e-3 * x * y),
        Box::new(|x, y| 1e-6 * x.sin() * y.sin()),
        Box::new(|x, y| 0.1 * x * x * y * y.exp()),
    ];
    for w in perturbations {
        let s = FnSurface::new(move |x, y| Complex64::new(w(x, y), 0.0));
        let mut eps = 0.0f64;
        let mut sup = 0.0f64;
        for (x, y) in grid.points() {
            sup = sup.max(s.value(x, y).unwrap().norm());
            if x == 0.0 || y == 0.0 {
                continue;
            }
            let r = Rectangle::new(x.min(0.0), x.max(0.0), y.min(0.0), y.max(0.0)).unwrap();
            eps = eps.max(quadrature_residual(&s, &r, &quad()).unwrap().norm());
        }
        assert!(sup <= eps / (1.0 - big_a) + 1e-15, "sup {sup} eps {eps}");
    }
}

#[test]
fn updates_contract_on_small_rectangles() {
    let grid = Grid::uniform((0.0, 0.9), 10, (-0.9, 0.0), 10).unwrap();
    let big_a = 0.81;
    for (f, g) in [("ramp", "zero"), ("one", "one"), ("sin:2", "poly:0,-1")] {
        let (_, report) = picard_iterate(&parse(f), &parse(g), &grid, &quad(), 1e-15, 50).unwrap();
        let significant: Vec<f64> = report.updates.iter().copied().skip(1).take_while(|&u| u > 1e-13).collect();
        for w in significant.windows(2) {
            assert!(w[1] <= big_a * w[0], "{f},{g}: {:?}", report.updates);
        }
    }
}

#[test]
fn glue_examples() {
    let j: Arc<dyn Surface> = Arc::new(BesselJ00Surface { scale: 1.0 });
    let left = Field::from_surface(Grid::uniform((-1.0, 0.5), 7, (0.0, 1.0), 5).unwrap(), j.clone(), "left").unwrap();
    let right = Field::from_surface(Grid::uniform((0.0, 1.5), 7, (0.0, 1.0), 5).unwrap(), j, "right").unwrap();
    let r = glue_residual(&left, &right, CharacteristicLine::Vertical(0.5), &quad()).unwrap();
    assert!(r <= 1e-8, "{r}");

    let lower = riemann_solve(&parse("ramp"), &parse("zero"), &Grid::uniform((0.0, 1.0), 5, (-1.0, 0.0), 5).unwrap(), &quad()).unwrap();
    let upper = riemann_solve(&parse("ramp"), &parse("sin:1"), &Grid::uniform((0.0, 1.0), 5, (0.0, 1.0), 5).unwrap(), &quad()).unwrap();
    assert!(glue_residual(&lower, &upper, CharacteristicLine::Horizontal(0.0), &quad()).unwrap() <= 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn picard_is_insensitive_to_grid_layout(nx in 2usize..8, ny in 2usize..8, k in 0.5f64..2.0) {
        let f = BoundaryFunction::sin(k).unwrap();
        let g = BoundaryFunction::poly(vec![0.0, -k]).unwrap();
        let grid = Grid::uniform((0.0, 1.0), nx, (-1.0, 0.5), ny).unwrap();
        let (p, _) = picard_solve(&f, &g, &grid, &quad(), 1e-12, 50).unwrap();
        let r = riemann_solve(&f, &g, &grid, &quad()).unwrap();
        prop_assert!(p.sup_distance(&r).unwrap() <= 1e-9);
    }
}
