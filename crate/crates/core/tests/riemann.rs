mod support;

use goursat_core::bessel::j00;
use goursat_core::grid::probe_rectangles;
use goursat_core::picard::quadrature_residual;
use goursat_core::riemann::{
    finite_speed_check, lorentz_pullback, riemann_solve, split_solution, unilateral_horizontal, RiemannSolution,
};
use goursat_core::{BoundaryFunction, Field, Grid, QuadratureSpec, Rectangle, Surface};
use proptest::prelude::*;
use std::io::BufReader;
use std::sync::Arc;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn parse(s: &str) -> BoundaryFunction {
    s.parse().unwrap()
}

#[test]
fn ramp_trace_and_constant_data() {
    let grid = Grid::uniform((-1.0, 2.0), 13, (-2.0, 1.0), 13).unwrap();
    let u = riemann_solve(&parse("ramp"), &parse("zero"), &grid, &quad()).unwrap();
    let iy0 = grid.ys().iter().position(|&y| y == 0.0).unwrap();
    for (ix, &x) in grid.xs().iter().enumerate() {
        assert_eq!(u.at(ix, iy0).re, x.clamp(0.0, 1.0));
    }
    let c = riemann_solve(&parse("one"), &parse("one"), &grid, &quad()).unwrap();
    for (k, (x, y)) in grid.points().enumerate() {
        assert!((c.values()[k].re - j00(x, y).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn unilateral_ramp_is_trapped_under_j00() {
    let grid = Grid::uniform((0.0, 4.0), 9, (-4.0, 0.0), 9).unwrap();
    let u = unilateral_horizontal(&parse("ramp"), &grid, &quad()).unwrap();
    for (k, (x, y)) in grid.points().enumerate() {
        let v = u.values()[k].re;
        assert!(v >= -1e-14 && v <= j00(x, -y.abs()).unwrap() + 1e-12, "({x},{y}) = {v}");
    }
    let zero = unilateral_horizontal(&parse("zero"), &grid, &quad()).unwrap();
    assert_eq!(zero.sup_norm(), 0.0);
}

#[test]
fn split_of_constant_and_ramp_data() {
    let grid = Grid::uniform((0.0, 2.0), 5, (-2.0, 0.0), 5).unwrap();
    let s = split_solution(&parse("one"), &parse("one"), &grid, &quad()).unwrap();
    assert_eq!(s.horizontal.sup_norm(), 0.0);
    assert_eq!(s.vertical.sup_norm(), 0.0);
    for (k, (x, y)) in grid.points().enumerate() {
        assert!((s.corner.values()[k].re - j00(x, y).unwrap()).abs() < 1e-15);
    }
    let s = split_solution(&parse("ramp"), &parse("zero"), &grid, &quad()).unwrap();
    assert_eq!(s.corner.sup_norm(), 0.0);
    assert_eq!(s.vertical.sup_norm(), 0.0);
    let uh = unilateral_horizontal(&parse("ramp"), &grid, &quad()).unwrap();
    assert!(s.horizontal.sup_distance(&uh).unwrap() < 1e-15);
}

#[test]
fn pullbacks_remain_solutions() {
    let u: Arc<dyn Surface> = Arc::new(RiemannSolution::from_functions(&parse("ramp"), &parse("zero"), quad()).unwrap());
    for (lambda, swap) in [(2.0, false), (0.5, true), (-1.5, false)] {
        let v = lorentz_pullback(u.clone(), lambda, 0.3, -0.2, swap).unwrap();
        for r in [
            Rectangle::new(0.1, 0.8, -0.7, -0.1).unwrap(),
            Rectangle::new(-0.5, 0.5, -0.5, 0.5).unwrap(),
        ] {
            let res = quadrature_residual(&v, &r, &quad()).unwrap();
            assert!(res.norm() <= 1e-6, "lambda={lambda} swap={swap}: {res}");
        }
    }
}

#[test]
fn finite_speed_examples() {
    let quad = quad();
    let clipped = BoundaryFunction::table(vec![-10.0, 1.0, 10.0], vec![0.0, 0.0, 9.0]).unwrap();
    let rect = Rectangle::new(0.0, 1.0, -1.0, 0.0).unwrap();
    let grid = Grid::uniform((0.0, 1.0), 11, (-1.0, 0.0), 11).unwrap();
    assert!(finite_speed_check(&clipped, &parse("zero"), &rect, &grid, &quad).unwrap() <= 1e-9);
    // Outside the shadow the solution is not zero.
    let wide = Grid::uniform((0.0, 3.0), 7, (-1.0, 0.0), 3).unwrap();
    let u = riemann_solve(&clipped, &parse("zero"), &wide, &quad).unwrap();
    assert!(u.sup_norm() > 0.5);
}

#[test]
fn field_csv_round_trip_is_exact() {
    let grid = Grid::uniform((0.0, 1.0), 4, (-1.0, 0.0), 3).unwrap();
    let u = riemann_solve(&parse("sin:1.5"), &parse("poly:0,2"), &grid, &quad()).unwrap();
    let mut buf = Vec::new();
    u.write_csv(&mut buf, &["# argv: test".to_string()]).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.contains("x,y,re,im"));
    let back = Field::read_csv(BufReader::new(&buf[..])).unwrap();
    assert_eq!(back.values(), u.values());
    assert_eq!(back.grid(), u.grid());
    let again = riemann_solve(&parse("sin:1.5"), &parse("poly:0,2"), &grid, &quad()).unwrap();
    let mut buf2 = Vec::new();
    again.write_csv(&mut buf2, &["# argv: test".to_string()]).unwrap();
    assert_eq!(buf, buf2);
}

#[test]
fn interior_residuals_on_a_probe_set() {
    let grid = Grid::uniform((-1.0, 1.0), 5, (-1.0, 1.0), 5).unwrap();
    let u = riemann_solve(&parse("gauss:0.3,0.5"), &BoundaryFunction::gauss(-0.3, 0.5).unwrap(), &grid, &quad()).unwrap();
    for r in probe_rectangles(&grid, 5) {
        assert!(quadrature_residual(&u, &r, &quad()).unwrap().norm() <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn splitting_is_exact(c0 in -2.0f64..2.0, f1 in -2.0f64..2.0, f2 in -1.0f64..1.0, g1 in -2.0f64..2.0, g2 in -1.0f64..1.0) {
        let f = BoundaryFunction::poly(vec![c0, f1, f2]).unwrap();
        let g = BoundaryFunction::poly(vec![c0, g1, g2]).unwrap();
        let grid = Grid::uniform((0.0, 2.0), 4, (-2.0, 0.0), 4).unwrap();
        let s = split_solution(&f, &g, &grid, &quad()).unwrap();
        let u = riemann_solve(&f, &g, &grid, &quad()).unwrap();
        for k in 0..grid.len() {
            let sum = s.corner.values()[k] + s.horizontal.values()[k] + s.vertical.values()[k];
            prop_assert!((sum - u.values()[k]).norm() <= 1e-10);
        }
    }

    #[test]
    fn boundary_traces_are_recovered(k in 0.2f64..3.0, c in -1.0f64..1.0, t in -3.0f64..3.0) {
        let f = BoundaryFunction::sin(k).unwrap();
        let g = BoundaryFunction::poly(vec![0.0, c]).unwrap();
        let u = RiemannSolution::from_functions(&f, &g, quad()).unwrap();
        prop_assert!((u.eval(t, 0.0).unwrap() - f.eval(t)).abs() <= 1e-12);
        prop_assert!((u.eval(0.0, t).unwrap() - g.eval(t)).abs() <= 1e-12);
    }
}
