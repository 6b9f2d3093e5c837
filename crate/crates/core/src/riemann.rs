//! Riemann's explicit solution of the characteristic Goursat problem
//!
//! ```text
//! u_xy + u = 0,   u(x, 0) = f(x),   u(0, y) = g(y),   f(0) = g(0),
//! ```
//!
//! given by
//!
//! ```text
//! R[f,g](x,y) = f(x) + g(y) - f(0) J_{0,0}(x,y)
//!               - int_0^x J_{0,1}(x-s, y) f(s) ds - int_0^y J_{1,0}(x, y-t) g(t) dt,
//! ```
//!
//! together with its splitting into corner and unilateral parts, pullbacks
//! under the affine maps preserving the equation, and the finite-speed check.

use crate::bessel::{eval_biv_bessel, SeriesParams, SERIES_DOMAIN_CAP};
use crate::boundary::{BoundaryData, BoundaryFunction, Shifted};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, Rectangle, Surface};
use crate::quadrature::{composite_nodes, QuadratureSpec};
use crate::summation::NeumaierSum;
use num_complex::Complex64;
use std::sync::Arc;

/// Corner tolerance `|f(0) - g(0)|` for formula data.
pub const CORNER_TOL: f64 = 1e-12;
/// Corner tolerance when either side is interpolated from a table.
pub const CORNER_TOL_TABLE: f64 = 1e-9;

pub(crate) fn corner_tolerance(f: &dyn BoundaryData, g: &dyn BoundaryData) -> f64 {
    if f.is_tabulated() || g.is_tabulated() {
        CORNER_TOL_TABLE
    } else {
        CORNER_TOL
    }
}

/// Pointwise evaluator of `R[f, g]`.
#[derive(Clone)]
pub struct RiemannSolution {
    f: Arc<dyn BoundaryData>,
    g: Arc<dyn BoundaryData>,
    f0: f64,
    quad: QuadratureSpec,
    series: SeriesParams,
}

impl std::fmt::Debug for RiemannSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RiemannSolution")
            .field("f0", &self.f0)
            .field("quad", &self.quad)
            .finish()
    }
}

impl RiemannSolution {
    pub fn new(f: Arc<dyn BoundaryData>, g: Arc<dyn BoundaryData>, quad: QuadratureSpec) -> Result<Self> {
        let f0 = f.value(0.0);
        let g0 = g.value(0.0);
        if (f0 - g0).abs() > corner_tolerance(f.as_ref(), g.as_ref()) {
            return Err(Error::Compatibility { f0, g0 });
        }
        Ok(Self {
            f,
            g,
            f0,
            quad,
            series: SeriesParams::default(),
        })
    }

    pub fn from_functions(f: &BoundaryFunction, g: &BoundaryFunction, quad: QuadratureSpec) -> Result<Self> {
        Self::new(Arc::new(f.clone()), Arc::new(g.clone()), quad)
    }

    /// `R[f, 0]`; requires `f(0) = 0`.
    pub fn horizontal(f: Arc<dyn BoundaryData>, quad: QuadratureSpec) -> Result<Self> {
        Self::new(f, Arc::new(BoundaryFunction::zero()), quad)
    }

    pub fn corner_value(&self) -> f64 {
        self.f0
    }

    /// `int_0^x J_{0,1}(x-s, y) f(s) ds`, oriented.
    fn horizontal_convolution(&self, x: f64, y: f64) -> Result<f64> {
        if x == 0.0 || y == 0.0 {
            // J_{0,1}(., 0) vanishes identically.
            return Ok(0.0);
        }
        let mut acc = NeumaierSum::new();
        for (s, w) in composite_nodes(0.0, x, &self.f.kinks(), &self.quad) {
            let kernel = eval_biv_bessel(1, y, x - s, &self.series)?.value;
            acc.add(w * kernel * self.f.value(s));
        }
        Ok(acc.value())
    }

    /// `int_0^y J_{1,0}(x, y-t) g(t) dt`, oriented.
    fn vertical_convolution(&self, x: f64, y: f64) -> Result<f64> {
        if x == 0.0 || y == 0.0 {
            return Ok(0.0);
        }
        let mut acc = NeumaierSum::new();
        for (t, w) in composite_nodes(0.0, y, &self.g.kinks(), &self.quad) {
            let kernel = eval_biv_bessel(1, x, y - t, &self.series)?.value;
            acc.add(w * kernel * self.g.value(t));
        }
        Ok(acc.value())
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if (x * y).abs() > SERIES_DOMAIN_CAP {
            return Err(Error::Domain(format!(
                "({x}, {y}) lies outside the Bessel series domain |xy| <= {SERIES_DOMAIN_CAP}"
            )));
        }
        let corner = if self.f0 == 0.0 {
            0.0
        } else {
            self.f0 * eval_biv_bessel(0, x, y, &self.series)?.value
        };
        let mut acc = NeumaierSum::new();
        acc.add(self.f.value(x));
        acc.add(self.g.value(y));
        acc.add(-corner);
        acc.add(-self.horizontal_convolution(x, y)?);
        acc.add(-self.vertical_convolution(x, y)?);
        Ok(acc.value())
    }
}

impl Surface for RiemannSolution {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.eval(x, y)?, 0.0))
    }

    fn kinks_x(&self) -> Vec<f64> {
        self.f.kinks()
    }

    fn kinks_y(&self) -> Vec<f64> {
        self.g.kinks()
    }
}

/// `scale * J_{0,0}(x, y)`, the solution with constant data `scale`.
#[derive(Debug, Clone, Copy)]
pub struct BesselJ00Surface {
    pub scale: f64,
}

impl Surface for BesselJ00Surface {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        let v = eval_biv_bessel(0, x, y, &SeriesParams::default())?.value;
        Ok(Complex64::new(self.scale * v, 0.0))
    }
}

fn check_grid_in_series_domain(grid: &Grid) -> Result<()> {
    let b = grid.bounds();
    let worst = [b.a * b.b, b.a * b.b2, b.a2 * b.b, b.a2 * b.b2]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if worst > SERIES_DOMAIN_CAP {
        return Err(Error::Domain(format!(
            "grid reaches |xy| = {worst}, beyond the series cap {SERIES_DOMAIN_CAP}"
        )));
    }
    Ok(())
}

/// Samples `R[f, g]` on `grid`.
pub fn riemann_solve(f: &BoundaryFunction, g: &BoundaryFunction, grid: &Grid, quad: &QuadratureSpec) -> Result<Field> {
    riemann_solve_data(Arc::new(f.clone()), Arc::new(g.clone()), grid, quad, format!("riemann f={f} g={g}"))
}

/// [`riemann_solve`] for arbitrary boundary data.
pub fn riemann_solve_data(
    f: Arc<dyn BoundaryData>,
    g: Arc<dyn BoundaryData>,
    grid: &Grid,
    quad: &QuadratureSpec,
    meta: impl Into<String>,
) -> Result<Field> {
    let solution = RiemannSolution::new(f, g, *quad)?;
    check_grid_in_series_domain(grid)?;
    Field::from_surface(grid.clone(), Arc::new(solution), meta)
}

/// Horizontal unilateral wave `R[f, 0] = f(x) - int_0^x J_{0,1}(x-s, y) f(s) ds`.
pub fn unilateral_horizontal(f: &BoundaryFunction, grid: &Grid, quad: &QuadratureSpec) -> Result<Field> {
    riemann_solve_data(
        Arc::new(f.clone()),
        Arc::new(BoundaryFunction::zero()),
        grid,
        quad,
        format!("unilateral_horizontal f={f}"),
    )
}

/// The three parts of `R[f, g]`.
#[derive(Debug, Clone)]
pub struct SplitSolution {
    /// `f(0) J_{0,0}`
    pub corner: Field,
    /// `R[f - f(0), 0]`
    pub horizontal: Field,
    /// `R[0, g - g(0)]`
    pub vertical: Field,
}

pub fn split_solution(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<SplitSolution> {
    let f0 = f.eval(0.0);
    let g0 = g.eval(0.0);
    if (f0 - g0).abs() > corner_tolerance(f, g) {
        return Err(Error::Compatibility { f0, g0 });
    }
    check_grid_in_series_domain(grid)?;
    let corner = Field::from_surface(grid.clone(), Arc::new(BesselJ00Surface { scale: f0 }), "corner part")?;
    let zero: Arc<dyn BoundaryData> = Arc::new(BoundaryFunction::zero());
    let f_shift: Arc<dyn BoundaryData> = Arc::new(Shifted { inner: f.clone(), shift: f0 });
    let g_shift: Arc<dyn BoundaryData> = Arc::new(Shifted { inner: g.clone(), shift: g0 });
    let horizontal = riemann_solve_data(f_shift, zero.clone(), grid, quad, "horizontal unilateral part")?;
    let vertical = riemann_solve_data(zero, g_shift, grid, quad, "vertical unilateral part")?;
    Ok(SplitSolution {
        corner,
        horizontal,
        vertical,
    })
}

/// `v(x, y) = u(L(x, y))` for `L(x, y) = (lambda x + a, y / lambda + b)`, or
/// with the coordinates exchanged, `(lambda y + a, x / lambda + b)`.
pub struct Pullback {
    source: Arc<dyn Surface>,
    lambda: f64,
    a: f64,
    b: f64,
    swap: bool,
}

impl Pullback {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        if self.swap {
            (self.lambda * y + self.a, x / self.lambda + self.b)
        } else {
            (self.lambda * x + self.a, y / self.lambda + self.b)
        }
    }

    /// Preimage of a source x-line `X = c` (a y-line when swapped).
    fn preimage_of_x_line(&self, c: f64) -> f64 {
        (c - self.a) / self.lambda
    }

    /// Preimage of a source y-line `Y = c` (an x-line when swapped).
    fn preimage_of_y_line(&self, c: f64) -> f64 {
        self.lambda * (c - self.b)
    }
}

impl Surface for Pullback {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        let (sx, sy) = self.map(x, y);
        if let Some(d) = self.source.domain() {
            if !d.contains_point(sx, sy) {
                return Err(Error::Domain(format!(
                    "pullback requests ({sx}, {sy}) outside the source domain {d}"
                )));
            }
        }
        self.source.value(sx, sy)
    }

    fn kinks_x(&self) -> Vec<f64> {
        if self.swap {
            self.source.kinks_y().into_iter().map(|c| self.preimage_of_y_line(c)).collect()
        } else {
            self.source.kinks_x().into_iter().map(|c| self.preimage_of_x_line(c)).collect()
        }
    }

    fn kinks_y(&self) -> Vec<f64> {
        if self.swap {
            self.source.kinks_x().into_iter().map(|c| self.preimage_of_x_line(c)).collect()
        } else {
            self.source.kinks_y().into_iter().map(|c| self.preimage_of_y_line(c)).collect()
        }
    }

    fn domain(&self) -> Option<Rectangle> {
        let d = self.source.domain()?;
        let sort = |p: f64, q: f64| if p <= q { (p, q) } else { (q, p) };
        let (xa, xb) = sort(self.preimage_of_x_line(d.a), self.preimage_of_x_line(d.a2));
        let (ya, yb) = sort(self.preimage_of_y_line(d.b), self.preimage_of_y_line(d.b2));
        Some(if self.swap {
            Rectangle { a: ya, a2: yb, b: xa, b2: xb }
        } else {
            Rectangle { a: xa, a2: xb, b: ya, b2: yb }
        })
    }
}

pub fn lorentz_pullback(u: Arc<dyn Surface>, lambda: f64, a: f64, b: f64, swap: bool) -> Result<Pullback> {
    if lambda == 0.0 || !lambda.is_finite() || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "pullback needs finite parameters with lambda != 0 (lambda = {lambda})"
        )));
    }
    Ok(Pullback {
        source: u,
        lambda,
        a,
        b,
        swap,
    })
}

const SUPPORT_SAMPLES: usize = 1001;
const SUPPORT_TOL: f64 = 1e-14;

fn check_vanishes(d: &dyn BoundaryData, lo: f64, hi: f64) -> Result<()> {
    let mut points: Vec<f64> = (0..SUPPORT_SAMPLES)
        .map(|k| lo + (hi - lo) * k as f64 / (SUPPORT_SAMPLES - 1) as f64)
        .collect();
    points.extend(d.kinks().into_iter().filter(|&c| c >= lo && c <= hi));
    for t in points {
        let v = d.value(t);
        if v.abs() > SUPPORT_TOL {
            return Err(Error::Support { at: t, value: v });
        }
    }
    Ok(())
}

/// Largest `|R[f, g]|` over grid nodes in `rect`, for data vanishing on the
/// rectangle's shadows `[a, a2]` and `[b, b2]` on the axes. The contract is
/// that this is zero up to rounding.
pub fn finite_speed_check(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
    rect: &Rectangle,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(rect.a <= 0.0 && rect.a2 >= 0.0 && rect.b <= 0.0 && rect.b2 >= 0.0) {
        return Err(Error::Spec(format!("rectangle {rect} must contain the origin")));
    }
    check_vanishes(f, rect.a, rect.a2)?;
    check_vanishes(g, rect.b, rect.b2)?;
    let solution = RiemannSolution::from_functions(f, g, *quad)?;
    let mut max_abs: f64 = 0.0;
    for (x, y) in grid.points().filter(|&(x, y)| rect.contains_point(x, y)) {
        max_abs = max_abs.max(solution.eval(x, y)?.abs());
    }
    Ok(max_abs)
}
