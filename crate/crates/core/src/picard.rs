//! The quadrature identity characterizing solutions, Picard iteration for
//! the Goursat problem, and gluing along characteristic lines.
//!
//! A continuous `u` solves `u_xy + u = 0` on a rectangle exactly when
//!
//! ```text
//! int_a^a' int_b^b' u = u(a',b) + u(a,b') - u(a',b') - u(a,b)
//! ```
//!
//! for every sub-rectangle.

use crate::boundary::{BoundaryData, BoundaryFunction};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, Rectangle, Surface};
use crate::quadrature::{composite_nodes, GaussLegendre, QuadratureSpec};
use crate::riemann::corner_tolerance;
use crate::summation::ComplexSum;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// Default iteration cap for [`picard_solve`].
pub const DEFAULT_MAX_ITER: usize = 50;
/// Largest trace mismatch tolerated by [`glue_residual`].
pub const TRACE_TOL: f64 = 1e-9;

/// `int int_rect u - [u(a',b) + u(a,b') - u(a',b') - u(a,b)]`.
pub fn quadrature_residual<S: Surface + ?Sized>(u: &S, rect: &Rectangle, quad: &QuadratureSpec) -> Result<Complex64> {
    if let Some(d) = u.domain() {
        if !d.contains(rect) {
            return Err(Error::Domain(format!("rectangle {rect} leaves the domain {d}")));
        }
    }
    if rect.area() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let xs = composite_nodes(rect.a, rect.a2, &u.kinks_x(), quad);
    let ys = composite_nodes(rect.b, rect.b2, &u.kinks_y(), quad);
    let rows: Vec<Complex64> = xs
        .par_iter()
        .map(|&(x, wx)| -> Result<Complex64> {
            let mut acc = ComplexSum::new();
            for &(y, wy) in &ys {
                acc.add(u.value(x, y)? * (wx * wy));
            }
            Ok(acc.value())
        })
        .collect::<Result<_>>()?;
    let mut acc = ComplexSum::new();
    for r in rows {
        acc.add(r);
    }
    acc.add(-u.value(rect.a2, rect.b)?);
    acc.add(-u.value(rect.a, rect.b2)?);
    acc.add(u.value(rect.a2, rect.b2)?);
    acc.add(u.value(rect.a, rect.b)?);
    Ok(acc.value())
}

/// Outcome of a Picard run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub iterations: usize,
    pub final_update_sup: f64,
    pub converged: bool,
    pub tol: f64,
    /// `sup |u_{n+1} - u_n|` over grid nodes, one entry per iteration.
    pub updates: Vec<f64>,
}

/// Collocation rule on one axis: Gauss-Legendre panels whose endpoints
/// include every grid node, the origin and the data kinks, so each iterate
/// is polynomial on every panel.
#[derive(Debug, Clone)]
struct AxisRule {
    panels: Vec<(f64, f64)>,
    rule: &'static GaussLegendre,
    nodes: Vec<f64>,
    /// `int_{-1}^{t_k} l_j` on the reference panel, row-major `k, j`.
    reference_integrals: Vec<f64>,
}

impl AxisRule {
    fn new(grid_nodes: &[f64], kinks: &[f64], quad: &QuadratureSpec) -> Self {
        let lo = grid_nodes[0];
        let hi = grid_nodes[grid_nodes.len() - 1];
        let mut breaks: Vec<f64> = grid_nodes.to_vec();
        breaks.push(0.0);
        breaks.extend(kinks.iter().copied().filter(|&c| c > lo && c < hi));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut panels = Vec::new();
        for w in breaks.windows(2) {
            let n = quad.panel_count(w[1] - w[0]);
            let h = (w[1] - w[0]) / n as f64;
            for p in 0..n {
                let l = w[0] + h * p as f64;
                let r = if p + 1 == n { w[1] } else { l + h };
                panels.push((l, r));
            }
        }
        let rule = quad.rule();
        let n = rule.len();
        let nodes = panels
            .iter()
            .flat_map(|&(l, r)| rule.nodes().iter().map(move |t| 0.5 * (l + r) + 0.5 * (r - l) * t))
            .collect();
        let mut reference_integrals = Vec::with_capacity(n * n);
        for &tk in rule.nodes() {
            reference_integrals.extend(Self::partial_lagrange_integrals(rule, tk));
        }
        Self {
            panels,
            rule,
            nodes,
            reference_integrals,
        }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn lagrange(rule: &GaussLegendre, j: usize, t: f64) -> f64 {
        let tj = rule.nodes()[j];
        rule.nodes()
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != j)
            .map(|(_, &tm)| (t - tm) / (tj - tm))
            .product()
    }

    /// `int_{-1}^{t} l_j` for every basis polynomial `l_j`.
    fn partial_lagrange_integrals(rule: &GaussLegendre, t: f64) -> Vec<f64> {
        let n = rule.len();
        let mut out = vec![0.0; n];
        for (s, w) in rule.mapped(-1.0, t) {
            for (j, o) in out.iter_mut().enumerate() {
                *o += w * Self::lagrange(rule, j, s);
            }
        }
        out
    }

    /// Weights `w` with `int_{lo}^{p} u = sum_i w_i u(node_i)`.
    fn cumulative_row(&self, p: f64, reference_row: Option<usize>) -> Vec<f64> {
        let n = self.rule.len();
        let mut row = vec![0.0; self.len()];
        for (k, &(l, r)) in self.panels.iter().enumerate() {
            let half = 0.5 * (r - l);
            let block = &mut row[k * n..(k + 1) * n];
            if r <= p {
                for (b, w) in block.iter_mut().zip(self.rule.weights()) {
                    *b = half * w;
                }
            } else if l < p {
                let partial = match reference_row {
                    Some(i) => self.reference_integrals[i * n..(i + 1) * n].to_vec(),
                    None => Self::partial_lagrange_integrals(self.rule, (2.0 * p - l - r) / (r - l)),
                };
                for (b, w) in block.iter_mut().zip(partial) {
                    *b = half * w;
                }
                break;
            } else {
                break;
            }
        }
        row
    }

    /// Weights for `int_0^p`, oriented.
    fn row(&self, p: f64) -> Vec<f64> {
        let mut row = self.cumulative_row(p, None);
        for (r, z) in row.iter_mut().zip(self.cumulative_row(0.0, None)) {
            *r -= z;
        }
        row
    }

    /// Integration operator onto the collocation nodes.
    fn node_operator(&self) -> DMatrix<f64> {
        let n = self.rule.len();
        let zero = self.cumulative_row(0.0, None);
        let mut m = DMatrix::zeros(self.len(), self.len());
        for (i, &p) in self.nodes.iter().enumerate() {
            let row = self.cumulative_row(p, Some(i % n));
            for j in 0..self.len() {
                m[(i, j)] = row[j] - zero[j];
            }
        }
        m
    }

    fn operator_at(&self, points: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(points.len(), self.len());
        for (i, &p) in points.iter().enumerate() {
            for (j, w) in self.row(p).into_iter().enumerate() {
                m[(i, j)] = w;
            }
        }
        m
    }
}

/// The final Picard iterate as a function of `(x, y)`:
/// `f(x) + g(y) - f(0) - int_0^x int_0^y u_prev` with `u_prev` the
/// collocation values of the previous iterate.
pub struct PicardSurface {
    f: Arc<dyn BoundaryData>,
    g: Arc<dyn BoundaryData>,
    f0: f64,
    x_rule: AxisRule,
    y_rule: AxisRule,
    previous: DMatrix<f64>,
    domain: Rectangle,
}

impl Surface for PicardSurface {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        if !self.domain.contains_point(x, y) {
            return Err(Error::Domain(format!(
                "({x}, {y}) lies outside the Picard grid {}",
                self.domain
            )));
        }
        let wx = self.x_rule.row(x);
        let wy = self.y_rule.row(y);
        let mut acc = 0.0;
        for (i, &a) in wx.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let inner: f64 = wy.iter().enumerate().map(|(j, &b)| b * self.previous[(i, j)]).sum();
            acc += a * inner;
        }
        Ok(Complex64::new(self.f.value(x) + self.g.value(y) - self.f0 - acc, 0.0))
    }

    fn kinks_x(&self) -> Vec<f64> {
        self.f.kinks()
    }

    fn kinks_y(&self) -> Vec<f64> {
        self.g.kinks()
    }

    fn domain(&self) -> Option<Rectangle> {
        Some(self.domain)
    }
}

/// Runs the Picard iteration to `tol` or `max_iter`, returning the last
/// iterate whether or not it converged.
pub fn picard_iterate(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
    grid: &Grid,
    quad: &QuadratureSpec,
    tol: f64,
    max_iter: usize,
) -> Result<(Field, IterationReport)> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let f0 = f.eval(0.0);
    let g0 = g.eval(0.0);
    if (f0 - g0).abs() > corner_tolerance(f, g) {
        return Err(Error::Compatibility { f0, g0 });
    }
    let x_rule = AxisRule::new(grid.xs(), &f.kinks(), quad);
    let y_rule = AxisRule::new(grid.ys(), &g.kinks(), quad);
    let wx = x_rule.node_operator();
    let wy_t = y_rule.node_operator().transpose();
    let gx = x_rule.operator_at(grid.xs());
    let gy_t = y_rule.operator_at(grid.ys()).transpose();

    let base = |xs: &[f64], ys: &[f64]| {
        DMatrix::from_fn(xs.len(), ys.len(), |i, j| f.eval(xs[i]) + g.eval(ys[j]) - f0)
    };
    let base_nodes = base(&x_rule.nodes, &y_rule.nodes);
    let base_grid = base(grid.xs(), grid.ys());

    let mut nodes = base_nodes.clone();
    let mut on_grid = base_grid.clone();
    let mut previous = nodes.clone();
    let mut updates = Vec::new();
    let mut converged = false;
    while updates.len() < max_iter {
        let next_grid = &base_grid - &gx * &nodes * &gy_t;
        let next_nodes = &base_nodes - &wx * &nodes * &wy_t;
        let update = (&next_grid - &on_grid).amax();
        updates.push(update);
        previous = std::mem::replace(&mut nodes, next_nodes);
        on_grid = next_grid;
        if update <= tol {
            converged = true;
            break;
        }
    }
    let final_update_sup = updates.last().copied().unwrap_or(f64::INFINITY);
    let report = IterationReport {
        iterations: updates.len(),
        final_update_sup,
        converged,
        tol,
        updates,
    };
    let values = grid
        .points()
        .map(|(x, y)| {
            let i = grid.xs().partition_point(|&v| v < x);
            let j = grid.ys().partition_point(|&v| v < y);
            Complex64::new(on_grid[(i, j)], 0.0)
        })
        .collect();
    let surface = PicardSurface {
        f: Arc::new(f.clone()),
        g: Arc::new(g.clone()),
        f0,
        x_rule,
        y_rule,
        previous,
        domain: grid.bounds(),
    };
    let field = Field::from_values(grid.clone(), values, format!("picard f={f} g={g}"))?
        .with_source(Arc::new(surface));
    Ok((field, report))
}

/// [`picard_iterate`] that fails with a convergence error when the update
/// never drops to `tol`.
pub fn picard_solve(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
    grid: &Grid,
    quad: &QuadratureSpec,
    tol: f64,
    max_iter: usize,
) -> Result<(Field, IterationReport)> {
    let (field, report) = picard_iterate(f, g, grid, quad, tol, max_iter)?;
    if !report.converged {
        return Err(Error::Convergence(format!(
            "Picard update {:.3e} still above {tol:.3e} after {} iterations",
            report.final_update_sup, report.iterations
        )));
    }
    Ok((field, report))
}

/// A characteristic line along which two solutions are glued.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharacteristicLine {
    /// `y = c`; the lower field lives on `y <= c`, the upper on `y >= c`.
    Horizontal(f64),
    /// `x = c`; the lower field lives on `x <= c`, the upper on `x >= c`.
    Vertical(f64),
}

const GLUE_PROBES_PER_AXIS: usize = 5;

fn spread(values: &[f64], count: usize) -> Vec<f64> {
    if values.len() <= count || count < 2 {
        return values.to_vec();
    }
    let mut out: Vec<f64> = (0..count)
        .map(|k| values[((k * (values.len() - 1)) as f64 / (count - 1) as f64).round() as usize])
        .collect();
    out.dedup();
    out
}

fn same_axis(p: &[f64], q: &[f64]) -> bool {
    p.len() == q.len() && p.iter().zip(q).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0))
}

/// Largest residual of the summed one-sided quadrature identities over
/// rectangles straddling `line`.
pub fn glue_residual(lower: &Field, upper: &Field, line: CharacteristicLine, quad: &QuadratureSpec) -> Result<f64> {
    let (c, along_lo, along_hi, across_lo, across_hi) = match line {
        CharacteristicLine::Horizontal(c) => (c, lower.grid().xs(), upper.grid().xs(), lower.grid().ys(), upper.grid().ys()),
        CharacteristicLine::Vertical(c) => (c, lower.grid().ys(), upper.grid().ys(), lower.grid().xs(), upper.grid().xs()),
    };
    if !same_axis(along_lo, along_hi) {
        return Err(Error::Alignment("the two grids differ along the gluing line".into()));
    }
    if !across_lo.contains(&c) || !across_hi.contains(&c) {
        return Err(Error::Alignment(format!("the line at {c} is not a node of both grids")));
    }
    let below: Vec<f64> = across_lo.iter().copied().filter(|&v| v < c).collect();
    let above: Vec<f64> = across_hi.iter().copied().filter(|&v| v > c).collect();
    if below.is_empty() || above.is_empty() {
        return Err(Error::Alignment(format!(
            "the lower grid must extend below {c} and the upper grid above it"
        )));
    }
    let point = |s: f64, t: f64| match line {
        CharacteristicLine::Horizontal(_) => (s, t),
        CharacteristicLine::Vertical(_) => (t, s),
    };
    for &s in along_lo {
        let (x, y) = point(s, c);
        let gap = (lower.value(x, y)? - upper.value(x, y)?).norm();
        if gap > TRACE_TOL {
            return Err(Error::Continuity { at: s, gap });
        }
    }
    let along = spread(along_lo, GLUE_PROBES_PER_AXIS);
    let below = spread(&below, GLUE_PROBES_PER_AXIS - 1);
    let above = spread(&above, GLUE_PROBES_PER_AXIS - 1);
    let mut probes = Vec::new();
    for (k, &s0) in along.iter().enumerate() {
        for &s1 in &along[k + 1..] {
            for &t0 in &below {
                for &t1 in &above {
                    probes.push((s0, s1, t0, t1));
                }
            }
        }
    }
    let rect = |s0: f64, s1: f64, t0: f64, t1: f64| {
        let (a, b) = point(s0, t0);
        let (a2, b2) = point(s1, t1);
        Rectangle::new(a, a2, b, b2)
    };
    probes
        .par_iter()
        .map(|&(s0, s1, t0, t1)| -> Result<f64> {
            let lo = quadrature_residual(lower, &rect(s0, s1, t0, c)?, quad)?;
            let hi = quadrature_residual(upper, &rect(s0, s1, c, t1)?, quad)?;
            Ok((lo + hi).norm())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
