//! Tensor grids in characteristic coordinates, sampled fields, and the
//! `Surface` abstraction shared by solvers and residual checks.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

/// Anything that can be evaluated as a candidate solution `u(x, y)`.
pub trait Surface: Send + Sync {
    fn value(&self, x: f64, y: f64) -> Result<Complex64>;

    /// Vertical lines `x = c` across which the surface may only be continuous.
    fn kinks_x(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Horizontal lines `y = c` across which the surface may only be continuous.
    fn kinks_y(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Closed rectangle outside which evaluation fails; `None` for the plane.
    fn domain(&self) -> Option<Rectangle> {
        None
    }
}

impl<S: Surface + ?Sized> Surface for &S {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        (**self).value(x, y)
    }
    fn kinks_x(&self) -> Vec<f64> {
        (**self).kinks_x()
    }
    fn kinks_y(&self) -> Vec<f64> {
        (**self).kinks_y()
    }
    fn domain(&self) -> Option<Rectangle> {
        (**self).domain()
    }
}

impl<S: Surface + ?Sized> Surface for Arc<S> {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        (**self).value(x, y)
    }
    fn kinks_x(&self) -> Vec<f64> {
        (**self).kinks_x()
    }
    fn kinks_y(&self) -> Vec<f64> {
        (**self).kinks_y()
    }
    fn domain(&self) -> Option<Rectangle> {
        (**self).domain()
    }
}

/// Closure-backed surface.
pub struct FnSurface<F> {
    func: F,
    kinks_x: Vec<f64>,
    kinks_y: Vec<f64>,
}

impl<F: Fn(f64, f64) -> Complex64 + Send + Sync> FnSurface<F> {
    pub fn new(func: F) -> Self {
        Self {
            func,
            kinks_x: Vec::new(),
            kinks_y: Vec::new(),
        }
    }

    pub fn with_kinks(mut self, kinks_x: Vec<f64>, kinks_y: Vec<f64>) -> Self {
        self.kinks_x = kinks_x;
        self.kinks_y = kinks_y;
        self
    }
}

impl<F: Fn(f64, f64) -> Complex64 + Send + Sync> Surface for FnSurface<F> {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        Ok((self.func)(x, y))
    }
    fn kinks_x(&self) -> Vec<f64> {
        self.kinks_x.clone()
    }
    fn kinks_y(&self) -> Vec<f64> {
        self.kinks_y.clone()
    }
}

/// Axis-parallel rectangle `[a, a2] x [b, b2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub a: f64,
    pub a2: f64,
    pub b: f64,
    pub b2: f64,
}

impl Rectangle {
    pub fn new(a: f64, a2: f64, b: f64, b2: f64) -> Result<Self> {
        if ![a, a2, b, b2].iter().all(|v| v.is_finite()) || a > a2 || b > b2 {
            return Err(Error::Spec(format!(
                "rectangle [{a}, {a2}] x [{b}, {b2}] must have finite ordered sides"
            )));
        }
        Ok(Self { a, a2, b, b2 })
    }

    pub fn area(&self) -> f64 {
        (self.a2 - self.a) * (self.b2 - self.b)
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.a && x <= self.a2 && y >= self.b && y <= self.b2
    }

    pub fn contains(&self, other: &Rectangle) -> bool {
        self.contains_point(other.a, other.b) && self.contains_point(other.a2, other.b2)
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.a, self.a2, self.b, self.b2)
    }
}

/// Tensor-product grid; both axes are strictly increasing and contain 0 so
/// that the characteristic axes are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Grid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        for (name, axis) in [("x", &xs), ("y", &ys)] {
            if axis.is_empty() {
                return Err(Error::Spec(format!("{name}-axis is empty")));
            }
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::Spec(format!("{name}-axis has non-finite nodes")));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Spec(format!("{name}-axis must be strictly increasing")));
            }
            if !axis.contains(&0.0) {
                return Err(Error::Spec(format!("{name}-axis must contain the node 0")));
            }
        }
        Ok(Self { xs, ys })
    }

    /// Evenly spaced axes; the node 0 is inserted when it lies strictly
    /// inside a range and is not already a node.
    pub fn uniform(x_range: (f64, f64), nx: usize, y_range: (f64, f64), ny: usize) -> Result<Self> {
        Self::new(linspace_with_zero(x_range, nx)?, linspace_with_zero(y_range, ny)?)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bounds(&self) -> Rectangle {
        Rectangle {
            a: self.xs[0],
            a2: *self.xs.last().unwrap_or(&0.0),
            b: self.ys[0],
            b2: *self.ys.last().unwrap_or(&0.0),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs
            .iter()
            .flat_map(move |&x| self.ys.iter().map(move |&y| (x, y)))
    }
}

fn linspace_with_zero((lo, hi): (f64, f64), n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Spec(format!("invalid axis range [{lo}, {hi}]")));
    }
    if lo > 0.0 || hi < 0.0 {
        return Err(Error::Spec(format!("axis range [{lo}, {hi}] must contain 0")));
    }
    if lo == hi {
        return Ok(vec![0.0]);
    }
    if n < 2 {
        return Err(Error::Spec("a nondegenerate axis needs at least 2 nodes".into()));
    }
    let h = (hi - lo) / (n - 1) as f64;
    let snap = 1e-12 * (hi - lo);
    let mut nodes: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .map(|v| if v.abs() <= snap { 0.0 } else { v })
        .collect();
    if !nodes.contains(&0.0) {
        nodes.push(0.0);
        nodes.sort_by(f64::total_cmp);
    }
    Ok(nodes)
}

/// Complex samples of a candidate solution on a grid.
///
/// Fields created from an evaluator keep it, and evaluate through it off the
/// grid; fields built from bare values interpolate bilinearly.
#[derive(Clone)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
    meta: String,
    source: Option<Arc<dyn Surface>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("nx", &self.grid.nx())
            .field("ny", &self.grid.ny())
            .field("meta", &self.meta)
            .field("has_source", &self.source.is_some())
            .finish()
    }
}

impl Field {
    /// Values are indexed `ix * ny + iy`.
    pub fn from_values(grid: Grid, values: Vec<Complex64>, meta: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Spec(format!(
                "field has {} values for a {}x{} grid",
                values.len(),
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(Self {
            grid,
            values,
            meta: meta.into(),
            source: None,
        })
    }

    /// Samples `surface` at every node (rows in parallel; each value is
    /// computed independently so the result does not depend on scheduling).
    pub fn from_surface(grid: Grid, surface: Arc<dyn Surface>, meta: impl Into<String>) -> Result<Self> {
        let ny = grid.ny();
        let rows: Vec<Vec<Complex64>> = grid
            .xs()
            .par_iter()
            .map(|&x| grid.ys().iter().map(|&y| surface.value(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(grid.len());
        for row in rows {
            debug_assert_eq!(row.len(), ny);
            values.extend(row);
        }
        Ok(Self {
            grid,
            values,
            meta: meta.into(),
            source: Some(surface),
        })
    }

    /// Attaches an evaluator used between nodes in place of interpolation.
    pub fn with_source(mut self, source: Arc<dyn Surface>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn has_source(&self) -> bool {
        self.source.is_some()
    }

    /// The same samples without the attached evaluator.
    pub fn detached(&self) -> Field {
        Field {
            source: None,
            ..self.clone()
        }
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[ix * self.grid.ny() + iy]
    }

    pub fn map(&self, meta: impl Into<String>, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            meta: meta.into(),
            source: None,
        }
    }

    /// Largest pointwise modulus of the difference with another field on the
    /// same grid.
    pub fn sup_distance(&self, other: &Field) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Alignment("fields live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Bilinear interpolation of the stored samples.
    pub fn interpolate(&self, x: f64, y: f64) -> Result<Complex64> {
        let (ix, wx) = locate(self.grid.xs(), x)
            .ok_or_else(|| Error::Domain(format!("x = {x} lies outside the field's grid")))?;
        let (iy, wy) = locate(self.grid.ys(), y)
            .ok_or_else(|| Error::Domain(format!("y = {y} lies outside the field's grid")))?;
        let ix1 = (ix + 1).min(self.grid.nx() - 1);
        let iy1 = (iy + 1).min(self.grid.ny() - 1);
        let v00 = self.at(ix, iy);
        let v10 = self.at(ix1, iy);
        let v01 = self.at(ix, iy1);
        let v11 = self.at(ix1, iy1);
        Ok(v00 * ((1.0 - wx) * (1.0 - wy)) + v10 * (wx * (1.0 - wy)) + v01 * ((1.0 - wx) * wy) + v11 * (wx * wy))
    }

    /// Writes the field in the `x,y,re,im` CSV format: `#` comment lines
    /// carrying dimensions and provenance, then rows in y-major order with
    /// 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W, comments: &[String]) -> Result<()> {
        writeln!(out, "# nx={} ny={}", self.grid.nx(), self.grid.ny())?;
        writeln!(out, "# provenance: {}", self.meta)?;
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "x,y,re,im")?;
        for (iy, &y) in self.grid.ys().iter().enumerate() {
            for (ix, &x) in self.grid.xs().iter().enumerate() {
                let v = self.at(ix, iy);
                writeln!(out, "{},{},{},{}", fmt17(x), fmt17(y), fmt17(v.re), fmt17(v.im))?;
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut meta = String::new();
        let mut rows: Vec<[f64; 4]> = Vec::new();
        let mut seen_header = false;
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                if let Some(p) = c.trim().strip_prefix("provenance:") {
                    meta = p.trim().to_string();
                }
                continue;
            }
            if !seen_header {
                if line.replace(' ', "") != "x,y,re,im" {
                    return Err(Error::Parse(format!("line {}: expected header `x,y,re,im`", lineno + 1)));
                }
                seen_header = true;
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {}: malformed row `{line}`", lineno + 1)))?;
            if cols.len() != 4 {
                return Err(Error::Parse(format!("line {}: expected 4 columns", lineno + 1)));
            }
            rows.push([cols[0], cols[1], cols[2], cols[3]]);
        }
        if rows.is_empty() {
            return Err(Error::Parse("field CSV has no data rows".into()));
        }
        let y0 = rows[0][1];
        let nx = rows.iter().take_while(|r| r[1] == y0).count();
        if rows.len() % nx != 0 {
            return Err(Error::Parse("field CSV rows do not form a tensor grid".into()));
        }
        let ny = rows.len() / nx;
        let xs: Vec<f64> = rows[..nx].iter().map(|r| r[0]).collect();
        let ys: Vec<f64> = (0..ny).map(|j| rows[j * nx][1]).collect();
        let mut values = vec![Complex64::new(0.0, 0.0); nx * ny];
        for (k, r) in rows.iter().enumerate() {
            let (iy, ix) = (k / nx, k % nx);
            if r[0] != xs[ix] || r[1] != ys[iy] {
                return Err(Error::Parse(format!("row {} breaks the y-major grid order", k + 1)));
            }
            values[ix * ny + iy] = Complex64::new(r[2], r[3]);
        }
        Field::from_values(Grid::new(xs, ys)?, values, meta)
    }
}

impl Surface for Field {
    fn value(&self, x: f64, y: f64) -> Result<Complex64> {
        if !self.grid.bounds().contains_point(x, y) {
            return Err(Error::Domain(format!("({x}, {y}) lies outside the field's grid")));
        }
        match &self.source {
            Some(s) => s.value(x, y),
            None => self.interpolate(x, y),
        }
    }

    fn kinks_x(&self) -> Vec<f64> {
        match &self.source {
            Some(s) => s.kinks_x(),
            None => self.grid.xs().to_vec(),
        }
    }

    fn kinks_y(&self) -> Vec<f64> {
        match &self.source {
            Some(s) => s.kinks_y(),
            None => self.grid.ys().to_vec(),
        }
    }

    fn domain(&self) -> Option<Rectangle> {
        Some(self.grid.bounds())
    }
}

/// Index of the cell containing `t` and the fractional offset in it.
fn locate(axis: &[f64], t: f64) -> Option<(usize, f64)> {
    let n = axis.len();
    if !(t >= axis[0] && t <= axis[n - 1]) {
        return None;
    }
    if n == 1 {
        return Some((0, 0.0));
    }
    let i = (axis.partition_point(|&v| v <= t).max(1) - 1).min(n - 2);
    Some((i, (t - axis[i]) / (axis[i + 1] - axis[i])))
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Deterministic probe set: up to `per_axis` evenly spread node indices per
/// axis, and every rectangle spanned by two chosen nodes on each axis whose
/// sides cover at least two grid steps.
pub fn probe_rectangles(grid: &Grid, per_axis: usize) -> Vec<Rectangle> {
    let pick = |n: usize| -> Vec<usize> {
        if n <= per_axis || per_axis < 2 {
            (0..n).collect()
        } else {
            let mut idx: Vec<usize> = (0..per_axis)
                .map(|k| ((k * (n - 1)) as f64 / (per_axis - 1) as f64).round() as usize)
                .collect();
            idx.dedup();
            idx
        }
    };
    let xi = pick(grid.nx());
    let yi = pick(grid.ny());
    let mut rects = Vec::new();
    for (p, &i0) in xi.iter().enumerate() {
        for &i1 in &xi[p + 1..] {
            if i1 - i0 < 2 {
                continue;
            }
            for (q, &j0) in yi.iter().enumerate() {
                for &j1 in &yi[q + 1..] {
                    if j1 - j0 < 2 {
                        continue;
                    }
                    rects.push(Rectangle {
                        a: grid.xs()[i0],
                        a2: grid.xs()[i1],
                        b: grid.ys()[j0],
                        b2: grid.ys()[j1],
                    });
                }
            }
        }
    }
    rects
}
