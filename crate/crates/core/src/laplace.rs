//! Truncated Laplace transforms of boundary data and solution slices, the
//! evolution law `L[u_h(., y)](zeta) = exp(-y / zeta) L[f](zeta)`, and the
//! region where the transform argument forces vanishing.

use crate::boundary::{BoundaryData, BoundaryFunction, GrowthBound};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quadrature::{composite_nodes, QuadratureSpec};
use crate::riemann::RiemannSolution;
use crate::summation::ComplexSum;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// Target for [`default_x_max`].
pub const DEFAULT_TAIL_TARGET: f64 = 1e-12;
/// Keeps the relative deviation finite when both sides vanish.
pub const EPS_FLOOR: f64 = 1e-300;
const X_MAX_CEILING: f64 = 1e6;

/// Growth parameters `(q, theta1, theta2)` with `q'' = q / (2q - 1)` when
/// `q > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSpec {
    pub q: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub qpp: Option<f64>,
}

impl GrowthSpec {
    pub fn new(q: f64, theta1: f64, theta2: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain(format!("q must lie in (0, 1], got {q}")));
        }
        if !(theta1 > 0.0 && theta1.is_finite() && theta2 > 0.0 && theta2.is_finite()) {
            return Err(Error::Domain(format!(
                "theta1 and theta2 must be positive and finite, got {theta1} and {theta2}"
            )));
        }
        let qpp = (q > 0.5).then(|| q / (2.0 * q - 1.0));
        Ok(Self { q, theta1, theta2, qpp })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEvaluation {
    pub zeta: Complex64,
    pub value: Complex64,
    /// Bound on `|int_{X_max}^inf exp(-x zeta) f(x) dx|`.
    pub tail_bound: f64,
    pub x_max: f64,
}

/// Abscissa of convergence implied by the growth metadata.
pub fn abscissa(growth: &GrowthBound) -> f64 {
    if growth.q == 1.0 {
        growth.theta
    } else {
        0.0
    }
}

/// Bound on the transform tail beyond `x_max` for data with
/// `|f(x)| <= C exp(theta x^q)`. For `q < 1` the concave exponent
/// `theta x^q - sigma x` is majorized by its tangent at `x_max`; the bound is
/// infinite when that tangent is not yet decreasing.
pub fn tail_bound(growth: &GrowthBound, sigma: f64, x_max: f64) -> Result<f64> {
    let abs = abscissa(growth);
    if !(sigma > abs) {
        return Err(Error::Abscissa {
            re_zeta: sigma,
            abscissa: abs,
        });
    }
    if growth.constant == 0.0 {
        return Ok(0.0);
    }
    let GrowthBound { constant, theta, q } = *growth;
    if q == 1.0 || theta == 0.0 {
        return Ok(constant * ((theta - sigma) * x_max).exp() / (sigma - theta));
    }
    let slope = sigma - theta * q * x_max.powf(q - 1.0);
    if slope <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(constant * (theta * x_max.powf(q) - sigma * x_max).exp() / slope)
}

/// Smallest power-of-two-refined truncation point whose tail bound is at
/// most `target`.
pub fn default_x_max(growth: &GrowthBound, sigma: f64, target: f64) -> Result<f64> {
    let ok = |x: f64| -> Result<bool> { Ok(tail_bound(growth, sigma, x)? <= target) };
    let mut hi = 1.0;
    while !ok(hi)? {
        hi *= 2.0;
        if hi > X_MAX_CEILING {
            return Err(Error::Metadata(format!(
                "no truncation point up to {X_MAX_CEILING} brings the tail bound below {target}"
            )));
        }
    }
    let mut lo = hi / 2.0;
    if ok(lo)? {
        return Ok(lo);
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn check_half_plane(zeta: Complex64) -> Result<()> {
    if !(zeta.re > 0.0) || !zeta.im.is_finite() {
        return Err(Error::Abscissa {
            re_zeta: zeta.re,
            abscissa: 0.0,
        });
    }
    Ok(())
}

/// `int_0^{x_max} exp(-x zeta) f(x) dx` with no tail estimate.
pub fn truncated_laplace<D: BoundaryData + ?Sized>(
    f: &D,
    zeta: Complex64,
    x_max: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    check_half_plane(zeta)?;
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Domain(format!("X_max must be positive and finite, got {x_max}")));
    }
    let mut acc = ComplexSum::new();
    for (x, w) in composite_nodes(0.0, x_max, &f.kinks(), quad) {
        acc.add((-x * zeta).exp() * (w * f.value(x)));
    }
    Ok(acc.value())
}

/// Truncated transform together with the tail bound from the growth
/// metadata.
pub fn laplace_data<D: BoundaryData + ?Sized>(
    f: &D,
    growth: Option<GrowthBound>,
    zeta: Complex64,
    x_max: f64,
    quad: &QuadratureSpec,
) -> Result<LaplaceEvaluation> {
    check_half_plane(zeta)?;
    let growth = growth.ok_or_else(|| {
        Error::Metadata("a tail bound needs growth metadata |f(x)| <= C exp(theta x^q)".into())
    })?;
    let tail = tail_bound(&growth, zeta.re, x_max)?;
    let value = truncated_laplace(f, zeta, x_max, quad)?;
    Ok(LaplaceEvaluation {
        zeta,
        value,
        tail_bound: tail,
        x_max,
    })
}

pub fn laplace(f: &BoundaryFunction, zeta: Complex64, x_max: f64, quad: &QuadratureSpec) -> Result<LaplaceEvaluation> {
    laplace_data(f, f.growth_bound(), zeta, x_max, quad)
}

/// [`laplace`] truncated at [`default_x_max`].
pub fn laplace_auto(f: &BoundaryFunction, zeta: Complex64, quad: &QuadratureSpec) -> Result<LaplaceEvaluation> {
    check_half_plane(zeta)?;
    let growth = f
        .growth_bound()
        .ok_or_else(|| Error::Metadata(format!("{f} carries no growth metadata")))?;
    let x_max = default_x_max(&growth, zeta.re, DEFAULT_TAIL_TARGET)?;
    laplace_data(f, Some(growth), zeta, x_max, quad)
}

/// One cell of an evolution-law check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionRow {
    pub zeta: Complex64,
    pub y: f64,
    /// `L[u_h(., y)](zeta)`
    pub lhs: Complex64,
    /// `exp(-y / zeta) L[f](zeta)`
    pub rhs: Complex64,
    pub deviation: f64,
}

/// Both sides of the evolution law for every `(zeta, y)`, with transforms
/// truncated at the largest grid abscissa.
pub fn evolution_rows(
    f: &BoundaryFunction,
    grid: &Grid,
    quad: &QuadratureSpec,
    zetas: &[Complex64],
    ys: &[f64],
) -> Result<Vec<EvolutionRow>> {
    for &z in zetas {
        check_half_plane(z)?;
    }
    let bounds = grid.bounds();
    let x_max = bounds.a2;
    if !(x_max > 0.0) {
        return Err(Error::Domain("the grid must extend to positive x".into()));
    }
    for &y in ys {
        if !(y >= bounds.b && y <= bounds.b2) {
            return Err(Error::Domain(format!("y = {y} lies outside the grid [{}, {}]", bounds.b, bounds.b2)));
        }
    }
    let u = RiemannSolution::horizontal(Arc::new(f.clone()), *quad)?;
    let nodes = composite_nodes(0.0, x_max, &f.kinks(), quad);
    let lf: Vec<Complex64> = zetas
        .iter()
        .map(|&z| truncated_laplace(f, z, x_max, quad))
        .collect::<Result<_>>()?;
    let per_y: Vec<Vec<EvolutionRow>> = ys
        .par_iter()
        .map(|&y| -> Result<Vec<EvolutionRow>> {
            let samples: Vec<f64> = nodes.iter().map(|&(x, _)| u.eval(x, y)).collect::<Result<_>>()?;
            Ok(zetas
                .iter()
                .zip(&lf)
                .map(|(&zeta, &lf)| {
                    let mut acc = ComplexSum::new();
                    for (&(x, w), &s) in nodes.iter().zip(&samples) {
                        acc.add((-x * zeta).exp() * (w * s));
                    }
                    let lhs = acc.value();
                    let rhs = (-y / zeta).exp() * lf;
                    let deviation = (lhs - rhs).norm() / (rhs.norm() + EPS_FLOOR);
                    EvolutionRow {
                        zeta,
                        y,
                        lhs,
                        rhs,
                        deviation,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(zetas.len() * ys.len());
    for (zi, _) in zetas.iter().enumerate() {
        for block in &per_y {
            rows.push(block[zi]);
        }
    }
    Ok(rows)
}

/// Largest relative deviation from the evolution law.
pub fn evolution_deviation(
    f: &BoundaryFunction,
    grid: &Grid,
    quad: &QuadratureSpec,
    zetas: &[Complex64],
    ys: &[f64],
) -> Result<f64> {
    Ok(evolution_rows(f, grid, quad, zetas, ys)?
        .iter()
        .fold(0.0, |m, r| m.max(r.deviation)))
}

/// `Re zeta > theta1` and `Re(1 / zeta) > theta2`.
pub fn vanishing_region(zeta: Complex64, theta1: f64, theta2: f64) -> bool {
    zeta.re > theta1 && zeta.inv().re > theta2
}

/// First point of the probe grid `Re zeta in (theta1, theta1 + 10]`,
/// `|Im zeta| <= 10`, step `step`, lying in the vanishing region.
pub fn vanishing_region_witness(theta1: f64, theta2: f64, step: f64) -> Option<Complex64> {
    let n_re = (10.0 / step).round() as i64;
    let n_im = (10.0 / step).round() as i64;
    (1..=n_re).find_map(|i| {
        let re = theta1 + step * i as f64;
        (-n_im..=n_im)
            .map(|k| Complex64::new(re, step * k as f64))
            .find(|&z| vanishing_region(z, theta1, theta2))
    })
}
