use crate::bessel::j00;
use crate::boundary::BoundaryFunction;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quadrature::QuadratureSpec;
use crate::riemann::unilateral_horizontal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeReport {
    /// Largest breach of `0 <= u1 <= J00(x, -|y|)` and of realness.
    pub max_violation: f64,
    /// `max u1(x, y) / exp(theta1 x + theta2 |y|)`.
    pub sup_ratio: f64,
}

/// Checks the envelope of `u1 = R[ramp, 0]` on a grid in `x >= 0, y <= 0`.
pub fn u1_envelope_check(grid: &Grid, quad: &QuadratureSpec, theta1: f64, theta2: f64) -> Result<EnvelopeReport> {
    if !(theta1 > 0.0 && theta2 > 0.0) {
        return Err(Error::Domain(format!(
            "theta1 and theta2 must be positive, got {theta1} and {theta2}"
        )));
    }
    let b = grid.bounds();
    if b.a < 0.0 || b.b2 > 0.0 {
        return Err(Error::Domain(format!("the grid {b} must lie in x >= 0, y <= 0")));
    }
    let u1 = unilateral_horizontal(&BoundaryFunction::ramp(), grid, quad)?;
    let mut max_violation: f64 = 0.0;
    let mut sup_ratio: f64 = 0.0;
    for ((x, y), u) in grid.points().zip(u1.values()) {
        let envelope = j00(x, -y.abs())?;
        max_violation = max_violation.max(-u.re).max(u.re - envelope).max(u.im.abs());
        sup_ratio = sup_ratio.max(u.re / (theta1 * x + theta2 * y.abs()).exp());
    }
    Ok(EnvelopeReport {
        max_violation,
        sup_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_envelope() {
        let grid = Grid::uniform((0.0, 3.0), 13, (-3.0, 0.0), 13).unwrap();
        let r = u1_envelope_check(&grid, &QuadratureSpec::default(), 1.0, 1.0).unwrap();
        assert!(r.max_violation <= 1e-8, "{r:?}");
        assert!(r.sup_ratio <= 1.0, "{r:?}");
    }

    #[test]
    fn rejects_grids_leaving_the_quadrant() {
        let grid = Grid::uniform((-1.0, 1.0), 3, (-1.0, 0.0), 3).unwrap();
        assert!(u1_envelope_check(&grid, &QuadratureSpec::default(), 1.0, 1.0).is_err());
    }
}
