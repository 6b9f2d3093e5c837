//! Numerics for the Klein-Gordon equation `u_xy + u = 0` in characteristic
//! coordinates: bivariate Bessel functions, Riemann's solution of the
//! Goursat problem, Picard iteration, Laplace-side evolution and the growth
//! analysis behind Liouville-type uniqueness.

pub mod analysis;
pub mod bessel;
pub mod boundary;
pub mod error;
pub mod grid;
pub mod laplace;
pub mod picard;
pub mod quadrature;
pub mod riemann;
pub mod summation;

pub use bessel::{asymptotic_j00, eval_biv_bessel, grad_biv_bessel, BesselValue, SeriesParams};
pub use boundary::{BoundaryData, BoundaryFunction, FunctionKind, GrowthBound, Table};
pub use error::{Error, Result};
pub use grid::{Field, Grid, Rectangle, Surface};
pub use laplace::{GrowthSpec, LaplaceEvaluation};
pub use num_complex::Complex64;
pub use picard::{CharacteristicLine, IterationReport};
pub use quadrature::QuadratureSpec;
pub use riemann::RiemannSolution;
