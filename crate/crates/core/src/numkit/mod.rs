//! Numerical substrate: grids and quadrature, eigensolvers, adaptive ODE
//! integration, special functions and scalar root finding.

pub mod banded;
pub mod eigen;
pub mod grid;
pub mod linalg;
pub mod ode;
pub mod roots;
pub mod special;

pub use banded::BandedHermitian;
pub use eigen::{general_eigen, hermitian_eigen, HermitianEigen};
pub use grid::{trapezoid, Grid, GridFunction};
pub use linalg::{CMat, CVec, Mat2, Mat4, Vec2, Vec4};
pub use ode::{integrate_linear_ode, OdeOptions, OdeSolution};
pub use special::{gamma_complex, gauss_2f1, jacobi_polynomial, jacobi_polynomial_derivative, rgamma_complex};
