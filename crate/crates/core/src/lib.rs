//! Proxy-point compression of kernel matrices `K_ij = (x_i − y_j)^(−d)`.
//!
//! Points `X` inside a disk of radius `γ₁` interact with points `Y` in the
//! annulus `γ₂ <= |y| <= γ₃`. Replacing `Y` by `N` trapezoidal points on a
//! circle of radius `γ` gives a rank-`N` factorization `K ≈ K^(X,Z) Φ^(Z,Y)`
//! whose relative error is known in closed form ([`bounds`]). A strong
//! rank-revealing QR of the thin factor then selects representative rows
//! ([`rrqr`], [`hybrid`]).

pub mod bounds;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod hybrid;
pub mod kernel;
pub mod matrix;
pub mod proxy;
pub mod rrqr;

pub use error::{Error, Result, Side};
pub use geometry::{ComplexPoint, GeometryConfig, PointSet};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
