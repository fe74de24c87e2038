//! Proxy surfaces and the analytical factorization `K^(X,Y) ≈ K^(X,Z) Φ^(Z,Y)`.
//!
//! The surface is the circle `|z| = γ` discretized by the composite
//! trapezoidal rule: `z_j = γ exp(2jπi/N)` with weights `ω_j = (2πi/N) z_j`,
//! `j = 1..N`. Substituting the rule into the contour representation of the
//! kernel gives
//!
//! ```text
//! κ̃(x, y) = Σ_j κ(x, z_j) φ(z_j, y),    φ(z, y) = z / (N (y − z)),
//! ```
//!
//! which is a rank-`N` separable approximation whose `x`-factor is the kernel
//! itself evaluated against the proxy points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::{validate_separation, ComplexPoint, GeometryConfig, PointSet};
use crate::kernel::{kappa, kernel_matrix, COINCIDENCE_TOL};
use crate::matrix::ComplexMatrix;

/// Trapezoidal discretization of the circle `|z| = γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxySurface {
    gamma: f64,
    nodes: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl ProxySurface {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of proxy points `N`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// The proxy points as a point set.
    pub fn points(&self) -> PointSet {
        PointSet::new(self.nodes.clone(), "Z").expect("nodes are finite")
    }
}

/// `z_j = γ exp(2jπi/N)`, `ω_j = (2πi/N) z_j` for `j = 1..N`.
///
/// The angle is reduced mod `2π` so `z_N` is exactly `γ` on the real axis.
pub fn trapezoidal_surface(gamma: f64, n: usize) -> Result<ProxySurface> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid(format!("proxy radius must be positive, got {gamma}")));
    }
    if n == 0 {
        return Err(invalid("number of proxy points must be positive"));
    }
    let scale = Complex64::new(0.0, 2.0 * PI / n as f64);
    let nodes: Vec<Complex64> = (1..=n)
        .map(|j| {
            let k = j % n;
            // Exact values on the axes keep small-N surfaces exact.
            if 4 * k % n == 0 {
                let quarter = 4 * k / n;
                match quarter {
                    0 => Complex64::new(gamma, 0.0),
                    1 => Complex64::new(0.0, gamma),
                    2 => Complex64::new(-gamma, 0.0),
                    _ => Complex64::new(0.0, -gamma),
                }
            } else {
                Complex64::from_polar(gamma, 2.0 * PI * k as f64 / n as f64)
            }
        })
        .collect();
    let weights = nodes.iter().map(|z| scale * z).collect();
    Ok(ProxySurface { gamma, nodes, weights })
}

/// `φ(z, y) = z / (N (y − z))`.
pub fn phi(z: ComplexPoint, y: ComplexPoint, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(invalid("number of proxy points must be positive"));
    }
    let diff = y - z;
    if diff.norm() < COINCIDENCE_TOL {
        return Err(Error::Singular(format!("y = z = {y}")));
    }
    Ok(z / (diff * n as f64))
}

/// `Φ^(Z,Y)`, an `N x |Y|` matrix.
pub fn phi_matrix(surface: &ProxySurface, y: &PointSet) -> Result<ComplexMatrix> {
    let n = surface.len();
    let (zs, ys) = (surface.nodes(), y.points());
    ComplexMatrix::try_from_fn_par(n, ys.len(), |i, j| {
        let diff = ys[j] - zs[i];
        if diff.norm() < COINCIDENCE_TOL {
            return Err(Error::Coincident { row: i, col: j });
        }
        Ok(zs[i] / (diff * n as f64))
    })
}

/// `κ̃(x, y) = Σ_j κ(x, z_j) φ(z_j, y)` by direct summation.
pub fn kappa_tilde(x: ComplexPoint, y: ComplexPoint, surface: &ProxySurface, d: u32) -> Result<Complex64> {
    let n = surface.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for &z in surface.nodes() {
        acc += kappa(x, z, d)? * phi(z, y, n)?;
    }
    Ok(acc)
}

/// The two factors of the analytical compression: `A = K^(X,Z)` and
/// `B = Φ^(Z,Y)`.
#[derive(Debug, Clone)]
pub struct AnalyticalFactors {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub surface: ProxySurface,
}

impl AnalyticalFactors {
    pub fn rank_bound(&self) -> usize {
        self.surface.len()
    }

    /// Dense `A·B`. Only for diagnostics on instances small enough to hold
    /// the full kernel matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        self.a.matmul(&self.b).expect("factor shapes agree")
    }
}

/// Builds `K^(X,Z)` and `Φ^(Z,Y)` without forming their product.
///
/// Only requires the proxy circle to separate the sets (`max|x| < γ <
/// min|y|`); use [`analytical_compress_checked`] to also enforce the full
/// radii configuration.
pub fn analytical_compress(x: &PointSet, y: &PointSet, surface: &ProxySurface, d: u32) -> Result<AnalyticalFactors> {
    x.ensure_nonempty()?;
    y.ensure_nonempty()?;
    let gamma = surface.gamma();
    if x.max_modulus() >= gamma {
        return Err(invalid(format!(
            "inner points reach |x| = {} >= proxy radius {gamma}",
            x.max_modulus()
        )));
    }
    if y.min_modulus() <= gamma {
        return Err(invalid(format!(
            "outer points reach |y| = {} <= proxy radius {gamma}",
            y.min_modulus()
        )));
    }
    let a = kernel_matrix(x, &surface.points(), d)?;
    let b = phi_matrix(surface, y)?;
    Ok(AnalyticalFactors {
        a,
        b,
        surface: surface.clone(),
    })
}

/// [`analytical_compress`] after [`validate_separation`] and a check that
/// `γ₁ < γ < γ₂`.
pub fn analytical_compress_checked(
    x: &PointSet,
    y: &PointSet,
    cfg: &GeometryConfig,
    surface: &ProxySurface,
) -> Result<AnalyticalFactors> {
    validate_separation(x, y, cfg)?;
    if !cfg.separates(surface.gamma()) {
        return Err(invalid(format!(
            "proxy radius {} outside ({}, {})",
            surface.gamma(),
            cfg.gamma1,
            cfg.gamma2
        )));
    }
    analytical_compress(x, y, surface, cfg.d)
}
