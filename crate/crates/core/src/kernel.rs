//! The kernel `κ(x, y) = 1/(x − y)^d` and dense kernel matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ComplexPoint, PointSet};
use crate::matrix::ComplexMatrix;

pub use crate::matrix::{fro_norm, rel_fro_error};

/// Largest kernel order accepted by [`kappa`].
pub const MAX_KERNEL_ORDER: u32 = 32;

/// Separations below this are treated as coincident points.
pub const COINCIDENCE_TOL: f64 = 1e-30;

/// `w^d` for small positive `d`, by repeated squaring.
pub(crate) fn powu(w: Complex64, d: u32) -> Complex64 {
    let mut base = w;
    let mut exp = d;
    let mut acc = Complex64::new(1.0, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

fn check_order(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("kernel order d must be at least 1".into()));
    }
    if d > MAX_KERNEL_ORDER {
        return Err(Error::UnsupportedOrder { d, max: MAX_KERNEL_ORDER });
    }
    Ok(())
}

#[inline]
fn kappa_unchecked(x: ComplexPoint, y: ComplexPoint, d: u32) -> Option<Complex64> {
    let diff = x - y;
    if diff.norm() < COINCIDENCE_TOL {
        return None;
    }
    Some(powu(diff.inv(), d))
}

/// `(x − y)^(−d)`.
pub fn kappa(x: ComplexPoint, y: ComplexPoint, d: u32) -> Result<Complex64> {
    check_order(d)?;
    kappa_unchecked(x, y, d).ok_or_else(|| Error::Singular(format!("x = y = {x}")))
}

/// `K^(X,Y)`: entry `(i, j)` is `κ(X_i, Y_j)`.
pub fn kernel_matrix(x: &PointSet, y: &PointSet, d: u32) -> Result<ComplexMatrix> {
    check_order(d)?;
    let (xs, ys) = (x.points(), y.points());
    ComplexMatrix::try_from_fn_par(xs.len(), ys.len(), |i, j| {
        kappa_unchecked(xs[i], ys[j], d).ok_or(Error::Coincident { row: i, col: j })
    })
}
