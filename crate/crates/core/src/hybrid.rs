//! Hybrid analytical/algebraic compression.
//!
//! The proxy factor `A = K^(X,Z)` is tall and thin. A row interpolative
//! decomposition `A ≈ U A[J, :]` picks representative points `X̂ = X[J]`, and
//! since `K ≈ A Φ`, the same `U` gives `K ≈ U K^(X̂,Y)`. Selection never looks
//! at `Y`. An optional column decomposition of `K^(X̂,Y)` adds
//! representatives `Ŷ` and the skeleton `K ≈ U K^(X̂,Ŷ) Vᵀ`.

use crate::bounds::{block_bound, choose_n, hybrid_bound, HybridBoundReport};
use crate::error::{invalid, Error, Result};
use crate::geometry::{validate_separation, GeometryConfig, PointSet};
use crate::kernel::{kernel_matrix, rel_fro_error};
use crate::matrix::ComplexMatrix;
use crate::proxy::{analytical_compress, trapezoidal_surface};
use crate::rrqr::{col_id, rank_from_singular_values, row_id, singular_values, InterpolativeFactor};

/// Largest `|X|·|Y|` for which [`measure_errors`] assembles `K`.
pub const MAX_DENSE_ENTRIES: usize = 40_000_000;

#[derive(Debug, Clone)]
pub struct HybridResult {
    pub u: InterpolativeFactor,
    pub x_hat: PointSet,
    pub v: Option<InterpolativeFactor>,
    pub y_hat: Option<PointSet>,
    /// `K^(X̂,Y)`, or `K^(X̂,Ŷ)` for a skeleton.
    pub core: ComplexMatrix,
    pub rank: usize,
    pub gamma: f64,
    pub n: usize,
    pub d: u32,
    /// Filled by [`HybridResult::with_measurement`]: `𝓡_N`, or the skeleton
    /// residual when `v` is present.
    pub measured_error: Option<f64>,
    pub bound: HybridBoundReport,
}

impl HybridResult {
    pub fn is_skeleton(&self) -> bool {
        self.v.is_some()
    }

    /// The bound matching this result's form.
    pub fn bound_value(&self) -> f64 {
        if self.is_skeleton() {
            self.bound.bound_skel
        } else {
            self.bound.bound_spr
        }
    }

    /// Dense approximation `U·core` (or `U·core·Vᵀ`).
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        let left = self.u.expand_rows(&self.core)?;
        match &self.v {
            Some(v) => v.expand_cols(&left),
            None => Ok(left),
        }
    }

    pub fn with_measurement(mut self, report: &ErrorReport) -> Self {
        self.measured_error = Some(report.skeleton.unwrap_or(report.r_n));
        self
    }
}

fn check_pipeline_args(x: &PointSet, y: &PointSet, cfg: &GeometryConfig, gamma: f64, n: usize) -> Result<()> {
    validate_separation(x, y, cfg)?;
    if !cfg.separates(gamma) {
        return Err(invalid(format!(
            "proxy radius {gamma} outside ({}, {})",
            cfg.gamma1, cfg.gamma2
        )));
    }
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    Ok(())
}

/// `K ≈ U K^(X̂,Y)` from a row ID of `K^(X,Z)` with `N` points of radius `γ`.
pub fn hybrid_compress(
    x: &PointSet,
    y: &PointSet,
    cfg: &GeometryConfig,
    gamma: f64,
    n: usize,
    tau2: f64,
    f: f64,
) -> Result<HybridResult> {
    check_pipeline_args(x, y, cfg, gamma, n)?;
    let surface = trapezoidal_surface(gamma, n)?;
    let a = kernel_matrix(x, &surface.points(), cfg.d)?;
    let u = row_id(&a, tau2, f)?;
    let x_hat = x.subset(&u.selected, "X_hat");
    let core = kernel_matrix(&x_hat, y, cfg.d)?;

    let tau1 = block_bound(gamma, cfg, n)?;
    let mut bound = hybrid_bound(x.len(), u.rank(), f, cfg, gamma, tau1.value, tau2)?;
    bound.valid = tau1.valid;
    Ok(HybridResult {
        rank: u.rank(),
        u,
        x_hat,
        v: None,
        y_hat: None,
        core,
        gamma,
        n,
        d: cfg.d,
        measured_error: None,
        bound,
    })
}

/// `K ≈ U K^(X̂,Ŷ) Vᵀ`: [`hybrid_compress`] followed by a column ID of
/// `K^(X̂,Y)`.
pub fn skeletonize(
    x: &PointSet,
    y: &PointSet,
    cfg: &GeometryConfig,
    gamma: f64,
    n: usize,
    tau2: f64,
    f: f64,
) -> Result<HybridResult> {
    let mut result = hybrid_compress(x, y, cfg, gamma, n, tau2, f)?;
    let v = col_id(&result.core, tau2, f)?;
    let y_hat = y.subset(&v.selected, "Y_hat");
    result.core = kernel_matrix(&result.x_hat, &y_hat, cfg.d)?;
    result.v = Some(v);
    result.y_hat = Some(y_hat);
    Ok(result)
}

/// [`hybrid_compress`] (or [`skeletonize`]) with `N` and `γ` taken from
/// [`choose_n`] for the target `τ₁`.
pub fn compress_to_tolerance(
    x: &PointSet,
    y: &PointSet,
    cfg: &GeometryConfig,
    tau1: f64,
    tau2: f64,
    f: f64,
    skeleton: bool,
) -> Result<HybridResult> {
    let pick = choose_n(cfg, tau1)?;
    if skeleton {
        skeletonize(x, y, cfg, pick.gamma, pick.n, tau2, f)
    } else {
        hybrid_compress(x, y, cfg, pick.gamma, pick.n, tau2, f)
    }
}

/// Errors measured against the assembled kernel matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `‖K − K^(X,Z)Φ‖_F / ‖K‖_F`.
    pub e_n: f64,
    /// `‖K − U K^(X̂,Y)‖_F / ‖K‖_F`.
    pub r_n: f64,
    /// `‖K − U K^(X̂,Ŷ) Vᵀ‖_F / ‖K‖_F` for skeleton results.
    pub skeleton: Option<f64>,
}

fn ensure_dense_size(x: &PointSet, y: &PointSet) -> Result<()> {
    if x.len().saturating_mul(y.len()) > MAX_DENSE_ENTRIES {
        return Err(Error::TooLarge {
            rows: x.len(),
            cols: y.len(),
        });
    }
    Ok(())
}

/// `𝓔_N(γ)`, `𝓡_N(γ)` and the skeleton residual of `result`.
pub fn measure_errors(
    x: &PointSet,
    y: &PointSet,
    cfg: &GeometryConfig,
    gamma: f64,
    n: usize,
    result: &HybridResult,
) -> Result<ErrorReport> {
    ensure_dense_size(x, y)?;
    check_pipeline_args(x, y, cfg, gamma, n)?;
    let k = kernel_matrix(x, y, cfg.d)?;
    let surface = trapezoidal_surface(gamma, n)?;
    let analytical = analytical_compress(x, y, &surface, cfg.d)?;
    let e_n = rel_fro_error(&k, &analytical.to_dense())?;
    let spr = result.u.expand_rows(&k.select_rows(&result.u.selected))?;
    let r_n = rel_fro_error(&k, &spr)?;
    let skeleton = match &result.v {
        Some(v) => Some(rel_fro_error(&k, &v.expand_cols(&result.u.expand_rows(&result.core)?)?)?),
        None => None,
    };
    Ok(ErrorReport { e_n, r_n, skeleton })
}

/// Smallest `k` whose optimal rank-`k` approximation has relative Frobenius
/// error at most `tol`.
pub fn svd_rank_oracle(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    if !(tol >= 0.0 && tol < 1.0) {
        return Err(invalid(format!("tolerance must lie in [0, 1), got {tol}")));
    }
    Ok(rank_from_singular_values(&singular_values(m)?, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::optimal_gamma_d1;
    use crate::geometry::{sample_annulus, sample_disk};
    use num_complex::Complex64;

    fn instance(m: usize, n: usize, d: u32, seed: u64) -> (PointSet, PointSet, GeometryConfig) {
        let cfg = GeometryConfig::new(0.5, 2.0, 5.0, d).unwrap();
        (
            sample_disk(m, 0.5, seed).unwrap(),
            sample_annulus(n, 2.0, 5.0, seed + 1000).unwrap(),
            cfg,
        )
    }

    #[test]
    fn single_point_is_exact() {
        let (x, y, cfg) = instance(1, 5, 1, 3);
        let r = hybrid_compress(&x, &y, &cfg, 1.0, 20, 1e-12, 2.0).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.x_hat.points(), x.points());
        assert_eq!(r.u.basis(), ComplexMatrix::identity(1));
        let k = kernel_matrix(&x, &y, 1).unwrap();
        assert_eq!(r.to_dense().unwrap(), k);
    }

    #[test]
    fn skeleton_of_one_by_one() {
        let (x, y, cfg) = instance(1, 1, 2, 4);
        let r = skeletonize(&x, &y, &cfg, 1.0, 20, 1e-12, 2.0).unwrap();
        assert_eq!(r.core, kernel_matrix(&x, &y, 2).unwrap());
        assert_eq!(r.v.as_ref().unwrap().basis(), ComplexMatrix::identity(1));
    }

    #[test]
    fn hybrid_errors_within_bound() {
        for d in 1..=2 {
            let (x, y, cfg) = instance(120, 150, d, 7);
            let n = 30;
            let r = hybrid_compress(&x, &y, &cfg, 1.0, n, 1e-10, 2.0).unwrap();
            let rep = measure_errors(&x, &y, &cfg, 1.0, n, &r).unwrap();
            assert!(r.bound.valid);
            assert!(rep.r_n <= r.bound.bound_spr, "d = {d}: {} > {}", rep.r_n, r.bound.bound_spr);
            assert!(rep.e_n <= block_bound(1.0, &cfg, n).unwrap().value);
            let r = r.with_measurement(&rep);
            assert_eq!(r.measured_error, Some(rep.r_n));
        }
    }

    #[test]
    fn core_is_verbatim_submatrix() {
        let (x, y, cfg) = instance(80, 90, 1, 9);
        let k = kernel_matrix(&x, &y, 1).unwrap();
        let r = skeletonize(&x, &y, &cfg, 1.0, 24, 1e-10, 2.0).unwrap();
        let v = r.v.as_ref().unwrap();
        let sliced = k.select_rows(&r.u.selected).select_cols(&v.selected);
        assert_eq!(r.core, sliced);
        assert!(v.rank() <= r.rank);
        let rep = measure_errors(&x, &y, &cfg, 1.0, 24, &r).unwrap();
        assert!(rep.skeleton.unwrap() <= r.bound.bound_skel);
    }

    #[test]
    fn selection_ignores_y() {
        let (x, y1, cfg) = instance(70, 40, 1, 11);
        let y2 = sample_annulus(90, 2.0, 5.0, 99).unwrap();
        let a = hybrid_compress(&x, &y1, &cfg, 1.0, 20, 1e-12, 2.0).unwrap();
        let b = hybrid_compress(&x, &y2, &cfg, 1.0, 20, 1e-12, 2.0).unwrap();
        assert_eq!(a.u, b.u);
    }

    #[test]
    fn tolerance_driven_pipeline() {
        let (x, y, cfg) = instance(60, 70, 1, 13);
        let r = compress_to_tolerance(&x, &y, &cfg, 1e-8, 1e-10, 2.0, false).unwrap();
        assert_eq!(r.gamma, optimal_gamma_d1(0.5, 2.0));
        let rep = measure_errors(&x, &y, &cfg, r.gamma, r.n, &r).unwrap();
        assert!(rep.e_n <= 1e-8);
    }

    #[test]
    fn rejects_bad_radius_and_large_dense() {
        let (x, y, cfg) = instance(10, 10, 1, 1);
        assert!(hybrid_compress(&x, &y, &cfg, 2.5, 20, 1e-12, 2.0).is_err());
        assert!(ensure_dense_size(&x, &y).is_ok());
    }

    #[test]
    fn svd_oracle_ranks() {
        let mut m = ComplexMatrix::zeros(3, 3);
        m[(0, 0)] = Complex64::new(4.0, 0.0);
        m[(1, 1)] = Complex64::new(2.0, 0.0);
        assert_eq!(svd_rank_oracle(&m, 1e-12).unwrap(), 2);
        let (x, y, _) = instance(40, 60, 1, 5);
        let k = kernel_matrix(&x, &y, 1).unwrap();
        let r = svd_rank_oracle(&k, 1e-10).unwrap();
        assert!(r > 3 && r < 40);
    }
}
