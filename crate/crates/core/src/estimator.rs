//! Locating a good proxy radius from a handful of probe points.
//!
//! The relative error of the analytical factors as a function of `γ` is
//! V-shaped and its minimizer barely depends on the point sets. Sampling it
//! with `X₀ ⊂ 𝒞(0; γ₁)` and `Y₀ ⊂ 𝒞(0; γ₂)`, which carry the worst case of
//! both error terms, gives the estimate `γ̃*` at a cost independent of
//! `|X|` and `|Y|`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::{sample_circle, seeded_rng, GeometryConfig, PointSet};
use crate::kernel::{kernel_matrix, rel_fro_error};
use crate::proxy::{analytical_compress, trapezoidal_surface};

/// Points of the coarse grid used by [`estimate_optimal_gamma`].
pub const COARSE_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Probe,
    Full,
    Bound,
}

/// Relative errors sampled over increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub gammas: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

impl ErrorCurve {
    /// Radius of the smallest sampled value; ties go to the smaller radius.
    pub fn argmin(&self) -> Option<f64> {
        self.min_index().map(|i| self.gammas[i])
    }

    pub fn min_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, v) in self.values.iter().enumerate() {
            if best.map_or(true, |b| *v < self.values[b]) {
                best = Some(i);
            }
        }
        best
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }
}

/// `count` evenly spaced radii on `[lo, hi]`; a single point sits at the
/// midpoint.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// `count` radii strictly inside `(γ₁, γ₂)`: the closed grid on
/// `[γ₁ + δ, γ₂ − δ]` with `δ = (γ₂ − γ₁)/(count + 1)`.
pub fn interior_grid(cfg: &GeometryConfig, count: usize) -> Vec<f64> {
    let delta = (cfg.gamma2 - cfg.gamma1) / (count + 1) as f64;
    uniform_grid(cfg.gamma1 + delta, cfg.gamma2 - delta, count)
}

/// `X₀` and `Y₀` with `l` points each: `γ₁` and `γ₂` on the positive real
/// axis followed by `l − 1` seeded uniform points on the same circles.
pub fn probe_sets(cfg: &GeometryConfig, l: usize, seed: u64) -> Result<(PointSet, PointSet)> {
    if l < 1 {
        return Err(invalid("probe size l must be at least 1"));
    }
    let mut rng = seeded_rng(seed);
    let mut x = vec![Complex64::new(cfg.gamma1, 0.0)];
    x.extend(sample_circle(l - 1, cfg.gamma1, &mut rng));
    let mut y = vec![Complex64::new(cfg.gamma2, 0.0)];
    y.extend(sample_circle(l - 1, cfg.gamma2, &mut rng));
    Ok((PointSet::new(x, "X0")?, PointSet::new(y, "Y0")?))
}

fn relative_error_at(x: &PointSet, y: &PointSet, k: &crate::ComplexMatrix, d: u32, n: usize, gamma: f64) -> Result<f64> {
    let surface = trapezoidal_surface(gamma, n)?;
    let factors = analytical_compress(x, y, &surface, d)?;
    rel_fro_error(k, &factors.to_dense())
}

/// `‖K − A·B‖_F / ‖K‖_F` of the analytical factors at each radius.
///
/// Each radius must separate the sets (`max|x| < γ < min|y|`).
pub fn error_curve(x: &PointSet, y: &PointSet, d: u32, n: usize, gammas: &[f64], kind: CurveKind) -> Result<ErrorCurve> {
    if gammas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("radius grid must be strictly increasing"));
    }
    let k = kernel_matrix(x, y, d)?;
    let values = gammas
        .par_iter()
        .map(|&g| relative_error_at(x, y, &k, d, n, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorCurve {
        gammas: gammas.to_vec(),
        values,
        kind,
    })
}

/// Probe-based estimate `γ̃*` of the optimal proxy radius for order `cfg.d`.
///
/// The probe curve is sampled on 64 points of `[γ₁ + δ, γ₂ − δ]` with
/// `δ = 10⁻³(γ₂ − γ₁)`, then refined by golden-section search on the two
/// cells around the best sample until the bracket is narrower than
/// `10⁻⁴(γ₂ − γ₁)`.
pub fn estimate_optimal_gamma(cfg: &GeometryConfig, n: usize, l: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    let (x0, y0) = probe_sets(cfg, l, seed)?;
    let k = kernel_matrix(&x0, &y0, cfg.d)?;
    let eval = |g: f64| relative_error_at(&x0, &y0, &k, cfg.d, n, g);

    let width = cfg.gamma2 - cfg.gamma1;
    let delta = 1e-3 * width;
    let grid = uniform_grid(cfg.gamma1 + delta, cfg.gamma2 - delta, COARSE_GRID);
    let values = grid.par_iter().map(|&g| eval(g)).collect::<Result<Vec<_>>>()?;
    let coarse = ErrorCurve { gammas: grid, values, kind: CurveKind::Probe };
    let best = coarse.min_index().expect("grid is nonempty");

    let mut lo = coarse.gammas[best.saturating_sub(1)];
    let mut hi = coarse.gammas[(best + 1).min(COARSE_GRID - 1)];
    let (mut best_g, mut best_v) = (coarse.gammas[best], coarse.values[best]);

    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (eval(a)?, eval(b)?);
    while hi - lo > 1e-4 * width {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = eval(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = eval(b)?;
        }
    }
    for (g, v) in [(a, fa), (b, fb)] {
        if v < best_v {
            best_g = g;
            best_v = v;
        }
    }
    Ok(best_g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{block_bound, exact_rel_error};
    use crate::geometry::{sample_annulus, sample_disk};

    fn cfg(d: u32) -> GeometryConfig {
        GeometryConfig::new(0.5, 2.0, 5.0, d).unwrap()
    }

    #[test]
    fn probe_sets_shapes() {
        let (x, y) = probe_sets(&cfg(1), 1, 0).unwrap();
        assert_eq!(x.points(), &[Complex64::new(0.5, 0.0)]);
        assert_eq!(y.points(), &[Complex64::new(2.0, 0.0)]);
        let (x, y) = probe_sets(&cfg(1), 3, 7).unwrap();
        assert_eq!((x.len(), y.len()), (3, 3));
        assert!(x.points().iter().all(|p| (p.norm() - 0.5).abs() < 1e-15));
        assert!(y.points().iter().all(|p| (p.norm() - 2.0).abs() < 1e-15));
        assert_eq!(probe_sets(&cfg(1), 3, 7).unwrap(), (x, y));
        assert!(probe_sets(&cfg(1), 0, 7).is_err());
    }

    #[test]
    fn single_probe_curve_is_exact_error_modulus() {
        let c = cfg(1);
        let (x, y) = probe_sets(&c, 1, 0).unwrap();
        let grid = interior_grid(&c, 7);
        let curve = error_curve(&x, &y, 1, 12, &grid, CurveKind::Probe).unwrap();
        for (g, v) in grid.iter().zip(&curve.values) {
            let e = exact_rel_error(x.get(0), y.get(0), *g, 12, 1).unwrap().norm();
            assert!((v - e).abs() <= 1e-12 * e, "{v} vs {e}");
        }
    }

    #[test]
    fn full_curve_is_v_shaped_and_bounded() {
        let c = cfg(1);
        let x = sample_disk(60, 0.5, 1).unwrap();
        let y = sample_annulus(80, 2.0, 5.0, 2).unwrap();
        let grid = interior_grid(&c, 40);
        let curve = error_curve(&x, &y, 1, 20, &grid, CurveKind::Full).unwrap();
        let i = curve.min_index().unwrap();
        assert!(curve.values[..=i].windows(2).all(|w| w[1] <= w[0]));
        assert!(curve.values[i..].windows(2).all(|w| w[1] >= w[0]));
        for (g, v) in grid.iter().zip(&curve.values) {
            assert!(*v <= block_bound(*g, &c, 20).unwrap().value);
        }
    }

    #[test]
    fn curve_rejects_unsorted_grid() {
        let (x, y) = probe_sets(&cfg(1), 1, 0).unwrap();
        assert!(error_curve(&x, &y, 1, 5, &[1.2, 1.0], CurveKind::Probe).is_err());
        assert!(error_curve(&x, &y, 1, 5, &[0.4], CurveKind::Probe).is_err());
    }

    #[test]
    fn d1_estimate_near_geometric_mean() {
        let est = estimate_optimal_gamma(&cfg(1), 30, 1, 0).unwrap();
        assert!((est - 1.0).abs() < 1e-2, "{est}");
    }

    #[test]
    fn probe_size_barely_matters() {
        for d in 1..=3 {
            let a = estimate_optimal_gamma(&cfg(d), 30, 1, 3).unwrap();
            let b = estimate_optimal_gamma(&cfg(d), 30, 3, 3).unwrap();
            assert!((a - b).abs() < 1e-2 * 1.5, "d = {d}: {a} vs {b}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(uniform_grid(0.0, 1.0, 1), vec![0.5]);
        assert_eq!(uniform_grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        let g = interior_grid(&cfg(1), 100);
        assert_eq!(g.len(), 100);
        assert!(g[0] > 0.5 && g[99] < 2.0);
    }
}
