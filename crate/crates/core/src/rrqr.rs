//! Column-pivoted QR, strong rank-revealing QR and interpolative
//! decompositions of complex matrices.
//!
//! The factorizations work on column storage so Householder updates touch
//! contiguous memory. Pivot ties go to the lowest original column index.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;

/// Default bound on the interpolation coefficients.
pub const DEFAULT_F: f64 = 2.0;

/// Jacobi sweeps allowed before [`singular_values`] gives up.
pub const MAX_JACOBI_SWEEPS: usize = 60;

const PAR_UPDATE_THRESHOLD: usize = 1 << 15;

type Column = Vec<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn columns_of(m: &ComplexMatrix) -> Vec<Column> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `H = I − β v vᴴ` acting on rows `start..`.
struct Reflector {
    start: usize,
    v: Column,
    beta: f64,
}

impl Reflector {
    /// Reflector mapping `x` to `α e₁` with `α = −phase(x₀)‖x‖`.
    fn new(start: usize, x: &[Complex64]) -> (Self, Complex64) {
        let norm = norm_sqr(x).sqrt();
        if norm == 0.0 {
            let id = Self { start, v: vec![zero(); x.len()], beta: 0.0 };
            return (id, zero());
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v = x.to_vec();
        v[0] -= alpha;
        let beta = 1.0 / (norm * (norm + x0.norm()));
        (Self { start, v, beta }, alpha)
    }

    fn apply(&self, col: &mut [Complex64]) {
        if self.beta == 0.0 {
            return;
        }
        let tail = &mut col[self.start..];
        let w: Complex64 = self.v.iter().zip(tail.iter()).map(|(v, c)| v.conj() * c).sum();
        let s = w * self.beta;
        for (c, v) in tail.iter_mut().zip(&self.v) {
            *c -= s * v;
        }
    }
}

/// Householder QR of `cols` in place. With `pivot`, column `k` is chosen as
/// the trailing column of largest remaining norm.
struct Householder {
    rows: usize,
    cols: Vec<Column>,
    perm: Vec<usize>,
    reflectors: Vec<Reflector>,
}

impl Householder {
    fn factor(rows: usize, cols: Vec<Column>, perm: Vec<usize>, pivot: bool) -> Self {
        Self::factor_with(rows, cols, perm, pivot, PAR_UPDATE_THRESHOLD)
    }

    fn factor_with(rows: usize, mut cols: Vec<Column>, mut perm: Vec<usize>, pivot: bool, par_threshold: usize) -> Self {
        let n = cols.len();
        let p = rows.min(n);
        let mut reflectors = Vec::with_capacity(p);
        for k in 0..p {
            if pivot {
                let mut best = k;
                let mut best_norm = -1.0;
                for j in k..n {
                    let nj = norm_sqr(&cols[j][k..]);
                    if nj > best_norm || (nj == best_norm && perm[j] < perm[best]) {
                        best = j;
                        best_norm = nj;
                    }
                }
                cols.swap(k, best);
                perm.swap(k, best);
            }
            let (h, alpha) = Reflector::new(k, &cols[k][k..]);
            let trailing = &mut cols[k + 1..];
            if trailing.len() * (rows - k) >= par_threshold {
                trailing.par_iter_mut().for_each(|c| h.apply(c));
            } else {
                trailing.iter_mut().for_each(|c| h.apply(c));
            }
            cols[k][k] = alpha;
            cols[k][k + 1..].iter_mut().for_each(|z| *z = zero());
            reflectors.push(h);
        }
        Self { rows, cols, perm, reflectors }
    }

    fn rank_limit(&self) -> usize {
        self.rows.min(self.cols.len())
    }

    fn r_entry(&self, i: usize, j: usize) -> Complex64 {
        if i <= j {
            self.cols[j][i]
        } else {
            zero()
        }
    }

    fn r_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rank_limit(), self.cols.len(), |i, j| self.r_entry(i, j))
    }

    fn q_matrix(&self) -> ComplexMatrix {
        let p = self.rank_limit();
        let mut q = ComplexMatrix::zeros(self.rows, p);
        for j in 0..p {
            let mut e = vec![zero(); self.rows];
            e[j] = Complex64::new(1.0, 0.0);
            for h in self.reflectors.iter().rev() {
                h.apply(&mut e);
            }
            for (i, z) in e.into_iter().enumerate() {
                q[(i, j)] = z;
            }
        }
        q
    }

    /// `‖R[k.., k..]‖_F` for every `k` in `0..=p`.
    fn trailing_masses(&self) -> Vec<f64> {
        let p = self.rank_limit();
        let n = self.cols.len();
        let mut acc = vec![0.0; p + 1];
        for i in (0..p).rev() {
            let row: f64 = (i..n).map(|j| self.cols[j][i].norm_sqr()).sum();
            acc[i] = acc[i + 1] + row;
        }
        acc.into_iter().map(f64::sqrt).collect()
    }

    /// `R₁₁⁻¹` for the leading `k×k` block.
    fn r11_inverse(&self, k: usize) -> Result<ComplexMatrix> {
        let mut inv = ComplexMatrix::zeros(k, k);
        for i in (0..k).rev() {
            let diag = self.cols[i][i];
            if diag.norm() == 0.0 {
                return Err(Error::Singular(format!("R11 has a zero pivot at {i}")));
            }
            inv[(i, i)] = diag.inv();
            for j in i + 1..k {
                let mut s = zero();
                for l in i + 1..=j {
                    s += self.cols[l][i] * inv[(l, j)];
                }
                inv[(i, j)] = -s / diag;
            }
        }
        Ok(inv)
    }

    /// `R₁₁⁻¹R₁₂` by back substitution, `k × (n − k)`.
    fn interpolation_block(&self, k: usize) -> Result<ComplexMatrix> {
        let n = self.cols.len();
        let mut t = ComplexMatrix::zeros(k, n - k);
        for (c, col) in self.cols[k..].iter().enumerate() {
            for i in (0..k).rev() {
                let diag = self.cols[i][i];
                if diag.norm() == 0.0 {
                    return Err(Error::Singular(format!("R11 has a zero pivot at {i}")));
                }
                let mut s = col[i];
                for l in i + 1..k {
                    s -= self.cols[l][i] * t[(l, c)];
                }
                t[(i, c)] = s / diag;
            }
        }
        Ok(t)
    }
}

/// `M P = Q R` from [`cpqr`].
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// `m × p` with orthonormal columns, `p = min(m, n)`.
    pub q: ComplexMatrix,
    /// `p × n` upper trapezoidal with non-increasing `|R_kk|`.
    pub r: ComplexMatrix,
    /// Column `k` of `M P` is column `perm[k]` of `M`.
    pub perm: Vec<usize>,
}

impl PivotedQr {
    /// `M P` as an explicit matrix.
    pub fn permuted(&self, m: &ComplexMatrix) -> ComplexMatrix {
        m.select_cols(&self.perm)
    }
}

fn check_input(m: &ComplexMatrix) -> Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptySet(format!("{}x{} matrix", m.rows(), m.cols())));
    }
    if !m.is_finite() {
        return Err(invalid("matrix has non-finite entries"));
    }
    Ok(())
}

/// Householder QR with column pivoting.
pub fn cpqr(m: &ComplexMatrix) -> Result<PivotedQr> {
    check_input(m)?;
    let h = Householder::factor(m.rows(), columns_of(m), (0..m.cols()).collect(), true);
    Ok(PivotedQr {
        q: h.q_matrix(),
        r: h.r_matrix(),
        perm: h.perm,
    })
}

/// Output of [`srrqr`].
#[derive(Debug, Clone)]
pub struct Srrqr {
    pub rank: usize,
    pub perm: Vec<usize>,
    /// Upper trapezoidal factor of `M P`.
    pub r: ComplexMatrix,
    /// `R₁₁⁻¹R₁₂`, every entry at most `f` in magnitude.
    pub coeffs: ComplexMatrix,
    /// `‖R₂₂‖_F`, the truncation residual.
    pub residual: f64,
    pub swaps: usize,
}

/// Strong rank-revealing QR.
///
/// The rank is the smallest `k >= 1` whose pivoted trailing block has
/// Frobenius mass at most `τ₂‖M‖_F`. Columns are then exchanged between the
/// leading and trailing blocks while some
/// `√(|(R₁₁⁻¹R₁₂)_ij|² + (‖R₂₂ e_j‖ · ‖e_iᵀR₁₁⁻¹‖)²)` exceeds `f`. If the
/// exchanges push `‖R₂₂‖_F` back above the tolerance, `k` grows by one and
/// the exchanges continue.
pub fn srrqr(m: &ComplexMatrix, tau2: f64, f: f64) -> Result<Srrqr> {
    check_input(m)?;
    if !(tau2 > 0.0 && tau2 < 1.0) {
        return Err(invalid(format!("tau2 must lie in (0, 1), got {tau2}")));
    }
    if !(f > 1.0) {
        return Err(invalid(format!("f must exceed 1, got {f}")));
    }
    let total = m.fro_norm();
    if total == 0.0 {
        return Err(invalid("cannot factor the zero matrix"));
    }
    let (rows, n) = m.shape();
    let threshold = tau2 * total;
    let mut h = Householder::factor(rows, columns_of(m), (0..n).collect(), true);
    let p = h.rank_limit();
    let masses = h.trailing_masses();
    let mut k = (1..=p).find(|&k| masses[k] <= threshold).unwrap_or(p);

    let cap = rows.saturating_mul(n).max(1);
    let mut swaps = 0;
    loop {
        let coeffs = h.interpolation_block(k)?;
        if let Some((i, j)) = worst_pair(&h, &coeffs, k, f)? {
            swaps += 1;
            if swaps > cap {
                return Err(Error::NoConvergence(format!("strong pivoting exceeded {cap} swaps")));
            }
            let mut perm = h.perm.clone();
            perm.swap(i, k + j);
            let cols = perm.iter().map(|&c| m.column(c)).collect();
            h = Householder::factor(rows, cols, perm, false);
            continue;
        }
        let residual = h.trailing_masses()[k];
        if residual > threshold && k < p {
            k += 1;
            continue;
        }
        return Ok(Srrqr {
            rank: k,
            r: h.r_matrix(),
            perm: h.perm,
            coeffs,
            residual,
            swaps,
        });
    }
}

/// Exchange candidate `(i, j)` violating the growth bound, if any.
fn worst_pair(h: &Householder, coeffs: &ComplexMatrix, k: usize, f: f64) -> Result<Option<(usize, usize)>> {
    let n = h.cols.len();
    if k == n {
        return Ok(None);
    }
    let inv = h.r11_inverse(k)?;
    let inv_row: Vec<f64> = (0..k).map(|i| norm_sqr(inv.row(i))).collect();
    let gamma: Vec<f64> = h.cols[k..]
        .iter()
        .map(|c| if k < h.rows { norm_sqr(&c[k..]) } else { 0.0 })
        .collect();
    let mut best = None;
    let mut best_val = f * f;
    for i in 0..k {
        for (j, g) in gamma.iter().enumerate() {
            let v = coeffs[(i, j)].norm_sqr() + g * inv_row[i];
            if v > best_val {
                best_val = v;
                best = Some((i, j));
            }
        }
    }
    Ok(best)
}

/// An interpolative decomposition `M ≈ U·M[J, :]` (rows) or
/// `M ≈ M[:, J]·Vᵀ` (columns), with `U` or `V` equal to `P [I; E]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolativeFactor {
    /// `J`: the selected rows or columns, in pivot order.
    pub selected: Vec<usize>,
    /// Pivot order of all rows or columns; `perm[..k] == selected`.
    pub perm: Vec<usize>,
    /// `E`, of size `(len − k) × k`.
    pub coeffs: ComplexMatrix,
    pub f_cap: f64,
}

impl InterpolativeFactor {
    pub fn rank(&self) -> usize {
        self.selected.len()
    }

    /// Number of rows of `U` (or `V`).
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.max_abs()
    }

    /// `P [I; E]` as a dense `len × k` matrix.
    pub fn basis(&self) -> ComplexMatrix {
        self.expand_rows(&ComplexMatrix::identity(self.rank()))
            .expect("identity has k rows")
    }

    /// `U · core` for a `k × c` core.
    pub fn expand_rows(&self, core: &ComplexMatrix) -> Result<ComplexMatrix> {
        let k = self.rank();
        if core.rows() != k {
            return Err(Error::ShapeMismatch {
                left: (self.len(), k),
                right: core.shape(),
            });
        }
        let mixed = self.coeffs.matmul(core)?;
        let mut out = ComplexMatrix::zeros(self.len(), core.cols());
        for (p, &row) in self.perm.iter().enumerate() {
            let src = if p < k { core.row(p) } else { mixed.row(p - k) };
            out.row_mut(row).copy_from_slice(src);
        }
        Ok(out)
    }

    /// `core · Vᵀ` for an `r × k` core.
    pub fn expand_cols(&self, core: &ComplexMatrix) -> Result<ComplexMatrix> {
        let k = self.rank();
        if core.cols() != k {
            return Err(Error::ShapeMismatch {
                left: core.shape(),
                right: (k, self.len()),
            });
        }
        let mixed = core.matmul(&self.coeffs.transpose())?;
        let mut out = ComplexMatrix::zeros(core.rows(), self.len());
        for i in 0..core.rows() {
            for (p, &col) in self.perm.iter().enumerate() {
                out[(i, col)] = if p < k { core[(i, p)] } else { mixed[(i, p - k)] };
            }
        }
        Ok(out)
    }
}

/// Column interpolative decomposition `M ≈ M[:, J] Vᵀ`, `V = P [I; F]`.
pub fn col_id(m: &ComplexMatrix, tau2: f64, f: f64) -> Result<InterpolativeFactor> {
    let s = srrqr(m, tau2, f)?;
    Ok(InterpolativeFactor {
        selected: s.perm[..s.rank].to_vec(),
        perm: s.perm,
        coeffs: s.coeffs.transpose(),
        f_cap: f,
    })
}

/// Row interpolative decomposition `M ≈ U M[J, :]`, `U = P [I; E]`.
pub fn row_id(m: &ComplexMatrix, tau2: f64, f: f64) -> Result<InterpolativeFactor> {
    let s = srrqr(&m.conj_transpose(), tau2, f)?;
    Ok(InterpolativeFactor {
        selected: s.perm[..s.rank].to_vec(),
        perm: s.perm,
        coeffs: s.coeffs.conj_transpose(),
        f_cap: f,
    })
}

/// Singular values in non-increasing order.
///
/// Pivoted QR reduces the long side first; one-sided Jacobi then
/// orthogonalizes the rows of the triangular factor.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let tall = if m.rows() >= m.cols() { m.clone() } else { m.conj_transpose() };
    let h = Householder::factor(tall.rows(), columns_of(&tall), (0..tall.cols()).collect(), true);
    let p = h.rank_limit();
    let mut cols: Vec<Column> = (0..p)
        .map(|i| (0..p).map(|j| h.r_entry(i, j).conj()).collect())
        .collect();
    jacobi(&mut cols)?;
    let mut sv: Vec<f64> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn jacobi(cols: &mut [Column]) -> Result<()> {
    let n = cols.len();
    for _ in 0..MAX_JACOBI_SWEEPS {
        // Squared norms are refreshed every sweep and updated in closed form
        // after each rotation.
        let mut norms: Vec<f64> = cols.iter().map(|c| norm_sqr(c)).collect();
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                let (lo, hi) = cols.split_at_mut(q);
                let (a, b) = (&mut lo[p], &mut hi[0]);
                let gamma: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (sp, spc) = (phase * s, phase.conj() * s);
                for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                    let (x0, y0) = (*x, *y);
                    *x = x0 * c - y0 * spc;
                    *y = x0 * sp + y0 * c;
                }
                norms[p] = (alpha - t * g).max(0.0);
                norms[q] = beta + t * g;
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence(format!("Jacobi SVD after {MAX_JACOBI_SWEEPS} sweeps")))
}

/// Smallest `k` with `√(Σ_{i>k} σ_i²) <= tol·√(Σ σ_i²)`.
pub fn rank_from_singular_values(sv: &[f64], tol: f64) -> usize {
    let total: f64 = sv.iter().map(|s| s * s).sum();
    let limit = tol * tol * total;
    let mut tail = 0.0;
    let mut k = sv.len();
    while k > 0 {
        let next = tail + sv[k - 1] * sv[k - 1];
        if next > limit {
            break;
        }
        tail = next;
        k -= 1;
    }
    k
}
