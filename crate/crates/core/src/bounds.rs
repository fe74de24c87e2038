//! Error theory for the trapezoidal proxy approximation.
//!
//! Everything here is built from `g(z) = 1/(z − 1)`. For a proxy circle of
//! radius `γ` with `N` points the relative error of `κ̃(x, y)` is exactly
//!
//! ```text
//! ε(x, y) = g((y/γ)^N) + Σ_{j=0}^{d−1} (y − x)^j / j! · dʲ/dxʲ g((γ/x)^N)
//! ```
//!
//! and the derivatives expand as `x^(−j) Σ_{i=1}^{j+1} α_i^(j) g^i((γ/x)^N)`
//! with integer coefficients generated by the recurrence in
//! [`alpha_coefficients`]. The remaining functions bound `|ε|` pointwise and
//! blockwise, locate the radius that minimizes those bounds, pick `N` for a
//! target tolerance, and assemble the constants of the hybrid
//! (analytical + SRRQR) error estimate.
//!
//! Large `N` is routine (a few hundred), so every `g(w^N)` with `|w| > 1` is
//! evaluated as `u/(1 − u)` with `u = w^(−N)` and never overflows.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ComplexPoint, GeometryConfig};
use crate::kernel::powu;
use crate::proxy::trapezoidal_surface;

/// Largest kernel order handled by the exact-error recurrence and the
/// bound constants.
pub const MAX_BOUND_ORDER: u32 = 10;

/// Hard cap on the number of proxy points searched by [`choose_n`].
pub const N_CAP: usize = 10_000;

/// Tolerances below this multiple of machine epsilon are flagged as
/// floating-point limited.
pub const TAU_FLOOR_FACTOR: f64 = 4.0;

fn check_bound_order(d: u32) -> Result<()> {
    if d == 0 {
        return Err(invalid("kernel order d must be at least 1"));
    }
    if d > MAX_BOUND_ORDER {
        return Err(Error::UnsupportedOrder { d, max: MAX_BOUND_ORDER });
    }
    Ok(())
}

/// `g(z) = 1/(z − 1)`.
pub fn g(z: Complex64) -> Result<Complex64> {
    let w = z - 1.0;
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::Pole);
    }
    Ok(w.inv())
}

/// Real `g(t) = 1/(t − 1)`; used with `t > 1` in every bound.
pub fn g_real(t: f64) -> f64 {
    1.0 / (t - 1.0)
}

/// `g(base^n)` without forming `base^n` when it would be large.
pub fn g_of_power(base: Complex64, n: usize) -> Result<Complex64> {
    let exp = exponent(n)?;
    if base.norm() > 1.0 {
        let u = powu(base.inv(), exp);
        let denom = Complex64::new(1.0, 0.0) - u;
        if denom.norm() == 0.0 {
            return Err(Error::Pole);
        }
        Ok(u / denom)
    } else {
        g(powu(base, exp))
    }
}

/// `g(t^n)` for real `t > 0`, overflow safe.
pub fn g_real_power(t: f64, n: usize) -> f64 {
    let n = n as f64;
    if t > 1.0 {
        let u = (-n * t.ln()).exp();
        u / (1.0 - u)
    } else {
        g_real(t.powf(n))
    }
}

fn exponent(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| invalid(format!("N = {n} is out of range")))
}

/// `Σ_j z_j/(z − z_j)` over the trapezoidal nodes of radius `γ`, summed
/// directly. Equals `N·g((z/γ)^N)` away from the nodes.
pub fn ring_sum(z: Complex64, gamma: f64, n: usize) -> Result<Complex64> {
    let surface = trapezoidal_surface(gamma, n)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for &zj in surface.nodes() {
        let diff = z - zj;
        if diff.norm() <= 1e-14 * gamma {
            return Err(Error::Singular(format!("z = {z} is a proxy node")));
        }
        acc += zj / diff;
    }
    Ok(acc)
}

/// Coefficients `α_i^(j)` (`0 <= j < levels`, `1 <= i <= j+1`, stored at
/// `[j][i-1]`) of
///
/// `dʲ/dxʲ g((γ/x)^N) = x^(−j) Σ_i α_i^(j) g^i((γ/x)^N)`.
///
/// Starts from `α_1^(0) = 1` and applies
/// `α_1^(k+1) = (N − k) α_1^(k)`,
/// `α_i^(k+1) = (iN − k) α_i^(k) + N(i − 1) α_{i−1}^(k)`,
/// `α_{k+2}^(k+1) = N(k + 1) α_{k+1}^(k)`.
pub fn alpha_coefficients(n: usize, levels: usize) -> Vec<Vec<f64>> {
    let nf = n as f64;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(levels);
    if levels == 0 {
        return out;
    }
    out.push(vec![1.0]);
    for k in 0..levels.saturating_sub(1) {
        let prev = &out[k];
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        next[0] = (nf - kf) * prev[0];
        for i in 2..=k + 1 {
            let fi = i as f64;
            next[i - 1] = (fi * nf - kf) * prev[i - 1] + nf * (fi - 1.0) * prev[i - 2];
        }
        next[k + 1] = nf * (kf + 1.0) * prev[k];
        out.push(next);
    }
    out
}

/// The exact relative error `ε(x, y)` of the `N`-point trapezoidal proxy
/// approximation of radius `γ`, so that `κ̃ = κ(1 + ε)`.
pub fn exact_rel_error(x: ComplexPoint, y: ComplexPoint, gamma: f64, n: usize, d: u32) -> Result<Complex64> {
    check_bound_order(d)?;
    if x.norm() == 0.0 {
        return Err(invalid("exact error needs x != 0"));
    }
    if !(gamma > 0.0) || n == 0 {
        return Err(invalid(format!("need gamma > 0 and N >= 1, got ({gamma}, {n})")));
    }
    let outer = g_of_power(y / gamma, n)?;
    let inner = g_of_power(Complex64::new(gamma, 0.0) / x, n)?;

    let alphas = alpha_coefficients(n, d as usize);
    let ratio = (y - x) / x;
    let mut ratio_pow = Complex64::new(1.0, 0.0);
    let mut factorial = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, alpha) in alphas.iter().enumerate() {
        if j > 0 {
            ratio_pow *= ratio;
            factorial *= j as f64;
        }
        // Σ_i α_i g^i by Horner in g.
        let mut poly = Complex64::new(0.0, 0.0);
        for &a in alpha.iter().rev() {
            poly = (poly + a) * inner;
        }
        sum += ratio_pow / factorial * poly;
    }
    Ok(outer + sum)
}

/// `c = 1` for `d = 1`, otherwise `2 + 2 Σ_{j=1}^{d−1} [(ratio + 1)N]^j (2d)^(j−1) / j!`.
pub fn c_constant(d: u32, n: usize, ratio: f64) -> f64 {
    if d <= 1 {
        return 1.0;
    }
    let base = (ratio + 1.0) * n as f64;
    let two_d = 2.0 * d as f64;
    let mut sum = 0.0;
    let mut term_pow = 1.0;
    let mut growth = 1.0 / two_d;
    let mut factorial = 1.0;
    for j in 1..d {
        term_pow *= base;
        growth *= two_d;
        factorial *= j as f64;
        sum += term_pow * growth / factorial;
    }
    2.0 + 2.0 * sum
}

/// `N₁ = max{d, ⌈log 3 / log(γ₁/|x|)⌉}`. Saturates to `usize::MAX` as
/// `|x| → γ₁`.
pub fn n1_threshold(abs_x: f64, gamma1: f64, d: u32) -> Result<usize> {
    if !(abs_x > 0.0 && abs_x < gamma1) {
        return Err(invalid(format!("need 0 < |x| < gamma1, got |x| = {abs_x}, gamma1 = {gamma1}")));
    }
    let v = 3f64.ln() / (gamma1 / abs_x).ln();
    if !v.is_finite() || v >= 1e15 {
        return Ok(usize::MAX);
    }
    // Snap values within rounding of an integer before taking the ceiling.
    let snapped = if (v - v.round()).abs() <= 1e-9 * v.max(1.0) { v.round() } else { v.ceil() };
    Ok((snapped as usize).max(d as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Pointwise,
    Block,
}

/// A bound value together with the constant used and whether the
/// sufficient conditions behind it were met.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub gamma: f64,
    pub n: usize,
    pub d: u32,
    pub kind: BoundKind,
    pub value: f64,
    /// `c` for pointwise bounds, `ĉ` for block bounds.
    pub constant: f64,
    pub valid: bool,
}

/// `|ε(x, y)| <= g(|y/γ|^N) + c·g(|γ/x|^N)` with `c = c_constant(d, N, |y/x|)`.
///
/// The flag records `N > N₁`, with `γ` standing in for the inner radius.
pub fn pointwise_bound(x: ComplexPoint, y: ComplexPoint, gamma: f64, n: usize, d: u32) -> Result<BoundReport> {
    check_bound_order(d)?;
    let (ax, ay) = (x.norm(), y.norm());
    if !(ax > 0.0 && ax < gamma && gamma < ay) {
        return Err(invalid(format!("need 0 < |x| < gamma < |y|, got ({ax}, {gamma}, {ay})")));
    }
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    let c = c_constant(d, n, ay / ax);
    let value = g_real_power(ay / gamma, n) + c * g_real_power(gamma / ax, n);
    let valid = n > n1_threshold(ax, gamma, d)?;
    Ok(BoundReport {
        gamma,
        n,
        d,
        kind: BoundKind::Pointwise,
        value,
        constant: c,
        valid,
    })
}

/// Minimizer of `h(γ) = g((outer/γ)^N) + c·g((γ/inner)^N)` on `(inner, outer)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusOptimum {
    pub gamma: f64,
    /// `h` at the minimizer, `(2√(cB) + c + 1)/(B − 1)` with `B = (outer/inner)^N`.
    pub minimum: f64,
}

/// Root in `(inner^N, outer^N)` of `(b − ac)t² + 2ab(c − 1)t + ab(a − bc)`,
/// returned as its `N`-th root.
///
/// Works with `s = t/a` and `B = b/a` so nothing overflows:
/// `s = [(B − 1)√(Bc) − B(c − 1)] / (B − c)`.
pub fn optimal_gamma_with_constant(inner: f64, outer: f64, c: f64, n: usize) -> Result<RadiusOptimum> {
    if !(inner > 0.0 && inner < outer) {
        return Err(invalid(format!("need 0 < inner < outer, got ({inner}, {outer})")));
    }
    if n == 0 || !(c >= 1.0) {
        return Err(invalid(format!("need N >= 1 and c >= 1, got ({n}, {c})")));
    }
    let log_b = n as f64 * (outer / inner).ln();
    if log_b <= c.ln() {
        return Err(Error::NTooSmall {
            n,
            detail: format!("(outer/inner)^N = exp({log_b:.3}) does not exceed c = {c:e}"),
        });
    }
    // Divided through by B so only √B appears.
    let (log_s, minimum) = if log_b < 1400.0 {
        let inv_b = (-log_b).exp();
        let sqrt_b = (0.5 * log_b).exp();
        let s = ((1.0 - inv_b) * sqrt_b * c.sqrt() - (c - 1.0)) / (1.0 - c * inv_b);
        let minimum = (2.0 * (c * inv_b).sqrt() + (c + 1.0) * inv_b) / (1.0 - inv_b);
        (s.ln(), minimum)
    } else {
        // B is astronomically large: s = √(Bc) − (c − 1) + O(1/√B).
        let half = 0.5 * log_b;
        let correction = 1.0 - (c - 1.0) / c.sqrt() * (-half).exp();
        (half + 0.5 * c.ln() + correction.ln(), 2.0 * c.sqrt() * (-half).exp())
    };
    let gamma = inner * (log_s / n as f64).exp();
    Ok(RadiusOptimum {
        gamma: gamma.clamp(inner.next_up(), outer.next_down()),
        minimum,
    })
}

/// Radius minimizing the pointwise bound for the pair `(x, y)`.
pub fn pointwise_optimal_gamma(x: ComplexPoint, y: ComplexPoint, n: usize, d: u32) -> Result<RadiusOptimum> {
    check_bound_order(d)?;
    let (ax, ay) = (x.norm(), y.norm());
    if !(ax > 0.0 && ax < ay) {
        return Err(invalid(format!("need 0 < |x| < |y|, got ({ax}, {ay})")));
    }
    optimal_gamma_with_constant(ax, ay, c_constant(d, n, ay / ax), n)
}

/// `g((γ/γ₁)^N) + g((γ₂/γ)^N)`, the Frobenius relative error bound for `d = 1`.
pub fn block_bound_d1(gamma: f64, gamma1: f64, gamma2: f64, n: usize) -> Result<f64> {
    if !(gamma1 > 0.0 && gamma1 < gamma && gamma < gamma2) {
        return Err(invalid(format!("need gamma1 < gamma < gamma2, got ({gamma1}, {gamma}, {gamma2})")));
    }
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    Ok(g_real_power(gamma / gamma1, n) + g_real_power(gamma2 / gamma, n))
}

/// `√(γ₁γ₂)`, the minimizer of [`block_bound_d1`] for every `N`.
pub fn optimal_gamma_d1(gamma1: f64, gamma2: f64) -> f64 {
    (gamma1 * gamma2).sqrt()
}

/// `2·g((γ₂/γ₁)^(N/2))`, the value of [`block_bound_d1`] at its minimizer.
pub fn min_block_bound_d1(gamma1: f64, gamma2: f64, n: usize) -> f64 {
    let u = (-(n as f64) * 0.5 * (gamma2 / gamma1).ln()).exp();
    2.0 * u / (1.0 - u)
}

/// `ĉ`: [`c_constant`] with the ratio `γ₃/γ₁`.
pub fn c_hat(cfg: &GeometryConfig, n: usize) -> f64 {
    c_constant(cfg.d, n, cfg.gamma3 / cfg.gamma1)
}

/// Frobenius relative error bound of the analytical compression,
/// `g((γ₂/γ)^N) + ĉ·g((γ/γ₁)^N)`; delegates to [`block_bound_d1`] for `d = 1`.
///
/// For `d >= 2` the flag requires `ĉ < (γ₂/γ₁)^N` and `N > N₁` evaluated at
/// the worst inner point `|x| = γ₁`.
pub fn block_bound(gamma: f64, cfg: &GeometryConfig, n: usize) -> Result<BoundReport> {
    check_bound_order(cfg.d)?;
    if cfg.d == 1 {
        return Ok(BoundReport {
            gamma,
            n,
            d: 1,
            kind: BoundKind::Block,
            value: block_bound_d1(gamma, cfg.gamma1, cfg.gamma2, n)?,
            constant: 1.0,
            valid: true,
        });
    }
    if !cfg.separates(gamma) {
        return Err(invalid(format!(
            "need gamma1 < gamma < gamma2, got ({}, {gamma}, {})",
            cfg.gamma1, cfg.gamma2
        )));
    }
    if n == 0 {
        return Err(invalid("N must be positive"));
    }
    let chat = c_hat(cfg, n);
    let value = g_real_power(cfg.gamma2 / gamma, n) + chat * g_real_power(gamma / cfg.gamma1, n);
    let separation_ok = chat.ln() < n as f64 * (cfg.gamma2 / cfg.gamma1).ln();
    let n1_ok = n > n1_threshold(cfg.gamma1, gamma, cfg.d)?;
    Ok(BoundReport {
        gamma,
        n,
        d: cfg.d,
        kind: BoundKind::Block,
        value,
        constant: chat,
        valid: separation_ok && n1_ok,
    })
}

/// Closed-form minimizer of [`block_bound`] over `γ ∈ (γ₁, γ₂)`.
pub fn optimal_gamma_block(cfg: &GeometryConfig, n: usize) -> Result<f64> {
    check_bound_order(cfg.d)?;
    if cfg.d == 1 {
        return Ok(optimal_gamma_d1(cfg.gamma1, cfg.gamma2));
    }
    Ok(optimal_gamma_with_constant(cfg.gamma1, cfg.gamma2, c_hat(cfg, n), n)?.gamma)
}

/// Result of [`choose_n`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NChoice {
    pub n: usize,
    /// Radius at which the bound was evaluated.
    pub gamma: f64,
    /// Bound value at `(n, gamma)`.
    pub bound: f64,
    /// `τ₁` is so close to machine precision that the measured error will
    /// sit on the rounding floor rather than at `τ₁`.
    pub below_floor: bool,
}

/// Smallest `N` whose minimized block bound is at most `τ₁`.
///
/// For `d = 1` this is the smallest `N` with `2g((γ₂/γ₁)^(N/2)) <= τ₁`. For
/// `d >= 2` the search walks up from `N = d + 1` and accepts the first `N`
/// whose bound at [`optimal_gamma_block`] is valid and small enough.
pub fn choose_n(cfg: &GeometryConfig, tau1: f64) -> Result<NChoice> {
    check_bound_order(cfg.d)?;
    if !(tau1 > 0.0 && tau1 < 1.0) {
        return Err(invalid(format!("tau1 must lie in (0, 1), got {tau1}")));
    }
    let below_floor = tau1 < TAU_FLOOR_FACTOR * f64::EPSILON;
    let (g1, g2) = (cfg.gamma1, cfg.gamma2);
    if cfg.d == 1 {
        let gamma = optimal_gamma_d1(g1, g2);
        let estimate = 2.0 * (1.0 + 2.0 / tau1).ln() / (g2 / g1).ln();
        let mut n = (estimate.floor() as usize).saturating_sub(2).max(1);
        while n <= N_CAP {
            let bound = min_block_bound_d1(g1, g2, n);
            if bound <= tau1 {
                return Ok(NChoice { n, gamma, bound, below_floor });
            }
            n += 1;
        }
        return Err(Error::Unreachable { tau: tau1, cap: N_CAP });
    }
    for n in cfg.d as usize + 1..=N_CAP {
        let gamma = match optimal_gamma_block(cfg, n) {
            Ok(gamma) => gamma,
            Err(Error::NTooSmall { .. }) => continue,
            Err(e) => return Err(e),
        };
        let report = block_bound(gamma, cfg, n)?;
        if report.valid && report.value <= tau1 {
            return Ok(NChoice {
                n,
                gamma,
                bound: report.value,
                below_floor,
            });
        }
    }
    Err(Error::Unreachable { tau: tau1, cap: N_CAP })
}

/// Constants of the hybrid compression error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridBoundReport {
    pub s1: f64,
    pub s2: f64,
    pub s2_tilde: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// `s₁τ₁ + s₂τ₂`, bounding `‖K − U K^(X̂,Y)‖_F / ‖K‖_F`.
    pub bound_spr: f64,
    /// `s₁τ₁ + s̃₂τ₂`, bounding the two-sided skeleton error.
    pub bound_skel: f64,
    /// Whether `τ₁` came from a bound whose sufficient conditions held.
    pub valid: bool,
}

/// `s₁ = 1 + √(r + (m − r) r e²) · √(1 − (m − r)(γ₂ − γ₁)^{2d} / (m (γ₁ + γ₃)^{2d}))`,
/// `s₂ = γ*(γ₁ + γ₃)^d / ((γ₂ − γ*)(γ* − γ₁)^d)`, `s̃₂ = s₂ + s₁ − 1`.
pub fn hybrid_bound(
    m: usize,
    r: usize,
    e: f64,
    cfg: &GeometryConfig,
    gamma_star: f64,
    tau1: f64,
    tau2: f64,
) -> Result<HybridBoundReport> {
    if !(r >= 1 && r <= m) {
        return Err(invalid(format!("need 1 <= r <= m, got r = {r}, m = {m}")));
    }
    if !cfg.separates(gamma_star) {
        return Err(invalid(format!(
            "gamma* = {gamma_star} outside ({}, {})",
            cfg.gamma1, cfg.gamma2
        )));
    }
    let (g1, g2, g3) = (cfg.gamma1, cfg.gamma2, cfg.gamma3);
    let d = cfg.d as i32;
    let (mf, rf) = (m as f64, r as f64);
    let basis_norm = (rf + (mf - rf) * rf * e * e).sqrt();
    let mass_ratio = (mf - rf) * ((g2 - g1) / (g1 + g3)).powi(2 * d) / mf;
    let s1 = 1.0 + basis_norm * (1.0 - mass_ratio).max(0.0).sqrt();
    let s2 = gamma_star * (g1 + g3).powi(d) / ((g2 - gamma_star) * (gamma_star - g1).powi(d));
    let s2_tilde = s2 + s1 - 1.0;
    Ok(HybridBoundReport {
        s1,
        s2,
        s2_tilde,
        tau1,
        tau2,
        bound_spr: s1 * tau1 + s2 * tau2,
        bound_skel: s1 * tau1 + s2_tilde * tau2,
        valid: true,
    })
}
