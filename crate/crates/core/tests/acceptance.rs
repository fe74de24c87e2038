//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! reports a line whether it passes or not.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use proxypoint::bounds::{
    block_bound, block_bound_d1, choose_n, exact_rel_error, g_of_power, optimal_gamma_d1,
    optimal_gamma_with_constant,
};
use proxypoint::bounds::ring_sum;
use proxypoint::estimator::{error_curve, estimate_optimal_gamma, interior_grid, CurveKind};
use proxypoint::geometry::{rectangle_mesh_instance, sample_annulus, sample_disk};
use proxypoint::hybrid::{hybrid_compress, measure_errors, skeletonize};
use proxypoint::kernel::{kernel_matrix, rel_fro_error};
use proxypoint::proxy::{analytical_compress, trapezoidal_surface};
use proxypoint::rrqr::{col_id, row_id};
use proxypoint::{Complex64, ComplexMatrix, GeometryConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = f64::EPSILON;

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check { ok, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

/// Trapezoidal quadrature of the Cauchy integral written out by hand.
fn brute_kappa_tilde(x: Complex64, y: Complex64, gamma: f64, n: usize, d: i32) -> Complex64 {
    (1..=n)
        .map(|j| {
            let z = polar(gamma, 2.0 * PI * j as f64 / n as f64);
            (x - z).powi(-d) * z / ((y - z) * n as f64)
        })
        .sum()
}

fn ring_sum_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=64usize);
        let gamma = rng.gen_range(0.1..10.0);
        let ratio = if rng.gen_bool(0.5) { rng.gen_range(0.0..0.9) } else { rng.gen_range(1.1..4.0) };
        let z = polar(ratio * gamma, rng.gen_range(0.0..2.0 * PI));
        let lhs = ring_sum(z, gamma, n).unwrap();
        let rhs = g_of_power(z / gamma, n).unwrap() * n as f64;
        worst = worst.max((lhs - rhs).norm() / (1e-12 * n as f64));
    }
    check(worst <= 1.0, format!("max |lhs - rhs| / (1e-12 N) = {worst:.3e}"))
}

fn exact_error_formula() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for d in 1..=4u32 {
        for _ in 0..200 {
            let g1 = rng.gen_range(0.2..1.0);
            let g2 = g1 * rng.gen_range(2.0..4.0);
            let g3 = g2 * rng.gen_range(1.1..2.0);
            let gamma = g1 + (g2 - g1) * rng.gen_range(0.25..0.75);
            let n = rng.gen_range(1..=60usize);
            let x = polar(g1 * rng.gen_range(0.05f64..1.0).sqrt(), rng.gen_range(0.0..2.0 * PI));
            let y = polar(rng.gen_range(g2..g3), rng.gen_range(0.0..2.0 * PI));
            let kt = brute_kappa_tilde(x, y, gamma, n, d as i32);
            let k = (x - y).powi(-(d as i32));
            let eps = exact_rel_error(x, y, gamma, n, d).unwrap();
            worst = worst.max((kt - k * (1.0 + eps)).norm() / k.norm());
        }
    }
    check(worst <= 1e-10, format!("max relative residual {worst:.3e}"))
}

fn example1_instance() -> (proxypoint::PointSet, proxypoint::PointSet, GeometryConfig) {
    let cfg = GeometryConfig::new(0.5, 2.0, 5.0, 1).unwrap();
    (
        sample_disk(200, 0.5, 1).unwrap(),
        sample_annulus(300, 2.0, 5.0, 2).unwrap(),
        cfg,
    )
}

fn full_error(x: &proxypoint::PointSet, y: &proxypoint::PointSet, d: u32, gamma: f64, n: usize) -> f64 {
    let k = kernel_matrix(x, y, d).unwrap();
    let f = analytical_compress(x, y, &trapezoidal_surface(gamma, n).unwrap(), d).unwrap();
    rel_fro_error(&k, &f.to_dense()).unwrap()
}

fn example1() -> Check {
    let (x, y, cfg) = example1_instance();
    let grid = interior_grid(&cfg, 100);
    let curve = error_curve(&x, &y, 1, 20, &grid, CurveKind::Full).unwrap();
    let bounded = grid
        .iter()
        .zip(&curve.values)
        .all(|(g, e)| *e <= block_bound_d1(*g, 0.5, 2.0, 20).unwrap());
    let argmin = curve.argmin().unwrap();
    let at_one = full_error(&x, &y, 1, 1.0, 20);
    let bound_one = block_bound_d1(1.0, 0.5, 2.0, 20).unwrap();
    check(
        bounded && (argmin - 1.0).abs() <= 0.15 && at_one <= 1.91e-6 && bound_one <= 1.91e-6,
        format!("(a) bounded on grid: {bounded}; (b) argmin {argmin:.4}; (c) E_N(1) = {at_one:.3e}, bound {bound_one:.4e}"),
    )
}

fn decay_rate() -> Check {
    let (x, y, _) = example1_instance();
    let pts: Vec<(f64, f64)> = (5..=40)
        .map(|n| (n as f64, full_error(&x, &y, 1, 1.0, n).log2()))
        .collect();
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    check((-1.15..=-0.85).contains(&slope), format!("slope of log2 E_N = {slope:.4}"))
}

fn choose_n_table() -> Check {
    let cfg = GeometryConfig::new(0.3, 0.45, 1.2, 1).unwrap();
    let pick = choose_n(&cfg, 10.0 * EPS).unwrap();
    check((167..=172).contains(&pick.n), format!("N = {}", pick.n))
}

fn closed_form_radius() -> Check {
    let g = optimal_gamma_d1(0.3, 0.45);
    let collapsed = optimal_gamma_with_constant(0.3, 0.45, 1.0, 169).unwrap().gamma;
    let exact = (0.3f64 * 0.45).sqrt();
    check(
        format!("{g:.4}") == "0.3674" && (collapsed - exact).abs() <= 1e-12,
        format!("sqrt(g1 g2) = {g:.6}; c = 1 minimizer off by {:.1e}", (collapsed - exact).abs()),
    )
}

fn estimator_fidelity() -> Check {
    let mut worst = 0.0f64;
    for d in 1..=3u32 {
        let cfg = GeometryConfig::new(0.5, 2.0, 5.0, d).unwrap();
        let grid = interior_grid(&cfg, 200);
        for seed in 0..10u64 {
            let x = sample_disk(400, 0.5, 10 * seed + 3).unwrap();
            let y = sample_annulus(400, 2.0, 5.0, 10 * seed + 4).unwrap();
            let full = error_curve(&x, &y, d, 30, &grid, CurveKind::Full).unwrap().argmin().unwrap();
            let est = estimate_optimal_gamma(&cfg, 30, 1, seed).unwrap();
            worst = worst.max((est - full).abs() / 1.5);
        }
    }
    check(worst <= 0.02, format!("max |est - argmin| / (g2 - g1) = {worst:.4}"))
}

/// The SRRQR tolerance used for the mesh instance.
const MESH_TAU2: f64 = 3e-8;

fn mesh_example() -> Check {
    let table = [(1u32, 169usize, 78usize), (2, 179, 88), (3, 187, 93), (4, 193, 99)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, n, rank) in table {
        let (x, y, cfg) = rectangle_mesh_instance(d).unwrap();
        let gamma = estimate_optimal_gamma(&cfg, n, 1, 0).unwrap();
        let r = hybrid_compress(&x, &y, &cfg, gamma, n, MESH_TAU2, 2.0).unwrap();
        let rep = measure_errors(&x, &y, &cfg, gamma, n, &r).unwrap();
        ok &= rep.r_n <= 1e-12 && r.rank.abs_diff(rank) <= 12;
        parts.push(format!("d={d}: |X|={} |Y|={} gamma={gamma:.4} rank={} R_N={:.2e}", x.len(), y.len(), r.rank, rep.r_n));
    }
    check(ok, parts.join("; "))
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// `A diag(σ) B` with orthonormal-ish random factors and `σ_i = decay^i`.
fn graded(rows: usize, cols: usize, decay: f64, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let k = rows.min(cols);
    let mut a = ComplexMatrix::from_fn(rows, k, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let b = ComplexMatrix::from_fn(k, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    for j in 0..k {
        let s = decay.powi(j as i32);
        for i in 0..rows {
            a[(i, j)] *= s;
        }
    }
    a.matmul(&b).unwrap()
}

fn srrqr_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let f = 2.0;
    let (mut max_e, mut worst_res, mut worst_opt) = (0.0f64, 0.0f64, 0.0f64);
    for case in 0..100 {
        let small = case % 2 == 0;
        let (rows, cols, decay, tau2) = if small {
            (rng.gen_range(6..=12), rng.gen_range(6..=12), 0.1, 10f64.powf(rng.gen_range(-4.0..-2.0)))
        } else {
            (rng.gen_range(10..=200), rng.gen_range(5..=60), rng.gen_range(0.3..0.9), 10f64.powf(rng.gen_range(-12.0..-4.0)))
        };
        let m = graded(rows, cols, decay, &mut rng);
        let rows_side = case % 4 < 2;
        let (id, resid) = if rows_side {
            let id = row_id(&m, tau2, f).unwrap();
            let approx = id.expand_rows(&m.select_rows(&id.selected)).unwrap();
            let r = rel_fro_error(&m, &approx).unwrap();
            (id, r)
        } else {
            let id = col_id(&m, tau2, f).unwrap();
            let approx = id.expand_cols(&m.select_cols(&id.selected)).unwrap();
            let r = rel_fro_error(&m, &approx).unwrap();
            (id, r)
        };
        max_e = max_e.max(id.max_coeff());
        worst_res = worst_res.max(resid / tau2);
        if small {
            let k = id.rank();
            let sv = to_nalgebra(&m).singular_values();
            let mut sorted: Vec<f64> = sv.iter().copied().collect();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let opt = sorted[k..].iter().map(|s| s * s).sum::<f64>().sqrt() / m.fro_norm();
            let len = if rows_side { rows } else { cols } as f64;
            let factor = (1.0 + k as f64 * (len - k as f64) * f * f).sqrt();
            worst_opt = worst_opt.max(resid / (factor * opt));
        }
    }
    check(
        max_e <= f && worst_res <= 1.05 && worst_opt <= 1.0,
        format!("max|E| = {max_e:.4}; max residual/tau2 = {worst_res:.4}; max residual/(factor*optimum) = {worst_opt:.4}"),
    )
}

fn hybrid_containment() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let (mut accepted, mut tries) = (0, 0);
    let (mut worst_spr, mut worst_skel) = (0.0f64, 0.0f64);
    while accepted < 100 && tries < 2000 {
        tries += 1;
        let d = rng.gen_range(1..=4u32);
        let g1 = rng.gen_range(0.3..1.0);
        let g2 = g1 * rng.gen_range(2.0..4.0);
        let g3 = g2 * rng.gen_range(1.2..3.0);
        let cfg = GeometryConfig::new(g1, g2, g3, d).unwrap();
        let n = rng.gen_range(10..=60usize);
        let gamma = g1 + (g2 - g1) * rng.gen_range(0.3..0.7);
        let tau2 = 10f64.powf(rng.gen_range(-12.0..-4.0));
        if !block_bound(gamma, &cfg, n).unwrap().valid {
            continue;
        }
        let seed = rng.gen::<u64>();
        let x = sample_disk(rng.gen_range(20..=80), g1, seed).unwrap();
        let y = sample_annulus(rng.gen_range(20..=80), g2, g3, seed ^ 1).unwrap();
        let r = skeletonize(&x, &y, &cfg, gamma, n, tau2, 2.0).unwrap();
        if !r.bound.valid {
            continue;
        }
        accepted += 1;
        let rep = measure_errors(&x, &y, &cfg, gamma, n, &r).unwrap();
        worst_spr = worst_spr.max(rep.r_n / r.bound.bound_spr);
        worst_skel = worst_skel.max(rep.skeleton.unwrap() / r.bound.bound_skel);
    }
    check(
        accepted == 100 && worst_spr <= 1.0 && worst_skel <= 1.0,
        format!("{accepted} valid instances; max R_N / bound = {worst_spr:.3e}; max skeleton / bound = {worst_skel:.3e}"),
    )
}

fn y_independence() -> Check {
    let cfg = GeometryConfig::new(0.5, 2.0, 5.0, 2).unwrap();
    let x = sample_disk(150, 0.5, 5).unwrap();
    let y1 = sample_annulus(100, 2.0, 5.0, 6).unwrap();
    let y2 = sample_annulus(250, 2.0, 5.0, 7).unwrap();
    let a = hybrid_compress(&x, &y1, &cfg, 1.0, 40, 1e-8, 2.0).unwrap();
    let b = hybrid_compress(&x, &y2, &cfg, 1.0, 40, 1e-8, 2.0).unwrap();
    let same = a.u.selected == b.u.selected
        && a.u.coeffs.as_slice().iter().zip(b.u.coeffs.as_slice()).all(|(p, q)| p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits())
        && a.u.coeffs.shape() == b.u.coeffs.shape();
    check(same, format!("rank {} with |Y| = 100 and {} with |Y| = 250", a.rank, b.rank))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 11] = [
        ("1 ring sum identity", ring_sum_identity, Duration::from_secs(1)),
        ("2 exact error formula", exact_error_formula, Duration::from_secs(5)),
        ("3 example 1 reproduction", example1, Duration::from_secs(10)),
        ("4 decay rate", decay_rate, Duration::from_secs(30)),
        ("5 choose N vs table", choose_n_table, Duration::from_secs(1)),
        ("6 closed-form radius", closed_form_radius, Duration::from_secs(1)),
        ("7 estimator fidelity", estimator_fidelity, Duration::from_secs(60)),
        ("8 mesh hybrid compression", mesh_example, Duration::from_secs(180)),
        ("9 srrqr properties", srrqr_suite, Duration::from_secs(30)),
        ("10 hybrid bound containment", hybrid_containment, Duration::from_secs(60)),
        ("11 y-independence", y_independence, Duration::from_secs(1)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (name, run, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let ok = result.ok && elapsed <= budget;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {name}: {} ({:.2?} of {:?}) {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            result.detail
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
