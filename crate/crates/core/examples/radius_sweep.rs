//! Relative error of the analytical factors over the proxy radius for a
//! disk of radius 0.5 against the annulus 2 <= |y| <= 5, with the block
//! bound. The minimum sits at the geometric mean 1.

use proxypoint::bounds::{block_bound, min_block_bound_d1, optimal_gamma_d1};
use proxypoint::estimator::{error_curve, interior_grid, CurveKind};
use proxypoint::geometry::{sample_annulus, sample_disk};
use proxypoint::GeometryConfig;

fn main() -> proxypoint::Result<()> {
    let cfg = GeometryConfig::new(0.5, 2.0, 5.0, 1)?;
    let n = 20;
    let x = sample_disk(200, cfg.gamma1, 0)?;
    let y = sample_annulus(300, cfg.gamma2, cfg.gamma3, 1)?;
    let grid = interior_grid(&cfg, 29);
    let curve = error_curve(&x, &y, cfg.d, n, &grid, CurveKind::Full)?;

    println!("{:>8} {:>12} {:>12}", "gamma", "E_N", "bound");
    for (g, e) in curve.gammas.iter().zip(&curve.values) {
        println!("{g:>8.4} {e:>12.3e} {:>12.3e}", block_bound(*g, &cfg, n)?.value);
    }
    println!(
        "sampled argmin {:.4}, bound minimizer {:.4}, minimal bound {:.3e}",
        curve.argmin().unwrap(),
        optimal_gamma_d1(cfg.gamma1, cfg.gamma2),
        min_block_bound_d1(cfg.gamma1, cfg.gamma2, n)
    );
    Ok(())
}
