//! Two-sided skeletonization `K ≈ U K(X̂, Ŷ) Vᵀ` of a kernel block, with the
//! selected points written to a temporary directory.

use proxypoint::bounds::optimal_gamma_block;
use proxypoint::geometry::{sample_annulus, sample_disk, save_points};
use proxypoint::hybrid::{measure_errors, skeletonize};
use proxypoint::GeometryConfig;

fn main() -> proxypoint::Result<()> {
    let cfg = GeometryConfig::new(0.5, 2.0, 5.0, 2)?;
    let x = sample_disk(400, cfg.gamma1, 11)?;
    let y = sample_annulus(600, cfg.gamma2, cfg.gamma3, 12)?;
    let n = 48;
    let gamma = optimal_gamma_block(&cfg, n)?;

    let result = skeletonize(&x, &y, &cfg, gamma, n, 1e-12, 2.0)?;
    let report = measure_errors(&x, &y, &cfg, gamma, n, &result)?;
    let y_hat = result.y_hat.as_ref().expect("skeleton result");
    println!("gamma {gamma:.4}, N {n}: |X_hat| = {}, |Y_hat| = {}", result.x_hat.len(), y_hat.len());
    println!("E_N {:.2e}, R_N {:.2e}, skeleton {:.2e}", report.e_n, report.r_n, report.skeleton.unwrap());
    println!("bound {:.2e} (valid: {})", result.bound_value(), result.bound.valid);

    let dir = std::env::temp_dir().join("proxypoint-skeleton");
    std::fs::create_dir_all(&dir)?;
    save_points(dir.join("x_hat.txt"), &result.x_hat)?;
    save_points(dir.join("y_hat.txt"), y_hat)?;
    println!("selected points written to {}", dir.display());
    Ok(())
}
