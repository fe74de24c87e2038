//! Probe estimate of the optimal radius for orders 1 to 4, next to the
//! minimizer of the block bound and the argmin over the full point sets.

use proxypoint::bounds::optimal_gamma_block;
use proxypoint::estimator::{error_curve, estimate_optimal_gamma, interior_grid, CurveKind};
use proxypoint::geometry::{sample_annulus, sample_disk};
use proxypoint::GeometryConfig;

fn main() -> proxypoint::Result<()> {
    let n = 40;
    let x = sample_disk(150, 0.5, 3)?;
    let y = sample_annulus(200, 2.0, 5.0, 4)?;
    println!("{:>2} {:>10} {:>10} {:>10} {:>10}", "d", "probe l=1", "probe l=3", "full", "bound");
    for d in 1..=4 {
        let cfg = GeometryConfig::new(0.5, 2.0, 5.0, d)?;
        let l1 = estimate_optimal_gamma(&cfg, n, 1, 0)?;
        let l3 = estimate_optimal_gamma(&cfg, n, 3, 0)?;
        let full = error_curve(&x, &y, d, n, &interior_grid(&cfg, 150), CurveKind::Full)?;
        let bound = optimal_gamma_block(&cfg, n).map(|g| format!("{g:.4}")).unwrap_or_else(|_| "-".into());
        println!("{d:>2} {l1:>10.4} {l3:>10.4} {:>10.4} {bound:>10}", full.argmin().unwrap());
    }
    Ok(())
}
