//! Hybrid compression of a mesh block for orders 1 to 4, compared with the
//! SVD rank of the full kernel block. The SVD takes several seconds.

use proxypoint::estimator::estimate_optimal_gamma;
use proxypoint::geometry::rectangle_mesh_instance;
use proxypoint::hybrid::{hybrid_compress, measure_errors, svd_rank_oracle};
use proxypoint::kernel::kernel_matrix;

fn main() -> proxypoint::Result<()> {
    let tau2 = 3e-8;
    println!("{:>2} {:>5} {:>8} {:>5} {:>10} {:>10}", "d", "N", "gamma", "rank", "E_N", "R_N");
    for (d, n) in [(1, 169), (2, 179), (3, 187), (4, 193)] {
        let (x, y, cfg) = rectangle_mesh_instance(d)?;
        let gamma = estimate_optimal_gamma(&cfg, n, 1, 0)?;
        let result = hybrid_compress(&x, &y, &cfg, gamma, n, tau2, 2.0)?;
        let report = measure_errors(&x, &y, &cfg, gamma, n, &result)?;
        println!("{d:>2} {n:>5} {gamma:>8.4} {:>5} {:>10.2e} {:>10.2e}", result.rank, report.e_n, report.r_n);
    }

    let (x, y, _) = rectangle_mesh_instance(1)?;
    println!("|X| = {}, |Y| = {}", x.len(), y.len());
    let k = kernel_matrix(&x, &y, 1)?;
    println!("SVD rank of K at 1e-15: {}", svd_rank_oracle(&k, 1e-15)?);
    Ok(())
}
