//! Exact relative error of the proxy approximation for one pair of points,
//! next to the computable pointwise bound and its optimal radius.

use proxypoint::bounds::{exact_rel_error, pointwise_bound, pointwise_optimal_gamma};
use proxypoint::proxy::{kappa_tilde, trapezoidal_surface};
use proxypoint::kernel::kappa;
use proxypoint::Complex64;

fn main() -> proxypoint::Result<()> {
    let x = Complex64::new(0.3, 0.2);
    let y = Complex64::new(-1.5, 1.9);
    let n = 24;
    println!("x = {x}, y = {y}, N = {n}");
    println!("{:>2} {:>8} {:>12} {:>12} {:>12} {:>6}", "d", "gamma", "|eps|", "quadrature", "bound", "valid");
    for d in 1..=4 {
        let opt = pointwise_optimal_gamma(x, y, n, d)?;
        for gamma in [0.6, 1.0, opt.gamma] {
            let eps = exact_rel_error(x, y, gamma, n, d)?;
            let k = kappa(x, y, d)?;
            let kt = kappa_tilde(x, y, &trapezoidal_surface(gamma, n)?, d)?;
            let bound = pointwise_bound(x, y, gamma, n, d)?;
            println!(
                "{d:>2} {gamma:>8.4} {:>12.3e} {:>12.3e} {:>12.3e} {:>6}",
                eps.norm(),
                ((kt - k) / k).norm(),
                bound.value,
                bound.valid
            );
        }
    }
    Ok(())
}
