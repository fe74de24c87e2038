//! The trapezoidal sum of `z^k` over `N` points on a circle, against the
//! closed form `N·g((z/γ)^N)`.

use proxypoint::bounds::{g_of_power, ring_sum};
use proxypoint::Complex64;

fn main() -> proxypoint::Result<()> {
    let gamma = 1.0;
    let n = 16;
    println!("{:>10} {:>24} {:>12}", "|z|/gamma", "sum", "abs diff");
    for r in [0.3, 0.7, 0.95, 1.05, 1.5, 4.0] {
        let z = Complex64::from_polar(r * gamma, 0.4);
        let direct: Complex64 = (1..=n)
            .map(|j| {
                let w = Complex64::from_polar(gamma, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                w / (z - w)
            })
            .sum();
        let closed = ring_sum(z, gamma, n)?;
        let expected = g_of_power(z / gamma, n)? * n as f64;
        assert!((closed - expected).norm() < 1e-12);
        println!("{r:>10.2} {:>24.6e} {:>12.2e}", closed, (direct - closed).norm());
    }
    Ok(())
}
