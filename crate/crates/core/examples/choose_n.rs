//! Smallest proxy count whose block bound meets a target tolerance, then a
//! compression at that count.

use proxypoint::bounds::choose_n;
use proxypoint::geometry::{sample_annulus, sample_disk};
use proxypoint::hybrid::{compress_to_tolerance, measure_errors};
use proxypoint::GeometryConfig;

fn main() -> proxypoint::Result<()> {
    let x = sample_disk(200, 0.5, 0)?;
    let y = sample_annulus(300, 2.0, 5.0, 1)?;
    println!("{:>2} {:>8} {:>5} {:>8} {:>10} {:>10} {:>5}", "d", "tau1", "N", "gamma", "bound", "E_N", "rank");
    for d in 1..=3 {
        let cfg = GeometryConfig::new(0.5, 2.0, 5.0, d)?;
        for tau1 in [1e-4, 1e-8, 1e-12] {
            let pick = choose_n(&cfg, tau1)?;
            let result = compress_to_tolerance(&x, &y, &cfg, tau1, 1e-13, 2.0, false)?;
            let report = measure_errors(&x, &y, &cfg, pick.gamma, pick.n, &result)?;
            println!(
                "{d:>2} {tau1:>8.0e} {:>5} {:>8.4} {:>10.2e} {:>10.2e} {:>5}",
                pick.n, pick.gamma, pick.bound, report.e_n, result.rank
            );
        }
    }
    Ok(())
}
