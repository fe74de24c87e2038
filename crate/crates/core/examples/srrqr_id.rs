//! Strong rank-revealing QR and the row interpolative decomposition of a
//! numerically low-rank matrix.

use proxypoint::rrqr::{cpqr, row_id, singular_values, srrqr};
use proxypoint::{Complex64, ComplexMatrix};

fn main() -> proxypoint::Result<()> {
    let (m, n) = (120, 60);
    let a = ComplexMatrix::from_fn(m, n, |i, j| {
        let s = i as f64 / m as f64;
        let t = 3.0 + j as f64 / n as f64;
        Complex64::new(1.0 / (t - s), 0.1 * (s * t).sin())
    });

    let sv = singular_values(&a)?;
    println!("leading singular values: {:?}", sv.iter().take(8).map(|s| format!("{s:.2e}")).collect::<Vec<_>>());

    let qr = cpqr(&a)?;
    println!("column pivots: {:?}", &qr.perm[..8]);

    for tau in [1e-4, 1e-8, 1e-12] {
        let s = srrqr(&a, tau, 2.0)?;
        let id = row_id(&a, tau, 2.0)?;
        let approx = id.expand_rows(&a.select_rows(&id.selected))?;
        println!(
            "tau {tau:.0e}: rank {:>2}, swaps {}, max |T| {:.3}, relative residual {:.2e}",
            s.rank,
            s.swaps,
            id.max_coeff(),
            a.sub(&approx)?.fro_norm() / a.fro_norm()
        );
    }
    Ok(())
}
