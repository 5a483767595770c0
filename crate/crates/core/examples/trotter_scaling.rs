//! Product-formula error against the number of repetitions for first- and
//! second-order formulas, with the fitted log-log slope.
//!
//!     cargo run --release --example trotter_scaling

use std::f64::consts::FRAC_PI_2;

use sparse_unitary::decompose::split_one_sparse;
use sparse_unitary::dilation::dilate;
use sparse_unitary::random_sparse_unitary;
use sparse_unitary::trotter::{measured_error, trotterize_fixed, Order};

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

fn main() -> sparse_unitary::Result<()> {
    let h = dilate(&random_sparse_unitary(48, 4, 3)?)?.h;
    println!("H: {}x{}, {} one-sparse terms", h.dim(), h.dim(), split_one_sparse(&h)?.len());
    let rs = [4u64, 8, 16, 32, 64, 128, 256];
    for order in [Order::First, Order::Second] {
        let mut logs = (Vec::new(), Vec::new());
        println!("{order:?} order");
        for &r in &rs {
            let err = measured_error(&trotterize_fixed(&h, FRAC_PI_2, r, order)?, &h)?;
            println!("  r = {r:>4}  error = {err:.3e}");
            logs.0.push((r as f64).ln());
            logs.1.push(err.ln());
        }
        println!("  slope {:.3}", slope(&logs.0, &logs.1));
    }
    Ok(())
}
