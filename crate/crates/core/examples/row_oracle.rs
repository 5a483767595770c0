//! A unitary known only through a row oracle: a phased cyclic shift with a
//! two-level mixing on even pairs, applied through the dilation.
//!
//!     cargo run --example row_oracle

use sparse_unitary::dilation::{apply_via_dilation, Method};
use sparse_unitary::trotter::Order;
use sparse_unitary::{apply, RowOracle, StateVector, C64};

fn main() -> sparse_unitary::Result<()> {
    let n = 40;
    // (M psi)_i: mix pairs (2k, 2k+1) with a real rotation, then shift by one with phase e^{i k}.
    let (c, s) = (0.6, 0.8);
    let oracle = RowOracle::new(n, move |i| {
        let src = (i + n - 1) % n;
        let phase = C64::from_polar(1.0, src as f64 * 0.1);
        let base = src & !1;
        let (a, b) = if src % 2 == 0 { (c, -s) } else { (s, c) };
        let mut row = vec![(base, phase * a), (base + 1, phase * b)];
        row.sort_by_key(|e| e.0);
        row
    });
    let psi = StateVector::new((0..n).map(|k| C64::new(1.0, k as f64)).collect()).renormalized();
    let direct = apply(&oracle, &psi)?;
    let via = apply_via_dilation(&oracle, &psi, Method::Trotter { epsilon: 1e-5, order: Order::Second })?;
    println!("dimension {n}, |U psi - dilation output| = {:.3e}", direct.distance(&via)?);
    Ok(())
}
