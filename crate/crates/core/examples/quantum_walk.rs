//! Hadamard walk on a cycle: site distribution after a number of steps, and
//! the same walk realized through the dilation.
//!
//!     cargo run --release --example quantum_walk

use sparse_unitary::models::walk::{walk_run, CoinedWalk, WalkMethod};
use sparse_unitary::StateVector;

fn main() -> sparse_unitary::Result<()> {
    let walk = CoinedWalk::new(32)?;
    let start = StateVector::basis(walk.dim(), walk.index(0, 0)?)?;
    let run = walk_run(32, &start, 12, WalkMethod::Direct)?;
    for (x, p) in run.distribution.iter().enumerate() {
        if *p > 1e-12 {
            println!("{x:>3} {p:.5} {}", "#".repeat((p * 200.0) as usize));
        }
    }
    let n = 16;
    let start = StateVector::basis(2 * n, 0)?;
    let direct = walk_run(n, &start, 10, WalkMethod::Direct)?;
    let dilated = walk_run(n, &start, 10, WalkMethod::Dilation { epsilon: 1e-4 })?;
    println!("n = {n}, 10 steps: direct vs dilation distance {:.3e}", direct.state.distance(&dilated.state)?);
    Ok(())
}
