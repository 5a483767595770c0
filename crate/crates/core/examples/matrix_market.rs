//! Write a random sparse unitary as Matrix Market, read it back, and check
//! it survived the round trip.
//!
//!     cargo run --example matrix_market

use sparse_unitary::sparse::mtx;
use sparse_unitary::{check_unitary, random_sparse_unitary};

fn main() -> sparse_unitary::Result<()> {
    let u = random_sparse_unitary(6, 2, 1)?;
    let text = mtx::to_string(&u);
    print!("{text}");
    let back = mtx::parse(&text)?;
    println!("round trip exact: {}", back == u);
    println!("{:?}", check_unitary(&back, 1e-12));
    Ok(())
}
