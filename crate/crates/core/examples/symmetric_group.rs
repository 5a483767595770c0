//! Young's orthogonal form: standard tableaux and generator matrices for a
//! partition given on the command line (default `3,2`).
//!
//!     cargo run --example symmetric_group -- 2,2,1

use sparse_unitary::models::symrep::{hook_length_dim, symrep_check, YoungTableauBasis};

fn main() -> sparse_unitary::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "3,2".into());
    let lambda: Vec<usize> = arg
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| sparse_unitary::Error::InvalidArgument(format!("bad part `{s}`"))))
        .collect::<Result<_, _>>()?;
    let basis = YoungTableauBasis::new(&lambda)?;
    println!("partition {lambda:?}: {} tableaux (hook length {})", basis.dim(), hook_length_dim(&lambda)?);
    for (i, t) in basis.tableaux().iter().enumerate() {
        println!("  T{i}: {:?}", t.rows());
    }
    for j in 1..basis.n() {
        let g = basis.generator(j)?;
        println!("s{j}:");
        for i in 0..g.dim() {
            let row: Vec<String> = (0..g.dim()).map(|k| format!("{:>7.4}", g.get(i, k).re)).collect();
            println!("  [{}]", row.join(" "));
        }
    }
    let report = symrep_check(&lambda)?;
    println!(
        "relations: involution {:.1e}, braid {:.1e}, commutation {:.1e}",
        report.involution, report.braid, report.commutation
    );
    Ok(())
}
