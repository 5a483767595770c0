//! Factor an evolution to a target error, store it on disk, load it back and
//! certify the spectral-norm distance to the exact exponential.
//!
//!     cargo run --example certify

use sparse_unitary::dilation::dilate;
use sparse_unitary::random_sparse_unitary;
use sparse_unitary::trotter::{measured_error, read_manifest, trotterize, write_manifest, Order};

fn main() -> sparse_unitary::Result<()> {
    let h = dilate(&random_sparse_unitary(32, 3, 21)?)?.h;
    let dir = std::env::temp_dir().join("sparse-unitary-certify");
    std::fs::create_dir_all(&dir)?;
    for eps in [1e-2, 1e-4, 1e-6] {
        let f = trotterize(&h, 1.0, eps, Order::Second)?;
        let path = dir.join(format!("evolution-{eps:e}.json"));
        let manifest = write_manifest(&f, &path)?;
        let back = read_manifest(&path)?;
        println!(
            "eps {eps:.0e}: r = {:>4}, {} factor files, slice bound {:.3e}, measured {:.3e}",
            f.r,
            manifest.factor_files.len(),
            f.certified_error.unwrap_or(f64::NAN),
            measured_error(&back, &h)?
        );
    }
    println!("manifests written under {}", dir.display());
    Ok(())
}
