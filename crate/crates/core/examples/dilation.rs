//! Apply a random sparse unitary through its Hermitian dilation and compare
//! against direct multiplication.
//!
//!     cargo run --example dilation

use sparse_unitary::dilation::{analytic_evolution, dilate, DilationPipeline, Method};
use sparse_unitary::trotter::Order;
use sparse_unitary::{apply, random_sparse_unitary, StateVector, C64};

fn main() -> sparse_unitary::Result<()> {
    let u = random_sparse_unitary(64, 4, 11)?;
    let d = dilate(&u)?;
    println!("U: 64x64, {} nonzeros; H: {}x{}, involutory = {}", u.nnz(), d.h.dim(), d.h.dim(), d.involutory);

    // exp(-i H pi/2) is exactly -i H.
    let e = analytic_evolution(&d, std::f64::consts::FRAC_PI_2)?;
    let h = sparse_unitary::DenseMatrix::from_sparse(&d.h)?.scale(C64::new(0.0, -1.0));
    println!("max |exp(-i H pi/2) + i H| = {:.2e}", e.sub(&h)?.max_abs());

    let psi = StateVector::basis(64, 5)?;
    let direct = apply(&u, &psi)?;
    for (name, method) in [
        ("analytic", Method::Analytic),
        ("trotter eps=1e-3", Method::Trotter { epsilon: 1e-3, order: Order::Second }),
        ("trotter eps=1e-6", Method::Trotter { epsilon: 1e-6, order: Order::Second }),
    ] {
        let pipeline = DilationPipeline::new(&u, method)?;
        let out = pipeline.apply(&psi)?;
        let reps = pipeline.evolution().map_or(0, |f| f.r);
        println!(
            "{name:>18}: |U psi - out| = {:.3e}, ancilla residual = {:.3e}, r = {reps}",
            direct.distance(&out.state)?,
            out.residual
        );
    }
    Ok(())
}
