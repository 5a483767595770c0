//! Hermitian dilation `H = [[0, U], [U^dagger, 0]]` and the ancilla protocol
//! that turns evolution under `H` into an application of `U`.
//!
//! Index convention: the ancilla is the high-order bit. Indices `k < N` are
//! the ancilla-|0> block, `k >= N` the ancilla-|1> block. Inputs are placed
//! in the |1> block (this plays the role of a NOT on a fresh |0> ancilla),
//! evolved for time `pi/2`, and read out of the |0> block, where they arrive
//! as `-i U psi`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::sparse::{check_unitary, DenseMatrix, RowAccess, SparseMatrix, StateVector, C64};
use crate::trotter::{trotterize, FactoredEvolution, Order};

/// Tolerance under which a source matrix is treated as unitary.
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance on `||H^2 - I||` (bounded above by the sparse row/column-sum bound).
pub const INVOLUTION_TOL: f64 = 1e-10;
/// Largest residual allowed in the input block after closed-form evolution.
pub const ANALYTIC_LEAKAGE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Dilation {
    pub source_dim: usize,
    pub h: SparseMatrix,
    /// `true` when the source was unitary and `H^2 = I` was confirmed.
    pub involutory: bool,
}

/// `true` if `||h^2 - I|| <= 1e-10`, using an upper bound on the spectral norm.
pub fn is_involutory(h: &SparseMatrix) -> bool {
    match h.matmul(h).and_then(|h2| h2.sub(&SparseMatrix::identity(h.dim()))) {
        Ok(d) => d.norm_bound() <= INVOLUTION_TOL,
        Err(_) => false,
    }
}

/// Builds the dilation of any square matrix; `u` need not be unitary.
pub fn dilate<M: RowAccess + ?Sized>(u: &M) -> Result<Dilation> {
    let u = u.to_sparse()?;
    let n = u.dim();
    let mut rows: Vec<Vec<(usize, C64)>> = Vec::with_capacity(2 * n);
    for i in 0..n {
        rows.push(u.row(i).iter().map(|&(c, a)| (c + n, a)).collect());
    }
    for j in 0..n {
        rows.push(u.col(j).iter().map(|&(r, a)| (r, a.conj())).collect());
    }
    let h = SparseMatrix::from_sorted_rows(2 * n, rows);
    let involutory = check_unitary(&u, UNITARY_TOL).is_unitary && is_involutory(&h);
    Ok(Dilation { source_dim: n, h, involutory })
}

/// `exp(-i theta H) = cos(theta) I - i sin(theta) H`, valid only when `H^2 = I`.
pub fn analytic_evolution(d: &Dilation, theta: f64) -> Result<DenseMatrix> {
    if !d.involutory {
        return Err(Error::NotInvolutory);
    }
    let id = DenseMatrix::identity(d.h.dim())?;
    let h = DenseMatrix::from_sparse(&d.h)?;
    id.scale(C64::new(theta.cos(), 0.0)).add(&h.scale(C64::new(0.0, -theta.sin())))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Closed-form evolution, applied sparsely.
    Analytic,
    /// Product-formula evolution certified to `epsilon`.
    Trotter { epsilon: f64, order: Order },
}

/// Result of one pass through the ancilla protocol.
#[derive(Clone, Debug)]
pub struct DilationOutput {
    /// The ancilla-|0> block, with the `-i` removed unless phase keeping was requested.
    pub state: StateVector,
    /// Norm of what remained in the ancilla-|1> block.
    pub residual: f64,
}

enum Evolution {
    Analytic,
    Factored(FactoredEvolution),
}

/// A prepared dilation together with its `pi/2` evolution, reusable across inputs.
pub struct DilationPipeline {
    dilation: Dilation,
    evolution: Evolution,
    leakage_tol: Option<f64>,
    keep_phase: bool,
}

impl DilationPipeline {
    /// Prepares the protocol for a unitary `u` (checked at 1e-12).
    pub fn new<M: RowAccess + ?Sized>(u: &M, method: Method) -> Result<Self> {
        let u = u.to_sparse()?;
        let report = check_unitary(&u, UNITARY_TOL);
        if !report.is_unitary {
            return Err(Error::NotUnitary { col_defect: report.max_col_defect, row_defect: report.max_row_defect });
        }
        let dilation = dilate(&u)?;
        let (evolution, leakage_tol) = match method {
            Method::Analytic => {
                if !dilation.involutory {
                    return Err(Error::NotInvolutory);
                }
                (Evolution::Analytic, ANALYTIC_LEAKAGE_TOL)
            }
            Method::Trotter { epsilon, order } => {
                (Evolution::Factored(trotterize(&dilation.h, FRAC_PI_2, epsilon, order)?), epsilon)
            }
        };
        Ok(Self { dilation, evolution, leakage_tol: Some(leakage_tol), keep_phase: false })
    }

    /// Prepares the protocol for a matrix that may be only approximately
    /// unitary, such as a truncated transition matrix. The closed form does
    /// not hold, so the evolution is always a product formula certified
    /// against the dense exponential, and no leakage limit is enforced.
    pub fn new_truncated<M: RowAccess + ?Sized>(u: &M, epsilon: f64, order: Order) -> Result<Self> {
        let dilation = dilate(u)?;
        let evolution = Evolution::Factored(trotterize(&dilation.h, FRAC_PI_2, epsilon, order)?);
        Ok(Self { dilation, evolution, leakage_tol: None, keep_phase: false })
    }

    pub fn keep_phase(mut self, keep: bool) -> Self {
        self.keep_phase = keep;
        self
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }

    pub fn evolution(&self) -> Option<&FactoredEvolution> {
        match &self.evolution {
            Evolution::Analytic => None,
            Evolution::Factored(f) => Some(f),
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<DilationOutput> {
        let n = self.dilation.source_dim;
        if psi.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: psi.dim() });
        }
        let mut embedded = vec![C64::new(0.0, 0.0); 2 * n];
        embedded[n..].copy_from_slice(psi.amps());
        let embedded = StateVector::new(embedded);
        let evolved = match &self.evolution {
            Evolution::Analytic => {
                let hv = crate::sparse::apply(&self.dilation.h, &embedded)?;
                let (c, s) = (FRAC_PI_2.cos(), FRAC_PI_2.sin());
                let amps = embedded
                    .amps()
                    .iter()
                    .zip(hv.amps())
                    .map(|(v, w)| v * c - C64::new(0.0, s) * w)
                    .collect();
                StateVector::new(amps)
            }
            Evolution::Factored(f) => f.apply(&embedded)?,
        };
        let amps = evolved.into_amps();
        let residual = amps[n..].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if let Some(tol) = self.leakage_tol {
            let threshold = tol * psi.norm().max(1.0);
            if residual > threshold {
                return Err(Error::Leakage { residual, threshold });
            }
        }
        let phase = if self.keep_phase { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
        let state = StateVector::new(amps[..n].iter().map(|a| a * phase).collect());
        Ok(DilationOutput { state, residual })
    }
}

/// `U psi` computed through the dilation; equal to `U psi` up to the stripped global phase.
pub fn apply_via_dilation<M: RowAccess + ?Sized>(u: &M, psi: &StateVector, method: Method) -> Result<StateVector> {
    Ok(DilationPipeline::new(u, method)?.apply(psi)?.state)
}
