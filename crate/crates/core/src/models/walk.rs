//! Hadamard-coined discrete-time walk on the cycle `Z_n`.
//!
//! Basis state `|x, i>` has index `2x + i`. One step applies a Hadamard to
//! the coin and then shifts: coin 0 moves to `x - 1`, coin 1 to `x + 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::dilation::{DilationPipeline, Method};
use crate::error::{Error, Result};
use crate::sparse::{apply, SparseMatrix, StateVector, C64};
use crate::trotter::Order;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoinedWalk {
    n: usize,
}

impl CoinedWalk {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("cycle length must be at least 2, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn index(&self, x: usize, coin: usize) -> Result<usize> {
        if x >= self.n || coin > 1 {
            return Err(Error::invalid(format!("site ({x}, {coin}) outside a walk on {} sites", self.n)));
        }
        Ok(2 * x + coin)
    }

    pub fn step_matrix(&self) -> SparseMatrix {
        let n = self.n;
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mut triplets = Vec::with_capacity(4 * n);
        for x in 0..n {
            let left = 2 * ((x + n - 1) % n);
            let right = 2 * ((x + 1) % n) + 1;
            triplets.push((left, 2 * x, h));
            triplets.push((right, 2 * x, h));
            triplets.push((left, 2 * x + 1, h));
            triplets.push((right, 2 * x + 1, -h));
        }
        SparseMatrix::from_triplets(2 * n, triplets).expect("walk entries are distinct and in range")
    }

    /// Probability of each site, summed over the coin.
    pub fn site_distribution(&self, v: &StateVector) -> Result<Vec<f64>> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        Ok(v.amps().chunks(2).map(|c| c[0].norm_sqr() + c[1].norm_sqr()).collect())
    }
}

/// The `2n x 2n` step operator.
pub fn walk_step(n: usize) -> Result<SparseMatrix> {
    Ok(CoinedWalk::new(n)?.step_matrix())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WalkMethod {
    Direct,
    /// Each step through the dilation, evolved by a second-order product formula.
    Dilation { epsilon: f64 },
}

#[derive(Clone, Debug)]
pub struct WalkRun {
    pub state: StateVector,
    pub distribution: Vec<f64>,
}

pub fn walk_run(n: usize, v0: &StateVector, steps: usize, method: WalkMethod) -> Result<WalkRun> {
    let walk = CoinedWalk::new(n)?;
    if v0.dim() != walk.dim() {
        return Err(Error::DimensionMismatch { expected: walk.dim(), found: v0.dim() });
    }
    let u = walk.step_matrix();
    let mut v = v0.clone();
    match method {
        WalkMethod::Direct => {
            for _ in 0..steps {
                v = apply(&u, &v)?;
            }
        }
        WalkMethod::Dilation { epsilon } => {
            if steps > 0 {
                let pipeline = DilationPipeline::new(&u, Method::Trotter { epsilon, order: Order::Second })?;
                for _ in 0..steps {
                    v = pipeline.apply(&v)?.state;
                }
            }
        }
    }
    let distribution = walk.site_distribution(&v)?;
    Ok(WalkRun { state: v, distribution })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStart {
    pub x: usize,
    pub coin: usize,
}

/// `{"n": 8, "steps": 1, "start": {"x": 0, "coin": 0}}`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub n: usize,
    pub steps: usize,
    pub start: WalkStart,
}

impl WalkConfig {
    pub fn initial_state(&self) -> Result<StateVector> {
        let walk = CoinedWalk::new(self.n)?;
        StateVector::basis(walk.dim(), walk.index(self.start.x, self.start.coin)?)
    }

    pub fn run(&self, method: WalkMethod) -> Result<WalkRun> {
        walk_run(self.n, &self.initial_state()?, self.steps, method)
    }
}
