use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::C64;

/// Dense vector of probability amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    normalized: bool,
}

/// On-disk form: `{"dim": N, "amps": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct StateFile {
    dim: usize,
    amps: Vec<[f64; 2]>,
}

impl StateVector {
    pub const NORM_TOL: f64 = 1e-10;

    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps, normalized: false }
    }

    /// A vector flagged as normalized; fails if its squared norm is off by more than 1e-10.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (n2 - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::invalid(format!("state has squared norm {n2}, expected 1")));
        }
        Ok(Self { amps, normalized: true })
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { amps, normalized: true })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescaled copy with unit norm (zero vectors are returned unchanged).
    pub fn renormalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        Self { amps: self.amps.iter().map(|a| a / n).collect(), normalized: true }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.amps.iter().map(|a| a * s).collect())
    }

    /// 2-norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = StateFile {
            dim: self.dim(),
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        if file.dim != file.amps.len() {
            return Err(Error::DimensionMismatch { expected: file.dim, found: file.amps.len() });
        }
        let amps = file.amps.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        Ok(Self::new(amps))
    }
}
