//! Sparse unitaries arising from concrete models: truncated quantum Turing
//! machines, a coined walk on a cycle, and Young's orthogonal form.

pub mod qtm;
pub mod symrep;
pub mod walk;

pub use qtm::{
    qtm_run, qtm_step_bound, qtm_truncate, qtm_validate, Direction, QtmInput, QtmMethod, QtmRun, QtmRunOptions,
    QtmValidation, TransitionRule, TruncatedQtm,
};
pub use symrep::{hook_length_dim, partitions, symrep_check, symrep_generator, SymrepReport, YoungTableauBasis};
pub use walk::{walk_run, walk_step, CoinedWalk, WalkConfig, WalkMethod, WalkRun};
