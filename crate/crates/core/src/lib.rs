//! Design of symmetric coupled-microstrip couplers by metaheuristic search.
//!
//! The crate has four layers:
//!
//! * [`bat`]: a bat-algorithm optimizer over bounded continuous domains,
//!   with seeded, fully reproducible runs.
//! * [`microstrip`]: a quasi-static model mapping a coupled-microstrip
//!   geometry to even/odd-mode impedances and a coupling coefficient.
//! * [`design`]: the adapter turning the microstrip model into a penalized
//!   scalar objective for the optimizer.
//! * [`mod@bench`]: standard test functions (sphere, rosenbrock, rastrigin) for
//!   validating the optimizer independently of the RF problem.
//!
//! The [`cli`] module carries the configuration and file-output plumbing
//! shared by the `batstrip` binary.

pub mod bat;
pub mod bench;
pub mod cli;
pub mod design;
pub mod microstrip;

pub use bat::{
    run, BatError, BatParams, ConvergenceRecord, Objective, Population, RunResult, SearchSpace,
    Termination,
};
pub use bench::{BenchError, BenchFunction};
pub use design::{CouplerObjective, DesignError, DesignSpec};
pub use microstrip::{analyze, CouplerAnalysis, CouplerGeometry, ModelError};
