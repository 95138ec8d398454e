//! Relaxed fixed-point iterations of nonexpansive linear and affine operators.
//!
//! Given a nonexpansive linear `R` (spectral norm at most one) and relaxation
//! parameters `λ_n`, the iteration
//!
//! ```text
//! x_{n+1} = (1 − λ_n) x_n + λ_n R x_n
//! ```
//!
//! converges to the orthogonal projection of `x_0` onto `Fix R` whenever the
//! parameters stay inside a band `[ε, 1 − ε]`. The crate provides:
//!
//! - [`numkernel`]: small dense vectors and matrices, spectral norms, null spaces
//! - [`operators`]: certified operators, relaxations, fixed-set projections
//! - [`schedules`]: constant, explicit, banded random and adaptive `λ_n`
//! - [`iteration`]: the driver with stopping rules and recorded histories
//! - [`analysis`]: the norm profile of a relaxation, `λ̄` and the averagedness modulus
//! - [`experiments`]: constant-λ sweeps against the adaptive rule, CSV/SVG output
//!
//! ```
//! use fixpoint_core::prelude::*;
//!
//! let r = LinearOperator::new(Matrix::diag(&[0.7, 0.2])).unwrap();
//! let x0 = Vector::new(vec![1.0, 0.0]).unwrap();
//! let stop = StoppingRule::new(1_000).norm_below(1e-6);
//! let out = km_run(&r, &RelaxationSchedule::adaptive(0.01).unwrap(), &x0, &stop, None).unwrap();
//! assert_eq!(out.iterations, 40);
//! ```

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod iteration;
pub mod numkernel;
pub mod operators;
pub mod par;
pub mod random;
pub mod schedules;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::{lambda_bar, AveragednessReport, LambdaBarConfig, LambdaBarMethod};
    pub use crate::error::{Error, Result};
    pub use crate::iteration::{km_run, RunResult, StoppingRule, Termination};
    pub use crate::numkernel::{Matrix, Vector};
    pub use crate::operators::{
        AffineOperator, FixedPointOperator, LinearOperator, Operator, OperatorSpec,
    };
    pub use crate::par::Execution;
    pub use crate::schedules::RelaxationSchedule;
}
