//! Inversion of functional Galois connections on finite and gridded spaces.
//!
//! A kernel `b(x, y, λ)` assembles scalar dual Galois connections into a
//! transform `Bf(x) = sup_y b(x, y, f(y))`. Given a target `g`, [`solve`]
//! decides whether `Bf = g` has a solution, whether it is unique, and returns
//! the least solution.

pub mod covering;
pub mod engine;
pub mod error;
pub mod extreal;
pub mod grid;
pub mod kernel;
pub mod lab;
pub mod scalar_conn;
pub mod solver;

pub use covering::{check_cover, irredundant_subcover, smallest_subcover, CoverFamily, CoverReport};
pub use engine::{
    apply_b, apply_bstar, domain_report, projector, subdiff, subdiff_adjoint, subdiff_inverse, DomainReport,
    FunctionOnSpace, Side, SubdiffMap,
};
pub use error::{GaloisError, Result};
pub use extreal::{ExtReal, DEFAULT_EPS};
pub use grid::{Axis, GridSpec};
pub use kernel::{numbered_labels, GridFamily, Kernel, OmegaSpec};
pub use scalar_conn::{DualPair, PiecewiseLinear, ScalarConnection};
pub use solver::{oracle_check, solution_structure, solve, verify, Caveat, Problem, Residual, Solution, SolutionStructure, Status, Verification, VerifyRow};
pub use lab::{run_experiment, Check, GridFunction, LabOptions, LabResult, LipschitzTarget};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/extended-reals.md")]
    mod extended_reals {}
    #[doc = include_str!("../../../book/src/scalar-connections.md")]
    mod scalar_connections {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/lab.md")]
    mod lab {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
