//! Closed-form Wigner functions for Fock, coherent, squeezed and cat states,
//! and the volume of their negative part.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_io;
pub mod error;
pub mod negativity;
pub mod oracle;
pub mod special_fn;
pub mod states;
pub mod sweeps;

pub use error::{Error, Result};
pub use negativity::{
    delta_indicator, evaluate_grid, fock_delta_radial, nu_from_delta, support_rectangle,
    NegativityResult, PhaseGrid, QuadratureConfig, Rect,
};
pub use states::StateSpec;
pub use sweeps::{fock_scan, run_sweep, SweepResult, SweepSpec};
