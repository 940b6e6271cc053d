//! Jones polynomial values for three-strand braid closures from a unitary
//! Temperley-Lieb representation, an NMR-style trace estimator, and pulse
//! programs for the controlled generators.

pub mod braid;
pub mod jones;
pub mod matrix;
pub mod nmr;
pub mod path_model;
pub mod pulse;
pub mod state_sum;
pub mod sweep;
pub mod tl_rep;

pub use braid::{parse_braid, BraidGenerator, BraidWord};
pub use jones::{evaluate, InvariantValues};
pub use matrix::ComplexMatrix;
pub use nmr::{estimate_trace, EvqcPrecision, EvqcSimulator};
pub use pulse::{compile_controlled_s, pulse_angles, verify_program, PulseInstruction, PulseProgram};
pub use state_sum::bracket_state_sum;
pub use sweep::{emit_csv, preset, run_sweep, SweepRecord};
pub use tl_rep::{ReprParams, Representation};
