//! Symbolic engine for exemplar-driven trait learning over a sorted modal
//! event calculus.
//!
//! Layers, bottom-up: [`kernel`] terms and formulas, [`text`] syntax,
//! [`ec`] projection, [`utility`] sums, [`emotions`], [`inference`],
//! [`generalization`] and [`learner`]. [`pipeline`] chains them.

// Errors carry the offending terms and formulas for diagnostics; they are
// rare and never on a hot path.
#![allow(clippy::result_large_err)]

pub mod ec;
pub mod emotions;
pub mod generalization;
pub mod inference;
pub mod kernel;
pub mod learner;
pub mod pipeline;
pub mod text;
pub mod utility;
