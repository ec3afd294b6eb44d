//! Numerical laboratory for fixed-disc theorems: simulation functions,
//! Z_c-type contraction predicates and sampled verification of fixed and
//! common fixed discs over finite tables, intervals and boxes.
//!
//! Every predicate is checked on a finite sample set. A "pass" means no
//! sampled counterexample was found, never a proof.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod catalog;
pub mod cli;
pub mod config;
pub mod contractions;
pub mod error;
pub mod expr;
pub mod metric;
pub mod numeric;
pub mod report;
pub mod simulation;
pub mod theorems;
pub mod tolerance;

pub use config::{parse_config, ProblemConfig, TheoremKind};
pub use contractions::{AlphaFunction, RadiusEstimate, SelfMap};
pub use error::{FdError, Result};
pub use expr::PiecewiseExpression;
pub use metric::{Disc, Metric, MetricSpace, Point, SampleSet};
pub use report::{Status, Verdict, VerificationReport};
pub use simulation::{SimulationFunctionSpec, ZetaParams};
pub use theorems::{Branch, Settings};
pub use tolerance::{Tolerances, DEFAULT_SEED};
