//! Belief-function inference on product spaces of binary variables.
//!
//! Weighted propositional constraints become simple support functions;
//! evaluation extends them all to the joint frame, combines them with
//! Dempster's rule and projects the result onto each variable.

pub mod combination;
pub mod error;
pub mod formula;
pub mod frame;
pub mod golden;
pub mod mass;
pub mod netfile;
pub mod network;
pub mod render;
pub mod report;
pub mod scenarios;
pub mod state_set;

pub use combination::{
    combine_all, combine_all_inspect, combine_all_unnormalized, combine_conjunctive, combine_disjunctive,
    marginalize, vacuous_extension, ConflictReport,
};
pub use error::{Error, Result};
pub use formula::{parse_formula, Formula};
pub use frame::{Frame, Variable, MAX_VARIABLES};
pub use mass::{Marginal, MassFunction};
pub use netfile::{load_network, parse_network, to_network_text, LoadError};
pub use network::{
    evaluate, evaluate_inspect, evaluate_unnormalized, limit_sweep, Belief, EvaluationResult, ExceptionMode,
    NetworkSpec, SweepPoint,
};
pub use report::EvaluationReport;
pub use state_set::StateSet;
