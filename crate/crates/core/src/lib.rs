//! Streaming submodular maximization under a cardinality constraint.
//!
//! Objectives implement [`SubmodularOracle`]; algorithms read a
//! [`StreamSource`](algos::StreamSource) through a [`MeteredOracle`] that
//! counts evaluations.

pub mod algos;
pub mod audit;
pub mod error;
pub mod exact;
pub mod forge;
pub mod harness;
pub mod objectives;
pub mod oracle;

pub use error::{Error, Result};
pub use oracle::{ElementId, MeteredOracle, SolutionSet, SubmodularOracle};
