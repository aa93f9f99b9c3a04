//! Cubic graphs compiled into Nash-social-welfare auctions with one
//! supermodular "greedy" agent, plus exact solvers and checkers showing
//! that any c-approximate allocation reveals a minimum vertex cover.
//!
//! Values are handled as NSW^n in the form `2^k * alpha^g` ([`NswPower`]);
//! big rationals only appear where two such values must be compared
//! outside the `alpha > 2^M` regime.

pub mod allocation;
pub mod error;
pub mod fraction;
pub mod graph;
pub mod reduction;
pub mod solver;
pub mod valuations;
pub mod verifier;

pub use allocation::{Agent, Allocation, Bundle};
pub use error::{Error, Result};
pub use graph::{CubicGraph, VertexSet};
pub use reduction::{build_instance, AuctionInstance, Item, ReductionParams};
pub use valuations::NswPower;
pub use verifier::{Decomposition, VerifierReport};
