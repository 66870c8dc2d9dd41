//! Equilibrium analysis and simulation of cooperation on favor-exchange
//! networks.
//!
//! * [`graph`]: small canonical graphs and structural predicates.
//! * [`equilibrium`]: TC/RPE membership, cognitive complexity, LCC, social quilts.
//! * [`catalog`]: the experiment networks and graph files.
//! * [`game`]: the sequential link-deletion game.
//! * [`agents`]: decision policies.
//! * [`sim`]: seeded batch runs and decision metrics.
//! * [`session`]: interactive human-vs-computer sessions (HTTP front end in
//!   `server` with the `server` feature).

pub mod agents;
pub mod catalog;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod graph;
pub mod session;
pub mod sim;

#[cfg(feature = "server")]
pub mod server;

pub use error::{Error, Result};
pub use graph::{DegreeProfile, Edge, Graph};
