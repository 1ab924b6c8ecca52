//! Coordination games on weighted directed graphs.
//!
//! Nodes of a digraph pick colours from per-node sets; a node's payoff is
//! the summed weight of in-edges from same-coloured neighbours plus a
//! non-negative bonus for the chosen colour. The crate provides the core
//! model, improvement-path dynamics, polynomial-length equilibrium
//! schedules for simple cycles, open chains of cycles, DAGs and two-colour
//! games, a brute-force oracle for small instances, and the reduction from
//! 3-CNF satisfiability to Nash-equilibrium existence.

pub mod chain;
pub mod coalition;
pub mod cycle;
pub mod dag;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod instances;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod two_colour;

pub use error::Error;
pub use model::{CoordinationGame, JointStrategy};
