//! Environment assumptions for unrealizable synthesis games.
//!
//! Given a game in which the system (player 1) cannot win, the crate
//! computes a minimal safety assumption (environment edges that must never
//! be taken) and a locally-minimal strong-fairness assumption (environment
//! edges that must be taken infinitely often whenever their source recurs),
//! such that the system wins under the combined assumption.

pub mod bench;
pub mod error;
pub mod fair;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod pipeline;
pub mod safety;
pub mod solve;
pub mod stochastic;
pub mod synthesis;

pub use error::{Error, Result};
pub use game::{
    induced_structure, parity_form, Edge, EdgeSet, GameBuilder, GameGraph, LassoPlay, LassoWord,
    Letter, MemorylessStrategy, Objective, Owner, Player, Priorities, State, StateSet, Weight,
};
pub use graph::{Arena, Skeleton};
pub use solve::{attractor, cooperative_win, solve, zielonka, SolveResult};
