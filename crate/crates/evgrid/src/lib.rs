//! Grid-to-vehicle energy pricing game.
//!
//! Followers (PEV groups) choose demands under a shared grid-capacity
//! constraint; their generalized Nash game is solved as a strongly monotone
//! variational inequality by hyperplane projection. The leader (the grid)
//! then sets the revenue-optimal Stackelberg price. Baseline allocators,
//! a discrete-time feedback extension, and a seeded experiment harness sit
//! on top.

pub mod baselines;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod model;
pub mod scenario;
pub mod stackelberg;
pub mod vi;

pub use error::{Error, Result};
pub use model::{Allocation, GridParams, PevgParams, Price, Scenario};
pub use stackelberg::GseOutcome;
pub use vi::{SolverConfig, VeSolution};
