//! Approximation algorithms for Parallel Min-Sum Set Cover.
//!
//! Sets are jobs with machine-dependent costs; an element is covered at the
//! finish time of the first set containing it. [`scheduler::pmssc_greedy`]
//! repeatedly asks a Parallel Densest Subfamily solver ([`pds`]) for a dense
//! batch of sets and appends it to the schedule. Related and unrelated
//! machines go through the LP rounding in [`pmc`]. Exact solvers in
//! [`oracle`] provide ground truth on small instances.

pub mod bounds;
pub mod error;
pub mod fixtures;
pub mod instance;
pub mod io;
pub mod lp;
pub mod maxcov;
pub mod oracle;
pub mod pds;
pub mod pmc;
pub mod precedence;
pub mod rational;
pub mod rng;
pub mod schedule;
pub mod scheduler;

pub use error::{Error, Result};
pub use instance::{element_set, full_set, validate_instance, CostModel, ElementSet, ProblemInstance};
pub use rational::{Cost, DensityValue, Rational};
pub use schedule::{coverage, density, evaluate_schedule_cost, Assignment, Schedule};
