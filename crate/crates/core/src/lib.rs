//! Job-shop scheduling with sequence-dependent setup times.
//!
//! Every job visits every machine exactly once in its own routing order,
//! and a machine must be set up between consecutive operations (and before
//! its first one); the setup duration depends on the ordered pair of setup
//! types involved. The goal is a short makespan.
//!
//! The crate builds schedules constructively: a schedule generation scheme
//! repeatedly picks one operation from an eligible set and places it on its
//! machine, either appended at the end of the current sequence or inserted
//! into an earlier idle gap. Six schemes are provided ([`sgs::SgsKind`]),
//! differing in how aggressively the eligible set is pruned and whether
//! insertion is allowed. The pick is guided by one of nine priority rules
//! ([`rules::RuleKind`]), deterministically or with biased random sampling
//! over many passes ([`sampling`]).
//!
//! Supporting modules:
//! - [`model`]: instances, setup matrices, schedules, feasibility checks.
//! - [`timing`]: partial schedules, earliest appended/inserted starts.
//! - [`classify`]: witness-producing membership tests for the semi-active,
//!   active, and two non-delay schedule classes.
//! - [`enumerate`]: exhaustive expansion of a scheme's decision tree, used
//!   to audit which classes still contain an optimal schedule.
//! - [`instances`]: text format, random generators, benchmark variants.
//! - [`report`]: aggregate tables over benchmark sweeps.
//! - [`gantt`]: SVG charts.
//! - [`fixtures`]: small worked instances used throughout the tests.

pub mod classify;
pub mod enumerate;
pub mod fixtures;
pub mod gantt;
pub mod instances;
pub mod model;
pub mod report;
pub mod rules;
pub mod sampling;
pub mod sgs;
pub mod timing;

pub use model::{Instance, OpId, Schedule, SetupMatrix, Time};
pub use rules::RuleKind;
pub use sgs::SgsKind;
