//! Exact fair division of indivisible chores.
//!
//! The crate computes allocations that are proportional up to any item
//! (PROPX), or its weighted variant WPROPX, for symmetric and weighted
//! agents. It verifies the common fairness notions with exact rational
//! arithmetic and computes maximin and AnyPrice shares by exhaustive search
//! on small instances.
//!
//! Modules:
//! - [`instance`]: instances, allocations, the identical-ordering transform
//! - [`fairness`]: EF/EF1/EFX and (W)PROP/PROP1/PROPX verifiers
//! - [`oracles`]: exact MMS and APS values with witnesses
//! - [`algorithms`]: envy-cycle elimination, bid-and-take, the two ordinal
//!   algorithms and the general-to-IDO reduction
//! - [`generators`]: named hard-instance families and seeded random instances
//! - [`pof`]: price-of-fairness measurement and certification

pub mod algorithms;
pub mod error;
pub mod fairness;
pub mod generators;
pub mod instance;
pub mod oracles;
pub mod pof;
pub mod rational;

pub use algorithms::{solve_general, Algorithm, AlgorithmTrace, SolveOptions};
pub use error::{Error, Result};
pub use fairness::{FairnessReport, Notion, UpTo};
pub use instance::{load_instance, Allocation, IdoWitness, Instance, InstanceDoc};
pub use oracles::{OracleConfig, OracleValue};
pub use rational::{Alpha, Rational};
