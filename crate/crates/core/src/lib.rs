//! Soft constraint problems over c-semirings, mappings between semirings,
//! and the translation of problems along those mappings.
//!
//! The crate is organised bottom-up:
//!
//! - [`semiring`]: carriers, operations, the induced order, axiom checking,
//!   congruences and quotients;
//! - [`mapping`]: semiring maps and certification of their properties;
//! - [`scsp`]: constraint systems, constraints, problems and the solver;
//! - [`abstraction`]: translation, recovery of concrete optima, witness
//!   problem constructions and randomized verification procedures;
//! - [`catalog`]: small finite c-semirings enumerated for exhaustive tests;
//! - [`json`]: the file formats used by the command-line tool.

pub mod abstraction;
pub mod catalog;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod mapping;
pub mod rational;
pub mod report;
pub mod scsp;
pub mod semiring;
pub mod value;

pub use abstraction::{recover_optima, translate, verify_theorem, Guarantee, RecoveryResult, TheoremId, VerifyBounds};
pub use error::{Error, Result};
pub use mapping::{check_property, GaloisPair, Mapping, PropertyKind};
pub use rational::Rational;
pub use report::{Budget, CertificationReport, PropertyReport, Verdict, WitnessItem};
pub use scsp::{Constraint, ConstraintSystem, Problem, SolutionTable};
pub use semiring::{check_axioms, Semiring, SemiringKind, Table};
pub use value::Value;
