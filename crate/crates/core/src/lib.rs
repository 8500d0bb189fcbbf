//! Base-extension semantics for ecumenical propositional logic.
//!
//! The crate is organized bottom-up:
//!
//! - [`formula`]: ecumenical formulas, parsing, rendering, the
//!   double-negation translation.
//! - [`base`]: atomic bases (sets of rules over basic sentences), the
//!   deducibility engine, derivation checking, bot-completion.
//! - [`universe`]: finite enumerated families of bases used to evaluate
//!   extension-quantified semantic clauses.
//! - [`semantics`]: weak (local/global) and strong validity.
//! - [`prover`]: natural-deduction proof objects and checking, plus an exact
//!   decision procedure for strong validity.
//! - [`simulation`]: the atomic simulation of natural deduction -
//!   formula-indexed bases, degree-directed normalization, and the
//!   round-trip that manufactures checked proofs from atomic derivations.
//! - [`sampling`]: seeded random generators for formulas, bases, proofs and
//!   derivations.
//! - [`suite`]: the bundled theorem suite run by the CLI.

pub mod base;
pub mod formula;
pub mod prover;
pub mod sampling;
pub mod semantics;
pub mod simulation;
pub mod suite;
pub mod universe;

mod sexpr;

pub use base::{Base, AtomicDerivation, AtomicRule, DerivationError, Premise};
pub use formula::{Basic, Formula, ParseError};
pub use prover::{NDProof, ProofError, RuleKind, SequentGoal};
pub use semantics::{EvalTrace, Evaluator, Judgement, JudgementKind, SemanticsError};
pub use simulation::{AlphaMap, NBase, Redex, RedexKind, SchemaTag, SimulationError, Strategy};
pub use suite::{theorem_suite, SuiteError, SuiteItem};
pub use universe::{BaseId, Universe, UniverseConfig, UniverseError};
