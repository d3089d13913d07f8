//! Adaptive fault diagnosis with self-referential questions.
//!
//! Processors are Knights (always truthful), Knaves (always lying) or Normals
//! (arbitrary). Asking "is it true that P if and only if you are a Knight?"
//! gets the truth of P from Knights and Knaves alike, so as long as Normals are
//! a strict minority every reliable processor can be located by yes/no
//! questions alone. This crate provides the population model, the questioning
//! machinery, three diagnosis algorithms, an exhaustive verifier that explores
//! every possible Normal behaviour, and the scenario/sweep harness behind the
//! `faultdiag` CLI.

pub mod diagnosis;
pub mod error;
pub mod harness;
pub mod interrogation;
pub mod verifier;
pub mod world;

pub use diagnosis::{
    classify_all, find_all_knights, find_reliable_pairing, identify_normals, line_scan,
    pairing_round, Algorithm, CaseRecord, KnightReport, NormalReport, Outcome, PairingReport,
    RoundAudit, Stop,
};
pub use error::{Error, Result};
pub use interrogation::{
    predicate_truth, AlwaysNo, AlwaysYes, Answer, Branching, NormalStrategy, Predicate,
    PredicateKind, Question, Scripted, SeededRandom, Session, Transcript,
};
pub use verifier::{
    enumerate_worlds, exhaustive_check, explore_branches, popcount, question_bound, BranchOutcome,
    VerificationReport,
};
pub use world::{census, parse_world, Census, ProcessorType, World};
