//! A virtual machine and algorithm library for infinite time Turing machines
//! and their club-recognizing extension: an exact ordinal clock in Cantor
//! normal form, limsup limit semantics driven by loop and translation
//! detection, repeat detection in both the plain and club senses, program
//! transforms, decision procedures and bit-exact codecs — all runnable and
//! testable at desk scale.

pub mod builder;
pub mod codec;
pub mod engine;
pub mod machine;
pub mod ordinal;
pub mod transforms;

pub use builder::{NamedProgram, ProgramBuilder};
pub use engine::{Budgets, RunOutcome};
pub use machine::{Configuration, Program, Real};
pub use ordinal::{ClubClassSpec, OrdinalNotation};
