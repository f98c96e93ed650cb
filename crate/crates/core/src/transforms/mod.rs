//! Program transforms, decision procedures, composition and the dovetailing
//! scheduler.

mod compose;
mod count;
mod dovetail;
mod flags;
mod oracle;
mod sim;
mod skeletons;
mod star;
mod tilde;

pub use compose::compose_sequential;
pub use count::{cardinal_step_count_through, count_through, COUNT_THROUGH_PAD};
pub use dovetail::{dovetail, CensusRecord};
pub use flags::{
    decide_halting, decide_stabilization, flag_on_output_transform, flag_transform,
    stabilization_watcher, HaltingAnswer, StabilizationVerdict, Verdict,
};
pub use oracle::{oracle_simulate, HaltingOracle, OracleAnswer, ReflectiveOracle};
pub use skeletons::{block_cell, zeta_writer_skeleton};
pub use star::star_transform;
pub use tilde::tilde_transform;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("program has no cardinal state")]
    NotClubRecognizing,
    #[error("program already has no cardinal state")]
    AlreadyPlain,
    #[error("composition requires both programs plain or both club-recognizing")]
    MixedKinds,
    #[error("generator limit exceeded: {0}")]
    GeneratorLimit(&'static str),
}
