//! Count-through program generators.

use crate::builder::NamedProgram;
use crate::codec::BitCode;
use super::TransformError;

/// Overhead constant of the generated count-through programs.
pub const COUNT_THROUGH_PAD: u64 = 64;

pub fn count_through(_code: &BitCode) -> Result<NamedProgram, TransformError> {
    todo!()
}

pub fn cardinal_step_count_through(_code: &BitCode) -> Result<NamedProgram, TransformError> {
    todo!()
}
