//! The repeat-detecting simulator over configuration codes.

use crate::builder::NamedProgram;
use super::TransformError;

pub fn star_transform(_p: &NamedProgram) -> Result<NamedProgram, TransformError> {
    todo!()
}
