//! Sequential composition.

use crate::builder::NamedProgram;
use super::TransformError;

pub fn compose_sequential(_p: &NamedProgram, _q: &NamedProgram) -> Result<NamedProgram, TransformError> {
    todo!()
}
