//! Oracle-driven simulation.

use crate::builder::NamedProgram;
use crate::codec::BitCode;
use crate::engine::{Budgets, RunReport};
use crate::machine::Real;
use crate::ordinal::ClubClassSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleAnswer {
    Halts,
    Diverges,
    Unknown,
}

pub trait HaltingOracle {
    fn query(&mut self, program: &BitCode, input: &BitCode) -> OracleAnswer;
}

pub struct ReflectiveOracle {
    _budgets: Budgets,
}

pub fn oracle_simulate(
    _p: &NamedProgram,
    _x: &Real,
    _oracle: &mut dyn HaltingOracle,
    _club: &ClubClassSpec,
    _budgets: &Budgets,
) -> RunReport {
    todo!()
}
