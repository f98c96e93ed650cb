//! Triangular dovetailing over a finite corpus: round `r` grants one step
//! to programs `1..r`, so after `R` rounds program `i` has received
//! `max(0, R - i + 1)` steps.

use crate::builder::NamedProgram;
use crate::engine::{NoTrace, RunOutcome, Session, SessionOptions};
use crate::machine::{initial_configuration, Real};
use crate::ordinal::ClubClassSpec;
use crate::Budgets;

/// Census entry for one dovetailed program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    /// 1-based program index.
    pub id: usize,
    /// Outcome reached within the granted steps, or `None` while running.
    pub outcome: Option<RunOutcome>,
    /// Steps granted by the scheduler: `max(0, rounds - id + 1)`.
    pub steps_granted: u64,
    /// Round at which the outcome was determined, or the final round.
    pub round: u64,
}

/// Runs the triangular scheduler on input 0 and reports per-program
/// outcomes. Limit resolutions do not count against granted steps; they
/// stand for the infinitely many steps the grants approximate.
pub fn dovetail(
    programs: &[NamedProgram],
    rounds: u64,
    club: &ClubClassSpec,
    budgets: &Budgets,
) -> Vec<CensusRecord> {
    let zero = Real::zeros();
    let mut sessions: Vec<Session> = programs
        .iter()
        .map(|p| {
            Session::new(
                &p.program,
                initial_configuration(&p.program, &zero),
                club.clone(),
                budgets.clone(),
                SessionOptions::default(),
            )
        })
        .collect();
    let mut records: Vec<CensusRecord> = (1..=programs.len())
        .map(|id| CensusRecord {
            id,
            outcome: None,
            steps_granted: 0,
            round: rounds,
        })
        .collect();
    for round in 1..=rounds {
        for (idx, session) in sessions.iter_mut().enumerate() {
            if (idx as u64) >= round {
                break;
            }
            let record = &mut records[idx];
            record.steps_granted += 1;
            if record.outcome.is_some() {
                continue;
            }
            if let Some(outcome) = session.advance_steps(1, &mut NoTrace) {
                record.outcome = Some(outcome);
                record.round = round;
            }
        }
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{ProgramBuilder, ANY, KEEP};
    use crate::machine::Move;

    fn halter_after(n: usize) -> NamedProgram {
        let mut b = ProgramBuilder::new();
        let mut prev = b.state("start");
        b.set_start(prev);
        for i in 1..n {
            let s = b.state(&format!("s{i}"));
            b.rule(prev, ANY, KEEP, Move::Right, s);
            prev = s;
        }
        b.rule(prev, ANY, KEEP, Move::Right, b.halt_state());
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, b.halt_state());
        b.finish()
    }

    #[test]
    fn triangular_grants() {
        let ps: Vec<NamedProgram> = (0..3).map(|_| halter_after(10)).collect();
        let records = dovetail(&ps, 3, &ClubClassSpec::AllLimits, &Budgets::default());
        let grants: Vec<u64> = records.iter().map(|r| r.steps_granted).collect();
        assert_eq!(grants, vec![3, 2, 1]);
    }

    #[test]
    fn single_program_five_rounds() {
        let ps = vec![halter_after(3)];
        let records = dovetail(&ps, 5, &ClubClassSpec::AllLimits, &Budgets::default());
        assert_eq!(records[0].steps_granted, 5);
        assert!(matches!(
            records[0].outcome,
            Some(RunOutcome::Halted { .. })
        ));
        assert_eq!(records[0].round, 3);
    }
}
