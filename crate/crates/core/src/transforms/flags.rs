//! The flag transform and the budgeted deciders built on it.
//!
//! A flag is a designated cell flashed to signal events; its limsup at a
//! limit stage reveals whether the events happened cofinally often below it.
//! The stabilization decider simulates a program, flashes on every output
//! change, and reads the flag the moment a club stage is reached.

use crate::builder::NamedProgram;
use crate::engine::{run, Budgets, RunOutcome};
use crate::machine::Real;
use crate::ordinal::{ClubClassSpec, OrdinalNotation};

use super::sim::{
    emit_simulation, relocate_input, CardinalBehavior, FlashRule, HaltBehavior, SimSpec,
    DEFAULT_REGION_BOUND,
};
use super::tilde::tilde_transform;

const SCR: usize = 1;
const OUT: usize = 2;

/// Simulates `p` on odd cells and flashes scratch cell 0 after every
/// simulated instruction. The result halts iff `p` halts, and its flag
/// flashes cofinally iff `p` runs forever.
///
/// The result expects its input spread to odd cells; see
/// [`relocate_input`]. Even cells of the output tape carry the simulator's
/// beacon bookkeeping.
pub fn flag_transform(p: &NamedProgram) -> NamedProgram {
    emit_simulation(&SimSpec {
        source: p,
        flash: FlashRule::EveryInstruction,
        flag_tape: SCR,
        beacon_tape: OUT,
        on_halt: HaltBehavior::HaltProgram,
        cardinal: if p.program.is_club_recognizing() {
            CardinalBehavior::SimulateSource
        } else {
            CardinalBehavior::None
        },
        region_bound: DEFAULT_REGION_BOUND,
    })
}

/// Variant with the flag on the output tape, so stabilization of the output
/// tracks halting of `p`.
pub fn flag_on_output_transform(p: &NamedProgram) -> NamedProgram {
    emit_simulation(&SimSpec {
        source: p,
        flash: FlashRule::EveryInstruction,
        flag_tape: OUT,
        beacon_tape: SCR,
        on_halt: HaltBehavior::HaltProgram,
        cardinal: if p.program.is_club_recognizing() {
            CardinalBehavior::SimulateSource
        } else {
            CardinalBehavior::None
        },
        region_bound: DEFAULT_REGION_BOUND,
    })
}

/// The club-recognizing watcher deciding output stabilization of `p`:
/// simulate, flash output cell 0 on each simulated output change, idle once
/// the simulation halts, and at the first club stage write the verdict
/// (output cell 0 = 1 for yes) and halt.
pub fn stabilization_watcher(p: &NamedProgram) -> NamedProgram {
    emit_simulation(&SimSpec {
        source: p,
        flash: FlashRule::OnOutputChange,
        flag_tape: OUT,
        beacon_tape: SCR,
        on_halt: HaltBehavior::IdleForClub,
        cardinal: CardinalBehavior::VerdictAndHalt,
        region_bound: DEFAULT_REGION_BOUND,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Answer of the stabilization decider plus the club stage where the flag
/// was read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationVerdict {
    pub answer: Verdict,
    pub decided_at: Option<OrdinalNotation>,
}

/// Decides whether the output of `p` on `x` stabilizes, by running the
/// watcher under `club`. Club-recognizing `p` is simulated with its cardinal
/// state dropped. `Unknown` iff the engine could not resolve the watcher's
/// run within budget.
pub fn decide_stabilization(
    p: &NamedProgram,
    x: &Real,
    club: &ClubClassSpec,
    budgets: &Budgets,
) -> StabilizationVerdict {
    let plain;
    let source = if p.program.is_club_recognizing() {
        plain = tilde_transform(p).expect("club-recognizing program has a cardinal state");
        &plain
    } else {
        p
    };
    let watcher = stabilization_watcher(source);
    let outcome = run(&watcher.program, &relocate_input(x), club, budgets);
    match outcome {
        RunOutcome::Halted { output, clock } => {
            let answer = if output.get(0) { Verdict::Yes } else { Verdict::No };
            StabilizationVerdict {
                answer,
                decided_at: Some(club_floor(club, &clock)),
            }
        }
        _ => StabilizationVerdict {
            answer: Verdict::Unknown,
            decided_at: None,
        },
    }
}

/// The largest club member at or below `stage`.
fn club_floor(club: &ClubClassSpec, stage: &OrdinalNotation) -> OrdinalNotation {
    match club {
        ClubClassSpec::AllLimits => stage.limit_part(),
        ClubClassSpec::MultiplesOf(delta) => {
            let (q, _) = stage.divmod(delta).expect("delta is nonzero");
            delta.mul(&q).expect("no deeper than stage")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltingAnswer {
    Halts,
    Diverges,
    Unknown,
}

/// Decides the halting problem for `(p, x)` by the flag reduction: `p` halts
/// on `x` iff the flag-on-output variant stabilizes on it.
pub fn decide_halting(
    p: &NamedProgram,
    x: &Real,
    club: &ClubClassSpec,
    budgets: &Budgets,
) -> (HaltingAnswer, Option<OrdinalNotation>) {
    let plain;
    let source = if p.program.is_club_recognizing() {
        plain = tilde_transform(p).expect("club-recognizing program has a cardinal state");
        &plain
    } else {
        p
    };
    let flagged = flag_on_output_transform(source);
    let verdict = decide_stabilization(&flagged, &relocate_input(x), club, budgets);
    let answer = match verdict.answer {
        Verdict::Yes => HaltingAnswer::Halts,
        Verdict::No => HaltingAnswer::Diverges,
        Verdict::Unknown => HaltingAnswer::Unknown,
    };
    (answer, verdict.decided_at)
}
