//! Shared machinery for transforms that simulate a program cell-for-cell.
//!
//! The simulated program's cell `c` lives at cell `2c + 1` of the generated
//! program; all three tapes relocate together, so one read at an odd cell
//! yields the whole simulated read triple. Even cells belong to the
//! simulator:
//!
//! * cell 0 of the `beacon` tape holds a constant 1, the anchor of leftward
//!   walks; even beacon cells >= 2 hold a transient return marker during
//!   flag trips;
//! * cell 0 of the `flag` tape is the designated flag, flashed (1 then 0)
//!   on hook events and readable instantly at limit and club stages;
//! * for watchers, cell 2 of the flag tape is raised once the simulated
//!   program halts, switching limit dispatch to an idle spin.
//!
//! Every limit dispatch sweeps the first `region_bound` marker cells clean
//! before resuming, so the return-marker invariant survives limit stages
//! for programs whose head stays below `region_bound`. Inputs must be
//! spread to odd cells with [`relocate_input`].

use std::collections::BTreeMap;

use crate::builder::{
    read_one, write_one, NamedProgram, ProgramBuilder, ReadPat, WriteBit, WriteSpec, ANY, KEEP,
};
use crate::machine::{code_bits, Move, Real, StateId};

/// Default bound on the simulated head region for marker-track sweeps.
pub(crate) const DEFAULT_REGION_BOUND: usize = 16;

/// When the generated program flashes its flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FlashRule {
    EveryInstruction,
    OnOutputChange,
}

/// What the generated program does when the simulated program halts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum HaltBehavior {
    /// Halt the generated program too.
    HaltProgram,
    /// Raise the idle marker and spin awaiting a club stage.
    IdleForClub,
}

/// Behaviour of the generated program's cardinal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CardinalBehavior {
    /// No cardinal state: the generated program is plain.
    None,
    /// Resume the simulated program's own cardinal state.
    SimulateSource,
    /// Read the flag and halt with the verdict: flag 0 writes a 1 (yes),
    /// flag 1 writes a 0 (no).
    VerdictAndHalt,
}

pub(crate) struct SimSpec<'a> {
    pub source: &'a NamedProgram,
    pub flash: FlashRule,
    /// Tape carrying the flag at cell 0 (and the idle marker at cell 2).
    pub flag_tape: usize,
    /// Tape carrying the home beacon and return markers; must differ from
    /// the flag tape.
    pub beacon_tape: usize,
    pub on_halt: HaltBehavior,
    pub cardinal: CardinalBehavior,
    pub region_bound: usize,
}

/// Spreads an input across odd cells, matching the relocation convention.
pub fn relocate_input(x: &Real) -> Real {
    x.interleave(2, 1)
}

struct Emitter {
    b: ProgramBuilder,
    flag_tape: usize,
    beacon_tape: usize,
    region_bound: usize,
    exec: BTreeMap<StateId, StateId>,
    movers: BTreeMap<(StateId, Move), StateId>,
    trips: BTreeMap<(StateId, Move), StateId>,
}

impl Emitter {
    /// Two no-op moves in `mv`, landing on the next relocated cell, then
    /// `target`.
    fn stride_move(&mut self, target: StateId, mv: Move) -> StateId {
        if let Some(&s) = self.movers.get(&(target, mv)) {
            return s;
        }
        let second = self.b.fresh("mv");
        self.b.rule(second, ANY, KEEP, mv, target);
        let first = self.b.fresh("mv");
        self.b.rule(first, ANY, KEEP, mv, second);
        self.movers.insert((target, mv), first);
        first
    }

    /// Walk left in even strides to the home beacon. The returned state is
    /// entered standing on an odd cell. The exit rule executes at cell 0
    /// with `home_write`/`home_move` into `after_home`.
    fn walk_home(
        &mut self,
        label: &str,
        home_write: WriteSpec,
        home_move: Move,
        after_home: StateId,
    ) -> StateId {
        let odd = self.b.fresh(&format!("{label}_o"));
        let even = self.b.fresh(&format!("{label}_e"));
        self.b.rule(odd, ANY, KEEP, Move::Left, even);
        let beacon_clear = read_one(self.beacon_tape, false);
        let beacon_set = read_one(self.beacon_tape, true);
        self.b.rule(even, beacon_clear, KEEP, Move::Left, odd);
        self.b
            .rule(even, beacon_set, home_write, home_move, after_home);
        odd
    }

    /// The flag trip. Entered standing on the even cell right of the
    /// simulated cell (the caller's write stepped onto it): drop a marker,
    /// walk home, flash the flag at cell 0, walk back to the marker, clear
    /// it, then perform the simulated move `mv` into `target`.
    fn flag_trip(&mut self, target: StateId, mv: Move) -> StateId {
        if let Some(&s) = self.trips.get(&(target, mv)) {
            return s;
        }
        let mover = self.stride_move(target, mv);

        let back_odd = self.b.fresh("back_o");
        let back_even = self.b.fresh("back_e");
        self.b.rule(back_odd, ANY, KEEP, Move::Right, back_even);
        let beacon_clear = read_one(self.beacon_tape, false);
        let beacon_set = read_one(self.beacon_tape, true);
        self.b
            .rule(back_even, beacon_clear, KEEP, Move::Right, back_odd);
        self.b.rule(
            back_even,
            beacon_set,
            write_one(self.beacon_tape, false),
            Move::Left,
            mover,
        );

        let flash_off = self.b.fresh("flash0");
        self.b.rule(
            flash_off,
            ANY,
            write_one(self.flag_tape, false),
            Move::Right,
            back_odd,
        );
        let flash_bounce = self.b.fresh("flashb");
        self.b.rule(flash_bounce, ANY, KEEP, Move::Left, flash_off);

        // The walk-home exit rule runs at cell 0 and writes the flag's 1.
        let home = self.walk_home(
            "trip",
            write_one(self.flag_tape, true),
            Move::Right,
            flash_bounce,
        );

        let drop = self.b.fresh("drop");
        self.b.rule(
            drop,
            ANY,
            write_one(self.beacon_tape, true),
            Move::Left,
            home,
        );
        self.trips.insert((target, mv), drop);
        drop
    }

    /// Sweeps `region_bound` marker cells clean, walks home, and resumes
    /// `exec_state` standing on cell 1 (the simulated head is at cell 0).
    /// The returned state is entered standing on cell 1.
    fn resume_chain(&mut self, exec_state: StateId) -> StateId {
        let home = self.walk_home("res", KEEP, Move::Right, exec_state);
        let mut next = home; // runs at the odd cell right of the last swept even
        for _ in 0..self.region_bound {
            let even = self.b.fresh("sw_e");
            self.b.rule(
                even,
                ANY,
                write_one(self.beacon_tape, false),
                Move::Right,
                next,
            );
            let odd = self.b.fresh("sw_o");
            self.b.rule(odd, ANY, KEEP, Move::Right, even);
            next = odd;
        }
        next
    }
}

/// Emits the simulation program for `spec`.
pub(crate) fn emit_simulation(spec: &SimSpec) -> NamedProgram {
    assert_ne!(
        spec.flag_tape, spec.beacon_tape,
        "flag and beacon tapes must differ"
    );
    let src = &spec.source.program;
    let mut b = ProgramBuilder::new();

    let mut exec: BTreeMap<StateId, StateId> = BTreeMap::new();
    for q in 0..src.n_states {
        if q == src.halt {
            continue;
        }
        let name = format!("s_{}", spec.source.state_name(q));
        exec.insert(q, b.state(&name));
    }

    let start = b.state("boot");
    b.set_start(start);
    b.rule(
        start,
        ANY,
        write_one(spec.beacon_tape, true),
        Move::Right,
        exec[&src.start],
    );

    let mut em = Emitter {
        b,
        flag_tape: spec.flag_tape,
        beacon_tape: spec.beacon_tape,
        region_bound: spec.region_bound,
        exec,
        movers: BTreeMap::new(),
        trips: BTreeMap::new(),

    };
    let halt = em.b.halt_state();

    // Idle entries for watchers. The odd entry is a walk-home expecting to
    // stand on an odd cell; the even entry bounces right first.
    let idle_entries = match spec.on_halt {
        HaltBehavior::HaltProgram => None,
        HaltBehavior::IdleForClub => {
            let spin = em.b.spin_pair("idle");
            let raise = em.b.fresh("idle_mark");
            em.b.rule(
                raise,
                ANY,
                write_one(spec.flag_tape, true),
                Move::Right,
                spin,
            );
            let step1 = em.b.fresh("idle_step");
            em.b.rule(step1, ANY, KEEP, Move::Right, raise);
            let odd_entry = em.walk_home("idle", KEEP, Move::Right, step1);
            let even_entry = em.b.fresh("idle_in");
            em.b.rule(even_entry, ANY, KEEP, Move::Right, odd_entry);
            Some((odd_entry, even_entry))
        }
    };

    for q in 0..src.n_states {
        if q == src.halt {
            continue;
        }
        let eq = em.exec[&q];
        for code in 0..8u8 {
            let bits = code_bits(code);
            let rule = *src.rule_by_code(q, code).expect("source program is total");
            let pat: ReadPat = [Some(bits[0]), Some(bits[1]), Some(bits[2])];
            let write = [wbit(rule.write[0]), wbit(rule.write[1]), wbit(rule.write[2])];
            let flash = match spec.flash {
                FlashRule::EveryInstruction => true,
                FlashRule::OnOutputChange => rule.write[2] != bits[2],
            };
            if rule.next == src.halt {
                match spec.on_halt {
                    HaltBehavior::HaltProgram => {
                        if flash {
                            let trip = em.flag_trip(halt, rule.mv);
                            em.b.rule(eq, pat, write, Move::Right, trip);
                        } else {
                            em.b.rule(eq, pat, write, rule.mv, halt);
                        }
                    }
                    HaltBehavior::IdleForClub => {
                        let (odd_entry, even_entry) = idle_entries.unwrap();
                        if flash {
                            // Flash first; the trip's mover lands on an odd
                            // cell, where the idle walk can start directly.
                            let trip = em.flag_trip(odd_entry, rule.mv);
                            em.b.rule(eq, pat, write, Move::Right, trip);
                        } else {
                            em.b.rule(eq, pat, write, Move::Left, even_entry);
                        }
                    }
                }
                continue;
            }
            let target = em.exec[&rule.next];
            if flash {
                let trip = em.flag_trip(target, rule.mv);
                em.b.rule(eq, pat, write, Move::Right, trip);
            } else {
                let mover = em.stride_move(target, rule.mv);
                em.b.rule(eq, pat, write, rule.mv, mover);
            }
        }
    }

    // Limit dispatch: the limit state runs at cell 0.
    let limit_exec = em.exec[&src.limit];
    let limit_resume = em.resume_chain(limit_exec);
    match spec.on_halt {
        HaltBehavior::HaltProgram => {
            let l = em.b.limit_state();
            em.b.rule(l, ANY, KEEP, Move::Right, limit_resume);
        }
        HaltBehavior::IdleForClub => {
            // Step to cell 2, check the idle marker; if clear, step back to
            // cell 1 and run the sweep-resume chain.
            let spin = em.b.spin_pair("idle_more");
            let check = em.b.fresh("idle_chk");
            em.b.rule(
                check,
                read_one(spec.flag_tape, true),
                KEEP,
                Move::Left,
                spin,
            );
            em.b.rule(
                check,
                read_one(spec.flag_tape, false),
                KEEP,
                Move::Left,
                limit_resume,
            );
            let step1 = em.b.fresh("limit_step");
            em.b.rule(step1, ANY, KEEP, Move::Right, check);
            let l = em.b.limit_state();
            em.b.rule(l, ANY, KEEP, Move::Right, step1);
        }
    }

    match spec.cardinal {
        CardinalBehavior::None => {}
        CardinalBehavior::SimulateSource => {
            let src_cardinal = src
                .cardinal
                .expect("SimulateSource requires a club-recognizing source");
            let cardinal_exec = em.exec[&src_cardinal];
            let resume = em.resume_chain(cardinal_exec);
            let card = em.b.state("club");
            em.b.set_cardinal(card);
            em.b.rule(card, ANY, KEEP, Move::Right, resume);
        }
        CardinalBehavior::VerdictAndHalt => {
            let card = em.b.state("club");
            em.b.set_cardinal(card);
            em.b.rule(
                card,
                read_one(spec.flag_tape, false),
                write_one(spec.flag_tape, true),
                Move::Right,
                halt,
            );
            em.b.rule(
                card,
                read_one(spec.flag_tape, true),
                write_one(spec.flag_tape, false),
                Move::Right,
                halt,
            );
        }
    }

    em.b.finish()
}

fn wbit(bit: bool) -> WriteBit {
    if bit {
        WriteBit::One
    } else {
        WriteBit::Zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relocate_input_spreads_bits() {
        let x = Real::from_support([0, 2]);
        let spread = relocate_input(&x);
        assert!(spread.get(1) && !spread.get(3) && spread.get(5));
        assert!(!spread.get(0) && !spread.get(2) && !spread.get(4));
        let periodic: Real = "(01)".parse().unwrap();
        let spread = relocate_input(&periodic);
        for c in 0..6 {
            assert_eq!(spread.get(2 * c + 1), periodic.get(c));
            assert!(!spread.get(2 * c));
        }
    }
}
