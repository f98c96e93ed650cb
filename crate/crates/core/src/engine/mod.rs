//! The transfinite runner. Drives successor steps, resolves limit stages by
//! loop and translation detection, maintains the normal-form clock, and
//! detects repeating computations.
//!
//! Stage dispatch: a successor step takes stage `s` to `s+1`. When the
//! current segment provably cycles, the runner jumps to the least limit of
//! the current level: segments of steps reach multiples of `w`, looping
//! sequences of level-k limit snapshots reach multiples of `w^(k+1)`. A
//! materialized limit in the club class gives the cardinal state for
//! club-recognizing programs, the limit state otherwise.
//!
//! The clock convention throughout: `Halted.clock` is the least stage whose
//! configuration is in the halt state.

pub mod extrapolate;
pub mod repeat;
pub mod trace;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::machine::{
    initial_configuration, limit_configuration, step, Configuration, LimitKind, Program, Real,
};
use crate::ordinal::{ClubClassSpec, OrdinalNotation};

pub use extrapolate::{extrapolate_to_limit, verify_witness, ExtrapolationWitness, RingEntry, WitnessKind};
pub use repeat::{detect_repeat, RepeatSense, StageSnapshot};
pub use trace::{NoTrace, TraceEvent, TraceEventKind, TraceSink, WitnessInfo};

/// Sliding window of successor-step snapshots kept per segment.
const RING0_CAP: usize = 4096;
/// Head-record entries remembered for translation anchoring.
const RECORDS_CAP: usize = 512;
/// Translation anchors tried per new record.
const TRANSLATION_CANDIDATES: usize = 32;

/// Resource limits making every run total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum successor steps between limit resolutions.
    pub step_budget: u64,
    /// Maximum snapshots accumulated per limit level between resets.
    pub level_budget: u32,
    /// Maximum nesting of limit levels; stages stay below `w^level_depth`.
    pub level_depth: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            step_budget: 100_000,
            level_budget: 64,
            level_depth: 4,
        }
    }
}

/// Why a run could not be resolved. Budget exhaustion is an outcome, not a
/// fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnresolvedReason {
    /// Successor-step budget exhausted inside one segment.
    StepBudget,
    /// Too many snapshots at one limit level without a detected loop.
    LevelBudget,
    /// The run would cross a limit level beyond the configured depth.
    LevelDepth,
    /// The clock left the representable notation universe.
    OrdinalDepth,
    /// An oracle declined to answer.
    OracleUnknown,
    /// An externally imposed total-step cap was reached.
    StepCap,
}

impl fmt::Display for UnresolvedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            UnresolvedReason::StepBudget => "step-budget",
            UnresolvedReason::LevelBudget => "level-budget",
            UnresolvedReason::LevelDepth => "level-depth",
            UnresolvedReason::OrdinalDepth => "ordinal-depth",
            UnresolvedReason::OracleUnknown => "oracle-unknown",
            UnresolvedReason::StepCap => "step-cap",
        };
        write!(f, "{s}")
    }
}

/// The engine's total-function answer for a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted {
        output: Real,
        clock: OrdinalNotation,
    },
    Repeating {
        from: OrdinalNotation,
        to: OrdinalNotation,
        sense: RepeatSense,
    },
    Unresolved {
        reason: UnresolvedReason,
        stage: OrdinalNotation,
    },
}

impl RunOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }
}

/// A run outcome plus the club-stage configuration sequence encountered.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub outcome: RunOutcome,
    pub club_stages: Vec<(OrdinalNotation, Configuration)>,
}

/// Error for [`run_until_stage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UntilError {
    HaltedEarly { clock: OrdinalNotation },
    Unresolved { reason: UnresolvedReason, stage: OrdinalNotation },
}

#[derive(Debug, Clone, Default)]
pub(crate) struct SessionOptions {
    pub until: Option<OrdinalNotation>,
    pub no_repeat_outcome: bool,
    /// Driver mode: never materialize club stages; report the boundary.
    pub inhibit_club_jumps: bool,
}

#[derive(Debug)]
pub(crate) enum Tick {
    Stepped,
    LimitReached,
    /// Driver mode only: extrapolation proved the segment runs into the next
    /// club stage; nothing was changed.
    ClubBoundary,
    Outcome(RunOutcome),
}

#[derive(Clone)]
struct Acc {
    ones: [Real; 3],
    fresh: bool,
}

impl Acc {
    fn new() -> Self {
        Acc {
            ones: [Real::zeros(), Real::zeros(), Real::zeros()],
            fresh: true,
        }
    }

    fn reset(&mut self) {
        *self = Acc::new();
    }

    fn absorb_step(&mut self, cfg: &Configuration, head: usize, write: [bool; 3]) {
        if self.fresh {
            for t in 0..3 {
                self.ones[t] = Real::or(&self.ones[t], &cfg.tapes[t]);
            }
            self.fresh = false;
        } else {
            for t in 0..3 {
                if write[t] {
                    self.ones[t].set(head, true);
                }
            }
        }
    }

    fn fold(&mut self, other: &[Real; 3]) {
        for t in 0..3 {
            self.ones[t] = Real::or(&self.ones[t], &other[t]);
        }
        self.fresh = false;
    }

    fn fold_config(&mut self, cfg: &Configuration) {
        self.fold(&cfg.tapes);
    }
}

/// One in-progress run. Strictly sequential; distinct sessions share nothing.
pub(crate) struct Session<'p> {
    program: &'p Program,
    club: ClubClassSpec,
    budgets: Budgets,
    opts: SessionOptions,
    pub(crate) clock: OrdinalNotation,
    pub(crate) config: Configuration,
    // Level-0 segment state.
    ring0: VecDeque<RingEntry>,
    ring0_base: u64,
    ring0_hash: HashMap<u64, Vec<u64>>,
    records: VecDeque<u64>,
    max_head: usize,
    steps_in_segment: u64,
    suppress_extrapolation: bool,
    // Limit-level rings; index k-1 holds snapshots at level-k stages.
    rings: Vec<Vec<RingEntry>>,
    acc_levels: Vec<Acc>,
    // Repeat machinery over designated stages.
    repeat_snaps: Vec<StageSnapshot>,
    acc_repeat: Acc,
    pub(crate) club_stages: Vec<(OrdinalNotation, Configuration)>,
    pub(crate) total_steps: u64,
}

fn config_hash(c: &Configuration) -> u64 {
    let mut h = DefaultHasher::new();
    c.hash(&mut h);
    h.finish()
}

impl<'p> Session<'p> {
    pub(crate) fn new(
        program: &'p Program,
        start: Configuration,
        club: ClubClassSpec,
        budgets: Budgets,
        opts: SessionOptions,
    ) -> Self {
        let depth = budgets.level_depth.max(1) as usize;
        let mut s = Session {
            program,
            club,
            budgets,
            opts,
            clock: OrdinalNotation::zero(),
            config: start,
            ring0: VecDeque::new(),
            ring0_base: 0,
            ring0_hash: HashMap::new(),
            records: VecDeque::new(),
            max_head: 0,
            steps_in_segment: 0,
            suppress_extrapolation: false,
            rings: vec![Vec::new(); depth],
            acc_levels: vec![Acc::new(); depth],
            repeat_snaps: Vec::new(),
            acc_repeat: Acc::new(),
            club_stages: Vec::new(),
            total_steps: 0,
        };
        s.reset_segment();
        s
    }

    fn reset_segment(&mut self) {
        self.ring0.clear();
        self.ring0_hash.clear();
        self.records.clear();
        self.ring0_base = 0;
        self.steps_in_segment = 0;
        self.suppress_extrapolation = false;
        self.max_head = self.config.head;
        self.push_ring0(RingEntry::of_config(self.config.clone()));
        self.records.push_back(0);
    }

    fn push_ring0(&mut self, entry: RingEntry) {
        let abs = self.ring0_base + self.ring0.len() as u64;
        self.ring0_hash
            .entry(config_hash(&entry.config))
            .or_default()
            .push(abs);
        self.ring0.push_back(entry);
        if self.ring0.len() > RING0_CAP {
            self.ring0.pop_front();
            self.ring0_base += 1;
        }
        while self.records.front().is_some_and(|&r| r < self.ring0_base) {
            self.records.pop_front();
        }
    }

    fn ring0_window(&self, from_abs: u64) -> Vec<RingEntry> {
        let rel = (from_abs - self.ring0_base) as usize;
        self.ring0.iter().skip(rel).cloned().collect()
    }

    /// The designated-stage rule: clubs for club-recognizing programs,
    /// every limit otherwise.
    fn designated(&self, is_club_stage: bool) -> bool {
        if self.program.is_club_recognizing() {
            is_club_stage
        } else {
            true
        }
    }

    fn repeat_sense(&self) -> RepeatSense {
        if self.program.is_club_recognizing() {
            RepeatSense::Crittm
        } else {
            RepeatSense::Ittm
        }
    }

    /// Takes a designated-stage snapshot, resets its accumulator, and checks
    /// the repeat criterion.
    fn designated_snapshot(
        &mut self,
        sink: &mut impl TraceSink,
    ) -> Option<RunOutcome> {
        let snap = StageSnapshot {
            stage: self.clock.clone(),
            config: self.config.clone(),
            seen1: self.acc_repeat.ones.clone(),
        };
        self.repeat_snaps.push(snap);
        self.acc_repeat.reset();
        if self.opts.no_repeat_outcome {
            return None;
        }
        let j = self.repeat_snaps.len() - 1;
        let i = repeat::repeat_partner(&self.repeat_snaps, j)?;
        let from = self.repeat_snaps[i].stage.clone();
        let to = self.repeat_snaps[j].stage.clone();
        if sink.enabled() {
            sink.record(TraceEvent {
                stage: self.clock.clone(),
                kind: TraceEventKind::RepeatDetected,
                state: self.config.state,
                head: self.config.head,
                writes: Vec::new(),
                witness: None,
                unresolved: None,
            });
        }
        Some(RunOutcome::Repeating {
            from,
            to,
            sense: self.repeat_sense(),
        })
    }

    /// One unit of progress: a successor step, possibly followed by a
    /// cascade of limit resolutions.
    pub(crate) fn tick(&mut self, sink: &mut impl TraceSink) -> Tick {
        if self.config.state == self.program.halt {
            return Tick::Outcome(RunOutcome::Halted {
                output: self.config.tapes[2].clone(),
                clock: self.clock.clone(),
            });
        }
        if self.steps_in_segment >= self.budgets.step_budget {
            return Tick::Outcome(RunOutcome::Unresolved {
                reason: UnresolvedReason::StepBudget,
                stage: self.clock.clone(),
            });
        }
        let before = self.config.read();
        let head_before = self.config.head;
        let rule = *self
            .program
            .rule(self.config.state, before)
            .expect("run precondition: program is valid and total");
        let next = step(self.program, &self.config).expect("not halted");
        self.clock = self.clock.succ();
        self.steps_in_segment += 1;
        self.total_steps += 1;

        if sink.enabled() {
            let mut writes = Vec::new();
            for t in 0..3 {
                if rule.write[t] != before[t] {
                    writes.push((crate::machine::TAPE_IDS[t], head_before, rule.write[t]));
                }
            }
            sink.record(TraceEvent {
                stage: self.clock.clone(),
                kind: if next.state == self.program.halt {
                    TraceEventKind::Halt
                } else {
                    TraceEventKind::Step
                },
                state: next.state,
                head: next.head,
                writes,
                witness: None,
                unresolved: None,
            });
        }

        for acc in self.acc_levels.iter_mut() {
            acc.absorb_step(&next, head_before, rule.write);
        }
        self.acc_repeat.absorb_step(&next, head_before, rule.write);
        self.config = next;

        if self.config.state == self.program.halt || self.suppress_extrapolation {
            return Tick::Stepped;
        }

        let entry = RingEntry::of_config(self.config.clone());
        let abs = self.ring0_base + self.ring0.len() as u64;
        let witness = self.detect_level0(&entry);
        self.push_ring0(entry);
        if self.config.head > self.max_head {
            self.max_head = self.config.head;
            self.records.push_back(abs);
            if self.records.len() > RECORDS_CAP {
                self.records.pop_front();
            }
        }
        match witness {
            Some(w) => self.cascade(w, sink),
            None => Tick::Stepped,
        }
    }

    /// Exact-loop (hash assisted) and translation detection for the new
    /// level-0 entry, before it is pushed.
    fn detect_level0(&self, entry: &RingEntry) -> Option<ExtrapolationWitness> {
        if let Some(candidates) = self.ring0_hash.get(&config_hash(&entry.config)) {
            for &cand in candidates.iter().rev() {
                if cand < self.ring0_base {
                    continue;
                }
                let rel = (cand - self.ring0_base) as usize;
                if self.ring0[rel].config == entry.config {
                    let mut window = self.ring0_window(cand);
                    window.push(entry.clone());
                    return Some(extrapolate::exact_witness(&window, 0));
                }
            }
        }
        // Translations are only sought when the head breaks its record;
        // anchors are earlier record entries in the same state.
        if entry.config.head > self.max_head {
            let mut tried = 0;
            for &rec in self.records.iter().rev() {
                if tried >= TRANSLATION_CANDIDATES {
                    break;
                }
                if rec < self.ring0_base {
                    break;
                }
                let rel = (rec - self.ring0_base) as usize;
                let anchor = &self.ring0[rel].config;
                if anchor.state != entry.config.state || anchor.head >= entry.config.head {
                    continue;
                }
                tried += 1;
                let mut window = self.ring0_window(rec);
                window.push(entry.clone());
                if let Some(w) = extrapolate::try_translation(&window, 0) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Resolves the pending limit and climbs levels while snapshot rings
    /// keep looping.
    fn cascade(&mut self, first: ExtrapolationWitness, sink: &mut impl TraceSink) -> Tick {
        let mut witness = first;
        let mut level: u32 = 1;
        loop {
            if level + 1 > self.budgets.level_depth {
                return Tick::Outcome(RunOutcome::Unresolved {
                    reason: UnresolvedReason::LevelDepth,
                    stage: self.clock.clone(),
                });
            }
            let pow = match OrdinalNotation::omega_pow(OrdinalNotation::finite(level as u64)) {
                Ok(p) => p,
                Err(_) => {
                    return Tick::Outcome(RunOutcome::Unresolved {
                        reason: UnresolvedReason::OrdinalDepth,
                        stage: self.clock.clone(),
                    })
                }
            };
            let target = match self.clock.next_multiple_of(&pow) {
                Ok(t) => t,
                Err(_) => {
                    return Tick::Outcome(RunOutcome::Unresolved {
                        reason: UnresolvedReason::OrdinalDepth,
                        stage: self.clock.clone(),
                    })
                }
            };
            if let Some(until) = &self.opts.until {
                if target > *until {
                    if level == 1 {
                        self.suppress_extrapolation = true;
                    }
                    return if level == 1 { Tick::Stepped } else { Tick::LimitReached };
                }
            }
            let is_club = self.club.contains(&target);
            let club_recognized = is_club && self.program.is_club_recognizing();
            if club_recognized && self.opts.inhibit_club_jumps {
                if level == 1 {
                    self.suppress_extrapolation = true;
                }
                return Tick::ClubBoundary;
            }
            let kind = if club_recognized {
                LimitKind::ClubStage
            } else {
                LimitKind::OrdinaryLimit
            };
            let limit_cfg = limit_configuration(witness.limsups.clone(), kind, self.program)
                .expect("cardinal state checked via club_recognized");

            for acc in self.acc_levels.iter_mut() {
                acc.fold(&witness.interval_ones);
                acc.fold_config(&limit_cfg);
            }
            self.acc_repeat.fold(&witness.interval_ones);
            self.acc_repeat.fold_config(&limit_cfg);

            self.clock = target;
            self.config = limit_cfg;

            if sink.enabled() {
                let (translation, period, shift) = match witness.kind {
                    WitnessKind::ExactLoop { period } => (false, period, 0),
                    WitnessKind::Translation { period, shift } => (true, period, shift),
                };
                sink.record(TraceEvent {
                    stage: self.clock.clone(),
                    kind: if club_recognized {
                        TraceEventKind::Club
                    } else {
                        TraceEventKind::Limit
                    },
                    state: self.config.state,
                    head: self.config.head,
                    writes: Vec::new(),
                    witness: Some(WitnessInfo {
                        translation,
                        period,
                        shift,
                    }),
                    unresolved: None,
                });
            }

            if club_recognized {
                self.club_stages
                    .push((self.clock.clone(), self.config.clone()));
            }
            if self.designated(club_recognized) {
                if let Some(outcome) = self.designated_snapshot(sink) {
                    return Tick::Outcome(outcome);
                }
            }

            // Lower levels restart beneath the new stage.
            self.reset_segment();
            let ring_index = (level - 1) as usize;
            for r in self.rings.iter_mut().take(ring_index) {
                r.clear();
            }
            for acc in self.acc_levels.iter_mut().take(ring_index) {
                acc.reset();
            }
            let seen1 = self.acc_levels[ring_index].ones.clone();
            self.acc_levels[ring_index].reset();
            self.rings[ring_index].push(RingEntry {
                config: self.config.clone(),
                seen1: Some(seen1),
            });

            match extrapolate_to_limit(&self.rings[ring_index], false) {
                Some(w) => {
                    witness = w;
                    level += 1;
                }
                None => {
                    if self.rings[ring_index].len() > self.budgets.level_budget as usize {
                        return Tick::Outcome(RunOutcome::Unresolved {
                            reason: UnresolvedReason::LevelBudget,
                            stage: self.clock.clone(),
                        });
                    }
                    return Tick::LimitReached;
                }
            }
        }
    }

    /// Driver-mode club jump: installs the configuration at the next club
    /// stage directly. `tapes` are the limsups over the skipped interval and
    /// `interval_ones` the cells that showed a one somewhere in it.
    pub(crate) fn install_club_stage(
        &mut self,
        tapes: [Real; 3],
        interval_ones: [Real; 3],
        sink: &mut impl TraceSink,
    ) -> Result<Option<RunOutcome>, RunOutcome> {
        let target = match self.club.next_above(&self.clock) {
            Ok(t) => t,
            Err(_) => {
                return Err(RunOutcome::Unresolved {
                    reason: UnresolvedReason::OrdinalDepth,
                    stage: self.clock.clone(),
                })
            }
        };
        let cfg = limit_configuration(tapes, LimitKind::ClubStage, self.program)
            .expect("driver requires a cardinal state");
        for acc in self.acc_levels.iter_mut() {
            acc.fold(&interval_ones);
            acc.fold_config(&cfg);
        }
        self.acc_repeat.fold(&interval_ones);
        self.acc_repeat.fold_config(&cfg);
        self.clock = target;
        self.config = cfg;
        if sink.enabled() {
            sink.record(TraceEvent {
                stage: self.clock.clone(),
                kind: TraceEventKind::Club,
                state: self.config.state,
                head: self.config.head,
                writes: Vec::new(),
                witness: Some(WitnessInfo {
                    translation: false,
                    period: 1,
                    shift: 0,
                }),
                unresolved: None,
            });
        }
        self.club_stages
            .push((self.clock.clone(), self.config.clone()));
        let outcome = self.designated_snapshot(sink);
        self.reset_segment();
        for r in self.rings.iter_mut() {
            r.clear();
        }
        for acc in self.acc_levels.iter_mut() {
            acc.reset();
        }
        Ok(outcome)
    }

    /// Runs until an outcome.
    pub(crate) fn drive(&mut self, sink: &mut impl TraceSink) -> RunOutcome {
        loop {
            match self.tick(sink) {
                Tick::Outcome(o) => return o,
                Tick::ClubBoundary => {
                    unreachable!("club boundaries only arise in driver mode")
                }
                _ => {}
            }
        }
    }

    /// Advances at most `n` more successor steps; `None` when the grant is
    /// used up without an outcome. A halt reached by the final granted step
    /// is still reported (producing the outcome costs no step).
    pub(crate) fn advance_steps(
        &mut self,
        n: u64,
        sink: &mut impl TraceSink,
    ) -> Option<RunOutcome> {
        let cap = self.total_steps + n;
        loop {
            if self.config.state != self.program.halt && self.total_steps >= cap {
                return None;
            }
            match self.tick(sink) {
                Tick::Outcome(o) => return Some(o),
                Tick::ClubBoundary => unreachable!("club boundaries only arise in driver mode"),
                _ => {}
            }
        }
    }
}

/// Runs `p` on input `x` under club class `A` within budgets.
///
/// Cardinal-free programs are run as plain machines: the club class is
/// ignored and every limit stage uses the limit state.
pub fn run(p: &Program, x: &Real, club: &ClubClassSpec, budgets: &Budgets) -> RunOutcome {
    run_report(p, x, club, budgets).outcome
}

/// Like [`run`], also returning the club-stage configuration sequence.
pub fn run_report(p: &Program, x: &Real, club: &ClubClassSpec, budgets: &Budgets) -> RunReport {
    run_report_with_sink(p, x, club, budgets, &mut NoTrace)
}

/// Like [`run`], recording a trace.
pub fn run_traced(
    p: &Program,
    x: &Real,
    club: &ClubClassSpec,
    budgets: &Budgets,
) -> (RunOutcome, Vec<TraceEvent>) {
    let mut events = Vec::new();
    let outcome = run_report_with_sink(p, x, club, budgets, &mut events).outcome;
    (outcome, events)
}

pub fn run_report_with_sink(
    p: &Program,
    x: &Real,
    club: &ClubClassSpec,
    budgets: &Budgets,
    sink: &mut impl TraceSink,
) -> RunReport {
    run_from_with_sink(p, initial_configuration(p, x), club, budgets, sink)
}

/// Runs from an arbitrary starting configuration, clock starting at zero.
pub fn run_from_with_sink(
    p: &Program,
    start: Configuration,
    club: &ClubClassSpec,
    budgets: &Budgets,
    sink: &mut impl TraceSink,
) -> RunReport {
    let mut session = Session::new(p, start, club.clone(), budgets.clone(), SessionOptions::default());
    let outcome = session.drive(sink);
    if sink.enabled() {
        if let RunOutcome::Unresolved { reason, stage } = &outcome {
            sink.record(TraceEvent {
                stage: stage.clone(),
                kind: TraceEventKind::Unresolved,
                state: session.config.state,
                head: session.config.head,
                writes: Vec::new(),
                witness: None,
                unresolved: Some(*reason),
            });
        }
    }
    RunReport {
        outcome,
        club_stages: session.club_stages,
    }
}

/// The configuration at stage `target` exactly.
pub fn run_until_stage(
    p: &Program,
    x: &Real,
    club: &ClubClassSpec,
    target: &OrdinalNotation,
    budgets: &Budgets,
) -> Result<Configuration, UntilError> {
    let opts = SessionOptions {
        until: Some(target.clone()),
        no_repeat_outcome: true,
        inhibit_club_jumps: false,
    };
    let mut session = Session::new(
        p,
        initial_configuration(p, x),
        club.clone(),
        budgets.clone(),
        opts,
    );
    loop {
        if session.clock == *target {
            return Ok(session.config.clone());
        }
        match session.tick(&mut NoTrace) {
            Tick::Outcome(RunOutcome::Halted { clock, .. }) => {
                return Err(UntilError::HaltedEarly { clock })
            }
            Tick::Outcome(RunOutcome::Unresolved { reason, stage }) => {
                return Err(UntilError::Unresolved { reason, stage })
            }
            Tick::Outcome(RunOutcome::Repeating { .. }) => {
                unreachable!("repeat outcomes disabled in until mode")
            }
            _ => {}
        }
    }
}
