//! The static machine model: three-tape programs over bits, configurations,
//! single-step semantics and the limsup limit-configuration constructor.
//!
//! One head reads and writes all three tapes at the same cell index. Tape
//! contents are [`Real`]s: infinite binary sequences that are finitely
//! supported or eventually periodic, kept in canonical form so equality is
//! structural.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of a machine state inside a [`Program`].
pub type StateId = u16;

/// Identifies one of the three tapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TapeId {
    Input = 0,
    Scratch = 1,
    Output = 2,
}

pub const TAPE_IDS: [TapeId; 3] = [TapeId::Input, TapeId::Scratch, TapeId::Output];

impl TapeId {
    pub fn short_name(self) -> &'static str {
        match self {
            TapeId::Input => "in",
            TapeId::Scratch => "scr",
            TapeId::Output => "out",
        }
    }
}

/// An infinite binary sequence with finite description: a finite prefix
/// followed by a repeating block. Finite support is the special case of an
/// all-zero block. The representation is canonical: the block is primitive
/// and the prefix is minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Real {
    prefix: Vec<bool>,
    cycle: Vec<bool>,
}

impl Real {
    /// The all-zero sequence.
    pub fn zeros() -> Self {
        Real {
            prefix: Vec::new(),
            cycle: vec![false],
        }
    }

    /// Finitely supported sequence with ones exactly at `cells`.
    pub fn from_support<I: IntoIterator<Item = usize>>(cells: I) -> Self {
        let mut prefix = Vec::new();
        for c in cells {
            if c >= prefix.len() {
                prefix.resize(c + 1, false);
            }
            prefix[c] = true;
        }
        Real {
            prefix,
            cycle: vec![false],
        }
        .canonicalized()
    }

    /// Sequence given by explicit leading bits, zero afterwards.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Real {
            prefix: bits,
            cycle: vec![false],
        }
        .canonicalized()
    }

    /// Sequence `prefix` then `cycle` repeated forever.
    pub fn from_prefix_cycle(prefix: Vec<bool>, cycle: Vec<bool>) -> Self {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        Real { prefix, cycle }.canonicalized()
    }

    fn canonicalized(mut self) -> Self {
        // Reduce the cycle to its primitive period.
        let len = self.cycle.len();
        for p in 1..len {
            if len % p == 0 && (p..len).all(|i| self.cycle[i] == self.cycle[i % p]) {
                self.cycle.truncate(p);
                break;
            }
        }
        // Absorb prefix bits that already match the cycle.
        while let Some(&last) = self.prefix.last() {
            if last == *self.cycle.last().expect("cycle nonempty") {
                self.prefix.pop();
                self.cycle.rotate_right(1);
            } else {
                break;
            }
        }
        self
    }

    pub fn get(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        if self.get(i) == bit {
            return;
        }
        if i >= self.prefix.len() {
            let plen = self.prefix.len();
            for j in plen..=i {
                let b = self.cycle[(j - plen) % self.cycle.len()];
                self.prefix.push(b);
            }
            let shift = (i + 1 - plen) % self.cycle.len();
            self.cycle.rotate_left(shift);
        }
        self.prefix[i] = bit;
        let canonical = std::mem::replace(self, Real::zeros()).canonicalized();
        *self = canonical;
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.cycle == [false]
    }

    /// True iff only finitely many ones occur.
    pub fn has_finite_support(&self) -> bool {
        self.cycle.iter().all(|b| !b)
    }

    /// Positions of ones, when finitely many. `None` otherwise.
    pub fn support(&self) -> Option<Vec<usize>> {
        if !self.has_finite_support() {
            return None;
        }
        Some(
            self.prefix
                .iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect(),
        )
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Pointwise combination of two sequences; exact on the periodic parts.
    pub fn zip_with(a: &Real, b: &Real, f: impl Fn(bool, bool) -> bool) -> Real {
        let plen = a.prefix.len().max(b.prefix.len());
        let clen = lcm(a.cycle.len(), b.cycle.len());
        let mut prefix = Vec::with_capacity(plen);
        for i in 0..plen {
            prefix.push(f(a.get(i), b.get(i)));
        }
        let mut cycle = Vec::with_capacity(clen);
        for i in plen..plen + clen {
            cycle.push(f(a.get(i), b.get(i)));
        }
        Real { prefix, cycle }.canonicalized()
    }

    pub fn or(a: &Real, b: &Real) -> Real {
        Real::zip_with(a, b, |x, y| x || y)
    }

    /// True iff some position has a one in `a` and a zero in `b`.
    pub fn one_outside(a: &Real, b: &Real) -> bool {
        !Real::zip_with(a, b, |x, y| x && !y).is_zero()
    }

    /// The sequence with the first `n` bits dropped.
    pub fn suffix_from(&self, n: usize) -> Real {
        if n <= self.prefix.len() {
            Real {
                prefix: self.prefix[n..].to_vec(),
                cycle: self.cycle.clone(),
            }
            .canonicalized()
        } else {
            let shift = (n - self.prefix.len()) % self.cycle.len();
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(shift);
            Real {
                prefix: Vec::new(),
                cycle,
            }
            .canonicalized()
        }
    }

    /// The sequence shifted right by `n` bits, with `fill` in front.
    pub fn shifted_right(&self, n: usize, fill: bool) -> Real {
        let mut prefix = vec![fill; n];
        prefix.extend_from_slice(&self.prefix);
        Real {
            prefix,
            cycle: self.cycle.clone(),
        }
        .canonicalized()
    }

    /// Spreads the sequence across cells `stride*c + offset`, zeros
    /// elsewhere: the cell-relocation convention of the simulation
    /// transforms, applied to an input.
    pub fn interleave(&self, stride: usize, offset: usize) -> Real {
        assert!(stride >= 1 && offset < stride);
        let plen = self.prefix.len() * stride + offset;
        let clen = self.cycle.len() * stride;
        let bit = |i: usize| {
            if i >= offset && (i - offset) % stride == 0 {
                self.get((i - offset) / stride)
            } else {
                false
            }
        };
        let prefix: Vec<bool> = (0..plen).map(bit).collect();
        let cycle: Vec<bool> = (plen..plen + clen).map(bit).collect();
        Real { prefix, cycle }.canonicalized()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.prefix {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        write!(f, "(")?;
        for &b in &self.cycle {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRealError {
    #[error("expected only 0/1 and one parenthesized cycle")]
    Malformed,
}

impl FromStr for Real {
    type Err = ParseRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bit = |c: char| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(ParseRealError::Malformed),
        };
        match s.find('(') {
            None => Ok(Real::from_bits(
                s.chars().map(bit).collect::<Result<_, _>>()?,
            )),
            Some(open) => {
                if !s.ends_with(')') || open + 2 > s.len() {
                    return Err(ParseRealError::Malformed);
                }
                let inner = &s[open + 1..s.len() - 1];
                if inner.is_empty() || inner.contains('(') || inner.contains(')') {
                    return Err(ParseRealError::Malformed);
                }
                let prefix: Vec<bool> = s[..open].chars().map(bit).collect::<Result<_, _>>()?;
                let cycle: Vec<bool> = inner.chars().map(bit).collect::<Result<_, _>>()?;
                Ok(Real::from_prefix_cycle(prefix, cycle))
            }
        }
    }
}

/// Head movement of a rule. Left at cell 0 clamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Right,
}

/// One transition: the next state, the three bits written, the head move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub next: StateId,
    pub write: [bool; 3],
    pub mv: Move,
}

/// Packs three read bits into a table index 0..8.
pub fn read_code(bits: [bool; 3]) -> u8 {
    (bits[0] as u8) << 2 | (bits[1] as u8) << 1 | (bits[2] as u8)
}

pub fn code_bits(code: u8) -> [bool; 3] {
    [code & 4 != 0, code & 2 != 0, code & 1 != 0]
}

/// A finite transition table with designated start, limit, halt and optional
/// cardinal states. Cardinal-free programs are plain ITTM programs; with a
/// cardinal state they are club-recognizing.
///
/// States are indices; display names live beside the program (see the
/// builder and the assembler) and do not affect identity.
#[derive(Clone, PartialEq, Eq)]
pub struct Program {
    pub n_states: u16,
    pub start: StateId,
    pub limit: StateId,
    pub halt: StateId,
    pub cardinal: Option<StateId>,
    rules: Vec<[Option<Rule>; 8]>,
}

impl Program {
    /// Assembles a program and validates it; diagnostics on failure.
    pub fn new(
        n_states: u16,
        start: StateId,
        limit: StateId,
        halt: StateId,
        cardinal: Option<StateId>,
        rules: impl IntoIterator<Item = ((StateId, u8), Rule)>,
    ) -> Result<Program, Vec<Diagnostic>> {
        let p = Self::new_unchecked(n_states, start, limit, halt, cardinal, rules);
        let diags = p.validate();
        if diags.is_empty() {
            Ok(p)
        } else {
            Err(diags)
        }
    }

    /// Assembles without validation; pair with [`Program::validate`].
    pub fn new_unchecked(
        n_states: u16,
        start: StateId,
        limit: StateId,
        halt: StateId,
        cardinal: Option<StateId>,
        rules: impl IntoIterator<Item = ((StateId, u8), Rule)>,
    ) -> Program {
        let mut table = vec![[None; 8]; n_states as usize];
        for ((state, code), rule) in rules {
            if (state as usize) < table.len() && code < 8 {
                table[state as usize][code as usize] = Some(rule);
            }
        }
        Program {
            n_states,
            start,
            limit,
            halt,
            cardinal,
            rules: table,
        }
    }

    pub fn rule(&self, state: StateId, bits: [bool; 3]) -> Option<&Rule> {
        self.rules
            .get(state as usize)
            .and_then(|row| row[read_code(bits) as usize].as_ref())
    }

    pub fn rule_by_code(&self, state: StateId, code: u8) -> Option<&Rule> {
        self.rules
            .get(state as usize)
            .and_then(|row| row[code as usize].as_ref())
    }

    /// True iff the program has a cardinal state.
    pub fn is_club_recognizing(&self) -> bool {
        self.cardinal.is_some()
    }

    /// Checks every structural invariant; empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let mut designated = |name: &str, id: StateId| {
            if id >= self.n_states {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::StateOutOfRange,
                    message: format!("{name} state {id} out of range (have {})", self.n_states),
                });
            }
        };
        designated("start", self.start);
        designated("limit", self.limit);
        designated("halt", self.halt);
        if let Some(c) = self.cardinal {
            designated("cardinal", c);
        }
        let mut distinct = |a_name: &str, a: StateId, b_name: &str, b: StateId| {
            if a == b {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::DesignatedNotDistinct,
                    message: format!("{a_name} and {b_name} must be distinct states"),
                });
            }
        };
        distinct("start", self.start, "limit", self.limit);
        distinct("start", self.start, "halt", self.halt);
        distinct("limit", self.limit, "halt", self.halt);
        if let Some(c) = self.cardinal {
            distinct("cardinal", c, "start", self.start);
            distinct("cardinal", c, "limit", self.limit);
            distinct("cardinal", c, "halt", self.halt);
        }
        for state in 0..self.n_states {
            let row = &self.rules[state as usize];
            if state == self.halt {
                for (code, rule) in row.iter().enumerate() {
                    if rule.is_some() {
                        diags.push(Diagnostic {
                            kind: DiagnosticKind::RuleFromHalt,
                            message: format!("halt state has a rule for read {code:03b}"),
                        });
                    }
                }
                continue;
            }
            for (code, rule) in row.iter().enumerate() {
                match rule {
                    None => diags.push(Diagnostic {
                        kind: DiagnosticKind::MissingRule,
                        message: format!("state {state} has no rule for read {code:03b}"),
                    }),
                    Some(r) => {
                        if r.next >= self.n_states {
                            diags.push(Diagnostic {
                                kind: DiagnosticKind::StateOutOfRange,
                                message: format!(
                                    "rule ({state}, {code:03b}) targets missing state {}",
                                    r.next
                                ),
                            });
                        }
                    }
                }
            }
        }
        diags
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Program")
            .field("n_states", &self.n_states)
            .field("start", &self.start)
            .field("limit", &self.limit)
            .field("halt", &self.halt)
            .field("cardinal", &self.cardinal)
            .finish_non_exhaustive()
    }
}

/// A named violation of a [`Program`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    MissingRule,
    RuleFromHalt,
    StateOutOfRange,
    DesignatedNotDistinct,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

/// A machine snapshot: control state, head position and the three tapes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub head: usize,
    pub tapes: [Real; 3],
}

impl Configuration {
    pub fn read(&self) -> [bool; 3] {
        [
            self.tapes[0].get(self.head),
            self.tapes[1].get(self.head),
            self.tapes[2].get(self.head),
        ]
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Configuration {{ state: {}, head: {}, in: {}, scr: {}, out: {} }}",
            self.state, self.head, self.tapes[0], self.tapes[1], self.tapes[2]
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("cannot step a halted configuration")]
    SteppedHalted,
    #[error("club-stage configuration requested for a program without a cardinal state")]
    NoCardinalState,
    #[error("no rule for state {state} reading {code:03b}")]
    MissingRule { state: StateId, code: u8 },
}

/// Start configuration: start state, head 0, input tape loaded with `x`.
pub fn initial_configuration(p: &Program, x: &Real) -> Configuration {
    Configuration {
        state: p.start,
        head: 0,
        tapes: [x.clone(), Real::zeros(), Real::zeros()],
    }
}

/// Applies the unique rule for the current state and read bits.
pub fn step(p: &Program, c: &Configuration) -> Result<Configuration, MachineError> {
    if c.state == p.halt {
        return Err(MachineError::SteppedHalted);
    }
    let bits = c.read();
    let rule = p
        .rule(c.state, bits)
        .ok_or(MachineError::MissingRule {
            state: c.state,
            code: read_code(bits),
        })?
        .clone();
    let mut tapes = c.tapes.clone();
    for (t, tape) in tapes.iter_mut().enumerate() {
        tape.set(c.head, rule.write[t]);
    }
    let head = match rule.mv {
        Move::Right => c.head + 1,
        Move::Left => c.head.saturating_sub(1),
    };
    Ok(Configuration {
        state: rule.next,
        head,
        tapes,
    })
}

/// Which kind of limit stage a limit configuration is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    OrdinaryLimit,
    ClubStage,
}

/// Builds the configuration taken at a limit stage: head on cell 0, control
/// in the limit (or cardinal) state, tapes set to the given limsups.
pub fn limit_configuration(
    limsups: [Real; 3],
    kind: LimitKind,
    p: &Program,
) -> Result<Configuration, MachineError> {
    let state = match kind {
        LimitKind::OrdinaryLimit => p.limit,
        LimitKind::ClubStage => p.cardinal.ok_or(MachineError::NoCardinalState)?,
    };
    Ok(Configuration {
        state,
        head: 0,
        tapes: limsups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_rule_halter() -> Program {
        // start 0, limit 1, halt 2; every read goes straight to halt writing 100.
        let rules = (0..8).map(|code| {
            (
                (0u16, code),
                Rule {
                    next: 2,
                    write: code_bits(code),
                    mv: Move::Right,
                },
            )
        });
        let limit_rules = (0..8).map(|code| {
            (
                (1u16, code),
                Rule {
                    next: 2,
                    write: code_bits(code),
                    mv: Move::Right,
                },
            )
        });
        Program::new(3, 0, 1, 2, None, rules.chain(limit_rules)).unwrap()
    }

    #[test]
    fn real_canonical_forms() {
        assert_eq!(Real::zeros().to_string(), "(0)");
        assert_eq!(Real::from_support([0, 2]).to_string(), "101(0)");
        assert_eq!(
            Real::from_prefix_cycle(vec![], vec![false, true, false, true]),
            Real::from_prefix_cycle(vec![], vec![false, true])
        );
        // Prefix absorption: 1 followed by (1) is just (1).
        assert_eq!(
            Real::from_prefix_cycle(vec![true], vec![true]).to_string(),
            "(1)"
        );
        // 0 1 (1 0) == 0 (1 1 0) after minimization? No: check exact bits instead.
        let r = Real::from_prefix_cycle(vec![false, true], vec![true, false]);
        assert_eq!(
            (0..8).map(|i| r.get(i) as u8).collect::<Vec<_>>(),
            vec![0, 1, 1, 0, 1, 0, 1, 0]
        );
    }

    #[test]
    fn real_set_into_cycle() {
        let mut r: Real = "(10)".parse().unwrap();
        r.set(4, false);
        assert_eq!(
            (0..8).map(|i| r.get(i) as u8).collect::<Vec<_>>(),
            vec![1, 0, 1, 0, 0, 0, 1, 0]
        );
        r.set(4, true);
        assert_eq!(r.to_string(), "(10)");
    }

    #[test]
    fn real_round_trip_display() {
        for s in ["(0)", "1(0)", "101(0)", "(10)", "1(10)"] {
            let r: Real = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        // Non-canonical inputs land on the canonical form.
        assert_eq!("11(01)".parse::<Real>().unwrap().to_string(), "1(10)");
    }

    #[test]
    fn real_suffix_and_or() {
        let r: Real = "101(0)".parse().unwrap();
        assert_eq!(r.suffix_from(1).to_string(), "01(0)");
        let p: Real = "(01)".parse().unwrap();
        assert_eq!(p.suffix_from(3).to_string(), "(10)");
        let o = Real::or(&r, &p);
        assert_eq!(
            (0..6).map(|i| o.get(i) as u8).collect::<Vec<_>>(),
            vec![1, 1, 1, 1, 0, 1]
        );
    }

    #[test]
    fn initial_configuration_examples() {
        let p = one_rule_halter();
        let c = initial_configuration(&p, &Real::zeros());
        assert_eq!(c.state, p.start);
        assert_eq!(c.head, 0);
        assert!(c.tapes.iter().all(Real::is_zero));

        let c = initial_configuration(&p, &Real::from_support([0, 2]));
        assert_eq!(
            (0..4).map(|i| c.tapes[0].get(i) as u8).collect::<Vec<_>>(),
            vec![1, 0, 1, 0]
        );

        let alternating: Real = "(01)".parse().unwrap();
        let c = initial_configuration(&p, &alternating);
        assert!(!c.tapes[0].get(0) && c.tapes[0].get(1) && !c.tapes[0].get(2));
    }

    #[test]
    fn step_applies_rule_and_clamps() {
        // Rule (start, 000) -> (halt, 100, R) on the all-zero start.
        let p = Program::new(
            3,
            0,
            1,
            2,
            None,
            (0..8)
                .map(|code| {
                    (
                        (0u16, code),
                        Rule {
                            next: 2,
                            write: [true, false, false],
                            mv: Move::Right,
                        },
                    )
                })
                .chain((0..8).map(|code| {
                    (
                        (1u16, code),
                        Rule {
                            next: 1,
                            write: code_bits(code),
                            mv: Move::Left,
                        },
                    )
                })),
        )
        .unwrap();
        let c0 = initial_configuration(&p, &Real::zeros());
        let c1 = step(&p, &c0).unwrap();
        assert_eq!(c1.state, p.halt);
        assert_eq!(c1.head, 1);
        assert!(c1.tapes[0].get(0));
        assert_eq!(step(&p, &c1).unwrap_err(), MachineError::SteppedHalted);

        // Left at cell 0 stays at cell 0.
        let mut c = c0.clone();
        c.state = 1;
        let c = step(&p, &c).unwrap();
        assert_eq!(c.head, 0);
    }

    #[test]
    fn step_two_rule_hand_simulation() {
        // s0: write scratch 1, move R, to s1; s1: write scratch 0, move L, to s0.
        let mk = |next, w1, mv| Rule {
            next,
            write: [false, w1, false],
            mv,
        };
        let p = Program::new(
            4,
            0,
            2,
            3,
            None,
            (0..8)
                .map(|c| ((0u16, c), mk(1, true, Move::Right)))
                .chain((0..8).map(|c| ((1u16, c), mk(0, false, Move::Left))))
                .chain((0..8).map(|c| ((2u16, c), mk(3, false, Move::Right)))),
        )
        .unwrap();
        let c0 = initial_configuration(&p, &Real::zeros());
        let c1 = step(&p, &c0).unwrap();
        assert_eq!((c1.state, c1.head), (1, 1));
        assert!(c1.tapes[1].get(0));
        let c2 = step(&p, &c1).unwrap();
        assert_eq!((c2.state, c2.head), (0, 0));
        assert!(c1.tapes[1].get(0) && !c2.tapes[1].get(1));
    }

    #[test]
    fn limit_configuration_kinds() {
        let p = one_rule_halter();
        let limsups = || [Real::zeros(), Real::from_support([3]), Real::zeros()];
        let c = limit_configuration(limsups(), LimitKind::OrdinaryLimit, &p).unwrap();
        assert_eq!((c.state, c.head), (p.limit, 0));
        assert!(c.tapes[1].get(3) && !c.tapes[1].get(2));
        assert_eq!(
            limit_configuration(limsups(), LimitKind::ClubStage, &p).unwrap_err(),
            MachineError::NoCardinalState
        );
    }

    #[test]
    fn validate_reports_missing_rule_and_distinctness() {
        let p = Program::new_unchecked(
            3,
            0,
            1,
            2,
            None,
            (1..8).map(|code| {
                (
                    (0u16, code),
                    Rule {
                        next: 2,
                        write: code_bits(code),
                        mv: Move::Right,
                    },
                )
            }),
        );
        let diags = p.validate();
        assert!(diags
            .iter()
            .any(|d| d.kind == DiagnosticKind::MissingRule && d.message.contains("000")));

        let clash = Program::new_unchecked(3, 0, 1, 0, None, std::iter::empty());
        assert!(clash
            .validate()
            .iter()
            .any(|d| d.kind == DiagnosticKind::DesignatedNotDistinct));
    }
}
