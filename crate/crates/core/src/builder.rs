//! Programmatic assembly of machine programs.
//!
//! The builder keeps state names for display and source formatting, expands
//! read-bit wildcards, and totalizes the rule table on `finish` by routing
//! every unspecified (state, read) pair to a diverging sweep state.

use std::collections::BTreeMap;

use crate::machine::{code_bits, Move, Program, Rule, StateId};

/// Read pattern: `None` matches both bits.
pub type ReadPat = [Option<bool>; 3];

/// Matches every read triple.
pub const ANY: ReadPat = [None, None, None];

/// What a rule writes on one tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteBit {
    /// Write back what was read.
    Keep,
    Zero,
    One,
}

/// Write spec for the three tapes.
pub type WriteSpec = [WriteBit; 3];

/// Keeps all three tapes unchanged.
pub const KEEP: WriteSpec = [WriteBit::Keep, WriteBit::Keep, WriteBit::Keep];

/// Write a single tape, keep the others.
pub fn write_one(tape: usize, bit: bool) -> WriteSpec {
    let mut w = KEEP;
    w[tape] = if bit { WriteBit::One } else { WriteBit::Zero };
    w
}

/// Read pattern fixing a single tape's bit.
pub fn read_one(tape: usize, bit: bool) -> ReadPat {
    let mut p = ANY;
    p[tape] = Some(bit);
    p
}

/// A program together with its display names, in state-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedProgram {
    pub program: Program,
    pub names: Vec<String>,
}

impl NamedProgram {
    pub fn state_name(&self, id: StateId) -> &str {
        self.names
            .get(id as usize)
            .map(String::as_str)
            .unwrap_or("?")
    }

    pub fn find_state(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as StateId)
    }
}

/// Incremental program assembler.
pub struct ProgramBuilder {
    names: Vec<String>,
    by_name: BTreeMap<String, StateId>,
    rules: BTreeMap<(StateId, u8), Rule>,
    start: Option<StateId>,
    cardinal: Option<StateId>,
    limit: StateId,
    halt: StateId,
    fresh_counter: u64,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        let mut b = ProgramBuilder {
            names: Vec::new(),
            by_name: BTreeMap::new(),
            rules: BTreeMap::new(),
            start: None,
            cardinal: None,
            limit: 0,
            halt: 0,
            fresh_counter: 0,
        };
        b.limit = b.state("limit");
        b.halt = b.state("halt");
        b
    }

    /// The state with this name, created on first use.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        let id = self.names.len() as StateId;
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        id
    }

    /// A state with a unique generated name.
    pub fn fresh(&mut self, prefix: &str) -> StateId {
        loop {
            let name = format!("{prefix}_{}", self.fresh_counter);
            self.fresh_counter += 1;
            if !self.by_name.contains_key(&name) {
                return self.state(&name);
            }
        }
    }

    pub fn limit_state(&self) -> StateId {
        self.limit
    }

    pub fn halt_state(&self) -> StateId {
        self.halt
    }

    pub fn set_start(&mut self, id: StateId) {
        self.start = Some(id);
    }

    /// Declares the cardinal state, making the program club-recognizing.
    pub fn set_cardinal(&mut self, id: StateId) {
        self.cardinal = Some(id);
    }

    pub fn cardinal_state(&self) -> Option<StateId> {
        self.cardinal
    }

    /// Adds a rule for every read triple matching `pat`. Panics on collision;
    /// generator code is expected to know its own table.
    pub fn rule(&mut self, from: StateId, pat: ReadPat, write: WriteSpec, mv: Move, to: StateId) {
        for code in 0..8u8 {
            let bits = code_bits(code);
            if (0..3).any(|t| pat[t].is_some_and(|want| want != bits[t])) {
                continue;
            }
            let w = [
                resolve(write[0], bits[0]),
                resolve(write[1], bits[1]),
                resolve(write[2], bits[2]),
            ];
            let rule = Rule { next: to, write: w, mv };
            if let Some(prev) = self.rules.insert((from, code), rule) {
                panic!(
                    "rule collision at ({}, {code:03b}): already {:?}",
                    self.names[from as usize], prev
                );
            }
        }
    }

    /// Like [`ProgramBuilder::rule`] but skips triples that already have one.
    pub fn rule_default(
        &mut self,
        from: StateId,
        pat: ReadPat,
        write: WriteSpec,
        mv: Move,
        to: StateId,
    ) {
        for code in 0..8u8 {
            let bits = code_bits(code);
            if (0..3).any(|t| pat[t].is_some_and(|want| want != bits[t])) {
                continue;
            }
            let w = [
                resolve(write[0], bits[0]),
                resolve(write[1], bits[1]),
                resolve(write[2], bits[2]),
            ];
            self.rules
                .entry((from, code))
                .or_insert(Rule { next: to, write: w, mv });
        }
    }

    /// A chain of `n` no-op states marching right, ending in `to`.
    /// Returns the entry state (`to` itself when `n` is zero).
    pub fn pad_chain(&mut self, n: usize, to: StateId) -> StateId {
        let mut next = to;
        for _ in 0..n {
            let s = self.fresh("pad");
            self.rule(s, ANY, KEEP, Move::Right, next);
            next = s;
        }
        next
    }

    /// Two-state in-place spin: detectable loop that never writes.
    /// Returns the entry state.
    pub fn spin_pair(&mut self, label: &str) -> StateId {
        let a = self.fresh(&format!("{label}_a"));
        let b = self.fresh(&format!("{label}_b"));
        self.rule(a, ANY, KEEP, Move::Right, b);
        self.rule(b, ANY, KEEP, Move::Left, a);
        a
    }

    /// Totalizes and validates. Unreached (state, read) pairs go to a
    /// diverging sweep state.
    pub fn finish(mut self) -> NamedProgram {
        let needs_fallback = {
            let n = self.names.len() as u16;
            (0..n).any(|s| s != self.halt && (0..8).any(|c| !self.rules.contains_key(&(s, c))))
        };
        if needs_fallback {
            let stuck = self.state("stuck");
            self.rule_default(stuck, ANY, KEEP, Move::Right, stuck);
            let n = self.names.len() as u16;
            for s in 0..n {
                if s == self.halt {
                    continue;
                }
                for c in 0..8 {
                    self.rules.entry((s, c)).or_insert(Rule {
                        next: stuck,
                        write: code_bits(c),
                        mv: Move::Right,
                    });
                }
            }
        }
        let start = self.start.expect("builder: start state not set");
        let program = Program::new(
            self.names.len() as u16,
            start,
            self.limit,
            self.halt,
            self.cardinal,
            self.rules,
        )
        .unwrap_or_else(|diags| {
            panic!(
                "builder produced invalid program: {}",
                diags
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; ")
            )
        });
        NamedProgram {
            program,
            names: self.names,
        }
    }
}

impl Default for ProgramBuilder {
    fn default() -> Self {
        Self::new()
    }
}

fn resolve(w: WriteBit, read: bool) -> bool {
    match w {
        WriteBit::Keep => read,
        WriteBit::Zero => false,
        WriteBit::One => true,
    }
}

/// The limit rule dispatches on the three bits under cell 0; this names the
/// scratch tape index for those dispatch patterns.
pub const IN: usize = 0;
pub const SCR: usize = 1;
pub const OUT: usize = 2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{initial_configuration, step, Real};

    #[test]
    fn builds_minimal_halter() {
        let mut b = ProgramBuilder::new();
        let s = b.state("start");
        b.set_start(s);
        b.rule(s, ANY, write_one(SCR, true), Move::Right, b.halt_state());
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, b.halt_state());
        let np = b.finish();
        assert!(np.program.validate().is_empty());
        let c = initial_configuration(&np.program, &Real::zeros());
        let c = step(&np.program, &c).unwrap();
        assert_eq!(c.state, np.program.halt);
        assert!(c.tapes[SCR].get(0));
        assert_eq!(np.state_name(np.program.halt), "halt");
    }

    #[test]
    fn wildcards_expand_and_fallback_totalizes() {
        let mut b = ProgramBuilder::new();
        let s = b.state("start");
        b.set_start(s);
        // Only the scratch=1 half specified; the rest must fall back.
        b.rule(s, read_one(SCR, true), KEEP, Move::Left, b.halt_state());
        let np = b.finish();
        assert!(np.program.validate().is_empty());
        assert!(np.find_state("stuck").is_some());
        let stuck = np.find_state("stuck").unwrap();
        let rule = np.program.rule(s, [false, false, false]).unwrap();
        assert_eq!(rule.next, stuck);
    }
}
