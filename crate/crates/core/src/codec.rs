//! Bit-exact encodings of programs, configurations and ordinal notations as
//! finitely-supported bit sequences.
//!
//! All layouts are self-delimiting and start with a 4-bit version field
//! (value 1, least significant bit first) so codes can be embedded in tapes.
//! Naturals use a gamma code: for `n`, write `m = n + 1` as `L-1` ones, a
//! zero, then the `L-1` bits of `m` below its leading one, most significant
//! first. Layouts are canonical: structurally equal values give bit-identical
//! codes and decoding validates every well-formedness condition.

use thiserror::Error;

use crate::machine::{Configuration, Move, Program, Real, Rule};
use crate::ordinal::{OrdinalError, OrdinalNotation};

/// Code format version emitted and accepted by this module.
pub const CODEC_VERSION: u8 = 1;

const MAX_STATES: u64 = 4096;
const MAX_HEAD: u64 = 1 << 20;
const MAX_CELL: u64 = 1 << 20;
const MAX_CELLS_PER_TAPE: u64 = 1 << 12;
const MAX_TERMS: u64 = 64;
const MAX_COEFF: u64 = u32::MAX as u64;
/// Hard bound on bits consumed by one decode.
const MAX_WORK_BITS: usize = 1 << 22;

/// What a bit code is a code of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    Program,
    Config,
    Ordinal,
}

/// A finitely-supported bit sequence tagged with its intended kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitCode {
    kind: CodeKind,
    bits: Real,
}

impl BitCode {
    /// Wraps an existing sequence; it must have finite support.
    pub fn new(kind: CodeKind, bits: Real) -> Result<Self, DecodeError> {
        if !bits.has_finite_support() {
            return Err(DecodeError::InfiniteSupport);
        }
        Ok(BitCode { kind, bits })
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn bits(&self) -> &Real {
        &self.bits
    }

    pub fn into_bits(self) -> Real {
        self.bits
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("code kind mismatch: expected {expected:?}, got {got:?}")]
    WrongKind { expected: CodeKind, got: CodeKind },
    #[error("unsupported code version {0}")]
    BadVersion(u8),
    #[error("value out of range while reading {what}")]
    TooLarge { what: &'static str },
    #[error("bits remain beyond the end of the layout")]
    TrailingGarbage,
    #[error("duplicate or unsorted cell in support list")]
    UnsortedCells,
    #[error("zero coefficient in ordinal code")]
    ZeroCoefficient,
    #[error("ordinal code is not in normal form: {0}")]
    NotCanonical(OrdinalError),
    #[error("decoded program is invalid: {0}")]
    InvalidProgram(String),
    #[error("per-decode work bound exceeded")]
    WorkBound,
    #[error("codes must have finite support")]
    InfiniteSupport,
}

struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    fn new() -> Self {
        let mut w = BitWriter { bits: Vec::new() };
        // Version nibble, least significant bit first.
        for i in 0..4 {
            w.push(CODEC_VERSION >> i & 1 == 1);
        }
        w
    }

    fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    fn nat(&mut self, n: u64) {
        let m = n + 1;
        let len = 64 - m.leading_zeros() as usize;
        for _ in 0..len - 1 {
            self.push(true);
        }
        self.push(false);
        for i in (0..len - 1).rev() {
            self.push(m >> i & 1 == 1);
        }
    }

    fn finish(self, kind: CodeKind) -> BitCode {
        BitCode {
            kind,
            bits: Real::from_bits(self.bits),
        }
    }
}

struct BitReader<'a> {
    bits: &'a Real,
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(code: &'a BitCode, expected: CodeKind) -> Result<Self, DecodeError> {
        if code.kind != expected {
            return Err(DecodeError::WrongKind {
                expected,
                got: code.kind,
            });
        }
        let mut r = BitReader {
            bits: &code.bits,
            pos: 0,
        };
        let mut version = 0u8;
        for i in 0..4 {
            if r.bit()? {
                version |= 1 << i;
            }
        }
        if version != CODEC_VERSION {
            return Err(DecodeError::BadVersion(version));
        }
        Ok(r)
    }

    fn bit(&mut self) -> Result<bool, DecodeError> {
        if self.pos >= MAX_WORK_BITS {
            return Err(DecodeError::WorkBound);
        }
        let b = self.bits.get(self.pos);
        self.pos += 1;
        Ok(b)
    }

    fn nat(&mut self, cap: u64, what: &'static str) -> Result<u64, DecodeError> {
        let mut len = 1usize;
        while self.bit()? {
            len += 1;
            if len > 64 {
                return Err(DecodeError::TooLarge { what });
            }
        }
        let mut m: u64 = 1;
        for _ in 0..len - 1 {
            m = m << 1 | self.bit()? as u64;
        }
        let n = m - 1;
        if n > cap {
            return Err(DecodeError::TooLarge { what });
        }
        Ok(n)
    }

    /// The code must hold no ones at or beyond the consumed length.
    fn expect_end(&self) -> Result<(), DecodeError> {
        match self.bits.support() {
            None => Err(DecodeError::InfiniteSupport),
            Some(cells) => {
                if cells.iter().any(|&c| c >= self.pos) {
                    Err(DecodeError::TrailingGarbage)
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Self-delimiting program layout: state count, designated-state indices,
/// then rules in canonical (state, read-bits) order.
pub fn encode_program(p: &Program) -> BitCode {
    let mut w = BitWriter::new();
    w.nat(p.n_states as u64);
    w.nat(p.start as u64);
    w.nat(p.limit as u64);
    w.nat(p.halt as u64);
    match p.cardinal {
        None => w.push(false),
        Some(c) => {
            w.push(true);
            w.nat(c as u64);
        }
    }
    for state in 0..p.n_states {
        if state == p.halt {
            continue;
        }
        for code in 0..8 {
            let rule = p
                .rule_by_code(state, code)
                .expect("encode_program requires a valid (total) program");
            w.nat(rule.next as u64);
            for t in 0..3 {
                w.push(rule.write[t]);
            }
            w.push(rule.mv == Move::Right);
        }
    }
    w.finish(CodeKind::Program)
}

pub fn decode_program(code: &BitCode) -> Result<Program, DecodeError> {
    let mut r = BitReader::new(code, CodeKind::Program)?;
    let n_states = r.nat(MAX_STATES, "state count")? as u16;
    let start = r.nat(MAX_STATES, "start index")? as u16;
    let limit = r.nat(MAX_STATES, "limit index")? as u16;
    let halt = r.nat(MAX_STATES, "halt index")? as u16;
    let cardinal = if r.bit()? {
        Some(r.nat(MAX_STATES, "cardinal index")? as u16)
    } else {
        None
    };
    let mut rules = Vec::new();
    for state in 0..n_states {
        if state == halt {
            continue;
        }
        for code in 0..8u8 {
            let next = r.nat(MAX_STATES, "rule target")? as u16;
            let write = [r.bit()?, r.bit()?, r.bit()?];
            let mv = if r.bit()? { Move::Right } else { Move::Left };
            rules.push(((state, code), Rule { next, write, mv }));
        }
    }
    r.expect_end()?;
    Program::new(n_states, start, limit, halt, cardinal, rules).map_err(|diags| {
        DecodeError::InvalidProgram(
            diags
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        )
    })
}

/// Configuration layout: state index, head, then each tape's support as a
/// first cell plus strictly positive gaps.
pub fn encode_config(c: &Configuration) -> Result<BitCode, DecodeError> {
    let mut w = BitWriter::new();
    w.nat(c.state as u64);
    w.nat(c.head as u64);
    for tape in &c.tapes {
        let cells = tape.support().ok_or(DecodeError::InfiniteSupport)?;
        w.nat(cells.len() as u64);
        let mut prev: Option<usize> = None;
        for cell in cells {
            match prev {
                None => w.nat(cell as u64),
                Some(p) => w.nat((cell - p) as u64),
            }
            prev = Some(cell);
        }
    }
    Ok(w.finish(CodeKind::Config))
}

pub fn decode_config(code: &BitCode) -> Result<Configuration, DecodeError> {
    let mut r = BitReader::new(code, CodeKind::Config)?;
    let state = r.nat(MAX_STATES, "state index")? as u16;
    let head = r.nat(MAX_HEAD, "head position")? as usize;
    let mut tapes = [Real::zeros(), Real::zeros(), Real::zeros()];
    for tape in tapes.iter_mut() {
        let count = r.nat(MAX_CELLS_PER_TAPE, "cell count")?;
        let mut cells = Vec::with_capacity(count as usize);
        let mut prev: Option<u64> = None;
        for _ in 0..count {
            let cell = match prev {
                None => r.nat(MAX_CELL, "cell index")?,
                Some(p) => {
                    let gap = r.nat(MAX_CELL, "cell gap")?;
                    if gap == 0 {
                        return Err(DecodeError::UnsortedCells);
                    }
                    p.checked_add(gap).ok_or(DecodeError::TooLarge {
                        what: "cell index",
                    })?
                }
            };
            if cell > MAX_CELL {
                return Err(DecodeError::TooLarge { what: "cell index" });
            }
            cells.push(cell as usize);
            prev = Some(cell);
        }
        *tape = Real::from_support(cells);
    }
    r.expect_end()?;
    Ok(Configuration { state, head, tapes })
}

/// Recursive normal-form layout: term count, then per term the encoded
/// exponent and the coefficient.
pub fn encode_ordinal(a: &OrdinalNotation) -> BitCode {
    let mut w = BitWriter::new();
    write_ordinal(&mut w, a);
    w.finish(CodeKind::Ordinal)
}

fn write_ordinal(w: &mut BitWriter, a: &OrdinalNotation) {
    w.nat(a.terms().len() as u64);
    for (exp, coeff) in a.terms() {
        write_ordinal(w, exp);
        w.nat(*coeff);
    }
}

pub fn decode_ordinal(code: &BitCode) -> Result<OrdinalNotation, DecodeError> {
    let mut r = BitReader::new(code, CodeKind::Ordinal)?;
    let out = read_ordinal(&mut r)?;
    r.expect_end()?;
    Ok(out)
}

fn read_ordinal(r: &mut BitReader) -> Result<OrdinalNotation, DecodeError> {
    let count = r.nat(MAX_TERMS, "term count")?;
    let mut terms = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let exp = read_ordinal(r)?;
        let coeff = r.nat(MAX_COEFF, "coefficient")?;
        if coeff == 0 {
            return Err(DecodeError::ZeroCoefficient);
        }
        terms.push((exp, coeff));
    }
    OrdinalNotation::from_terms(terms).map_err(DecodeError::NotCanonical)
}

/// True iff the code decodes as a well-formed ordinal notation.
pub fn is_wellformed_ordinal_code(code: &BitCode) -> bool {
    decode_ordinal(code).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{write_one, ProgramBuilder, ANY, KEEP, SCR};
    use crate::machine::initial_configuration;

    fn sample_program() -> Program {
        let mut b = ProgramBuilder::new();
        let s = b.state("start");
        b.set_start(s);
        let t = b.state("next");
        b.rule(s, ANY, write_one(SCR, true), Move::Right, t);
        b.rule(t, ANY, KEEP, Move::Left, b.halt_state());
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, b.halt_state());
        b.finish().program
    }

    #[test]
    fn program_round_trip() {
        let p = sample_program();
        let code = encode_program(&p);
        let q = decode_program(&code).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn config_round_trip() {
        let p = sample_program();
        let c0 = initial_configuration(&p, &Real::zeros());
        let code = encode_config(&c0).unwrap();
        assert_eq!(decode_config(&code).unwrap(), c0);

        let c = Configuration {
            state: 1,
            head: 4,
            tapes: [
                Real::zeros(),
                Real::from_support([0, 7, 9]),
                Real::from_support([2]),
            ],
        };
        let code = encode_config(&c).unwrap();
        assert_eq!(decode_config(&code).unwrap(), c);
    }

    #[test]
    fn config_requires_finite_support() {
        let c = Configuration {
            state: 0,
            head: 0,
            tapes: ["(01)".parse().unwrap(), Real::zeros(), Real::zeros()],
        };
        assert_eq!(encode_config(&c).unwrap_err(), DecodeError::InfiniteSupport);
    }

    #[test]
    fn ordinal_round_trips() {
        for s in ["0", "w^2*3+w+4", "w", "17", "w^(w)+w^3*2+1"] {
            let a: OrdinalNotation = s.parse().unwrap();
            let code = encode_ordinal(&a);
            assert_eq!(decode_ordinal(&code).unwrap(), a);
            assert!(is_wellformed_ordinal_code(&code));
        }
    }

    #[test]
    fn ordinal_code_with_bad_exponent_order_rejected() {
        // Hand-build: two terms with equal exponents (0), i.e. "3 + 4".
        let mut w = BitWriter::new();
        w.nat(2);
        w.nat(0);
        w.nat(3);
        w.nat(0);
        w.nat(4);
        let code = w.finish(CodeKind::Ordinal);
        assert!(matches!(
            decode_ordinal(&code),
            Err(DecodeError::NotCanonical(_))
        ));
        assert!(!is_wellformed_ordinal_code(&code));
    }

    #[test]
    fn kind_mismatch_rejected() {
        let a: OrdinalNotation = "w".parse().unwrap();
        let code = encode_ordinal(&a);
        let as_config = BitCode::new(CodeKind::Config, code.bits().clone()).unwrap();
        assert!(matches!(
            decode_config(&as_config),
            Err(DecodeError::UnsortedCells | DecodeError::TooLarge { .. })
                | Err(DecodeError::TrailingGarbage)
                | Ok(_)
        ));
        assert!(matches!(
            decode_ordinal(&BitCode::new(CodeKind::Program, code.bits().clone()).unwrap()),
            Err(DecodeError::WrongKind { .. })
        ));
    }

    #[test]
    fn trailing_garbage_rejected() {
        let a: OrdinalNotation = "w".parse().unwrap();
        let code = encode_ordinal(&a);
        let mut bits = code.bits().clone();
        bits.set(500, true);
        let tampered = BitCode::new(CodeKind::Ordinal, bits).unwrap();
        assert_eq!(
            decode_ordinal(&tampered).unwrap_err(),
            DecodeError::TrailingGarbage
        );
    }
}
