//! Ordinal notations in Cantor normal form and the club classes used for
//! special-stage scheduling.
//!
//! A notation is a finite sum `w^e1*c1 + ... + w^en*cn` with strictly
//! decreasing exponents (themselves notations) and positive integer
//! coefficients. The empty sum is zero. Arithmetic is exact ordinal
//! arithmetic: addition absorbs on the left, multiplication distributes
//! over the right factor's normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Maximum nesting depth of exponents. Construction beyond this is an error
/// so that all operations stay total.
pub const MAX_DEPTH: usize = 8;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OrdinalError {
    #[error("notation depth {depth} exceeds maximum {max}")]
    DepthOverflow { depth: usize, max: usize },
    #[error("exponents must be strictly decreasing")]
    ExponentOrder,
    #[error("coefficients must be positive")]
    ZeroCoefficient,
    #[error("division by zero ordinal")]
    DivisionByZero,
    #[error("left subtraction requires the left operand to be <= the right")]
    SubtrahendTooLarge,
}

/// An ordinal below epsilon-zero, written in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrdinalNotation {
    terms: Vec<(OrdinalNotation, u64)>,
}

impl OrdinalNotation {
    /// The ordinal zero (empty sum).
    pub fn zero() -> Self {
        OrdinalNotation { terms: Vec::new() }
    }

    /// A finite ordinal. `finite(0)` is zero.
    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalNotation {
                terms: vec![(Self::zero(), n)],
            }
        }
    }

    /// The first infinite ordinal.
    pub fn omega() -> Self {
        Self::omega_pow_mul(Self::finite(1), 1).expect("w fits any depth cap")
    }

    /// `w^exp`.
    pub fn omega_pow(exp: Self) -> Result<Self, OrdinalError> {
        Self::omega_pow_mul(exp, 1)
    }

    /// `w^exp * coeff`.
    pub fn omega_pow_mul(exp: Self, coeff: u64) -> Result<Self, OrdinalError> {
        Self::from_terms(vec![(exp, coeff)])
    }

    /// Builds a notation from explicit terms, validating all invariants.
    pub fn from_terms(terms: Vec<(Self, u64)>) -> Result<Self, OrdinalError> {
        for window in terms.windows(2) {
            if window[0].0 <= window[1].0 {
                return Err(OrdinalError::ExponentOrder);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::ZeroCoefficient);
        }
        let out = OrdinalNotation { terms };
        let depth = out.depth();
        if depth > MAX_DEPTH {
            return Err(OrdinalError::DepthOverflow {
                depth,
                max: MAX_DEPTH,
            });
        }
        Ok(out)
    }

    pub fn terms(&self) -> &[(Self, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nesting depth: zero has depth 0, a finite ordinal depth 1, `w` depth 2.
    pub fn depth(&self) -> usize {
        match self.terms.iter().map(|(e, _)| e.depth()).max() {
            None => 0,
            Some(d) => 1 + d,
        }
    }

    /// `Some(n)` when the notation denotes the finite ordinal `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 if self.terms[0].0.is_zero() => Some(self.terms[0].1),
            _ => None,
        }
    }

    /// True iff nonzero and the trailing term has a positive exponent.
    pub fn is_limit(&self) -> bool {
        match self.terms.last() {
            None => false,
            Some((exp, _)) => !exp.is_zero(),
        }
    }

    pub fn is_successor(&self) -> bool {
        !self.is_zero() && !self.is_limit()
    }

    /// Ordinal sum in normal form. Terms of `self` below the leading exponent
    /// of `rhs` are absorbed.
    pub fn add(&self, rhs: &Self) -> Result<Self, OrdinalError> {
        let Some((lead_exp, lead_coeff)) = rhs.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<(Self, u64)> = Vec::new();
        let mut merged = false;
        for (exp, coeff) in &self.terms {
            match exp.cmp(lead_exp) {
                Ordering::Greater => terms.push((exp.clone(), *coeff)),
                Ordering::Equal => {
                    terms.push((exp.clone(), coeff + lead_coeff));
                    merged = true;
                    break;
                }
                Ordering::Less => break,
            }
        }
        if merged {
            terms.extend(rhs.terms.iter().skip(1).cloned());
        } else {
            terms.extend(rhs.terms.iter().cloned());
        }
        Self::from_terms(terms)
    }

    /// `self + 1`.
    pub fn succ(&self) -> Self {
        self.add(&Self::finite(1)).expect("successor never deepens")
    }

    /// Ordinal product in normal form, distributing over `rhs`'s terms.
    pub fn mul(&self, rhs: &Self) -> Result<Self, OrdinalError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        let (lead_exp, lead_coeff) = &self.terms[0];
        let mut acc = Self::zero();
        for (exp, coeff) in &rhs.terms {
            let part = if exp.is_zero() {
                // self * finite k: scale the leading coefficient, keep the tail.
                let mut terms = self.terms.clone();
                terms[0].1 = lead_coeff
                    .checked_mul(*coeff)
                    .ok_or(OrdinalError::DepthOverflow {
                        depth: MAX_DEPTH + 1,
                        max: MAX_DEPTH,
                    })?;
                OrdinalNotation { terms }
            } else {
                // self * w^e * k = w^(lead_exp + e) * k for e > 0.
                Self::omega_pow_mul(lead_exp.add(exp)?, *coeff)?
            };
            acc = acc.add(&part)?;
        }
        Ok(acc)
    }

    /// The unique `x` with `self + x == rhs`. Errors when `self > rhs`.
    pub fn sub_left(&self, rhs: &Self) -> Result<Self, OrdinalError> {
        let mut i = 0;
        while i < self.terms.len() && i < rhs.terms.len() && self.terms[i] == rhs.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            return Self::from_terms(rhs.terms[i..].to_vec());
        }
        if i == rhs.terms.len() {
            return Err(OrdinalError::SubtrahendTooLarge);
        }
        let (xe, xc) = &self.terms[i];
        let (ye, yc) = &rhs.terms[i];
        match xe.cmp(ye) {
            Ordering::Less => Self::from_terms(rhs.terms[i..].to_vec()),
            Ordering::Greater => Err(OrdinalError::SubtrahendTooLarge),
            Ordering::Equal => match xc.cmp(yc) {
                Ordering::Greater => Err(OrdinalError::SubtrahendTooLarge),
                Ordering::Less => {
                    let mut terms = vec![(ye.clone(), yc - xc)];
                    terms.extend(rhs.terms[i + 1..].iter().cloned());
                    Self::from_terms(terms)
                }
                Ordering::Equal => {
                    // Terms identical but compared unequal above; unreachable.
                    unreachable!("identical terms handled by prefix scan")
                }
            },
        }
    }

    /// Ordinal division: the unique `(q, r)` with `self == d*q + r` and `r < d`.
    pub fn divmod(&self, d: &Self) -> Result<(Self, Self), OrdinalError> {
        if d.is_zero() {
            return Err(OrdinalError::DivisionByZero);
        }
        if self < d {
            return Ok((Self::zero(), self.clone()));
        }
        let (d_exp, d_coeff) = &d.terms[0];
        let (a_exp, a_coeff) = &self.terms[0];
        match a_exp.cmp(d_exp) {
            Ordering::Less => unreachable!("self >= d implies leading exponent >= d's"),
            Ordering::Greater => {
                let gamma = d_exp.sub_left(a_exp)?;
                let q_head = Self::omega_pow_mul(gamma, *a_coeff)?;
                let rest = OrdinalNotation {
                    terms: self.terms[1..].to_vec(),
                };
                let (q_tail, r) = rest.divmod(d)?;
                Ok((q_head.add(&q_tail)?, r))
            }
            Ordering::Equal => {
                // Quotient is finite here; search near a_coeff / d_coeff.
                let mut k = a_coeff / d_coeff;
                loop {
                    let candidate = d.mul(&Self::finite(k + 1))?;
                    if candidate <= *self {
                        k += 1;
                    } else {
                        break;
                    }
                }
                while k > 0 && d.mul(&Self::finite(k))? > *self {
                    k -= 1;
                }
                let prod = d.mul(&Self::finite(k))?;
                let r = prod.sub_left(self)?;
                debug_assert!(r < *d);
                Ok((Self::finite(k), r))
            }
        }
    }

    /// Least multiple of `d` strictly greater than `self`.
    pub fn next_multiple_of(&self, d: &Self) -> Result<Self, OrdinalError> {
        let (q, _) = self.divmod(d)?;
        d.mul(&q.succ())
    }

    /// Drops the trailing finite part: the largest limit (or zero) `<= self`.
    pub fn limit_part(&self) -> Self {
        let mut terms = self.terms.clone();
        if let Some((exp, _)) = terms.last() {
            if exp.is_zero() {
                terms.pop();
            }
        }
        OrdinalNotation { terms }
    }
}

impl PartialOrd for OrdinalNotation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalNotation {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for OrdinalNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if exp.is_zero() {
                write!(f, "{coeff}")?;
                continue;
            }
            write!(f, "w")?;
            if exp.as_finite() != Some(1) {
                match exp.as_finite() {
                    Some(n) => write!(f, "^{n}")?,
                    None => write!(f, "^({exp})")?,
                }
            }
            if *coeff > 1 {
                write!(f, "*{coeff}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OrdinalNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseOrdinalError {
    #[error("unexpected character at byte {0}")]
    UnexpectedChar(usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("number too large at byte {0}")]
    NumberTooLarge(usize),
    #[error("not in normal form: {0}")]
    NotCanonical(OrdinalError),
    #[error("zero coefficient at byte {0}")]
    ZeroCoefficient(usize),
    #[error("exponent 0 must be written as a plain number")]
    ZeroExponent,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, ParseOrdinalError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add((c - b'0') as u64))
                    .ok_or(ParseOrdinalError::NumberTooLarge(start))?;
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            match self.peek() {
                Some(_) => Err(ParseOrdinalError::UnexpectedChar(self.pos)),
                None => Err(ParseOrdinalError::UnexpectedEnd),
            }
        } else {
            Ok(value)
        }
    }

    fn sum(&mut self) -> Result<OrdinalNotation, ParseOrdinalError> {
        let mut terms = Vec::new();
        loop {
            terms.push(self.term()?);
            if !self.eat(b'+') {
                break;
            }
        }
        // A lone "0" denotes zero; zero terms elsewhere are not canonical.
        if terms.len() == 1 && terms[0].is_none() {
            return Ok(OrdinalNotation::zero());
        }
        let mut out = Vec::new();
        for (i, t) in terms.into_iter().enumerate() {
            match t {
                Some(term) => out.push(term),
                None => return Err(ParseOrdinalError::ZeroCoefficient(i)),
            }
        }
        OrdinalNotation::from_terms(out).map_err(ParseOrdinalError::NotCanonical)
    }

    /// One term; `None` encodes a literal `0`.
    #[allow(clippy::type_complexity)]
    fn term(&mut self) -> Result<Option<(OrdinalNotation, u64)>, ParseOrdinalError> {
        if self.eat(b'w') {
            let exp = if self.eat(b'^') {
                if self.eat(b'(') {
                    let inner = self.sum()?;
                    if !self.eat(b')') {
                        return Err(match self.peek() {
                            Some(_) => ParseOrdinalError::UnexpectedChar(self.pos),
                            None => ParseOrdinalError::UnexpectedEnd,
                        });
                    }
                    inner
                } else {
                    OrdinalNotation::finite(self.nat()?)
                }
            } else {
                OrdinalNotation::finite(1)
            };
            if exp.is_zero() {
                return Err(ParseOrdinalError::ZeroExponent);
            }
            let coeff = if self.eat(b'*') {
                let at = self.pos;
                let c = self.nat()?;
                if c == 0 {
                    return Err(ParseOrdinalError::ZeroCoefficient(at));
                }
                c
            } else {
                1
            };
            Ok(Some((exp, coeff)))
        } else {
            let n = self.nat()?;
            if n == 0 {
                Ok(None)
            } else {
                Ok(Some((OrdinalNotation::zero(), n)))
            }
        }
    }
}

impl FromStr for OrdinalNotation {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let out = p.sum()?;
        if p.pos != p.bytes.len() {
            return Err(ParseOrdinalError::UnexpectedChar(p.pos));
        }
        Ok(out)
    }
}

/// A closed unbounded class of limit notations; the parameter of
/// club-recognizing machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClubClassSpec {
    /// Every limit ordinal.
    AllLimits,
    /// Nonzero multiples of a fixed limit ordinal.
    MultiplesOf(OrdinalNotation),
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ClubError {
    #[error("club step must be a limit notation")]
    NotALimit,
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

impl ClubClassSpec {
    /// Multiples of `delta`, which must be a limit notation.
    pub fn multiples_of(delta: OrdinalNotation) -> Result<Self, ClubError> {
        if !delta.is_limit() {
            return Err(ClubError::NotALimit);
        }
        Ok(ClubClassSpec::MultiplesOf(delta))
    }

    /// Membership of `a` in the denoted class.
    pub fn contains(&self, a: &OrdinalNotation) -> bool {
        match self {
            ClubClassSpec::AllLimits => a.is_limit(),
            ClubClassSpec::MultiplesOf(delta) => match a.divmod(delta) {
                Ok((q, r)) => r.is_zero() && !q.is_zero(),
                Err(_) => false,
            },
        }
    }

    /// Least member strictly greater than `a`.
    pub fn next_above(&self, a: &OrdinalNotation) -> Result<OrdinalNotation, OrdinalError> {
        match self {
            ClubClassSpec::AllLimits => a.limit_part().add(&OrdinalNotation::omega()),
            ClubClassSpec::MultiplesOf(delta) => a.next_multiple_of(delta),
        }
    }

    /// The `alpha`-th member counting from the least one: `step * (1 + alpha)`.
    pub fn iterate(&self, alpha: &OrdinalNotation) -> Result<OrdinalNotation, OrdinalError> {
        let step = match self {
            ClubClassSpec::AllLimits => OrdinalNotation::omega(),
            ClubClassSpec::MultiplesOf(delta) => delta.clone(),
        };
        step.mul(&OrdinalNotation::finite(1).add(alpha)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> OrdinalNotation {
        s.parse().unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ord("0").cmp(&ord("0")), Ordering::Equal);
        assert_eq!(ord("w").cmp(&ord("5")), Ordering::Greater);
        assert_eq!(ord("w^2+w*2").cmp(&ord("w^2+w*2+1")), Ordering::Less);
    }

    #[test]
    fn add_examples() {
        assert_eq!(ord("1").add(&ord("w")).unwrap(), ord("w"));
        assert_eq!(ord("w").add(&ord("1")).unwrap(), ord("w+1"));
        assert_eq!(ord("w*2+3").add(&ord("w+1")).unwrap(), ord("w*3+1"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ord("2").mul(&ord("w")).unwrap(), ord("w"));
        assert_eq!(ord("w").mul(&ord("2")).unwrap(), ord("w*2"));
        assert_eq!(ord("w+1").mul(&ord("w")).unwrap(), ord("w^2"));
    }

    #[test]
    fn is_limit_examples() {
        assert!(!ord("0").is_limit());
        assert!(ord("w*3").is_limit());
        assert!(!ord("w^2+5").is_limit());
    }

    #[test]
    fn club_examples() {
        let all = ClubClassSpec::AllLimits;
        assert!(all.contains(&ord("w")));
        let mult = ClubClassSpec::multiples_of(ord("w^2")).unwrap();
        assert!(mult.contains(&ord("w^2*3")));
        assert!(!mult.contains(&ord("w^2*2+w")));
        assert_eq!(all.next_above(&ord("7")).unwrap(), ord("w"));
        assert_eq!(mult.next_above(&ord("w^2")).unwrap(), ord("w^2*2"));
        assert_eq!(mult.next_above(&ord("w^2*2+w*5+1")).unwrap(), ord("w^2*3"));
    }

    #[test]
    fn club_requires_limit_step() {
        assert_eq!(
            ClubClassSpec::multiples_of(ord("5")).unwrap_err(),
            ClubError::NotALimit
        );
    }

    #[test]
    fn sub_left_and_divmod() {
        assert_eq!(ord("w").sub_left(&ord("w+3")).unwrap(), ord("3"));
        assert_eq!(ord("w*2").sub_left(&ord("w^2")).unwrap(), ord("w^2"));
        assert!(ord("w+1").sub_left(&ord("w")).is_err());
        let (q, r) = ord("w^2*2+w*5+1").divmod(&ord("w^2")).unwrap();
        assert_eq!(q, ord("2"));
        assert_eq!(r, ord("w*5+1"));
        let (q, r) = ord("w^3").divmod(&ord("w^2")).unwrap();
        assert_eq!(q, ord("w"));
        assert_eq!(r, ord("0"));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "0",
            "1",
            "17",
            "w",
            "w+1",
            "w*3",
            "w^2*3+w+4",
            "w^3+w^2*2+5",
            "w^(w)",
            "w^(w+1)*2+w^2",
        ] {
            assert_eq!(ord(s).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_noncanonical() {
        assert!("w+w^2".parse::<OrdinalNotation>().is_err());
        assert!("w*0".parse::<OrdinalNotation>().is_err());
        assert!("w^0".parse::<OrdinalNotation>().is_err());
        assert!("1+1".parse::<OrdinalNotation>().is_err());
        assert!("".parse::<OrdinalNotation>().is_err());
        assert!("w+".parse::<OrdinalNotation>().is_err());
    }

    #[test]
    fn depth_cap_enforced() {
        let mut tower = OrdinalNotation::finite(1);
        for _ in 0..7 {
            tower = OrdinalNotation::omega_pow(tower).unwrap();
        }
        assert_eq!(tower.depth(), MAX_DEPTH);
        assert_eq!(
            OrdinalNotation::omega_pow(tower).unwrap_err(),
            OrdinalError::DepthOverflow {
                depth: MAX_DEPTH + 1,
                max: MAX_DEPTH
            }
        );
    }

    #[test]
    fn next_multiple_examples() {
        assert_eq!(ord("5").next_multiple_of(&ord("w")).unwrap(), ord("w"));
        assert_eq!(ord("w").next_multiple_of(&ord("w")).unwrap(), ord("w*2"));
        assert_eq!(
            ord("w^2+w*3+2").next_multiple_of(&ord("w")).unwrap(),
            ord("w^2+w*4")
        );
    }

    #[test]
    fn club_iterate_formula() {
        let mult = ClubClassSpec::multiples_of(ord("w^2")).unwrap();
        assert_eq!(mult.iterate(&ord("0")).unwrap(), ord("w^2"));
        assert_eq!(mult.iterate(&ord("2")).unwrap(), ord("w^2*3"));
        assert_eq!(mult.iterate(&ord("w")).unwrap(), ord("w^3"));
    }
}
