//! Limit extrapolation: detecting that a segment of successor steps (or a
//! sequence of same-level limit snapshots) has become periodic, and
//! computing the exact limsup tapes for the next limit stage.
//!
//! Two detectors. An exact loop is two identical snapshots with identical
//! intervening one-histories; by determinism the segment then cycles
//! forever. A translation is a configuration that recurs shifted right by a
//! fixed amount above a frozen prefix the head never re-enters; the segment
//! then marches right forever and every cell eventually freezes. Translations
//! only occur among successor steps (limit snapshots all have head 0).

use crate::machine::{step, Configuration, Program, Real};

/// One snapshot in a detection ring. `seen1` is the set of cells that showed
/// a one at some stage since the previous snapshot (inclusive of this one);
/// `None` means the snapshot's own tape contents (the successor-step case,
/// where snapshots are consecutive configurations).
#[derive(Debug, Clone)]
pub struct RingEntry {
    pub config: Configuration,
    pub seen1: Option<[Real; 3]>,
}

impl RingEntry {
    pub fn of_config(config: Configuration) -> Self {
        RingEntry {
            config,
            seen1: None,
        }
    }

    fn seen1_tape(&self, t: usize) -> &Real {
        match &self.seen1 {
            Some(s) => &s[t],
            None => &self.config.tapes[t],
        }
    }
}

fn entries_equal(a: &RingEntry, b: &RingEntry) -> bool {
    a.config == b.config && (0..3).all(|t| a.seen1_tape(t) == b.seen1_tape(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Replaying `period` steps from the anchor reproduces the anchor.
    ExactLoop { period: u64 },
    /// Replaying `period` steps from the anchor reproduces the anchor with
    /// the head `shift` cells further right and tape contents shifted
    /// correspondingly above the frozen prefix.
    Translation { period: u64, shift: u64 },
}

/// Proof object for a resolved limit: how the tail repeats and the exact
/// per-cell limsups it forces.
#[derive(Debug, Clone)]
pub struct ExtrapolationWitness {
    pub kind: WitnessKind,
    pub anchor: Configuration,
    /// Tape contents at the extrapolated limit stage.
    pub limsups: [Real; 3],
    /// Cells showing a one at some stage in the skipped interval.
    pub interval_ones: [Real; 3],
    /// Translation only: cells below this index are untouched from the
    /// anchor on.
    pub frozen_prefix: usize,
}

/// Scans a snapshot ring for a loop or translation ending at the last entry.
/// Smaller periods are preferred. Returns `None` when neither detector
/// fires; the caller turns that into budget-driven outcomes.
pub fn extrapolate_to_limit(ring: &[RingEntry], allow_translation: bool) -> Option<ExtrapolationWitness> {
    let n = ring.len();
    if n < 2 {
        return None;
    }
    for i in (0..n - 1).rev() {
        if entries_equal(&ring[i], &ring[n - 1]) {
            return Some(exact_witness(ring, i));
        }
    }
    if allow_translation {
        let last = &ring[n - 1].config;
        for i in (0..n - 1).rev() {
            let anchor = &ring[i].config;
            if anchor.state != last.state || anchor.head >= last.head {
                continue;
            }
            if let Some(w) = try_translation(ring, i) {
                return Some(w);
            }
        }
    }
    None
}

/// Builds the exact-loop witness anchored at `i` (the window `(i, last]` is
/// one full period).
pub(crate) fn exact_witness(ring: &[RingEntry], i: usize) -> ExtrapolationWitness {
    let n = ring.len();
    let mut limsups = [Real::zeros(), Real::zeros(), Real::zeros()];
    for t in 0..3 {
        let mut acc = Real::zeros();
        for entry in &ring[i + 1..n] {
            acc = Real::or(&acc, &entry.config.tapes[t]);
            acc = Real::or(&acc, entry.seen1_tape(t));
        }
        limsups[t] = acc;
    }
    ExtrapolationWitness {
        kind: WitnessKind::ExactLoop {
            period: (n - 1 - i) as u64,
        },
        anchor: ring[i].config.clone(),
        interval_ones: limsups.clone(),
        limsups,
        frozen_prefix: 0,
    }
}

/// Verifies the translation conditions for anchor `i` against the last
/// entry and builds the witness.
pub(crate) fn try_translation(ring: &[RingEntry], i: usize) -> Option<ExtrapolationWitness> {
    let n = ring.len();
    let anchor = &ring[i].config;
    let last = &ring[n - 1].config;
    let shift = last.head - anchor.head;
    if shift == 0 {
        return None;
    }
    let frozen = ring[i..n].iter().map(|e| e.config.head).min().unwrap();
    for t in 0..3 {
        let a = anchor.tapes[t].suffix_from(frozen);
        let b = last.tapes[t].suffix_from(frozen + shift);
        if a != b {
            return None;
        }
    }
    // Limsup: the frozen prefix stays, and above it every cell eventually
    // freezes to the pattern of the block laid down each period.
    let mut limsups = [Real::zeros(), Real::zeros(), Real::zeros()];
    let mut interval = [Real::zeros(), Real::zeros(), Real::zeros()];
    for t in 0..3 {
        let prefix: Vec<bool> = (0..frozen).map(|c| anchor.tapes[t].get(c)).collect();
        let block: Vec<bool> = (frozen..frozen + shift).map(|c| last.tapes[t].get(c)).collect();
        limsups[t] = Real::from_prefix_cycle(prefix.clone(), block);

        let mut suffix_or = Real::zeros();
        for entry in &ring[i..n] {
            suffix_or = Real::or(&suffix_or, &entry.config.tapes[t].suffix_from(frozen));
        }
        let shifted = shift_union(&suffix_or, shift);
        interval[t] = concat_bits(prefix, &shifted);
    }
    Some(ExtrapolationWitness {
        kind: WitnessKind::Translation {
            period: (n - 1 - i) as u64,
            shift: shift as u64,
        },
        anchor: anchor.clone(),
        limsups,
        interval_ones: interval,
        frozen_prefix: frozen,
    })
}

/// Union of `e` shifted right by every multiple of `s`:
/// `out[y] = 1` iff `e[q] = 1` for some `q <= y` with `q ≡ y (mod s)`.
pub(crate) fn shift_union(e: &Real, s: usize) -> Real {
    let bound = e.prefix_len() + lcm(e.cycle_len(), s) + s;
    let mut first: Vec<Option<usize>> = vec![None; s];
    for (r, slot) in first.iter_mut().enumerate() {
        let mut q = r;
        while q < bound {
            if e.get(q) {
                *slot = Some(q);
                break;
            }
            q += s;
        }
    }
    let max_first = first.iter().flatten().copied().max();
    let plen = max_first.map_or(0, |m| m + 1);
    let prefix: Vec<bool> = (0..plen)
        .map(|y| first[y % s].is_some_and(|f| f <= y))
        .collect();
    let cycle: Vec<bool> = (0..s).map(|r| first[r].is_some()).collect();
    Real::from_prefix_cycle(prefix, cycle)
}

fn concat_bits(mut bits: Vec<bool>, tail: &Real) -> Real {
    let plen = tail.prefix_len();
    for i in 0..plen {
        bits.push(tail.get(i));
    }
    let cycle: Vec<bool> = (0..tail.cycle_len()).map(|i| tail.get(plen + i)).collect();
    Real::from_prefix_cycle(bits, cycle)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        1
    } else {
        a / gcd(a, b) * b
    }
}

/// Replays `period` steps from the witness anchor and checks the witness
/// equations exactly. Used by the soundness tests and available to callers
/// that want to audit a run.
pub fn verify_witness(p: &Program, w: &ExtrapolationWitness) -> bool {
    let (period, shift) = match w.kind {
        WitnessKind::ExactLoop { period } => (period, 0usize),
        WitnessKind::Translation { period, shift } => (period, shift as usize),
    };
    let mut c = w.anchor.clone();
    let mut min_head = c.head;
    for _ in 0..period {
        match step(p, &c) {
            Ok(next) => c = next,
            Err(_) => return false,
        }
        min_head = min_head.min(c.head);
    }
    match w.kind {
        WitnessKind::ExactLoop { .. } => c == w.anchor,
        WitnessKind::Translation { .. } => {
            c.state == w.anchor.state
                && c.head == w.anchor.head + shift
                && min_head >= w.frozen_prefix
                && (0..3).all(|t| {
                    c.tapes[t].suffix_from(w.frozen_prefix + shift)
                        == w.anchor.tapes[t].suffix_from(w.frozen_prefix)
                        && (0..w.frozen_prefix)
                            .all(|cell| c.tapes[t].get(cell) == w.anchor.tapes[t].get(cell))
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{read_one, write_one, ProgramBuilder, ANY, KEEP, SCR};
    use crate::machine::{initial_configuration, Move};

    fn entries_of_run(p: &Program, n: usize) -> Vec<RingEntry> {
        let mut c = initial_configuration(p, &Real::zeros());
        let mut out = vec![RingEntry::of_config(c.clone())];
        for _ in 0..n {
            c = step(p, &c).unwrap();
            out.push(RingEntry::of_config(c.clone()));
        }
        out
    }

    #[test]
    fn one_step_self_loop_never_writing() {
        // start bounces right/left forever without writing.
        let mut b = ProgramBuilder::new();
        let a = b.state("a");
        b.set_start(a);
        let spin_b = b.state("b");
        b.rule(a, ANY, KEEP, Move::Right, spin_b);
        b.rule(spin_b, ANY, KEEP, Move::Left, a);
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, b.halt_state());
        let np = b.finish();
        let ring = entries_of_run(&np.program, 2);
        let w = extrapolate_to_limit(&ring, true).expect("loop detected");
        assert_eq!(w.kind, WitnessKind::ExactLoop { period: 2 });
        assert!(w.limsups.iter().all(Real::is_zero));
        assert!(verify_witness(&np.program, &w));
    }

    #[test]
    fn write_then_erase_forces_limsup_one() {
        // Loop that alternately writes and erases scratch cell 0.
        let mut b = ProgramBuilder::new();
        let on = b.state("on");
        let off = b.state("off");
        b.set_start(on);
        b.rule(on, read_one(SCR, false), write_one(SCR, true), Move::Right, off);
        b.rule(on, read_one(SCR, true), write_one(SCR, false), Move::Right, off);
        b.rule(off, ANY, KEEP, Move::Left, on);
        let np = b.finish();
        let p = &np.program;
        let mut c = initial_configuration(p, &Real::zeros());
        let mut ring = vec![RingEntry::of_config(c.clone())];
        let mut witness = None;
        for _ in 0..8 {
            c = step(p, &c).unwrap();
            ring.push(RingEntry::of_config(c.clone()));
            if let Some(w) = extrapolate_to_limit(&ring, true) {
                witness = Some(w);
                break;
            }
        }
        let w = witness.expect("loop detected");
        assert!(matches!(w.kind, WitnessKind::ExactLoop { .. }));
        assert!(w.limsups[SCR].get(0), "flipped cell has limsup one");
        assert!(verify_witness(p, &w));
    }

    #[test]
    fn march_right_writing_ones() {
        let mut b = ProgramBuilder::new();
        let m = b.state("march");
        b.set_start(m);
        b.rule(m, ANY, write_one(SCR, true), Move::Right, m);
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, b.halt_state());
        let np = b.finish();
        let ring = entries_of_run(&np.program, 3);
        let w = extrapolate_to_limit(&ring, true).expect("translation detected");
        assert_eq!(w.kind, WitnessKind::Translation { period: 1, shift: 1 });
        // Every scratch cell is eventually one.
        assert!((0..16).all(|i| w.limsups[SCR].get(i)));
        assert!(w.limsups[0].is_zero());
        assert!(verify_witness(&np.program, &w));
    }

    #[test]
    fn translation_interval_ones_cover_flashes() {
        // March right flashing each cell (write 1, bounce, write 0, move
        // on): every cell stabilizes at 0 so the limsup vanishes, but the
        // interval union must show the transient ones.
        let mut b = ProgramBuilder::new();
        let f1 = b.state("f1");
        let f2 = b.state("f2");
        let f3 = b.state("f3");
        b.set_start(f1);
        b.rule(f1, ANY, write_one(SCR, true), Move::Right, f2);
        b.rule(f2, ANY, KEEP, Move::Left, f3);
        b.rule(f3, ANY, write_one(SCR, false), Move::Right, f1);
        let np = b.finish();
        let p = &np.program;
        let mut c = initial_configuration(p, &Real::zeros());
        let mut ring = vec![RingEntry::of_config(c.clone())];
        let mut witness = None;
        for _ in 0..12 {
            c = step(p, &c).unwrap();
            ring.push(RingEntry::of_config(c.clone()));
            if let Some(w) = extrapolate_to_limit(&ring, true) {
                witness = Some(w);
                break;
            }
        }
        let w = witness.expect("translation detected");
        assert!(matches!(w.kind, WitnessKind::Translation { .. }));
        // Every cell is flashed then left at 0: limsup zero, interval all 1.
        assert!(w.limsups[SCR].is_zero());
        assert!((w.frozen_prefix..w.frozen_prefix + 16).all(|i| w.interval_ones[SCR].get(i)));
        assert!(verify_witness(p, &w));
    }

    #[test]
    fn shift_union_examples() {
        // e = 1 at position 2 only, s = 3: ones at 2, 5, 8, ...
        let e = Real::from_support([2]);
        let u = shift_union(&e, 3);
        for y in 0..12 {
            assert_eq!(u.get(y), y >= 2 && (y - 2) % 3 == 0, "y={y}");
        }
        // e periodic (01), s = 2: odd positions are 1 eventually; position 1 hits.
        let e: Real = "(01)".parse().unwrap();
        let u = shift_union(&e, 2);
        for y in 0..10 {
            assert_eq!(u.get(y), y % 2 == 1, "y={y}");
        }
    }
}
