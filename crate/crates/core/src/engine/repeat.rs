//! Repeat detection: a computation repeats once its configuration recurs at
//! two designated stages with no cell that showed zero at the earlier stage
//! flashing a one in between. Designated stages are all limit stages for
//! plain machines and club stages for club-recognizing ones.

use crate::machine::{Configuration, Real};
use crate::ordinal::OrdinalNotation;

/// Which repeat criterion a snapshot sequence is checked against. The
/// algorithm is identical; the sense records which stages were designated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepeatSense {
    Ittm,
    Crittm,
}

impl std::fmt::Display for RepeatSense {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepeatSense::Ittm => write!(f, "ittm"),
            RepeatSense::Crittm => write!(f, "crittm"),
        }
    }
}

/// A designated-stage snapshot with its flip summary: per tape, the cells
/// that showed a one at some stage since the previous designated stage
/// (inclusive of this stage).
#[derive(Debug, Clone)]
pub struct StageSnapshot {
    pub stage: OrdinalNotation,
    pub config: Configuration,
    pub seen1: [Real; 3],
}

/// The least pair `(from, to)` of designated stages with identical
/// configurations such that no cell showing zero at `from` shows a one
/// anywhere in between. Pairs are ordered by `to`, then by `from`; absence
/// is a valid answer.
pub fn detect_repeat(snaps: &[StageSnapshot]) -> Option<(OrdinalNotation, OrdinalNotation)> {
    for j in 1..snaps.len() {
        if let Some(i) = repeat_partner(snaps, j) {
            return Some((snaps[i].stage.clone(), snaps[j].stage.clone()));
        }
    }
    None
}

/// Least `i < j` such that `(i, j)` witnesses a repeat, if any. Incremental
/// form used by the runner as each snapshot arrives.
pub fn repeat_partner(snaps: &[StageSnapshot], j: usize) -> Option<usize> {
    // Suffix unions of seen1 over (i, j]: union[i][t] = seen1_{i+1} | ... | seen1_j.
    let mut unions: Vec<[Real; 3]> = Vec::with_capacity(j);
    let mut acc = [Real::zeros(), Real::zeros(), Real::zeros()];
    for k in (1..=j).rev() {
        for t in 0..3 {
            acc[t] = Real::or(&acc[t], &snaps[k].seen1[t]);
        }
        unions.push(acc.clone());
    }
    unions.reverse(); // unions[i] now covers (i, j] for i in 0..j
    for i in 0..j {
        if snaps[i].config != snaps[j].config {
            continue;
        }
        let clean = (0..3).all(|t| !Real::one_outside(&unions[i][t], &snaps[i].config.tapes[t]));
        if clean {
            return Some(i);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Configuration, Real};
    use crate::ordinal::OrdinalNotation;

    fn config(bits: &[usize]) -> Configuration {
        Configuration {
            state: 1,
            head: 0,
            tapes: [
                Real::zeros(),
                Real::from_support(bits.iter().copied()),
                Real::zeros(),
            ],
        }
    }

    fn snap(stage: &str, cfg: &Configuration, flashed: &[usize]) -> StageSnapshot {
        let mut seen = cfg.tapes.clone();
        for &c in flashed {
            seen[1].set(c, true);
        }
        StageSnapshot {
            stage: stage.parse::<OrdinalNotation>().unwrap(),
            config: cfg.clone(),
            seen1: seen,
        }
    }

    #[test]
    fn identical_clean_snapshots_repeat() {
        let c = config(&[0]);
        let snaps = vec![snap("w", &c, &[]), snap("w*2", &c, &[])];
        assert_eq!(
            detect_repeat(&snaps),
            Some(("w".parse().unwrap(), "w*2".parse().unwrap()))
        );
    }

    #[test]
    fn zero_cell_flash_blocks_repeat() {
        let c = config(&[0]);
        // Cell 5 shows 0 in both snapshots but flashed a 1 in between.
        let snaps = vec![snap("w", &c, &[]), snap("w*2", &c, &[5])];
        assert_eq!(detect_repeat(&snaps), None);
    }

    #[test]
    fn flash_on_a_one_cell_is_allowed() {
        let c = config(&[0, 5]);
        let snaps = vec![snap("w", &c, &[5]), snap("w*2", &c, &[5])];
        assert!(detect_repeat(&snaps).is_some());
    }

    #[test]
    fn least_pair_wins() {
        let a = config(&[0]);
        let mut other = config(&[0]);
        other.state = 2;
        let snaps = vec![
            snap("w", &a, &[]),
            snap("w*2", &other, &[]),
            snap("w*3", &a, &[]),
        ];
        // (w, w*3) is the least pair even though (w*2, ...) never matches.
        assert_eq!(
            detect_repeat(&snaps),
            Some(("w".parse().unwrap(), "w*3".parse().unwrap()))
        );
    }
}
