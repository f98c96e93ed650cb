//! Trace records emitted by the runner: one per successor step, one per
//! limit resolution, plus terminators. The textual trace format lives in the
//! command-line crate; the engine hands out records in stage order.

use crate::machine::{StateId, TapeId};
use crate::ordinal::OrdinalNotation;

use super::UnresolvedReason;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEventKind {
    Step,
    Limit,
    Club,
    Halt,
    RepeatDetected,
    Unresolved,
}

/// Witness summary attached to limit and club records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessInfo {
    pub translation: bool,
    pub period: u64,
    pub shift: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub stage: OrdinalNotation,
    pub kind: TraceEventKind,
    pub state: StateId,
    pub head: usize,
    /// Cells whose value changed at this step.
    pub writes: Vec<(TapeId, usize, bool)>,
    pub witness: Option<WitnessInfo>,
    pub unresolved: Option<UnresolvedReason>,
}

/// Consumer of trace records. The no-op sink lets the runner skip record
/// construction entirely.
pub trait TraceSink {
    fn enabled(&self) -> bool {
        true
    }
    fn record(&mut self, event: TraceEvent);
}

/// Discards everything.
pub struct NoTrace;

impl TraceSink for NoTrace {
    fn enabled(&self) -> bool {
        false
    }
    fn record(&mut self, _event: TraceEvent) {}
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}
