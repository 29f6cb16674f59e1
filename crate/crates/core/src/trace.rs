//! Event traces (JSONL) and run statistics, plus a deterministic event
//! queue keyed by exact event times.
//!
//! Times are serialized as TimeRoot triples {poly, lo, hi} so a trace can be
//! replayed exactly: polynomial coefficients are vectors of rational strings
//! in the field's power basis.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::num::{rat_to_string, Rat};
use crate::roots::TimeRoot;

pub fn timeroot_json(t: &TimeRoot) -> Value {
    let poly: Vec<Value> = t
        .defining_poly()
        .coeffs()
        .iter()
        .map(|s| {
            Value::Array(
                s.coeffs()
                    .iter()
                    .map(|r| Value::String(rat_to_string(r)))
                    .collect(),
            )
        })
        .collect();
    let (lo, hi) = t.interval();
    json!({
        "poly": poly,
        "lo": rat_to_string(&lo),
        "hi": rat_to_string(&hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    Flip,
    Corner,
    Swap,
    Tournament,
    SdgAdd,
    SdgRemove,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Flip => "flip",
            EventKind::Corner => "corner",
            EventKind::Swap => "swap",
            EventKind::Tournament => "tournament",
            EventKind::SdgAdd => "sdg-add",
            EventKind::SdgRemove => "sdg-remove",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceEvent {
    pub t: Value,
    pub kind: EventKind,
    pub edge: Option<(usize, usize)>,
    pub detail: Value,
}

impl TraceEvent {
    pub fn new(t: &TimeRoot, kind: EventKind, edge: Option<(usize, usize)>, detail: Value) -> TraceEvent {
        TraceEvent { t: timeroot_json(t), kind, edge, detail }
    }

    /// One canonical JSONL line (serde_json orders object keys).
    pub fn to_line(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("t".into(), self.t.clone());
        obj.insert("kind".into(), Value::String(self.kind.as_str().into()));
        if let Some((a, b)) = self.edge {
            obj.insert("edge".into(), json!([a, b]));
        }
        obj.insert("detail".into(), self.detail.clone());
        serde_json::to_string(&Value::Object(obj)).unwrap()
    }
}

/// Run statistics: event counts by kind, SDG churn, queue pressure.
#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub events_by_kind: BTreeMap<String, u64>,
    pub sdg_adds: u64,
    pub sdg_removes: u64,
    pub max_queue: usize,
    pub max_live_certs: usize,
    pub total_events: u64,
}

impl Stats {
    pub fn count(&mut self, kind: EventKind) {
        *self.events_by_kind.entry(kind.as_str().to_string()).or_insert(0) += 1;
        self.total_events += 1;
        match kind {
            EventKind::SdgAdd => self.sdg_adds += 1,
            EventKind::SdgRemove => self.sdg_removes += 1,
            _ => {}
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "events_by_kind": self.events_by_kind,
            "sdg_adds": self.sdg_adds,
            "sdg_removes": self.sdg_removes,
            "max_queue": self.max_queue,
            "max_live_certs": self.max_live_certs,
            "total_events": self.total_events,
        })
    }
}

// ---------------------------------------------------------------------------
// deterministic event queue
// ---------------------------------------------------------------------------

/// Priority queue over exact event times with a total tiebreak on the
/// payload for reproducible pop order. Stale entries are the owner's
/// concern; strictly-increasing processing catches coincident live events.
pub struct EventQueue<E: Ord> {
    heap: std::collections::BinaryHeap<Item<E>>,
    pub max_len: usize,
}

struct Item<E> {
    due: TimeRoot,
    payload: E,
}

impl<E: Ord> PartialEq for Item<E> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl<E: Ord> Eq for Item<E> {}
impl<E: Ord> PartialOrd for Item<E> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<E: Ord> Ord for Item<E> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; reverse for earliest-first
        other
            .due
            .cmp_root(&self.due)
            .then_with(|| other.payload.cmp(&self.payload))
    }
}

impl<E: Ord> Default for EventQueue<E> {
    fn default() -> Self {
        EventQueue { heap: std::collections::BinaryHeap::new(), max_len: 0 }
    }
}

impl<E: Ord> EventQueue<E> {
    pub fn new() -> EventQueue<E> {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn push(&mut self, due: TimeRoot, payload: E) {
        self.heap.push(Item { due, payload });
        self.max_len = self.max_len.max(self.heap.len());
    }

    /// Pop the earliest event strictly before `target`.
    pub fn pop_before(&mut self, target: &Rat) -> Option<(TimeRoot, E)> {
        if let Some(item) = self.heap.peek() {
            if item.due.cmp_rat(target) == std::cmp::Ordering::Less {
                let item = self.heap.pop().unwrap();
                return Some((item.due, item.payload));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::num::{rat, rat_int};

    #[test]
    fn queue_orders_by_time_then_payload() {
        let f = NumberField::rationals();
        let mut q: EventQueue<usize> = EventQueue::new();
        q.push(TimeRoot::rational(&f, &rat(1, 2)), 5);
        q.push(TimeRoot::rational(&f, &rat(1, 4)), 9);
        q.push(TimeRoot::rational(&f, &rat(1, 2)), 2);
        let (t1, p1) = q.pop_before(&rat_int(1)).unwrap();
        assert!(t1.is_rational(&rat(1, 4)) && p1 == 9);
        let (_, p2) = q.pop_before(&rat_int(1)).unwrap();
        assert_eq!(p2, 2);
        let (_, p3) = q.pop_before(&rat_int(1)).unwrap();
        assert_eq!(p3, 5);
        assert!(q.pop_before(&rat_int(1)).is_none());
        assert_eq!(q.max_len, 3);
    }

    #[test]
    fn trace_line_is_deterministic() {
        let f = NumberField::rationals();
        let t = TimeRoot::rational(&f, &rat(1, 3));
        let e = TraceEvent::new(&t, EventKind::Flip, Some((2, 5)), serde_json::json!({"note": 1}));
        let line = e.to_line();
        assert_eq!(e.to_line(), line);
        assert!(line.contains("\"kind\":\"flip\""));
        assert!(line.contains("\"edge\":[2,5]"));
        assert!(line.contains("\"lo\""));
    }
}
