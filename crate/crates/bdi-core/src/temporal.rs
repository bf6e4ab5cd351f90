//! Time instants, half-open validity intervals, and point-in-time queries.
//!
//! Instants are `xsd:dateTime` values normalized to UTC on parse (zoneless
//! input is read as UTC), which gives a total order without zone arithmetic.
//! Intervals are half-open `[start, end)`: a state is valid at its start
//! instant and no longer valid at its end instant.
//!
//! Instant and interval individuals resolve to concrete values from two
//! sources, in order: explicit in-graph data (`bdi:hasTimeValue` literals on
//! instants, `bdi:hasStartTime` / `bdi:hasEndTime` edges on intervals) and a
//! [`TimeMap`] that maps symbolic fixture individuals to representative
//! values. The map is configuration, not code; the CLI loads it from a
//! `timemap.toml` file.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use chrono::{DateTime, NaiveDateTime, Utc};

use crate::mental::EffectKind;
use crate::rdf::{Graph, Iri, Resource, Term};
use crate::schema::SchemaRegistry;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemporalError {
    #[error("`{0}` does not parse as an xsd:dateTime")]
    BadDateTime(String),
    #[error("interval end {end} precedes start {start}")]
    EndBeforeStart { start: TimeInstant, end: TimeInstant },
    #[error("{0} has neither a resolvable hasValidity nor an atTime anchor")]
    NoTemporalExtent(Iri),
}

/// A UTC instant with canonical `xsd:dateTime` serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeInstant(DateTime<Utc>);

impl TimeInstant {
    /// Parses an ISO-8601 / xsd:dateTime string. Offsets are normalized to
    /// UTC; a missing offset means UTC.
    pub fn parse(text: &str) -> Result<Self, TemporalError> {
        if let Ok(dt) = DateTime::parse_from_rfc3339(text) {
            return Ok(TimeInstant(dt.with_timezone(&Utc)));
        }
        NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S%.f")
            .map(|naive| TimeInstant(naive.and_utc()))
            .map_err(|_| TemporalError::BadDateTime(text.to_string()))
    }

    /// Adds whole seconds; used by the deliberation clock.
    pub fn plus_seconds(&self, seconds: u64) -> TimeInstant {
        TimeInstant(self.0 + chrono::Duration::seconds(seconds as i64))
    }

    /// The canonical lexical form; `parse(canonical(t)) == t`.
    pub fn canonical(&self) -> String {
        alloc::format!("{}", self.0.format("%Y-%m-%dT%H:%M:%S%.fZ"))
    }
}

impl fmt::Display for TimeInstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// `[start, end)`; an absent end means the interval is open (ongoing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimeInterval {
    start: TimeInstant,
    end: Option<TimeInstant>,
}

impl TimeInterval {
    pub fn new(start: TimeInstant, end: Option<TimeInstant>) -> Result<Self, TemporalError> {
        if let Some(end) = end {
            if end < start {
                return Err(TemporalError::EndBeforeStart { start, end });
            }
        }
        Ok(TimeInterval { start, end })
    }

    pub fn open(start: TimeInstant) -> Self {
        TimeInterval { start, end: None }
    }

    pub fn start(&self) -> TimeInstant {
        self.start
    }

    pub fn end(&self) -> Option<TimeInstant> {
        self.end
    }

    pub fn is_open(&self) -> bool {
        self.end.is_none()
    }

    /// Half-open containment: `start <= t` and (open or `t < end`).
    pub fn contains(&self, t: TimeInstant) -> bool {
        self.start <= t && self.end.is_none_or(|end| t < end)
    }
}

/// The temporal extent of an entity: an interval, or a point anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Interval(TimeInterval),
    At(TimeInstant),
}

impl Validity {
    pub fn holds_at(&self, t: TimeInstant) -> bool {
        match self {
            Validity::Interval(iv) => iv.contains(t),
            Validity::At(anchor) => *anchor == t,
        }
    }
}

/// Symbolic-individual lookup: interval and instant IRIs mapped to concrete
/// values. Loaded from configuration by the CLI; empty by default.
#[derive(Debug, Clone, Default)]
pub struct TimeMap {
    instants: BTreeMap<Iri, TimeInstant>,
    intervals: BTreeMap<Iri, TimeInterval>,
}

impl TimeMap {
    pub fn new() -> Self {
        TimeMap::default()
    }

    pub fn set_instant(&mut self, iri: Iri, value: TimeInstant) {
        self.instants.insert(iri, value);
    }

    pub fn set_interval(&mut self, iri: Iri, value: TimeInterval) {
        self.intervals.insert(iri, value);
    }

    pub fn instant(&self, iri: &Iri) -> Option<TimeInstant> {
        self.instants.get(iri).copied()
    }

    pub fn interval(&self, iri: &Iri) -> Option<TimeInterval> {
        self.intervals.get(iri).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty() && self.intervals.is_empty()
    }
}

/// Resolves a TimeInstant individual: an in-graph `bdi:hasTimeValue` literal
/// wins, then the time map.
pub fn resolve_instant(g: &Graph, tm: &TimeMap, iri: &Iri) -> Option<TimeInstant> {
    let subject = Resource::Iri(iri.clone());
    for term in g.objects(&subject, vocab::HAS_TIME_VALUE) {
        if let Term::Literal(lit) = term {
            if let Ok(t) = TimeInstant::parse(lit.lexical()) {
                return Some(t);
            }
        }
    }
    tm.instant(iri)
}

/// Resolves a TimeInterval individual: in-graph `hasStartTime`/`hasEndTime`
/// edges win (their instants resolve recursively), then the time map.
pub fn resolve_interval(g: &Graph, tm: &TimeMap, iri: &Iri) -> Option<TimeInterval> {
    let subject = Resource::Iri(iri.clone());
    let mut starts = Vec::new();
    for term in g.objects(&subject, vocab::HAS_START_TIME) {
        if let Term::Iri(instant) = term {
            if let Some(t) = resolve_instant(g, tm, &instant) {
                starts.push(t);
            }
        }
    }
    if let Some(&start) = starts.first() {
        let mut ends = Vec::new();
        for term in g.objects(&subject, vocab::HAS_END_TIME) {
            if let Term::Iri(instant) = term {
                if let Some(t) = resolve_instant(g, tm, &instant) {
                    ends.push(t);
                }
            }
        }
        return TimeInterval::new(start, ends.first().copied()).ok();
    }
    tm.interval(iri)
}

/// The temporal extent of an entity. `hasValidity` wins over `atTime` when
/// both are present; [`anchored_outside_validity`] reports the disagreement.
pub fn validity_of(g: &Graph, tm: &TimeMap, entity: &Iri) -> Result<Validity, TemporalError> {
    let subject = Resource::Iri(entity.clone());
    for term in g.objects(&subject, vocab::HAS_VALIDITY) {
        if let Term::Iri(interval) = term {
            if let Some(iv) = resolve_interval(g, tm, &interval) {
                return Ok(Validity::Interval(iv));
            }
        }
    }
    for term in g.objects(&subject, vocab::AT_TIME) {
        if let Term::Iri(instant) = term {
            if let Some(t) = resolve_instant(g, tm, &instant) {
                return Ok(Validity::At(t));
            }
        }
    }
    Err(TemporalError::NoTemporalExtent(entity.clone()))
}

/// True iff the entity's extent holds at `t` (half-open for intervals, exact
/// match for point anchors).
pub fn valid_at(g: &Graph, tm: &TimeMap, entity: &Iri, t: TimeInstant) -> Result<bool, TemporalError> {
    Ok(validity_of(g, tm, entity)?.holds_at(t))
}

/// Entities carrying both `hasValidity` and `atTime` whose anchor falls
/// outside the validity interval. Validity wins for queries; this exists so
/// callers can surface the disagreement as a warning.
pub fn anchored_outside_validity(g: &Graph, tm: &TimeMap) -> Vec<Iri> {
    let mut out = Vec::new();
    for subject in g.subjects_iter() {
        let Resource::Iri(iri) = subject else { continue };
        let intervals = g.objects(subject, vocab::HAS_VALIDITY);
        let anchors = g.objects(subject, vocab::AT_TIME);
        if intervals.is_empty() || anchors.is_empty() {
            continue;
        }
        let Ok(Validity::Interval(iv)) = validity_of(g, tm, iri) else {
            continue;
        };
        for anchor in anchors {
            if let Term::Iri(instant) = anchor {
                if let Some(t) = resolve_instant(g, tm, &instant) {
                    if !iv.contains(t) {
                        out.push(iri.clone());
                        break;
                    }
                }
            }
        }
    }
    out
}

/// The agent's mental states valid at `t`, in sorted order. States without a
/// resolvable temporal extent are not valid at any instant.
pub fn states_valid_at(
    g: &Graph,
    tm: &TimeMap,
    reg: &SchemaRegistry,
    agent: &Iri,
    t: TimeInstant,
) -> Vec<Iri> {
    let subject = Resource::Iri(agent.clone());
    let mut out = Vec::new();
    for term in g.objects(&subject, vocab::HAS_MENTAL_STATE) {
        let Term::Iri(state) = term else { continue };
        if !reg.is_instance(g, &Resource::Iri(state.clone()), vocab::MENTAL_STATE) {
            continue;
        }
        if valid_at(g, tm, &state, t).unwrap_or(false) {
            out.push(state);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// One step in an entity's evolution: the process that affected it, when, and
/// how. Processes without a resolvable `atTime` sort first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryEntry {
    pub at: Option<TimeInstant>,
    pub process: Iri,
    pub effect: EffectKind,
}

/// All affects-edges targeting the entity or its modify-successors, ordered
/// by process time then process id. A process that `modifies` the successor
/// of a state it suppresses is reported once, as a modification.
pub fn history(g: &Graph, tm: &TimeMap, entity: &Iri) -> Vec<HistoryEntry> {
    let mut chain = alloc::vec![entity.clone()];
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(entity.clone());
    // Follow modify-successor links: a process that suppresses x and modifies
    // y turned x into y.
    let mut cursor = entity.clone();
    loop {
        let mut next = None;
        for proc in g.subjects(vocab::SUPPRESSES, &Term::Iri(cursor.clone())) {
            let Resource::Iri(proc_iri) = proc else { continue };
            for term in g.objects(&Resource::Iri(proc_iri.clone()), vocab::MODIFIES) {
                if let Term::Iri(successor) = term {
                    if seen.insert(successor.clone()) {
                        next = Some(successor);
                        break;
                    }
                }
            }
            if next.is_some() {
                break;
            }
        }
        match next {
            Some(successor) => {
                chain.push(successor.clone());
                cursor = successor;
            }
            None => break,
        }
    }

    let mut entries: BTreeMap<Iri, EffectKind> = BTreeMap::new();
    for member in &chain {
        let target = Term::Iri(member.clone());
        for (pred, effect) in [
            (vocab::GENERATES, EffectKind::Generates),
            (vocab::MODIFIES, EffectKind::Modifies),
            (vocab::SUPPRESSES, EffectKind::Suppresses),
        ] {
            for proc in g.subjects(pred, &target) {
                let Resource::Iri(proc_iri) = proc else { continue };
                entries
                    .entry(proc_iri)
                    .and_modify(|kind| {
                        // Modifies dominates: the suppress half of a modify is
                        // the same deliberative step.
                        if effect == EffectKind::Modifies {
                            *kind = EffectKind::Modifies;
                        }
                    })
                    .or_insert(effect);
            }
        }
    }

    let mut out: Vec<HistoryEntry> = entries
        .into_iter()
        .map(|(process, effect)| HistoryEntry {
            at: process_time(g, tm, &process),
            process,
            effect,
        })
        .collect();
    out.sort_by(|a, b| a.at.cmp(&b.at).then_with(|| a.process.cmp(&b.process)));
    out
}

fn process_time(g: &Graph, tm: &TimeMap, process: &Iri) -> Option<TimeInstant> {
    for term in g.objects(&Resource::Iri(process.clone()), vocab::AT_TIME) {
        if let Term::Iri(instant) = term {
            if let Some(t) = resolve_instant(g, tm, &instant) {
                return Some(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TimeInstant {
        TimeInstant::parse(s).unwrap()
    }

    #[test]
    fn parse_normalizes_to_utc() {
        assert_eq!(t("2025-10-27T10:15:00+01:00"), t("2025-10-27T09:15:00Z"));
        assert_eq!(t("2025-10-27T10:15:00"), t("2025-10-27T10:15:00Z"));
        assert!(TimeInstant::parse("yesterday").is_err());
    }

    #[test]
    fn canonical_round_trips() {
        for s in [
            "2025-10-27T10:15:00Z",
            "2025-10-27T10:15:00.250Z",
            "2025-10-27T10:15:00+02:00",
        ] {
            let parsed = t(s);
            assert_eq!(TimeInstant::parse(&parsed.canonical()).unwrap(), parsed);
        }
    }

    #[test]
    fn open_interval_includes_start() {
        let iv = TimeInterval::open(t("2025-01-01T00:00:00Z"));
        assert!(iv.contains(t("2025-01-01T00:00:00Z")));
        assert!(!iv.contains(t("2024-12-31T23:59:59Z")));
    }

    #[test]
    fn closed_interval_excludes_end() {
        let iv = TimeInterval::new(
            t("2025-01-01T00:00:00Z"),
            Some(t("2025-01-02T00:00:00Z")),
        )
        .unwrap();
        assert!(iv.contains(t("2025-01-01T00:00:00Z")));
        assert!(iv.contains(t("2025-01-01T23:59:59Z")));
        assert!(!iv.contains(t("2025-01-02T00:00:00Z")));
    }

    #[test]
    fn end_before_start_rejected() {
        assert!(TimeInterval::new(
            t("2025-01-02T00:00:00Z"),
            Some(t("2025-01-01T00:00:00Z"))
        )
        .is_err());
    }

    #[test]
    fn instants_totally_ordered() {
        let a = t("2025-01-01T00:00:00Z");
        let b = t("2025-01-01T00:00:01Z");
        assert!(a < b);
        assert_eq!(a.cmp(&a), core::cmp::Ordering::Equal);
    }
}
