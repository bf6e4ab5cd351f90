//! Typed, provenance-preserving operations over the triple store for
//! creating and evolving mental entities.
//!
//! A [`MentalSession`] owns a graph and funnels all writes through a single
//! writer. Individuals are minted as `run:{Kind}_{n}` with per-kind monotone
//! counters — no wall clock, no randomness — so replays are deterministic.
//! Suppression closes a state's validity interval but never deletes triples:
//! history is preserved.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::rdf::{Graph, Iri, Literal, Resource, Term, Triple};
use crate::schema::SchemaRegistry;
use crate::temporal::TimeInstant;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MentalError {
    #[error("{0} is not typed as an Agent")]
    NotAnAgent(Iri),
    #[error("{0} is not typed as a WorldState")]
    NotAWorldState(Iri),
    #[error("{0} is not a mental entity")]
    NotMentalEntity(Iri),
    #[error("{0} is not a mental state")]
    NotMentalState(Iri),
    #[error("process {process} cannot produce a {wanted}: its kind does not match")]
    ProcessKindMismatch { process: Iri, wanted: &'static str },
    #[error("{state} has no open in-graph validity interval")]
    NoValidity { state: Iri },
    #[error("validity of {state} is already closed")]
    AlreadyClosed { state: Iri },
    #[error("{state} is not valid at {at}: its validity starts at {start}")]
    NotValidAt {
        state: Iri,
        at: TimeInstant,
        start: TimeInstant,
    },
    #[error("cannot link {rel}: expected {expected}, found {found}")]
    LinkClassMismatch {
        rel: StateRelation,
        expected: &'static str,
        found: Iri,
    },
    #[error("{target} cannot trigger a process: not a MentalEntity or WorldState")]
    InvalidTrigger { target: Resource },
    #[error("reasonsUpon target {target} is not typed {required}")]
    InvalidReasonsUpon { target: Iri, required: &'static str },
    #[error("part {part} does not match the kind of {whole}")]
    PartKindMismatch { whole: Iri, part: Iri },
    #[error("{0} does not occur in the graph")]
    UnknownEntity(Iri),
    #[error("cannot determine the owning agent of {0}")]
    UnknownOwner(Iri),
    #[error("{0} has no refersTo world state to carry over")]
    NoReferent(Iri),
}

/// The three mental-state classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StateKind {
    Belief,
    Desire,
    Intention,
}

impl StateKind {
    pub fn class(self) -> &'static str {
        match self {
            StateKind::Belief => vocab::BELIEF,
            StateKind::Desire => vocab::DESIRE,
            StateKind::Intention => vocab::INTENTION,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StateKind::Belief => "Belief",
            StateKind::Desire => "Desire",
            StateKind::Intention => "Intention",
        }
    }

    /// The process class allowed to affect states of this kind.
    pub fn process_class(self) -> &'static str {
        match self {
            StateKind::Belief => vocab::BELIEF_PROCESS,
            StateKind::Desire => vocab::DESIRE_PROCESS,
            StateKind::Intention => vocab::INTENTION_PROCESS,
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The process classes a deliberative step can be typed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProcessKind {
    Belief,
    Desire,
    Intention,
    Planning,
    /// A step that only links, justifies, or emits: typed plain MentalProcess.
    Generic,
}

impl ProcessKind {
    pub fn class(self) -> &'static str {
        match self {
            ProcessKind::Belief => vocab::BELIEF_PROCESS,
            ProcessKind::Desire => vocab::DESIRE_PROCESS,
            ProcessKind::Intention => vocab::INTENTION_PROCESS,
            ProcessKind::Planning => vocab::PLANNING,
            ProcessKind::Generic => vocab::MENTAL_PROCESS,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProcessKind::Belief => "BeliefProcess",
            ProcessKind::Desire => "DesireProcess",
            ProcessKind::Intention => "IntentionProcess",
            ProcessKind::Planning => "Planning",
            ProcessKind::Generic => "MentalProcess",
        }
    }

    pub fn for_state(kind: StateKind) -> ProcessKind {
        match kind {
            StateKind::Belief => ProcessKind::Belief,
            StateKind::Desire => ProcessKind::Desire,
            StateKind::Intention => ProcessKind::Intention,
        }
    }
}

/// How a process affected a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EffectKind {
    Generates,
    Modifies,
    Suppresses,
}

impl EffectKind {
    pub fn property(self) -> &'static str {
        match self {
            EffectKind::Generates => vocab::GENERATES,
            EffectKind::Modifies => vocab::MODIFIES,
            EffectKind::Suppresses => vocab::SUPPRESSES,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EffectKind::Generates => "generates",
            EffectKind::Modifies => "modifies",
            EffectKind::Suppresses => "suppresses",
        }
    }
}

impl fmt::Display for EffectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The state-to-state relations with fixed class pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateRelation {
    /// Belief → Desire, inverse isMotivatedBy.
    Motivates,
    /// Belief → Intention, inverse isSupportedBy.
    Supports,
    /// Intention → Desire; no inverse in the vocabulary.
    Fulfils,
}

impl StateRelation {
    pub fn property(self) -> &'static str {
        match self {
            StateRelation::Motivates => vocab::MOTIVATES,
            StateRelation::Supports => vocab::SUPPORTS,
            StateRelation::Fulfils => vocab::FULFILS,
        }
    }

    pub fn inverse(self) -> Option<&'static str> {
        match self {
            StateRelation::Motivates => Some(vocab::IS_MOTIVATED_BY),
            StateRelation::Supports => Some(vocab::IS_SUPPORTED_BY),
            StateRelation::Fulfils => None,
        }
    }

    pub fn source_class(self) -> &'static str {
        match self {
            StateRelation::Motivates | StateRelation::Supports => vocab::BELIEF,
            StateRelation::Fulfils => vocab::INTENTION,
        }
    }

    pub fn target_class(self) -> &'static str {
        match self {
            StateRelation::Motivates | StateRelation::Fulfils => vocab::DESIRE,
            StateRelation::Supports => vocab::INTENTION,
        }
    }
}

impl fmt::Display for StateRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateRelation::Motivates => "motivates",
            StateRelation::Supports => "supports",
            StateRelation::Fulfils => "fulfils",
        })
    }
}

/// A created mental state with its provenance anchors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentalStateRecord {
    pub id: Iri,
    pub agent: Iri,
    pub kind: StateKind,
    pub refers_to: Iri,
    pub validity: Iri,
    pub parts: Vec<Iri>,
}

/// A created mental process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessRecord {
    pub id: Iri,
    pub agent: Iri,
    pub kind: ProcessKind,
    pub reasons_upon: Vec<Iri>,
    pub triggered_by: Option<Resource>,
    pub effects: Vec<(EffectKind, Iri)>,
    pub at: TimeInstant,
}

/// A created justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JustificationRecord {
    pub id: Iri,
    pub justifies: Vec<Iri>,
    pub text: Literal,
}

/// Single-writer session over a graph. Reads may run concurrently on a
/// snapshot; all mutation goes through `&mut self`.
pub struct MentalSession<'r> {
    graph: Graph,
    registry: &'r SchemaRegistry,
    counters: BTreeMap<String, u64>,
    delta: Vec<Triple>,
}

impl<'r> MentalSession<'r> {
    /// Wraps a graph. Mint counters start past any `run:` individuals already
    /// present so re-loaded exports never collide.
    pub fn new(graph: Graph, registry: &'r SchemaRegistry) -> Self {
        let mut counters = BTreeMap::new();
        let mut note = |iri: &Iri| {
            let Some(local) = iri.local_in(vocab::RUN_NS) else {
                return;
            };
            let Some((kind, n)) = local.rsplit_once('_') else {
                return;
            };
            if let Ok(n) = n.parse::<u64>() {
                let slot = counters.entry(kind.to_string()).or_insert(0);
                if n > *slot {
                    *slot = n;
                }
            }
        };
        for t in graph.iter() {
            if let Resource::Iri(iri) = &t.subject {
                note(iri);
            }
            if let Term::Iri(iri) = &t.object {
                note(iri);
            }
        }
        MentalSession {
            graph,
            registry,
            counters,
            delta: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Triples added since the last drain, in emission order.
    pub fn drain_delta(&mut self) -> Vec<Triple> {
        core::mem::take(&mut self.delta)
    }

    fn emit(&mut self, subject: impl Into<Resource>, predicate: &str, object: impl Into<Term>) {
        let t = Triple::new(subject.into(), Iri::known(predicate), object.into());
        if self.graph.insert(t.clone()) {
            self.delta.push(t);
        }
    }

    fn mint(&mut self, kind: &str) -> Iri {
        let n = self.counters.entry(kind.to_string()).or_insert(0);
        *n += 1;
        Iri::known(&alloc::format!("{}{}_{}", vocab::RUN_NS, kind, n))
    }

    fn mint_instant(&mut self, at: TimeInstant) -> Iri {
        let id = self.mint("TimeInstant");
        self.emit(id.clone(), vocab::RDF_TYPE, Iri::known(vocab::TIME_INSTANT));
        self.emit(
            id.clone(),
            vocab::HAS_TIME_VALUE,
            Literal::typed(at.canonical(), Iri::known(vocab::XSD_DATETIME)),
        );
        id
    }

    fn require_instance(
        &self,
        iri: &Iri,
        class: &str,
        err: impl FnOnce(Iri) -> MentalError,
    ) -> Result<(), MentalError> {
        if self
            .registry
            .is_instance(&self.graph, &Resource::Iri(iri.clone()), class)
        {
            Ok(())
        } else {
            Err(err(iri.clone()))
        }
    }

    /// Records a mental process: who ran it, what it reasoned upon, and what
    /// triggered it. Effects accumulate through the assert/suppress calls.
    pub fn begin_process(
        &mut self,
        agent: &Iri,
        kind: ProcessKind,
        reasons_upon: Vec<Iri>,
        triggered_by: Option<Resource>,
        at: TimeInstant,
    ) -> Result<ProcessRecord, MentalError> {
        self.require_instance(agent, vocab::AGENT, MentalError::NotAnAgent)?;
        let required = match kind {
            ProcessKind::Planning => vocab::INTENTION,
            _ => vocab::MENTAL_STATE,
        };
        for target in &reasons_upon {
            if !self
                .registry
                .is_instance(&self.graph, &Resource::Iri(target.clone()), required)
            {
                return Err(MentalError::InvalidReasonsUpon {
                    target: target.clone(),
                    required,
                });
            }
        }
        if let Some(target) = &triggered_by {
            let mental = self
                .registry
                .is_instance(&self.graph, target, vocab::MENTAL_ENTITY);
            let world = self
                .registry
                .is_instance(&self.graph, target, vocab::WORLD_STATE);
            if !mental && !world {
                return Err(MentalError::InvalidTrigger {
                    target: target.clone(),
                });
            }
        }

        let id = self.mint(kind.label());
        self.emit(id.clone(), vocab::RDF_TYPE, Iri::known(kind.class()));
        self.emit(id.clone(), vocab::IS_PROCESSED_BY, agent.clone());
        let mut reasons = reasons_upon;
        reasons.sort();
        reasons.dedup();
        for target in &reasons {
            self.emit(id.clone(), vocab::REASONS_UPON, target.clone());
        }
        if let Some(target) = &triggered_by {
            self.emit(id.clone(), vocab::IS_TRIGGERED_BY, Term::from(target.clone()));
        }
        let instant = self.mint_instant(at);
        self.emit(id.clone(), vocab::AT_TIME, instant);
        Ok(ProcessRecord {
            id,
            agent: agent.clone(),
            kind,
            reasons_upon: reasons,
            triggered_by,
            effects: Vec::new(),
            at,
        })
    }

    /// Creates a new mental state generated by `via`. Emits the type, the
    /// hasMentalState/cognises links, refersTo, an open validity interval
    /// starting at `from`, and the generates edge.
    pub fn assert_state(
        &mut self,
        agent: &Iri,
        kind: StateKind,
        refers_to: &Iri,
        from: TimeInstant,
        via: &mut ProcessRecord,
    ) -> Result<MentalStateRecord, MentalError> {
        self.require_instance(agent, vocab::AGENT, MentalError::NotAnAgent)?;
        self.require_instance(refers_to, vocab::WORLD_STATE, MentalError::NotAWorldState)?;
        if via.kind != ProcessKind::for_state(kind) {
            return Err(MentalError::ProcessKindMismatch {
                process: via.id.clone(),
                wanted: kind.label(),
            });
        }

        let id = self.mint(kind.label());
        self.emit(id.clone(), vocab::RDF_TYPE, Iri::known(kind.class()));
        self.emit(agent.clone(), vocab::HAS_MENTAL_STATE, id.clone());
        self.emit(agent.clone(), vocab::COGNISES, id.clone());
        self.emit(id.clone(), vocab::REFERS_TO, refers_to.clone());

        let interval = self.mint("TimeInterval");
        self.emit(
            interval.clone(),
            vocab::RDF_TYPE,
            Iri::known(vocab::TIME_INTERVAL),
        );
        let start = self.mint_instant(from);
        self.emit(interval.clone(), vocab::HAS_START_TIME, start);
        self.emit(id.clone(), vocab::HAS_VALIDITY, interval.clone());

        self.emit(via.id.clone(), vocab::GENERATES, id.clone());
        via.effects.push((EffectKind::Generates, id.clone()));

        Ok(MentalStateRecord {
            id,
            agent: agent.clone(),
            kind,
            refers_to: refers_to.clone(),
            validity: interval,
            parts: Vec::new(),
        })
    }

    /// Links two existing states; the class pair must match the relation.
    /// Emits the forward triple plus the materialized inverse where one
    /// exists.
    pub fn link_states(
        &mut self,
        src: &Iri,
        rel: StateRelation,
        dst: &Iri,
    ) -> Result<Vec<Triple>, MentalError> {
        let check = |iri: &Iri, class: &'static str| -> Result<(), MentalError> {
            if self
                .registry
                .is_instance(&self.graph, &Resource::Iri(iri.clone()), class)
            {
                Ok(())
            } else {
                Err(MentalError::LinkClassMismatch {
                    rel,
                    expected: class,
                    found: iri.clone(),
                })
            }
        };
        check(src, rel.source_class())?;
        check(dst, rel.target_class())?;
        let before = self.delta.len();
        self.emit(src.clone(), rel.property(), dst.clone());
        if let Some(inverse) = rel.inverse() {
            self.emit(dst.clone(), inverse, src.clone());
        }
        Ok(self.delta[before..].to_vec())
    }

    /// Closes a state's validity interval at `at` and records the suppression.
    /// The state stays in the graph: history is never deleted.
    pub fn suppress_state(
        &mut self,
        state: &Iri,
        via: &mut ProcessRecord,
        at: TimeInstant,
    ) -> Result<Vec<Triple>, MentalError> {
        self.require_instance(state, vocab::MENTAL_STATE, MentalError::NotMentalState)?;
        let wanted = self.state_kind_of(state);
        let allowed = match wanted {
            Some(kind) => via.kind == ProcessKind::for_state(kind),
            None => true, // a state with no specific kind accepts any process
        };
        if !allowed {
            return Err(MentalError::ProcessKindMismatch {
                process: via.id.clone(),
                wanted: wanted.map(StateKind::label).unwrap_or("MentalState"),
            });
        }

        let subject = Resource::Iri(state.clone());
        let interval = self
            .graph
            .objects(&subject, vocab::HAS_VALIDITY)
            .into_iter()
            .find_map(|t| match t {
                Term::Iri(iri) => Some(iri),
                _ => None,
            })
            .ok_or(MentalError::NoValidity {
                state: state.clone(),
            })?;
        let interval_subject = Resource::Iri(interval.clone());
        if !self
            .graph
            .objects(&interval_subject, vocab::HAS_END_TIME)
            .is_empty()
        {
            return Err(MentalError::AlreadyClosed {
                state: state.clone(),
            });
        }
        let start = self
            .graph
            .objects(&interval_subject, vocab::HAS_START_TIME)
            .into_iter()
            .find_map(|t| match t {
                Term::Iri(instant) => {
                    crate::temporal::resolve_instant(
                        &self.graph,
                        &crate::temporal::TimeMap::new(),
                        &instant,
                    )
                }
                _ => None,
            })
            .ok_or(MentalError::NoValidity {
                state: state.clone(),
            })?;
        if at < start {
            return Err(MentalError::NotValidAt {
                state: state.clone(),
                at,
                start,
            });
        }

        let before = self.delta.len();
        let end = self.mint_instant(at);
        self.emit(interval, vocab::HAS_END_TIME, end);
        self.emit(via.id.clone(), vocab::SUPPRESSES, state.clone());
        via.effects.push((EffectKind::Suppresses, state.clone()));
        Ok(self.delta[before..].to_vec())
    }

    /// Modification is suppress-old + generate-new, linked by a `modifies`
    /// edge from the process to the new state. The new state inherits the
    /// old one's kind, owner, and referent.
    pub fn modify_state(
        &mut self,
        old: &Iri,
        via: &mut ProcessRecord,
        at: TimeInstant,
    ) -> Result<MentalStateRecord, MentalError> {
        let kind = self
            .state_kind_of(old)
            .ok_or_else(|| MentalError::NotMentalState(old.clone()))?;
        let agent = self.owner_of(old)?;
        let refers_to = self
            .graph
            .objects(&Resource::Iri(old.clone()), vocab::REFERS_TO)
            .into_iter()
            .find_map(|t| match t {
                Term::Iri(iri) => Some(iri),
                _ => None,
            })
            .ok_or_else(|| MentalError::NoReferent(old.clone()))?;
        self.suppress_state(old, via, at)?;
        let record = self.assert_state(&agent, kind, &refers_to, at, via)?;
        self.emit(via.id.clone(), vocab::MODIFIES, record.id.clone());
        via.effects.push((EffectKind::Modifies, record.id.clone()));
        Ok(record)
    }

    /// Raw triple write, used by rule actions that emit arbitrary statements.
    pub fn emit_triple(&mut self, subject: Resource, predicate: Iri, object: Term) {
        let t = Triple::new(subject, predicate, object);
        if self.graph.insert(t.clone()) {
            self.delta.push(t);
        }
    }

    /// Mints a plan defined by a Planning process: the plan addresses the
    /// goal, carries every task as a component, begins with the first task,
    /// ends with the last, and chains consecutive tasks with follows/precedes.
    pub fn define_plan(
        &mut self,
        via: &mut ProcessRecord,
        goal: &Iri,
        tasks: &[Iri],
    ) -> Result<Iri, MentalError> {
        if via.kind != ProcessKind::Planning {
            return Err(MentalError::ProcessKindMismatch {
                process: via.id.clone(),
                wanted: "Plan",
            });
        }
        let plan = self.mint("Plan");
        self.emit(plan.clone(), vocab::RDF_TYPE, Iri::known(vocab::PLAN));
        self.emit(via.id.clone(), vocab::DEFINES, plan.clone());
        self.emit(plan.clone(), vocab::ADDRESSES, goal.clone());
        for task in tasks {
            self.emit(plan.clone(), vocab::HAS_COMPONENT, task.clone());
        }
        if let Some(first) = tasks.first() {
            self.emit(plan.clone(), vocab::BEGINS_WITH, first.clone());
        }
        if let Some(last) = tasks.last() {
            self.emit(plan.clone(), vocab::ENDS_WITH, last.clone());
        }
        for pair in tasks.windows(2) {
            self.emit(pair[1].clone(), vocab::FOLLOWS, pair[0].clone());
            self.emit(pair[0].clone(), vocab::PRECEDES, pair[1].clone());
        }
        Ok(plan)
    }

    /// Attaches a justification to a mental entity.
    pub fn justify(
        &mut self,
        entity: &Iri,
        text: &str,
    ) -> Result<JustificationRecord, MentalError> {
        self.require_instance(entity, vocab::MENTAL_ENTITY, MentalError::NotMentalEntity)?;
        let id = self.mint("Justification");
        self.emit(id.clone(), vocab::RDF_TYPE, Iri::known(vocab::JUSTIFICATION));
        self.emit(id.clone(), vocab::JUSTIFIES, entity.clone());
        let text = Literal::string(text);
        self.emit(id.clone(), vocab::RDFS_LABEL, text.clone());
        Ok(JustificationRecord {
            id,
            justifies: alloc::vec![entity.clone()],
            text,
        })
    }

    /// Extends an existing justification to one more entity.
    pub fn justify_also(&mut self, justification: &Iri, entity: &Iri) -> Result<(), MentalError> {
        self.require_instance(
            justification,
            vocab::JUSTIFICATION,
            MentalError::UnknownEntity,
        )?;
        self.require_instance(entity, vocab::MENTAL_ENTITY, MentalError::NotMentalEntity)?;
        self.emit(justification.clone(), vocab::JUSTIFIES, entity.clone());
        Ok(())
    }

    /// Adds a meronomic link; parts must match the whole's kind.
    pub fn link_part(&mut self, whole: &Iri, part: &Iri) -> Result<(), MentalError> {
        self.require_instance(whole, vocab::MENTAL_ENTITY, MentalError::NotMentalEntity)?;
        self.require_instance(part, vocab::MENTAL_ENTITY, MentalError::NotMentalEntity)?;
        let homogeneous = match self.state_kind_of(whole) {
            Some(kind) => self.registry.is_instance(
                &self.graph,
                &Resource::Iri(part.clone()),
                kind.class(),
            ),
            None => {
                // Same discipline for the process side of the hierarchy.
                !self.registry.is_instance(
                    &self.graph,
                    &Resource::Iri(whole.clone()),
                    vocab::MENTAL_PROCESS,
                ) || self.registry.is_instance(
                    &self.graph,
                    &Resource::Iri(part.clone()),
                    vocab::MENTAL_PROCESS,
                )
            }
        };
        if !homogeneous {
            return Err(MentalError::PartKindMismatch {
                whole: whole.clone(),
                part: part.clone(),
            });
        }
        self.emit(whole.clone(), vocab::HAS_PART, part.clone());
        self.emit(part.clone(), vocab::IS_PART_OF, whole.clone());
        Ok(())
    }

    fn state_kind_of(&self, state: &Iri) -> Option<StateKind> {
        let subject = Resource::Iri(state.clone());
        [StateKind::Belief, StateKind::Desire, StateKind::Intention]
            .into_iter()
            .find(|kind| self.registry.is_instance(&self.graph, &subject, kind.class()))
    }

    fn owner_of(&self, state: &Iri) -> Result<Iri, MentalError> {
        let term = Term::Iri(state.clone());
        for predicate in [
            vocab::HAS_MENTAL_STATE,
            vocab::HAS_BELIEF,
            vocab::HAS_DESIRE,
            vocab::HAS_INTENTION,
            vocab::COGNISES,
        ] {
            if let Some(Resource::Iri(agent)) =
                self.graph.subjects(predicate, &term).into_iter().next()
            {
                return Ok(agent);
            }
        }
        for predicate in [
            vocab::IS_MENTAL_STATE_OF,
            vocab::IS_BELIEF_OF,
            vocab::IS_DESIRE_OF,
            vocab::IS_INTENTION_OF,
        ] {
            if let Some(Term::Iri(agent)) = self
                .graph
                .objects(&Resource::Iri(state.clone()), predicate)
                .into_iter()
                .next()
            {
                return Ok(agent);
            }
        }
        Err(MentalError::UnknownOwner(state.clone()))
    }
}

/// A node in an explanation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationNode {
    pub iri: Resource,
    /// Most specific registered class, when one is asserted.
    pub class: Option<Iri>,
    pub label: Option<String>,
    pub edges: Vec<DerivationEdge>,
}

/// An edge to a supporting entity. `cycle` marks a back-edge to an ancestor
/// or already-expanded node; such targets are rendered as leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationEdge {
    pub relation: &'static str,
    pub target: DerivationNode,
    pub cycle: bool,
}

/// An explanation: the entity at the root, grounded back toward world states
/// along provenance edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    pub root: DerivationNode,
}

/// Builds the derivation tree for an entity by walking isMotivatedBy,
/// isSupportedBy, fulfils, incoming generates, isTriggeredBy, incoming
/// justifies, and refersTo edges. Inverse spellings asserted the other way
/// around are followed too, so raw fixtures explain without materialization.
pub fn explain(
    g: &Graph,
    reg: &SchemaRegistry,
    entity: &Iri,
) -> Result<DerivationTree, MentalError> {
    let subject = Resource::Iri(entity.clone());
    let mentioned = !g.objects(&subject, vocab::RDF_TYPE).is_empty()
        || g.subjects_iter().any(|s| *s == subject)
        || !g
            .matching(
                &crate::rdf::TriplePattern::any().with_object(Term::Iri(entity.clone())),
            )
            .is_empty();
    if !mentioned {
        return Err(MentalError::UnknownEntity(entity.clone()));
    }
    let mut visited = alloc::collections::BTreeSet::new();
    Ok(DerivationTree {
        root: expand(g, reg, &subject, &mut visited),
    })
}

fn expand(
    g: &Graph,
    reg: &SchemaRegistry,
    node: &Resource,
    visited: &mut alloc::collections::BTreeSet<Resource>,
) -> DerivationNode {
    visited.insert(node.clone());
    let mut edges = Vec::new();
    for (relation, targets) in support_edges(g, node) {
        for target in targets {
            if visited.contains(&target) {
                edges.push(DerivationEdge {
                    relation,
                    target: leaf(g, reg, &target),
                    cycle: true,
                });
            } else {
                edges.push(DerivationEdge {
                    relation,
                    target: expand(g, reg, &target, visited),
                    cycle: false,
                });
            }
        }
    }
    let mut out = leaf(g, reg, node);
    out.edges = edges;
    out
}

fn leaf(g: &Graph, reg: &SchemaRegistry, node: &Resource) -> DerivationNode {
    let label = g
        .objects(node, vocab::RDFS_LABEL)
        .into_iter()
        .find_map(|t| match t {
            Term::Literal(l) => Some(l.lexical().to_string()),
            _ => None,
        });
    DerivationNode {
        iri: node.clone(),
        class: reg.minimal_types(g, node).into_iter().next(),
        label,
        edges: Vec::new(),
    }
}

fn support_edges(g: &Graph, node: &Resource) -> Vec<(&'static str, Vec<Resource>)> {
    let as_term = Term::from(node.clone());
    let collect = |forward: &str, backward: Option<&str>| -> Vec<Resource> {
        let mut targets: Vec<Resource> = g
            .objects(node, forward)
            .into_iter()
            .filter_map(|t| t.as_resource())
            .collect();
        if let Some(backward) = backward {
            targets.extend(g.subjects(backward, &as_term));
        }
        targets.sort();
        targets.dedup();
        targets
    };
    // Order matters: the state-level causal chain (motivation, fulfilment)
    // expands first, so the depth-first walk lays out intention -> desire ->
    // belief -> world state before auxiliary support/process edges revisit
    // the same nodes as cycle leaves.
    alloc::vec![
        ("isMotivatedBy", collect(vocab::IS_MOTIVATED_BY, Some(vocab::MOTIVATES))),
        ("fulfils", {
            let mut v = collect(vocab::FULFILS, None);
            v.extend(collect(vocab::FULFILLS, None));
            v.sort();
            v.dedup();
            v
        }),
        ("isSupportedBy", collect(vocab::IS_SUPPORTED_BY, Some(vocab::SUPPORTS))),
        ("generatedBy", collect_subjects(g, vocab::GENERATES, &as_term)),
        ("isTriggeredBy", collect(vocab::IS_TRIGGERED_BY, Some(vocab::TRIGGERS))),
        ("justifiedBy", collect_subjects(g, vocab::JUSTIFIES, &as_term)),
        ("refersTo", collect(vocab::REFERS_TO, None)),
    ]
}

fn collect_subjects(g: &Graph, predicate: &str, object: &Term) -> Vec<Resource> {
    let mut v = g.subjects(predicate, object);
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::load_schema;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn t(s: &str) -> TimeInstant {
        TimeInstant::parse(s).unwrap()
    }

    fn seeded() -> Graph {
        let mut g = Graph::new();
        g.insert(Triple::new(
            iri("urn:i:agent"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::AGENT)),
        ));
        g.insert(Triple::new(
            iri("urn:i:ws"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::WORLD_STATE)),
        ));
        g
    }

    #[test]
    fn assert_state_emits_generates_and_refers_to() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let at = t("2025-01-01T00:00:00Z");
        let mut process = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, at)
            .unwrap();
        let state = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut process)
            .unwrap();
        assert_eq!(state.id.as_str(), "urn:bdi-run:Belief_1");
        assert_eq!(process.id.as_str(), "urn:bdi-run:BeliefProcess_1");
        let g = session.graph();
        assert!(g.contains(&Triple::new(
            process.id.clone(),
            Iri::known(vocab::GENERATES),
            Term::Iri(state.id.clone()),
        )));
        assert!(g.contains(&Triple::new(
            state.id.clone(),
            Iri::known(vocab::REFERS_TO),
            Term::Iri(ws),
        )));
    }

    #[test]
    fn wrong_process_kind_is_rejected() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let at = t("2025-01-01T00:00:00Z");
        let mut process = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, at)
            .unwrap();
        let err = session
            .assert_state(&agent, StateKind::Desire, &ws, at, &mut process)
            .unwrap_err();
        assert!(matches!(err, MentalError::ProcessKindMismatch { .. }));
    }

    #[test]
    fn untyped_agent_is_rejected() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let err = session
            .begin_process(
                &iri("urn:i:nobody"),
                ProcessKind::Belief,
                alloc::vec![],
                None,
                t("2025-01-01T00:00:00Z"),
            )
            .unwrap_err();
        assert!(matches!(err, MentalError::NotAnAgent(_)));
    }

    #[test]
    fn same_inputs_mint_distinct_sequential_ids() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let at = t("2025-01-01T00:00:00Z");
        let mut process = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, at)
            .unwrap();
        let a = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut process)
            .unwrap();
        let b = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut process)
            .unwrap();
        assert_eq!(a.id.as_str(), "urn:bdi-run:Belief_1");
        assert_eq!(b.id.as_str(), "urn:bdi-run:Belief_2");
    }

    #[test]
    fn suppress_closes_interval_once() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let t0 = t("2025-01-01T00:00:00Z");
        let t1 = t("2025-01-01T01:00:00Z");
        let mut generator = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, t0)
            .unwrap();
        let state = session
            .assert_state(&agent, StateKind::Belief, &ws, t0, &mut generator)
            .unwrap();
        let mut suppressor = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![state.id.clone()], None, t1)
            .unwrap();
        session
            .suppress_state(&state.id, &mut suppressor, t1)
            .unwrap();
        let err = session
            .suppress_state(&state.id, &mut suppressor, t1)
            .unwrap_err();
        assert!(matches!(err, MentalError::AlreadyClosed { .. }));
        // Half-open semantics over the closed interval.
        let tm = crate::temporal::TimeMap::new();
        assert!(crate::temporal::valid_at(session.graph(), &tm, &state.id, t0).unwrap());
        assert!(!crate::temporal::valid_at(session.graph(), &tm, &state.id, t1).unwrap());
    }

    #[test]
    fn suppress_before_start_is_rejected() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let t0 = t("2025-06-01T00:00:00Z");
        let mut process = session
            .begin_process(&agent, ProcessKind::Desire, alloc::vec![], None, t0)
            .unwrap();
        let state = session
            .assert_state(&agent, StateKind::Desire, &ws, t0, &mut process)
            .unwrap();
        let err = session
            .suppress_state(&state.id, &mut process, t("2025-01-01T00:00:00Z"))
            .unwrap_err();
        assert!(matches!(err, MentalError::NotValidAt { .. }));
    }

    #[test]
    fn link_states_enforces_class_pairs() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let at = t("2025-01-01T00:00:00Z");
        let mut bp = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, at)
            .unwrap();
        let belief = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut bp)
            .unwrap();
        let mut dp = session
            .begin_process(&agent, ProcessKind::Desire, alloc::vec![], None, at)
            .unwrap();
        let desire = session
            .assert_state(&agent, StateKind::Desire, &ws, at, &mut dp)
            .unwrap();
        let delta = session
            .link_states(&belief.id, StateRelation::Motivates, &desire.id)
            .unwrap();
        assert_eq!(delta.len(), 2); // forward plus inverse
        let err = session
            .link_states(&desire.id, StateRelation::Motivates, &belief.id)
            .unwrap_err();
        assert!(matches!(err, MentalError::LinkClassMismatch { .. }));
    }

    #[test]
    fn justify_rejects_non_mental_targets() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let err = session.justify(&iri("urn:i:ws"), "because").unwrap_err();
        assert!(matches!(err, MentalError::NotMentalEntity(_)));
    }

    #[test]
    fn one_justification_may_cover_two_entities() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let at = t("2025-01-01T00:00:00Z");
        let mut bp = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, at)
            .unwrap();
        let b1 = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut bp)
            .unwrap();
        let b2 = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut bp)
            .unwrap();
        let j = session.justify(&b1.id, "shared rationale").unwrap();
        session.justify_also(&j.id, &b2.id).unwrap();
        let justified = session.graph().objects(
            &Resource::Iri(j.id.clone()),
            vocab::JUSTIFIES,
        );
        assert_eq!(justified.len(), 2);
    }

    #[test]
    fn counters_skip_past_preexisting_run_individuals() {
        let reg = load_schema();
        let mut g = seeded();
        g.insert(Triple::new(
            Iri::known("urn:bdi-run:Belief_7"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::BELIEF)),
        ));
        let mut session = MentalSession::new(g, &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let at = t("2025-01-01T00:00:00Z");
        let mut bp = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, at)
            .unwrap();
        let fresh = session
            .assert_state(&agent, StateKind::Belief, &ws, at, &mut bp)
            .unwrap();
        assert_eq!(fresh.id.as_str(), "urn:bdi-run:Belief_8");
    }

    #[test]
    fn history_is_preserved_across_modify() {
        let reg = load_schema();
        let mut session = MentalSession::new(seeded(), &reg);
        let agent = iri("urn:i:agent");
        let ws = iri("urn:i:ws");
        let t0 = t("2025-01-01T00:00:00Z");
        let t1 = t("2025-01-01T00:00:01Z");
        let mut p0 = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![], None, t0)
            .unwrap();
        let b1 = session
            .assert_state(&agent, StateKind::Belief, &ws, t0, &mut p0)
            .unwrap();
        let states_before = count_typed(session.graph(), vocab::BELIEF);
        let mut p1 = session
            .begin_process(&agent, ProcessKind::Belief, alloc::vec![b1.id.clone()], None, t1)
            .unwrap();
        let b2 = session.modify_state(&b1.id, &mut p1, t1).unwrap();
        assert_ne!(b1.id, b2.id);
        assert!(count_typed(session.graph(), vocab::BELIEF) > states_before);
        assert!(session.graph().contains(&Triple::new(
            p1.id.clone(),
            Iri::known(vocab::MODIFIES),
            Term::Iri(b2.id.clone()),
        )));
        assert!(session.graph().contains(&Triple::new(
            p1.id.clone(),
            Iri::known(vocab::SUPPRESSES),
            Term::Iri(b1.id.clone()),
        )));
    }

    fn count_typed(g: &Graph, class: &str) -> usize {
        g.subjects(vocab::RDF_TYPE, &Term::Iri(Iri::known(class))).len()
    }

    #[test]
    fn explain_isolated_entity_is_single_node() {
        let reg = load_schema();
        let mut g = seeded();
        g.insert(Triple::new(
            iri("urn:i:lonely"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::BELIEF)),
        ));
        let tree = explain(&g, &reg, &iri("urn:i:lonely")).unwrap();
        assert!(tree.root.edges.is_empty());
        assert_eq!(tree.root.class, Some(Iri::known(vocab::BELIEF)));
    }

    #[test]
    fn explain_unknown_entity_errors() {
        let reg = load_schema();
        let g = seeded();
        assert!(matches!(
            explain(&g, &reg, &iri("urn:i:ghost")),
            Err(MentalError::UnknownEntity(_))
        ));
    }
}
