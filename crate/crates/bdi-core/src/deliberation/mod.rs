//! The deliberation engine: production rules over ground belief atoms.
//!
//! A rule is `[HEAD] / [CONDITIONALS] >> [TAIL]`: the head is the triggering
//! belief pattern, the conditionals are contextual preconditions (negation as
//! failure against the atom set at cycle start), and the tail is the action
//! list executed when the rule fires.
//!
//! The run is a match-resolve-act loop. Each cycle computes every (rule,
//! binding) instance, drops pairs that already fired (refractoriness), picks
//! one by (priority desc, rule id asc, binding key asc), and fires it. One
//! firing mints exactly one mental process, so traces are totally ordered and
//! each firing reads as one deliberative step.
//!
//! Ingest turns every triple of a graph into a belief atom; export projects
//! the atom set straight back to a graph. Rule-firing provenance rides along
//! as `run:firedRule` / `run:firedBinding` triples on the minted process, so
//! refractoriness keys survive the round trip and a re-run of an exported
//! state fires nothing.

mod rules;

pub use rules::{parse_rules, RuleParseError};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::mental::{
    MentalError, MentalSession, ProcessKind, StateKind, StateRelation,
};
use crate::rdf::{Graph, Iri, Literal, Resource, Term, Triple, TriplePattern};
use crate::schema::SchemaRegistry;
use crate::temporal::{TimeInstant, TimeMap};
use crate::vocab;

/// A pattern slot: a ground term or a variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleTerm {
    Constant(Term),
    Var(String),
}

impl RuleTerm {
    pub fn iri(value: &str) -> Self {
        RuleTerm::Constant(Term::Iri(Iri::known(value)))
    }

    pub fn var(name: impl Into<String>) -> Self {
        RuleTerm::Var(name.into())
    }
}

/// A triple pattern, possibly negated when used as a conditional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub subject: RuleTerm,
    pub predicate: RuleTerm,
    pub object: RuleTerm,
    pub negated: bool,
}

impl Pattern {
    pub fn new(subject: RuleTerm, predicate: RuleTerm, object: RuleTerm) -> Self {
        Pattern {
            subject,
            predicate,
            object,
            negated: false,
        }
    }
}

/// A rule conditional: a (possibly negated) pattern, or the builtin temporal
/// check `valid_at(?x, NOW)` with NOW the run's start instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conditional {
    Pattern(Pattern),
    ValidAtNow { entity: RuleTerm, negated: bool },
}

/// A tail action. Templates must be fully instantiable from rule bindings;
/// `bind` names a variable that receives the minted individual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    AssertState {
        kind: StateKind,
        refers_to: RuleTerm,
        bind: Option<String>,
    },
    Suppress {
        target: RuleTerm,
    },
    Link {
        rel: StateRelation,
        src: RuleTerm,
        dst: RuleTerm,
    },
    Justify {
        target: RuleTerm,
        text: String,
    },
    EmitTriple {
        subject: RuleTerm,
        predicate: RuleTerm,
        object: RuleTerm,
    },
    DefinePlan {
        goal: RuleTerm,
        tasks: Vec<RuleTerm>,
        bind: Option<String>,
    },
}

/// A production rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub priority: i32,
    pub head: Pattern,
    pub conditionals: Vec<Conditional>,
    pub tail: Vec<Action>,
}

/// Where an atom came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// Translated from the input graph.
    Ingested,
    /// Produced by a rule firing.
    Derived(String),
    /// Engine bookkeeping (firing provenance records).
    Builtin,
}

/// A ground belief atom: a triple plus provenance and a logical timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefAtom {
    pub triple: Triple,
    pub provenance: Provenance,
    pub at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct AtomMeta {
    provenance: Provenance,
    at: u64,
}

/// A variable assignment.
pub type Binding = BTreeMap<String, Term>;

/// One rule firing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub cycle: u32,
    pub rule: String,
    pub bindings: Binding,
    pub process: Iri,
}

/// The agent's internal knowledge base: the atom set (kept as an indexed
/// graph plus per-triple metadata), the refractoriness log, and the trace.
#[derive(Debug, Clone, Default)]
pub struct KBState {
    graph: Graph,
    meta: BTreeMap<Triple, AtomMeta>,
    fired: BTreeSet<(String, String)>,
    trace: Vec<TraceEvent>,
    tick: u64,
}

impl KBState {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn fired(&self) -> &BTreeSet<(String, String)> {
        &self.fired
    }

    /// Atoms in sorted triple order.
    pub fn atoms(&self) -> Vec<BeliefAtom> {
        self.graph
            .iter()
            .map(|t| {
                let meta = self.meta.get(&t).expect("meta tracks the graph");
                BeliefAtom {
                    triple: t,
                    provenance: meta.provenance.clone(),
                    at: meta.at,
                }
            })
            .collect()
    }

    /// The atom set as plain triples, ignoring provenance tags.
    pub fn atom_set(&self) -> BTreeSet<Triple> {
        self.graph.iter().collect()
    }

    fn insert(&mut self, triple: Triple, provenance: Provenance) {
        if self.graph.insert(triple.clone()) {
            self.meta.insert(
                triple,
                AtomMeta {
                    provenance,
                    at: self.tick,
                },
            );
            self.tick += 1;
        }
    }
}

/// Run parameters. The clock is logical: it starts at `clock_start` and
/// advances one second per firing, so identical inputs give identical
/// timestamps.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub max_cycles: u32,
    pub clock_start: TimeInstant,
    /// The acting agent; autodetected when the graph holds exactly one Agent.
    pub agent: Option<Iri>,
    pub timemap: TimeMap,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_cycles: 1000,
            clock_start: TimeInstant::parse("2025-01-01T00:00:00Z").expect("valid epoch"),
            agent: None,
            timemap: TimeMap::new(),
        }
    }
}

/// The completed run: final KB plus whether the cycle bound was hit.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub kb: KBState,
    pub cycles: u32,
    pub hit_max_cycles: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunErrorKind {
    #[error(transparent)]
    Action(#[from] MentalError),
    #[error("action target {0} is not an IRI")]
    TargetNotIri(Term),
    #[error("action subject {0} is not an IRI")]
    SubjectNotIri(Term),
    #[error("predicate template resolved to non-IRI {0}")]
    PredicateNotIri(Term),
    #[error("{0} is not typed as a Goal")]
    GoalExpected(Iri),
    #[error("{0} is not typed as a Task")]
    TaskExpected(Iri),
    #[error("no individual is typed Agent; pass an explicit agent")]
    NoAgent,
    #[error("multiple agents present; pass an explicit agent")]
    MultipleAgents,
    #[error("variable ?{0} is unbound at execution time")]
    UnboundVariable(String),
}

/// A run abort: the failing rule/cycle and the error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cycle {cycle}, rule `{rule}`: {kind}")]
pub struct RunError {
    pub cycle: u32,
    pub rule: String,
    pub kind: RunErrorKind,
}

/// An aborted run still surrenders the KB with the trace up to the failure.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub error: RunError,
    pub kb: KBState,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

/// Translates a graph into a knowledge base: one atom per triple, provenance
/// `Ingested`, logical timestamps in deterministic (sorted) graph order.
/// Firing-provenance triples from a previous export rebuild the
/// refractoriness log.
pub fn ingest(g: &Graph) -> KBState {
    let mut kb = KBState {
        graph: Graph::new(),
        ..KBState::default()
    };
    kb.graph.adopt_prefixes(g);
    for triple in g.iter() {
        kb.insert(triple, Provenance::Ingested);
    }

    let fired_rule = Iri::known(vocab::RUN_FIRED_RULE);
    let fired_binding = Iri::known(vocab::RUN_FIRED_BINDING);
    let mut by_subject: BTreeMap<Resource, (Option<String>, Option<String>)> = BTreeMap::new();
    for t in g.iter() {
        if t.predicate == fired_rule {
            if let Term::Literal(l) = &t.object {
                by_subject.entry(t.subject.clone()).or_default().0 = Some(l.lexical().to_string());
            }
        } else if t.predicate == fired_binding {
            if let Term::Literal(l) = &t.object {
                by_subject.entry(t.subject.clone()).or_default().1 = Some(l.lexical().to_string());
            }
        }
    }
    for (_, (rule, binding)) in by_subject {
        if let (Some(rule), Some(binding)) = (rule, binding) {
            kb.fired.insert((rule, binding));
        }
    }
    kb
}

/// Projects the atom set back into a graph. Process and provenance triples
/// were emitted as atoms during the run, so this is a pure projection.
pub fn export(kb: &KBState) -> Graph {
    kb.graph.clone()
}

fn resolve(term: &RuleTerm, binding: &Binding) -> Result<Term, RunErrorKind> {
    match term {
        RuleTerm::Constant(t) => Ok(t.clone()),
        RuleTerm::Var(v) => binding
            .get(v)
            .cloned()
            .ok_or_else(|| RunErrorKind::UnboundVariable(v.clone())),
    }
}

fn unify(slot: &RuleTerm, actual: &Term, binding: &mut Binding) -> bool {
    match slot {
        RuleTerm::Constant(t) => t == actual,
        RuleTerm::Var(v) => match binding.get(v) {
            Some(bound) => bound == actual,
            None => {
                binding.insert(v.clone(), actual.clone());
                true
            }
        },
    }
}

/// All extensions of `binding` under which `pattern` matches a triple, with
/// the witness triple. Bound positions are pushed into the index lookup.
pub fn match_pattern(g: &Graph, pattern: &Pattern, binding: &Binding) -> Vec<(Binding, Triple)> {
    let fixed_term = |slot: &RuleTerm| -> Option<Term> {
        match slot {
            RuleTerm::Constant(t) => Some(t.clone()),
            RuleTerm::Var(v) => binding.get(v).cloned(),
        }
    };
    let mut lookup = TriplePattern::any();
    if let Some(t) = fixed_term(&pattern.subject) {
        match t.as_resource() {
            Some(r) => lookup.subject = Some(r),
            None => return Vec::new(), // literal can never be a subject
        }
    }
    if let Some(t) = fixed_term(&pattern.predicate) {
        match t {
            Term::Iri(iri) => lookup.predicate = Some(iri),
            _ => return Vec::new(),
        }
    }
    if let Some(t) = fixed_term(&pattern.object) {
        lookup.object = Some(t);
    }
    let mut out = Vec::new();
    for triple in g.matching(&lookup) {
        let mut extended = binding.clone();
        if unify(&pattern.subject, &Term::from(triple.subject.clone()), &mut extended)
            && unify(&pattern.predicate, &Term::Iri(triple.predicate.clone()), &mut extended)
            && unify(&pattern.object, &triple.object, &mut extended)
        {
            out.push((extended, triple));
        }
    }
    out
}

/// Joins a conjunction of positive patterns, threading bindings left to
/// right. Used by the rule matcher and the competency-question evaluator.
pub fn solve(g: &Graph, patterns: &[Pattern], seed: &Binding) -> Vec<Binding> {
    let mut frontier = alloc::vec![seed.clone()];
    for pattern in patterns {
        debug_assert!(!pattern.negated);
        let mut next = Vec::new();
        for binding in &frontier {
            for (extended, _) in match_pattern(g, pattern, binding) {
                next.push(extended);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

fn canonical_binding_key(binding: &Binding) -> String {
    let mut out = String::new();
    for (i, (var, term)) in binding.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push('?');
        out.push_str(var);
        out.push('=');
        out.push_str(&format!("{term}"));
    }
    out
}

#[derive(Debug, Clone)]
struct Candidate {
    rule_idx: usize,
    binding: Binding,
    key: String,
    witnesses: Vec<Triple>,
    head_subject: Resource,
}

fn candidates(
    g: &Graph,
    rules: &[Rule],
    reg: &SchemaRegistry,
    cfg: &RunConfig,
    fired: &BTreeSet<(String, String)>,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (rule_idx, rule) in rules.iter().enumerate() {
        for (head_binding, head_witness) in match_pattern(g, &rule.head, &Binding::new()) {
            // (binding, collected positive witnesses)
            let mut frontier = alloc::vec![(head_binding, alloc::vec![head_witness.clone()])];
            for cond in &rule.conditionals {
                let mut next = Vec::new();
                match cond {
                    Conditional::Pattern(p) if !p.negated => {
                        for (binding, witnesses) in &frontier {
                            for (extended, witness) in match_pattern(g, p, binding) {
                                let mut w = witnesses.clone();
                                w.push(witness);
                                next.push((extended, w));
                            }
                        }
                    }
                    Conditional::Pattern(p) => {
                        for (binding, witnesses) in frontier {
                            if match_pattern(g, p, &binding).is_empty() {
                                next.push((binding, witnesses));
                            }
                        }
                    }
                    Conditional::ValidAtNow { entity, negated } => {
                        for (binding, witnesses) in frontier {
                            let holds = match resolve(entity, &binding) {
                                Ok(Term::Iri(iri)) => crate::temporal::valid_at(
                                    g,
                                    &cfg.timemap,
                                    &iri,
                                    cfg.clock_start,
                                )
                                .unwrap_or(false),
                                _ => false,
                            };
                            if holds != *negated {
                                next.push((binding, witnesses));
                            }
                        }
                    }
                }
                frontier = next;
                if frontier.is_empty() {
                    break;
                }
            }
            for (binding, witnesses) in frontier {
                let key = canonical_binding_key(&binding);
                if fired.contains(&(rule.id.clone(), key.clone())) {
                    continue;
                }
                out.push(Candidate {
                    rule_idx,
                    binding,
                    key,
                    witnesses,
                    head_subject: head_witness.subject.clone(),
                });
            }
        }
    }
    // Refractoriness left duplicates possible when distinct head witnesses
    // reach the same final binding; keep the first per (rule, key).
    let mut seen = BTreeSet::new();
    out.retain(|c| seen.insert((c.rule_idx, c.key.clone())));
    out.sort_by(|a, b| {
        let pa = rules[a.rule_idx].priority;
        let pb = rules[b.rule_idx].priority;
        pb.cmp(&pa)
            .then_with(|| rules[a.rule_idx].id.cmp(&rules[b.rule_idx].id))
            .then_with(|| a.key.cmp(&b.key))
    });
    let _ = reg;
    out
}

/// Repeated match-resolve-act cycles until the agenda is empty or
/// `max_cycles` is reached. An action failure aborts the run and returns the
/// KB with the trace up to the failure.
pub fn run(
    kb: KBState,
    rules: &[Rule],
    reg: &SchemaRegistry,
    cfg: &RunConfig,
) -> Result<RunOutcome, alloc::boxed::Box<RunFailure>> {
    let KBState {
        graph,
        mut meta,
        mut fired,
        mut trace,
        mut tick,
    } = kb;
    let mut session = MentalSession::new(graph, reg);
    let mut agent_cache: Option<Iri> = cfg.agent.clone();
    let mut cycles = 0u32;
    let mut hit_max = false;

    let reassemble = |session: MentalSession<'_>,
                      meta: BTreeMap<Triple, AtomMeta>,
                      fired: BTreeSet<(String, String)>,
                      trace: Vec<TraceEvent>,
                      tick: u64| KBState {
        graph: session.into_graph(),
        meta,
        fired,
        trace,
        tick,
    };

    loop {
        if cycles >= cfg.max_cycles {
            hit_max = !candidates(session.graph(), rules, reg, cfg, &fired).is_empty();
            break;
        }
        let agenda = candidates(session.graph(), rules, reg, cfg, &fired);
        let Some(chosen) = agenda.into_iter().next() else {
            break;
        };
        cycles += 1;
        let rule = &rules[chosen.rule_idx];
        let at = cfg.clock_start.plus_seconds(trace.len() as u64);
        match fire(&mut session, &mut agent_cache, reg, rule, &chosen, at) {
            Ok((process, mut binding_after)) => {
                for triple in session.drain_delta() {
                    let provenance = if triple.predicate.as_str() == vocab::RUN_FIRED_RULE
                        || triple.predicate.as_str() == vocab::RUN_FIRED_BINDING
                    {
                        Provenance::Builtin
                    } else {
                        Provenance::Derived(rule.id.clone())
                    };
                    if meta.get(&triple).is_none() {
                        meta.insert(
                            triple,
                            AtomMeta {
                                provenance,
                                at: tick,
                            },
                        );
                        tick += 1;
                    }
                }
                fired.insert((rule.id.clone(), chosen.key.clone()));
                // Record the match-time bindings only.
                binding_after.retain(|k, _| chosen.binding.contains_key(k));
                trace.push(TraceEvent {
                    cycle: cycles,
                    rule: rule.id.clone(),
                    bindings: binding_after,
                    process,
                });
            }
            Err(kind) => {
                for triple in session.drain_delta() {
                    meta.entry(triple).or_insert(AtomMeta {
                        provenance: Provenance::Derived(rule.id.clone()),
                        at: tick,
                    });
                    tick += 1;
                }
                let error = RunError {
                    cycle: cycles,
                    rule: rule.id.clone(),
                    kind,
                };
                return Err(alloc::boxed::Box::new(RunFailure {
                    error,
                    kb: reassemble(session, meta, fired, trace, tick),
                }));
            }
        }
    }

    Ok(RunOutcome {
        kb: reassemble(session, meta, fired, trace, tick),
        cycles,
        hit_max_cycles: hit_max,
    })
}

fn resolve_agent(
    session: &MentalSession<'_>,
    reg: &SchemaRegistry,
    cache: &mut Option<Iri>,
) -> Result<Iri, RunErrorKind> {
    if let Some(agent) = cache {
        return Ok(agent.clone());
    }
    let mut agents: Vec<Iri> = reg
        .instances_of(session.graph(), vocab::AGENT)
        .into_iter()
        .filter_map(|r| match r {
            Resource::Iri(iri) => Some(iri),
            Resource::Blank(_) => None,
        })
        .collect();
    agents.dedup();
    match agents.len() {
        0 => Err(RunErrorKind::NoAgent),
        1 => {
            let agent = agents.remove(0);
            *cache = Some(agent.clone());
            Ok(agent)
        }
        _ => Err(RunErrorKind::MultipleAgents),
    }
}

fn fire(
    session: &mut MentalSession<'_>,
    agent_cache: &mut Option<Iri>,
    reg: &SchemaRegistry,
    rule: &Rule,
    candidate: &Candidate,
    at: TimeInstant,
) -> Result<(Iri, Binding), RunErrorKind> {
    let agent = resolve_agent(session, reg, agent_cache)?;
    let mut binding = candidate.binding.clone();

    let as_iri = |term: Term| -> Result<Iri, RunErrorKind> {
        match term {
            Term::Iri(iri) => Ok(iri),
            other => Err(RunErrorKind::TargetNotIri(other)),
        }
    };

    // One process per firing; its kind comes from the tail.
    let kind = process_kind_for(session.graph(), reg, rule, &binding)?;

    // reasonsUpon: the mental states among the matched atoms' subjects and
    // objects; Planning processes reason upon intentions only.
    let required_class = match kind {
        ProcessKind::Planning => vocab::INTENTION,
        _ => vocab::MENTAL_STATE,
    };
    let mut reasons: Vec<Iri> = Vec::new();
    for witness in &candidate.witnesses {
        if let Resource::Iri(iri) = &witness.subject {
            if reg.is_instance(session.graph(), &witness.subject, required_class) {
                reasons.push(iri.clone());
            }
        }
        if let Term::Iri(iri) = &witness.object {
            if reg.is_instance(
                session.graph(),
                &Resource::Iri(iri.clone()),
                required_class,
            ) {
                reasons.push(iri.clone());
            }
        }
    }
    reasons.sort();
    reasons.dedup();

    // isTriggeredBy: the head-matched atom's subject, when it is something
    // that may trigger a process.
    let trigger = {
        let subject = &candidate.head_subject;
        let ok = reg.is_instance(session.graph(), subject, vocab::MENTAL_ENTITY)
            || reg.is_instance(session.graph(), subject, vocab::WORLD_STATE);
        ok.then(|| subject.clone())
    };

    let mut process = session.begin_process(&agent, kind, reasons, trigger, at)?;

    for action in &rule.tail {
        match action {
            Action::AssertState {
                kind,
                refers_to,
                bind,
            } => {
                let target = as_iri(resolve(refers_to, &binding)?)?;
                let record = session.assert_state(&agent, *kind, &target, at, &mut process)?;
                if let Some(var) = bind {
                    binding.insert(var.clone(), Term::Iri(record.id.clone()));
                }
            }
            Action::Suppress { target } => {
                let target = as_iri(resolve(target, &binding)?)?;
                session.suppress_state(&target, &mut process, at)?;
            }
            Action::Link { rel, src, dst } => {
                let src = as_iri(resolve(src, &binding)?)?;
                let dst = as_iri(resolve(dst, &binding)?)?;
                session.link_states(&src, *rel, &dst)?;
            }
            Action::Justify { target, text } => {
                let target = as_iri(resolve(target, &binding)?)?;
                let text = instantiate_template(text, &binding)?;
                session.justify(&target, &text)?;
            }
            Action::EmitTriple {
                subject,
                predicate,
                object,
            } => {
                let subject = match resolve(subject, &binding)? {
                    Term::Iri(iri) => Resource::Iri(iri),
                    Term::Blank(b) => Resource::Blank(b),
                    other => return Err(RunErrorKind::SubjectNotIri(other)),
                };
                let predicate = match resolve(predicate, &binding)? {
                    Term::Iri(iri) => iri,
                    other => return Err(RunErrorKind::PredicateNotIri(other)),
                };
                let object = resolve(object, &binding)?;
                session.emit_triple(subject, predicate, object);
            }
            Action::DefinePlan { goal, tasks, bind } => {
                let goal = as_iri(resolve(goal, &binding)?)?;
                if !reg.is_instance(session.graph(), &Resource::Iri(goal.clone()), vocab::GOAL) {
                    return Err(RunErrorKind::GoalExpected(goal));
                }
                let mut task_iris = Vec::new();
                for task in tasks {
                    let task = as_iri(resolve(task, &binding)?)?;
                    if !reg.is_instance(session.graph(), &Resource::Iri(task.clone()), vocab::TASK)
                    {
                        return Err(RunErrorKind::TaskExpected(task));
                    }
                    task_iris.push(task);
                }
                let plan = session.define_plan(&mut process, &goal, &task_iris)?;
                if let Some(var) = bind {
                    binding.insert(var.clone(), Term::Iri(plan));
                }
            }
        }
    }

    // Firing provenance: lets refractoriness survive the export round trip.
    session.emit_triple(
        Resource::Iri(process.id.clone()),
        Iri::known(vocab::RUN_FIRED_RULE),
        Term::Literal(Literal::string(rule.id.clone())),
    );
    session.emit_triple(
        Resource::Iri(process.id.clone()),
        Iri::known(vocab::RUN_FIRED_BINDING),
        Term::Literal(Literal::string(candidate.key.clone())),
    );

    Ok((process.id, binding))
}

fn process_kind_for(
    g: &Graph,
    reg: &SchemaRegistry,
    rule: &Rule,
    binding: &Binding,
) -> Result<ProcessKind, RunErrorKind> {
    for action in &rule.tail {
        match action {
            Action::AssertState { kind, .. } => return Ok(ProcessKind::for_state(*kind)),
            Action::DefinePlan { .. } => return Ok(ProcessKind::Planning),
            _ => {}
        }
    }
    // A suppress-only tail takes its kind from the (first) suppressed state.
    for action in &rule.tail {
        if let Action::Suppress { target } = action {
            let target = match resolve(target, binding)? {
                Term::Iri(iri) => iri,
                other => return Err(RunErrorKind::TargetNotIri(other)),
            };
            let subject = Resource::Iri(target);
            for kind in [StateKind::Belief, StateKind::Desire, StateKind::Intention] {
                if reg.is_instance(g, &subject, kind.class()) {
                    return Ok(ProcessKind::for_state(kind));
                }
            }
        }
    }
    Ok(ProcessKind::Generic)
}

fn instantiate_template(text: &str, binding: &Binding) -> Result<String, RunErrorKind> {
    let mut out = String::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '?' {
            let mut name = String::new();
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '-')
            {
                name.push(chars[j]);
                j += 1;
            }
            if name.is_empty() {
                out.push('?');
                i += 1;
                continue;
            }
            let term = binding
                .get(&name)
                .ok_or_else(|| RunErrorKind::UnboundVariable(name.clone()))?;
            match term {
                Term::Iri(iri) => out.push_str(iri.as_str()),
                Term::Blank(b) => out.push_str(&format!("_:{}", b.0)),
                Term::Literal(l) => out.push_str(l.lexical()),
            }
            i = j;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::load_schema;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn typed(g: &mut Graph, s: &str, class: &str) {
        g.insert(Triple::new(
            iri(s),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(class)),
        ));
    }

    #[test]
    fn ingest_of_empty_graph_is_empty() {
        let kb = ingest(&Graph::new());
        assert!(kb.is_empty());
        assert!(kb.trace().is_empty());
    }

    #[test]
    fn ingest_assigns_sequential_ticks_in_sorted_order() {
        let mut g = Graph::new();
        typed(&mut g, "urn:i:b", vocab::BELIEF);
        typed(&mut g, "urn:i:a", vocab::AGENT);
        let kb = ingest(&g);
        let atoms = kb.atoms();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].at, 0);
        assert_eq!(atoms[1].at, 1);
        assert!(atoms.iter().all(|a| a.provenance == Provenance::Ingested));
    }

    #[test]
    fn empty_rules_leave_kb_unchanged() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:a", vocab::AGENT);
        let kb = ingest(&g);
        let before = kb.atom_set();
        let outcome = run(kb, &[], &reg, &RunConfig::default()).unwrap();
        assert_eq!(outcome.kb.atom_set(), before);
        assert!(outcome.kb.trace().is_empty());
        assert!(!outcome.hit_max_cycles);
    }

    #[test]
    fn single_rule_chain_fires_once_per_binding() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws", vocab::WORLD_STATE);
        let rules = parse_rules(
            "(?w rdf:type bdi:WorldState) / not((?x bdi:refersTo ?w)) >> assert_belief(?w) .",
        )
        .unwrap();
        let outcome = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap();
        assert_eq!(outcome.kb.trace().len(), 1);
        assert_eq!(outcome.cycles, 1);
        let export = export(&outcome.kb);
        assert!(export.contains(&Triple::new(
            Iri::known("urn:bdi-run:BeliefProcess_1"),
            Iri::known(vocab::GENERATES),
            Term::Iri(Iri::known("urn:bdi-run:Belief_1")),
        )));
        // NAF now blocks: a second run from the exported state fires nothing.
        let again = run(ingest(&export), &rules, &reg, &RunConfig::default()).unwrap();
        assert!(again.kb.trace().is_empty());
    }

    #[test]
    fn refractoriness_survives_export_round_trip() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws", vocab::WORLD_STATE);
        // No NAF guard here: only refractoriness stops a refire.
        let rules =
            parse_rules("(?w rdf:type bdi:WorldState) >> assert_belief(?w) .").unwrap();
        let outcome = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap();
        assert_eq!(outcome.kb.trace().len(), 1);
        let exported = export(&outcome.kb);
        let kb2 = ingest(&exported);
        assert!(!kb2.fired().is_empty());
        let again = run(kb2, &rules, &reg, &RunConfig::default()).unwrap();
        assert_eq!(again.kb.trace().len(), 0);
        assert_eq!(again.kb.atom_set(), outcome.kb.atom_set());
    }

    #[test]
    fn conflict_resolution_prefers_priority_then_rule_id() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws", vocab::WORLD_STATE);
        let rules = parse_rules(
            "@name low\n@priority 1\n(?w a bdi:WorldState) >> assert_belief(?w) .\n\
             @name high\n@priority 9\n(?w a bdi:WorldState) >> assert_desire(?w) .",
        )
        .unwrap();
        let cfg = RunConfig {
            max_cycles: 1,
            ..RunConfig::default()
        };
        let outcome = run(ingest(&g), &rules, &reg, &cfg).unwrap();
        assert_eq!(outcome.kb.trace()[0].rule, "high");
        assert!(outcome.hit_max_cycles);
    }

    #[test]
    fn action_failure_aborts_with_partial_trace() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws", vocab::WORLD_STATE);
        typed(&mut g, "urn:i:d", vocab::DESIRE);
        // Linking motivates with a Desire source is a class mismatch.
        let rules = parse_rules(
            "@name ok\n@priority 5\n(?w a bdi:WorldState) / not((?x bdi:refersTo ?w)) >> assert_belief(?w) .\n\
             @name bad\n(?d a bdi:Desire) / (?x bdi:refersTo ?w) >> link(motivates, ?d, ?d) .",
        )
        .unwrap();
        let failure = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap_err();
        assert_eq!(failure.error.rule, "bad");
        assert_eq!(failure.kb.trace().len(), 1); // the ok rule had fired
        assert!(matches!(
            failure.error.kind,
            RunErrorKind::Action(MentalError::LinkClassMismatch { .. })
        ));
    }

    #[test]
    fn export_then_ingest_is_identity_on_atom_sets() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws", vocab::WORLD_STATE);
        let rules = parse_rules(
            "(?w rdf:type bdi:WorldState) / not((?x bdi:refersTo ?w)) >> assert_belief(?w) .",
        )
        .unwrap();
        let outcome = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap();
        let exported = export(&outcome.kb);
        let re = ingest(&exported);
        assert_eq!(re.atom_set(), outcome.kb.atom_set());
        // Trace/graph bijection: one process individual per trace event.
        let processes = exported.subjects(
            vocab::RUN_FIRED_RULE,
            &Term::Literal(Literal::string("r1")),
        );
        assert_eq!(processes.len(), outcome.kb.trace().len());
    }

    #[test]
    fn builtin_valid_at_gates_firing() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws", vocab::WORLD_STATE);
        typed(&mut g, "urn:i:b", vocab::BELIEF);
        g.insert(Triple::new(
            iri("urn:i:b"),
            Iri::known(vocab::REFERS_TO),
            Term::Iri(iri("urn:i:ws")),
        ));
        // urn:i:b carries no validity interval: valid_at is false, so only
        // the negated variant fires.
        let positive = parse_rules(
            "(?b rdf:type bdi:Belief) / valid_at(?b, NOW) >> assert_desire(?ws) .",
        );
        assert!(positive.is_err()); // ?ws unbound: range restriction holds
        let rules = parse_rules(
            "(?b rdf:type bdi:Belief) / (?b bdi:refersTo ?w) & valid_at(?b, NOW) >> assert_desire(?w) .\n\
             @name fallback\n(?b rdf:type bdi:Belief) / (?b bdi:refersTo ?w) & not(valid_at(?b, NOW)) >> assert_desire(?w) .",
        )
        .unwrap();
        let outcome = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap();
        assert_eq!(outcome.kb.trace().len(), 1);
        assert_eq!(outcome.kb.trace()[0].rule, "fallback");
    }

    #[test]
    fn determinism_two_runs_identical() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:agent", vocab::AGENT);
        typed(&mut g, "urn:i:ws1", vocab::WORLD_STATE);
        typed(&mut g, "urn:i:ws2", vocab::WORLD_STATE);
        let rules = parse_rules(
            "(?w rdf:type bdi:WorldState) / not((?x bdi:refersTo ?w)) >> assert_belief(?w) .",
        )
        .unwrap();
        let run1 = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap();
        let run2 = run(ingest(&g), &rules, &reg, &RunConfig::default()).unwrap();
        assert_eq!(
            crate::rdf::serialize_turtle(&export(&run1.kb)),
            crate::rdf::serialize_turtle(&export(&run2.kb))
        );
        assert_eq!(run1.kb.trace(), run2.kb.trace());
    }
}
