//! The eighteen competency-question templates, evaluated against a
//! materialized graph.
//!
//! CQ1–CQ14 are unions of conjunctive graph patterns (most have a single
//! arm); parameters are named variables pre-bound from the caller. CQ15 walks
//! the task sequence of a plan; CQ16–CQ18 delegate to the temporal module.
//! Answers are deterministic: rows come back sorted and deduplicated.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::deliberation::{solve, Binding, Pattern, RuleTerm};
use crate::mental::EffectKind;
use crate::rdf::{Graph, Iri, Literal, Resource, Term};
use crate::schema::SchemaRegistry;
use crate::temporal::{self, TimeInstant, TimeMap, Validity};
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CqError {
    #[error("unknown competency question `{0}` (expected CQ1..CQ18)")]
    UnknownId(String),
    #[error("{id} requires parameter `{name}`")]
    MissingParam { id: CqId, name: &'static str },
    #[error("parameter `{name}`: {msg}")]
    BadParam { name: &'static str, msg: String },
}

/// A competency-question identifier, CQ1 through CQ18.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CqId(u8);

impl CqId {
    pub const COUNT: u8 = 18;

    pub fn new(n: u8) -> Option<Self> {
        (1..=Self::COUNT).contains(&n).then_some(CqId(n))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Accepts `CQ7`, `cq7`, or `7`.
    pub fn parse(text: &str) -> Option<Self> {
        let digits = text
            .strip_prefix("CQ")
            .or_else(|| text.strip_prefix("cq"))
            .unwrap_or(text);
        digits.parse::<u8>().ok().and_then(Self::new)
    }

    pub fn all() -> impl Iterator<Item = CqId> {
        (1..=Self::COUNT).map(CqId)
    }
}

impl fmt::Display for CqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CQ{}", self.0)
    }
}

/// How a template computes its answer.
#[derive(Debug, Clone)]
pub enum CqEvaluator {
    /// Union of conjunctive arms over the graph; projection names the output
    /// columns (and the variables they come from).
    Union {
        arms: Vec<Vec<Pattern>>,
        projection: Vec<&'static str>,
    },
    /// CQ15: ordered task sequence of a plan.
    TaskSequence,
    /// CQ16: validity bounds of a state.
    ValidityBounds,
    /// CQ17: states valid at an instant.
    ValidAt,
    /// CQ18: evolution history of an entity.
    History,
}

/// A parameterized query template.
#[derive(Debug, Clone)]
pub struct CqTemplate {
    pub id: CqId,
    pub question: &'static str,
    pub params: &'static [&'static str],
    pub optional_params: &'static [&'static str],
    pub evaluator: CqEvaluator,
}

/// A deterministic result table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultSet {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl ResultSet {
    fn new(columns: &[&str]) -> Self {
        ResultSet {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.rows.sort();
        self.rows.dedup();
        self
    }

    /// Single-column convenience accessor used widely in tests.
    pub fn single_column(&self) -> Vec<&Term> {
        self.rows.iter().filter_map(|r| r.first()).collect()
    }
}

fn var(name: &'static str) -> RuleTerm {
    RuleTerm::Var(name.to_string())
}

fn iri(value: &str) -> RuleTerm {
    RuleTerm::iri(value)
}

fn pat(s: RuleTerm, p: RuleTerm, o: RuleTerm) -> Pattern {
    Pattern::new(s, p, o)
}

fn typed(subject: &'static str, class: &str) -> Pattern {
    pat(var(subject), iri(vocab::RDF_TYPE), iri(class))
}

/// The full template catalogue, ids strictly increasing.
pub fn list_templates() -> Vec<CqTemplate> {
    let t = |n: u8,
             question: &'static str,
             params: &'static [&'static str],
             optional: &'static [&'static str],
             evaluator: CqEvaluator| CqTemplate {
        id: CqId::new(n).expect("static id in range"),
        question,
        params,
        optional_params: optional,
        evaluator,
    };
    let union = |arms: Vec<Vec<Pattern>>, projection: Vec<&'static str>| CqEvaluator::Union {
        arms,
        projection,
    };

    alloc::vec![
        t(
            1,
            "What are mental entities?",
            &[],
            &[],
            union(
                alloc::vec![alloc::vec![typed("e", vocab::MENTAL_ENTITY)]],
                alloc::vec!["e"],
            ),
        ),
        t(
            2,
            "What mental states (i.e. befiefs, desires, and intentions) does an agent hold?",
            &["agent"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("agent"), iri(vocab::HAS_MENTAL_STATE), var("s")),
                    typed("s", vocab::MENTAL_STATE),
                ]],
                alloc::vec!["s"],
            ),
        ),
        t(
            3,
            "What are the constituent mental entities that form part of a given mental entity?",
            &["entity"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("entity"), iri(vocab::HAS_PART), var("p")),
                    typed("p", vocab::MENTAL_ENTITY),
                ]],
                alloc::vec!["p"],
            ),
        ),
        t(
            4,
            "What mental processes has an agent undergone?",
            &["agent"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("p"), iri(vocab::IS_PROCESSED_BY), var("agent")),
                    typed("p", vocab::MENTAL_PROCESS),
                ]],
                alloc::vec!["p"],
            ),
        ),
        t(
            5,
            "What is the world state that a given mental state is about?",
            &["state"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("state"), iri(vocab::REFERS_TO), var("w")),
                    typed("w", vocab::WORLD_STATE),
                ]],
                alloc::vec!["w"],
            ),
        ),
        t(
            6,
            "What beliefs motivated the formation of a given desire?",
            &["desire"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("b"), iri(vocab::MOTIVATES), var("desire")),
                    typed("b", vocab::BELIEF),
                ]],
                alloc::vec!["b"],
            ),
        ),
        t(
            7,
            "Which desire does a particular intention fulfil?",
            &["intention"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("intention"), iri(vocab::FULFILS), var("d")),
                    typed("d", vocab::DESIRE),
                ]],
                alloc::vec!["d"],
            ),
        ),
        t(
            8,
            "Which mental process generated a given belief, desire, or intention?",
            &["state"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("p"), iri(vocab::GENERATES), var("state")),
                    typed("p", vocab::MENTAL_PROCESS),
                ]],
                alloc::vec!["p"],
            ),
        ),
        t(
            9,
            "When was a mental entity generated?",
            &["entity"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("p"), iri(vocab::GENERATES), var("entity")),
                    pat(var("p"), iri(vocab::AT_TIME), var("t")),
                ]],
                alloc::vec!["t"],
            ),
        ),
        t(
            10,
            "What triggered a mental process?",
            &["process"],
            &[],
            union(
                alloc::vec![alloc::vec![pat(
                    var("process"),
                    iri(vocab::IS_TRIGGERED_BY),
                    var("x"),
                )]],
                alloc::vec!["x"],
            ),
        ),
        t(
            11,
            "What justifications support a specific mental entity?",
            &["entity"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("j"), iri(vocab::JUSTIFIES), var("entity")),
                    typed("j", vocab::JUSTIFICATION),
                ]],
                alloc::vec!["j"],
            ),
        ),
        t(
            12,
            "What goal does a given intention or plan aim to fulfil?",
            &["entity"],
            &[],
            union(
                alloc::vec![
                    alloc::vec![
                        pat(var("entity"), iri(vocab::ADDRESSES), var("g")),
                        typed("g", vocab::GOAL),
                    ],
                    alloc::vec![
                        pat(var("entity"), iri(vocab::SPECIFIES), var("p")),
                        pat(var("p"), iri(vocab::ADDRESSES), var("g")),
                        typed("g", vocab::GOAL),
                    ],
                ],
                alloc::vec!["g"],
            ),
        ),
        t(
            13,
            "What plan has been specified by a particular intention?",
            &["intention"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("intention"), iri(vocab::SPECIFIES), var("p")),
                    typed("p", vocab::PLAN),
                ]],
                alloc::vec!["p"],
            ),
        ),
        t(
            14,
            "What planning process led to the creation of a particular plan?",
            &["plan"],
            &[],
            union(
                alloc::vec![alloc::vec![
                    pat(var("pp"), iri(vocab::DEFINES), var("plan")),
                    typed("pp", vocab::PLANNING),
                ]],
                alloc::vec!["pp"],
            ),
        ),
        t(
            15,
            "What is the ordered sequence of tasks that compose a given plan?",
            &["plan"],
            &[],
            CqEvaluator::TaskSequence,
        ),
        t(
            16,
            "What is the temporal validity (start and end time) of a mental state?",
            &["state"],
            &[],
            CqEvaluator::ValidityBounds,
        ),
        t(
            17,
            "What mental states were valid at a specific point in time?",
            &["instant"],
            &["agent"],
            CqEvaluator::ValidAt,
        ),
        t(
            18,
            "How has a mental entity evolved over time?",
            &["entity"],
            &[],
            CqEvaluator::History,
        ),
    ]
}

/// Evaluates competency questions over materialized graphs.
pub struct CqEngine<'r> {
    registry: &'r SchemaRegistry,
    timemap: TimeMap,
}

impl<'r> CqEngine<'r> {
    pub fn new(registry: &'r SchemaRegistry, timemap: TimeMap) -> Self {
        CqEngine { registry, timemap }
    }

    pub fn template(&self, id: CqId) -> CqTemplate {
        list_templates()
            .into_iter()
            .find(|t| t.id == id)
            .expect("all ids present")
    }

    /// Answers a question. The graph should be materialized; answers on a raw
    /// graph differ only by closure-derived rows.
    pub fn answer(
        &self,
        id: CqId,
        params: &BTreeMap<String, Term>,
        g: &Graph,
    ) -> Result<ResultSet, CqError> {
        let template = self.template(id);
        for required in template.params {
            if !params.contains_key(*required) {
                return Err(CqError::MissingParam {
                    id,
                    name: required,
                });
            }
        }
        match &template.evaluator {
            CqEvaluator::Union { arms, projection } => {
                Ok(self.answer_union(arms, projection, params, g))
            }
            CqEvaluator::TaskSequence => {
                let plan = param_iri(params, "plan")?;
                Ok(task_sequence(g, &plan))
            }
            CqEvaluator::ValidityBounds => {
                let state = param_iri(params, "state")?;
                Ok(self.validity_bounds(g, &state))
            }
            CqEvaluator::ValidAt => self.valid_at_answer(params, g),
            CqEvaluator::History => {
                let entity = param_iri(params, "entity")?;
                Ok(self.history_answer(g, &entity))
            }
        }
    }

    fn answer_union(
        &self,
        arms: &[Vec<Pattern>],
        projection: &[&'static str],
        params: &BTreeMap<String, Term>,
        g: &Graph,
    ) -> ResultSet {
        let seed: Binding = params.clone();
        let mut result = ResultSet::new(projection);
        for arm in arms {
            for binding in solve(g, arm, &seed) {
                let row: Option<Vec<Term>> = projection
                    .iter()
                    .map(|v| binding.get(*v).cloned())
                    .collect();
                if let Some(row) = row {
                    result.rows.push(row);
                }
            }
        }
        result.finish()
    }

    fn validity_bounds(&self, g: &Graph, state: &Iri) -> ResultSet {
        let mut result = ResultSet::new(&["start", "end"]);
        if let Ok(Validity::Interval(interval)) =
            temporal::validity_of(g, &self.timemap, state)
        {
            let start = Term::Literal(Literal::typed(
                interval.start().canonical(),
                Iri::known(vocab::XSD_DATETIME),
            ));
            let end = match interval.end() {
                Some(end) => Term::Literal(Literal::typed(
                    end.canonical(),
                    Iri::known(vocab::XSD_DATETIME),
                )),
                None => Term::Literal(Literal::string("")),
            };
            result.rows.push(alloc::vec![start, end]);
        }
        result.finish()
    }

    fn valid_at_answer(
        &self,
        params: &BTreeMap<String, Term>,
        g: &Graph,
    ) -> Result<ResultSet, CqError> {
        let instant = match params.get("instant") {
            Some(Term::Literal(l)) => TimeInstant::parse(l.lexical()).map_err(|e| {
                CqError::BadParam {
                    name: "instant",
                    msg: alloc::format!("{e}"),
                }
            })?,
            Some(Term::Iri(iri)) => temporal::resolve_instant(g, &self.timemap, iri)
                .ok_or(CqError::BadParam {
                    name: "instant",
                    msg: "no resolvable time value".to_string(),
                })?,
            Some(other) => {
                return Err(CqError::BadParam {
                    name: "instant",
                    msg: alloc::format!("{other} is not an instant"),
                })
            }
            None => unreachable!("required param checked by answer()"),
        };
        let mut result = ResultSet::new(&["state"]);
        match params.get("agent") {
            Some(Term::Iri(agent)) => {
                for state in
                    temporal::states_valid_at(g, &self.timemap, self.registry, agent, instant)
                {
                    result.rows.push(alloc::vec![Term::Iri(state)]);
                }
            }
            Some(other) => {
                return Err(CqError::BadParam {
                    name: "agent",
                    msg: alloc::format!("{other} is not an IRI"),
                })
            }
            None => {
                for state in self.registry.instances_of(g, vocab::MENTAL_STATE) {
                    let Resource::Iri(state) = state else { continue };
                    if temporal::valid_at(g, &self.timemap, &state, instant).unwrap_or(false) {
                        result.rows.push(alloc::vec![Term::Iri(state)]);
                    }
                }
            }
        }
        Ok(result.finish())
    }

    fn history_answer(&self, g: &Graph, entity: &Iri) -> ResultSet {
        let mut result = ResultSet::new(&["time", "process", "effect"]);
        for entry in temporal::history(g, &self.timemap, entity) {
            let time = match entry.at {
                Some(t) => Term::Literal(Literal::typed(
                    t.canonical(),
                    Iri::known(vocab::XSD_DATETIME),
                )),
                None => Term::Literal(Literal::string("")),
            };
            result.rows.push(alloc::vec![
                time,
                Term::Iri(entry.process),
                Term::Literal(Literal::string(effect_label(entry.effect))),
            ]);
        }
        // History order is chronological, not lexicographic: rows are already
        // sorted by (time, process) upstream.
        result
    }
}

fn effect_label(effect: EffectKind) -> &'static str {
    effect.label()
}

fn param_iri(params: &BTreeMap<String, Term>, name: &'static str) -> Result<Iri, CqError> {
    match params.get(name) {
        Some(Term::Iri(iri)) => Ok(iri.clone()),
        Some(other) => Err(CqError::BadParam {
            name,
            msg: alloc::format!("{other} is not an IRI"),
        }),
        None => unreachable!("required param checked by answer()"),
    }
}

/// CQ15: the component tasks of a plan in execution order. On a materialized
/// graph `follows` is transitively closed, so a valid total order means the
/// follow-counts are exactly 0..n-1 and consecutive tasks are linked. A
/// branching or disconnected sequence yields a single `error` row naming the
/// offending task instead of an arbitrary linearization.
fn task_sequence(g: &Graph, plan: &Iri) -> ResultSet {
    let mut result = ResultSet::new(&["position", "task"]);
    let plan_subject = Resource::Iri(plan.clone());
    let mut tasks: Vec<Iri> = g
        .objects(&plan_subject, vocab::HAS_COMPONENT)
        .into_iter()
        .filter_map(|t| match t {
            Term::Iri(iri) => Some(iri),
            _ => None,
        })
        .collect();
    tasks.sort();
    tasks.dedup();
    if tasks.is_empty() {
        return result;
    }
    let begins: Vec<Term> = g.objects(&plan_subject, vocab::BEGINS_WITH);
    let ends: Vec<Term> = g.objects(&plan_subject, vocab::ENDS_WITH);

    let error_row = |result: &mut ResultSet, task: &Iri| {
        result.rows.push(alloc::vec![
            Term::Literal(Literal::string("error")),
            Term::Iri(task.clone()),
        ]);
    };

    let follows = Iri::known(vocab::FOLLOWS);
    let follows_within = |a: &Iri, b: &Iri| -> bool {
        g.contains(&crate::rdf::Triple::new(
            a.clone(),
            follows.clone(),
            Term::Iri(b.clone()),
        ))
    };

    let mut ordered: Vec<(usize, Iri)> = tasks
        .iter()
        .map(|t| {
            let count = tasks.iter().filter(|o| *o != t && follows_within(t, o)).count();
            (count, t.clone())
        })
        .collect();
    ordered.sort();

    // The counts must be exactly 0..n-1 and consecutive tasks directly linked.
    for (i, (count, task)) in ordered.iter().enumerate() {
        if *count != i {
            error_row(&mut result, task);
            return result;
        }
    }
    for pair in ordered.windows(2) {
        let (prev, next) = (&pair[0].1, &pair[1].1);
        if !follows_within(next, prev) {
            error_row(&mut result, next);
            return result;
        }
    }
    if let Some(first) = ordered.first() {
        if !begins.is_empty() && !begins.contains(&Term::Iri(first.1.clone())) {
            error_row(&mut result, &first.1);
            return result;
        }
    }
    if let Some(last) = ordered.last() {
        if !ends.is_empty() && !ends.contains(&Term::Iri(last.1.clone())) {
            error_row(&mut result, &last.1);
            return result;
        }
    }
    for (i, (_, task)) in ordered.into_iter().enumerate() {
        result.rows.push(alloc::vec![
            Term::Literal(Literal::string(alloc::format!("{}", i + 1))),
            Term::Iri(task),
        ]);
    }
    result
}
