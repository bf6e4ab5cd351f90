//! RDFS-plus materialization: the entailment closure of an instance graph
//! under the registry's axioms.
//!
//! Five rule families run to fixpoint:
//!
//! 1. `rdf:type` propagation along subclass chains,
//! 2. triple propagation along subproperty chains,
//! 3. inverse materialization,
//! 4. transitive closure for transitive properties,
//! 5. domain/range typing of subjects/objects.
//!
//! Inference never fails; contradictions are the validator's job. Every
//! derived triple is justified by exactly one recorded rule instance, and
//! replaying the log from the input graph reproduces the closure.

use alloc::vec::Vec;

use super::{PropertyKind, SchemaRegistry};
use crate::rdf::{Graph, Iri, Term, Triple, TriplePattern};
use crate::vocab;

/// The rule instance that justified a derived triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InferenceRule {
    SubClassOf { sub: Iri, sup: Iri },
    SubPropertyOf { sub: Iri, sup: Iri },
    InverseOf { property: Iri, inverse: Iri },
    Transitive { property: Iri },
    Domain { property: Iri, class: Iri },
    Range { property: Iri, class: Iri },
}

/// One closure step: `conclusion` follows from `premises` by `rule`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub conclusion: Triple,
    pub rule: InferenceRule,
    pub premises: Vec<Triple>,
}

/// A closed graph plus the log that produced it.
#[derive(Debug, Clone)]
pub struct Materialization {
    pub graph: Graph,
    pub log: Vec<DerivationStep>,
}

impl Materialization {
    /// Re-applies the log to `input`; the result must equal the closure.
    /// Used as the soundness check for the derivation log.
    pub fn replay(&self, input: &Graph) -> Graph {
        let mut g = input.clone();
        for step in &self.log {
            debug_assert!(step.premises.iter().all(|p| g.contains(p)));
            g.insert(step.conclusion.clone());
        }
        g
    }
}

/// The entailment closure of `g`. Monotone (`g ⊆ materialize(g)`) and
/// idempotent.
pub fn materialize(g: &Graph, reg: &SchemaRegistry) -> Graph {
    materialize_with_log(g, reg).graph
}

/// The entailment closure plus its derivation log.
pub fn materialize_with_log(g: &Graph, reg: &SchemaRegistry) -> Materialization {
    let mut graph = g.clone();
    let mut log = Vec::new();
    // Naive-order worklist: seed with the input in sorted order, then chase
    // each newly derived triple. First derivation wins the log slot.
    let mut queue: Vec<Triple> = graph.iter().collect();
    let mut at = 0;
    while at < queue.len() {
        let triple = queue[at].clone();
        at += 1;
        for step in consequences(&graph, reg, &triple) {
            if graph.insert(step.conclusion.clone()) {
                queue.push(step.conclusion.clone());
                log.push(step);
            }
        }
    }
    Materialization { graph, log }
}

fn consequences(graph: &Graph, reg: &SchemaRegistry, triple: &Triple) -> Vec<DerivationStep> {
    let mut out = Vec::new();
    let type_iri = Iri::known(vocab::RDF_TYPE);

    if triple.predicate == type_iri {
        if let Term::Iri(class) = &triple.object {
            if let Some(desc) = reg.class(class) {
                for sup in &desc.superclasses {
                    out.push(DerivationStep {
                        conclusion: Triple::new(
                            triple.subject.clone(),
                            type_iri.clone(),
                            Term::Iri(sup.clone()),
                        ),
                        rule: InferenceRule::SubClassOf {
                            sub: class.clone(),
                            sup: sup.clone(),
                        },
                        premises: alloc::vec![triple.clone()],
                    });
                }
            }
        }
        return out;
    }

    let Some(desc) = reg.property(&triple.predicate) else {
        return out;
    };

    for sup in &desc.superproperties {
        out.push(DerivationStep {
            conclusion: Triple::new(
                triple.subject.clone(),
                sup.clone(),
                triple.object.clone(),
            ),
            rule: InferenceRule::SubPropertyOf {
                sub: triple.predicate.clone(),
                sup: sup.clone(),
            },
            premises: alloc::vec![triple.clone()],
        });
    }

    if let Some(inverse) = &desc.inverse {
        if let Some(object_as_subject) = triple.object.as_resource() {
            out.push(DerivationStep {
                conclusion: Triple::new(
                    object_as_subject,
                    inverse.clone(),
                    Term::from(triple.subject.clone()),
                ),
                rule: InferenceRule::InverseOf {
                    property: triple.predicate.clone(),
                    inverse: inverse.clone(),
                },
                premises: alloc::vec![triple.clone()],
            });
        }
    }

    if desc.transitive {
        let rule = InferenceRule::Transitive {
            property: triple.predicate.clone(),
        };
        // (s p o) + (o p x) => (s p x)
        if let Some(mid) = triple.object.as_resource() {
            for right in graph.matching(
                &TriplePattern::any()
                    .with_subject(mid)
                    .with_predicate(triple.predicate.clone()),
            ) {
                out.push(DerivationStep {
                    conclusion: Triple::new(
                        triple.subject.clone(),
                        triple.predicate.clone(),
                        right.object.clone(),
                    ),
                    rule: rule.clone(),
                    premises: alloc::vec![triple.clone(), right],
                });
            }
        }
        // (x p s) + (s p o) => (x p o)
        for left in graph.matching(
            &TriplePattern::any()
                .with_predicate(triple.predicate.clone())
                .with_object(Term::from(triple.subject.clone())),
        ) {
            out.push(DerivationStep {
                conclusion: Triple::new(
                    left.subject.clone(),
                    triple.predicate.clone(),
                    triple.object.clone(),
                ),
                rule: rule.clone(),
                premises: alloc::vec![left, triple.clone()],
            });
        }
    }

    if let Some(domain) = &desc.domain {
        out.push(DerivationStep {
            conclusion: Triple::new(
                triple.subject.clone(),
                type_iri.clone(),
                Term::Iri(domain.clone()),
            ),
            rule: InferenceRule::Domain {
                property: triple.predicate.clone(),
                class: domain.clone(),
            },
            premises: alloc::vec![triple.clone()],
        });
    }

    if desc.kind == PropertyKind::Object {
        if let Some(range) = &desc.range {
            if let Some(object_as_subject) = triple.object.as_resource() {
                out.push(DerivationStep {
                    conclusion: Triple::new(
                        object_as_subject,
                        type_iri,
                        Term::Iri(range.clone()),
                    ),
                    rule: InferenceRule::Range {
                        property: triple.predicate.clone(),
                        class: range.clone(),
                    },
                    premises: alloc::vec![triple.clone()],
                });
            }
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Resource;
    use crate::schema::load_schema;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn triple(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), Iri::known(p), Term::Iri(iri(o)))
    }

    #[test]
    fn generates_propagates_to_affects_and_inverse() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(triple("urn:i:p1", vocab::GENERATES, "urn:i:b1"));
        let closed = materialize(&g, &reg);
        assert!(closed.contains(&triple("urn:i:p1", vocab::AFFECTS, "urn:i:b1")));
        assert!(closed.contains(&triple("urn:i:b1", vocab::IS_AFFECTED_BY, "urn:i:p1")));
        // Domain/range typing fires too.
        assert!(closed.contains(&Triple::new(
            iri("urn:i:p1"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::MENTAL_PROCESS)),
        )));
    }

    #[test]
    fn subclass_chain_types_propagate() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(Triple::new(
            iri("urn:i:b"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::BELIEF)),
        ));
        let closed = materialize(&g, &reg);
        for class in [
            vocab::MENTAL_STATE,
            vocab::MENTAL_ENTITY,
            vocab::D0_COGNITIVE_ENTITY,
        ] {
            assert!(closed.contains(&Triple::new(
                iri("urn:i:b"),
                Iri::known(vocab::RDF_TYPE),
                Term::Iri(Iri::known(class)),
            )));
        }
    }

    #[test]
    fn follows_is_transitively_closed() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(triple("urn:i:t1", vocab::FOLLOWS, "urn:i:t2"));
        g.insert(triple("urn:i:t2", vocab::FOLLOWS, "urn:i:t3"));
        let closed = materialize(&g, &reg);
        assert!(closed.contains(&triple("urn:i:t1", vocab::FOLLOWS, "urn:i:t3")));
        // And the inverse chain came along.
        assert!(closed.contains(&triple("urn:i:t3", vocab::PRECEDES, "urn:i:t1")));
    }

    #[test]
    fn materialization_is_monotone_and_idempotent() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(triple("urn:i:p1", vocab::GENERATES, "urn:i:b1"));
        g.insert(triple("urn:i:b1", vocab::MOTIVATES, "urn:i:d1"));
        let once = materialize(&g, &reg);
        assert!(g.subset_of(&once));
        let twice = materialize(&once, &reg);
        assert!(once.triples_eq(&twice));
    }

    #[test]
    fn log_replay_reproduces_closure() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(triple("urn:i:t1", vocab::FOLLOWS, "urn:i:t2"));
        g.insert(triple("urn:i:t2", vocab::FOLLOWS, "urn:i:t3"));
        g.insert(triple("urn:i:p1", vocab::SUPPRESSES, "urn:i:b1"));
        let m = materialize_with_log(&g, &reg);
        let replayed = m.replay(&g);
        assert!(replayed.triples_eq(&m.graph));
        // Exactly one justification per derived triple.
        let mut seen = alloc::collections::BTreeSet::new();
        for step in &m.log {
            assert!(seen.insert(step.conclusion.clone()), "{}", step.conclusion);
            assert!(!g.contains(&step.conclusion) || false);
        }
    }

    #[test]
    fn literals_never_become_subjects() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(Triple::new(
            iri("urn:i:instant"),
            Iri::known(vocab::HAS_TIME_VALUE),
            Term::Literal(crate::rdf::Literal::typed(
                "2025-01-01T00:00:00Z",
                Iri::known(vocab::XSD_DATETIME),
            )),
        ));
        let closed = materialize(&g, &reg);
        // Domain typing applies to the subject; the literal object is left
        // alone (no range typing for data properties).
        assert!(closed.contains(&Triple::new(
            iri("urn:i:instant"),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(vocab::TIME_INSTANT)),
        )));
        assert_eq!(
            closed
                .iter()
                .filter(|t| matches!(t.subject, Resource::Blank(_)))
                .count(),
            0
        );
    }
}
