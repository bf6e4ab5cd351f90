//! Closed-world validation of a materialized instance graph.
//!
//! Errors: disjointness violations, qualified-cardinality violations, and
//! universal-restriction violations (an object whose types contradict a
//! `∀p.F` on the subject's class). Warnings: unsatisfied existential shapes
//! and predicates missing from the registry. The report is the output; an
//! empty item list means clean.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{SchemaRegistry};
use crate::rdf::{Graph, Iri, Resource, Term, TriplePattern};

pub const CODE_DISJOINT: &str = "E-DISJOINT";
pub const CODE_CARD_MIN: &str = "E-CARD-MIN";
pub const CODE_CARD_MAX: &str = "E-CARD-MAX";
pub const CODE_UNIVERSAL: &str = "E-UNIVERSAL";
pub const CODE_EXISTENTIAL: &str = "W-EXISTENTIAL";
pub const CODE_UNKNOWN_PREDICATE: &str = "W-UNKNOWN-PREDICATE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportItem {
    pub severity: Severity,
    pub code: &'static str,
    pub subject: Resource,
    pub message: String,
}

/// A deterministic validation report, ordered by (subject, code, message).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    items: Vec<ReportItem>,
}

impl ValidationReport {
    pub fn items(&self) -> &[ReportItem] {
        &self.items
    }

    pub fn is_clean(&self) -> bool {
        self.items.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.items.iter().any(|i| i.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| i.severity == Severity::Warning)
    }

    fn push(&mut self, severity: Severity, code: &'static str, subject: Resource, message: String) {
        self.items.push(ReportItem {
            severity,
            code,
            subject,
            message,
        });
    }

    fn finish(mut self) -> Self {
        self.items.sort_by(|a, b| {
            a.subject
                .cmp(&b.subject)
                .then_with(|| a.code.cmp(b.code))
                .then_with(|| a.message.cmp(&b.message))
        });
        self.items.dedup();
        self
    }
}

/// Validates a graph against the registry. The graph should already be
/// materialized: the checks read asserted types only.
pub fn validate(g: &Graph, reg: &SchemaRegistry) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_disjointness(g, reg, &mut report);
    check_cardinalities(g, reg, &mut report);
    check_universals(g, reg, &mut report);
    check_existentials(g, reg, &mut report);
    check_known_predicates(g, reg, &mut report);
    report.finish()
}

fn check_disjointness(g: &Graph, reg: &SchemaRegistry, report: &mut ValidationReport) {
    for subject in g.subjects_iter() {
        let types = g.types_of(subject);
        for class in &types {
            let Some(desc) = reg.class(class) else { continue };
            for other in &desc.disjoint_with {
                // Count each unordered pair once.
                if class < other && types.contains(other) {
                    report.push(
                        Severity::Error,
                        CODE_DISJOINT,
                        subject.clone(),
                        format!(
                            "typed with disjoint classes {} and {}",
                            class.as_str(),
                            other.as_str()
                        ),
                    );
                }
            }
        }
    }
}

fn check_cardinalities(g: &Graph, reg: &SchemaRegistry, report: &mut ValidationReport) {
    for prop in reg.properties() {
        for (card, code, upper) in [
            (prop.min_card, CODE_CARD_MIN, false),
            (prop.max_card, CODE_CARD_MAX, true),
        ] {
            let Some(card) = card else { continue };
            for instance in g.subjects(crate::vocab::RDF_TYPE, &Term::Iri(Iri::known(card.on_class)))
            {
                let n = g.objects(&instance, prop.iri.as_str()).len() as u32;
                let violated = if upper { n > card.count } else { n < card.count };
                if violated {
                    report.push(
                        Severity::Error,
                        code,
                        instance.clone(),
                        format!(
                            "{} {} values of {} on {} (expected {} {})",
                            if upper { "more than" } else { "fewer than" },
                            card.count,
                            prop.iri.as_str(),
                            card.on_class,
                            if upper { "at most" } else { "at least" },
                            card.count,
                        ),
                    );
                }
            }
        }
    }
}

fn check_universals(g: &Graph, reg: &SchemaRegistry, report: &mut ValidationReport) {
    for class in reg.classes() {
        if class.universals.is_empty() {
            continue;
        }
        let class_term = Term::Iri(class.iri.clone());
        for instance in g.subjects(crate::vocab::RDF_TYPE, &class_term) {
            for shape in &class.universals {
                for triple in g.matching(
                    &TriplePattern::any()
                        .with_subject(instance.clone())
                        .with_predicate(shape.property.clone()),
                ) {
                    let ok = match triple.object.as_resource() {
                        Some(object) => shape
                            .fillers
                            .iter()
                            .any(|filler| g.has_type(&object, filler.as_str())),
                        None => false, // literal object can never satisfy ∀p.F
                    };
                    if !ok {
                        report.push(
                            Severity::Error,
                            CODE_UNIVERSAL,
                            instance.clone(),
                            format!(
                                "{} value {} is not typed {} (required on {})",
                                shape.property.as_str(),
                                triple.object,
                                or_list(&shape.fillers),
                                class.iri.as_str(),
                            ),
                        );
                    }
                }
            }
        }
    }
}

fn check_existentials(g: &Graph, reg: &SchemaRegistry, report: &mut ValidationReport) {
    for class in reg.classes() {
        if class.existentials.is_empty() {
            continue;
        }
        let class_term = Term::Iri(class.iri.clone());
        for instance in g.subjects(crate::vocab::RDF_TYPE, &class_term) {
            for shape in &class.existentials {
                let satisfied = g
                    .objects(&instance, shape.property.as_str())
                    .into_iter()
                    .filter_map(|o| o.as_resource())
                    .any(|object| {
                        shape
                            .fillers
                            .iter()
                            .any(|filler| g.has_type(&object, filler.as_str()))
                    });
                if !satisfied {
                    report.push(
                        Severity::Warning,
                        CODE_EXISTENTIAL,
                        instance.clone(),
                        format!(
                            "no {} value typed {} (expected on every {})",
                            shape.property.as_str(),
                            or_list(&shape.fillers),
                            class.iri.as_str(),
                        ),
                    );
                }
            }
        }
    }
}

fn check_known_predicates(g: &Graph, reg: &SchemaRegistry, report: &mut ValidationReport) {
    for predicate in g.predicates_iter() {
        if reg.property(predicate).is_some() || reg.is_annotation(predicate) {
            continue;
        }
        let mut subjects: Vec<Resource> = g
            .matching(&TriplePattern::any().with_predicate(predicate.clone()))
            .into_iter()
            .map(|t| t.subject)
            .collect();
        subjects.dedup();
        for subject in subjects {
            report.push(
                Severity::Warning,
                CODE_UNKNOWN_PREDICATE,
                subject,
                format!("predicate {} is not in the schema registry", predicate.as_str()),
            );
        }
    }
}

fn or_list(fillers: &[Iri]) -> String {
    let mut out = String::new();
    for (i, f) in fillers.iter().enumerate() {
        if i > 0 {
            out.push_str(" or ");
        }
        out.push_str(f.as_str());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{load_schema, materialize};
    use crate::rdf::Triple;
    use crate::vocab;

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
    fn belief_and_desire_typing_is_a_disjointness_error() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:x", vocab::BELIEF);
        typed(&mut g, "urn:i:x", vocab::DESIRE);
        let report = validate(&materialize(&g, &reg), &reg);
        let errors: Vec<_> = report.errors().collect();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].code, CODE_DISJOINT);
    }

    #[test]
    fn two_start_instants_violate_cardinality() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:iv", vocab::TIME_INTERVAL);
        typed(&mut g, "urn:i:t1", vocab::TIME_INSTANT);
        typed(&mut g, "urn:i:t2", vocab::TIME_INSTANT);
        for t in ["urn:i:t1", "urn:i:t2"] {
            g.insert(Triple::new(
                iri("urn:i:iv"),
                Iri::known(vocab::HAS_START_TIME),
                Term::Iri(iri(t)),
            ));
        }
        let report = validate(&materialize(&g, &reg), &reg);
        assert!(report.errors().any(|e| e.code == CODE_CARD_MAX));
    }

    #[test]
    fn interval_without_start_violates_min_cardinality() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:iv", vocab::TIME_INTERVAL);
        let report = validate(&materialize(&g, &reg), &reg);
        assert!(report.errors().any(|e| e.code == CODE_CARD_MIN));
    }

    #[test]
    fn has_part_to_foreign_kind_is_a_universal_error() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:b", vocab::BELIEF);
        typed(&mut g, "urn:i:d", vocab::DESIRE);
        g.insert(Triple::new(
            iri("urn:i:b"),
            Iri::known(vocab::HAS_PART),
            Term::Iri(iri("urn:i:d")),
        ));
        let report = validate(&materialize(&g, &reg), &reg);
        assert!(report.errors().any(|e| e.code == CODE_UNIVERSAL));
    }

    #[test]
    fn stray_predicate_warns_but_does_not_error() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:t", vocab::TASK);
        g.insert(Triple::new(
            iri("urn:i:t"),
            iri("https://w3id.org/fossr/ontology/bdi/occursAt"),
            Term::Iri(iri("urn:i:loc")),
        ));
        let report = validate(&materialize(&g, &reg), &reg);
        assert!(!report.has_errors());
        assert!(report.warnings().any(|w| w.code == CODE_UNKNOWN_PREDICATE));
    }

    #[test]
    fn missing_existential_witness_warns() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:b", vocab::BELIEF);
        let report = validate(&materialize(&g, &reg), &reg);
        // A lone belief misses refersTo/atTime/hasValidity among others.
        assert!(report.warnings().any(|w| {
            w.code == CODE_EXISTENTIAL && w.message.contains("refersTo")
        }));
        assert!(!report.has_errors());
    }

    #[test]
    fn report_ordering_is_deterministic() {
        let reg = load_schema();
        let mut g = Graph::new();
        typed(&mut g, "urn:i:z", vocab::BELIEF);
        typed(&mut g, "urn:i:z", vocab::DESIRE);
        typed(&mut g, "urn:i:a", vocab::BELIEF);
        typed(&mut g, "urn:i:a", vocab::INTENTION);
        let report = validate(&materialize(&g, &reg), &reg);
        let subjects: Vec<_> = report.items().iter().map(|i| i.subject.clone()).collect();
        let mut sorted = subjects.clone();
        sorted.sort();
        assert_eq!(subjects, sorted);
    }
}
