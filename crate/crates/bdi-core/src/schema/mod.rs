//! The BDI class/property axioms as inspectable registry data.
//!
//! Every axiom of the ontology is encoded here as plain data: class
//! hierarchy, disjointness, property hierarchy, inverses, transitivity,
//! domains/ranges, qualified cardinalities, and the per-class universal /
//! existential restrictions. [`materialize`] computes the RDFS-plus closure
//! of an instance graph; [`validate`] applies the closed-world checks.
//!
//! Universal restrictions (`∀p.F`) become type errors, existential
//! restrictions (`∃p.F`) become completeness warnings: open-world semantics
//! would make most competency-question answers vacuous.

mod materialize;
mod validate;

pub use materialize::{
    materialize, materialize_with_log, DerivationStep, InferenceRule, Materialization,
};
pub use validate::{
    validate, ReportItem, Severity, ValidationReport, CODE_CARD_MAX, CODE_CARD_MIN,
    CODE_DISJOINT, CODE_EXISTENTIAL, CODE_UNIVERSAL, CODE_UNKNOWN_PREDICATE,
};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::rdf::{BlankNode, Graph, Iri, Literal, Resource, Term, Triple};
use crate::vocab;

/// A per-class restriction on a property: the object (for universals) or a
/// required witness (for existentials) must be typed with one of `fillers`.
///
/// Fillers are a list so the trigger restriction can accept mental entities
/// and world states alike, which the worked examples require.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyShape {
    pub property: Iri,
    pub fillers: Vec<Iri>,
}

/// A class axiom bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDescriptor {
    pub iri: Iri,
    /// Direct superclasses; upper-ontology parents (`dul:`/`d0:`) appear here
    /// as opaque IRIs.
    pub superclasses: Vec<Iri>,
    pub disjoint_with: Vec<Iri>,
    /// `∀property.filler` restrictions scoped to this class.
    pub universals: Vec<PropertyShape>,
    /// `∃property.filler` restrictions scoped to this class.
    pub existentials: Vec<PropertyShape>,
}

/// A qualified cardinality: on instances of `on_class`, the property must
/// appear `count` times (as a lower or upper bound depending on position).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardOn {
    pub count: u32,
    pub on_class: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Object,
    Data,
}

/// A property axiom bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDescriptor {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub superproperties: Vec<Iri>,
    pub inverse: Option<Iri>,
    pub transitive: bool,
    pub domain: Option<Iri>,
    pub range: Option<Iri>,
    pub min_card: Option<CardOn>,
    pub max_card: Option<CardOn>,
}

/// The complete axiom registry. Immutable after [`SchemaRegistry::load`];
/// freely shared across threads.
#[derive(Debug, Clone)]
pub struct SchemaRegistry {
    classes: BTreeMap<Iri, ClassDescriptor>,
    properties: BTreeMap<Iri, PropertyDescriptor>,
    /// Predicates that are annotation machinery rather than ontology
    /// vocabulary; exempt from unknown-predicate warnings.
    annotations: BTreeSet<Iri>,
}

struct ClassBuilder {
    descriptor: ClassDescriptor,
}

impl ClassBuilder {
    fn new(iri: &str) -> Self {
        ClassBuilder {
            descriptor: ClassDescriptor {
                iri: Iri::known(iri),
                superclasses: Vec::new(),
                disjoint_with: Vec::new(),
                universals: Vec::new(),
                existentials: Vec::new(),
            },
        }
    }

    fn sub(mut self, sup: &str) -> Self {
        self.descriptor.superclasses.push(Iri::known(sup));
        self
    }

    fn disjoint(mut self, other: &str) -> Self {
        self.descriptor.disjoint_with.push(Iri::known(other));
        self
    }

    fn all(mut self, property: &str, fillers: &[&str]) -> Self {
        self.descriptor.universals.push(PropertyShape {
            property: Iri::known(property),
            fillers: fillers.iter().map(|f| Iri::known(f)).collect(),
        });
        self
    }

    fn some(mut self, property: &str, filler: &str) -> Self {
        self.descriptor.existentials.push(PropertyShape {
            property: Iri::known(property),
            fillers: alloc::vec![Iri::known(filler)],
        });
        self
    }
}

struct PropertyBuilder {
    descriptor: PropertyDescriptor,
}

impl PropertyBuilder {
    fn new(iri: &str) -> Self {
        PropertyBuilder {
            descriptor: PropertyDescriptor {
                iri: Iri::known(iri),
                kind: PropertyKind::Object,
                superproperties: Vec::new(),
                inverse: None,
                transitive: false,
                domain: None,
                range: None,
                min_card: None,
                max_card: None,
            },
        }
    }

    fn data(mut self) -> Self {
        self.descriptor.kind = PropertyKind::Data;
        self
    }

    fn sub(mut self, sup: &str) -> Self {
        self.descriptor.superproperties.push(Iri::known(sup));
        self
    }

    fn inverse(mut self, other: &str) -> Self {
        self.descriptor.inverse = Some(Iri::known(other));
        self
    }

    fn transitive(mut self) -> Self {
        self.descriptor.transitive = true;
        self
    }

    fn domain(mut self, class: &str) -> Self {
        self.descriptor.domain = Some(Iri::known(class));
        self
    }

    fn range(mut self, class: &str) -> Self {
        self.descriptor.range = Some(Iri::known(class));
        self
    }

    fn min(mut self, count: u32, on_class: &'static str) -> Self {
        self.descriptor.min_card = Some(CardOn { count, on_class });
        self
    }

    fn max(mut self, count: u32, on_class: &'static str) -> Self {
        self.descriptor.max_card = Some(CardOn { count, on_class });
        self
    }
}

impl SchemaRegistry {
    /// Builds the full registry from built-in data.
    pub fn load() -> Self {
        use vocab::*;

        let classes = [
            // World, agents and mental entities.
            ClassBuilder::new(WORLD_STATE)
                .sub(D0_EVENTUALITY)
                .all(IS_PERCEIVED_BY, &[AGENT]),
            ClassBuilder::new(MENTAL_ENTITY)
                .sub(D0_COGNITIVE_ENTITY)
                .all(HAS_PART, &[MENTAL_ENTITY])
                .some(REFERS_TO, WORLD_STATE)
                .some(AT_TIME, TEMPORAL_ENTITY)
                .some(HAS_VALIDITY, TEMPORAL_ENTITY),
            ClassBuilder::new(AGENT)
                .sub(DUL_AGENT)
                .all(COGNISES, &[MENTAL_ENTITY])
                .some(PERCEIVES, WORLD_STATE)
                .some(HAS_MENTAL_STATE, MENTAL_STATE),
            // Mental states.
            ClassBuilder::new(MENTAL_STATE)
                .sub(MENTAL_ENTITY)
                .disjoint(MENTAL_PROCESS)
                .all(HAS_PART, &[MENTAL_STATE]),
            ClassBuilder::new(BELIEF)
                .sub(MENTAL_STATE)
                .disjoint(DESIRE)
                .disjoint(INTENTION)
                .all(HAS_PART, &[BELIEF])
                .some(MOTIVATES, DESIRE)
                .some(SUPPORTS, INTENTION),
            ClassBuilder::new(DESIRE)
                .sub(MENTAL_STATE)
                .disjoint(BELIEF)
                .disjoint(INTENTION)
                .all(HAS_PART, &[DESIRE])
                .some(IS_MOTIVATED_BY, BELIEF),
            ClassBuilder::new(INTENTION)
                .sub(MENTAL_STATE)
                .disjoint(BELIEF)
                .disjoint(DESIRE)
                .all(HAS_PART, &[INTENTION])
                .some(FULFILS, DESIRE)
                .some(IS_SUPPORTED_BY, BELIEF)
                .some(SPECIFIES, PLAN),
            // Dynamics of mental states.
            ClassBuilder::new(MENTAL_PROCESS)
                .sub(D0_ACTIVITY)
                .sub(MENTAL_ENTITY)
                .disjoint(MENTAL_STATE)
                .all(HAS_PART, &[MENTAL_PROCESS])
                .all(IS_TRIGGERED_BY, &[MENTAL_ENTITY, WORLD_STATE])
                .some(IS_PROCESSED_BY, AGENT)
                .some(REASONS_UPON, MENTAL_STATE)
                .some(AFFECTS, MENTAL_STATE),
            ClassBuilder::new(BELIEF_PROCESS)
                .sub(MENTAL_PROCESS)
                .all(AFFECTS, &[BELIEF]),
            ClassBuilder::new(DESIRE_PROCESS)
                .sub(MENTAL_PROCESS)
                .all(AFFECTS, &[DESIRE]),
            ClassBuilder::new(INTENTION_PROCESS)
                .sub(MENTAL_PROCESS)
                .all(AFFECTS, &[INTENTION]),
            ClassBuilder::new(JUSTIFICATION)
                .sub(DUL_DESCRIPTION)
                .some(JUSTIFIES, MENTAL_ENTITY),
            // Goals and planning.
            ClassBuilder::new(GOAL).sub(DUL_GOAL),
            ClassBuilder::new(PLAN)
                .sub(DUL_PLAN)
                .some(ADDRESSES, GOAL)
                .some(HAS_COMPONENT, TASK)
                .some(BEGINS_WITH, TASK)
                .some(ENDS_WITH, TASK)
                .some(HAS_PART, PLAN),
            ClassBuilder::new(PLANNING)
                .sub(MENTAL_PROCESS)
                .all(REASONS_UPON, &[INTENTION])
                .all(HAS_PART, &[PLANNING])
                .some(DEFINES, PLAN)
                .some(REASONS_UPON, INTENTION),
            ClassBuilder::new(TASK)
                .sub(DUL_TASK)
                .all(FOLLOWS, &[TASK]),
            // Plan execution.
            ClassBuilder::new(PLAN_EXECUTION)
                .sub(DUL_PLAN_EXECUTION)
                .some(SATISFIES, PLAN)
                .some(ADDRESSES, GOAL)
                .some(HAS_COMPONENT, ACTION)
                .some(IS_EXECUTED_BY, AGENT)
                .some(BRINGS_ABOUT, WORLD_STATE)
                .some(AT_TIME, TEMPORAL_ENTITY),
            ClassBuilder::new(ACTION)
                .sub(DUL_ACTION)
                .some(IS_EXECUTION_OF, TASK)
                .some(IS_PERFORMED_BY, AGENT)
                .some(BRINGS_ABOUT, WORLD_STATE)
                .some(AT_TIME, TEMPORAL_ENTITY),
            // Temporal reasoning.
            ClassBuilder::new(TEMPORAL_ENTITY).sub(DUL_REGION),
            ClassBuilder::new(TIME_INSTANT)
                .sub(TEMPORAL_ENTITY)
                .disjoint(TIME_INTERVAL),
            ClassBuilder::new(TIME_INTERVAL)
                .sub(TEMPORAL_ENTITY)
                .sub(DUL_TIME_INTERVAL)
                .disjoint(TIME_INSTANT),
        ];

        let properties = [
            PropertyBuilder::new(PERCEIVES)
                .inverse(IS_PERCEIVED_BY)
                .domain(AGENT)
                .range(WORLD_STATE),
            PropertyBuilder::new(IS_PERCEIVED_BY)
                .inverse(PERCEIVES)
                .domain(WORLD_STATE)
                .range(AGENT),
            PropertyBuilder::new(COGNISES).domain(AGENT),
            PropertyBuilder::new(REFERS_TO)
                .domain(MENTAL_ENTITY)
                .range(WORLD_STATE),
            PropertyBuilder::new(HAS_PART).inverse(IS_PART_OF).transitive(),
            PropertyBuilder::new(IS_PART_OF).inverse(HAS_PART).transitive(),
            PropertyBuilder::new(HAS_MENTAL_STATE)
                .inverse(IS_MENTAL_STATE_OF)
                .domain(AGENT)
                .range(MENTAL_STATE),
            PropertyBuilder::new(IS_MENTAL_STATE_OF)
                .inverse(HAS_MENTAL_STATE)
                .domain(MENTAL_STATE)
                .range(AGENT),
            PropertyBuilder::new(HAS_BELIEF)
                .sub(HAS_MENTAL_STATE)
                .inverse(IS_BELIEF_OF)
                .domain(AGENT)
                .range(BELIEF),
            PropertyBuilder::new(IS_BELIEF_OF)
                .sub(IS_MENTAL_STATE_OF)
                .inverse(HAS_BELIEF)
                .domain(BELIEF)
                .range(AGENT),
            PropertyBuilder::new(HAS_DESIRE)
                .sub(HAS_MENTAL_STATE)
                .inverse(IS_DESIRE_OF)
                .domain(AGENT)
                .range(DESIRE),
            PropertyBuilder::new(IS_DESIRE_OF)
                .sub(IS_MENTAL_STATE_OF)
                .inverse(HAS_DESIRE)
                .domain(DESIRE)
                .range(AGENT),
            PropertyBuilder::new(HAS_INTENTION)
                .sub(HAS_MENTAL_STATE)
                .inverse(IS_INTENTION_OF)
                .domain(AGENT)
                .range(INTENTION),
            PropertyBuilder::new(IS_INTENTION_OF)
                .sub(IS_MENTAL_STATE_OF)
                .inverse(HAS_INTENTION)
                .domain(INTENTION)
                .range(AGENT),
            PropertyBuilder::new(MOTIVATES)
                .inverse(IS_MOTIVATED_BY)
                .domain(BELIEF)
                .range(DESIRE),
            PropertyBuilder::new(IS_MOTIVATED_BY)
                .inverse(MOTIVATES)
                .domain(DESIRE)
                .range(BELIEF),
            PropertyBuilder::new(SUPPORTS)
                .inverse(IS_SUPPORTED_BY)
                .domain(BELIEF)
                .range(INTENTION),
            PropertyBuilder::new(IS_SUPPORTED_BY)
                .inverse(SUPPORTS)
                .domain(INTENTION)
                .range(BELIEF),
            PropertyBuilder::new(FULFILS).domain(INTENTION).range(DESIRE),
            // `fulfills` appears in instance data as an alternative spelling;
            // registering it under the canonical property normalizes queries.
            PropertyBuilder::new(FULFILLS)
                .sub(FULFILS)
                .domain(INTENTION)
                .range(DESIRE),
            PropertyBuilder::new(IS_PROCESSED_BY)
                .domain(MENTAL_PROCESS)
                .range(AGENT),
            PropertyBuilder::new(REASONS_UPON)
                .domain(MENTAL_PROCESS)
                .range(MENTAL_STATE),
            PropertyBuilder::new(IS_TRIGGERED_BY)
                .inverse(TRIGGERS)
                .domain(MENTAL_PROCESS),
            PropertyBuilder::new(TRIGGERS)
                .inverse(IS_TRIGGERED_BY)
                .range(MENTAL_PROCESS),
            PropertyBuilder::new(AFFECTS)
                .inverse(IS_AFFECTED_BY)
                .domain(MENTAL_PROCESS)
                .range(MENTAL_STATE),
            PropertyBuilder::new(IS_AFFECTED_BY)
                .inverse(AFFECTS)
                .domain(MENTAL_STATE)
                .range(MENTAL_PROCESS),
            PropertyBuilder::new(GENERATES)
                .sub(AFFECTS)
                .domain(MENTAL_PROCESS)
                .range(MENTAL_STATE),
            PropertyBuilder::new(MODIFIES)
                .sub(AFFECTS)
                .domain(MENTAL_PROCESS)
                .range(MENTAL_STATE),
            PropertyBuilder::new(SUPPRESSES)
                .sub(AFFECTS)
                .domain(MENTAL_PROCESS)
                .range(MENTAL_STATE),
            PropertyBuilder::new(JUSTIFIES)
                .domain(JUSTIFICATION)
                .range(MENTAL_ENTITY),
            PropertyBuilder::new(SPECIFIES)
                .inverse(IS_SPECIFIED_BY)
                .domain(INTENTION)
                .range(PLAN),
            PropertyBuilder::new(IS_SPECIFIED_BY)
                .inverse(SPECIFIES)
                .domain(PLAN)
                .range(INTENTION),
            PropertyBuilder::new(ADDRESSES).range(GOAL),
            PropertyBuilder::new(DEFINES).domain(PLANNING).range(PLAN),
            PropertyBuilder::new(HAS_COMPONENT),
            PropertyBuilder::new(BEGINS_WITH).domain(PLAN).range(TASK),
            PropertyBuilder::new(ENDS_WITH).domain(PLAN).range(TASK),
            PropertyBuilder::new(FOLLOWS)
                .inverse(PRECEDES)
                .transitive()
                .domain(TASK)
                .range(TASK),
            PropertyBuilder::new(PRECEDES)
                .inverse(FOLLOWS)
                .transitive()
                .domain(TASK)
                .range(TASK),
            PropertyBuilder::new(SATISFIES)
                .domain(PLAN_EXECUTION)
                .range(PLAN),
            PropertyBuilder::new(IS_EXECUTED_BY)
                .domain(PLAN_EXECUTION)
                .range(AGENT),
            PropertyBuilder::new(BRINGS_ABOUT).range(WORLD_STATE),
            PropertyBuilder::new(IS_EXECUTION_OF).domain(ACTION).range(TASK),
            PropertyBuilder::new(IS_PERFORMED_BY)
                .domain(ACTION)
                .range(AGENT),
            PropertyBuilder::new(AT_TIME).range(TEMPORAL_ENTITY),
            PropertyBuilder::new(HAS_VALIDITY).range(TEMPORAL_ENTITY),
            PropertyBuilder::new(HAS_START_TIME)
                .domain(TIME_INTERVAL)
                .range(TIME_INSTANT)
                .min(1, TIME_INTERVAL)
                .max(1, TIME_INTERVAL),
            PropertyBuilder::new(HAS_END_TIME)
                .domain(TIME_INTERVAL)
                .range(TIME_INSTANT)
                .max(1, TIME_INTERVAL),
            PropertyBuilder::new(HAS_TIME_VALUE)
                .data()
                .domain(TIME_INSTANT)
                .range(XSD_DATETIME),
        ];

        let annotations = [RDF_TYPE, RDFS_LABEL, RDFS_COMMENT]
            .into_iter()
            .map(Iri::known)
            .collect();

        let registry = SchemaRegistry {
            classes: classes
                .into_iter()
                .map(|b| (b.descriptor.iri.clone(), b.descriptor))
                .collect(),
            properties: properties
                .into_iter()
                .map(|b| (b.descriptor.iri.clone(), b.descriptor))
                .collect(),
            annotations,
        };
        debug_assert!(registry.check_referential_integrity().is_empty());
        registry
    }

    pub fn class(&self, iri: &Iri) -> Option<&ClassDescriptor> {
        self.classes.get(iri)
    }

    pub fn class_named(&self, iri: &str) -> Option<&ClassDescriptor> {
        self.classes.get(&Iri::known(iri))
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDescriptor> {
        self.properties.get(iri)
    }

    pub fn property_named(&self, iri: &str) -> Option<&PropertyDescriptor> {
        self.properties.get(&Iri::known(iri))
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDescriptor> {
        self.classes.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDescriptor> {
        self.properties.values()
    }

    pub fn is_annotation(&self, predicate: &Iri) -> bool {
        self.annotations.contains(predicate)
    }

    /// Strict superclasses of a class, registered or external, to fixpoint.
    pub fn superclass_closure(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![class.clone()];
        while let Some(c) = stack.pop() {
            if let Some(desc) = self.classes.get(&c) {
                for sup in &desc.superclasses {
                    if out.insert(sup.clone()) {
                        stack.push(sup.clone());
                    }
                }
            }
        }
        out
    }

    /// Strict superproperties to fixpoint.
    pub fn superproperty_closure(&self, property: &Iri) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![property.clone()];
        while let Some(p) = stack.pop() {
            if let Some(desc) = self.properties.get(&p) {
                for sup in &desc.superproperties {
                    if out.insert(sup.clone()) {
                        stack.push(sup.clone());
                    }
                }
            }
        }
        out
    }

    /// True when `sub` equals `sup` or lists it in its superclass closure.
    pub fn is_subclass_of(&self, sub: &Iri, sup: &str) -> bool {
        sub.as_str() == sup || self.superclass_closure(sub).contains(&Iri::known(sup))
    }

    /// True when the individual's asserted types place it in `class`, taking
    /// the registry's subclass hierarchy into account. Works on raw or
    /// materialized graphs alike.
    pub fn is_instance(&self, g: &Graph, individual: &Resource, class: &str) -> bool {
        g.types_of(individual)
            .iter()
            .any(|t| self.is_subclass_of(t, class))
    }

    /// Individuals typed (directly or via the hierarchy) with `class`.
    pub fn instances_of(&self, g: &Graph, class: &str) -> Vec<Resource> {
        let mut out: Vec<Resource> = g
            .subjects_iter()
            .filter(|s| self.is_instance(g, s, class))
            .cloned()
            .collect();
        out.sort();
        out
    }

    /// The most specific registered classes an individual is asserted into.
    pub fn minimal_types(&self, g: &Graph, individual: &Resource) -> Vec<Iri> {
        let types: Vec<Iri> = g
            .types_of(individual)
            .into_iter()
            .filter(|t| self.classes.contains_key(t))
            .collect();
        let mut out: Vec<Iri> = types
            .iter()
            .filter(|t| {
                !types
                    .iter()
                    .any(|other| *other != **t && self.is_subclass_of(other, t.as_str()))
            })
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Referential-integrity audit: IRIs referenced by descriptors must be
    /// registered or external (`dul:`/`d0:`/`xsd:`). Returns offenders.
    pub fn check_referential_integrity(&self) -> Vec<Iri> {
        let external = |iri: &Iri| {
            iri.in_namespace(vocab::DUL_NS)
                || iri.in_namespace(vocab::D0_NS)
                || iri.in_namespace(vocab::XSD_NS)
        };
        let known_class = |iri: &Iri| self.classes.contains_key(iri) || external(iri);
        let known_prop = |iri: &Iri| self.properties.contains_key(iri) || external(iri);
        let mut bad = Vec::new();
        for class in self.classes.values() {
            for iri in class
                .superclasses
                .iter()
                .chain(&class.disjoint_with)
                .chain(class.universals.iter().flat_map(|s| &s.fillers))
                .chain(class.existentials.iter().flat_map(|s| &s.fillers))
            {
                if !known_class(iri) {
                    bad.push(iri.clone());
                }
            }
            for shape in class.universals.iter().chain(&class.existentials) {
                if !known_prop(&shape.property) {
                    bad.push(shape.property.clone());
                }
            }
        }
        for prop in self.properties.values() {
            for iri in prop.superproperties.iter().chain(&prop.inverse) {
                if !known_prop(iri) {
                    bad.push(iri.clone());
                }
            }
            for iri in prop.domain.iter().chain(&prop.range) {
                if !known_class(iri) {
                    bad.push(iri.clone());
                }
            }
        }
        bad.sort();
        bad.dedup();
        bad
    }

    /// Exports the registry as a Turtle graph for diffing against the
    /// published ontology. Restrictions and cardinalities are emitted as
    /// labeled-blank-node `owl:Restriction`s.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        for (prefix, ns) in vocab::STANDARD_PREFIXES {
            g.set_prefix(*prefix, *ns);
        }
        let type_iri = Iri::known(vocab::RDF_TYPE);
        let mut blank_counter = 0u32;
        let restriction = |g: &mut Graph,
                               class: &Iri,
                               shape: &PropertyShape,
                               facet: &str,
                               counter: &mut u32| {
            let node = BlankNode(alloc::format!("r{counter}"));
            *counter += 1;
            let b = Resource::Blank(node.clone());
            g.insert(Triple::new(
                b.clone(),
                type_iri.clone(),
                Term::Iri(Iri::known(vocab::OWL_RESTRICTION)),
            ));
            g.insert(Triple::new(
                b.clone(),
                Iri::known(vocab::OWL_ON_PROPERTY),
                Term::Iri(shape.property.clone()),
            ));
            for filler in &shape.fillers {
                g.insert(Triple::new(
                    b.clone(),
                    Iri::known(facet),
                    Term::Iri(filler.clone()),
                ));
            }
            g.insert(Triple::new(
                Resource::Iri(class.clone()),
                Iri::known(vocab::RDFS_SUBCLASSOF),
                Term::Blank(node),
            ));
        };
        for class in self.classes.values() {
            let subject = Resource::Iri(class.iri.clone());
            g.insert(Triple::new(
                subject.clone(),
                type_iri.clone(),
                Term::Iri(Iri::known(vocab::OWL_CLASS)),
            ));
            for sup in &class.superclasses {
                g.insert(Triple::new(
                    subject.clone(),
                    Iri::known(vocab::RDFS_SUBCLASSOF),
                    Term::Iri(sup.clone()),
                ));
            }
            for other in &class.disjoint_with {
                g.insert(Triple::new(
                    subject.clone(),
                    Iri::known(vocab::OWL_DISJOINT_WITH),
                    Term::Iri(other.clone()),
                ));
            }
            for shape in &class.universals {
                restriction(
                    &mut g,
                    &class.iri,
                    shape,
                    vocab::OWL_ALL_VALUES_FROM,
                    &mut blank_counter,
                );
            }
            for shape in &class.existentials {
                restriction(
                    &mut g,
                    &class.iri,
                    shape,
                    vocab::OWL_SOME_VALUES_FROM,
                    &mut blank_counter,
                );
            }
        }
        for prop in self.properties.values() {
            let subject = Resource::Iri(prop.iri.clone());
            let kind = match prop.kind {
                PropertyKind::Object => vocab::OWL_OBJECT_PROPERTY,
                PropertyKind::Data => vocab::OWL_DATATYPE_PROPERTY,
            };
            g.insert(Triple::new(
                subject.clone(),
                type_iri.clone(),
                Term::Iri(Iri::known(kind)),
            ));
            if prop.transitive {
                g.insert(Triple::new(
                    subject.clone(),
                    type_iri.clone(),
                    Term::Iri(Iri::known(vocab::OWL_TRANSITIVE_PROPERTY)),
                ));
            }
            for sup in &prop.superproperties {
                g.insert(Triple::new(
                    subject.clone(),
                    Iri::known(vocab::RDFS_SUBPROPERTYOF),
                    Term::Iri(sup.clone()),
                ));
            }
            if let Some(inverse) = &prop.inverse {
                g.insert(Triple::new(
                    subject.clone(),
                    Iri::known(vocab::OWL_INVERSE_OF),
                    Term::Iri(inverse.clone()),
                ));
            }
            if let Some(domain) = &prop.domain {
                g.insert(Triple::new(
                    subject.clone(),
                    Iri::known(vocab::RDFS_DOMAIN),
                    Term::Iri(domain.clone()),
                ));
            }
            if let Some(range) = &prop.range {
                g.insert(Triple::new(
                    subject.clone(),
                    Iri::known(vocab::RDFS_RANGE),
                    Term::Iri(range.clone()),
                ));
            }
            for (card, facet) in [
                (prop.min_card, vocab::OWL_MIN_CARDINALITY),
                (prop.max_card, vocab::OWL_MAX_CARDINALITY),
            ] {
                if let Some(CardOn { count, on_class }) = card {
                    let node = BlankNode(alloc::format!("r{blank_counter}"));
                    blank_counter += 1;
                    let b = Resource::Blank(node.clone());
                    g.insert(Triple::new(
                        b.clone(),
                        type_iri.clone(),
                        Term::Iri(Iri::known(vocab::OWL_RESTRICTION)),
                    ));
                    g.insert(Triple::new(
                        b.clone(),
                        Iri::known(vocab::OWL_ON_PROPERTY),
                        Term::Iri(prop.iri.clone()),
                    ));
                    g.insert(Triple::new(
                        b.clone(),
                        Iri::known(facet),
                        Term::Literal(Literal::typed(
                            alloc::format!("{count}"),
                            Iri::known(vocab::XSD_NON_NEGATIVE_INTEGER),
                        )),
                    ));
                    g.insert(Triple::new(
                        b.clone(),
                        Iri::known(vocab::OWL_ON_CLASS),
                        Term::Iri(Iri::known(on_class)),
                    ));
                    g.insert(Triple::new(
                        Resource::Iri(Iri::known(on_class)),
                        Iri::known(vocab::RDFS_SUBCLASSOF),
                        Term::Blank(node),
                    ));
                }
            }
        }
        g
    }
}

/// Convenience wrapper matching the operation name used throughout the docs.
pub fn load_schema() -> SchemaRegistry {
    SchemaRegistry::load()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;

    #[test]
    fn belief_is_a_mental_state_and_entity() {
        let reg = load_schema();
        let belief = reg.class_named(vocab::BELIEF).unwrap();
        assert!(belief.superclasses.contains(&Iri::known(vocab::MENTAL_STATE)));
        let closure = reg.superclass_closure(&Iri::known(vocab::BELIEF));
        assert!(closure.contains(&Iri::known(vocab::MENTAL_ENTITY)));
        assert!(closure.contains(&Iri::known(vocab::D0_COGNITIVE_ENTITY)));
    }

    #[test]
    fn generates_is_a_subproperty_of_affects_only() {
        let reg = load_schema();
        let generates = reg.property_named(vocab::GENERATES).unwrap();
        assert_eq!(generates.superproperties, alloc::vec![Iri::known(vocab::AFFECTS)]);
    }

    #[test]
    fn time_interval_cardinalities() {
        let reg = load_schema();
        let start = reg.property_named(vocab::HAS_START_TIME).unwrap();
        assert_eq!(
            start.min_card,
            Some(CardOn {
                count: 1,
                on_class: vocab::TIME_INTERVAL
            })
        );
        assert_eq!(
            start.max_card,
            Some(CardOn {
                count: 1,
                on_class: vocab::TIME_INTERVAL
            })
        );
        let end = reg.property_named(vocab::HAS_END_TIME).unwrap();
        assert_eq!(end.min_card, None);
        assert_eq!(
            end.max_card,
            Some(CardOn {
                count: 1,
                on_class: vocab::TIME_INTERVAL
            })
        );
    }

    #[test]
    fn inverse_is_involutive_and_transitivity_is_symmetric() {
        let reg = load_schema();
        for prop in reg.properties() {
            if let Some(inv) = &prop.inverse {
                let other = reg.property(inv).expect("inverse registered");
                assert_eq!(other.inverse.as_ref(), Some(&prop.iri), "{}", prop.iri);
                assert_eq!(other.transitive, prop.transitive, "{}", prop.iri);
            }
        }
    }

    #[test]
    fn disjointness_is_symmetric() {
        let reg = load_schema();
        for class in reg.classes() {
            for other in &class.disjoint_with {
                let mirror = reg.class(other).expect("disjoint partner registered");
                assert!(mirror.disjoint_with.contains(&class.iri));
            }
        }
    }

    #[test]
    fn referential_integrity_holds() {
        let reg = load_schema();
        assert!(reg.check_referential_integrity().is_empty());
    }

    #[test]
    fn registry_counts() {
        let reg = load_schema();
        // The published metrics table reports 22 classes, but only 21 are
        // derivable from the axiom listing; the extra class is not
        // identifiable and is intentionally not fabricated here.
        assert_eq!(reg.classes().count(), 21);
        // 48 named object properties (the metrics table reports 71; the delta
        // is not enumerable from the axiom listing) plus 1 data property.
        assert_eq!(
            reg.properties()
                .filter(|p| p.kind == PropertyKind::Object)
                .count(),
            48
        );
        assert_eq!(
            reg.properties()
                .filter(|p| p.kind == PropertyKind::Data)
                .count(),
            1
        );
        // Transitivity axioms: hasPart, isPartOf, follows, precedes.
        assert_eq!(reg.properties().filter(|p| p.transitive).count(), 4);
        // Disjointness axioms (unordered pairs).
        let mut pairs = alloc::collections::BTreeSet::new();
        for class in reg.classes() {
            for other in &class.disjoint_with {
                let mut pair = [class.iri.as_str(), other.as_str()];
                pair.sort();
                pairs.insert(alloc::format!("{}|{}", pair[0], pair[1]));
            }
        }
        assert_eq!(pairs.len(), 5);
    }

    #[test]
    fn registry_exports_to_parseable_turtle() {
        let reg = load_schema();
        let g = reg.to_graph();
        let text = crate::rdf::serialize_turtle(&g);
        let back = crate::rdf::parse_turtle(&text).unwrap();
        assert!(g.triples_eq(&back));
        assert!(text.contains("bdi:Belief"));
        assert!(String::from(&text[..]).contains("owl:disjointWith"));
    }
}
