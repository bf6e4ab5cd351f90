//! IRI constants for the vocabularies the engine works with.
//!
//! Everything here is a `&'static str`; use [`crate::rdf::Iri::known`] to wrap
//! a constant without re-validating it.

/// `rdf:` namespace.
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
/// `rdfs:` namespace.
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
/// `xsd:` namespace.
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
/// `owl:` namespace.
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
/// The BDI ontology namespace.
pub const BDI_NS: &str = "https://w3id.org/fossr/ontology/bdi/";
/// DOLCE+DnS UltraLite namespace (opaque upper-ontology parents).
pub const DUL_NS: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#";
/// DOLCE-0 namespace (opaque upper-ontology parents).
pub const D0_NS: &str = "http://www.ontologydesignpatterns.org/ont/d0.owl#";
/// Namespace for individuals minted by the engine during a run.
pub const RUN_NS: &str = "urn:bdi-run:";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
pub const RDFS_SUBCLASSOF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_SUBPROPERTYOF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_DATETIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
pub const XSD_NON_NEGATIVE_INTEGER: &str =
    "http://www.w3.org/2001/XMLSchema#nonNegativeInteger";
pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
pub const OWL_TRANSITIVE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#TransitiveProperty";
pub const OWL_INVERSE_OF: &str = "http://www.w3.org/2002/07/owl#inverseOf";
pub const OWL_DISJOINT_WITH: &str = "http://www.w3.org/2002/07/owl#disjointWith";
pub const OWL_RESTRICTION: &str = "http://www.w3.org/2002/07/owl#Restriction";
pub const OWL_ON_PROPERTY: &str = "http://www.w3.org/2002/07/owl#onProperty";
pub const OWL_ALL_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#allValuesFrom";
pub const OWL_SOME_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#someValuesFrom";
pub const OWL_MIN_CARDINALITY: &str =
    "http://www.w3.org/2002/07/owl#minQualifiedCardinality";
pub const OWL_MAX_CARDINALITY: &str =
    "http://www.w3.org/2002/07/owl#maxQualifiedCardinality";
pub const OWL_ON_CLASS: &str = "http://www.w3.org/2002/07/owl#onClass";

macro_rules! bdi_terms {
    ($($konst:ident => $local:literal),+ $(,)?) => {
        $(pub const $konst: &str =
            concat!("https://w3id.org/fossr/ontology/bdi/", $local);)+
    };
}

// Classes.
bdi_terms! {
    WORLD_STATE => "WorldState",
    MENTAL_ENTITY => "MentalEntity",
    AGENT => "Agent",
    MENTAL_STATE => "MentalState",
    BELIEF => "Belief",
    DESIRE => "Desire",
    INTENTION => "Intention",
    MENTAL_PROCESS => "MentalProcess",
    BELIEF_PROCESS => "BeliefProcess",
    DESIRE_PROCESS => "DesireProcess",
    INTENTION_PROCESS => "IntentionProcess",
    JUSTIFICATION => "Justification",
    GOAL => "Goal",
    PLAN => "Plan",
    PLANNING => "Planning",
    TASK => "Task",
    PLAN_EXECUTION => "PlanExecution",
    ACTION => "Action",
    TEMPORAL_ENTITY => "TemporalEntity",
    TIME_INSTANT => "TimeInstant",
    TIME_INTERVAL => "TimeInterval",
}

// Object properties.
bdi_terms! {
    PERCEIVES => "perceives",
    IS_PERCEIVED_BY => "isPerceivedBy",
    COGNISES => "cognises",
    REFERS_TO => "refersTo",
    HAS_PART => "hasPart",
    IS_PART_OF => "isPartOf",
    HAS_MENTAL_STATE => "hasMentalState",
    IS_MENTAL_STATE_OF => "isMentalStateOf",
    HAS_BELIEF => "hasBelief",
    IS_BELIEF_OF => "isBeliefOf",
    HAS_DESIRE => "hasDesire",
    IS_DESIRE_OF => "isDesireOf",
    HAS_INTENTION => "hasIntention",
    IS_INTENTION_OF => "isIntentionOf",
    MOTIVATES => "motivates",
    IS_MOTIVATED_BY => "isMotivatedBy",
    SUPPORTS => "supports",
    IS_SUPPORTED_BY => "isSupportedBy",
    FULFILS => "fulfils",
    FULFILLS => "fulfills",
    IS_PROCESSED_BY => "isProcessedBy",
    REASONS_UPON => "reasonsUpon",
    IS_TRIGGERED_BY => "isTriggeredBy",
    TRIGGERS => "triggers",
    AFFECTS => "affects",
    IS_AFFECTED_BY => "isAffectedBy",
    GENERATES => "generates",
    MODIFIES => "modifies",
    SUPPRESSES => "suppresses",
    JUSTIFIES => "justifies",
    SPECIFIES => "specifies",
    IS_SPECIFIED_BY => "isSpecifiedBy",
    ADDRESSES => "addresses",
    DEFINES => "defines",
    HAS_COMPONENT => "hasComponent",
    BEGINS_WITH => "beginsWith",
    ENDS_WITH => "endsWith",
    FOLLOWS => "follows",
    PRECEDES => "precedes",
    SATISFIES => "satisfies",
    IS_EXECUTED_BY => "isExecutedBy",
    BRINGS_ABOUT => "bringsAbout",
    IS_EXECUTION_OF => "isExecutionOf",
    IS_PERFORMED_BY => "isPerformedBy",
    AT_TIME => "atTime",
    HAS_VALIDITY => "hasValidity",
    HAS_START_TIME => "hasStartTime",
    HAS_END_TIME => "hasEndTime",
}

// The single data property: the xsd:dateTime value carried by a TimeInstant.
bdi_terms! {
    HAS_TIME_VALUE => "hasTimeValue",
}

// Upper-ontology parents, stored as opaque superclass IRIs.
pub const DUL_AGENT: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Agent";
pub const DUL_PLAN: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Plan";
pub const DUL_GOAL: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Goal";
pub const DUL_DESCRIPTION: &str =
    "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Description";
pub const DUL_PLAN_EXECUTION: &str =
    "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#PlanExecution";
pub const DUL_ACTION: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Action";
pub const DUL_TASK: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Task";
pub const DUL_REGION: &str = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#Region";
pub const DUL_TIME_INTERVAL: &str =
    "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#TimeInterval";
pub const D0_EVENTUALITY: &str =
    "http://www.ontologydesignpatterns.org/ont/d0.owl#Eventuality";
pub const D0_COGNITIVE_ENTITY: &str =
    "http://www.ontologydesignpatterns.org/ont/d0.owl#CognitiveEntity";
pub const D0_ACTIVITY: &str = "http://www.ontologydesignpatterns.org/ont/d0.owl#Activity";

// Bookkeeping predicates for rule-firing provenance, in the run namespace so
// they can never collide with ontology vocabulary.
pub const RUN_FIRED_RULE: &str = "urn:bdi-run:firedRule";
pub const RUN_FIRED_BINDING: &str = "urn:bdi-run:firedBinding";

/// The prefix block every serialized document carries, sorted by prefix.
pub const STANDARD_PREFIXES: &[(&str, &str)] = &[
    ("bdi", BDI_NS),
    ("d0", D0_NS),
    ("dul", DUL_NS),
    ("owl", OWL_NS),
    ("rdf", RDF_NS),
    ("rdfs", RDFS_NS),
    ("run", RUN_NS),
    ("xsd", XSD_NS),
];
