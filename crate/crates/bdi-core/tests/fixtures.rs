//! Golden tests over the fixture corpus: parse counts (hand-tallied before
//! the build), round trips, competency-question answers, validation outcome,
//! and the two scenario runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use bdi_core::cq::{CqEngine, CqId};
use bdi_core::deliberation::{self, parse_rules, RunConfig};
use bdi_core::mental;
use bdi_core::rdf::{parse_turtle, serialize_turtle, Iri, Resource, Term, Triple};
use bdi_core::schema::{load_schema, materialize, validate};
use bdi_core::temporal::{self, TimeInstant, TimeInterval, TimeMap};
use bdi_core::vocab;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

fn zelle(name: &str) -> Iri {
    iri(&format!("http://example.org/bdi-demo/{name}"))
}

fn hotel(name: &str) -> Iri {
    iri(&format!("https://example.org/bdi-case#{name}"))
}

/// The shipped lookup for the fixtures' symbolic times, mirroring
/// fixtures/timemap.toml (the CLI parses the file; tests build it directly).
fn fixture_timemap() -> TimeMap {
    let mut tm = TimeMap::new();
    tm.set_instant(
        zelle("T_2025_10_27T10_15"),
        TimeInstant::parse("2025-10-27T10:15:00Z").unwrap(),
    );
    tm.set_instant(
        hotel("Time_WE_morning"),
        TimeInstant::parse("2025-11-01T09:00:00Z").unwrap(),
    );
    tm.set_interval(
        hotel("Interval_WE_morning"),
        TimeInterval::new(
            TimeInstant::parse("2025-11-01T06:00:00Z").unwrap(),
            Some(TimeInstant::parse("2025-11-01T12:00:00Z").unwrap()),
        )
        .unwrap(),
    );
    tm
}

#[test]
fn zelle_fixture_has_the_tallied_statement_count() {
    let g = parse_turtle(&fixture("zelle.ttl")).unwrap();
    // Hand tally of predicate-object pairs: 4+1+3+7+3+5+3+6.
    assert_eq!(g.len(), 32);
    assert_eq!(g.prefixes().len(), 5);
}

#[test]
fn hotel_fixture_has_the_tallied_statement_count() {
    let g = parse_turtle(&fixture("hotel.ttl")).unwrap();
    // Hand tally: 5+4+4+6+6+4+3+2+4+4.
    assert_eq!(g.len(), 42);
    assert_eq!(g.prefixes().len(), 4);
}

#[test]
fn fixtures_round_trip_exactly_and_deterministically() {
    for name in ["zelle.ttl", "hotel.ttl", "zelle_world.ttl", "hotel_world.ttl"] {
        let g = parse_turtle(&fixture(name)).unwrap();
        let emitted = serialize_turtle(&g);
        let back = parse_turtle(&emitted).unwrap();
        assert!(g.triples_eq(&back), "{name} changed across a round trip");
        assert_eq!(emitted, serialize_turtle(&back), "{name} serialization unstable");
    }
}

#[test]
fn zelle_chain_answers_cq6_to_cq10() {
    let reg = load_schema();
    let g = materialize(&parse_turtle(&fixture("zelle.ttl")).unwrap(), &reg);
    let engine = CqEngine::new(&reg, fixture_timemap());
    let ask = |n: u8, param: (&str, Iri)| {
        let mut params = BTreeMap::new();
        params.insert(param.0.to_string(), Term::Iri(param.1));
        engine
            .answer(CqId::new(n).unwrap(), &params, &g)
            .unwrap()
            .rows
            .into_iter()
            .map(|r| r[0].clone())
            .collect::<Vec<_>>()
    };

    assert_eq!(
        ask(6, ("desire", zelle("Desire_B"))),
        vec![Term::Iri(zelle("Belief_B"))]
    );
    assert_eq!(
        ask(7, ("intention", zelle("Intention_B"))),
        vec![Term::Iri(zelle("Desire_B"))]
    );
    assert_eq!(
        ask(8, ("state", zelle("Belief_B"))),
        vec![Term::Iri(zelle("Belief_process"))]
    );
    assert_eq!(
        ask(10, ("process", zelle("Belief_process"))),
        vec![Term::Iri(zelle("WorldState_WS_request"))]
    );
}

#[test]
fn hotel_answers_cq2_and_cq11() {
    let reg = load_schema();
    let g = materialize(&parse_turtle(&fixture("hotel.ttl")).unwrap(), &reg);
    let engine = CqEngine::new(&reg, fixture_timemap());

    let mut params = BTreeMap::new();
    params.insert("agent".to_string(), Term::Iri(hotel("Agent_A1")));
    let rs = engine.answer(CqId::new(2).unwrap(), &params, &g).unwrap();
    let states: Vec<Term> = rs.rows.into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(
        states,
        vec![
            Term::Iri(hotel("Belief_B1")),
            Term::Iri(hotel("Desire_D1")),
            Term::Iri(hotel("Intention_I3")),
        ]
    );

    let mut params = BTreeMap::new();
    params.insert("entity".to_string(), Term::Iri(hotel("Intention_I3")));
    let rs = engine.answer(CqId::new(11).unwrap(), &params, &g).unwrap();
    assert_eq!(rs.rows, vec![vec![Term::Iri(hotel("Justification_J1"))]]);

    // CQ12 and CQ13 ride the same chain.
    let rs = engine.answer(CqId::new(13).unwrap(), &params, &g);
    let mut params = BTreeMap::new();
    params.insert("entity".to_string(), Term::Iri(hotel("Intention_I3")));
    let goals = engine.answer(CqId::new(12).unwrap(), &params, &g).unwrap();
    assert_eq!(goals.rows, vec![vec![Term::Iri(hotel("Goal_G2"))]]);
    drop(rs);
}

#[test]
fn fixtures_validate_with_warnings_only() {
    let reg = load_schema();
    for name in ["zelle.ttl", "hotel.ttl", "zelle_world.ttl", "hotel_world.ttl"] {
        let g = materialize(&parse_turtle(&fixture(name)).unwrap(), &reg);
        let report = validate(&g, &reg);
        assert!(
            !report.has_errors(),
            "{name} should be error-free, got {:?}",
            report.errors().collect::<Vec<_>>()
        );
        assert!(!report.is_clean(), "{name} should carry warnings");
    }
}

#[test]
fn hotel_stray_predicates_are_flagged() {
    let reg = load_schema();
    let g = materialize(&parse_turtle(&fixture("hotel.ttl")).unwrap(), &reg);
    let report = validate(&g, &reg);
    let unknown: Vec<String> = report
        .warnings()
        .filter(|w| w.code == bdi_core::schema::CODE_UNKNOWN_PREDICATE)
        .map(|w| w.message.clone())
        .collect();
    for stray in ["occursAt", "requiresWorldState", "hasLocation", "isJustifiedBy"] {
        assert!(
            unknown.iter().any(|m| m.contains(stray)),
            "expected a stray-predicate warning for {stray}"
        );
    }
}

#[test]
fn rule_files_parse_with_three_rules_each() {
    assert_eq!(parse_rules(&fixture("zelle.rules")).unwrap().len(), 3);
    assert_eq!(parse_rules(&fixture("hotel.rules")).unwrap().len(), 3);
}

#[test]
fn zelle_world_run_rebuilds_the_paper_chain() {
    let reg = load_schema();
    let seed = materialize(&parse_turtle(&fixture("zelle_world.ttl")).unwrap(), &reg);
    let rules = parse_rules(&fixture("zelle.rules")).unwrap();
    let outcome =
        deliberation::run(deliberation::ingest(&seed), &rules, &reg, &RunConfig::default())
            .unwrap();
    assert_eq!(outcome.kb.trace().len(), 3);
    assert!(!outcome.hit_max_cycles);
    let fired: Vec<&str> = outcome.kb.trace().iter().map(|e| e.rule.as_str()).collect();
    assert_eq!(fired, ["form_belief", "form_desire", "form_intention"]);

    let g = deliberation::export(&outcome.kb);
    let contains = |s: &str, p: &str, o: &str| {
        g.contains(&Triple::new(
            Iri::new(s).unwrap(),
            Iri::new(p).unwrap(),
            Term::Iri(Iri::new(o).unwrap()),
        ))
    };
    assert!(contains(
        "urn:bdi-run:BeliefProcess_1",
        vocab::GENERATES,
        "urn:bdi-run:Belief_1"
    ));
    assert!(contains(
        "urn:bdi-run:Belief_1",
        vocab::REFERS_TO,
        "http://example.org/bdi-demo/WorldState_WS_request"
    ));
    assert!(contains(
        "urn:bdi-run:Belief_1",
        vocab::MOTIVATES,
        "urn:bdi-run:Desire_1"
    ));
    assert!(contains(
        "urn:bdi-run:Intention_1",
        vocab::FULFILS,
        "urn:bdi-run:Desire_1"
    ));
    assert!(contains(
        "urn:bdi-run:Belief_1",
        vocab::SUPPORTS,
        "urn:bdi-run:Intention_1"
    ));

    // The export validates with zero errors once materialized.
    let report = validate(&materialize(&g, &reg), &reg);
    assert!(!report.has_errors(), "{:?}", report.errors().collect::<Vec<_>>());

    // Running the same rules over the full published fixture derives nothing:
    // the chain is already present.
    let full = materialize(&parse_turtle(&fixture("zelle.ttl")).unwrap(), &reg);
    let replay =
        deliberation::run(deliberation::ingest(&full), &rules, &reg, &RunConfig::default())
            .unwrap();
    assert!(replay.kb.trace().is_empty());
}

#[test]
fn hotel_world_run_produces_corrective_intention_plan_and_justification() {
    let reg = load_schema();
    let seed = materialize(&parse_turtle(&fixture("hotel_world.ttl")).unwrap(), &reg);
    let rules = parse_rules(&fixture("hotel.rules")).unwrap();
    let outcome =
        deliberation::run(deliberation::ingest(&seed), &rules, &reg, &RunConfig::default())
            .unwrap();
    let fired: Vec<&str> = outcome.kb.trace().iter().map(|e| e.rule.as_str()).collect();
    assert_eq!(
        fired,
        ["corrective_intention", "plan_for_intention", "justify_intention"]
    );

    let g = deliberation::export(&outcome.kb);
    let contains = |s: &str, p: &str, o: &str| {
        g.contains(&Triple::new(
            Iri::new(s).unwrap(),
            Iri::new(p).unwrap(),
            Term::Iri(Iri::new(o).unwrap()),
        ))
    };
    assert!(contains(
        "urn:bdi-run:Justification_1",
        vocab::JUSTIFIES,
        "urn:bdi-run:Intention_1"
    ));
    assert!(contains(
        "urn:bdi-run:Intention_1",
        vocab::SPECIFIES,
        "urn:bdi-run:Plan_1"
    ));
    assert!(contains(
        "urn:bdi-run:Plan_1",
        vocab::ADDRESSES,
        "https://example.org/bdi-case#Goal_G2"
    ));
    assert!(contains(
        "urn:bdi-run:Plan_1",
        vocab::HAS_COMPONENT,
        "https://example.org/bdi-case#Task_homeActivity"
    ));
    assert!(contains(
        "urn:bdi-run:Intention_1",
        vocab::FULFILS,
        "https://example.org/bdi-case#Desire_D1"
    ));
    // The corrective plan addresses the alternative goal, not the one the
    // contradicted task pursued.
    assert!(!contains(
        "urn:bdi-run:Plan_1",
        vocab::ADDRESSES,
        "https://example.org/bdi-case#Goal_G1"
    ));

    let report = validate(&materialize(&g, &reg), &reg);
    assert!(!report.has_errors(), "{:?}", report.errors().collect::<Vec<_>>());
}

#[test]
fn explain_traces_zelle_intention_back_to_the_world_state() {
    let reg = load_schema();
    let g = materialize(&parse_turtle(&fixture("zelle.ttl")).unwrap(), &reg);
    let tree = mental::explain(&g, &reg, &zelle("Intention_B")).unwrap();
    assert_eq!(tree.root.iri, Resource::Iri(zelle("Intention_B")));
    // Root -> fulfils -> Desire_B -> isMotivatedBy -> Belief_B -> refersTo ->
    // WorldState_WS_request.
    let desire = tree
        .root
        .edges
        .iter()
        .find(|e| e.relation == "fulfils")
        .expect("fulfils edge");
    assert_eq!(desire.target.iri, Resource::Iri(zelle("Desire_B")));
    let belief = desire
        .target
        .edges
        .iter()
        .find(|e| e.relation == "isMotivatedBy")
        .expect("isMotivatedBy edge");
    assert_eq!(belief.target.iri, Resource::Iri(zelle("Belief_B")));
    let world = belief
        .target
        .edges
        .iter()
        .find(|e| e.relation == "refersTo")
        .expect("refersTo edge");
    assert_eq!(
        world.target.iri,
        Resource::Iri(zelle("WorldState_WS_request"))
    );
}

#[test]
fn explain_hotel_intention_includes_justification_and_belief() {
    let reg = load_schema();
    let g = materialize(&parse_turtle(&fixture("hotel.ttl")).unwrap(), &reg);
    let tree = mental::explain(&g, &reg, &hotel("Intention_I3")).unwrap();
    let mut seen = Vec::new();
    collect_nodes(&tree.root, &mut seen);
    assert!(seen.contains(&Resource::Iri(hotel("Justification_J1"))));
    assert!(seen.contains(&Resource::Iri(hotel("Belief_B1"))));
}

fn collect_nodes(node: &mental::DerivationNode, out: &mut Vec<Resource>) {
    out.push(node.iri.clone());
    for edge in &node.edges {
        collect_nodes(&edge.target, out);
    }
}

#[test]
fn hotel_belief_is_valid_inside_the_weekend_morning_interval() {
    let reg = load_schema();
    let g = materialize(&parse_turtle(&fixture("hotel.ttl")).unwrap(), &reg);
    let tm = fixture_timemap();
    let belief = hotel("Belief_B1");
    // Oracle: direct interval arithmetic on the configured bounds.
    let inside = TimeInstant::parse("2025-11-01T09:30:00Z").unwrap();
    let at_start = TimeInstant::parse("2025-11-01T06:00:00Z").unwrap();
    let at_end = TimeInstant::parse("2025-11-01T12:00:00Z").unwrap();
    let before = TimeInstant::parse("2025-11-01T05:59:59Z").unwrap();
    assert!(temporal::valid_at(&g, &tm, &belief, inside).unwrap());
    assert!(temporal::valid_at(&g, &tm, &belief, at_start).unwrap());
    assert!(!temporal::valid_at(&g, &tm, &belief, at_end).unwrap());
    assert!(!temporal::valid_at(&g, &tm, &belief, before).unwrap());

    // CQ17 with the agent bound sees exactly the three states sharing the
    // interval.
    let engine = CqEngine::new(&reg, tm);
    let mut params = BTreeMap::new();
    params.insert(
        "instant".to_string(),
        Term::Literal(bdi_core::rdf::Literal::string("2025-11-01T09:30:00Z")),
    );
    params.insert("agent".to_string(), Term::Iri(hotel("Agent_A1")));
    let rs = engine.answer(CqId::new(17).unwrap(), &params, &g).unwrap();
    assert_eq!(rs.rows.len(), 3);
}
