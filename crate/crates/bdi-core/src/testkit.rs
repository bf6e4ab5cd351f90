//! Test-only support: independent oracles and deterministic generators.
//!
//! Everything here exists to check the engine from a second angle and stays
//! out of production builds: the crate's own tests see it via `cfg(test)`,
//! and downstream test suites enable the `testkit` feature. The oracles are
//! deliberately written as the dumbest correct thing — full-closure rescans,
//! exhaustive binding enumeration, permutation search — and share no code
//! with the implementation paths they check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::deliberation::{Binding, Pattern, RuleTerm};
use crate::rdf::{Graph, Iri, Literal, Resource, Term, Triple};
use crate::schema::{PropertyKind, SchemaRegistry};
use crate::vocab;

/// Tiny deterministic xorshift* generator: reproducible test randomness with
/// no dependencies.
#[derive(Debug, Clone)]
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Class IRIs the random-graph generator types individuals with.
pub const GEN_CLASSES: &[&str] = &[
    vocab::BELIEF,
    vocab::DESIRE,
    vocab::INTENTION,
    vocab::WORLD_STATE,
    vocab::AGENT,
    vocab::MENTAL_PROCESS,
    vocab::BELIEF_PROCESS,
    vocab::DESIRE_PROCESS,
    vocab::INTENTION_PROCESS,
    vocab::PLANNING,
    vocab::JUSTIFICATION,
    vocab::GOAL,
    vocab::PLAN,
    vocab::TASK,
    vocab::TIME_INSTANT,
    vocab::TIME_INTERVAL,
    vocab::MENTAL_ENTITY,
    vocab::MENTAL_STATE,
];

/// Property IRIs the generator draws edges from (one stray included).
pub const GEN_PROPERTIES: &[&str] = &[
    vocab::GENERATES,
    vocab::MODIFIES,
    vocab::SUPPRESSES,
    vocab::AFFECTS,
    vocab::MOTIVATES,
    vocab::SUPPORTS,
    vocab::FULFILS,
    vocab::FULFILLS,
    vocab::REFERS_TO,
    vocab::HAS_PART,
    vocab::FOLLOWS,
    vocab::PRECEDES,
    vocab::HAS_MENTAL_STATE,
    vocab::IS_BELIEF_OF,
    vocab::TRIGGERS,
    vocab::IS_TRIGGERED_BY,
    vocab::JUSTIFIES,
    vocab::SPECIFIES,
    vocab::ADDRESSES,
    vocab::DEFINES,
    vocab::HAS_COMPONENT,
    vocab::BEGINS_WITH,
    vocab::ENDS_WITH,
    vocab::AT_TIME,
    vocab::HAS_VALIDITY,
    vocab::HAS_START_TIME,
    vocab::HAS_END_TIME,
    vocab::PERCEIVES,
    vocab::COGNISES,
    vocab::REASONS_UPON,
    vocab::IS_PROCESSED_BY,
    "https://w3id.org/fossr/ontology/bdi/occursAt",
];

const GEN_DATETIMES: &[&str] = &[
    "2025-01-01T00:00:00Z",
    "2025-03-15T08:30:00Z",
    "2025-06-30T12:00:00Z",
    "2025-11-01T09:00:00Z",
];

pub fn individual(n: u64) -> Iri {
    Iri::known(&alloc::format!("urn:i:n{n}"))
}

/// A random instance graph over the registry vocabulary: type assertions,
/// property edges, and the occasional dateTime value.
pub fn random_instance_graph(rng: &mut TestRng, max_triples: usize, pool: u64) -> Graph {
    let mut g = Graph::new();
    let n = rng.below(max_triples as u64 + 1);
    for _ in 0..n {
        let subject = individual(rng.below(pool));
        let roll = rng.below(100);
        let triple = if roll < 40 {
            Triple::new(
                subject,
                Iri::known(vocab::RDF_TYPE),
                Term::Iri(Iri::known(rng.pick(GEN_CLASSES))),
            )
        } else if roll < 95 {
            Triple::new(
                subject,
                Iri::known(rng.pick(GEN_PROPERTIES)),
                Term::Iri(individual(rng.below(pool))),
            )
        } else {
            Triple::new(
                subject,
                Iri::known(vocab::HAS_TIME_VALUE),
                Term::Literal(Literal::typed(
                    *rng.pick(GEN_DATETIMES),
                    Iri::known(vocab::XSD_DATETIME),
                )),
            )
        };
        g.insert(triple);
    }
    g
}

/// Brute-force entailment closure: round-based full rescans using complete
/// super-closures and all-pairs transitive joins. Shares nothing with the
/// worklist materializer it checks.
pub fn brute_force_closure(g: &Graph, reg: &SchemaRegistry) -> Graph {
    let type_iri = Iri::known(vocab::RDF_TYPE);
    let mut out: BTreeSet<Triple> = g.iter().collect();
    loop {
        let snapshot: Vec<Triple> = out.iter().cloned().collect();
        let mut fresh: Vec<Triple> = Vec::new();

        for t in &snapshot {
            if t.predicate == type_iri {
                if let Term::Iri(class) = &t.object {
                    for sup in reg.superclass_closure(class) {
                        fresh.push(Triple::new(t.subject.clone(), type_iri.clone(), Term::Iri(sup)));
                    }
                }
                continue;
            }
            for sup in reg.superproperty_closure(&t.predicate) {
                fresh.push(Triple::new(t.subject.clone(), sup, t.object.clone()));
            }
            let Some(desc) = reg.property(&t.predicate) else {
                continue;
            };
            if let Some(inverse) = &desc.inverse {
                if let Some(object) = t.object.as_resource() {
                    fresh.push(Triple::new(
                        object,
                        inverse.clone(),
                        Term::from(t.subject.clone()),
                    ));
                }
            }
            if let Some(domain) = &desc.domain {
                fresh.push(Triple::new(
                    t.subject.clone(),
                    type_iri.clone(),
                    Term::Iri(domain.clone()),
                ));
            }
            if desc.kind == PropertyKind::Object {
                if let (Some(range), Some(object)) = (&desc.range, t.object.as_resource()) {
                    fresh.push(Triple::new(object, type_iri.clone(), Term::Iri(range.clone())));
                }
            }
        }

        for a in &snapshot {
            let Some(desc) = reg.property(&a.predicate) else {
                continue;
            };
            if !desc.transitive {
                continue;
            }
            for b in &snapshot {
                if b.predicate == a.predicate && Term::from(b.subject.clone()) == a.object {
                    fresh.push(Triple::new(
                        a.subject.clone(),
                        a.predicate.clone(),
                        b.object.clone(),
                    ));
                }
            }
        }

        let before = out.len();
        out.extend(fresh);
        if out.len() == before {
            break;
        }
    }
    let mut closed = Graph::new();
    closed.adopt_prefixes(g);
    closed.extend(out);
    closed
}

/// The term universe of a graph: everything occurring in subject or object
/// position.
pub fn term_universe(g: &Graph) -> Vec<Term> {
    let mut universe = BTreeSet::new();
    for t in g.iter() {
        universe.insert(Term::from(t.subject.clone()));
        universe.insert(t.object.clone());
    }
    universe.into_iter().collect()
}

fn pattern_matches_ground(g: &Graph, pattern: &Pattern, assignment: &Binding) -> bool {
    let resolve = |slot: &RuleTerm| -> Option<Term> {
        match slot {
            RuleTerm::Constant(t) => Some(t.clone()),
            RuleTerm::Var(v) => assignment.get(v).cloned(),
        }
    };
    let (Some(s), Some(p), Some(o)) = (
        resolve(&pattern.subject),
        resolve(&pattern.predicate),
        resolve(&pattern.object),
    ) else {
        return false;
    };
    let Some(subject) = s.as_resource() else {
        return false;
    };
    let Term::Iri(predicate) = p else {
        return false;
    };
    g.contains(&Triple::new(subject, predicate, o))
}

fn free_vars(patterns: &[Pattern], seed: &Binding) -> Vec<String> {
    let mut vars = BTreeSet::new();
    for p in patterns {
        for slot in [&p.subject, &p.predicate, &p.object] {
            if let RuleTerm::Var(v) = slot {
                if !seed.contains_key(v) {
                    vars.insert(v.clone());
                }
            }
        }
    }
    vars.into_iter().collect()
}

/// Exhaustive union-of-conjunctive-queries evaluation: every assignment of
/// every free variable to every term in the universe is tried.
pub fn brute_force_union(
    g: &Graph,
    arms: &[Vec<Pattern>],
    projection: &[&str],
    seed: &Binding,
) -> BTreeSet<Vec<Term>> {
    let universe = term_universe(g);
    let mut rows = BTreeSet::new();
    for arm in arms {
        let vars = free_vars(arm, seed);
        let mut counters = alloc::vec![0usize; vars.len()];
        loop {
            let mut assignment = seed.clone();
            for (var, &idx) in vars.iter().zip(counters.iter()) {
                if universe.is_empty() {
                    break;
                }
                assignment.insert(var.clone(), universe[idx].clone());
            }
            if (universe.is_empty() && vars.is_empty() || !universe.is_empty())
                && arm.iter().all(|p| pattern_matches_ground(g, p, &assignment))
            {
                if let Some(row) = projection
                    .iter()
                    .map(|v| assignment.get(*v).cloned())
                    .collect::<Option<Vec<Term>>>()
                {
                    rows.insert(row);
                }
            }
            // Odometer over the universe.
            let mut digit = 0;
            loop {
                if digit == counters.len() || universe.is_empty() {
                    return if digit == 0 && universe.is_empty() {
                        rows
                    } else if digit == counters.len() && counters.is_empty() {
                        rows
                    } else if digit == counters.len() {
                        break;
                    } else {
                        rows
                    };
                }
                counters[digit] += 1;
                if counters[digit] < universe.len() {
                    break;
                }
                counters[digit] = 0;
                digit += 1;
            }
            if counters.iter().all(|&c| c == 0) && vars.is_empty() {
                break;
            }
            if counters.iter().all(|&c| c == 0) && !vars.is_empty() {
                // Odometer wrapped: every assignment visited.
                break;
            }
        }
    }
    rows
}

/// All permutations of the component tasks of a plan that satisfy the
/// follows/begins/ends constraints on a materialized graph. The sequence
/// answer is sound iff exactly one permutation survives.
pub fn valid_task_orders(g: &Graph, plan: &Iri) -> Vec<Vec<Iri>> {
    let subject = Resource::Iri(plan.clone());
    let mut tasks: Vec<Iri> = g
        .objects(&subject, vocab::HAS_COMPONENT)
        .into_iter()
        .filter_map(|t| match t {
            Term::Iri(iri) => Some(iri),
            _ => None,
        })
        .collect();
    tasks.sort();
    tasks.dedup();
    let begins = g.objects(&subject, vocab::BEGINS_WITH);
    let ends = g.objects(&subject, vocab::ENDS_WITH);
    let follows = Iri::known(vocab::FOLLOWS);
    let mut valid = Vec::new();
    permute(&mut tasks.clone(), 0, &mut |perm: &[Iri]| {
        let chained = perm.windows(2).all(|pair| {
            g.contains(&Triple::new(
                pair[1].clone(),
                follows.clone(),
                Term::Iri(pair[0].clone()),
            ))
        });
        let starts_ok = begins.is_empty()
            || perm
                .first()
                .is_some_and(|f| begins.contains(&Term::Iri(f.clone())));
        let ends_ok = ends.is_empty()
            || perm
                .last()
                .is_some_and(|l| ends.contains(&Term::Iri(l.clone())));
        if chained && starts_ok && ends_ok {
            valid.push(perm.to_vec());
        }
    });
    valid
}

fn permute<T: Clone>(items: &mut [T], k: usize, visit: &mut impl FnMut(&[T])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn graph_nodes(g: &Graph) -> BTreeSet<Resource> {
    let mut nodes = BTreeSet::new();
    for t in g.iter() {
        nodes.insert(t.subject.clone());
        if let Some(r) = t.object.as_resource() {
            nodes.insert(r);
        }
    }
    nodes
}

fn apply_mapping(g: &Graph, mapping: &BTreeMap<Resource, Resource>) -> BTreeSet<Triple> {
    g.iter()
        .map(|t| {
            let subject = mapping.get(&t.subject).cloned().unwrap_or(t.subject);
            let object = match t.object.as_resource() {
                Some(r) => match mapping.get(&r) {
                    Some(mapped) => Term::from(mapped.clone()),
                    None => t.object,
                },
                None => t.object,
            };
            Triple::new(subject, t.predicate, object)
        })
        .collect()
}

/// Graph isomorphism modulo free nodes: nodes present in both graphs must map
/// to themselves; nodes unique to one side may be bijected onto nodes unique
/// to the other. Suitable for comparing run outputs (minted individuals)
/// against published structures (authored individuals).
pub fn isomorphic_modulo_free(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let nodes_a = graph_nodes(a);
    let nodes_b = graph_nodes(b);
    let free_a: Vec<Resource> = nodes_a.difference(&nodes_b).cloned().collect();
    let free_b: Vec<Resource> = nodes_b.difference(&nodes_a).cloned().collect();
    if free_a.len() != free_b.len() {
        return false;
    }
    let target: BTreeSet<Triple> = b.iter().collect();
    let mut found = false;
    permute(&mut free_b.clone(), 0, &mut |perm: &[Resource]| {
        if found {
            return;
        }
        let mapping: BTreeMap<Resource, Resource> = free_a
            .iter()
            .cloned()
            .zip(perm.iter().cloned())
            .collect();
        if apply_mapping(a, &mapping) == target {
            found = true;
        }
    });
    found
}

/// The deliberative-core subgraph used by the structural-equivalence check:
/// justifies/specifies/addresses/hasComponent/fulfils edges plus the types of
/// the entities incident to them.
pub fn deliberative_core(g: &Graph) -> Graph {
    const CORE_PREDICATES: &[&str] = &[
        vocab::JUSTIFIES,
        vocab::SPECIFIES,
        vocab::ADDRESSES,
        vocab::HAS_COMPONENT,
        vocab::FULFILS,
    ];
    const CORE_CLASSES: &[&str] = &[
        vocab::JUSTIFICATION,
        vocab::INTENTION,
        vocab::PLAN,
        vocab::GOAL,
        vocab::TASK,
        vocab::DESIRE,
    ];
    let mut core = Graph::new();
    let mut incident = BTreeSet::new();
    for predicate in CORE_PREDICATES {
        for t in g.matching(
            &crate::rdf::TriplePattern::any().with_predicate(Iri::known(predicate)),
        ) {
            incident.insert(t.subject.clone());
            if let Some(r) = t.object.as_resource() {
                incident.insert(r);
            }
            core.insert(t);
        }
    }
    for node in incident {
        for class in CORE_CLASSES {
            if g.has_type(&node, class) {
                core.insert(Triple::new(
                    node.clone(),
                    Iri::known(vocab::RDF_TYPE),
                    Term::Iri(Iri::known(class)),
                ));
            }
        }
    }
    core
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::load_schema;

    #[test]
    fn rng_is_deterministic() {
        let mut a = TestRng::new(42);
        let mut b = TestRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn brute_closure_agrees_on_a_tiny_case() {
        let reg = load_schema();
        let mut g = Graph::new();
        g.insert(Triple::new(
            Iri::known("urn:i:p"),
            Iri::known(vocab::GENERATES),
            Term::Iri(Iri::known("urn:i:b")),
        ));
        let brute = brute_force_closure(&g, &reg);
        let fast = crate::schema::materialize(&g, &reg);
        assert!(brute.triples_eq(&fast));
    }

    #[test]
    fn isomorphism_identifies_renamed_individuals() {
        let mut a = Graph::new();
        a.insert(Triple::new(
            Iri::known("urn:free:x"),
            Iri::known(vocab::JUSTIFIES),
            Term::Iri(Iri::known("urn:shared:s")),
        ));
        let mut b = Graph::new();
        b.insert(Triple::new(
            Iri::known("urn:other:y"),
            Iri::known(vocab::JUSTIFIES),
            Term::Iri(Iri::known("urn:shared:s")),
        ));
        assert!(isomorphic_modulo_free(&a, &b));
        // A structural difference is caught.
        b.insert(Triple::new(
            Iri::known("urn:other:y"),
            Iri::known(vocab::SPECIFIES),
            Term::Iri(Iri::known("urn:shared:s")),
        ));
        assert!(!isomorphic_modulo_free(&a, &b));
    }

    #[test]
    fn brute_union_enumerates_simple_patterns() {
        let mut g = Graph::new();
        g.insert(Triple::new(
            Iri::known("urn:i:b"),
            Iri::known(vocab::MOTIVATES),
            Term::Iri(Iri::known("urn:i:d")),
        ));
        let arms = alloc::vec![alloc::vec![Pattern::new(
            RuleTerm::var("b"),
            RuleTerm::iri(vocab::MOTIVATES),
            RuleTerm::var("d"),
        )]];
        let rows = brute_force_union(&g, &arms, &["b"], &Binding::new());
        assert_eq!(rows.len(), 1);
        assert!(rows.contains(&alloc::vec![Term::Iri(Iri::known("urn:i:b"))]));
    }
}
