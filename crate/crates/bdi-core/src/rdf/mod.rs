//! RDF terms, triples, and an indexed in-memory graph with a Turtle-subset
//! parser and a deterministic serializer.
//!
//! The graph keeps three permutation indexes (SPO, POS, OSP) in lockstep so
//! any pattern shape resolves without a full scan. Triples are a set: inserts
//! are idempotent, and [`Graph::matching`] always returns results in sorted
//! (subject, predicate, object) order regardless of which index served them.

mod parser;
mod writer;

pub use parser::parse_turtle;
pub use writer::serialize_turtle;

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::vocab;

/// A parse or term-construction failure. All are fatal: no partial graph is
/// ever returned.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RdfError {
    #[error("line {line}, column {col}: syntax error: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("line {line}, column {col}: undefined prefix `{prefix}:`")]
    UndefinedPrefix { line: u32, col: u32, prefix: String },
    #[error("line {line}, column {col}: malformed IRI <{iri}>")]
    MalformedIri { line: u32, col: u32, iri: String },
    #[error("invalid IRI `{0}`: must be absolute, non-empty, and whitespace-free")]
    InvalidIri(String),
    #[error("language tag on a literal whose datatype is not rdf:langString")]
    BadLanguageTag,
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    /// Validates and wraps an IRI string: non-empty, no whitespace, and a
    /// scheme separator `:` must be present.
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if value.is_empty()
            || value.chars().any(char::is_whitespace)
            || !value.contains(':')
        {
            return Err(RdfError::InvalidIri(value));
        }
        Ok(Iri(value))
    }

    /// Wraps a compile-time constant from [`crate::vocab`] without checks.
    pub fn known(value: &str) -> Self {
        debug_assert!(!value.is_empty() && value.contains(':'));
        Iri(value.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the IRI lives in the given namespace.
    pub fn in_namespace(&self, ns: &str) -> bool {
        self.0.starts_with(ns)
    }

    /// Local part relative to a namespace, if the IRI lives in it.
    pub fn local_in(&self, ns: &str) -> Option<&str> {
        self.0.strip_prefix(ns)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// A blank node with a stable, skolemized local id (`b0`, `b1`, ...).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(pub String);

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// An RDF literal. Comparison is by (lexical, datatype, language); there is no
/// value-space canonicalization, so `"1"` and `"01"` are distinct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain string literal (`xsd:string`).
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::known(vocab::XSD_STRING),
            language: None,
        }
    }

    /// A language-tagged string (`rdf:langString`).
    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::known(vocab::RDF_LANG_STRING),
            language: Some(tag.into()),
        }
    }

    /// A typed literal.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// Subject position: an IRI or a blank node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Resource {
    Iri(Iri),
    Blank(BlankNode),
}

impl Resource {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Resource::Iri(iri) => Some(iri),
            Resource::Blank(_) => None,
        }
    }
}

impl From<Iri> for Resource {
    fn from(iri: Iri) -> Self {
        Resource::Iri(iri)
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resource::Iri(i) => i.fmt(f),
            Resource::Blank(b) => b.fmt(f),
        }
    }
}

/// Object position: an IRI, a blank node, or a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_resource(&self) -> Option<Resource> {
        match self {
            Term::Iri(i) => Some(Resource::Iri(i.clone())),
            Term::Blank(b) => Some(Resource::Blank(b.clone())),
            Term::Literal(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Resource> for Term {
    fn from(r: Resource) -> Self {
        match r {
            Resource::Iri(i) => Term::Iri(i),
            Resource::Blank(b) => Term::Blank(b),
        }
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Blank(b) => b.fmt(f),
            Term::Literal(l) => {
                write!(f, "{:?}", l.lexical)?;
                if let Some(tag) = &l.language {
                    write!(f, "@{tag}")?;
                } else if l.datatype.as_str() != vocab::XSD_STRING {
                    write!(f, "^^{}", l.datatype)?;
                }
                Ok(())
            }
        }
    }
}

/// A single statement. The predicate is always an IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Resource,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(
        subject: impl Into<Resource>,
        predicate: Iri,
        object: impl Into<Term>,
    ) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A match pattern: each position is either bound or a wildcard (`None`).
#[derive(Debug, Clone, Default)]
pub struct TriplePattern {
    pub subject: Option<Resource>,
    pub predicate: Option<Iri>,
    pub object: Option<Term>,
}

impl TriplePattern {
    pub fn any() -> Self {
        TriplePattern::default()
    }

    pub fn with_subject(mut self, s: impl Into<Resource>) -> Self {
        self.subject = Some(s.into());
        self
    }

    pub fn with_predicate(mut self, p: Iri) -> Self {
        self.predicate = Some(p);
        self
    }

    pub fn with_object(mut self, o: impl Into<Term>) -> Self {
        self.object = Some(o.into());
        self
    }
}

type SpoIndex = BTreeMap<Resource, BTreeMap<Iri, BTreeSet<Term>>>;
type PosIndex = BTreeMap<Iri, BTreeMap<Term, BTreeSet<Resource>>>;
type OspIndex = BTreeMap<Term, BTreeMap<Resource, BTreeSet<Iri>>>;

/// A set of triples with three permutation indexes and a prefix map.
///
/// Values are safe to share across threads once built; all mutation goes
/// through `&mut self`.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    spo: SpoIndex,
    pos: PosIndex,
    osp: OspIndex,
    prefixes: BTreeMap<String, String>,
    len: usize,
}

impl Graph {
    /// An empty graph with an empty prefix map.
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a triple into all three indexes. Returns `false` when the
    /// triple was already present (set semantics).
    pub fn insert(&mut self, t: Triple) -> bool {
        let Triple {
            subject,
            predicate,
            object,
        } = t;
        let fresh = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if !fresh {
            return false;
        }
        self.pos
            .entry(predicate.clone())
            .or_default()
            .entry(object.clone())
            .or_default()
            .insert(subject.clone());
        self.osp
            .entry(object)
            .or_default()
            .entry(subject)
            .or_default()
            .insert(predicate);
        self.len += 1;
        true
    }

    /// Removes a triple from all three indexes. Returns `false` when absent.
    pub fn remove(&mut self, t: &Triple) -> bool {
        let removed = prune3(&mut self.spo, &t.subject, &t.predicate, &t.object);
        if !removed {
            return false;
        }
        prune3(&mut self.pos, &t.predicate, &t.object, &t.subject);
        prune3(&mut self.osp, &t.object, &t.subject, &t.predicate);
        self.len -= 1;
        true
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.spo
            .get(&t.subject)
            .and_then(|po| po.get(&t.predicate))
            .is_some_and(|os| os.contains(&t.object))
    }

    /// All triples in sorted (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, po)| {
            po.iter().flat_map(move |(p, os)| {
                os.iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    /// Exactly the triples matching all bound pattern positions, in sorted
    /// order. The index serving the scan is chosen from the bound positions.
    pub fn matching(&self, pattern: &TriplePattern) -> Vec<Triple> {
        let mut out = match (&pattern.subject, &pattern.predicate, &pattern.object) {
            (Some(s), Some(p), Some(o)) => {
                let t = Triple::new(s.clone(), p.clone(), o.clone());
                if self.contains(&t) {
                    alloc::vec![t]
                } else {
                    Vec::new()
                }
            }
            (Some(s), Some(p), None) => self
                .spo
                .get(s)
                .and_then(|po| po.get(p))
                .map(|os| {
                    os.iter()
                        .map(|o| Triple::new(s.clone(), p.clone(), o.clone()))
                        .collect()
                })
                .unwrap_or_default(),
            (Some(s), None, None) => self
                .spo
                .get(s)
                .map(|po| {
                    po.iter()
                        .flat_map(|(p, os)| {
                            os.iter()
                                .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()))
                        })
                        .collect()
                })
                .unwrap_or_default(),
            (None, Some(p), Some(o)) => self
                .pos
                .get(p)
                .and_then(|os| os.get(o))
                .map(|ss| {
                    ss.iter()
                        .map(|s| Triple::new(s.clone(), p.clone(), o.clone()))
                        .collect()
                })
                .unwrap_or_default(),
            (None, Some(p), None) => self
                .pos
                .get(p)
                .map(|os| {
                    os.iter()
                        .flat_map(|(o, ss)| {
                            ss.iter()
                                .map(move |s| Triple::new(s.clone(), p.clone(), o.clone()))
                        })
                        .collect()
                })
                .unwrap_or_default(),
            (None, None, Some(o)) => self
                .osp
                .get(o)
                .map(|sp| {
                    sp.iter()
                        .flat_map(|(s, ps)| {
                            ps.iter()
                                .map(move |p| Triple::new(s.clone(), p.clone(), o.clone()))
                        })
                        .collect()
                })
                .unwrap_or_default(),
            (Some(s), None, Some(o)) => self
                .osp
                .get(o)
                .and_then(|sp| sp.get(s))
                .map(|ps| {
                    ps.iter()
                        .map(|p| Triple::new(s.clone(), p.clone(), o.clone()))
                        .collect()
                })
                .unwrap_or_default(),
            (None, None, None) => self.iter().collect(),
        };
        out.sort();
        out
    }

    /// Objects of `(subject, predicate, ·)` in sorted order.
    pub fn objects(&self, subject: &Resource, predicate: &str) -> Vec<Term> {
        self.spo
            .get(subject)
            .and_then(|po| po.get(&Iri::known(predicate)))
            .map(|os| os.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Subjects of `(·, predicate, object)` in sorted order.
    pub fn subjects(&self, predicate: &str, object: &Term) -> Vec<Resource> {
        self.pos
            .get(&Iri::known(predicate))
            .and_then(|os| os.get(object))
            .map(|ss| ss.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// The asserted `rdf:type` objects of an individual, as IRIs.
    pub fn types_of(&self, subject: &Resource) -> Vec<Iri> {
        self.objects(subject, vocab::RDF_TYPE)
            .into_iter()
            .filter_map(|t| match t {
                Term::Iri(iri) => Some(iri),
                _ => None,
            })
            .collect()
    }

    /// True when `(subject, rdf:type, class)` is asserted.
    pub fn has_type(&self, subject: &Resource, class: &str) -> bool {
        self.contains(&Triple::new(
            subject.clone(),
            Iri::known(vocab::RDF_TYPE),
            Term::Iri(Iri::known(class)),
        ))
    }

    /// All distinct subjects, in sorted order.
    pub fn subjects_iter(&self) -> impl Iterator<Item = &Resource> {
        self.spo.keys()
    }

    /// All distinct predicates, in sorted order.
    pub fn predicates_iter(&self) -> impl Iterator<Item = &Iri> {
        self.pos.keys()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    /// Copies `other`'s prefixes in, keeping existing entries on conflicts.
    pub fn adopt_prefixes(&mut self, other: &Graph) {
        for (p, ns) in &other.prefixes {
            self.prefixes.entry(p.clone()).or_insert_with(|| ns.clone());
        }
    }

    /// Expands a `prefix:local` name against this graph's prefix map plus the
    /// standard block. Useful for resolving user-supplied names.
    pub fn expand(&self, name: &str) -> Option<Iri> {
        let (prefix, local) = name.split_once(':')?;
        let ns = self.prefixes.get(prefix).map(String::as_str).or_else(|| {
            vocab::STANDARD_PREFIXES
                .iter()
                .find(|(p, _)| *p == prefix)
                .map(|(_, ns)| *ns)
        })?;
        Iri::new(alloc::format!("{ns}{local}")).ok()
    }

    /// Triple-set equality, ignoring prefix maps.
    pub fn triples_eq(&self, other: &Graph) -> bool {
        self.len == other.len && self.spo == other.spo
    }

    /// True when every triple of `self` is in `other`.
    pub fn subset_of(&self, other: &Graph) -> bool {
        self.iter().all(|t| other.contains(&t))
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

fn prune3<A, B, C>(index: &mut BTreeMap<A, BTreeMap<B, BTreeSet<C>>>, a: &A, b: &B, c: &C) -> bool
where
    A: Ord,
    B: Ord,
    C: Ord,
{
    let Some(inner) = index.get_mut(a) else {
        return false;
    };
    let Some(leaf) = inner.get_mut(b) else {
        return false;
    };
    let removed = leaf.remove(c);
    if leaf.is_empty() {
        inner.remove(b);
    }
    if inner.is_empty() {
        index.remove(a);
    }
    removed
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), Term::Iri(iri(o)))
    }

    #[test]
    fn iri_invariants() {
        assert!(Iri::new("").is_err());
        assert!(Iri::new("no-scheme").is_err());
        assert!(Iri::new("http://x y").is_err());
        assert!(Iri::new("urn:ok").is_ok());
    }

    #[test]
    fn insert_is_idempotent() {
        let mut g = Graph::new();
        assert!(g.insert(t("urn:s", "urn:p", "urn:o")));
        assert!(!g.insert(t("urn:s", "urn:p", "urn:o")));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn insert_into_empty_graph_gives_size_one() {
        let mut g = Graph::new();
        g.insert(t("urn:s", "urn:p", "urn:o"));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn triple_reachable_via_each_index() {
        let mut g = Graph::new();
        let triple = t("urn:s", "urn:p", "urn:o");
        g.insert(triple.clone());
        let by_s = g.matching(&TriplePattern::any().with_subject(triple.subject.clone()));
        let by_p = g.matching(&TriplePattern::any().with_predicate(triple.predicate.clone()));
        let by_o = g.matching(&TriplePattern::any().with_object(triple.object.clone()));
        assert_eq!(by_s, vec![triple.clone()]);
        assert_eq!(by_p, vec![triple.clone()]);
        assert_eq!(by_o, vec![triple]);
    }

    #[test]
    fn removal_clears_all_indexes() {
        let mut g = Graph::new();
        let triple = t("urn:s", "urn:p", "urn:o");
        g.insert(triple.clone());
        assert!(g.remove(&triple));
        assert!(!g.remove(&triple));
        assert_eq!(g.len(), 0);
        assert!(g
            .matching(&TriplePattern::any().with_subject(triple.subject.clone()))
            .is_empty());
        assert!(g
            .matching(&TriplePattern::any().with_predicate(triple.predicate.clone()))
            .is_empty());
        assert!(g
            .matching(&TriplePattern::any().with_object(triple.object.clone()))
            .is_empty());
    }

    #[test]
    fn wildcard_match_on_empty_graph_is_empty() {
        let g = Graph::new();
        assert!(g.matching(&TriplePattern::any()).is_empty());
    }

    #[test]
    fn match_results_are_sorted_and_filtered() {
        let mut g = Graph::new();
        g.insert(t("urn:b", "urn:p", "urn:2"));
        g.insert(t("urn:a", "urn:p", "urn:1"));
        g.insert(t("urn:a", "urn:q", "urn:3"));
        let all = g.matching(&TriplePattern::any());
        assert_eq!(all.len(), 3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let p_only = g.matching(&TriplePattern::any().with_predicate(iri("urn:p")));
        assert_eq!(p_only.len(), 2);
    }

    #[test]
    fn graph_is_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<Graph>();
    }
}
