//! Deterministic Turtle serializer.
//!
//! Output is a pure function of the triple set and prefix map: prefixes are
//! sorted lexicographically, subjects sorted, predicate-object lists grouped
//! with `;` / `,`, `rdf:type` rendered first as `a`. Long strings are
//! normalized to escaped short strings, so `parse(serialize(g))` reproduces
//! `g` exactly as a triple set.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Graph, Iri, Literal, Resource, Term};
use crate::vocab;

/// Serializes a graph. The emitted prefix block is the standard block merged
/// with the graph's own prefixes (the graph wins on collisions).
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut prefixes: BTreeMap<String, String> = vocab::STANDARD_PREFIXES
        .iter()
        .map(|(p, ns)| (String::from(*p), String::from(*ns)))
        .collect();
    for (p, ns) in graph.prefixes() {
        prefixes.insert(p.clone(), ns.clone());
    }

    // Longest-namespace-first compaction table; ties break on prefix name.
    let mut by_namespace: Vec<(&str, &str)> = prefixes
        .iter()
        .map(|(p, ns)| (ns.as_str(), p.as_str()))
        .collect();
    by_namespace.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.cmp(b)));

    let mut out = String::new();
    for (prefix, ns) in &prefixes {
        out.push_str("@prefix ");
        out.push_str(prefix);
        out.push_str(": <");
        out.push_str(ns);
        out.push_str("> .\n");
    }

    // Graph iteration is (s, p, o)-sorted, which groups subjects and, inside
    // them, predicates; `rdf:type` lands first in practice because its IRI
    // sorts ahead of the vocabulary namespaces used here.
    let mut current_s: Option<Resource> = None;
    let mut current_p: Option<Iri> = None;
    for triple in graph.iter() {
        if current_s.as_ref() != Some(&triple.subject) {
            if current_s.is_some() {
                out.push_str(" .\n");
            }
            out.push('\n');
            out.push_str(&render_resource(&triple.subject, &by_namespace));
            current_s = Some(triple.subject.clone());
            current_p = None;
        }
        if current_p.as_ref() == Some(&triple.predicate) {
            out.push_str(" , ");
        } else {
            if current_p.is_some() {
                out.push_str(" ;\n    ");
            } else {
                out.push(' ');
            }
            out.push_str(&render_predicate(&triple.predicate, &by_namespace));
            out.push(' ');
            current_p = Some(triple.predicate.clone());
        }
        out.push_str(&render_term(&triple.object, &by_namespace));
    }
    if current_s.is_some() {
        out.push_str(" .\n");
    }
    out
}

fn render_predicate(p: &Iri, table: &[(&str, &str)]) -> String {
    if p.as_str() == vocab::RDF_TYPE {
        return String::from("a");
    }
    render_iri(p, table)
}

fn render_resource(r: &Resource, table: &[(&str, &str)]) -> String {
    match r {
        Resource::Iri(iri) => render_iri(iri, table),
        Resource::Blank(b) => alloc::format!("_:{}", b.0),
    }
}

fn render_term(t: &Term, table: &[(&str, &str)]) -> String {
    match t {
        Term::Iri(iri) => render_iri(iri, table),
        Term::Blank(b) => alloc::format!("_:{}", b.0),
        Term::Literal(l) => render_literal(l, table),
    }
}

fn render_iri(iri: &Iri, table: &[(&str, &str)]) -> String {
    for (ns, prefix) in table {
        if let Some(local) = iri.local_in(ns) {
            if pn_local_safe(local) {
                return alloc::format!("{prefix}:{local}");
            }
        }
    }
    alloc::format!("<{}>", iri.as_str())
}

fn pn_local_safe(local: &str) -> bool {
    local
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn render_literal(l: &Literal, table: &[(&str, &str)]) -> String {
    let mut s = String::from("\"");
    for c in l.lexical().chars() {
        match c {
            '\\' => s.push_str("\\\\"),
            '"' => s.push_str("\\\""),
            '\n' => s.push_str("\\n"),
            '\r' => s.push_str("\\r"),
            '\t' => s.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                s.push_str(&alloc::format!("\\u{:04X}", c as u32));
            }
            c => s.push(c),
        }
    }
    s.push('"');
    if let Some(tag) = l.language() {
        s.push('@');
        s.push_str(tag);
    } else if l.datatype().as_str() != vocab::XSD_STRING {
        s.push_str("^^");
        s.push_str(&render_iri(l.datatype(), table));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::{parse_turtle, Graph, Triple};
    use super::*;

    #[test]
    fn empty_graph_serializes_to_standard_prefix_block() {
        let text = serialize_turtle(&Graph::new());
        for (prefix, ns) in vocab::STANDARD_PREFIXES {
            assert!(text.contains(&alloc::format!("@prefix {prefix}: <{ns}> .")));
        }
        assert_eq!(text.lines().count(), vocab::STANDARD_PREFIXES.len());
        assert!(parse_turtle(&text).unwrap().is_empty());
    }

    #[test]
    fn serialization_is_insertion_order_independent() {
        let a = Triple::new(
            Iri::new("urn:x:a").unwrap(),
            Iri::new("urn:x:p").unwrap(),
            Term::Iri(Iri::new("urn:x:1").unwrap()),
        );
        let b = Triple::new(
            Iri::new("urn:x:b").unwrap(),
            Iri::new("urn:x:p").unwrap(),
            Term::Iri(Iri::new("urn:x:2").unwrap()),
        );
        let mut g1 = Graph::new();
        g1.insert(a.clone());
        g1.insert(b.clone());
        let mut g2 = Graph::new();
        g2.insert(b);
        g2.insert(a);
        assert_eq!(serialize_turtle(&g1), serialize_turtle(&g2));
    }

    #[test]
    fn round_trip_preserves_triples_exactly() {
        let text = "@prefix ex: <urn:x:> .\n\
                    ex:s a ex:K ;\n\
                        ex:p \"esc\\\"aped\\nline\" , \"plain\"@en ;\n\
                        ex:q \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n\
                    _:b0 ex:p ex:s .\n";
        let g = parse_turtle(text).unwrap();
        let emitted = serialize_turtle(&g);
        let back = parse_turtle(&emitted).unwrap();
        assert!(g.triples_eq(&back));
        // Stability: a second round trip is byte-identical.
        assert_eq!(emitted, serialize_turtle(&back));
    }
}
