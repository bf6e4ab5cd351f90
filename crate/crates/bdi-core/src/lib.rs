//! Core engine for an RDF-backed belief–desire–intention (BDI) mental-state store.
//!
//! The crate is organised as a pipeline over a single substrate, the RDF
//! [`rdf::Graph`]:
//!
//! * [`rdf`] — triples, a Turtle (subset) parser/serializer, and SPO/POS/OSP
//!   indexed storage with pattern matching.
//! * [`schema`] — the BDI class/property axioms as inspectable registry data,
//!   RDFS-plus materialization with a replayable derivation log, and a
//!   closed-world validator.
//! * [`temporal`] — `xsd:dateTime` instants, half-open validity intervals, and
//!   point-in-time queries.
//! * [`mental`] — a typed, provenance-preserving session API for creating and
//!   evolving beliefs, desires, intentions, processes, and justifications.
//! * [`deliberation`] — the production-rule engine: `HEAD / CONDITIONALS >>
//!   TAIL` rules over ground belief atoms, a deterministic match-resolve-act
//!   cycle, and the triples-to-beliefs-to-triples round trip.
//! * [`cq`] — the fixed catalogue of eighteen competency-question query
//!   templates evaluated against a materialized graph.
//!
//! The crate is `no_std` (alloc only): nothing in here performs IO, reads a
//! wall clock, or draws randomness, so identical inputs always produce
//! identical outputs. File handling, CLI, and output formats live in the
//! companion `bdi-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cq;
pub mod deliberation;
pub mod mental;
pub mod rdf;
pub mod schema;
pub mod temporal;
pub mod vocab;
