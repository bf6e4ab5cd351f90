//! Turtle-subset parser.
//!
//! Supported: `@prefix` declarations, `a`, predicate lists with `;`, object
//! lists with `,`, IRI refs, prefixed names, blank node labels, plain / typed
//! / language-tagged literals, `"""` long strings, and `#` comments. RDF
//! collections, `[...]` property lists, `@base`, and numeric shorthand are
//! outside the subset and rejected with a syntax error.
//!
//! Blank node labels are skolemized to stable local ids by keeping the label
//! itself as the node id: labels are already constrained to a safe alphabet,
//! ids never depend on statement order, and `parse(serialize(g))` reproduces
//! `g` exactly, blank nodes included.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{BlankNode, Graph, Iri, Literal, RdfError, Resource, Term, Triple};

/// Parses a Turtle document into a graph. All statements are expanded to
/// absolute IRIs; the prefix map is retained on the graph; duplicate triples
/// collapse. Any error is fatal: no partial graph is returned.
pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let tokens = lex(text)?;
    Parser {
        tokens,
        at: 0,
        graph: Graph::new(),
    }
    .document()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    PrefixKeyword,
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    A,
    StringLit(String),
    LangTag(String),
    DoubleCaret,
    Semicolon,
    Comma,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> &'static str {
        match self {
            Tok::PrefixKeyword => "`@prefix`",
            Tok::IriRef(_) => "IRI",
            Tok::PName { .. } => "prefixed name",
            Tok::Blank(_) => "blank node",
            Tok::A => "`a`",
            Tok::StringLit(_) => "string literal",
            Tok::LangTag(_) => "language tag",
            Tok::DoubleCaret => "`^^`",
            Tok::Semicolon => "`;`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

struct Lexer {
    chars: Vec<char>,
    at: usize,
    line: u32,
    col: u32,
}

fn lex(text: &str) -> Result<Vec<Spanned>, RdfError> {
    let mut lx = Lexer {
        chars: text.chars().collect(),
        at: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        let spanned = lx.next_token()?;
        let done = spanned.tok == Tok::Eof;
        out.push(spanned);
        if done {
            return Ok(out);
        }
    }
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.at + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned, RdfError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let spanned = |tok| Spanned { tok, line, col };
        let Some(c) = self.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        match c {
            '<' => Ok(spanned(Tok::IriRef(self.iri_ref()?))),
            '"' => Ok(spanned(Tok::StringLit(self.string_lit()?))),
            '@' => {
                self.bump();
                let word = self.ident(|c| c.is_ascii_alphanumeric() || c == '-');
                if word == "prefix" {
                    Ok(spanned(Tok::PrefixKeyword))
                } else if !word.is_empty()
                    && word.chars().next().unwrap().is_ascii_alphabetic()
                {
                    Ok(spanned(Tok::LangTag(word)))
                } else {
                    Err(self.error(format!("unknown directive `@{word}`")))
                }
            }
            '_' if self.peek2() == Some(':') => {
                self.bump();
                self.bump();
                let label = self.ident(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
                if label.is_empty() {
                    return Err(self.error("blank node label expected after `_:`"));
                }
                Ok(spanned(Tok::Blank(label)))
            }
            '^' => {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    Ok(spanned(Tok::DoubleCaret))
                } else {
                    Err(self.error("expected `^^`"))
                }
            }
            ';' => {
                self.bump();
                Ok(spanned(Tok::Semicolon))
            }
            ',' => {
                self.bump();
                Ok(spanned(Tok::Comma))
            }
            '.' => {
                self.bump();
                Ok(spanned(Tok::Dot))
            }
            '[' | '(' | ']' | ')' => Err(self.error(format!(
                "`{c}` is outside the supported Turtle subset (no collections or \
                 blank-node property lists)"
            ))),
            c if c.is_ascii_digit() || c == '+' || c == '-' => Err(self.error(
                "numeric shorthand is outside the supported Turtle subset; \
                 use a typed literal",
            )),
            _ => self.pname_or_keyword(line, col),
        }
    }

    fn ident(&mut self, keep: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if keep(c) {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn pname_or_keyword(&mut self, line: u32, col: u32) -> Result<Spanned, RdfError> {
        let prefix = self.ident(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if self.peek() != Some(':') {
            if prefix == "a" {
                return Ok(Spanned {
                    tok: Tok::A,
                    line,
                    col,
                });
            }
            return Err(self.error(format!("unexpected token `{prefix}`")));
        }
        self.bump();
        let mut local = self.ident(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.');
        // `ex:foo.` ends the statement: trailing dots belong to the grammar.
        let mut trailing = 0;
        while local.ends_with('.') {
            local.pop();
            trailing += 1;
        }
        self.at -= trailing;
        self.col -= trailing as u32;
        Ok(Spanned {
            tok: Tok::PName { prefix, local },
            line,
            col,
        })
    }

    fn iri_ref(&mut self) -> Result<String, RdfError> {
        self.bump(); // <
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated IRI reference")),
                Some('\n') => return Err(self.error("newline inside IRI reference")),
                Some('>') => {
                    self.bump();
                    return Ok(s);
                }
                Some(c) => {
                    s.push(c);
                    self.bump();
                }
            }
        }
    }

    fn string_lit(&mut self) -> Result<String, RdfError> {
        // Caller guarantees a leading quote.
        self.bump();
        let long = self.peek() == Some('"') && self.peek2() == Some('"');
        if long {
            self.bump();
            self.bump();
            return self.long_string_body();
        }
        if self.peek() == Some('"') {
            // Empty short string: the second quote closed it.
            self.bump();
            return Ok(String::new());
        }
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated string literal")),
                Some('\n') => return Err(self.error("newline in short string literal")),
                Some('"') => {
                    self.bump();
                    return Ok(s);
                }
                Some('\\') => {
                    self.bump();
                    s.push(self.escape()?);
                }
                Some(c) => {
                    s.push(c);
                    self.bump();
                }
            }
        }
    }

    fn long_string_body(&mut self) -> Result<String, RdfError> {
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated long string literal")),
                Some('"') => {
                    if self.peek2() == Some('"') && self.chars.get(self.at + 2) == Some(&'"') {
                        self.bump();
                        self.bump();
                        self.bump();
                        return Ok(s);
                    }
                    s.push('"');
                    self.bump();
                }
                Some('\\') => {
                    self.bump();
                    s.push(self.escape()?);
                }
                Some(c) => {
                    s.push(c);
                    self.bump();
                }
            }
        }
    }

    fn escape(&mut self) -> Result<char, RdfError> {
        let Some(c) = self.bump() else {
            return Err(self.error("dangling escape"));
        };
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' => self.unicode_escape(4)?,
            'U' => self.unicode_escape(8)?,
            other => return Err(self.error(format!("unknown escape `\\{other}`"))),
        })
    }

    fn unicode_escape(&mut self, digits: u32) -> Result<char, RdfError> {
        let mut v: u32 = 0;
        for _ in 0..digits {
            let Some(c) = self.bump() else {
                return Err(self.error("truncated unicode escape"));
            };
            let Some(d) = c.to_digit(16) else {
                return Err(self.error("non-hex digit in unicode escape"));
            };
            v = v * 16 + d;
        }
        char::from_u32(v).ok_or_else(|| self.error("invalid unicode scalar in escape"))
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
    graph: Graph,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.at.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let s = self.peek().clone();
        if self.at < self.tokens.len() - 1 {
            self.at += 1;
        }
        s
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, RdfError> {
        let s = self.bump();
        if s.tok == tok {
            Ok(s)
        } else {
            Err(syntax(
                &s,
                format!("expected {}, found {}", tok.describe(), s.tok.describe()),
            ))
        }
    }

    fn document(mut self) -> Result<Graph, RdfError> {
        loop {
            match &self.peek().tok {
                Tok::Eof => return Ok(self.graph),
                Tok::PrefixKeyword => self.prefix_decl()?,
                _ => self.triples()?,
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        self.bump(); // @prefix
        let s = self.bump();
        let Tok::PName { prefix, local } = &s.tok else {
            return Err(syntax(&s, "expected a prefix name after `@prefix`"));
        };
        if !local.is_empty() {
            return Err(syntax(&s, "prefix declaration must end with a bare `:`"));
        }
        let ns = self.bump();
        let Tok::IriRef(iri) = &ns.tok else {
            return Err(syntax(&ns, "expected a namespace IRI in prefix declaration"));
        };
        let namespace = check_iri(iri, &ns)?;
        self.expect(Tok::Dot)?;
        self.graph
            .set_prefix(prefix.clone(), namespace.as_str().to_string());
        Ok(())
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        let subject = self.subject()?;
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                if self.peek().tok == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            match self.bump() {
                s if s.tok == Tok::Semicolon => {
                    // Tolerate a trailing `;` before the closing dot.
                    if self.peek().tok == Tok::Dot {
                        self.bump();
                        return Ok(());
                    }
                }
                s if s.tok == Tok::Dot => return Ok(()),
                s => {
                    return Err(syntax(
                        &s,
                        format!("expected `;`, `,` or `.`, found {}", s.tok.describe()),
                    ))
                }
            }
        }
    }

    fn subject(&mut self) -> Result<Resource, RdfError> {
        let s = self.bump();
        match &s.tok {
            Tok::IriRef(iri) => Ok(Resource::Iri(check_iri(iri, &s)?)),
            Tok::PName { prefix, local } => Ok(Resource::Iri(self.expand(prefix, local, &s)?)),
            Tok::Blank(label) => Ok(Resource::Blank(BlankNode(label.clone()))),
            _ => Err(syntax(
                &s,
                format!("expected a subject, found {}", s.tok.describe()),
            )),
        }
    }

    fn predicate(&mut self) -> Result<Iri, RdfError> {
        let s = self.bump();
        match &s.tok {
            Tok::A => Ok(Iri::known(crate::vocab::RDF_TYPE)),
            Tok::IriRef(iri) => check_iri(iri, &s),
            Tok::PName { prefix, local } => self.expand(prefix, local, &s),
            _ => Err(syntax(
                &s,
                format!("expected a predicate, found {}", s.tok.describe()),
            )),
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        let s = self.bump();
        match &s.tok {
            Tok::IriRef(iri) => Ok(Term::Iri(check_iri(iri, &s)?)),
            Tok::PName { prefix, local } => Ok(Term::Iri(self.expand(prefix, local, &s)?)),
            Tok::Blank(label) => Ok(Term::Blank(BlankNode(label.clone()))),
            Tok::StringLit(lexical) => {
                let lexical = lexical.clone();
                match &self.peek().tok {
                    Tok::LangTag(tag) => {
                        let tag = tag.clone();
                        self.bump();
                        Ok(Term::Literal(Literal::lang(lexical, tag)))
                    }
                    Tok::DoubleCaret => {
                        self.bump();
                        let dt = self.bump();
                        let datatype = match &dt.tok {
                            Tok::IriRef(iri) => check_iri(iri, &dt)?,
                            Tok::PName { prefix, local } => self.expand(prefix, local, &dt)?,
                            _ => {
                                return Err(syntax(
                                    &dt,
                                    format!(
                                        "expected a datatype IRI after `^^`, found {}",
                                        dt.tok.describe()
                                    ),
                                ))
                            }
                        };
                        Ok(Term::Literal(Literal::typed(lexical, datatype)))
                    }
                    _ => Ok(Term::Literal(Literal::string(lexical))),
                }
            }
            _ => Err(syntax(
                &s,
                format!("expected an object, found {}", s.tok.describe()),
            )),
        }
    }

    fn expand(&self, prefix: &str, local: &str, s: &Spanned) -> Result<Iri, RdfError> {
        let Some(ns) = self.graph.prefixes().get(prefix) else {
            return Err(RdfError::UndefinedPrefix {
                line: s.line,
                col: s.col,
                prefix: prefix.to_string(),
            });
        };
        check_iri(&format!("{ns}{local}"), s)
    }
}

fn syntax(s: &Spanned, msg: impl Into<String>) -> RdfError {
    RdfError::Syntax {
        line: s.line,
        col: s.col,
        msg: msg.into(),
    }
}

fn check_iri(value: &str, s: &Spanned) -> Result<Iri, RdfError> {
    Iri::new(value).map_err(|_| RdfError::MalformedIri {
        line: s.line,
        col: s.col,
        iri: value.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab;
    use alloc::string::ToString;

    #[test]
    fn empty_document_gives_empty_graph_and_prefix_map() {
        let g = parse_turtle("").unwrap();
        assert!(g.is_empty());
        assert!(g.prefixes().is_empty());
    }

    #[test]
    fn comment_only_document_is_empty() {
        let g = parse_turtle("# nothing here\n").unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn goal_statement_expands_to_two_triples() {
        let text = "@prefix bdi: <https://w3id.org/fossr/ontology/bdi/> .\n\
                    @prefix ex: <https://example.org/bdi-case#> .\n\
                    @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
                    ex:Goal_G1 a bdi:Goal ; rdfs:label \"Check into the hotel\"@en .\n";
        let g = parse_turtle(text).unwrap();
        assert_eq!(g.len(), 2);
        let goal = Resource::Iri(Iri::new("https://example.org/bdi-case#Goal_G1").unwrap());
        assert!(g.has_type(&goal, vocab::GOAL));
        let labels = g.objects(&goal, vocab::RDFS_LABEL);
        assert_eq!(
            labels,
            alloc::vec![Term::Literal(Literal::lang("Check into the hotel", "en"))]
        );
    }

    #[test]
    fn object_lists_and_long_strings() {
        let text = "@prefix ex: <urn:x:> .\n\
                    ex:s ex:p ex:a , ex:b ;\n\
                         ex:q \"\"\"two\nlines\"\"\" .\n";
        let g = parse_turtle(text).unwrap();
        assert_eq!(g.len(), 3);
        let s = Resource::Iri(Iri::new("urn:x:s").unwrap());
        let q = g.objects(&s, "urn:x:q");
        assert_eq!(q, alloc::vec![Term::Literal(Literal::string("two\nlines"))]);
    }

    #[test]
    fn typed_literals_parse() {
        let text = "@prefix ex: <urn:x:> .\n\
                    @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
                    ex:s ex:p \"2025-01-01T00:00:00Z\"^^xsd:dateTime .\n";
        let g = parse_turtle(text).unwrap();
        let s = Resource::Iri(Iri::new("urn:x:s").unwrap());
        let objs = g.objects(&s, "urn:x:p");
        assert_eq!(
            objs,
            alloc::vec![Term::Literal(Literal::typed(
                "2025-01-01T00:00:00Z",
                Iri::known(vocab::XSD_DATETIME)
            ))]
        );
    }

    #[test]
    fn undefined_prefix_is_fatal_with_location() {
        let err = parse_turtle("ex:s ex:p ex:o .").unwrap_err();
        assert_eq!(
            err,
            RdfError::UndefinedPrefix {
                line: 1,
                col: 1,
                prefix: "ex".to_string()
            }
        );
    }

    #[test]
    fn syntax_error_carries_line_and_column() {
        let err = parse_turtle("@prefix ex: <urn:x:> .\nex:s ex:p .\n").unwrap_err();
        match err {
            RdfError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_iri_rejected() {
        let err = parse_turtle("<urn:s> <not an iri> <urn:o> .").unwrap_err();
        match err {
            RdfError::Syntax { .. } => {} // whitespace splits the token stream
            RdfError::MalformedIri { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_turtle("<urn:s> <no-scheme> <urn:o> .").unwrap_err();
        assert!(matches!(err, RdfError::MalformedIri { .. }));
    }

    #[test]
    fn duplicate_statements_collapse() {
        let text = "@prefix ex: <urn:x:> .\nex:s ex:p ex:o .\nex:s ex:p ex:o .\n";
        assert_eq!(parse_turtle(text).unwrap().len(), 1);
    }

    #[test]
    fn blank_node_labels_are_stable_ids() {
        let text = "@prefix ex: <urn:x:> .\n_:y ex:p _:z .\n_:z ex:p _:y .\n";
        let g = parse_turtle(text).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&Triple::new(
            Resource::Blank(BlankNode("y".into())),
            Iri::new("urn:x:p").unwrap(),
            Term::Blank(BlankNode("z".into())),
        )));
        // Labels survive a round trip unchanged.
        let again = parse_turtle(&super::super::serialize_turtle(&g)).unwrap();
        assert!(g.triples_eq(&again));
    }

    #[test]
    fn unsupported_syntax_is_rejected() {
        assert!(parse_turtle("@prefix ex: <urn:x:> .\nex:s ex:p ( ex:a ex:b ) .").is_err());
        assert!(parse_turtle("@prefix ex: <urn:x:> .\nex:s ex:p [ ex:q ex:o ] .").is_err());
        assert!(parse_turtle("@prefix ex: <urn:x:> .\nex:s ex:p 42 .").is_err());
    }
}
