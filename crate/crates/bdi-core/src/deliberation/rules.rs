//! Parser for `.rules` files.
//!
//! One rule per stanza:
//!
//! ```text
//! @prefix bdi: <https://w3id.org/fossr/ontology/bdi/> .
//!
//! @name form_desire
//! @priority 2
//! (?b rdf:type bdi:Belief) / (?b bdi:refersTo ?w) & not((?b bdi:motivates ?d)) >>
//!     assert_desire(?w) as ?d2 ; link(motivates, ?b, ?d2) .
//! ```
//!
//! Patterns are `(subject predicate object)` with `?var` variables, `a` for
//! `rdf:type`, IRIs, prefixed names (sharing the Turtle prefix syntax), and
//! string literals. Conditionals chain with `&`; `not(...)` wraps a single
//! pattern (negation as failure); `valid_at(?x, NOW)` is the builtin temporal
//! conditional. The tail is a `;`-separated action list; `assert_*` and
//! `define_plan` may bind the minted individual with `as ?v` for later
//! actions. Variables in the tail must be bound by the head, a positive
//! conditional, or an earlier `as` binder; the head cannot be negated.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::mental::{StateKind, StateRelation};
use crate::rdf::{Iri, Literal, Term};
use crate::vocab;

use super::{Action, Conditional, Pattern, Rule, RuleTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleParseError {
    #[error("line {line}, column {col}: syntax error: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("line {line}, column {col}: undefined prefix `{prefix}:`")]
    UndefinedPrefix { line: u32, col: u32, prefix: String },
    #[error("rule `{rule}`: tail variable ?{var} is not bound by the head, a positive conditional, or an earlier `as` binder")]
    UnboundTailVariable { rule: String, var: String },
    #[error("rule `{rule}`: the head cannot be negated")]
    NegatedHead { rule: String },
    #[error("rule `{rule}`: a pattern needs a constant predicate unless all three positions are variables")]
    UnderconstrainedPattern { rule: String },
    #[error("duplicate rule name `{0}`")]
    DuplicateRuleName(String),
    #[error("rule `{rule}`: a tail may assert states of one kind only, and define_plan cannot mix with assert or suppress")]
    MixedTailKinds { rule: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    PrefixKw,
    NameKw,
    PriorityKw,
    Ident(String),
    Var(String),
    IriRef(String),
    PName(String, String),
    Str(String),
    Int(i32),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Dot,
    Slash,
    Amp,
    Arrow,
    Eof,
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

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
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

    fn error(&self, msg: impl Into<String>) -> RuleParseError {
        RuleParseError::Syntax {
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

    fn ident(&mut self, extra_dot: bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || (extra_dot && c == '.') {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn next_token(&mut self) -> Result<Spanned, RuleParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let spanned = |tok| Spanned { tok, line, col };
        let Some(c) = self.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        match c {
            '(' => {
                self.bump();
                Ok(spanned(Tok::LParen))
            }
            ')' => {
                self.bump();
                Ok(spanned(Tok::RParen))
            }
            '[' => {
                self.bump();
                Ok(spanned(Tok::LBracket))
            }
            ']' => {
                self.bump();
                Ok(spanned(Tok::RBracket))
            }
            ',' => {
                self.bump();
                Ok(spanned(Tok::Comma))
            }
            ';' => {
                self.bump();
                Ok(spanned(Tok::Semicolon))
            }
            '.' => {
                self.bump();
                Ok(spanned(Tok::Dot))
            }
            '/' => {
                self.bump();
                Ok(spanned(Tok::Slash))
            }
            '&' => {
                self.bump();
                Ok(spanned(Tok::Amp))
            }
            '>' => {
                self.bump();
                if self.peek() == Some('>') {
                    self.bump();
                    Ok(spanned(Tok::Arrow))
                } else {
                    Err(self.error("expected `>>`"))
                }
            }
            '?' => {
                self.bump();
                let name = self.ident(false);
                if name.is_empty() {
                    return Err(self.error("variable name expected after `?`"));
                }
                Ok(spanned(Tok::Var(name)))
            }
            '@' => {
                self.bump();
                let word = self.ident(false);
                match word.as_str() {
                    "prefix" => Ok(spanned(Tok::PrefixKw)),
                    "name" => Ok(spanned(Tok::NameKw)),
                    "priority" => Ok(spanned(Tok::PriorityKw)),
                    other => Err(self.error(format!("unknown directive `@{other}`"))),
                }
            }
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.peek() {
                        None => return Err(self.error("unterminated IRI reference")),
                        Some('>') => {
                            self.bump();
                            break;
                        }
                        Some(c) => {
                            iri.push(c);
                            self.bump();
                        }
                    }
                }
                Ok(spanned(Tok::IriRef(iri)))
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.peek() {
                        None => return Err(self.error("unterminated string literal")),
                        Some('"') => {
                            self.bump();
                            break;
                        }
                        Some('\\') => {
                            self.bump();
                            match self.bump() {
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some(other) => {
                                    return Err(self.error(format!("unknown escape `\\{other}`")))
                                }
                                None => return Err(self.error("dangling escape")),
                            }
                        }
                        Some(c) => {
                            s.push(c);
                            self.bump();
                        }
                    }
                }
                Ok(spanned(Tok::Str(s)))
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut s = String::new();
                if c == '-' {
                    s.push(c);
                    self.bump();
                }
                s.push_str(&self.ident(false));
                s.parse::<i32>()
                    .map(|n| spanned(Tok::Int(n)))
                    .map_err(|_| self.error(format!("invalid integer `{s}`")))
            }
            _ => {
                let word = self.ident(false);
                if word.is_empty() {
                    return Err(self.error(format!("unexpected character `{c}`")));
                }
                if self.peek() == Some(':') {
                    self.bump();
                    let mut local = self.ident(true);
                    let mut trailing = 0;
                    while local.ends_with('.') {
                        local.pop();
                        trailing += 1;
                    }
                    self.at -= trailing;
                    self.col -= trailing as u32;
                    return Ok(spanned(Tok::PName(word, local)));
                }
                Ok(spanned(Tok::Ident(word)))
            }
        }
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, RuleParseError> {
    let mut lx = Lexer {
        chars: text.chars().collect(),
        at: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        let s = lx.next_token()?;
        let done = s.tok == Tok::Eof;
        out.push(s);
        if done {
            return Ok(out);
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
    prefixes: BTreeMap<String, String>,
}

/// Parses a rule file. The prefix map starts from the standard block; file
/// `@prefix` lines extend or override it.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        prefixes: vocab::STANDARD_PREFIXES
            .iter()
            .map(|(p, ns)| (p.to_string(), ns.to_string()))
            .collect(),
    };
    let mut rules = Vec::new();
    let mut names = BTreeSet::new();
    let mut pending_name: Option<String> = None;
    let mut pending_priority: Option<i32> = None;
    loop {
        match &parser.peek().tok {
            Tok::Eof => return Ok(rules),
            Tok::PrefixKw => parser.prefix_decl()?,
            Tok::NameKw => {
                parser.bump();
                let s = parser.bump();
                let Tok::Ident(name) = &s.tok else {
                    return Err(syntax(&s, "expected a rule name after `@name`"));
                };
                pending_name = Some(name.clone());
            }
            Tok::PriorityKw => {
                parser.bump();
                let s = parser.bump();
                let Tok::Int(n) = &s.tok else {
                    return Err(syntax(&s, "expected an integer after `@priority`"));
                };
                pending_priority = Some(*n);
            }
            _ => {
                let id = pending_name
                    .take()
                    .unwrap_or_else(|| format!("r{}", rules.len() + 1));
                let priority = pending_priority.take().unwrap_or(0);
                let rule = parser.rule(id, priority)?;
                if !names.insert(rule.id.clone()) {
                    return Err(RuleParseError::DuplicateRuleName(rule.id));
                }
                validate_rule(&rule)?;
                rules.push(rule);
            }
        }
    }
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

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, RuleParseError> {
        let s = self.bump();
        if s.tok == tok {
            Ok(s)
        } else {
            Err(syntax(&s, format!("expected {what}")))
        }
    }

    fn prefix_decl(&mut self) -> Result<(), RuleParseError> {
        self.bump();
        let s = self.bump();
        let Tok::PName(prefix, local) = &s.tok else {
            return Err(syntax(&s, "expected a prefix name after `@prefix`"));
        };
        if !local.is_empty() {
            return Err(syntax(&s, "prefix declaration must end with a bare `:`"));
        }
        let ns = self.bump();
        let Tok::IriRef(iri) = &ns.tok else {
            return Err(syntax(&ns, "expected a namespace IRI"));
        };
        self.expect(Tok::Dot, "`.`")?;
        self.prefixes.insert(prefix.clone(), iri.clone());
        Ok(())
    }

    fn rule(&mut self, id: String, priority: i32) -> Result<Rule, RuleParseError> {
        if let Tok::Ident(word) = &self.peek().tok {
            if word == "not" {
                return Err(RuleParseError::NegatedHead { rule: id });
            }
        }
        let head = self.pattern(false)?;
        let mut conditionals = Vec::new();
        if self.peek().tok == Tok::Slash {
            self.bump();
            loop {
                conditionals.push(self.conditional()?);
                if self.peek().tok == Tok::Amp {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Arrow, "`>>`")?;
        let mut tail = Vec::new();
        loop {
            tail.push(self.action()?);
            match self.bump() {
                s if s.tok == Tok::Semicolon => continue,
                s if s.tok == Tok::Dot => break,
                s => return Err(syntax(&s, "expected `;` or `.` after an action")),
            }
        }
        Ok(Rule {
            id,
            priority,
            head,
            conditionals,
            tail,
        })
    }

    fn conditional(&mut self) -> Result<Conditional, RuleParseError> {
        let negated = matches!(&self.peek().tok, Tok::Ident(w) if w == "not");
        if negated {
            self.bump();
            self.expect(Tok::LParen, "`(` after `not`")?;
            let inner = self.conditional_body(true)?;
            self.expect(Tok::RParen, "`)` closing `not(...)`")?;
            return Ok(inner);
        }
        self.conditional_body(false)
    }

    fn conditional_body(&mut self, negated: bool) -> Result<Conditional, RuleParseError> {
        if let Tok::Ident(word) = &self.peek().tok {
            if word == "valid_at" {
                self.bump();
                self.expect(Tok::LParen, "`(` after `valid_at`")?;
                let entity = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let now = self.bump();
                if !matches!(&now.tok, Tok::Ident(w) if w == "NOW") {
                    return Err(syntax(&now, "expected `NOW` (the run's start instant)"));
                }
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Conditional::ValidAtNow { entity, negated });
            }
        }
        Ok(Conditional::Pattern(self.pattern(negated)?))
    }

    fn pattern(&mut self, negated: bool) -> Result<Pattern, RuleParseError> {
        self.expect(Tok::LParen, "`(` opening a pattern")?;
        let subject = self.term()?;
        let predicate = self.term()?;
        let object = self.term()?;
        self.expect(Tok::RParen, "`)` closing a pattern")?;
        Ok(Pattern {
            subject,
            predicate,
            object,
            negated,
        })
    }

    fn term(&mut self) -> Result<RuleTerm, RuleParseError> {
        let s = self.bump();
        match &s.tok {
            Tok::Var(name) => Ok(RuleTerm::Var(name.clone())),
            Tok::Ident(word) if word == "a" => {
                Ok(RuleTerm::Constant(Term::Iri(Iri::known(vocab::RDF_TYPE))))
            }
            Tok::IriRef(iri) => Iri::new(iri.clone())
                .map(|i| RuleTerm::Constant(Term::Iri(i)))
                .map_err(|_| syntax(&s, format!("malformed IRI <{iri}>"))),
            Tok::PName(prefix, local) => {
                let Some(ns) = self.prefixes.get(prefix) else {
                    return Err(RuleParseError::UndefinedPrefix {
                        line: s.line,
                        col: s.col,
                        prefix: prefix.clone(),
                    });
                };
                Iri::new(format!("{ns}{local}"))
                    .map(|i| RuleTerm::Constant(Term::Iri(i)))
                    .map_err(|_| syntax(&s, "malformed IRI after prefix expansion"))
            }
            Tok::Str(text) => Ok(RuleTerm::Constant(Term::Literal(Literal::string(
                text.clone(),
            )))),
            other => Err(syntax(
                &s,
                format!("expected a term (variable, IRI, name, or string), found {other:?}"),
            )),
        }
    }

    fn action(&mut self) -> Result<Action, RuleParseError> {
        let s = self.bump();
        let Tok::Ident(name) = &s.tok else {
            return Err(syntax(&s, "expected an action name"));
        };
        let name = name.clone();
        self.expect(Tok::LParen, "`(` after the action name")?;
        let action = match name.as_str() {
            "assert_belief" | "assert_desire" | "assert_intention" => {
                let refers_to = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                let kind = match name.as_str() {
                    "assert_belief" => StateKind::Belief,
                    "assert_desire" => StateKind::Desire,
                    _ => StateKind::Intention,
                };
                Action::AssertState {
                    kind,
                    refers_to,
                    bind: self.binder()?,
                }
            }
            "suppress" => {
                let target = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Action::Suppress { target }
            }
            "link" => {
                let rel = self.bump();
                let Tok::Ident(rel_name) = &rel.tok else {
                    return Err(syntax(&rel, "expected motivates, supports, or fulfils"));
                };
                let rel = match rel_name.as_str() {
                    "motivates" => StateRelation::Motivates,
                    "supports" => StateRelation::Supports,
                    "fulfils" => StateRelation::Fulfils,
                    other => {
                        return Err(syntax(
                            &s,
                            format!("unknown link relation `{other}` (expected motivates, supports, or fulfils)"),
                        ))
                    }
                };
                self.expect(Tok::Comma, "`,`")?;
                let src = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let dst = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Action::Link { rel, src, dst }
            }
            "justify" => {
                let target = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let text = self.bump();
                let Tok::Str(text) = &text.tok else {
                    return Err(syntax(&text, "expected a string template"));
                };
                let text = text.clone();
                self.expect(Tok::RParen, "`)`")?;
                Action::Justify { target, text }
            }
            "emit" => {
                let subject = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let predicate = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let object = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Action::EmitTriple {
                    subject,
                    predicate,
                    object,
                }
            }
            "define_plan" => {
                let goal = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                self.expect(Tok::LBracket, "`[` opening the task list")?;
                let mut tasks = Vec::new();
                loop {
                    tasks.push(self.term()?);
                    match self.bump() {
                        t if t.tok == Tok::Comma => continue,
                        t if t.tok == Tok::RBracket => break,
                        t => return Err(syntax(&t, "expected `,` or `]` in the task list")),
                    }
                }
                self.expect(Tok::RParen, "`)`")?;
                Action::DefinePlan {
                    goal,
                    tasks,
                    bind: self.binder()?,
                }
            }
            other => {
                return Err(syntax(
                    &s,
                    format!("unknown action `{other}`"),
                ))
            }
        };
        Ok(action)
    }

    fn binder(&mut self) -> Result<Option<String>, RuleParseError> {
        if matches!(&self.peek().tok, Tok::Ident(w) if w == "as") {
            self.bump();
            let s = self.bump();
            let Tok::Var(name) = &s.tok else {
                return Err(syntax(&s, "expected a variable after `as`"));
            };
            return Ok(Some(name.clone()));
        }
        Ok(None)
    }
}

fn syntax(s: &Spanned, msg: impl Into<String>) -> RuleParseError {
    RuleParseError::Syntax {
        line: s.line,
        col: s.col,
        msg: msg.into(),
    }
}

fn pattern_vars(p: &Pattern, out: &mut BTreeSet<String>) {
    for term in [&p.subject, &p.predicate, &p.object] {
        if let RuleTerm::Var(v) = term {
            out.insert(v.clone());
        }
    }
}

fn term_var(t: &RuleTerm) -> Option<&str> {
    match t {
        RuleTerm::Var(v) => Some(v),
        RuleTerm::Constant(_) => None,
    }
}

fn validate_rule(rule: &Rule) -> Result<(), RuleParseError> {
    let well_formed = |p: &Pattern| -> bool {
        matches!(p.predicate, RuleTerm::Constant(Term::Iri(_)))
            || (matches!(p.subject, RuleTerm::Var(_))
                && matches!(p.predicate, RuleTerm::Var(_))
                && matches!(p.object, RuleTerm::Var(_)))
    };
    if !well_formed(&rule.head) {
        return Err(RuleParseError::UnderconstrainedPattern {
            rule: rule.id.clone(),
        });
    }
    let mut bound = BTreeSet::new();
    pattern_vars(&rule.head, &mut bound);
    for cond in &rule.conditionals {
        match cond {
            Conditional::Pattern(p) => {
                if !well_formed(p) {
                    return Err(RuleParseError::UnderconstrainedPattern {
                        rule: rule.id.clone(),
                    });
                }
                if !p.negated {
                    pattern_vars(p, &mut bound);
                }
            }
            Conditional::ValidAtNow { entity, .. } => {
                if let Some(var) = term_var(entity) {
                    if !bound.contains(var) {
                        return Err(RuleParseError::UnboundTailVariable {
                            rule: rule.id.clone(),
                            var: var.to_string(),
                        });
                    }
                }
            }
        }
    }

    let mut assert_kinds = BTreeSet::new();
    let mut has_define = false;
    let mut has_assert_or_suppress = false;
    for action in &rule.tail {
        let mut used: Vec<&RuleTerm> = Vec::new();
        match action {
            Action::AssertState {
                kind,
                refers_to,
                bind,
            } => {
                assert_kinds.insert(kind.label());
                has_assert_or_suppress = true;
                used.push(refers_to);
                check_used(rule, &bound, &used)?;
                if let Some(b) = bind {
                    bound.insert(b.clone());
                }
                continue;
            }
            Action::Suppress { target } => {
                has_assert_or_suppress = true;
                used.push(target);
            }
            Action::Link { src, dst, .. } => {
                used.push(src);
                used.push(dst);
            }
            Action::Justify { target, text } => {
                used.push(target);
                for var in template_vars(text) {
                    if !bound.contains(&var) {
                        return Err(RuleParseError::UnboundTailVariable {
                            rule: rule.id.clone(),
                            var,
                        });
                    }
                }
            }
            Action::EmitTriple {
                subject,
                predicate,
                object,
            } => {
                used.push(subject);
                used.push(predicate);
                used.push(object);
            }
            Action::DefinePlan { goal, tasks, bind } => {
                has_define = true;
                used.push(goal);
                used.extend(tasks.iter());
                check_used(rule, &bound, &used)?;
                if let Some(b) = bind {
                    bound.insert(b.clone());
                }
                continue;
            }
        }
        check_used(rule, &bound, &used)?;
    }
    if assert_kinds.len() > 1 || (has_define && has_assert_or_suppress) {
        return Err(RuleParseError::MixedTailKinds {
            rule: rule.id.clone(),
        });
    }
    Ok(())
}

fn check_used(
    rule: &Rule,
    bound: &BTreeSet<String>,
    used: &[&RuleTerm],
) -> Result<(), RuleParseError> {
    for term in used {
        if let Some(var) = term_var(term) {
            if !bound.contains(var) {
                return Err(RuleParseError::UnboundTailVariable {
                    rule: rule.id.clone(),
                    var: var.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `?var` occurrences inside a justification text template.
pub(super) fn template_vars(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '?' {
            let mut name = String::new();
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '-')
            {
                name.push(chars[j]);
                j += 1;
            }
            if !name.is_empty() {
                out.push(name);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    out
}
