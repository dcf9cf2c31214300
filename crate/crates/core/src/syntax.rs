//! Textual syntax for ontologies and queries.
//!
//! ```text
//! document  := ["tbox:" {inclusion "."}] "abox:" {assertion "."}
//! inclusion := concept "subclassof" concept
//! assertion := concept "(" IND ")" | ROLE "(" IND "," IND ")"
//! concept   := conj {"or" conj}
//! conj      := unary {"and" unary}
//! unary     := "not" unary | "some" ROLE "." unary | "all" ROLE "." unary | atom
//! atom      := "top" | "bot" | CNAME | "(" concept ")"
//! query     := concept "(" IND ")" | concept "subsumedby" concept | "consistent"
//! ```
//!
//! Keywords are lowercase and reserved, `#` starts a line comment, and names
//! beginning with `_` belong to the reasoner.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::model::{
    ABox, Concept, ConceptAssertion, ConceptName, Inclusion, IndividualName, Ontology,
    RoleAssertion, RoleName, TBox, KEYWORDS,
};
use crate::reasoner::Query;

/// Ontology text plus where it came from, for error messages.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourceDocument {
    pub text: String,
    pub origin: String,
}

impl SourceDocument {
    pub fn inline(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            origin: "<inline>".to_string(),
        }
    }

    pub fn from_path(path: &Path) -> std::io::Result<Self> {
        Ok(Self {
            text: std::fs::read_to_string(path)?,
            origin: path.display().to_string(),
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParseErrorKind {
    /// None of the acceptable tokens was found.
    Expected(Vec<&'static str>),
    /// A name reserved for keywords or generated individuals.
    Reserved,
    /// A word that is not a valid identifier.
    InvalidName,
    /// A character outside the token alphabet.
    UnexpectedChar,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub column: usize,
    /// The offending token as written, or `end of input`.
    pub found: String,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: ", self.origin, self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Expected(set) => {
                write!(f, "expected ")?;
                for (i, e) in set.iter().enumerate() {
                    match i {
                        0 => {}
                        _ if i + 1 == set.len() => write!(f, " or ")?,
                        _ => write!(f, ", ")?,
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ", found {}", self.found)
            }
            ParseErrorKind::Reserved => write!(
                f,
                "`{}` is reserved and cannot be used as a name",
                self.found
            ),
            ParseErrorKind::InvalidName => write!(f, "`{}` is not a valid identifier", self.found),
            ParseErrorKind::UnexpectedChar => write!(f, "unexpected character {}", self.found),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Word(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, origin: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            bump(&mut chars);
            out.push(Token {
                tok,
                line: l,
                column: col,
            });
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars
                .peek()
                .filter(|c| c.is_ascii_alphanumeric() || **c == '_')
            {
                word.push(c);
                bump(&mut chars);
            }
            out.push(Token {
                tok: Tok::Word(word),
                line: l,
                column: col,
            });
        } else {
            return Err(ParseError {
                origin: origin.to_string(),
                line: l,
                column: col,
                found: format!("{c:?}"),
                kind: ParseErrorKind::UnexpectedChar,
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    origin: &'a str,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(text: &str, origin: &'a str) -> PResult<Self> {
        Ok(Self {
            tokens: lex(text, origin)?,
            pos: 0,
            origin,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, token: &Token, kind: ParseErrorKind) -> ParseError {
        let found = match (&kind, &token.tok) {
            (ParseErrorKind::Expected(_), t) => t.describe(),
            (_, Tok::Word(w)) => w.clone(),
            (_, t) => t.describe(),
        };
        ParseError {
            origin: self.origin.to_string(),
            line: token.line,
            column: token.column,
            found,
            kind,
        }
    }

    fn expected(&self, set: Vec<&'static str>) -> ParseError {
        self.error_at(&self.tokens[self.pos], ParseErrorKind::Expected(set))
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let hit = self.is_keyword(kw);
        if hit {
            self.advance();
        }
        hit
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.expected(vec![name]))
        }
    }

    fn expect_keyword(&mut self, kw: &'static str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.expected(vec![kw]))
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        self.expect(Tok::Eof, "end of input")
    }

    /// A non-keyword word, validated as an identifier.
    fn name<T>(
        &mut self,
        what: &'static str,
        make: impl FnOnce(&str) -> crate::Result<T>,
    ) -> PResult<T> {
        let Tok::Word(w) = self.peek().clone() else {
            return Err(self.expected(vec![what]));
        };
        let token = self.advance();
        make(&w).map_err(|e| {
            let kind = match e {
                crate::Error::ReservedName(_) => ParseErrorKind::Reserved,
                _ => ParseErrorKind::InvalidName,
            };
            self.error_at(&token, kind)
        })
    }

    fn individual(&mut self) -> PResult<IndividualName> {
        self.name("individual name", IndividualName::new)
    }

    fn role(&mut self) -> PResult<RoleName> {
        self.name("role name", RoleName::new)
    }

    fn concept(&mut self) -> PResult<Concept> {
        let mut c = self.conj()?;
        while self.eat_keyword("or") {
            c = Concept::or(c, self.conj()?);
        }
        Ok(c)
    }

    fn conj(&mut self) -> PResult<Concept> {
        let mut c = self.unary()?;
        while self.eat_keyword("and") {
            c = Concept::and(c, self.unary()?);
        }
        Ok(c)
    }

    fn unary(&mut self) -> PResult<Concept> {
        if self.eat_keyword("not") {
            return Ok(Concept::not(self.unary()?));
        }
        for (kw, exists) in [("some", true), ("all", false)] {
            if self.eat_keyword(kw) {
                let r = self.role()?;
                self.expect(Tok::Dot, "`.`")?;
                let c = self.unary()?;
                return Ok(if exists {
                    Concept::exists(r, c)
                } else {
                    Concept::forall(r, c)
                });
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Concept> {
        if self.eat_keyword("top") {
            return Ok(Concept::Top);
        }
        if self.eat_keyword("bot") {
            return Ok(Concept::Bottom);
        }
        match self.peek() {
            Tok::LParen => {
                self.advance();
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) || w.starts_with('_') => {
                Ok(Concept::Atomic(self.name("concept", ConceptName::new)?))
            }
            _ => Err(self.expected(vec!["concept"])),
        }
    }

    /// `NAME ( IND , IND )` is a role assertion; everything else a concept one.
    fn assertion(&mut self, abox: &mut ABox) -> PResult<()> {
        let role_shaped = matches!(self.peek(), Tok::Word(_))
            && *self.peek_at(1) == Tok::LParen
            && matches!(self.peek_at(2), Tok::Word(_))
            && *self.peek_at(3) == Tok::Comma;
        if role_shaped {
            let role = self.role()?;
            self.advance();
            let subject = self.individual()?;
            self.advance();
            let object = self.individual()?;
            self.expect(Tok::RParen, "`)`")?;
            abox.add(RoleAssertion::new(role, subject, object));
        } else {
            let c = self.concept()?;
            self.expect(Tok::LParen, "`(`")?;
            let i = self.individual()?;
            self.expect(Tok::RParen, "`)`")?;
            abox.add(ConceptAssertion::new(c, i));
        }
        Ok(())
    }

    fn document(&mut self) -> PResult<Ontology> {
        let mut tbox = TBox::default();
        if self.eat_keyword("tbox") {
            self.expect(Tok::Colon, "`:`")?;
            while !self.is_keyword("abox") {
                if *self.peek() == Tok::Eof {
                    return Err(self.expected(vec!["inclusion", "abox"]));
                }
                let sub = self.concept()?;
                self.expect_keyword("subclassof")?;
                let sup = self.concept()?;
                self.expect(Tok::Dot, "`.`")?;
                tbox.inclusions.push(Inclusion::new(sub, sup));
            }
        } else if !self.is_keyword("abox") {
            return Err(self.expected(vec!["tbox", "abox"]));
        }
        self.expect_keyword("abox")?;
        self.expect(Tok::Colon, "`:`")?;
        let mut abox = ABox::new();
        while *self.peek() != Tok::Eof {
            self.assertion(&mut abox)?;
            self.expect(Tok::Dot, "`.`")?;
        }
        Ok(Ontology::new(tbox, abox))
    }

    fn query(&mut self) -> PResult<Query> {
        if self.is_keyword("consistent") && *self.peek_at(1) == Tok::Eof {
            self.advance();
            return Ok(Query::Consistency);
        }
        let c = self.concept()?;
        let q = if self.eat_keyword("subsumedby") {
            Query::Subsumes {
                sub: c,
                sup: self.concept()?,
            }
        } else if *self.peek() == Tok::LParen {
            self.advance();
            let i = self.individual()?;
            self.expect(Tok::RParen, "`)`")?;
            Query::Instance(ConceptAssertion::new(c, i))
        } else {
            return Err(self.expected(vec!["`(`", "subsumedby"]));
        };
        self.expect_eof()?;
        Ok(q)
    }
}

/// Parses a whole ontology document. Concepts are kept as written.
pub fn parse_ontology(doc: &SourceDocument) -> Result<Ontology, ParseError> {
    Parser::new(&doc.text, &doc.origin)?.document()
}

pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    Parser::new(text, "<query>")?.query()
}

pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut p = Parser::new(text, "<concept>")?;
    let c = p.concept()?;
    p.expect_eof()?;
    Ok(c)
}

/// Renders an ontology in the document syntax; [`parse_ontology`] reads it
/// back to an equal value.
pub fn print_ontology(o: &Ontology) -> String {
    let mut out = String::new();
    if !o.tbox.is_empty() {
        out.push_str("tbox:\n");
        for inc in &o.tbox.inclusions {
            let _ = writeln!(out, "  {} subclassof {} .", inc.sub, inc.sup);
        }
    }
    out.push_str("abox:\n");
    for a in o.abox.assertions() {
        let _ = writeln!(out, "  {a} .");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(s: &str) -> IndividualName {
        IndividualName::new(s).unwrap()
    }

    #[test]
    fn two_concept_assertions() {
        let o = parse_ontology(&SourceDocument::inline(
            "abox: Penguin(tweety) . not Fly(tweety) .",
        ))
        .unwrap();
        assert_eq!(o.abox.concept_assertions.len(), 2);
        assert_eq!(
            o.abox.concept_assertions[1],
            ConceptAssertion::new(Concept::not(Concept::atom("Fly")), ind("tweety"))
        );
    }

    #[test]
    fn inclusion_and_role_assertion() {
        let text = "tbox: Penguin subclassof Bird . abox: HasFood(tweety, fingerling) .";
        let o = parse_ontology(&SourceDocument::inline(text)).unwrap();
        assert_eq!(
            o.tbox.inclusions,
            vec![Inclusion::new(
                Concept::atom("Penguin"),
                Concept::atom("Bird")
            )]
        );
        assert_eq!(o.abox.role_assertions.len(), 1);
        assert!(o.abox.concept_assertions.is_empty());
    }

    #[test]
    fn parenthesized_concept_assertion() {
        let o = parse_ontology(&SourceDocument::inline(
            "abox: (not Penguin or Bird)(tweety) .",
        ))
        .unwrap();
        let expected = Concept::or(
            Concept::not(Concept::atom("Penguin")),
            Concept::atom("Bird"),
        );
        assert_eq!(
            o.abox.concept_assertions[0],
            ConceptAssertion::new(expected, ind("tweety"))
        );
    }

    #[test]
    fn comments_and_empty_abox() {
        let o = parse_ontology(&SourceDocument::inline("# nothing\nabox: # here\n")).unwrap();
        assert!(o.abox.is_empty());
    }

    #[test]
    fn queries() {
        assert_eq!(
            parse_query("Fly(tweety)").unwrap(),
            Query::Instance(ConceptAssertion::new(Concept::atom("Fly"), ind("tweety")))
        );
        let some = Concept::exists(RoleName::new("HasFood").unwrap(), Concept::atom("Fish"));
        assert_eq!(
            parse_query("(some HasFood . Fish)(tweety)").unwrap(),
            Query::Instance(ConceptAssertion::new(some, ind("tweety")))
        );
        assert_eq!(
            parse_query("A subsumedby B").unwrap(),
            Query::Subsumes {
                sub: Concept::atom("A"),
                sup: Concept::atom("B")
            }
        );
        assert_eq!(parse_query("consistent").unwrap(), Query::Consistency);
    }

    #[test]
    fn precedence() {
        let c = parse_concept("not A and B or some R . C and D").unwrap();
        let r = RoleName::new("R").unwrap();
        let expected = Concept::or(
            Concept::and(Concept::not(Concept::atom("A")), Concept::atom("B")),
            Concept::and(Concept::exists(r, Concept::atom("C")), Concept::atom("D")),
        );
        assert_eq!(c, expected);
        let left = parse_concept("A or B or C").unwrap();
        assert_eq!(
            left,
            Concept::or(
                Concept::or(Concept::atom("A"), Concept::atom("B")),
                Concept::atom("C")
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_ontology(&SourceDocument::inline("abox:\n  Penguin(tweety)\n")).unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        assert_eq!(e.kind, ParseErrorKind::Expected(vec!["`.`"]));
        assert_eq!(e.found, "end of input");

        let e = parse_ontology(&SourceDocument::inline("abox: A(_fresh0) .")).unwrap_err();
        assert_eq!(
            (e.line, e.column, e.kind.clone()),
            (1, 9, ParseErrorKind::Reserved)
        );
        assert_eq!(e.found, "_fresh0");

        let e = parse_ontology(&SourceDocument::inline("abox: A(x) $")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar);
        assert_eq!(e.column, 12);

        let e = parse_concept("A and").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Expected(vec!["concept"]));

        let e = parse_concept("some and . A").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Reserved);

        let e = parse_query("A(1x)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::InvalidName);
    }

    #[test]
    fn missing_abox_section() {
        let e = parse_ontology(&SourceDocument::inline("tbox: A subclassof B .")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Expected(vec!["inclusion", "abox"]));
        assert!(e
            .to_string()
            .contains("expected inclusion or abox, found end of input"));
    }

    #[test]
    fn printed_ontology_reparses() {
        let text =
            "tbox: A and B subclassof some R . (C or not D) . top subclassof all R . bot .\n\
                    abox: (A or B)(x) . R(x, y) . not A(y) . top(x) .";
        let o = parse_ontology(&SourceDocument::inline(text)).unwrap();
        let printed = print_ontology(&o);
        assert_eq!(parse_ontology(&SourceDocument::inline(printed)).unwrap(), o);
    }
}
