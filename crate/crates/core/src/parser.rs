//! Parser for the Prover9-flavoured concrete syntax.
//!
//! ```text
//! statement   := equation '<->' equation
//!              | [ premise ('&' premise)* '->' ] equation
//! premise     := equation | '(' equation ')'
//! equation    := term '=' term
//! term        := or_term ('v' or_term)*
//! or_term     := meet_term ('+' meet_term)*
//! meet_term   := atom ('^' atom)*
//! atom        := IDENT | R00 | R01 | R10 | R11 | '(' term ')'
//! ```
//!
//! Binary operators associate to the left. A trailing `.` and a bracketed
//! annotation such as `[goal].` are accepted so assumption lists can be
//! pasted as they are. The symbols `∧ ∨ → ↔` are accepted as aliases.

use thiserror::Error;

use crate::term::{Constant, Equation, Implication, Statement, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Meet,
    Join,
    Or,
    LParen,
    RParen,
    Eq,
    And,
    Implies,
    Iff,
    Dot,
    Annotation,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '^' | '∧' => Tok::Meet,
            '∨' => Tok::Join,
            '+' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            '&' => Tok::And,
            '.' => Tok::Dot,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '[' => {
                for (_, c) in chars.by_ref() {
                    if c == ']' {
                        break;
                    }
                }
                out.push((i, Tok::Annotation));
                continue;
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some((_, '>')) => {
                        out.push((i, Tok::Implies));
                        continue;
                    }
                    _ => return Err(err(i, "expected `->`")),
                }
            }
            '<' => {
                chars.next();
                let a = chars.next().map(|p| p.1);
                let b = chars.next().map(|p| p.1);
                if (a, b) != (Some('-'), Some('>')) {
                    return Err(err(i, "expected `<->`"));
                }
                out.push((i, Tok::Iff));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((i, if ident == "v" { Tok::Join } else { Tok::Ident(ident) }));
                continue;
            }
            other => return Err(err(i, &format!("unexpected character `{other}`"))),
        };
        chars.next();
        out.push((i, tok));
    }
    Ok(out)
}

fn err(offset: usize, message: &str) -> ParseError {
    ParseError { offset, message: message.to_owned() }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        let mut toks = lex(src)?;
        // strip the trailing `[annotation]` / `.` decorations
        while matches!(toks.last(), Some((_, Tok::Dot | Tok::Annotation))) {
            toks.pop();
        }
        Ok(Parser { toks, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(err(self.offset(), &format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(err(self.offset(), &format!("unexpected trailing token {t:?}"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.or_term()?;
        while self.eat(&Tok::Join) {
            t = t.join(self.or_term()?);
        }
        Ok(t)
    }

    fn or_term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.meet_term()?;
        while self.eat(&Tok::Or) {
            t = t.or(self.meet_term()?);
        }
        Ok(t)
    }

    fn meet_term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.eat(&Tok::Meet) {
            t = t.meet(self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let offset = self.offset();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(if let Some(c) = Constant::from_name(&name) {
                    Term::Const(c)
                } else if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    Term::Ground(name)
                } else {
                    Term::Var(name)
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(err(offset, "expected a term")),
        }
    }

    fn equation(&mut self) -> Result<Equation, ParseError> {
        let lhs = self.term()?;
        self.expect(&Tok::Eq, "`=`")?;
        let rhs = self.term()?;
        Ok(Equation::new(lhs, rhs))
    }

    /// An equation, possibly wrapped in parentheses.
    fn premise(&mut self) -> Result<Equation, ParseError> {
        let start = self.pos;
        if self.eat(&Tok::LParen) {
            if let Ok(eq) = self.equation() {
                if self.eat(&Tok::RParen) {
                    return Ok(eq);
                }
            }
            self.pos = start;
        }
        self.equation()
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let first = self.premise()?;
        match self.peek() {
            Some(Tok::Iff) => {
                self.pos += 1;
                let second = self.premise()?;
                Ok(Statement::Iff(first, second))
            }
            Some(Tok::And) | Some(Tok::Implies) => {
                let mut premises = vec![first];
                while self.eat(&Tok::And) {
                    premises.push(self.premise()?);
                }
                self.expect(&Tok::Implies, "`->`")?;
                let conclusion = self.premise()?;
                Ok(Statement::Implies(Implication { premises, conclusion }))
            }
            _ => Ok(Statement::equation(first)),
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_equation(src: &str) -> Result<Equation, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.premise()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_statement(src: &str) -> Result<Statement, ParseError> {
    let mut p = Parser::new(src)?;
    let s = p.statement()?;
    p.finish()?;
    Ok(s)
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
