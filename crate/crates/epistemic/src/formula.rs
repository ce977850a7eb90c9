//! The epistemic event language.
//!
//! Grammar (ASCII, whitespace insignificant):
//!
//! ```text
//! formula := or ;  or := and { "|" and } ;  and := unary { "&" unary } ;
//! unary   := "~" unary | "K" INT unary | "EK" unary
//!          | "M" "[" INT "]" unary | "C" unary | atom ;
//! atom    := IDENT | "top" | "bot" | "(" formula ")" ;
//! ```
//!
//! Prefix operators bind tightest, then `&`, then `|`; both infix operators
//! are left-associative. `IDENT = [A-Za-z_][A-Za-z0-9_]*` excluding the
//! keywords `top`, `bot`, `EK`, `C`; `K<digits>` is always the knowledge
//! operator with a 1-based agent index.

use std::fmt;

use thiserror::Error;

use crate::knowledge::{KnowledgeError, Model};
use crate::linalg::Subspace;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `K<n> f` — agent by 1-based position in the model's agent list.
    Know(usize, Box<Formula>),
    /// `EK f` — everyone knows, i.e. `M_1`.
    Everyone(Box<Formula>),
    /// `M[n] f` — n-fold mutual knowledge.
    Mutual(usize, Box<Formula>),
    /// `C f` — common knowledge, the fixed point of `EK`.
    Common(Box<Formula>),
}

/// Byte range into the source text, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at {}..{}: {message}", span.start, span.end)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown event {0:?}")]
    UnknownAtom(String),
    #[error("unknown agent index {0} (model has {1} agents, indices are 1-based)")]
    UnknownAgent(usize, usize),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Tilde,
    Amp,
    Pipe,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Int(usize),
    Ident(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Tilde => write!(f, "'~'"),
            Token::Amp => write!(f, "'&'"),
            Token::Pipe => write!(f, "'|'"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
            Token::LBracket => write!(f, "'['"),
            Token::RBracket => write!(f, "']'"),
            Token::Int(n) => write!(f, "integer {n}"),
            Token::Ident(s) => write!(f, "identifier {s:?}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'~' | b'&' | b'|' | b'(' | b')' | b'[' | b']' => {
                let tok = match b {
                    b'~' => Token::Tilde,
                    b'&' => Token::Amp,
                    b'|' => Token::Pipe,
                    b'(' => Token::LParen,
                    b')' => Token::RParen,
                    b'[' => Token::LBracket,
                    _ => Token::RBracket,
                };
                i += 1;
                tokens.push((tok, SourceSpan { start, end: i }));
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: usize = text[start..i].parse().map_err(|_| ParseError {
                    span: SourceSpan { start, end: i },
                    message: "integer literal out of range".into(),
                })?;
                tokens.push((Token::Int(n), SourceSpan { start, end: i }));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((Token::Ident(text[start..i].to_owned()), SourceSpan { start, end: i }));
            }
            _ => {
                return Err(ParseError {
                    span: SourceSpan { start, end: start + 1 },
                    message: format!("unexpected character {:?}", text[start..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, SourceSpan)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, SourceSpan)> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> SourceSpan {
        self.peek()
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan { start: self.end, end: self.end })
    }

    fn bump(&mut self) -> Option<(Token, SourceSpan)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += t.is_some() as usize;
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        match self.bump() {
            Some((tok, _)) if tok == want => Ok(()),
            Some((tok, span)) => Err(ParseError { span, message: format!("expected {want}, found {tok}") }),
            None => Err(ParseError { span: self.here(), message: format!("expected {want}, found end of input") }),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while matches!(self.peek(), Some((Token::Pipe, _))) {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Some((Token::Amp, _))) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some((Token::Tilde, _)) => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some((Token::Ident(name), span)) => {
                let (name, span) = (name.clone(), *span);
                match name.as_str() {
                    "EK" => {
                        self.bump();
                        Ok(Formula::Everyone(Box::new(self.unary()?)))
                    }
                    "C" => {
                        self.bump();
                        Ok(Formula::Common(Box::new(self.unary()?)))
                    }
                    "M" if matches!(self.tokens.get(self.pos + 1), Some((Token::LBracket, _))) => {
                        self.bump();
                        self.bump(); // '['
                        let n = match self.bump() {
                            Some((Token::Int(n), _)) => n,
                            Some((tok, span)) => {
                                return Err(ParseError { span, message: format!("expected integer, found {tok}") })
                            }
                            None => {
                                return Err(ParseError {
                                    span: self.here(),
                                    message: "expected integer, found end of input".into(),
                                })
                            }
                        };
                        self.expect(Token::RBracket)?;
                        Ok(Formula::Mutual(n, Box::new(self.unary()?)))
                    }
                    // `K7 f` lexes as one identifier; `K 7 f` as two tokens.
                    "K" if matches!(self.tokens.get(self.pos + 1), Some((Token::Int(_), _))) => {
                        self.bump();
                        let Some((Token::Int(agent), _)) = self.bump() else { unreachable!() };
                        Ok(Formula::Know(agent, Box::new(self.unary()?)))
                    }
                    _ if is_know_token(&name) => {
                        self.bump();
                        let agent: usize = name[1..].parse().map_err(|_| ParseError {
                            span,
                            message: "agent index out of range".into(),
                        })?;
                        Ok(Formula::Know(agent, Box::new(self.unary()?)))
                    }
                    _ => self.atom(),
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Some((Token::Ident(name), _)) => match name.as_str() {
                "top" => Ok(Formula::Top),
                "bot" => Ok(Formula::Bot),
                _ => Ok(Formula::Atom(name)),
            },
            Some((Token::LParen, _)) => {
                let inner = self.or()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some((tok, span)) => Err(ParseError {
                span,
                message: format!("expected an atom, '~', 'K<n>', 'EK', 'M[n]', 'C', or '(', found {tok}"),
            }),
            None => Err(ParseError {
                span: self.here(),
                message: "expected a formula, found end of input".into(),
            }),
        }
    }
}

/// Identifiers of the shape `K<digits>` are knowledge-operator tokens, never
/// atoms.
pub fn is_know_token(name: &str) -> bool {
    name.len() > 1 && name.starts_with('K') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    let formula = parser.or()?;
    if let Some((tok, span)) = parser.peek() {
        return Err(ParseError {
            span: *span,
            message: format!("expected end of input, found {tok}"),
        });
    }
    Ok(formula)
}

// precedence levels for printing: Or < And < prefix/atom
const PREC_OR: u8 = 0;
const PREC_AND: u8 = 1;
const PREC_UNARY: u8 = 2;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn print_into(f: &Formula, min_prec: u8, out: &mut String) {
    let wrap = prec(f) < min_prec;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Top => out.push_str("top"),
        Formula::Bot => out.push_str("bot"),
        Formula::Not(inner) => {
            out.push('~');
            print_into(inner, PREC_UNARY, out);
        }
        Formula::Know(agent, inner) => {
            out.push_str(&format!("K{agent} "));
            print_into(inner, PREC_UNARY, out);
        }
        Formula::Everyone(inner) => {
            out.push_str("EK ");
            print_into(inner, PREC_UNARY, out);
        }
        Formula::Mutual(n, inner) => {
            out.push_str(&format!("M[{n}] "));
            print_into(inner, PREC_UNARY, out);
        }
        Formula::Common(inner) => {
            out.push_str("C ");
            print_into(inner, PREC_UNARY, out);
        }
        Formula::And(l, r) => {
            // left-associative: the right child needs strictly higher binding
            print_into(l, PREC_AND, out);
            out.push_str(" & ");
            print_into(r, PREC_AND + 1, out);
        }
        Formula::Or(l, r) => {
            print_into(l, PREC_OR, out);
            out.push_str(" | ");
            print_into(r, PREC_OR + 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Minimal-parenthesization rendering; `parse(pretty_print(f))` is `f`.
pub fn pretty_print(f: &Formula) -> String {
    let mut out = String::new();
    print_into(f, PREC_OR, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_print(self))
    }
}

/// Maps a formula to the event (subspace) it denotes in `model`.
pub fn evaluate<S: Scalar>(model: &Model<S>, f: &Formula) -> Result<Subspace<S>, EvalError> {
    match f {
        Formula::Atom(name) => model
            .events
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UnknownAtom(name.clone())),
        Formula::Top => Ok(Subspace::full(model.dimension)),
        Formula::Bot => Ok(Subspace::zero(model.dimension)),
        Formula::Not(inner) => Ok(evaluate(model, inner)?.orthocomplement()),
        Formula::And(l, r) => Ok(evaluate(model, l)?.meet(&evaluate(model, r)?).map_err(KnowledgeError::from)?),
        Formula::Or(l, r) => Ok(evaluate(model, l)?.join(&evaluate(model, r)?).map_err(KnowledgeError::from)?),
        Formula::Know(agent, inner) => {
            let e = evaluate(model, inner)?;
            let idx = agent
                .checked_sub(1)
                .filter(|&i| i < model.agents.len())
                .ok_or(EvalError::UnknownAgent(*agent, model.agents.len()))?;
            Ok(model.agents[idx].single_question()?.knowledge_operator(&e)?)
        }
        Formula::Everyone(inner) => {
            let e = evaluate(model, inner)?;
            Ok(model.everyone_knows(&e)?)
        }
        Formula::Mutual(n, inner) => {
            let e = evaluate(model, inner)?;
            Ok(model.mutual_knowledge(&e, *n)?)
        }
        Formula::Common(inner) => {
            let e = evaluate(model, inner)?;
            Ok(model.common_knowledge(&e)?.0)
        }
    }
}
