//! Recursive-descent parser for relative terms and formulas.
//!
//! Term precedence, tightest first: `~` (prefix), the chain prefixes `a_0;`
//! and `a_00;`, then `;` / `+'` (left-associative, not mixable without
//! parentheses), then intersection (`*` or juxtaposition), then `+`.
//! Formulas: `<=` / `=` between terms, `&`, and right-associative `->`.
//! `<=` between two grouped formulas is read as implication.
//!
//! The Unicode glyphs produced by the renderer are accepted as well.

use thiserror::Error;

use super::ast::{Const, Formula, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at position {pos}")]
    Lexical { pos: usize, ch: char },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("chain subscript at position {pos} must follow a plain variable")]
    Arity { pos: usize },
    #[error("position {pos}: {msg}")]
    Mixing { pos: usize, msg: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Lexical { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Arity { pos }
            | ParseError::Mixing { pos, .. } => *pos,
        }
    }
}

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var(char),
    Const(Const),
    Tilde,
    Sub0,
    Sub00,
    Semi,
    RelSum,
    Star,
    Plus,
    Le,
    Eq,
    Amp,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    fn describe(self) -> String {
        match self {
            Tok::Var(c) => format!("variable '{c}'"),
            Tok::Const(Const::Zero) => "'0'".into(),
            Tok::Const(Const::One) => "'1'".into(),
            Tok::Const(Const::Diag) => "'1''".into(),
            Tok::Const(Const::AntiDiag) => "'0''".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Sub0 => "'_0'".into(),
            Tok::Sub00 => "'_00'".into(),
            Tok::Semi => "';'".into(),
            Tok::RelSum => "'+''".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Le => "'<='".into(),
            Tok::Eq => "'='".into(),
            Tok::Amp => "'&'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn starts_operand(self) -> bool {
        matches!(
            self,
            Tok::Var(_) | Tok::Const(_) | Tok::Tilde | Tok::LParen | Tok::LBrace
        )
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        let pos = i;
        let (tok, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'a'..='z' => (Tok::Var(c), 1),
            '0' if next == Some('\'') => (Tok::Const(Const::AntiDiag), 2),
            '1' if next == Some('\'') => (Tok::Const(Const::Diag), 2),
            '0' => (Tok::Const(Const::Zero), 1),
            '1' => (Tok::Const(Const::One), 1),
            '~' | '¬' => (Tok::Tilde, 1),
            '_' if next == Some('0') => {
                if chars.get(i + 2) == Some(&'0') {
                    (Tok::Sub00, 3)
                } else {
                    (Tok::Sub0, 2)
                }
            }
            '₀' => {
                if next == Some('₀') {
                    (Tok::Sub00, 2)
                } else {
                    (Tok::Sub0, 1)
                }
            }
            ';' => (Tok::Semi, 1),
            '+' if next == Some('\'') => (Tok::RelSum, 2),
            '·' if next == Some('\'') => (Tok::RelSum, 2),
            '+' => (Tok::Plus, 1),
            '*' | '·' => (Tok::Star, 1),
            '<' if next == Some('=') => (Tok::Le, 2),
            '⊆' => (Tok::Le, 1),
            '=' => (Tok::Eq, 1),
            '&' | '∧' => (Tok::Amp, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '→' => (Tok::Arrow, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            _ => return Err(ParseError::Lexical { pos, ch: c }),
        };
        out.push((tok, pos));
        i += width;
    }
    out.push((Tok::Eof, chars.len()));
    Ok(out)
}

/// Result of parsing something that may turn out to be a term or a
/// (grouped) formula; only a bare group may be a formula.
enum Side {
    Term(Term),
    Formula(Formula),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> Tok {
        self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            msg: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                msg: format!("unexpected {}", self.peek().describe()),
            })
        }
    }

    fn mixing(pos: usize, msg: &str) -> ParseError {
        ParseError::Mixing {
            pos,
            msg: msg.to_string(),
        }
    }

    fn term_of(side: Side, pos: usize) -> Result<Term> {
        match side {
            Side::Term(t) => Ok(t),
            Side::Formula(_) => Err(Self::mixing(
                pos,
                "a formula cannot be used as a term operand",
            )),
        }
    }

    // expr := conj ('->' expr)?
    fn expr(&mut self) -> Result<Side> {
        let start = self.pos();
        let lhs = self.conj()?;
        if self.peek() != Tok::Arrow {
            return Ok(lhs);
        }
        let arrow = self.pos();
        self.bump();
        let Side::Formula(ante) = lhs else {
            return Err(Self::mixing(start, "left side of '->' must be a formula"));
        };
        let rhs_pos = self.pos();
        let Side::Formula(cons) = self.expr()? else {
            return Err(Self::mixing(
                rhs_pos.max(arrow),
                "right side of '->' must be a formula",
            ));
        };
        Ok(Side::Formula(Formula::implies(ante, cons)))
    }

    // conj := cmp ('&' cmp)*
    fn conj(&mut self) -> Result<Side> {
        let start = self.pos();
        let first = self.cmp()?;
        if self.peek() != Tok::Amp {
            return Ok(first);
        }
        let Side::Formula(first) = first else {
            return Err(Self::mixing(start, "operands of '&' must be formulas"));
        };
        let mut items = vec![first];
        while self.peek() == Tok::Amp {
            self.bump();
            let pos = self.pos();
            match self.cmp()? {
                Side::Formula(f) => items.push(f),
                Side::Term(_) => return Err(Self::mixing(pos, "operands of '&' must be formulas")),
            }
        }
        Ok(Side::Formula(Formula::Conjunction(items)))
    }

    // cmp := union (('<=' | '=') union)?
    fn cmp(&mut self) -> Result<Side> {
        let lhs_pos = self.pos();
        let lhs = self.union()?;
        let op = self.peek();
        if op != Tok::Le && op != Tok::Eq {
            return Ok(lhs);
        }
        let op_pos = self.pos();
        self.bump();
        let rhs_pos = self.pos();
        let rhs = self.union()?;
        match (lhs, rhs) {
            (Side::Term(a), Side::Term(b)) => Ok(Side::Formula(if op == Tok::Le {
                Formula::Inclusion(a, b)
            } else {
                Formula::Equation(a, b)
            })),
            (Side::Formula(p), Side::Formula(q)) => {
                if op == Tok::Le {
                    Ok(Side::Formula(Formula::implies(p, q)))
                } else {
                    Err(Self::mixing(
                        op_pos,
                        "'=' between formulas is not supported",
                    ))
                }
            }
            (Side::Term(_), Side::Formula(_)) => Err(Self::mixing(
                rhs_pos,
                "cannot compare a term with a formula",
            )),
            (Side::Formula(_), Side::Term(_)) => Err(Self::mixing(
                lhs_pos,
                "cannot compare a formula with a term",
            )),
        }
    }

    // union := inter ('+' inter)*
    fn union(&mut self) -> Result<Side> {
        let start = self.pos();
        let first = self.inter()?;
        if self.peek() != Tok::Plus {
            return Ok(first);
        }
        let mut items = vec![Self::term_of(first, start)?];
        while self.peek() == Tok::Plus {
            self.bump();
            let pos = self.pos();
            let side = self.inter()?;
            items.push(Self::term_of(side, pos)?);
        }
        Ok(Side::Term(Term::Union(items)))
    }

    // inter := seq (('*')? seq)*
    fn inter(&mut self) -> Result<Side> {
        let start = self.pos();
        let first = self.seq()?;
        let continues = |t: Tok| t == Tok::Star || t.starts_operand();
        if !continues(self.peek()) {
            return Ok(first);
        }
        let mut items = vec![Self::term_of(first, start)?];
        while continues(self.peek()) {
            if self.peek() == Tok::Star {
                self.bump();
            }
            let pos = self.pos();
            let side = self.seq()?;
            items.push(Self::term_of(side, pos)?);
        }
        Ok(Side::Term(Term::Intersect(items)))
    }

    // seq := unary ((';' | "+'") unary)*, one operator kind per level
    fn seq(&mut self) -> Result<Side> {
        let start = self.pos();
        let first = self.unary()?;
        let op = self.peek();
        if op != Tok::Semi && op != Tok::RelSum {
            return Ok(first);
        }
        let mut acc = Self::term_of(first, start)?;
        while matches!(self.peek(), Tok::Semi | Tok::RelSum) {
            if self.peek() != op {
                return Err(ParseError::Syntax {
                    pos: self.pos(),
                    msg: "';' and '+'' cannot be mixed without parentheses".into(),
                });
            }
            self.bump();
            let pos = self.pos();
            let rhs = self.unary()?;
            let rhs = Self::term_of(rhs, pos)?;
            acc = if op == Tok::Semi {
                Term::compose(acc, rhs)
            } else {
                Term::rel_sum(acc, rhs)
            };
        }
        Ok(Side::Term(acc))
    }

    // unary := '~' unary | primary
    fn unary(&mut self) -> Result<Side> {
        if self.peek() == Tok::Tilde {
            self.bump();
            let pos = self.pos();
            let inner = self.unary()?;
            return Ok(Side::Term(Term::not(Self::term_of(inner, pos)?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Side> {
        let side = match self.peek() {
            Tok::Var(c) => {
                self.bump();
                let v = Var::new(c).expect("lexer only yields lowercase letters");
                match self.peek() {
                    sub @ (Tok::Sub0 | Tok::Sub00) => {
                        self.bump();
                        if self.peek() != Tok::Semi {
                            return Err(ParseError::Syntax {
                                pos: self.pos(),
                                msg: format!(
                                    "chain subscript on '{c}' must be followed by ';' and an argument"
                                ),
                            });
                        }
                        self.bump();
                        let arg_pos = self.pos();
                        let arg = self.unary()?;
                        let arg = Box::new(Self::term_of(arg, arg_pos)?);
                        return Ok(Side::Term(if sub == Tok::Sub0 {
                            Term::Chain(v, arg)
                        } else {
                            Term::Iterate(v, arg)
                        }));
                    }
                    _ => Side::Term(Term::Var(v)),
                }
            }
            Tok::Const(k) => {
                self.bump();
                Side::Term(Term::Const(k))
            }
            open @ (Tok::LParen | Tok::LBrace) => {
                self.bump();
                let close = if open == Tok::LParen {
                    Tok::RParen
                } else {
                    Tok::RBrace
                };
                let inner = self.expr()?;
                self.expect(close)?;
                inner
            }
            _ => return Err(self.unexpected("a term")),
        };
        if matches!(self.peek(), Tok::Sub0 | Tok::Sub00) {
            return Err(ParseError::Arity { pos: self.pos() });
        }
        Ok(side)
    }
}

/// Parses a relative term, e.g. `a;(a_0;b)c + b`.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let start = p.pos();
    let side = p.union()?;
    p.expect_eof()?;
    Parser::term_of(side, start)
}

/// Parses a formula, e.g. `(b <= c) <= (a;b <= a;c)`.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let side = p.expr()?;
    p.expect_eof()?;
    match side {
        Side::Formula(f) => Ok(f),
        Side::Term(_) => Err(ParseError::Mixing {
            pos: 0,
            msg: "expected a formula, found a term".into(),
        }),
    }
}
