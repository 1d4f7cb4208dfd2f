//! Recursive-descent parser for model, transformation and expectation files.

use num_bigint::BigInt;

use super::lexer::{tokenize, Pos, Tok, Token};
use super::FrontendError;
use crate::kernel::Parity;

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Int(BigInt),
    I,
    Ident(String, Pos),
    Index(String, u8, Pos),
    Deriv(Box<Ast>, Pos),
    Dot(Box<Ast>, Box<Ast>, Pos),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>, Pos),
    Div(Box<Ast>, Box<Ast>, Pos),
    Pow(Box<Ast>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Constant,
    Variable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub name: String,
    pub indexed: bool,
    pub parity: Parity,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelAst {
    pub name: String,
    pub parameters: Vec<(String, Pos)>,
    pub metric: Option<[i8; 4]>,
    pub decls: Vec<Decl>,
    pub lagrangian: Ast,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformHeaderKind {
    Param,
    Constant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformAst {
    pub name: String,
    pub headers: Vec<(TransformHeaderKind, String, Parity, Pos)>,
    /// Target name, optional component, variation.
    pub deltas: Vec<(String, Option<u8>, Ast, Pos)>,
}

/// Reserved words that cannot name generators.
pub const RESERVED: &[&str] = &[
    "model",
    "parameter",
    "metric",
    "constant",
    "variable",
    "lagrangian",
    "even",
    "odd",
    "I",
    "d",
    "dot",
    "transformation",
    "param",
    "delta",
];

pub(crate) struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, FrontendError> {
        Ok(Parser {
            toks: tokenize(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FrontendError> {
        let p = self.pos();
        Err(FrontendError::Syntax {
            line: p.line,
            col: p.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Pos, FrontendError> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, FrontendError> {
        if self.is_keyword(kw) {
            Ok(self.bump().pos)
        } else {
            self.error(format!("expected `{kw}`, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), FrontendError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            other => self.error(format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn name(&mut self) -> Result<(String, Pos), FrontendError> {
        let (s, pos) = self.ident()?;
        if RESERVED.contains(&s.as_str()) {
            return Err(FrontendError::Syntax {
                line: pos.line,
                col: pos.col,
                message: format!("`{s}` is reserved"),
            });
        }
        Ok((s, pos))
    }

    fn uint(&mut self) -> Result<u64, FrontendError> {
        match self.peek().clone() {
            Tok::Int(s) => match s.parse::<u64>() {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => self.error("integer too large"),
            },
            other => self.error(format!("expected integer, found {}", describe(&other))),
        }
    }

    fn parity(&mut self) -> Result<Parity, FrontendError> {
        if self.is_keyword("even") {
            self.bump();
            Ok(Parity::Even)
        } else if self.is_keyword("odd") {
            self.bump();
            Ok(Parity::Odd)
        } else {
            self.error("expected `even` or `odd`")
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn finish(&self) -> Result<(), FrontendError> {
        if self.at_eof() {
            Ok(())
        } else {
            self.error(format!("unexpected {}", describe(self.peek())))
        }
    }

    pub fn model(&mut self) -> Result<ModelAst, FrontendError> {
        self.keyword("model")?;
        let (name, _) = self.name()?;
        let mut parameters = Vec::new();
        let mut metric = None;
        let mut decls = Vec::new();
        loop {
            if self.is_keyword("parameter") {
                self.bump();
                parameters.push(self.name()?);
            } else if self.is_keyword("metric") {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let mut signs = [0i8; 4];
                for s in signs.iter_mut() {
                    *s = match self.peek() {
                        Tok::Plus => 1,
                        Tok::Minus => -1,
                        other => {
                            return self
                                .error(format!("expected metric sign, found {}", describe(other)))
                        }
                    };
                    self.bump();
                }
                self.expect(Tok::RParen, "`)`")?;
                metric = Some(signs);
            } else if self.is_keyword("constant") || self.is_keyword("variable") {
                let kind = if self.is_keyword("constant") {
                    DeclKind::Constant
                } else {
                    DeclKind::Variable
                };
                self.bump();
                let (name, pos) = self.name()?;
                let indexed = if *self.peek() == Tok::LBracket {
                    self.bump();
                    if self.uint()? != 4 {
                        return self.error("only 4-component families are supported");
                    }
                    self.expect(Tok::RBracket, "`]`")?;
                    true
                } else {
                    false
                };
                self.expect(Tok::Colon, "`:`")?;
                let parity = self.parity()?;
                decls.push(Decl {
                    kind,
                    name,
                    indexed,
                    parity,
                    pos,
                });
            } else if self.is_keyword("lagrangian") {
                break;
            } else {
                return self.error(format!(
                    "expected a declaration or `lagrangian`, found {}",
                    describe(self.peek())
                ));
            }
        }
        self.keyword("lagrangian")?;
        self.expect(Tok::Colon, "`:`")?;
        let lagrangian = self.expr()?;
        self.finish()?;
        Ok(ModelAst {
            name,
            parameters,
            metric,
            decls,
            lagrangian,
        })
    }

    pub fn transformation(&mut self) -> Result<TransformAst, FrontendError> {
        self.keyword("transformation")?;
        let (name, _) = self.name()?;
        let mut headers = Vec::new();
        let mut deltas = Vec::new();
        loop {
            if self.is_keyword("param") || self.is_keyword("constant") {
                let kind = if self.is_keyword("param") {
                    TransformHeaderKind::Param
                } else {
                    TransformHeaderKind::Constant
                };
                self.bump();
                let (n, pos) = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let parity = self.parity()?;
                headers.push((kind, n, parity, pos));
            } else if self.is_keyword("delta") {
                self.bump();
                let (target, pos) = self.name()?;
                let component = if *self.peek() == Tok::LBracket {
                    self.bump();
                    let c = self.uint()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    Some(c as u8)
                } else {
                    None
                };
                self.expect(Tok::Equals, "`=`")?;
                let e = self.expr()?;
                deltas.push((target, component, e, pos));
            } else {
                break;
            }
        }
        self.finish()?;
        Ok(TransformAst {
            name,
            headers,
            deltas,
        })
    }

    pub fn expr(&mut self) -> Result<Ast, FrontendError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, FrontendError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let pos = self.bump().pos;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?), pos);
                }
                Tok::Slash => {
                    let pos = self.bump().pos;
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, FrontendError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut a = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let k = self.uint()?;
            let k = u32::try_from(k).or_else(|_| self.error("exponent too large"))?;
            a = Ast::Pow(Box::new(a), k);
        }
        Ok(if negate { Ast::Neg(Box::new(a)) } else { a })
    }

    fn atom(&mut self) -> Result<Ast, FrontendError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Ast::Int(s.parse().expect("digits")))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "I" => {
                self.bump();
                Ok(Ast::I)
            }
            Tok::Ident(s) if s == "d" && *self.peek_at(1) == Tok::LParen => {
                let pos = self.bump().pos;
                self.bump();
                let inner = self.atom()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Ast::Deriv(Box::new(inner), pos))
            }
            Tok::Ident(s) if s == "dot" && *self.peek_at(1) == Tok::LParen => {
                let pos = self.bump().pos;
                self.bump();
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Ast::Dot(Box::new(a), Box::new(b), pos))
            }
            Tok::Ident(_) => {
                let (name, pos) = self.name()?;
                if *self.peek() == Tok::LBracket {
                    self.bump();
                    let c = self.uint()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    if c > 3 {
                        return Err(FrontendError::Syntax {
                            line: pos.line,
                            col: pos.col,
                            message: format!("component {c} out of range 0..3"),
                        });
                    }
                    Ok(Ast::Index(name, c as u8, pos))
                } else {
                    Ok(Ast::Ident(name, pos))
                }
            }
            other => self.error(format!(
                "expected an expression, found {}",
                describe(&other)
            )),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Equals => "`=`".into(),
        Tok::Semicolon => "`;`".into(),
    }
}
