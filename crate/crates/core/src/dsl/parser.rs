//! Recursive descent over the token stream, one token of lookahead.

use super::ast::{Expr, ExprKind, Op};
use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Pos, Result};

const OPERAND: &str = "a variable, a number, `(`, `<` or a function";

pub fn parse(text: &str) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, at: 0 };
    let e = p.compose()?;
    p.expect(Tok::Eof, "an operator or end of input")?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Pos> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.error(expected))
        }
    }

    // compose := sum ('.' sum)*
    fn compose(&mut self) -> Result<Expr> {
        let mut lhs = self.sum()?;
        while *self.peek() == Tok::Dot {
            let pos = self.bump().pos;
            let rhs = self.sum()?;
            lhs = Expr::new(pos, ExprKind::Compose(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    // sum := ['-'] term (('+' | '-') term)*
    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = if *self.peek() == Tok::Minus {
            let pos = self.bump().pos;
            Expr::new(pos, ExprKind::Neg(Box::new(self.term()?)))
        } else {
            self.term()?
        };
        loop {
            let pos = self.pos();
            let kind: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::new(pos, kind(Box::new(lhs), Box::new(rhs)));
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            let pos = self.bump().pos;
            let rhs = self.factor()?;
            lhs = Expr::new(pos, ExprKind::Mul(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    // factor := base ('^' nat)?
    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.bump().pos;
        let e = self.nat("an exponent")?;
        let e = u32::try_from(e).map_err(|_| Error::Syntax {
            pos,
            expected: "an exponent below 2^32".into(),
            found: e.to_string(),
        })?;
        Ok(Expr::new(pos, ExprKind::Pow(Box::new(base), e)))
    }

    fn nat(&mut self, what: &str) -> Result<u64> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Nat(digits) => {
                self.bump();
                digits.parse().map_err(|_| Error::Syntax {
                    pos,
                    expected: format!("{what} that fits in 64 bits"),
                    found: digits,
                })
            }
            _ => Err(self.error(what)),
        }
    }

    // base := 'x' nat | nat ('/' nat)? | '(' compose ')' | '<' args '>' | ident '(' args ')'
    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Var(i) => {
                self.bump();
                Ok(Expr::new(pos, ExprKind::Var(i)))
            }
            Tok::Nat(num) => {
                self.bump();
                let text = if self.eat(&Tok::Slash) {
                    match self.peek().clone() {
                        Tok::Nat(den) => {
                            self.bump();
                            format!("{num}/{den}")
                        }
                        _ => return Err(self.error("a denominator")),
                    }
                } else {
                    num
                };
                Ok(Expr::new(pos, ExprKind::Scalar(text)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.compose()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::LAngle => {
                self.bump();
                let items = self.args(Tok::RAngle, "`,` or `>`")?;
                Ok(Expr::new(pos, ExprKind::Tuple(items)))
            }
            Tok::Ident(name) => {
                self.bump();
                self.expect(Tok::LParen, "`(` after a function name")?;
                let args = self.args(Tok::RParen, "`,` or `)`")?;
                let kind = match Op::from_ident(&name) {
                    Some(op) => ExprKind::Apply(op, args),
                    None => ExprKind::Call(name, args),
                };
                Ok(Expr::new(pos, kind))
            }
            _ => Err(self.error(OPERAND)),
        }
    }

    fn args(&mut self, close: Tok, expected: &str) -> Result<Vec<Expr>> {
        let mut items = vec![self.compose()?];
        while self.eat(&Tok::Comma) {
            items.push(self.compose()?);
        }
        self.expect(close, expected)?;
        Ok(items)
    }
}
