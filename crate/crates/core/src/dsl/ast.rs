use std::fmt;

use crate::error::Pos;

/// Reserved operator names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    /// `D(e)`
    Diff,
    /// `NTH(k, e)`
    Nth,
    /// `M(n, e)`
    Mono,
    /// `T(n, e)`
    TaylorPoly,
    /// `DIST(e1, e2)`
    Dist,
    /// `DEG(e)`
    Degree,
    /// `LIN(e)`
    Linearize,
}

impl Op {
    pub fn from_ident(name: &str) -> Option<Op> {
        Some(match name {
            "D" => Op::Diff,
            "NTH" => Op::Nth,
            "M" => Op::Mono,
            "T" => Op::TaylorPoly,
            "DIST" => Op::Dist,
            "DEG" => Op::Degree,
            "LIN" => Op::Linearize,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Diff => "D",
            Op::Nth => "NTH",
            Op::Mono => "M",
            Op::TaylorPoly => "T",
            Op::Dist => "DIST",
            Op::Degree => "DEG",
            Op::Linearize => "LIN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub pos: Pos,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Var(usize),
    /// Literal text, either `n` or `p/q`; interpreted in the session semiring.
    Scalar(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Tuple(Vec<Expr>),
    /// `g . f`, read as `g ∘ f`.
    Compose(Box<Expr>, Box<Expr>),
    /// A reserved operator; order arguments come first.
    Apply(Op, Vec<Expr>),
    /// Any other function name, e.g. a jet primitive.
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn new(pos: Pos, kind: ExprKind) -> Expr {
        Expr { pos, kind }
    }
}

/// Fully bracketed form, independent of source positions.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, args: &[Expr]) -> fmt::Result {
            write!(f, "({head}")?;
            for a in args {
                write!(f, " {a}")?;
            }
            f.write_str(")")
        }
        match &self.kind {
            ExprKind::Var(i) => write!(f, "x{i}"),
            ExprKind::Scalar(s) => f.write_str(s),
            ExprKind::Neg(e) => write!(f, "(neg {e})"),
            ExprKind::Add(a, b) => write!(f, "(+ {a} {b})"),
            ExprKind::Sub(a, b) => write!(f, "(- {a} {b})"),
            ExprKind::Mul(a, b) => write!(f, "(* {a} {b})"),
            ExprKind::Pow(a, e) => write!(f, "(^ {a} {e})"),
            ExprKind::Tuple(items) => list(f, "tuple", items),
            ExprKind::Compose(g, h) => write!(f, "(. {g} {h})"),
            ExprKind::Apply(op, args) => list(f, op.name(), args),
            ExprKind::Call(name, args) => list(f, name, args),
        }
    }
}
