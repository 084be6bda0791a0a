//! Turning syntax into maps and query answers.
//!
//! Domains are inferred top-down. Polynomial subterms accept any domain large
//! enough for their variables; operator results such as `D(e)` have exactly
//! one. Polynomial arithmetic happens on plain [`PolyMap`]s and is converted
//! into the session model only where an operator needs it, so a jet literal
//! is checked for pointedness at operator boundaries and at the top.

use serde_json::{json, Value};
use std::fmt;

use super::ast::{Expr, ExprKind, Op};
use crate::diffcomb::{d_degree, nth_derivative, PolyModel};
use crate::error::{Error, Pos, Result};
use crate::jets::{jet_primitive, JetMap, JetModel};
use crate::metric::{d_distance, DyadicDistance};
use crate::model::Model;
use crate::poly::{Poly, PolyMap};
use crate::scalars::Semiring;
use crate::taylor::{linearization, taylor_monomial, taylor_polynomial};

/// The result of evaluating one expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Map(PolyMap),
    Jet(JetMap),
    Distance(DyadicDistance),
    Degree(Option<usize>),
}

impl Outcome {
    pub fn to_json(&self) -> Value {
        match self {
            Outcome::Map(m) => json!({"kind": "map", "text": m.to_string(), "map": m.to_json()}),
            Outcome::Jet(j) => json!({"kind": "jet", "text": j.to_string(), "jet": j.to_json()}),
            Outcome::Distance(d) => json!({"kind": "distance", "value": d.to_string()}),
            Outcome::Degree(d) => json!({"kind": "degree", "value": d}),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Map(m) => m.fmt(f),
            Outcome::Jet(j) => j.fmt(f),
            Outcome::Distance(d) => d.fmt(f),
            Outcome::Degree(Some(d)) => write!(f, "{d}"),
            Outcome::Degree(None) => f.write_str("none"),
        }
    }
}

/// A model the DSL can target.
pub trait Surface: Model {
    fn lift(&self, p: PolyMap) -> Result<Self::Map>;
    fn lower(&self, m: Self::Map) -> PolyMap;
    fn outcome(&self, m: Self::Map) -> Outcome;

    /// Drops what the model cannot see, keeping intermediate terms small.
    fn trim(&self, p: PolyMap) -> PolyMap {
        p
    }

    fn primitive(&self, _name: &str) -> Option<Result<Self::Map>> {
        None
    }
}

impl Surface for PolyModel {
    fn lift(&self, p: PolyMap) -> Result<PolyMap> {
        Ok(p)
    }
    fn lower(&self, m: PolyMap) -> PolyMap {
        m
    }
    fn outcome(&self, m: PolyMap) -> Outcome {
        Outcome::Map(m)
    }
}

impl Surface for JetModel {
    fn lift(&self, p: PolyMap) -> Result<JetMap> {
        self.jet(p)
    }
    fn lower(&self, m: JetMap) -> PolyMap {
        m.as_poly().clone()
    }
    fn outcome(&self, m: JetMap) -> Outcome {
        Outcome::Jet(m)
    }
    fn trim(&self, p: PolyMap) -> PolyMap {
        p.truncate(self.order())
    }
    fn primitive(&self, name: &str) -> Option<Result<JetMap>> {
        crate::jets::PRIMITIVES
            .contains(&name)
            .then(|| jet_primitive(name, self.order()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Demand {
    /// Any domain of at least this size.
    Flexible(usize),
    Fixed(usize),
}

impl Demand {
    fn resolve(self) -> usize {
        match self {
            Demand::Flexible(n) | Demand::Fixed(n) => n,
        }
    }
}

fn fail(pos: Pos, message: impl Into<String>) -> Error {
    Error::Elaboration {
        pos,
        message: message.into(),
    }
}

/// Attaches a position to errors raised by the core operations.
fn at(pos: Pos) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Syntax { .. } | Error::Elaboration { .. } => e,
        other => fail(pos, other.to_string()),
    }
}

fn fit(d: Demand, n: usize, pos: Pos, what: &str) -> Result<()> {
    match d {
        Demand::Fixed(a) if a != n => Err(fail(pos, format!("{what} has domain {a}, expected {n}"))),
        Demand::Flexible(m) if m > n => Err(fail(
            pos,
            format!("{what} mentions x{} but the domain has arity {n}", m - 1),
        )),
        _ => Ok(()),
    }
}

fn join(a: Demand, b: Demand, pos: Pos) -> Result<Demand> {
    use Demand::*;
    match (a, b) {
        (Flexible(x), Flexible(y)) => Ok(Flexible(x.max(y))),
        (Fixed(x), Fixed(y)) if x != y => Err(fail(pos, format!("operands have domains {x} and {y}"))),
        (Fixed(x), other) | (other, Fixed(x)) => {
            fit(other, x, pos, "operand")?;
            Ok(Fixed(x))
        }
    }
}

fn arg_count(e: &Expr, name: &str, args: &[Expr], want: usize) -> Result<()> {
    if args.len() != want {
        return Err(fail(
            e.pos,
            format!("{name} takes {want} argument(s), found {}", args.len()),
        ));
    }
    Ok(())
}

fn order_arg(e: &Expr) -> Result<usize> {
    match &e.kind {
        ExprKind::Scalar(s) if !s.contains('/') => s
            .parse()
            .map_err(|_| fail(e.pos, format!("order `{s}` is too large"))),
        _ => Err(fail(e.pos, "expected a natural number order")),
    }
}

struct Elab<'a, S> {
    model: &'a S,
    ring: Semiring,
}

impl<S: Surface> Elab<'_, S> {
    fn demand(&self, e: &Expr) -> Result<Demand> {
        Ok(match &e.kind {
            ExprKind::Var(i) => Demand::Flexible(i + 1),
            ExprKind::Scalar(_) => Demand::Flexible(0),
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => self.demand(a)?,
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
                join(self.demand(a)?, self.demand(b)?, e.pos)?
            }
            ExprKind::Tuple(items) => {
                let mut d = Demand::Flexible(0);
                for item in items {
                    d = join(d, self.demand(item)?, item.pos)?;
                }
                d
            }
            ExprKind::Compose(_, f) => self.demand(f)?,
            ExprKind::Apply(op, args) => match op {
                Op::Diff => {
                    arg_count(e, "D", args, 1)?;
                    Demand::Fixed(2 * self.demand(&args[0])?.resolve())
                }
                Op::Nth => {
                    arg_count(e, "NTH", args, 2)?;
                    let k = order_arg(&args[0])?;
                    let n = self.demand(&args[1])?.resolve();
                    let total = (k.checked_add(1)).and_then(|b| b.checked_mul(n));
                    Demand::Fixed(total.ok_or_else(|| fail(e.pos, "derivative order is too large"))?)
                }
                Op::Mono | Op::TaylorPoly => {
                    arg_count(e, op.name(), args, 2)?;
                    order_arg(&args[0])?;
                    self.demand(&args[1])?
                }
                Op::Linearize => {
                    arg_count(e, "LIN", args, 1)?;
                    self.demand(&args[0])?
                }
                Op::Dist => return Err(fail(e.pos, "DIST yields a distance, not a map")),
                Op::Degree => return Err(fail(e.pos, "DEG yields a number, not a map")),
            },
            ExprKind::Call(name, args) => {
                arg_count(e, name, args, 1)?;
                self.demand(&args[0])?
            }
        })
    }

    fn lift(&self, e: &Expr, p: PolyMap) -> Result<S::Map> {
        self.model.lift(p).map_err(at(e.pos))
    }

    fn require_negation(&self, pos: Pos) -> Result<()> {
        if self.ring.has_negation() {
            Ok(())
        } else {
            Err(fail(pos, format!("subtraction needs additive inverses, which {} lacks", self.ring)))
        }
    }

    fn scalar_valued(&self, e: &Expr, m: &PolyMap) -> Result<()> {
        if m.codomain_arity() != 1 {
            return Err(fail(
                e.pos,
                format!("expected a scalar-valued map, found codomain {}", m.codomain_arity()),
            ));
        }
        Ok(())
    }

    fn map(&self, e: &Expr, n: usize) -> Result<PolyMap> {
        let ring = self.ring;
        Ok(match &e.kind {
            ExprKind::Var(i) => {
                fit(Demand::Flexible(i + 1), n, e.pos, "expression")?;
                PolyMap::scalar(Poly::var(ring, n, *i))
            }
            ExprKind::Scalar(s) => {
                let c = ring.parse_scalar(s).map_err(at(e.pos))?;
                PolyMap::scalar(Poly::constant(ring, n, c))
            }
            ExprKind::Neg(a) => {
                self.require_negation(e.pos)?;
                self.map(a, n)?.neg().expect("ring has negation")
            }
            ExprKind::Add(a, b) => self.map(a, n)?.add(&self.map(b, n)?).map_err(at(e.pos))?,
            ExprKind::Sub(a, b) => {
                self.require_negation(e.pos)?;
                let rhs = self.map(b, n)?.neg().expect("ring has negation");
                self.map(a, n)?.add(&rhs).map_err(at(e.pos))?
            }
            ExprKind::Mul(a, b) => {
                let (fa, fb) = (self.map(a, n)?, self.map(b, n)?);
                let (s, v) = match (fa.codomain_arity(), fb.codomain_arity()) {
                    (1, _) => (fa, fb),
                    (_, 1) => (fb, fa),
                    (x, y) => {
                        return Err(fail(
                            e.pos,
                            format!("a product needs a scalar-valued factor, found codomains {x} and {y}"),
                        ))
                    }
                };
                let comps = v
                    .components()
                    .iter()
                    .map(|p| s.component(0).mul(p))
                    .collect::<Result<Vec<_>>>()
                    .map_err(at(e.pos))?;
                self.model.trim(PolyMap::new(ring, n, comps).map_err(at(e.pos))?)
            }
            ExprKind::Pow(a, k) => {
                let base = self.map(a, n)?;
                self.scalar_valued(a, &base)?;
                self.model.trim(PolyMap::scalar(base.component(0).pow(*k)))
            }
            ExprKind::Tuple(items) => {
                let mut comps = Vec::new();
                for item in items {
                    comps.extend(self.map(item, n)?.components().iter().cloned());
                }
                PolyMap::new(ring, n, comps).map_err(at(e.pos))?
            }
            ExprKind::Compose(g, f) => {
                let inner = self.map(f, n)?;
                let m = inner.codomain_arity();
                fit(self.demand(g)?, m, g.pos, "outer map")?;
                let outer = self.map(g, m)?;
                let (gm, fm) = (self.lift(g, outer)?, self.lift(f, inner)?);
                let gf = self.model.compose(&gm, &fm).map_err(at(e.pos))?;
                self.model.lower(gf)
            }
            ExprKind::Apply(op, args) => {
                fit(self.demand(e)?, n, e.pos, op.name())?;
                match op {
                    Op::Diff => {
                        let f = self.operand(&args[0], n / 2)?;
                        self.model.lower(self.model.diff(&f))
                    }
                    Op::Nth => {
                        let k = order_arg(&args[0])?;
                        let f = self.operand(&args[1], n / (k + 1))?;
                        self.model.lower(nth_derivative(self.model, &f, k).map_err(at(e.pos))?)
                    }
                    Op::Mono | Op::TaylorPoly => {
                        let k = order_arg(&args[0])?;
                        let f = self.operand(&args[1], n)?;
                        let r = if *op == Op::Mono {
                            taylor_monomial(self.model, &f, k)
                        } else {
                            taylor_polynomial(self.model, &f, k)
                        };
                        self.model.lower(r.map_err(at(e.pos))?)
                    }
                    Op::Linearize => {
                        let f = self.operand(&args[0], n)?;
                        self.model.lower(linearization(self.model, &f).map_err(at(e.pos))?)
                    }
                    Op::Dist | Op::Degree => unreachable!("rejected by demand"),
                }
            }
            ExprKind::Call(name, args) => {
                let prim = match self.model.primitive(name) {
                    Some(p) => p.map_err(at(e.pos))?,
                    None => return Err(fail(e.pos, format!("unknown function `{name}`"))),
                };
                let inner = self.map(&args[0], n)?;
                self.scalar_valued(&args[0], &inner)?;
                let f = self.lift(&args[0], inner)?;
                self.model.lower(self.model.compose(&prim, &f).map_err(at(e.pos))?)
            }
        })
    }

    fn operand(&self, e: &Expr, n: usize) -> Result<S::Map> {
        let m = self.map(e, n)?;
        self.lift(e, m)
    }

    fn settle(&self, d: Demand, hint: Option<usize>, pos: Pos) -> Result<usize> {
        match hint {
            Some(h) => {
                fit(d, h, pos, "expression")?;
                Ok(h)
            }
            None => Ok(d.resolve()),
        }
    }

    fn top(&self, e: &Expr, hint: Option<usize>) -> Result<Outcome> {
        match &e.kind {
            ExprKind::Apply(Op::Dist, args) => {
                arg_count(e, "DIST", args, 2)?;
                let d = join(self.demand(&args[0])?, self.demand(&args[1])?, e.pos)?;
                let n = self.settle(d, hint, e.pos)?;
                let f = self.operand(&args[0], n)?;
                let g = self.operand(&args[1], n)?;
                Ok(Outcome::Distance(d_distance(self.model, &f, &g).map_err(at(e.pos))?))
            }
            ExprKind::Apply(Op::Degree, args) => {
                arg_count(e, "DEG", args, 1)?;
                let n = self.settle(self.demand(&args[0])?, hint, e.pos)?;
                let f = self.operand(&args[0], n)?;
                Ok(Outcome::Degree(d_degree(self.model, &f).map_err(at(e.pos))?))
            }
            _ => {
                let n = self.settle(self.demand(e)?, hint, e.pos)?;
                Ok(self.model.outcome(self.operand(e, n)?))
            }
        }
    }
}

/// Evaluates `e` in `model`. With `arity`, map results get exactly that domain.
pub fn elaborate<S: Surface>(model: &S, e: &Expr, arity: Option<usize>) -> Result<Outcome> {
    Elab {
        model,
        ring: model.ring(),
    }
    .top(e, arity)
}
