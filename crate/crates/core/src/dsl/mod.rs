//! A small expression language for maps, combinators and queries.
//!
//! The grammar lives in `docs/grammar.ebnf`. Variables are `x0, x1, ..`;
//! `D(e)` doubles the variable space, printing tangent variables in the upper
//! half. Order arguments come first: `NTH(k, e)`, `M(n, e)`, `T(n, e)`.

mod ast;
mod elaborate;
mod lexer;
mod parser;

use std::fmt;
use std::str::FromStr;

pub use ast::{Expr, ExprKind, Op};
pub use elaborate::{elaborate, Outcome, Surface};
pub use lexer::{tokenize, Tok, Token};
pub use parser::parse;

use crate::diffcomb::PolyModel;
use crate::error::{Error, Result};
use crate::jets::JetModel;
use crate::poly::PolyMap;
use crate::scalars::Semiring;

/// Which category expressions are evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Poly,
    Jet(usize),
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModelKind> {
        let unknown = || Error::UnknownModel(s.to_string());
        match s {
            "poly" => Ok(ModelKind::Poly),
            _ => {
                let k: usize = s
                    .strip_prefix("jet:")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(unknown)?;
                if k == 0 {
                    return Err(unknown());
                }
                Ok(ModelKind::Jet(k))
            }
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Poly => f.write_str("poly"),
            ModelKind::Jet(k) => write!(f, "jet:{k}"),
        }
    }
}

/// A semiring and a model, validated together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Session {
    ring: Semiring,
    model: ModelKind,
}

impl Session {
    pub fn new(ring: Semiring, model: ModelKind) -> Result<Session> {
        if let ModelKind::Jet(_) = model {
            if ring != Semiring::Rat {
                return Err(Error::JetNeedsRationals(ring.to_string()));
            }
        }
        Ok(Session { ring, model })
    }

    pub fn ring(&self) -> Semiring {
        self.ring
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn eval(&self, text: &str, arity: Option<usize>) -> Result<Outcome> {
        let e = parse(text)?;
        match self.model {
            ModelKind::Poly => elaborate(&PolyModel::new(self.ring), &e, arity),
            ModelKind::Jet(k) => elaborate(&JetModel::new(k)?, &e, arity),
        }
    }
}

/// Canonical text of a map; parsing it back yields the same map.
pub fn pretty_print(m: &PolyMap) -> String {
    m.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_map_with, CoeffPool};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eval(ring: &str, model: &str, text: &str) -> String {
        let s = Session::new(ring.parse().unwrap(), model.parse().unwrap()).unwrap();
        match s.eval(text, None) {
            Ok(o) => o.to_string(),
            Err(e) => format!("error: {e}"),
        }
    }

    fn rat(text: &str) -> String {
        eval("rat", "poly", text)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(rat("D(x0^2)"), "2*x0*x1");
        assert_eq!(rat("M(2, 3 + 2*x0 + 5*x0^2)"), "5*x0^2");
        assert_eq!(rat("T(1, 3 + 2*x0 + 5*x0^2)"), "3 + 2*x0");
        assert_eq!(rat("DIST(x0 + x0^2, x0 + 7*x0^2)"), "2^-2");
        assert_eq!(rat("DEG(x0^2)"), "2");
        assert_eq!(eval("zmod:2", "poly", "D(x0^2)"), "0");
        assert_eq!(eval("zmod:2", "poly", "DEG(x0^2)"), "0");
        assert_eq!(rat("<x0, x0^2>"), "<x0, x0^2>");
        assert_eq!(rat("x0 - x0"), "0");
    }

    #[test]
    fn composition_and_tuples() {
        assert_eq!(rat("x0*x1 . <x0 + 1, x0>"), "x0 + x0^2");
        assert_eq!(rat("<x1, x0> . <x0, 2*x0>"), "<2*x0, x0>");
        assert_eq!(rat("2*<x0, x1>"), "<2*x0, 2*x1>");
        assert_eq!(rat("LIN(x0 + x0^2)"), "x0");
        assert_eq!(rat("NTH(2, x0^3)"), "6*x0*x1*x2");
    }

    #[test]
    fn capability_errors() {
        let nat = |t| eval("nat", "poly", t);
        assert!(nat("DIST(x0, x0^2)").contains("requires ℚ≥0-algebra"));
        assert!(nat("M(1, x0)").contains("requires ℚ≥0-algebra"));
        assert!(nat("x0 - x1").contains("subtraction needs additive inverses"));
        assert_eq!(nat("D(x0^2 + x0)"), "x1 + 2*x0*x1");
        assert!(eval("zmod:3", "poly", "1/2*x0").contains("invalid scalar"));
    }

    #[test]
    fn arity_errors_name_the_subterm() {
        assert_eq!(rat("D(x0) + x3"), "error: line 1, column 7: operand mentions x3 but the domain has arity 2");
        assert_eq!(rat("x0 + <x0, x1>"), "error: line 1, column 4: arity mismatch in map sum: expected 1, found 2");
        assert!(rat("x2 . <x0, x1>").contains("outer map mentions x2"));
        assert!(rat("D(x0, x1)").contains("D takes 1 argument"));
        assert!(rat("expm1(x0)").contains("unknown function `expm1`"));
        assert!(rat("DIST(x0, x0) + 1").contains("DIST yields a distance"));
    }

    #[test]
    fn jets() {
        let jet = |t| eval("rat", "jet:3", t);
        assert_eq!(jet("expm1(expm1(x0))"), "x0 + x0^2 + 5/6*x0^3");
        assert_eq!(jet("sin(x0)"), "x0 - 1/6*x0^3");
        assert_eq!(jet("x0^2 * x0^2"), "0");
        assert!(jet("1 + x0").contains("not pointed"));
        assert_eq!(jet("expm1(x0) - x0 + 1 - 1"), "1/2*x0^2 + 1/6*x0^3");
        assert_eq!(jet("DIST(expm1(x0), sin(x0))"), "2^-2");
        assert!(Session::new(Semiring::Nat, ModelKind::Jet(3)).is_err());
    }

    #[test]
    fn model_tokens() {
        assert_eq!("poly".parse::<ModelKind>().unwrap(), ModelKind::Poly);
        assert_eq!("jet:8".parse::<ModelKind>().unwrap(), ModelKind::Jet(8));
        assert!("jet:0".parse::<ModelKind>().is_err());
        assert!("jet".parse::<ModelKind>().is_err());
    }

    #[test]
    fn printer_examples() {
        assert_eq!(pretty_print(&PolyMap::zero_map(Semiring::Rat, 2, 1)), "0");
        assert_eq!(rat("2*x0*x1"), "2*x0*x1");
    }

    /// Parse a printed map back, pinning the domain to the original's.
    fn round_trip(m: &PolyMap) -> PolyMap {
        let s = Session::new(m.ring(), ModelKind::Poly).unwrap();
        match s.eval(&pretty_print(m), Some(m.domain_arity())).unwrap() {
            Outcome::Map(back) => back,
            other => panic!("not a map: {other}"),
        }
    }

    #[test]
    fn round_trip_500_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rings = [Semiring::Rat, Semiring::Nat, Semiring::ZMod(5)];
        for i in 0..500 {
            let ring = rings[i % rings.len()];
            let pool = match ring {
                Semiring::Rat => CoeffPool::SmallRationals { numerator: 5, denominator: 4 },
                _ => CoeffPool::SmallIntegers { bound: 4 },
            };
            let (n, m, d) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(0..=4));
            let f = random_map_with(&mut rng, ring, pool, n, m, d);
            assert_eq!(round_trip(&f), f, "map {i}: {f}");
        }
    }

    fn sprinkle(text: &str, seed: u64) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tokens = tokenize(text).unwrap();
        let mut out = String::new();
        let mut last = 0;
        let offsets: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
        for t in &tokens[1..] {
            let start = offsets.get(t.pos.column - 1).copied().unwrap_or(text.len());
            out.push_str(&text[last..start]);
            for _ in 0..rng.gen_range(0..3) {
                out.push([' ', '\n', '\t'][rng.gen_range(0..3)]);
            }
            last = start;
        }
        out.push_str(&text[last..]);
        out
    }

    proptest! {
        #[test]
        fn whitespace_does_not_change_the_tree(seed in any::<u64>(), which in 0usize..4) {
            let texts = [
                "3 + 2*x0 + 5*x0^2",
                "M(2, 3 + 2*x0 + 5*x0^2)",
                "DIST(x0 + x0^2, x0 + 7*x0^2)",
                "x0*x1 . <x0 + 1, -1/2*x0>",
            ];
            let text = texts[which];
            let spaced = sprinkle(text, seed);
            prop_assert_eq!(parse(&spaced).unwrap().to_string(), parse(text).unwrap().to_string());
            prop_assert_eq!(parse(text).unwrap(), parse(text).unwrap());
        }
    }
}
