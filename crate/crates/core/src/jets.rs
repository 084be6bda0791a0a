//! Pointed jets: power series at 0 with zero constant term, truncated at a
//! global order `K`, with exact rational coefficients.
//!
//! Pointedness makes composition well defined on truncations: the terms of
//! `g` above order `K` cannot reach order `K` of `g ∘ f` when `f(0) = 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{d_distance, DyadicDistance};
use crate::model::{Model, SampleModel};
use crate::poly::{compose_capped, Monomial, Poly, PolyMap, PolyMapJson};
use crate::random::{random_graded_map, random_scalar, CoeffPool};
use crate::scalars::{Scalar, Semiring};
use crate::taylor::taylor_monomial;

pub const DEFAULT_ORDER: usize = 8;

const Q: Semiring = Semiring::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetMap {
    order: usize,
    inner: PolyMap,
}

impl JetMap {
    /// Truncates `map` at `order`. Fails unless the map is over ℚ and every
    /// component has zero constant term.
    pub fn new(order: usize, map: PolyMap) -> Result<JetMap> {
        if map.ring() != Q {
            return Err(Error::JetNeedsRationals(map.ring().to_string()));
        }
        if let Some(i) = map.components().iter().position(|p| !p.constant_term().is_zero()) {
            return Err(Error::NotPointed { component: i });
        }
        Ok(JetMap {
            order,
            inner: map.truncate(order),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_poly(&self) -> &PolyMap {
        &self.inner
    }

    pub fn domain_arity(&self) -> usize {
        self.inner.domain_arity()
    }

    pub fn codomain_arity(&self) -> usize {
        self.inner.codomain_arity()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// The same germ seen at a lower order.
    pub fn truncate_to(&self, order: usize) -> JetMap {
        JetMap {
            order: order.min(self.order),
            inner: self.inner.truncate(order),
        }
    }

    /// The coefficient of `x0^k` in the first component.
    pub fn coefficient(&self, k: u32) -> Scalar {
        self.inner.component(0).coeff(&Monomial::from_pairs([(0, k)]))
    }

    pub fn to_json(&self) -> JetMapJson {
        JetMapJson {
            order: self.order,
            pointed: true,
            map: self.inner.to_json(),
        }
    }

    pub fn from_json(j: &JetMapJson) -> Result<JetMap> {
        if !j.pointed {
            return Err(Error::Format("jet header must say pointed: true".into()));
        }
        JetMap::new(j.order, PolyMap::from_json(&j.map)?)
    }
}

impl fmt::Display for JetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetMapJson {
    pub order: usize,
    pub pointed: bool,
    #[serde(flatten)]
    pub map: PolyMapJson,
}

fn same_order(a: &JetMap, b: &JetMap) -> Result<()> {
    if a.order != b.order {
        return Err(Error::OrderMismatch {
            left: a.order,
            right: b.order,
        });
    }
    Ok(())
}

/// `g ∘ f`: substitution, truncated at the common order.
pub fn jet_compose(g: &JetMap, f: &JetMap) -> Result<JetMap> {
    same_order(g, f)?;
    let inner = compose_capped(&g.inner, &f.inner, Some(g.order))?;
    Ok(JetMap { order: g.order, inner })
}

pub fn jet_diff(f: &JetMap) -> JetMap {
    JetMap {
        order: f.order,
        inner: crate::diff(&f.inner).truncate(f.order),
    }
}

/// The classical series coefficient of `x^k`.
pub fn primitive_coefficient(name: &str, k: u64) -> Result<BigRational> {
    let r = |n: i64, d: BigInt| BigRational::new(BigInt::from(n), d);
    let factorial = |n: u64| (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let odd = k % 2 == 1;
    let sign = |j: u64| if j.is_multiple_of(2) { 1 } else { -1 };
    Ok(match name {
        "expm1" if k >= 1 => r(1, factorial(k)),
        "sin" if odd => r(sign((k - 1) / 2), factorial(k)),
        "log1p" if k >= 1 => r(sign(k + 1), BigInt::from(k)),
        "atan" if odd => r(sign((k - 1) / 2), BigInt::from(k)),
        "expm1" | "sin" | "log1p" | "atan" => BigRational::zero(),
        other => return Err(Error::UnknownPrimitive(other.to_string())),
    })
}

pub const PRIMITIVES: [&str; 4] = ["expm1", "sin", "log1p", "atan"];

/// A univariate primitive as a jet of order `order`.
pub fn jet_primitive(name: &str, order: usize) -> Result<JetMap> {
    if order == 0 {
        return Err(Error::UnknownModel(format!("jet:{order}")));
    }
    let mut terms = Vec::new();
    for k in 1..=order as u64 {
        let c = primitive_coefficient(name, k)?;
        if !c.is_zero() {
            terms.push((Monomial::from_pairs([(0, k as u32)]), Scalar::Rat(c)));
        }
    }
    JetMap::new(order, PolyMap::scalar(Poly::from_terms(Q, 1, terms)?))
}

/// The jet model at a fixed truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetModel {
    order: usize,
}

impl JetModel {
    pub fn new(order: usize) -> Result<JetModel> {
        if order == 0 {
            return Err(Error::UnknownModel(format!("jet:{order}")));
        }
        Ok(JetModel { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Lifts a polynomial map into this model.
    pub fn jet(&self, map: PolyMap) -> Result<JetMap> {
        JetMap::new(self.order, map)
    }

    fn wrap(&self, inner: PolyMap) -> JetMap {
        JetMap {
            order: self.order,
            inner: inner.truncate(self.order),
        }
    }

    fn random(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, lo: usize, hi: usize) -> JetMap {
        let hi = hi.min(self.order);
        if lo > hi {
            return self.zero_map(domain, codomain);
        }
        let pool = CoeffPool::SmallRationals { numerator: 3, denominator: 2 };
        self.wrap(random_graded_map(rng, Q, pool, domain, codomain, lo, hi))
    }
}

impl Model for JetModel {
    type Map = JetMap;

    fn ring(&self) -> Semiring {
        Q
    }

    fn identity(&self, n: usize) -> JetMap {
        self.wrap(PolyMap::identity(Q, n))
    }

    fn projection(&self, blocks: &[usize], j: usize) -> Result<JetMap> {
        Ok(self.wrap(PolyMap::projection(Q, blocks, j)?))
    }

    fn pair(&self, domain: usize, maps: &[JetMap]) -> Result<JetMap> {
        for m in maps {
            if m.order != self.order {
                return Err(Error::OrderMismatch {
                    left: self.order,
                    right: m.order,
                });
            }
        }
        let inner: Vec<PolyMap> = maps.iter().map(|m| m.inner.clone()).collect();
        Ok(self.wrap(PolyMap::pair(Q, domain, &inner)?))
    }

    fn compose(&self, g: &JetMap, f: &JetMap) -> Result<JetMap> {
        jet_compose(g, f)
    }

    fn add(&self, f: &JetMap, g: &JetMap) -> Result<JetMap> {
        same_order(f, g)?;
        Ok(self.wrap(f.inner.add(&g.inner)?))
    }

    fn scale(&self, r: &Scalar, f: &JetMap) -> JetMap {
        self.wrap(f.inner.scale(r))
    }

    fn zero_map(&self, n: usize, m: usize) -> JetMap {
        self.wrap(PolyMap::zero_map(Q, n, m))
    }

    fn diff(&self, f: &JetMap) -> JetMap {
        jet_diff(f)
    }

    fn domain(&self, f: &JetMap) -> usize {
        f.domain_arity()
    }

    fn codomain(&self, f: &JetMap) -> usize {
        f.codomain_arity()
    }

    fn degree_bound(&self, f: &JetMap) -> usize {
        f.inner.total_degree()
    }

    fn truncation_order(&self) -> Option<usize> {
        Some(self.order)
    }
}

impl SampleModel for JetModel {
    fn random_map(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, max_degree: usize) -> JetMap {
        self.random(rng, domain, codomain, 1, max_degree)
    }

    /// The only pointed D-constant is zero.
    fn random_constant(&self, _rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> JetMap {
        self.zero_map(domain, codomain)
    }

    fn random_linear(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> JetMap {
        self.random(rng, domain, codomain, 1, 1)
    }

    fn random_homogeneous(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, degree: usize) -> JetMap {
        if degree == 0 {
            return self.zero_map(domain, codomain);
        }
        self.random(rng, domain, codomain, degree, degree)
    }

    fn random_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar {
        random_scalar(rng, Q, CoeffPool::SmallRationals { numerator: 3, denominator: 2 })
    }
}

/// `M^(n)[f]` in the jet model; `n` may not exceed the order.
pub fn jet_taylor_monomial(f: &JetMap, n: usize) -> Result<JetMap> {
    taylor_monomial(&JetModel::new(f.order)?, f, n)
}

pub fn jet_distance(f: &JetMap, g: &JetMap) -> Result<DyadicDistance> {
    same_order(f, g)?;
    d_distance(&JetModel::new(f.order)?, f, g)
}
