//! Deterministic random polynomial maps.
//!
//! All generation goes through `ChaCha8Rng`, whose stream is stable across
//! platforms and crate versions, so a seed pins the map exactly.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, Poly, PolyMap};
use crate::scalars::{Scalar, Semiring};

/// Where coefficients are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffPool {
    /// Integers with `|c| <= bound` (non-negative over ℕ, reduced mod m over ℤ/mℤ).
    SmallIntegers { bound: u32 },
    /// Fractions `p/q` with `|p| <= numerator`, `1 <= q <= denominator` (ℚ only;
    /// other semirings fall back to integers).
    SmallRationals { numerator: u32, denominator: u32 },
}

impl Default for CoeffPool {
    fn default() -> Self {
        CoeffPool::SmallIntegers { bound: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomMapSpec {
    pub semiring: String,
    pub domain: usize,
    pub codomain: usize,
    pub max_degree: usize,
    pub coeffs: CoeffPool,
    pub seed: u64,
}

impl RandomMapSpec {
    pub fn new(ring: Semiring, domain: usize, codomain: usize, max_degree: usize, seed: u64) -> Self {
        RandomMapSpec {
            semiring: ring.to_string(),
            domain,
            codomain,
            max_degree,
            coeffs: CoeffPool::default(),
            seed,
        }
    }
}

/// Deterministic given the spec: same seed, same map.
pub fn random_poly_map(spec: &RandomMapSpec) -> crate::Result<PolyMap> {
    let ring: Semiring = spec.semiring.parse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(random_map_with(
        &mut rng,
        ring,
        spec.coeffs,
        spec.domain,
        spec.codomain,
        spec.max_degree,
    ))
}

pub fn random_nonzero_scalar(rng: &mut ChaCha8Rng, ring: Semiring, pool: CoeffPool) -> Scalar {
    loop {
        let s = random_scalar(rng, ring, pool);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_scalar(rng: &mut ChaCha8Rng, ring: Semiring, pool: CoeffPool) -> Scalar {
    match (ring, pool) {
        (Semiring::Rat, CoeffPool::SmallRationals { numerator, denominator }) => {
            let p = rng.gen_range(-(numerator as i64)..=numerator as i64);
            let q = rng.gen_range(1..=denominator.max(1) as i64);
            ring.from_fraction(&BigInt::from(p), &BigInt::from(q))
                .expect("valid fraction")
        }
        (Semiring::Rat, CoeffPool::SmallIntegers { bound }) => {
            ring.from_i64(rng.gen_range(-(bound as i64)..=bound as i64)).unwrap()
        }
        (Semiring::Nat, pool) => ring.nat_embed(rng.gen_range(0..=pool_bound(pool) as u64)),
        (Semiring::ZMod(m), _) => ring.nat_embed(rng.gen_range(0..m)),
    }
}

fn pool_bound(pool: CoeffPool) -> u32 {
    match pool {
        CoeffPool::SmallIntegers { bound } => bound,
        CoeffPool::SmallRationals { numerator, .. } => numerator,
    }
}

/// A random monomial of total degree exactly `degree` in `arity` variables.
pub fn random_monomial(rng: &mut ChaCha8Rng, arity: usize, degree: usize) -> Monomial {
    if arity == 0 {
        return Monomial::one();
    }
    Monomial::from_pairs((0..degree).map(|_| (rng.gen_range(0..arity), 1)))
}

fn random_poly(
    rng: &mut ChaCha8Rng,
    ring: Semiring,
    pool: CoeffPool,
    arity: usize,
    degrees: impl Fn(&mut ChaCha8Rng) -> usize,
) -> Poly {
    let max_degree_possible = if arity == 0 { 0 } else { usize::MAX };
    for _attempt in 0..64 {
        let terms = rng.gen_range(1..=4);
        let mut p = Poly::zero(ring, arity);
        for _ in 0..terms {
            let d = degrees(rng).min(max_degree_possible);
            let m = random_monomial(rng, arity, d);
            let c = random_nonzero_scalar(rng, ring, pool);
            p = p.add(&Poly::from_terms(ring, arity, [(m, c)]).unwrap()).unwrap();
        }
        if !p.is_zero() {
            return p;
        }
    }
    Poly::zero(ring, arity)
}

pub fn random_map_with(
    rng: &mut ChaCha8Rng,
    ring: Semiring,
    pool: CoeffPool,
    domain: usize,
    codomain: usize,
    max_degree: usize,
) -> PolyMap {
    let components = (0..codomain)
        .map(|_| random_poly(rng, ring, pool, domain, |r| r.gen_range(0..=max_degree)))
        .collect();
    PolyMap::new(ring, domain, components).unwrap()
}

/// Like [`random_map_with`] but every term has degree in `[min_degree, max_degree]`.
pub fn random_graded_map(
    rng: &mut ChaCha8Rng,
    ring: Semiring,
    pool: CoeffPool,
    domain: usize,
    codomain: usize,
    min_degree: usize,
    max_degree: usize,
) -> PolyMap {
    let components = (0..codomain)
        .map(|_| {
            random_poly(rng, ring, pool, domain, |r| r.gen_range(min_degree..=max_degree))
        })
        .collect();
    PolyMap::new(ring, domain, components).unwrap()
}
