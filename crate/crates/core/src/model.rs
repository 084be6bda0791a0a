//! The interface a concrete Cartesian differential model provides.
//!
//! Everything derived from the differential combinator (higher derivatives,
//! Taylor pieces, distances, axiom checks) is written once against [`Model`]
//! and instantiated for the polynomial model and the jet model.

use std::fmt;

use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::scalars::{Scalar, Semiring};

pub trait Model {
    type Map: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn ring(&self) -> Semiring;

    fn identity(&self, n: usize) -> Self::Map;
    /// Projection from `blocks[0] × ... × blocks[k]` onto `blocks[j]`.
    fn projection(&self, blocks: &[usize], j: usize) -> Result<Self::Map>;
    /// `⟨f_0, ..., f_k⟩`; `domain` fixes the hom-set of the empty pairing.
    fn pair(&self, domain: usize, maps: &[Self::Map]) -> Result<Self::Map>;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map>;
    fn add(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map>;
    fn scale(&self, r: &Scalar, f: &Self::Map) -> Self::Map;
    fn zero_map(&self, n: usize, m: usize) -> Self::Map;
    /// The differential combinator: `D[f]: A × A -> B`, point first, tangent second.
    fn diff(&self, f: &Self::Map) -> Self::Map;

    fn equal(&self, f: &Self::Map, g: &Self::Map) -> bool {
        f == g
    }

    fn is_zero(&self, f: &Self::Map) -> bool {
        self.equal(f, &self.zero_map(self.domain(f), self.codomain(f)))
    }

    fn domain(&self, f: &Self::Map) -> usize;
    fn codomain(&self, f: &Self::Map) -> usize;

    /// A natural `b` with `∂^(n+1)[f] = 0` for every `n >= b`.
    fn degree_bound(&self, f: &Self::Map) -> usize;

    /// Global truncation order for quotient models; `None` when maps are exact.
    fn truncation_order(&self) -> Option<usize> {
        None
    }

    fn sum(&self, domain: usize, codomain: usize, maps: &[Self::Map]) -> Result<Self::Map> {
        let mut acc = self.zero_map(domain, codomain);
        for m in maps {
            acc = self.add(&acc, m)?;
        }
        Ok(acc)
    }
}

/// Models that can produce seeded random maps for the verification suites.
pub trait SampleModel: Model {
    /// A map of total degree at most `max_degree`.
    fn random_map(
        &self,
        rng: &mut ChaCha8Rng,
        domain: usize,
        codomain: usize,
        max_degree: usize,
    ) -> Self::Map;

    /// A D-constant map.
    fn random_constant(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> Self::Map;

    /// A nonzero D-linear map.
    fn random_linear(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> Self::Map;

    /// A homogeneous map of exactly degree `degree` (nonzero).
    fn random_homogeneous(
        &self,
        rng: &mut ChaCha8Rng,
        domain: usize,
        codomain: usize,
        degree: usize,
    ) -> Self::Map;

    fn random_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar;
}
