//! A deliberately broken combinator used to show the checkers have teeth.

use rand_chacha::ChaCha8Rng;

use super::PolyModel;
use crate::error::Result;
use crate::model::{Model, SampleModel};
use crate::poly::{Monomial, Poly, PolyMap};
use crate::scalars::{Scalar, Semiring};

/// k-POLY with a power rule that forgets its factor: `x^e ↦ x^(e-1) · y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerRuleMutant {
    pub inner: PolyModel,
}

impl PowerRuleMutant {
    pub fn new(ring: Semiring) -> Self {
        PowerRuleMutant {
            inner: PolyModel::new(ring),
        }
    }
}

fn mutant_diff(f: &PolyMap) -> PolyMap {
    let n = f.domain_arity();
    let ring = f.ring();
    let components = f
        .components()
        .iter()
        .map(|p| {
            let mut terms = Vec::new();
            for (mono, c) in p.terms() {
                for &(v, e) in mono.exponents() {
                    let mut pairs: Vec<(usize, u32)> = mono
                        .exponents()
                        .iter()
                        .map(|&(w, d)| if w == v { (w, e - 1) } else { (w, d) })
                        .filter(|&(_, d)| d > 0)
                        .collect();
                    pairs.push((n + v, 1));
                    terms.push((Monomial::from_pairs(pairs), c.clone()));
                }
            }
            Poly::from_terms(ring, 2 * n, terms).unwrap()
        })
        .collect();
    PolyMap::new(ring, 2 * n, components).unwrap()
}

impl Model for PowerRuleMutant {
    type Map = PolyMap;

    fn ring(&self) -> Semiring {
        self.inner.ring()
    }
    fn identity(&self, n: usize) -> PolyMap {
        self.inner.identity(n)
    }
    fn projection(&self, blocks: &[usize], j: usize) -> Result<PolyMap> {
        self.inner.projection(blocks, j)
    }
    fn pair(&self, domain: usize, maps: &[PolyMap]) -> Result<PolyMap> {
        self.inner.pair(domain, maps)
    }
    fn compose(&self, g: &PolyMap, f: &PolyMap) -> Result<PolyMap> {
        self.inner.compose(g, f)
    }
    fn add(&self, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
        self.inner.add(f, g)
    }
    fn scale(&self, r: &Scalar, f: &PolyMap) -> PolyMap {
        self.inner.scale(r, f)
    }
    fn zero_map(&self, n: usize, m: usize) -> PolyMap {
        self.inner.zero_map(n, m)
    }
    fn diff(&self, f: &PolyMap) -> PolyMap {
        mutant_diff(f)
    }
    fn domain(&self, f: &PolyMap) -> usize {
        self.inner.domain(f)
    }
    fn codomain(&self, f: &PolyMap) -> usize {
        self.inner.codomain(f)
    }
    fn degree_bound(&self, f: &PolyMap) -> usize {
        self.inner.degree_bound(f)
    }
}

impl SampleModel for PowerRuleMutant {
    fn random_map(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, max_degree: usize) -> PolyMap {
        self.inner.random_map(rng, domain, codomain, max_degree)
    }
    fn random_constant(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> PolyMap {
        self.inner.random_constant(rng, domain, codomain)
    }
    fn random_linear(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> PolyMap {
        self.inner.random_linear(rng, domain, codomain)
    }
    fn random_homogeneous(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, degree: usize) -> PolyMap {
        self.inner.random_homogeneous(rng, domain, codomain, degree)
    }
    fn random_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar {
        self.inner.random_scalar(rng)
    }
}
