//! The differential combinator and the higher-order calculus built on it.
//!
//! Layout convention for `∂^(k)[f]` with `f: n -> m`: the domain is
//! `(k+1)·n` variables split into blocks `a_0, a_1, .., a_k`, block `i`
//! occupying indices `[i·n, (i+1)·n)`. Block `a_0` is the point, the others
//! are tangent directions. For `k = 1` this is the `(x, y)` layout of `D[f]`.

mod checks;
mod mutant;

pub use checks::{
    check_cd_axioms, check_dpoly_closure, check_faa_di_bruno, check_hd_identities, CheckConfig,
};
pub(crate) use checks::{expect_eq, show};
pub use mutant::PowerRuleMutant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{bell, SetPartitions};
use crate::error::{Error, Result};
use crate::model::{Model, SampleModel};
use crate::poly::{compose, Poly, PolyMap};
use crate::random::{random_graded_map, random_map_with, random_nonzero_scalar, random_scalar, CoeffPool};
use crate::scalars::{Scalar, Semiring};

/// Default cap on the number of set partitions enumerated for Faà di Bruno.
pub const DEFAULT_PARTITION_BUDGET: u128 = 203; // Bell(6)

/// `D[p](x, y) = Σ_i ∂p/∂x_i(x) · y_i`, as a map `2n -> m`.
pub fn diff(f: &PolyMap) -> PolyMap {
    let n = f.domain_arity();
    let ring = f.ring();
    let components = f
        .components()
        .iter()
        .map(|p| {
            let mut acc = Poly::zero(ring, 2 * n);
            for i in 0..n {
                let d = p.partial_derivative(i);
                if d.is_zero() {
                    continue;
                }
                let term = d.pad(2 * n).mul(&Poly::var(ring, 2 * n, n + i)).unwrap();
                acc = acc.add(&term).unwrap();
            }
            acc
        })
        .collect();
    PolyMap::new(ring, 2 * n, components).unwrap()
}

/// The polynomial model over a fixed semiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyModel {
    pub ring: Semiring,
    pub pool: CoeffPool,
}

impl PolyModel {
    pub fn new(ring: Semiring) -> Self {
        let pool = match ring {
            Semiring::Rat => CoeffPool::SmallRationals { numerator: 3, denominator: 2 },
            _ => CoeffPool::SmallIntegers { bound: 3 },
        };
        PolyModel { ring, pool }
    }
}

impl Model for PolyModel {
    type Map = PolyMap;

    fn ring(&self) -> Semiring {
        self.ring
    }

    fn identity(&self, n: usize) -> PolyMap {
        PolyMap::identity(self.ring, n)
    }

    fn projection(&self, blocks: &[usize], j: usize) -> Result<PolyMap> {
        PolyMap::projection(self.ring, blocks, j)
    }

    fn pair(&self, domain: usize, maps: &[PolyMap]) -> Result<PolyMap> {
        PolyMap::pair(self.ring, domain, maps)
    }

    fn compose(&self, g: &PolyMap, f: &PolyMap) -> Result<PolyMap> {
        compose(g, f)
    }

    fn add(&self, f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
        f.add(g)
    }

    fn scale(&self, r: &Scalar, f: &PolyMap) -> PolyMap {
        f.scale(r)
    }

    fn zero_map(&self, n: usize, m: usize) -> PolyMap {
        PolyMap::zero_map(self.ring, n, m)
    }

    fn diff(&self, f: &PolyMap) -> PolyMap {
        diff(f)
    }

    fn is_zero(&self, f: &PolyMap) -> bool {
        f.is_zero()
    }

    fn domain(&self, f: &PolyMap) -> usize {
        f.domain_arity()
    }

    fn codomain(&self, f: &PolyMap) -> usize {
        f.codomain_arity()
    }

    /// Each differentiation lowers the point-degree of every term by one, so
    /// `∂^(d+1)` vanishes once `d` reaches the total degree.
    fn degree_bound(&self, f: &PolyMap) -> usize {
        f.total_degree()
    }
}

impl SampleModel for PolyModel {
    fn random_map(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, max_degree: usize) -> PolyMap {
        random_map_with(rng, self.ring, self.pool, domain, codomain, max_degree)
    }

    fn random_constant(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> PolyMap {
        // Over ℤ/pℤ, x^p is also a D-constant; mix those in.
        match self.ring {
            Semiring::ZMod(p) if p <= 3 && domain > 0 && rng.gen_bool(0.5) => {
                let comps = (0..codomain)
                    .map(|_| {
                        let v = rng.gen_range(0..domain);
                        Poly::var(self.ring, domain, v)
                            .pow(p as u32)
                            .scale(&random_nonzero_scalar(rng, self.ring, self.pool))
                    })
                    .collect();
                PolyMap::new(self.ring, domain, comps).unwrap()
            }
            _ => random_graded_map(rng, self.ring, self.pool, domain, codomain, 0, 0),
        }
    }

    fn random_linear(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize) -> PolyMap {
        random_graded_map(rng, self.ring, self.pool, domain, codomain, 1, 1)
    }

    fn random_homogeneous(&self, rng: &mut ChaCha8Rng, domain: usize, codomain: usize, degree: usize) -> PolyMap {
        random_graded_map(rng, self.ring, self.pool, domain, codomain, degree, degree)
    }

    fn random_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar {
        random_scalar(rng, self.ring, self.pool)
    }
}

/// Projections and tuples over a product of blocks `widths[0] × widths[1] × ...`.
pub(crate) struct Blocks<'a, M: Model> {
    model: &'a M,
    widths: Vec<usize>,
}

impl<'a, M: Model> Blocks<'a, M> {
    pub(crate) fn new(model: &'a M, widths: Vec<usize>) -> Self {
        Blocks { model, widths }
    }

    pub(crate) fn uniform(model: &'a M, width: usize, count: usize) -> Self {
        Blocks::new(model, vec![width; count])
    }

    pub(crate) fn total(&self) -> usize {
        self.widths.iter().sum()
    }

    pub(crate) fn pi(&self, i: usize) -> M::Map {
        self.model
            .projection(&self.widths, i)
            .expect("block index in range")
    }

    pub(crate) fn zero(&self, width: usize) -> M::Map {
        self.model.zero_map(self.total(), width)
    }

    pub(crate) fn tuple(&self, parts: &[M::Map]) -> M::Map {
        self.model
            .pair(self.total(), parts)
            .expect("parts share the block domain")
    }

    /// `⟨π_{idx[0]}, π_{idx[1]}, ...⟩`.
    pub(crate) fn select(&self, idx: &[usize]) -> M::Map {
        let parts: Vec<_> = idx.iter().map(|&i| self.pi(i)).collect();
        self.tuple(&parts)
    }
}

/// Which block of `C1 × A × C2` to differentiate in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub before: usize,
    pub width: usize,
    pub after: usize,
}

/// The partial derivative in the middle factor of `C1 × A × C2`, as a map
/// `C1 × A × C2 × A -> B`: zeroes are inserted into the total derivative
/// outside the `A` tangent block.
pub fn partial_diff_in_slot<M: Model>(model: &M, f: &M::Map, slot: Slot) -> Result<M::Map> {
    let dom = model.domain(f);
    if slot.width == 0 || slot.before + slot.width + slot.after != dom {
        return Err(Error::MalformedSlot(format!(
            "blocks {}+{}+{} do not cover a domain of arity {}",
            slot.before, slot.width, slot.after, dom
        )));
    }
    let b = Blocks::new(model, vec![slot.before, slot.width, slot.after, slot.width]);
    let insert = b.tuple(&[
        b.pi(0),
        b.pi(1),
        b.pi(2),
        b.zero(slot.before),
        b.pi(3),
        b.zero(slot.after),
    ]);
    model.compose(&model.diff(f), &insert)
}

/// `∂^(step+1)[f]` from `prev = ∂^(step)[f]`, where `f` has domain arity `n`:
/// differentiate the point block `a_0` and append the new tangent block.
fn next_derivative<M: Model>(model: &M, prev: &M::Map, n: usize, step: usize) -> Result<M::Map> {
    if n == 0 {
        // every derivative of a map out of the terminal object is zero
        return Ok(model.zero_map(0, model.codomain(prev)));
    }
    partial_diff_in_slot(
        model,
        prev,
        Slot {
            before: 0,
            width: n,
            after: step * n,
        },
    )
}

/// `[∂^(0)[f], ∂^(1)[f], .., ∂^(k)[f]]`.
pub fn derivative_tower<M: Model>(model: &M, f: &M::Map, k: usize) -> Result<Vec<M::Map>> {
    let n = model.domain(f);
    let mut tower = Vec::with_capacity(k + 1);
    tower.push(f.clone());
    for step in 0..k {
        let next = next_derivative(model, &tower[step], n, step)?;
        tower.push(next);
    }
    Ok(tower)
}

/// `∂^(k)[f]: A × A^k -> B`.
pub fn nth_derivative<M: Model>(model: &M, f: &M::Map, k: usize) -> Result<M::Map> {
    Ok(derivative_tower(model, f, k)?.pop().unwrap())
}

pub fn is_d_constant<M: Model>(model: &M, f: &M::Map) -> bool {
    model.is_zero(&model.diff(f))
}

/// `D[f](a, b) = f(b)`.
pub fn is_d_linear<M: Model>(model: &M, f: &M::Map) -> bool {
    let n = model.domain(f);
    let b = Blocks::uniform(model, n, 2);
    let rhs = model.compose(f, &b.pi(1)).expect("well-typed");
    model.equal(&model.diff(f), &rhs)
}

/// The least `n` with `∂^(n+1)[f] = 0`, searched up to the model's degree
/// bound. `None` means no vanishing derivative was found within the bound.
pub fn d_degree<M: Model>(model: &M, f: &M::Map) -> Result<Option<usize>> {
    let n = model.domain(f);
    let bound = model.degree_bound(f);
    let mut current = f.clone();
    for deg in 0..=bound {
        current = next_derivative(model, &current, n, deg)?;
        if model.is_zero(&current) {
            return Ok(Some(deg));
        }
    }
    Ok(None)
}

pub fn is_d_polynomial<M: Model>(model: &M, f: &M::Map) -> Result<bool> {
    Ok(d_degree(model, f)?.is_some())
}

/// The right-hand side of Faà di Bruno's formula for `∂^(k)[g ∘ f]`: the sum
/// over set partitions `[k] = A_1 | .. | A_j` of
/// `∂^(j)[g](f(a_0); ∂^(|A_1|)[f](a_0; a_{A_1}), .., ∂^(|A_j|)[f](a_0; a_{A_j}))`.
pub fn faa_di_bruno_rhs<M: Model>(
    model: &M,
    g: &M::Map,
    f: &M::Map,
    k: usize,
    budget: u128,
) -> Result<M::Map> {
    if model.codomain(f) != model.domain(g) {
        return Err(Error::ArityMismatch {
            context: "Faà di Bruno composite",
            expected: model.domain(g),
            found: model.codomain(f),
        });
    }
    let needed = bell(k);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            order: k,
            needed,
            budget,
        });
    }
    let n = model.domain(f);
    let f_tower = derivative_tower(model, f, k)?;
    let g_tower = derivative_tower(model, g, k)?;
    let blocks = Blocks::uniform(model, n, k + 1);
    let f_at_point = model.compose(f, &blocks.pi(0))?;
    let mut summands = Vec::new();
    for partition in SetPartitions::new(k) {
        let mut inner = vec![f_at_point.clone()];
        for block in &partition {
            let mut idx = vec![0];
            idx.extend(block.iter().map(|&e| e + 1));
            inner.push(model.compose(&f_tower[block.len()], &blocks.select(&idx))?);
        }
        let args = blocks.tuple(&inner);
        summands.push(model.compose(&g_tower[partition.len()], &args)?);
    }
    model.sum(blocks.total(), model.codomain(g), &summands)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Semiring = Semiring::Rat;

    fn m(ring: Semiring, arity: usize, terms: &[(i64, &[(usize, u32)])]) -> PolyMap {
        let terms = terms.iter().map(|(c, e)| {
            (
                crate::poly::Monomial::from_pairs(e.iter().copied()),
                ring.from_i64(*c).unwrap(),
            )
        });
        PolyMap::scalar(Poly::from_terms(ring, arity, terms).unwrap())
    }

    fn q_pt(vals: &[i64]) -> Vec<Scalar> {
        vals.iter().map(|&v| Q.from_i64(v).unwrap()).collect()
    }

    #[test]
    fn derivative_of_square() {
        let f = m(Q, 1, &[(1, &[(0, 2)])]);
        let d = diff(&f);
        assert_eq!(d.to_string(), "2*x0*x1");
        // linear in y at sample points
        for (x, y1, y2) in [(1, 2, 3), (-2, 5, 1), (3, 0, 7)] {
            let lhs = d.eval(&q_pt(&[x, y1 + y2])).unwrap();
            let a = d.eval(&q_pt(&[x, y1])).unwrap();
            let b = d.eval(&q_pt(&[x, y2])).unwrap();
            assert_eq!(lhs[0], &a[0] + &b[0]);
        }
    }

    #[test]
    fn derivative_of_identity_is_tangent() {
        let d = diff(&PolyMap::identity(Q, 2));
        assert_eq!(d, PolyMap::projection(Q, &[2, 2], 1).unwrap());
        assert_eq!(d.to_string(), "<x2, x3>");
    }

    #[test]
    fn characteristic_two_square_is_constant() {
        let z2 = Semiring::ZMod(2);
        let model = PolyModel::new(z2);
        let f = m(z2, 1, &[(1, &[(0, 2)])]);
        assert!(diff(&f).is_zero());
        assert!(is_d_constant(&model, &f));
        assert_eq!(d_degree(&model, &f).unwrap(), Some(0));
    }

    #[test]
    fn partial_derivative_inserts_zeroes() {
        let model = PolyModel::new(Q);
        // f(c, x) = c * x, differentiate in x
        let f = m(Q, 2, &[(1, &[(0, 1), (1, 1)])]);
        let p = partial_diff_in_slot(&model, &f, Slot { before: 1, width: 1, after: 0 }).unwrap();
        assert_eq!(p.to_string(), "x0*x2");
        for (c, x, a) in [(2, 3, 5), (-1, 4, 2)] {
            assert_eq!(p.eval(&q_pt(&[c, x, a])).unwrap(), q_pt(&[c * a]));
        }
        let whole = partial_diff_in_slot(&model, &f, Slot { before: 0, width: 2, after: 0 }).unwrap();
        assert_eq!(whole, diff(&f));
        let constant_in_x = m(Q, 2, &[(4, &[(0, 3)])]);
        let z = partial_diff_in_slot(&model, &constant_in_x, Slot { before: 1, width: 1, after: 0 }).unwrap();
        assert!(z.is_zero());
        assert!(partial_diff_in_slot(&model, &f, Slot { before: 1, width: 2, after: 0 }).is_err());
        assert!(partial_diff_in_slot(&model, &f, Slot { before: 2, width: 0, after: 0 }).is_err());
    }

    #[test]
    fn second_derivative_of_cube() {
        let model = PolyModel::new(Q);
        let f = m(Q, 1, &[(1, &[(0, 3)])]);
        let d2 = nth_derivative(&model, &f, 2).unwrap();
        assert_eq!(d2.to_string(), "6*x0*x1*x2");
        assert_eq!(nth_derivative(&model, &f, 0).unwrap(), f);
        let lin = m(Q, 1, &[(3, &[(0, 1)])]);
        assert!(nth_derivative(&model, &lin, 2).unwrap().is_zero());
    }

    #[test]
    fn constant_and_linear_predicates() {
        let model = PolyModel::new(Q);
        let lin = m(Q, 1, &[(3, &[(0, 1)])]);
        assert!(is_d_linear(&model, &lin));
        let sq = m(Q, 1, &[(1, &[(0, 2)])]);
        assert!(!is_d_linear(&model, &sq));
        assert!(!is_d_constant(&model, &sq));
    }

    #[test]
    fn degrees() {
        let q = PolyModel::new(Q);
        let z2 = PolyModel::new(Semiring::ZMod(2));
        assert_eq!(d_degree(&q, &m(Q, 1, &[(1, &[(0, 2)])])).unwrap(), Some(2));
        assert_eq!(d_degree(&z2, &m(Semiring::ZMod(2), 1, &[(1, &[(0, 2)])])).unwrap(), Some(0));
        assert_eq!(d_degree(&q, &PolyMap::zero_map(Q, 1, 1)).unwrap(), Some(0));
        assert!(is_d_polynomial(&q, &m(Q, 1, &[(1, &[(0, 5)])])).unwrap());
    }

    #[test]
    fn faa_di_bruno_small_cases() {
        let model = PolyModel::new(Q);
        let g = m(Q, 1, &[(1, &[(0, 2)])]);
        let f = m(Q, 1, &[(1, &[(0, 2)])]);
        let rhs = faa_di_bruno_rhs(&model, &g, &f, 2, DEFAULT_PARTITION_BUDGET).unwrap();
        assert_eq!(rhs.to_string(), "12*x0^2*x1*x2");
        let gf = compose(&g, &f).unwrap();
        assert_eq!(nth_derivative(&model, &gf, 2).unwrap(), rhs);

        // k = 1 is the chain rule
        let one = faa_di_bruno_rhs(&model, &g, &f, 1, DEFAULT_PARTITION_BUDGET).unwrap();
        assert_eq!(one, diff(&gf));

        // D-constant inner map: every summand vanishes for k >= 1
        let c = m(Q, 1, &[(5, &[])]);
        for k in 1..=3 {
            assert!(faa_di_bruno_rhs(&model, &g, &c, k, DEFAULT_PARTITION_BUDGET).unwrap().is_zero());
        }
    }

    #[test]
    fn faa_di_bruno_errors() {
        let model = PolyModel::new(Q);
        let g = m(Q, 1, &[(1, &[(0, 2)])]);
        let f2 = PolyMap::identity(Q, 2);
        assert!(matches!(
            faa_di_bruno_rhs(&model, &g, &f2, 2, DEFAULT_PARTITION_BUDGET),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            faa_di_bruno_rhs(&model, &g, &g, 7, DEFAULT_PARTITION_BUDGET),
            Err(Error::BudgetExceeded { needed: 877, .. })
        ));
    }
}
