//! Taylor monomials `M^(n)[f] = 1/n! · ∂^(n)[f] ∘ ⟨0, 1, .., 1⟩` and Taylor
//! polynomials `T^(n)[f] = Σ_{k<=n} M^(k)[f]`.

use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::fmt::Display;

use crate::combinatorics::compositions;
use crate::diffcomb::{d_degree, derivative_tower, expect_eq, is_d_constant, is_d_linear, show, Blocks, CheckConfig};
use crate::error::{Error, Result};
use crate::model::{Model, SampleModel};
use crate::poly::PolyMap;
use crate::report::{canonicalize, AxiomReport, Tally, Witness};

/// One term `M^(order)[f]` of a Taylor expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorPiece<T> {
    pub order: usize,
    pub map: T,
}

impl<T: Display> Serialize for TaylorPiece<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TaylorPiece", 2)?;
        s.serialize_field("order", &self.order)?;
        s.serialize_field("map", &self.map.to_string())?;
        s.end()
    }
}

fn check_order<M: Model>(model: &M, n: usize) -> Result<()> {
    model.ring().require_nat_inverse()?;
    match model.truncation_order() {
        Some(k) if n > k => Err(Error::OutOfOrder { requested: n, order: k }),
        _ => Ok(()),
    }
}

/// `⟨0, 1_A, .., 1_A⟩: A -> A × A^n`.
fn zero_then_diagonal<M: Model>(model: &M, a: usize, n: usize) -> M::Map {
    let mut parts = vec![model.zero_map(a, a)];
    parts.extend(std::iter::repeat_n(model.identity(a), n));
    model.pair(a, &parts).expect("parts share the domain")
}

fn monomial_from_derivative<M: Model>(model: &M, dn: &M::Map, a: usize, n: usize) -> Result<M::Map> {
    let at_zero = model.compose(dn, &zero_then_diagonal(model, a, n))?;
    Ok(model.scale(&model.ring().inv_factorial(n as u64)?, &at_zero))
}

/// `M^(n)[f]`, computed from the n-th derivative.
pub fn taylor_monomial<M: Model>(model: &M, f: &M::Map, n: usize) -> Result<M::Map> {
    check_order(model, n)?;
    let dn = crate::diffcomb::nth_derivative(model, f, n)?;
    monomial_from_derivative(model, &dn, model.domain(f), n)
}

/// `[M^(0)[f], .., M^(n)[f]]`, sharing one derivative tower.
pub fn taylor_monomials<M: Model>(model: &M, f: &M::Map, n: usize) -> Result<Vec<M::Map>> {
    check_order(model, n)?;
    let a = model.domain(f);
    derivative_tower(model, f, n)?
        .iter()
        .enumerate()
        .map(|(k, dk)| monomial_from_derivative(model, dk, a, k))
        .collect()
}

/// `M^(1)[f]`, the linearization at 0.
pub fn linearization<M: Model>(model: &M, f: &M::Map) -> Result<M::Map> {
    taylor_monomial(model, f, 1)
}

pub fn taylor_polynomial<M: Model>(model: &M, f: &M::Map, n: usize) -> Result<M::Map> {
    let pieces = taylor_monomials(model, f, n)?;
    model.sum(model.domain(f), model.codomain(f), &pieces)
}

/// The homogeneous degree-`n` part, computed from the terms directly. Needs
/// no division, so it works over every semiring.
pub fn graded_component(f: &PolyMap, n: usize) -> PolyMap {
    f.graded_component(n)
}

/// The `n` with `M^(n)[f] = f`, if any. For `f != 0` it is unique; the zero
/// map reports `0`.
pub fn is_taylor_monomial<M: Model>(model: &M, f: &M::Map) -> Result<Option<usize>> {
    if model.is_zero(f) {
        return Ok(Some(0));
    }
    let bound = capped_bound(model, f);
    let pieces = taylor_monomials(model, f, bound)?;
    let fixed: Vec<usize> = (0..=bound).filter(|&n| model.equal(&pieces[n], f)).collect();
    assert!(fixed.len() <= 1, "a nonzero map is a Taylor monomial of at most one order");
    Ok(fixed.first().copied())
}

/// The least `n` with `T^(n)[f] = f`, if any within the model's bound.
pub fn is_taylor_polynomial<M: Model>(model: &M, f: &M::Map) -> Result<Option<usize>> {
    let bound = capped_bound(model, f);
    let pieces = taylor_monomials(model, f, bound)?;
    let mut acc = model.zero_map(model.domain(f), model.codomain(f));
    for (n, piece) in pieces.iter().enumerate() {
        acc = model.add(&acc, piece)?;
        if model.equal(&acc, f) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn capped_bound<M: Model>(model: &M, f: &M::Map) -> usize {
    let b = model.degree_bound(f);
    model.truncation_order().map_or(b, |k| b.min(k))
}

/// The pieces `M^(0)[f], .., M^(cap)[f]` of the Taylor expansion.
pub fn taylor_expand<M: Model>(model: &M, f: &M::Map, cap: usize) -> Result<Vec<TaylorPiece<M::Map>>> {
    Ok(taylor_monomials(model, f, cap)?
        .into_iter()
        .enumerate()
        .map(|(order, map)| TaylorPiece { order, map })
        .collect())
}

const ITEMS: [&str; 14] = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv",
];

/// The identities relating Taylor monomials, polynomials, derivatives,
/// composition and degree, for orders up to `cfg.k_max`.
pub fn check_taylor_identities<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    model.ring().require_nat_inverse()?;
    let nmax = cfg.k_max;
    let ring = model.ring();
    let mut rng = cfg.rng("taylor");
    let mut t: Vec<Tally> = ITEMS.iter().map(|i| Tally::new(format!("TL.{i}"))).collect();
    let mono = |f: &M::Map, n: usize| taylor_monomials(model, f, n);
    let poly = |pieces: &[M::Map], n: usize, f: &M::Map| {
        model.sum(model.domain(f), model.codomain(f), &pieces[..=n])
    };
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let c = cfg.arity(&mut rng);
        let deg = cfg.max_degree.max(nmax);
        let f = model.random_map(&mut rng, a, b, deg);
        let g = model.random_map(&mut rng, a, b, deg);
        let h = model.random_map(&mut rng, a, c, deg);
        let inner = model.random_map(&mut rng, a, b, cfg.max_degree);
        let outer = model.random_map(&mut rng, b, c, cfg.max_degree);
        let r = model.random_scalar(&mut rng);
        let s = model.random_scalar(&mut rng);
        let fin = || vec![show("f", &f)];

        // one order past nmax so the orthogonality clauses see a vanishing piece
        let top = nmax + 1;
        let mf = mono(&f, top)?;
        let tf: Vec<M::Map> = (0..=top).map(|n| poly(&mf, n, &f)).collect::<Result<_>>()?;
        let dtower = derivative_tower(model, &f, top)?;

        // (i), (ii)
        t[0].check(is_d_constant(model, &mf[0]), || Witness {
            lhs: show("D[M0]", &model.diff(&mf[0])),
            rhs: "0".into(),
            inputs: fin(),
        });
        t[1].check(is_d_linear(model, &mf[1]), || Witness {
            lhs: show("D[M1]", &model.diff(&mf[1])),
            rhs: show("M1 ∘ π1", &mf[1]),
            inputs: fin(),
        });

        let comb = model.add(&model.scale(&r, &f), &model.scale(&s, &g))?;
        let mcomb = mono(&comb, nmax)?;
        let mg = mono(&g, nmax)?;
        let pairing = model.pair(a, &[f.clone(), h.clone()])?;
        let mpair = mono(&pairing, nmax)?;
        let mh = mono(&h, nmax)?;
        let df = model.diff(&f);
        let mdf = mono(&df, nmax)?;
        let gf = model.compose(&outer, &inner)?;
        let mgf = mono(&gf, nmax)?;
        let outer_tower = derivative_tower(model, &outer, nmax)?;
        let inner_tower = derivative_tower(model, &inner, nmax)?;
        let ab = Blocks::uniform(model, a, 2);

        for n in 0..=nmax {
            // (iii) linearity in the map
            let rhs = model.add(&model.scale(&r, &mf[n]), &model.scale(&s, &mg[n]))?;
            expect_eq(model, &mut t[2], &mcomb[n], &rhs, || {
                vec![show("f", &f), show("g", &g), show("r", &r), show("s", &s), format!("n = {n}")]
            });

            // (iv) binomial expansion of M^(n)[f](r a + s b)
            let mix = model.add(&model.scale(&r, &ab.pi(0)), &model.scale(&s, &ab.pi(1)))?;
            let lhs = model.compose(&mf[n], &mix)?;
            let mut terms = Vec::new();
            for k in 0..=n {
                let mut parts = vec![ab.zero(a)];
                parts.extend(std::iter::repeat_n(ab.pi(0), k));
                parts.extend(std::iter::repeat_n(ab.pi(1), n - k));
                let coeff = &(&r.pow(k as u32) * &s.pow((n - k) as u32))
                    * &(&ring.inv_factorial(k as u64)? * &ring.inv_factorial((n - k) as u64)?);
                terms.push(model.scale(&coeff, &model.compose(&dtower[n], &ab.tuple(&parts))?));
            }
            let rhs = model.sum(2 * a, b, &terms)?;
            expect_eq(model, &mut t[3], &lhs, &rhs, || {
                vec![show("f", &f), show("r", &r), show("s", &s), format!("n = {n}")]
            });

            // (v) pairing
            let rhs = model.pair(a, &[mf[n].clone(), mh[n].clone()])?;
            expect_eq(model, &mut t[4], &mpair[n], &rhs, || {
                vec![show("f", &f), show("h", &h), format!("n = {n}")]
            });

            // (vi) composition, summed over ordered compositions of n
            let point = model.compose(&inner, &model.zero_map(a, a))?;
            let mut summands = Vec::new();
            for (k, dk) in outer_tower.iter().enumerate().take(n + 1) {
                for parts in compositions(n, k) {
                    let mut args = vec![point.clone()];
                    let mut coeff = ring.inv_factorial(k as u64)?;
                    for &m in &parts {
                        let dm = model.compose(&inner_tower[m], &zero_then_diagonal(model, a, m))?;
                        args.push(dm);
                        coeff = &coeff * &ring.inv_factorial(m as u64)?;
                    }
                    let arg = model.pair(a, &args)?;
                    summands.push(model.scale(&coeff, &model.compose(dk, &arg)?));
                }
            }
            let rhs = model.sum(a, c, &summands)?;
            expect_eq(model, &mut t[5], &mgf[n], &rhs, || {
                vec![show("g", &outer), show("f", &inner), format!("n = {n}")]
            });

            // (vii) M^(n)[D f] = D[M^(n) f]
            expect_eq(model, &mut t[6], &mdf[n], &model.diff(&mf[n]), || {
                vec![show("f", &f), format!("n = {n}")]
            });

            // (viii) D[M^(n+1) f](a, b) = 1/n! ∂^(n+1)[f](0; a, .., a, b)
            let mut parts = vec![ab.zero(a)];
            parts.extend(std::iter::repeat_n(ab.pi(0), n));
            parts.push(ab.pi(1));
            let rhs = model.scale(
                &ring.inv_factorial(n as u64)?,
                &model.compose(&dtower[n + 1], &ab.tuple(&parts))?,
            );
            expect_eq(model, &mut t[7], &model.diff(&mf[n + 1]), &rhs, || {
                vec![show("f", &f), format!("n = {n}")]
            });

            // (ix) degree of a monomial
            let d = d_degree(model, &mf[n])?;
            let want = if model.is_zero(&mf[n]) { 0 } else { n };
            t[8].check(d == Some(want), || Witness {
                lhs: format!("{d:?}"),
                rhs: format!("Some({want})"),
                inputs: vec![show("f", &f), format!("n = {n}")],
            });

            // (x) idempotent and orthogonal
            let mm = mono(&mf[n], top)?;
            for (m, piece) in mm.iter().enumerate() {
                let want = if m == n { mf[n].clone() } else { model.zero_map(a, b) };
                expect_eq(model, &mut t[9], piece, &want, || {
                    vec![show("f", &f), format!("M{m} of M{n}")]
                });
            }

            // (xi) M^(k)[T^(n) f]; (xiii) T^(k)[T^(n) f]
            let mt = mono(&tf[n], top)?;
            for k in 0..=top {
                let want = if k <= n { mf[k].clone() } else { model.zero_map(a, b) };
                expect_eq(model, &mut t[10], &mt[k], &want, || {
                    vec![show("f", &f), format!("M{k} of T{n}")]
                });
                let tt = poly(&mt, k, &f)?;
                let want = if k <= n { &tf[k] } else { &tf[n] };
                expect_eq(model, &mut t[12], &tt, want, || {
                    vec![show("f", &f), format!("T{k} of T{n}")]
                });
            }

            // (xii) T^(k)[M^(n) f]
            for k in 0..=top {
                let tm = poly(&mm, k, &f)?;
                let want = if n <= k { mf[n].clone() } else { model.zero_map(a, b) };
                expect_eq(model, &mut t[11], &tm, &want, || {
                    vec![show("f", &f), format!("T{k} of M{n}")]
                });
            }

            // (xiv) degree of a Taylor polynomial
            let d = d_degree(model, &tf[n])?;
            let ok = match d {
                Some(d) if model.is_zero(&tf[n]) => d == 0,
                Some(d) => d <= n,
                None => false,
            };
            t[13].check(ok, || Witness {
                lhs: format!("{d:?}"),
                rhs: format!("<= {n}"),
                inputs: vec![show("f", &f), format!("n = {n}")],
            });
        }
    }
    Ok(canonicalize(t.into_iter().map(Tally::finish).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcomb::PolyModel;
    use crate::poly::{Monomial, Poly};
    use crate::report::all_hold;
    use crate::scalars::Semiring;

    const Q: Semiring = Semiring::Rat;

    fn uni(coeffs: &[i64]) -> PolyMap {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (Monomial::from_pairs([(0, k as u32)]), Q.from_i64(c).unwrap()));
        PolyMap::scalar(Poly::from_terms(Q, 1, terms).unwrap())
    }

    #[test]
    fn monomials_of_a_quadratic() {
        let m = PolyModel::new(Q);
        let p = uni(&[3, 2, 5]);
        assert_eq!(taylor_monomial(&m, &p, 2).unwrap().to_string(), "5*x0^2");
        assert_eq!(taylor_monomial(&m, &p, 0).unwrap().to_string(), "3");
        assert_eq!(linearization(&m, &p).unwrap().to_string(), "2*x0");
        assert_eq!(taylor_polynomial(&m, &p, 1).unwrap().to_string(), "3 + 2*x0");
        assert_eq!(taylor_polynomial(&m, &p, 2).unwrap(), p);
        assert!(taylor_monomial(&m, &uni(&[0, 0, 0, 1]), 5).unwrap().is_zero());
        assert!(linearization(&m, &uni(&[4])).unwrap().is_zero());
        let lin = uni(&[0, 3]);
        assert_eq!(linearization(&m, &lin).unwrap(), lin);
    }

    #[test]
    fn two_variable_monomial() {
        let m = PolyModel::new(Q);
        // x*y + x^2 with a constant 1
        let p = Poly::from_terms(
            Q,
            2,
            [
                (Monomial::one(), Q.one()),
                (Monomial::from_pairs([(0, 1), (1, 1)]), Q.one()),
                (Monomial::from_pairs([(0, 2)]), Q.one()),
            ],
        )
        .unwrap();
        let f = PolyMap::scalar(p);
        assert_eq!(taylor_monomial(&m, &f, 2).unwrap(), graded_component(&f, 2));
        assert_eq!(graded_component(&f, 2).to_string(), "x0^2 + x0*x1");
        assert!(graded_component(&f, 3).is_zero());
    }

    #[test]
    fn requires_rational_scalars() {
        let m = PolyModel::new(Semiring::Nat);
        let f = PolyMap::identity(Semiring::Nat, 1);
        let err = taylor_monomial(&m, &f, 2).unwrap_err();
        assert!(err.to_string().contains("requires ℚ≥0-algebra"), "{err}");
        assert!(taylor_expand(&PolyModel::new(Semiring::ZMod(3)), &PolyMap::identity(Semiring::ZMod(3), 1), 1).is_err());
    }

    #[test]
    fn predicates() {
        let m = PolyModel::new(Q);
        assert_eq!(is_taylor_monomial(&m, &uni(&[0, 0, 5])).unwrap(), Some(2));
        assert_eq!(is_taylor_monomial(&m, &uni(&[3, 2])).unwrap(), None);
        assert_eq!(is_taylor_polynomial(&m, &uni(&[3, 2])).unwrap(), Some(1));
        assert_eq!(is_taylor_monomial(&m, &PolyMap::zero_map(Q, 1, 1)).unwrap(), Some(0));
    }

    #[test]
    fn expansion_sums_back() {
        let m = PolyModel::new(Q);
        let p = uni(&[3, 2, 5]);
        let pieces = taylor_expand(&m, &p, 2).unwrap();
        let shown: Vec<String> = pieces.iter().map(|p| p.map.to_string()).collect();
        assert_eq!(shown, ["3", "2*x0", "5*x0^2"]);
        let total = pieces.iter().fold(PolyMap::zero_map(Q, 1, 1), |acc, p| acc.add(&p.map).unwrap());
        assert_eq!(total, p);
        assert_eq!(
            serde_json::to_string(&pieces[1]).unwrap(),
            r#"{"order":1,"map":"2*x0"}"#
        );
        let z = taylor_expand(&m, &PolyMap::zero_map(Q, 2, 1), 3).unwrap();
        assert!(z.iter().all(|p| p.map.is_zero()));
    }

    #[test]
    fn composition_item_on_known_pair() {
        // g(y) = y^2, f(x) = x + x^2 gives g∘f = x^2 + 2x^3 + x^4
        let m = PolyModel::new(Q);
        let g = uni(&[0, 0, 1]);
        let f = uni(&[0, 1, 1]);
        let gf = crate::poly::compose(&g, &f).unwrap();
        assert_eq!(taylor_monomial(&m, &gf, 2).unwrap().to_string(), "x0^2");
    }

    #[test]
    fn idempotence_and_orthogonality() {
        let m = PolyModel::new(Q);
        let p = uni(&[0, 0, 5]);
        let m2 = taylor_monomial(&m, &p, 2).unwrap();
        assert_eq!(taylor_monomial(&m, &m2, 2).unwrap(), p);
        assert!(taylor_monomial(&m, &m2, 1).unwrap().is_zero());
    }

    #[test]
    fn identity_suite_small_run() {
        let cfg = CheckConfig {
            samples: 3,
            k_max: 3,
            ..CheckConfig::default()
        };
        let reports = check_taylor_identities(&PolyModel::new(Q), &cfg).unwrap();
        assert_eq!(reports.len(), 14);
        assert!(all_hold(&reports), "{reports:#?}");
    }
}
