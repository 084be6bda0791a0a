//! Seeded, symbolic checks of the differential-combinator axioms, the
//! higher-derivative identities and the degree laws for D-polynomials.
//!
//! Both sides of every identity are built as maps of the model and compared
//! with [`Model::equal`]; nothing is tested pointwise.

use std::fmt::Display;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    d_degree, derivative_tower, faa_di_bruno_rhs, partial_diff_in_slot, Blocks, Slot,
    DEFAULT_PARTITION_BUDGET,
};
use crate::combinatorics::bell;
use crate::error::{Error, Result};
use crate::model::{Model, SampleModel};
use crate::report::{canonicalize, AxiomReport, Tally, Witness};

/// Sample sizes and bounds shared by the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    pub samples: usize,
    /// Highest derivative order exercised by the HD and Taylor suites.
    pub k_max: usize,
    pub partition_budget: u128,
    pub max_arity: usize,
    pub max_degree: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 42,
            samples: 100,
            k_max: 4,
            partition_budget: DEFAULT_PARTITION_BUDGET,
            max_arity: 2,
            max_degree: 3,
        }
    }
}

impl CheckConfig {
    /// An independent stream per suite, so adding a clause to one suite does
    /// not shift the samples of another.
    pub fn rng(&self, suite: &str) -> ChaCha8Rng {
        let salt = suite
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    pub(crate) fn arity(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(1..=self.max_arity.max(1))
    }
}

pub(crate) fn show<T: Display>(label: &str, value: &T) -> String {
    format!("{label} = {value}")
}

pub(crate) fn expect_eq<M: Model>(
    model: &M,
    tally: &mut Tally,
    lhs: &M::Map,
    rhs: &M::Map,
    inputs: impl FnOnce() -> Vec<String>,
) {
    tally.check(model.equal(lhs, rhs), || Witness {
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        inputs: inputs(),
    });
}

/// CD.1 to CD.7 on seeded random maps.
pub fn check_cd_axioms<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    let mut rng = cfg.rng("cd");
    let mut t: Vec<Tally> = (1..=7).map(|i| Tally::new(format!("CD.{i}"))).collect();
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let c = cfg.arity(&mut rng);
        let f = model.random_map(&mut rng, a, b, cfg.max_degree);
        let g = model.random_map(&mut rng, a, b, cfg.max_degree);
        let h = model.random_map(&mut rng, b, c, cfg.max_degree);
        let k = model.random_map(&mut rng, a, c, cfg.max_degree);
        let r = model.random_scalar(&mut rng);
        let s = model.random_scalar(&mut rng);
        let df = model.diff(&f);
        let dg = model.diff(&g);
        let inputs = || {
            vec![
                show("f", &f),
                show("g", &g),
                show("h", &h),
                show("r", &r),
                show("s", &s),
            ]
        };

        // CD.1: D[r f + s g] = r D[f] + s D[g], and D[0] = 0
        let comb = model.add(&model.scale(&r, &f), &model.scale(&s, &g))?;
        let lhs = model.diff(&comb);
        let rhs = model.add(&model.scale(&r, &df), &model.scale(&s, &dg))?;
        expect_eq(model, &mut t[0], &lhs, &rhs, inputs);
        let zero = model.zero_map(a, b);
        expect_eq(model, &mut t[0], &model.diff(&zero), &model.zero_map(2 * a, b), inputs);

        // CD.2: D[f](x, r y + s z) = r D[f](x, y) + s D[f](x, z), and D[f](x, 0) = 0
        let bl = Blocks::uniform(model, a, 3);
        let mix = model.add(&model.scale(&r, &bl.pi(1)), &model.scale(&s, &bl.pi(2)))?;
        let lhs = model.compose(&df, &bl.tuple(&[bl.pi(0), mix]))?;
        let rhs = model.add(
            &model.scale(&r, &model.compose(&df, &bl.select(&[0, 1]))?),
            &model.scale(&s, &model.compose(&df, &bl.select(&[0, 2]))?),
        )?;
        expect_eq(model, &mut t[1], &lhs, &rhs, inputs);
        let at_zero = model.compose(&df, &bl.tuple(&[bl.pi(0), bl.zero(a)]))?;
        expect_eq(model, &mut t[1], &at_zero, &model.zero_map(3 * a, b), inputs);

        // CD.3: D[1] = π1 and D[π_j] = π_j ∘ π1
        let bl2 = Blocks::uniform(model, a, 2);
        expect_eq(model, &mut t[2], &model.diff(&model.identity(a)), &bl2.pi(1), inputs);
        let widths = [a, b];
        let j = rng.gen_range(0..2);
        let proj = model.projection(&widths, j)?;
        let tangent = model.projection(&[a + b, a + b], 1)?;
        let rhs = model.compose(&proj, &tangent)?;
        expect_eq(model, &mut t[2], &model.diff(&proj), &rhs, || {
            vec![format!("projection {j} of {a} x {b}")]
        });

        // CD.4: D⟨f, k⟩ = ⟨D[f], D[k]⟩
        let lhs = model.diff(&model.pair(a, &[f.clone(), k.clone()])?);
        let rhs = model.pair(2 * a, &[df.clone(), model.diff(&k)])?;
        expect_eq(model, &mut t[3], &lhs, &rhs, || vec![show("f", &f), show("k", &k)]);

        // CD.5: D[h ∘ f] = D[h] ∘ ⟨f ∘ π0, D[f]⟩
        let hf = model.compose(&h, &f)?;
        let lhs = model.diff(&hf);
        let f0 = model.compose(&f, &bl2.pi(0))?;
        let rhs = model.compose(&model.diff(&h), &model.pair(2 * a, &[f0, df.clone()])?)?;
        expect_eq(model, &mut t[4], &lhs, &rhs, || vec![show("f", &f), show("h", &h)]);

        // CD.6: D[D[f]](x, 0, 0, y) = D[f](x, y)
        let ddf = model.diff(&df);
        let insert = bl2.tuple(&[bl2.pi(0), bl2.zero(a), bl2.zero(a), bl2.pi(1)]);
        let lhs = model.compose(&ddf, &insert)?;
        expect_eq(model, &mut t[5], &lhs, &df, || vec![show("f", &f)]);

        // CD.7: D[D[f]](x, y, z, w) = D[D[f]](x, z, y, w)
        let bl4 = Blocks::uniform(model, a, 4);
        let lhs = model.compose(&ddf, &bl4.select(&[0, 2, 1, 3]))?;
        expect_eq(model, &mut t[6], &lhs, &ddf, || vec![show("f", &f)]);
    }
    Ok(canonicalize(t.into_iter().map(Tally::finish).collect()))
}

fn faa_di_bruno_instance<M: Model>(
    model: &M,
    tally: &mut Tally,
    g: &M::Map,
    f: &M::Map,
    k: usize,
    budget: u128,
) -> Result<()> {
    let lhs = super::nth_derivative(model, &model.compose(g, f)?, k)?;
    let rhs = faa_di_bruno_rhs(model, g, f, k, budget)?;
    expect_eq(model, tally, &lhs, &rhs, || {
        vec![show("g", g), show("f", f), format!("k = {k}")]
    });
    Ok(())
}

fn require_budget(cfg: &CheckConfig) -> Result<()> {
    let needed = bell(cfg.k_max);
    if needed > cfg.partition_budget {
        return Err(Error::BudgetExceeded {
            order: cfg.k_max,
            needed,
            budget: cfg.partition_budget,
        });
    }
    Ok(())
}

/// Faà di Bruno alone: `∂^(k)[g ∘ f]` against the partition sum for every
/// `k <= k_max`, on `samples` seeded pairs.
pub fn check_faa_di_bruno<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<AxiomReport> {
    require_budget(cfg)?;
    let mut rng = cfg.rng("fdb");
    let mut tally = Tally::new("HD.5");
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let c = cfg.arity(&mut rng);
        let f = model.random_map(&mut rng, a, b, cfg.max_degree);
        let g = model.random_map(&mut rng, b, c, cfg.max_degree);
        for k in 0..=cfg.k_max {
            faa_di_bruno_instance(model, &mut tally, &g, &f, k, cfg.partition_budget)?;
        }
    }
    Ok(tally.finish())
}

/// HD.0 to HD.8 for orders up to `k_max`.
pub fn check_hd_identities<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    require_budget(cfg)?;
    let mut rng = cfg.rng("hd");
    let kmax = cfg.k_max;
    let mut t: Vec<Tally> = (0..=8).map(|i| Tally::new(format!("HD.{i}"))).collect();
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let c = cfg.arity(&mut rng);
        // one degree above the derivative orders so the top derivative is nonzero
        let deg = cfg.max_degree.max(kmax);
        let f = model.random_map(&mut rng, a, b, deg);
        let g = model.random_map(&mut rng, a, b, deg);
        let h = model.random_map(&mut rng, a, c, deg);
        let outer = model.random_map(&mut rng, b, c, cfg.max_degree);
        let inner = model.random_map(&mut rng, a, b, cfg.max_degree);
        let konst = model.random_constant(&mut rng, a, b);
        let lin = model.random_linear(&mut rng, a, b);
        let r = model.random_scalar(&mut rng);
        let s = model.random_scalar(&mut rng);

        let tf = derivative_tower(model, &f, kmax + 1)?;
        let tg = derivative_tower(model, &g, kmax)?;
        let th = derivative_tower(model, &h, kmax)?;
        let tc = derivative_tower(model, &konst, kmax)?;
        let tl = derivative_tower(model, &lin, kmax)?;
        let comb = model.add(&model.scale(&r, &f), &model.scale(&s, &g))?;
        let tcomb = derivative_tower(model, &comb, kmax)?;
        let pairing = model.pair(a, &[f.clone(), h.clone()])?;
        let tpair = derivative_tower(model, &pairing, kmax)?;
        let tdf = derivative_tower(model, &model.diff(&f), kmax)?;
        let fin = || vec![show("f", &f)];

        for k in 0..=kmax {
            let dom_k = (k + 1) * a;
            // HD.0: constants have vanishing higher derivatives
            if k >= 1 {
                let zero = model.zero_map(dom_k, b);
                expect_eq(model, &mut t[0], &tc[k], &zero, || vec![show("c", &konst)]);
            }

            // HD.1: ∂^k is linear in the map
            let rhs = model.add(&model.scale(&r, &tf[k]), &model.scale(&s, &tg[k]))?;
            expect_eq(model, &mut t[1], &tcomb[k], &rhs, || {
                vec![show("f", &f), show("g", &g), show("r", &r), show("s", &s)]
            });

            // blocks a_0..a_k plus one spare tangent block a_{k+1}
            let bl = Blocks::uniform(model, a, k + 2);
            let base: Vec<usize> = (0..=k).collect();
            let with_spare = |i: usize| {
                let mut idx = base.clone();
                idx[i] = k + 1;
                idx
            };

            for i in 1..=k {
                // HD.2: linear in the i-th tangent block
                let mut parts: Vec<M::Map> = base.iter().map(|&j| bl.pi(j)).collect();
                parts[i] = model.add(&model.scale(&r, &bl.pi(i)), &model.scale(&s, &bl.pi(k + 1)))?;
                let lhs = model.compose(&tf[k], &bl.tuple(&parts))?;
                let rhs = model.add(
                    &model.scale(&r, &model.compose(&tf[k], &bl.select(&base))?),
                    &model.scale(&s, &model.compose(&tf[k], &bl.select(&with_spare(i)))?),
                )?;
                expect_eq(model, &mut t[2], &lhs, &rhs, || {
                    vec![show("f", &f), format!("k = {k}, block {i}"), show("r", &r), show("s", &s)]
                });

                // HD.6: D-linear in the i-th tangent block
                let slot = Slot {
                    before: i * a,
                    width: a,
                    after: (k - i) * a,
                };
                let lhs = partial_diff_in_slot(model, &tf[k], slot)?;
                let rhs = model.compose(&tf[k], &bl.select(&with_spare(i)))?;
                expect_eq(model, &mut t[6], &lhs, &rhs, || {
                    vec![show("f", &f), format!("k = {k}, block {i}")]
                });
            }

            // HD.3: D-linear maps have vanishing derivatives from order 2
            if k >= 2 {
                expect_eq(model, &mut t[3], &tl[k], &model.zero_map(dom_k, b), || {
                    vec![show("l", &lin)]
                });
            }

            // HD.4: ∂^k commutes with pairing
            let rhs = model.pair(dom_k, &[tf[k].clone(), th[k].clone()])?;
            expect_eq(model, &mut t[4], &tpair[k], &rhs, || vec![show("f", &f), show("h", &h)]);

            // HD.5: Faà di Bruno
            faa_di_bruno_instance(model, &mut t[5], &outer, &inner, k, cfg.partition_budget)?;

            // HD.7: symmetric in the tangent blocks
            if k >= 2 {
                let ident = bl.select(&base);
                for perm in (1..=k).permutations(k) {
                    let mut idx = vec![0];
                    idx.extend(perm.iter().copied());
                    let sel = bl.select(&idx);
                    if sel == ident {
                        continue;
                    }
                    let lhs = model.compose(&tf[k], &sel)?;
                    let rhs = model.compose(&tf[k], &ident)?;
                    expect_eq(model, &mut t[7], &lhs, &rhs, || {
                        vec![show("f", &f), format!("permutation {perm:?}")]
                    });
                }
            }

            // HD.8 over (a_0..a_k, b_0..b_k)
            let lay = Blocks::uniform(model, a, 2 * (k + 1));
            let av = |i: usize| i;
            let bv = |i: usize| k + 1 + i;
            let l1 = model.diff(&tf[k]);
            let interleave: Vec<usize> = (0..=k).flat_map(|i| [av(i), bv(i)]).collect();
            let l2 = model.compose(&tdf[k], &lay.select(&interleave))?;
            expect_eq(model, &mut t[8], &l1, &l2, fin);

            let mut top: Vec<usize> = (0..=k).map(av).collect();
            top.push(bv(0));
            let mut l3 = model.compose(&tf[k + 1], &lay.select(&top))?;
            for i in 1..=k {
                let mut idx: Vec<usize> = (0..=k).map(av).collect();
                idx[i] = bv(i);
                l3 = model.add(&l3, &model.compose(&tf[k], &lay.select(&idx))?)?;
            }
            expect_eq(model, &mut t[8], &l1, &l3, fin);
        }
    }
    Ok(canonicalize(t.into_iter().map(Tally::finish).collect()))
}

/// The degree laws for D-polynomials, items (i) to (vii).
pub fn check_dpoly_closure<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    const ITEMS: [&str; 7] = ["i", "ii", "iii", "iv", "v", "vi", "vii"];
    let mut rng = cfg.rng("dpoly");
    let mut t: Vec<Tally> = ITEMS.iter().map(|i| Tally::new(format!("DP.{i}"))).collect();
    let deg = |m: &M::Map| d_degree(model, m);
    let fail = |lhs: Option<usize>, rhs: String, inputs: Vec<String>| Witness {
        lhs: lhs.map_or("none".into(), |d| d.to_string()),
        rhs,
        inputs,
    };
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let c = cfg.arity(&mut rng);
        let p = model.random_map(&mut rng, a, b, cfg.max_degree);
        let q = model.random_map(&mut rng, a, b, cfg.max_degree);
        let outer = model.random_map(&mut rng, b, c, cfg.max_degree);
        let other = model.random_map(&mut rng, a, c, cfg.max_degree);
        let konst = model.random_constant(&mut rng, a, b);
        let lin = model.random_linear(&mut rng, a, b);
        let r = model.random_scalar(&mut rng);
        let s = model.random_scalar(&mut rng);
        let dp = deg(&p)?;
        let dq = deg(&q)?;

        // (i) D-constants have degree 0
        let d = deg(&konst)?;
        t[0].check(d == Some(0), || fail(d, "0".into(), vec![show("c", &konst)]));

        // (ii) non-zero D-linear maps have degree 1
        let d = deg(&lin)?;
        let want = if model.is_zero(&lin) { 0 } else { 1 };
        t[1].check(d == Some(want), || fail(d, want.to_string(), vec![show("l", &lin)]));

        // (iii) identities and projections have degree 1
        let d = deg(&model.identity(a))?;
        t[2].check(d == Some(1), || fail(d, "1".into(), vec![format!("identity on {a}")]));
        let j = rng.gen_range(0..2);
        let d = deg(&model.projection(&[a, b], j)?)?;
        t[2].check(d == Some(1), || fail(d, "1".into(), vec![format!("projection {j} of {a} x {b}")]));

        let inputs = || vec![show("p", &p), show("q", &q)];
        // (iv) deg(r p + s q) <= max
        let d = deg(&model.add(&model.scale(&r, &p), &model.scale(&s, &q))?)?;
        let bound = dp.zip(dq).map(|(x, y)| x.max(y));
        t[3].check(matches!((d, bound), (Some(x), Some(m)) if x <= m), || {
            let mut i = inputs();
            i.extend([show("r", &r), show("s", &s)]);
            fail(d, format!("<= {bound:?}"), i)
        });

        // (v) deg⟨p, other⟩ = max
        let d = deg(&model.pair(a, &[p.clone(), other.clone()])?)?;
        let want = dp.zip(deg(&other)?).map(|(x, y)| x.max(y));
        t[4].check(d.is_some() && d == want, || {
            fail(d, format!("{want:?}"), vec![show("p", &p), show("other", &other)])
        });

        // (vi) deg(outer ∘ p) <= deg(p) deg(outer)
        let d = deg(&model.compose(&outer, &p)?)?;
        let bound = dp.zip(deg(&outer)?).map(|(x, y)| x * y);
        t[5].check(matches!((d, bound), (Some(x), Some(m)) if x <= m), || {
            fail(d, format!("<= {bound:?}"), vec![show("p", &p), show("outer", &outer)])
        });

        // (vii) deg D[p] = deg p
        let d = deg(&model.diff(&p))?;
        t[6].check(d.is_some() && d == dp, || fail(d, format!("{dp:?}"), vec![show("p", &p)]));
    }
    Ok(canonicalize(t.into_iter().map(Tally::finish).collect()))
}
