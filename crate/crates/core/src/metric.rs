//! The D-distance: `2^-n` for the least order `n` at which the Taylor
//! monomials of two parallel maps differ.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diffcomb::{show, CheckConfig};
use crate::error::{Error, Result};
use crate::model::{Model, SampleModel};
use crate::report::{canonicalize, AxiomReport, Status, Tally, Witness};
use crate::taylor::taylor_monomials;

/// An exact dyadic distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DyadicDistance {
    Zero,
    /// Exactly `2^-n`.
    Exp(usize),
    /// At most `2^-n`; the search stopped at a truncation frontier.
    AtMost(usize),
}

/// Three-valued answer to a comparison that may involve unresolved distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undetermined,
}

impl Truth {
    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Undetermined,
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Undetermined,
        }
    }

    pub fn status(self) -> Status {
        match self {
            Truth::True => Status::Holds,
            Truth::False => Status::Violated,
            Truth::Undetermined => Status::Undetermined,
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl DyadicDistance {
    /// Whether `self <= other` as real numbers, when that is decidable from
    /// the symbols.
    pub fn leq(self, other: DyadicDistance) -> Truth {
        use DyadicDistance::*;
        match (self, other) {
            (Zero, _) => Truth::True,
            (Exp(_), Zero) => Truth::False,
            (AtMost(_), Zero) => Truth::Undetermined,
            (Exp(n), Exp(m)) => (n >= m).into(),
            (AtMost(n), Exp(m)) => {
                if n >= m {
                    Truth::True
                } else {
                    Truth::Undetermined
                }
            }
            (Exp(m), AtMost(n)) => {
                if n <= m {
                    Truth::Undetermined
                } else {
                    Truth::False
                }
            }
            (AtMost(_), AtMost(_)) => Truth::Undetermined,
        }
    }

    /// `self <= max(others)`, decided as "below at least one of them".
    pub fn le_max(self, others: &[DyadicDistance]) -> Truth {
        if others.is_empty() {
            return self.leq(DyadicDistance::Zero);
        }
        others.iter().fold(Truth::False, |acc, &o| acc.or(self.leq(o)))
    }

    /// The symbolic maximum. Exact whenever the inputs are; with unresolved
    /// inputs the result is the tightest symbol that bounds both.
    pub fn max(self, other: DyadicDistance) -> DyadicDistance {
        use DyadicDistance::*;
        match (self, other) {
            (Zero, x) | (x, Zero) => x,
            (Exp(a), Exp(b)) => Exp(a.min(b)),
            (Exp(a), AtMost(b)) | (AtMost(b), Exp(a)) => {
                if b >= a {
                    Exp(a)
                } else {
                    AtMost(b)
                }
            }
            (AtMost(a), AtMost(b)) => AtMost(a.min(b)),
        }
    }

    pub fn is_unresolved(self) -> bool {
        matches!(self, DyadicDistance::AtMost(_))
    }

    // Zero first, then AtMost(n) just below Exp(n), then larger values.
    fn rank(self) -> (u8, usize, u8) {
        match self {
            DyadicDistance::Zero => (0, 0, 0),
            DyadicDistance::AtMost(n) => (1, usize::MAX - n, 0),
            DyadicDistance::Exp(n) => (1, usize::MAX - n, 1),
        }
    }
}

/// A total order on the symbols, consistent with [`DyadicDistance::le`]
/// wherever that is decided.
impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicDistance::Zero => f.write_str("0"),
            DyadicDistance::Exp(n) => write!(f, "2^-{n}"),
            DyadicDistance::AtMost(n) => write!(f, "<=2^-{n}"),
        }
    }
}

impl FromStr for DyadicDistance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("not a dyadic distance: {s:?}"));
        if s == "0" {
            return Ok(DyadicDistance::Zero);
        }
        let (unresolved, rest) = match s.strip_prefix("<=") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let n: usize = rest.strip_prefix("2^-").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        Ok(if unresolved {
            DyadicDistance::AtMost(n)
        } else {
            DyadicDistance::Exp(n)
        })
    }
}

impl Serialize for DyadicDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DyadicDistance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `d_D(f, g)`. Exact models scan up to the larger degree bound, after which
/// every monomial vanishes; truncated models scan up to their order and
/// report `AtMost(K+1)` past it.
pub fn d_distance<M: Model>(model: &M, f: &M::Map, g: &M::Map) -> Result<DyadicDistance> {
    if model.domain(f) != model.domain(g) || model.codomain(f) != model.codomain(g) {
        return Err(Error::HomMismatch {
            left: format!("{} -> {}", model.domain(f), model.codomain(f)),
            right: format!("{} -> {}", model.domain(g), model.codomain(g)),
        });
    }
    model.ring().require_nat_inverse()?;
    let (bound, beyond) = match model.truncation_order() {
        Some(k) => (k, DyadicDistance::AtMost(k + 1)),
        None => (
            model.degree_bound(f).max(model.degree_bound(g)),
            DyadicDistance::Zero,
        ),
    };
    let mf = taylor_monomials(model, f, bound)?;
    let mg = taylor_monomials(model, g, bound)?;
    Ok((0..=bound)
        .find(|&n| !model.equal(&mf[n], &mg[n]))
        .map_or(beyond, DyadicDistance::Exp))
}

/// All Taylor monomials agree. In an exact model this forces equality, which
/// is asserted.
pub fn is_taylor_equivalent<M: Model>(model: &M, f: &M::Map, g: &M::Map) -> Result<bool> {
    let d = d_distance(model, f, g)?;
    let equivalent = d == DyadicDistance::Zero;
    if equivalent && model.truncation_order().is_none() {
        assert!(model.equal(f, g), "Taylor-equivalent maps of an exact model must be equal");
    }
    Ok(equivalent)
}

fn record_truth(tally: &mut Tally, truth: Truth, witness: impl FnOnce() -> Witness) {
    tally.record(truth.status(), witness);
}

/// `f` plus a homogeneous piece of a random degree, or `f` itself.
fn perturb<M: SampleModel>(model: &M, rng: &mut rand_chacha::ChaCha8Rng, f: &M::Map, max_degree: usize) -> Result<M::Map> {
    if rng.gen_bool(0.2) {
        return Ok(f.clone());
    }
    let d = rng.gen_range(0..=max_degree);
    let piece = model.random_homogeneous(rng, model.domain(f), model.codomain(f), d);
    model.add(f, &piece)
}

/// Reflexivity, symmetry, the strong triangle inequality and (for exact
/// models) identity of indiscernibles.
pub fn check_ultrametric<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    model.ring().require_nat_inverse()?;
    let mut rng = cfg.rng("ultrametric");
    let mut refl = Tally::new("UM.i");
    let mut symm = Tally::new("UM.ii");
    let mut tri = Tally::new("UM.iii");
    let mut ind = Tally::new("UM.iv");
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let f = model.random_map(&mut rng, a, b, cfg.max_degree);
        let g = perturb(model, &mut rng, &f, cfg.max_degree)?;
        let h = if rng.gen_bool(0.5) {
            perturb(model, &mut rng, &g, cfg.max_degree)?
        } else {
            model.random_map(&mut rng, a, b, cfg.max_degree)
        };
        let inputs = || vec![show("f", &f), show("g", &g), show("h", &h)];

        let dff = d_distance(model, &f, &f)?;
        record_truth(&mut refl, dff.leq(DyadicDistance::Zero), || Witness {
            lhs: dff.to_string(),
            rhs: "0".into(),
            inputs: vec![show("f", &f)],
        });

        let dfg = d_distance(model, &f, &g)?;
        let dgf = d_distance(model, &g, &f)?;
        symm.check(dfg == dgf, || Witness {
            lhs: dfg.to_string(),
            rhs: dgf.to_string(),
            inputs: inputs(),
        });

        let dgh = d_distance(model, &g, &h)?;
        let dfh = d_distance(model, &f, &h)?;
        record_truth(&mut tri, dfh.le_max(&[dfg, dgh]), || Witness {
            lhs: dfh.to_string(),
            rhs: format!("max({dfg}, {dgh})"),
            inputs: inputs(),
        });

        if model.truncation_order().is_none() {
            // a random pair, then a pair equal by construction
            let twin = model.compose(&f, &model.identity(a))?;
            for (x, y) in [(&f, &g), (&f, &twin)] {
                let d = d_distance(model, x, y)?;
                let ok = d != DyadicDistance::Zero || model.equal(x, y);
                ind.check(ok, || Witness {
                    lhs: d.to_string(),
                    rhs: "distinct maps at distance 0".into(),
                    inputs: vec![show("f", x), show("g", y)],
                });
            }
        }
    }
    let mut out = vec![refl.finish(), symm.finish(), tri.finish()];
    if model.truncation_order().is_none() {
        out.push(ind.finish());
    }
    Ok(canonicalize(out))
}

/// The enrichment inequalities. `EN.i` samples arbitrary inner maps;
/// `EN.i.pointed` restricts them to maps with `f(0) = 0`.
pub fn check_enrichment<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    model.ring().require_nat_inverse()?;
    let mut rng = cfg.rng("enrichment");
    let mut comp = Tally::new("EN.i");
    let mut comp_pointed = Tally::new("EN.i.pointed");
    let mut lin = Tally::new("EN.ii");
    let mut pair = Tally::new("EN.iii");
    let mut diff = Tally::new("EN.iv");
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let c = cfg.arity(&mut rng);
        let deg = cfg.max_degree;
        let f1 = model.random_map(&mut rng, a, b, deg);
        let f2 = perturb(model, &mut rng, &f1, deg)?;
        let g1 = model.random_map(&mut rng, b, c, deg);
        let g2 = perturb(model, &mut rng, &g1, deg)?;
        let df = d_distance(model, &f1, &f2)?;
        let dg = d_distance(model, &g1, &g2)?;

        // (i) composition
        let lhs = d_distance(model, &model.compose(&g1, &f1)?, &model.compose(&g2, &f2)?)?;
        record_truth(&mut comp, lhs.le_max(&[dg, df]), || Witness {
            lhs: lhs.to_string(),
            rhs: format!("max({dg}, {df})"),
            inputs: vec![show("g1", &g1), show("g2", &g2), show("f1", &f1), show("f2", &f2)],
        });
        let p1 = pointed(model, &f1)?;
        let p2 = perturb_pointed(model, &mut rng, &p1, deg)?;
        let dp = d_distance(model, &p1, &p2)?;
        let lhs = d_distance(model, &model.compose(&g1, &p1)?, &model.compose(&g2, &p2)?)?;
        record_truth(&mut comp_pointed, lhs.le_max(&[dg, dp]), || Witness {
            lhs: lhs.to_string(),
            rhs: format!("max({dg}, {dp})"),
            inputs: vec![show("g1", &g1), show("g2", &g2), show("f1", &p1), show("f2", &p2)],
        });

        // (ii) linear structure
        let h1 = model.random_map(&mut rng, a, b, deg);
        let h2 = perturb(model, &mut rng, &h1, deg)?;
        let dh = d_distance(model, &h1, &h2)?;
        let r = model.random_scalar(&mut rng);
        let s = model.random_scalar(&mut rng);
        let c1 = model.add(&model.scale(&r, &f1), &model.scale(&s, &h1))?;
        let c2 = model.add(&model.scale(&r, &f2), &model.scale(&s, &h2))?;
        let lhs = d_distance(model, &c1, &c2)?;
        record_truth(&mut lin, lhs.le_max(&[df, dh]), || Witness {
            lhs: lhs.to_string(),
            rhs: format!("max({df}, {dh})"),
            inputs: vec![show("f1", &f1), show("f2", &f2), show("g1", &h1), show("g2", &h2), show("r", &r), show("s", &s)],
        });

        // (iii) pairing is an isometry
        let lhs = d_distance(
            model,
            &model.pair(a, &[f1.clone(), h1.clone()])?,
            &model.pair(a, &[f2.clone(), h2.clone()])?,
        )?;
        let rhs = df.max(dh);
        let truth = if lhs.is_unresolved() || rhs.is_unresolved() {
            if lhs == rhs {
                Truth::True
            } else {
                Truth::Undetermined
            }
        } else {
            (lhs == rhs).into()
        };
        record_truth(&mut pair, truth, || Witness {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            inputs: vec![show("f0", &f1), show("g0", &f2), show("f1", &h1), show("g1", &h2)],
        });

        // (iv) differentiation
        let lhs = d_distance(model, &model.diff(&f1), &model.diff(&f2))?;
        record_truth(&mut diff, lhs.leq(df), || Witness {
            lhs: lhs.to_string(),
            rhs: df.to_string(),
            inputs: vec![show("f", &f1), show("g", &f2)],
        });
    }
    Ok(canonicalize(vec![
        comp.finish(),
        comp_pointed.finish(),
        lin.finish(),
        pair.finish(),
        diff.finish(),
    ]))
}

/// `f` with its constant part removed: `f - M^(0)[f]`, built without
/// subtraction as the sum of the higher Taylor monomials.
fn pointed<M: Model>(model: &M, f: &M::Map) -> Result<M::Map> {
    let bound = model.degree_bound(f);
    let bound = model.truncation_order().map_or(bound, |k| bound.min(k));
    let pieces = taylor_monomials(model, f, bound)?;
    model.sum(model.domain(f), model.codomain(f), &pieces[1..])
}

fn perturb_pointed<M: SampleModel>(
    model: &M,
    rng: &mut rand_chacha::ChaCha8Rng,
    f: &M::Map,
    max_degree: usize,
) -> Result<M::Map> {
    if rng.gen_bool(0.2) || max_degree == 0 {
        return Ok(f.clone());
    }
    let d = rng.gen_range(1..=max_degree);
    let piece = model.random_homogeneous(rng, model.domain(f), model.codomain(f), d);
    model.add(f, &piece)
}

/// `d(T^(n)[f], f)` for `n = 0..=cap`.
pub fn convergence_profile<M: Model>(model: &M, f: &M::Map, cap: usize) -> Result<Vec<DyadicDistance>> {
    let pieces = taylor_monomials(model, f, cap)?;
    let mut partial = model.zero_map(model.domain(f), model.codomain(f));
    let mut out = Vec::with_capacity(cap + 1);
    for piece in &pieces {
        partial = model.add(&partial, piece)?;
        out.push(d_distance(model, &partial, f)?);
    }
    Ok(out)
}

/// The convergence clauses for one map: the bound `d(T^(n)[f], f) <= 2^-(n+1)`,
/// the value at the end of the profile, and monotonicity.
pub fn check_convergence_of<M: Model>(model: &M, f: &M::Map, cap: usize) -> Result<Vec<AxiomReport>> {
    let mut tallies = convergence_tallies();
    convergence_instance(model, f, cap, &mut tallies)?;
    Ok(finish_convergence(tallies))
}

fn convergence_tallies() -> [Tally; 3] {
    [Tally::new("CV.i"), Tally::new("CV.ii"), Tally::new("CV.iii")]
}

fn finish_convergence(t: [Tally; 3]) -> Vec<AxiomReport> {
    canonicalize(t.into_iter().map(Tally::finish).collect())
}

fn convergence_instance<M: Model>(model: &M, f: &M::Map, cap: usize, t: &mut [Tally; 3]) -> Result<()> {
    let profile = convergence_profile(model, f, cap)?;
    let shown = || {
        vec![
            show("f", f),
            format!("profile = [{}]", profile.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")),
        ]
    };
    for (n, &d) in profile.iter().enumerate() {
        record_truth(&mut t[0], d.leq(DyadicDistance::Exp(n + 1)), || Witness {
            lhs: format!("d(T{n}, f) = {d}"),
            rhs: format!("2^-{}", n + 1),
            inputs: shown(),
        });
    }
    // where the profile must end up
    let (from, target) = match model.truncation_order() {
        Some(k) => (k, DyadicDistance::AtMost(k + 1)),
        None => (model.degree_bound(f), DyadicDistance::Zero),
    };
    for (n, &d) in profile.iter().enumerate().skip(from) {
        t[1].check(d == target, || Witness {
            lhs: format!("d(T{n}, f) = {d}"),
            rhs: target.to_string(),
            inputs: shown(),
        });
    }
    for (n, w) in profile.windows(2).enumerate() {
        record_truth(&mut t[2], w[1].leq(w[0]).or((w[0] == w[1]).into()), || Witness {
            lhs: format!("d(T{}, f) = {}", n + 1, w[1]),
            rhs: format!("<= d(T{n}, f) = {}", w[0]),
            inputs: shown(),
        });
    }
    Ok(())
}

/// The convergence clauses over seeded random maps, each profiled up to its
/// degree bound (capped at the truncation order) plus one.
pub fn check_convergence<M: SampleModel>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>> {
    model.ring().require_nat_inverse()?;
    let mut rng = cfg.rng("convergence");
    let mut t = convergence_tallies();
    for _ in 0..cfg.samples {
        let a = cfg.arity(&mut rng);
        let b = cfg.arity(&mut rng);
        let f = model.random_map(&mut rng, a, b, cfg.max_degree);
        let cap = match model.truncation_order() {
            Some(k) => k,
            None => model.degree_bound(&f) + 1,
        };
        convergence_instance(model, &f, cap, &mut t)?;
    }
    Ok(finish_convergence(t))
}
