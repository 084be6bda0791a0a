//! Sparse multivariate polynomials and the maps of the polynomial model.
//!
//! A [`PolyMap`] `n -> m` is an `m`-tuple of polynomials in `n` indexed
//! variables `x0 .. x(n-1)`. Terms are stored in a `BTreeMap` keyed by
//! [`Monomial`], whose ordering is graded (total degree ascending) and
//! lexicographic within a degree (`x0^2 < x0*x1 < x1^2`). Zero coefficients
//! are never stored, so structural equality is equality of maps.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Scalar, Semiring};

/// A power product `x_{i1}^{e1} * ... * x_{ik}^{ek}` with all `e > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    // sorted by variable index, exponents strictly positive
    exps: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        Monomial { exps: vec![(i, 1)] }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; zero exponents are
    /// dropped and repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Largest variable index plus one.
    pub fn support_bound(&self) -> usize {
        self.exps.last().map_or(0, |&(v, _)| v + 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, x)| (v, x * e)).collect(),
        }
    }

    /// Lowers the exponent of `var` by one; returns the old exponent.
    fn lower(&self, var: usize) -> Option<(u32, Monomial)> {
        let idx = self.exps.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let e = self.exps[idx].1;
        let mut exps = self.exps.clone();
        if e == 1 {
            exps.remove(idx);
        } else {
            exps[idx].1 -= 1;
        }
        Some((e, Monomial { exps }))
    }

    fn rename(&self, map: &impl Fn(usize) -> usize) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (map(v), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                // Within a degree, a larger exponent on an earlier variable sorts first.
                let (mut i, mut j) = (0, 0);
                loop {
                    match (self.exps.get(i), other.exps.get(j)) {
                        (None, None) => return Ordering::Equal,
                        (Some(_), None) => return Ordering::Less,
                        (None, Some(_)) => return Ordering::Greater,
                        (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                            Ordering::Less => return Ordering::Less,
                            Ordering::Greater => return Ordering::Greater,
                            Ordering::Equal if ea != eb => return eb.cmp(&ea),
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                        },
                    }
                }
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (k, &(v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `arity` variables over a fixed semiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Semiring,
    arity: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(ring: Semiring, arity: usize) -> Self {
        Poly {
            ring,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Semiring, arity: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(ring, arity);
        p.add_term(Monomial::one(), c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(ring: Semiring, arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable x{i} out of range for arity {arity}");
        let mut p = Poly::zero(ring, arity);
        p.add_term(Monomial::var(i), ring.one());
        p
    }

    /// Builds a polynomial from terms, checking variable bounds and semiring.
    pub fn from_terms(
        ring: Semiring,
        arity: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = Poly::zero(ring, arity);
        for (m, c) in terms {
            if m.support_bound() > arity {
                return Err(Error::ArityMismatch {
                    context: "polynomial term",
                    expected: arity,
                    found: m.support_bound(),
                });
            }
            if c.semiring() != ring {
                return Err(Error::ScalarMismatch {
                    left: ring.to_string(),
                    right: c.semiring().to_string(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn ring(&self) -> Semiring {
        self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly, context: &'static str) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ScalarMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                context,
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other, "polynomial sum")?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Scalar) -> Poly {
        let mut out = Poly::zero(self.ring, self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), r * c);
        }
        out
    }

    /// `-p`, when the semiring has additive inverses.
    pub fn neg(&self) -> Option<Poly> {
        let minus_one = self.ring.one().neg()?;
        Some(self.scale(&minus_one))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.mul_capped(other, None)
    }

    /// The product with every term above total degree `cap` dropped.
    pub fn mul_capped(&self, other: &Poly, cap: Option<usize>) -> Result<Poly> {
        self.check_compatible(other, "polynomial product")?;
        let cap = cap.unwrap_or(usize::MAX);
        let mut out = Poly::zero(self.ring, self.arity);
        for (ma, ca) in &self.terms {
            let da = ma.total_degree() as usize;
            for (mb, cb) in &other.terms {
                if da + mb.total_degree() as usize <= cap {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.ring, self.arity, self.ring.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring and arity");
        }
        acc
    }

    /// `∂p/∂x_i`, with exponents embedded as `1 + ... + 1` in the semiring.
    pub fn partial_derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.ring, self.arity);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(i) {
                out.add_term(lowered, &self.ring.nat_embed(e as u64) * c);
            }
        }
        out
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.total_degree() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Lowest total degree of a stored term (`None` for zero).
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| m.total_degree() as usize)
    }

    /// The homogeneous part of total degree `n`.
    pub fn graded_component(&self, n: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() as usize == n)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            ring: self.ring,
            arity: self.arity,
            terms,
        }
    }

    /// Drops every term of total degree above `order`.
    pub fn truncate(&self, order: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() as usize <= order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            ring: self.ring,
            arity: self.arity,
            terms,
        }
    }

    /// Relabels variables into a polynomial of arity `new_arity`.
    pub fn rename(&self, new_arity: usize, map: impl Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero(self.ring, new_arity);
        for (m, c) in &self.terms {
            let r = m.rename(&map);
            assert!(r.support_bound() <= new_arity, "rename out of range");
            out.add_term(r, c.clone());
        }
        out
    }

    /// Reinterprets the polynomial with more (unused) variables.
    pub fn pad(&self, new_arity: usize) -> Poly {
        assert!(new_arity >= self.arity);
        Poly {
            ring: self.ring,
            arity: new_arity,
            terms: self.terms.clone(),
        }
    }

    /// `Some(None)` for zero, `Some(Some(m))` for the bare monomial `1*m`.
    fn as_unit_monomial(&self) -> Option<Option<&Monomial>> {
        match self.terms.len() {
            0 => Some(None),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                c.is_one().then_some(Some(m))
            }
            _ => None,
        }
    }

    /// Substitutes `subs[j]` for `x_j`. All substitutes share one arity and ring.
    pub fn substitute(&self, subs: &[Poly], arity: usize) -> Result<Poly> {
        self.substitute_capped(subs, arity, None)
    }

    /// [`Poly::substitute`] keeping only terms of total degree at most `cap`.
    /// Intermediate products are truncated too, so nothing above `cap` is built.
    pub fn substitute_capped(&self, subs: &[Poly], arity: usize, cap: Option<usize>) -> Result<Poly> {
        if subs.len() != self.arity {
            return Err(Error::ArityMismatch {
                context: "substitution",
                expected: self.arity,
                found: subs.len(),
            });
        }
        for s in subs {
            if s.arity != arity || s.ring != self.ring {
                return Err(Error::ArityMismatch {
                    context: "substitution operand",
                    expected: arity,
                    found: s.arity,
                });
            }
        }
        let mut out = Poly::zero(self.ring, arity);
        let units: Option<Vec<Option<&Monomial>>> =
            subs.iter().map(Poly::as_unit_monomial).collect();
        if let Some(units) = units {
            // Variable renaming / zero insertion: no polynomial products needed.
            'terms: for (m, c) in &self.terms {
                let mut acc = Monomial::one();
                for &(v, e) in m.exponents() {
                    match units[v] {
                        None => continue 'terms,
                        Some(u) => acc = acc.mul(&u.pow(e)),
                    }
                }
                if cap.is_none_or(|k| acc.total_degree() as usize <= k) {
                    out.add_term(acc, c.clone());
                }
            }
            return Ok(out);
        }
        let mut powers: Vec<Vec<Poly>> = subs
            .iter()
            .map(|s| vec![Poly::constant(self.ring, arity, self.ring.one()), s.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(self.ring, arity, c.clone());
            for &(v, e) in m.exponents() {
                let e = e as usize;
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap().mul_capped(&subs[v], cap)?;
                    powers[v].push(next);
                }
                acc = acc.mul_capped(&powers[v][e], cap)?;
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                context: "evaluation point",
                expected: self.arity,
                found: point.len(),
            });
        }
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exponents() {
                t = t.checked_mul(&point[v].pow(e))?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = match c.neg() {
                Some(n) if c.is_negative() => (true, n),
                _ => (false, c.clone()),
            };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A map `n -> m` of the polynomial model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    ring: Semiring,
    domain: usize,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(ring: Semiring, domain: usize, components: Vec<Poly>) -> Result<Self> {
        for c in &components {
            if c.arity != domain {
                return Err(Error::ArityMismatch {
                    context: "map component",
                    expected: domain,
                    found: c.arity,
                });
            }
            if c.ring != ring {
                return Err(Error::ScalarMismatch {
                    left: ring.to_string(),
                    right: c.ring.to_string(),
                });
            }
        }
        Ok(PolyMap {
            ring,
            domain,
            components,
        })
    }

    /// A single polynomial viewed as a map `arity -> 1`.
    pub fn scalar(p: Poly) -> Self {
        PolyMap {
            ring: p.ring,
            domain: p.arity,
            components: vec![p],
        }
    }

    pub fn ring(&self) -> Semiring {
        self.ring
    }

    pub fn domain_arity(&self) -> usize {
        self.domain
    }

    pub fn codomain_arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn identity(ring: Semiring, n: usize) -> Self {
        PolyMap {
            ring,
            domain: n,
            components: (0..n).map(|i| Poly::var(ring, n, i)).collect(),
        }
    }

    pub fn zero_map(ring: Semiring, n: usize, m: usize) -> Self {
        PolyMap {
            ring,
            domain: n,
            components: vec![Poly::zero(ring, n); m],
        }
    }

    /// Projection `n_0 × ... × n_k -> n_j` onto block `j`.
    pub fn projection(ring: Semiring, blocks: &[usize], j: usize) -> Result<Self> {
        if j >= blocks.len() {
            return Err(Error::ArityMismatch {
                context: "projection index",
                expected: blocks.len(),
                found: j,
            });
        }
        let domain: usize = blocks.iter().sum();
        let offset: usize = blocks[..j].iter().sum();
        Ok(PolyMap {
            ring,
            domain,
            components: (0..blocks[j])
                .map(|i| Poly::var(ring, domain, offset + i))
                .collect(),
        })
    }

    /// `⟨f_0, ..., f_k⟩`, all with domain `domain`.
    pub fn pair(ring: Semiring, domain: usize, maps: &[PolyMap]) -> Result<Self> {
        let mut components = Vec::new();
        for m in maps {
            if m.domain != domain {
                return Err(Error::ArityMismatch {
                    context: "pairing",
                    expected: domain,
                    found: m.domain,
                });
            }
            if m.ring != ring {
                return Err(Error::ScalarMismatch {
                    left: ring.to_string(),
                    right: m.ring.to_string(),
                });
            }
            components.extend(m.components.iter().cloned());
        }
        Ok(PolyMap {
            ring,
            domain,
            components,
        })
    }

    fn check_same_hom(&self, other: &PolyMap, context: &'static str) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ScalarMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        if self.domain != other.domain {
            return Err(Error::ArityMismatch {
                context,
                expected: self.domain,
                found: other.domain,
            });
        }
        if self.codomain_arity() != other.codomain_arity() {
            return Err(Error::ArityMismatch {
                context,
                expected: self.codomain_arity(),
                found: other.codomain_arity(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyMap) -> Result<PolyMap> {
        self.check_same_hom(other, "map sum")?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(PolyMap {
            ring: self.ring,
            domain: self.domain,
            components,
        })
    }

    pub fn scale(&self, r: &Scalar) -> PolyMap {
        PolyMap {
            ring: self.ring,
            domain: self.domain,
            components: self.components.iter().map(|p| p.scale(r)).collect(),
        }
    }

    pub fn neg(&self) -> Option<PolyMap> {
        let minus_one = self.ring.one().neg()?;
        Some(self.scale(&minus_one))
    }

    /// `g ∘ self`: substitutes the components of `self` into `g`.
    pub fn then(&self, g: &PolyMap) -> Result<PolyMap> {
        compose(g, self)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    pub fn total_degree(&self) -> usize {
        self.components
            .iter()
            .map(Poly::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Lowest degree of any stored term across components.
    pub fn order(&self) -> Option<usize> {
        self.components.iter().filter_map(Poly::order).min()
    }

    pub fn graded_component(&self, n: usize) -> PolyMap {
        self.map_components(|p| p.graded_component(n))
    }

    pub fn truncate(&self, order: usize) -> PolyMap {
        self.map_components(|p| p.truncate(order))
    }

    pub fn pad_domain(&self, new_domain: usize) -> Result<PolyMap> {
        if new_domain < self.domain {
            return Err(Error::ArityMismatch {
                context: "domain padding",
                expected: self.domain,
                found: new_domain,
            });
        }
        Ok(PolyMap {
            ring: self.ring,
            domain: new_domain,
            components: self.components.iter().map(|p| p.pad(new_domain)).collect(),
        })
    }

    pub fn map_components(&self, f: impl Fn(&Poly) -> Poly) -> PolyMap {
        let components: Vec<Poly> = self.components.iter().map(f).collect();
        let domain = components.first().map_or(self.domain, |p| p.arity);
        PolyMap {
            ring: self.ring,
            domain,
            components,
        }
    }
}

/// `g ∘ f` in the polynomial model.
pub fn compose(g: &PolyMap, f: &PolyMap) -> Result<PolyMap> {
    compose_capped(g, f, None)
}

/// `g ∘ f` with every term above total degree `cap` discarded.
pub fn compose_capped(g: &PolyMap, f: &PolyMap, cap: Option<usize>) -> Result<PolyMap> {
    if f.codomain_arity() != g.domain {
        return Err(Error::ArityMismatch {
            context: "composition",
            expected: g.domain,
            found: f.codomain_arity(),
        });
    }
    if f.ring != g.ring {
        return Err(Error::ScalarMismatch {
            left: g.ring.to_string(),
            right: f.ring.to_string(),
        });
    }
    let components = g
        .components
        .iter()
        .map(|p| p.substitute_capped(&f.components, f.domain, cap))
        .collect::<Result<_>>()?;
    Ok(PolyMap {
        ring: g.ring,
        domain: f.domain,
        components,
    })
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.len() == 1 {
            return write!(f, "{}", self.components[0]);
        }
        f.write_str("<")?;
        for (i, p) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(">")
    }
}

/// JSON form of one term: `{"exponents": {"0": 2}, "coeff": "5"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: BTreeMap<String, u32>,
    pub coeff: String,
}

/// JSON form of a map of the polynomial model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMapJson {
    pub semiring: String,
    pub domain: usize,
    pub codomain: usize,
    pub components: Vec<Vec<TermJson>>,
}

impl Poly {
    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                exponents: m
                    .exponents()
                    .iter()
                    .map(|&(v, e)| (v.to_string(), e))
                    .collect(),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_json(ring: Semiring, arity: usize, terms: &[TermJson]) -> Result<Poly> {
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let mut pairs = Vec::new();
            for (k, &e) in &t.exponents {
                let v: usize = k
                    .parse()
                    .map_err(|_| Error::Format(format!("bad variable index `{k}`")))?;
                if e == 0 {
                    return Err(Error::Format("stored exponent must be positive".into()));
                }
                pairs.push((v, e));
            }
            parsed.push((Monomial::from_pairs(pairs), ring.parse_scalar(&t.coeff)?));
        }
        Poly::from_terms(ring, arity, parsed)
    }
}

impl PolyMap {
    pub fn to_json(&self) -> PolyMapJson {
        PolyMapJson {
            semiring: self.ring.to_string(),
            domain: self.domain,
            codomain: self.codomain_arity(),
            components: self.components.iter().map(Poly::to_json).collect(),
        }
    }

    pub fn from_json(j: &PolyMapJson) -> Result<PolyMap> {
        let ring: Semiring = j.semiring.parse()?;
        if j.components.len() != j.codomain {
            return Err(Error::ArityMismatch {
                context: "json codomain",
                expected: j.codomain,
                found: j.components.len(),
            });
        }
        let components = j
            .components
            .iter()
            .map(|c| Poly::from_json(ring, j.domain, c))
            .collect::<Result<_>>()?;
        PolyMap::new(ring, j.domain, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Semiring = Semiring::Rat;

    fn x(arity: usize, i: usize) -> Poly {
        Poly::var(Q, arity, i)
    }

    fn c(arity: usize, v: i64) -> Poly {
        Poly::constant(Q, arity, Q.from_i64(v).unwrap())
    }

    fn ints(vals: &[i64]) -> Vec<Scalar> {
        vals.iter().map(|&v| Q.from_i64(v).unwrap()).collect()
    }

    #[test]
    fn sums_and_normalization() {
        let a = PolyMap::scalar(x(1, 0).add(&x(1, 0).pow(2)).unwrap());
        let b = PolyMap::scalar(x(1, 0).pow(2));
        let s = a.add(&b).unwrap();
        assert_eq!(s.to_string(), "x0 + 2*x0^2");
        for t in -2..=2 {
            let p = ints(&[t]);
            let lhs = s.eval(&p).unwrap()[0].clone();
            let rhs = &a.eval(&p).unwrap()[0] + &b.eval(&p).unwrap()[0];
            assert_eq!(lhs, rhs);
        }
        let z = PolyMap::zero_map(Q, 1, 1);
        assert_eq!(a.add(&z).unwrap(), a);

        let z2 = Semiring::ZMod(2);
        let xx = PolyMap::scalar(Poly::var(z2, 1, 0));
        assert!(xx.add(&xx).unwrap().is_zero());
    }

    #[test]
    fn products() {
        let p = x(1, 0).add(&c(1, 1)).unwrap();
        let sq = p.mul(&p).unwrap();
        assert_eq!(sq.to_string(), "1 + 2*x0 + x0^2");
        for t in -3..=3 {
            let v = p.eval(&ints(&[t])).unwrap();
            assert_eq!(sq.eval(&ints(&[t])).unwrap(), &v * &v);
        }
        assert_eq!(p.mul(&c(1, 1)).unwrap(), p);

        let z2 = Semiring::ZMod(2);
        let p2 = Poly::var(z2, 1, 0)
            .add(&Poly::constant(z2, 1, z2.one()))
            .unwrap();
        let sq2 = p2.mul(&p2).unwrap();
        assert_eq!(sq2.to_string(), "1 + x0^2");
        for t in 0..2 {
            let pt = [z2.nat_embed(t)];
            let v = p2.eval(&pt).unwrap();
            assert_eq!(sq2.eval(&pt).unwrap(), &v * &v);
        }
        assert!(x(1, 0).mul(&x(2, 0)).is_err());
    }

    #[test]
    fn composition() {
        let g = PolyMap::scalar(x(1, 0).pow(2));
        let f = PolyMap::scalar(x(1, 0).pow(2));
        let gf = compose(&g, &f).unwrap();
        assert_eq!(gf.to_string(), "x0^4");
        for t in -2..=2 {
            let p = ints(&[t]);
            assert_eq!(gf.eval(&p).unwrap(), g.eval(&f.eval(&p).unwrap()).unwrap());
        }
        assert_eq!(compose(&PolyMap::identity(Q, 1), &f).unwrap(), f);

        let g2 = PolyMap::scalar(x(2, 0).add(&x(2, 1)).unwrap());
        let f2 = PolyMap::pair(Q, 1, &[PolyMap::scalar(x(1, 0)), PolyMap::scalar(x(1, 0).pow(2))])
            .unwrap();
        assert_eq!(compose(&g2, &f2).unwrap().to_string(), "x0 + x0^2");
        assert!(compose(&g2, &f).is_err());
    }

    #[test]
    fn cartesian_structure() {
        let f = PolyMap::pair(Q, 1, &[PolyMap::scalar(x(1, 0)), PolyMap::scalar(x(1, 0).pow(2))])
            .unwrap();
        let pi1 = PolyMap::projection(Q, &[1, 1], 1).unwrap();
        assert_eq!(compose(&pi1, &f).unwrap().to_string(), "x0^2");
        assert_eq!(PolyMap::identity(Q, 2).to_string(), "<x0, x1>");
        let zero = PolyMap::zero_map(Q, 1, 1);
        let after = compose(&zero, &f.pad_domain(1).unwrap());
        assert!(after.is_err());
        let z = compose(&PolyMap::zero_map(Q, 2, 1), &f).unwrap();
        assert!(z.is_zero());
        assert!(PolyMap::pair(Q, 1, &[PolyMap::identity(Q, 2)]).is_err());
    }

    #[test]
    fn evaluation() {
        let p = PolyMap::scalar(x(1, 0).pow(2).add(&x(1, 0).scale(&Q.from_i64(2).unwrap())).unwrap().add(&c(1, 1)).unwrap());
        assert_eq!(p.eval(&ints(&[3])).unwrap(), ints(&[16]));
        let pt = ints(&[4, -1]);
        assert_eq!(PolyMap::identity(Q, 2).eval(&pt).unwrap(), pt);
        let z2 = Semiring::ZMod(2);
        assert!(Poly::var(z2, 1, 0).pow(2).eval(&[z2.one()]).unwrap().is_one());
        assert!(p.eval(&ints(&[1, 2])).is_err());
    }

    #[test]
    fn partials() {
        let p = x(1, 0).pow(3);
        assert_eq!(p.partial_derivative(0).to_string(), "3*x0^2");
        assert!(c(1, 5).partial_derivative(0).is_zero());
        let z2 = Semiring::ZMod(2);
        assert!(Poly::var(z2, 1, 0).pow(2).partial_derivative(0).is_zero());

        // product rule cross-check at sample points
        let a = x(2, 0).pow(2).add(&x(2, 1)).unwrap();
        let b = x(2, 0).mul(&x(2, 1)).unwrap().add(&c(2, 3)).unwrap();
        let lhs = a.mul(&b).unwrap().partial_derivative(0);
        let rhs = a
            .partial_derivative(0)
            .mul(&b)
            .unwrap()
            .add(&a.mul(&b.partial_derivative(0)).unwrap())
            .unwrap();
        for (s, t) in [(0, 1), (2, -3), (5, 7)] {
            let pt = ints(&[s, t]);
            assert_eq!(lhs.eval(&pt).unwrap(), rhs.eval(&pt).unwrap());
        }
    }

    #[test]
    fn degrees() {
        let p = x(1, 0).add(&x(1, 0).pow(3).scale(&Q.from_i64(5).unwrap())).unwrap();
        assert_eq!(PolyMap::scalar(p).total_degree(), 3);
        assert_eq!(PolyMap::zero_map(Q, 2, 2).total_degree(), 0);
        let m = PolyMap::pair(
            Q,
            2,
            &[PolyMap::scalar(x(2, 0)), PolyMap::scalar(x(2, 0).pow(2).mul(&x(2, 1)).unwrap())],
        )
        .unwrap();
        assert_eq!(m.total_degree(), 3);
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let mut ms = [Monomial::from_pairs([(1, 2)]),
            Monomial::from_pairs([(0, 1), (1, 1)]),
            Monomial::one(),
            Monomial::from_pairs([(0, 2)]),
            Monomial::var(1),
            Monomial::var(0)];
        ms.sort();
        let shown: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["1", "x0", "x1", "x0^2", "x0*x1", "x1^2"]);
    }

    #[test]
    fn printing() {
        let p = c(1, 3)
            .add(&x(1, 0).scale(&Q.from_i64(-2).unwrap()))
            .unwrap()
            .add(&x(1, 0).pow(2).scale(&Q.parse_scalar("1/2").unwrap()))
            .unwrap();
        assert_eq!(p.to_string(), "3 - 2*x0 + 1/2*x0^2");
        assert_eq!(x(1, 0).neg().unwrap().to_string(), "-x0");
        assert_eq!(Poly::zero(Q, 3).to_string(), "0");
    }

    #[test]
    fn json_round_trip() {
        let m = PolyMap::pair(
            Q,
            2,
            &[
                PolyMap::scalar(x(2, 0).pow(2).scale(&Q.parse_scalar("-3/4").unwrap())),
                PolyMap::scalar(c(2, 7)),
            ],
        )
        .unwrap();
        let j = m.to_json();
        assert_eq!(PolyMap::from_json(&j).unwrap(), m);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains(r#"{"exponents":{"0":2},"coeff":"-3/4"}"#), "{text}");
    }

    #[test]
    fn precomposition_is_linear() {
        let r = Q.from_i64(3).unwrap();
        let s = Q.parse_scalar("-1/2").unwrap();
        let f = PolyMap::scalar(x(2, 0).mul(&x(2, 1)).unwrap());
        let g = PolyMap::scalar(x(2, 1).pow(2).add(&c(2, 1)).unwrap());
        let h = PolyMap::pair(Q, 1, &[PolyMap::scalar(x(1, 0).add(&c(1, 2)).unwrap()), PolyMap::scalar(x(1, 0).pow(2))]).unwrap();
        let lhs = compose(&f.scale(&r).add(&g.scale(&s)).unwrap(), &h).unwrap();
        let rhs = compose(&f, &h).unwrap().scale(&r).add(&compose(&g, &h).unwrap().scale(&s)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
