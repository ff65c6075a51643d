//! Truncated graded-commutative polynomial rings over the rationals.
//!
//! A [`Ring`] is a free polynomial ring on weighted generators, cut down by
//! single-generator power rewrite rules (`zeta^3 -> -L*zeta^2`, `H^4 -> 0`)
//! and by degree truncation. Every [`Polynomial`] is kept in rewrite normal
//! form, so equality of classes is equality of term maps.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exponent vector, indexed by generator position in the owning ring.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has degree 0")]
    ZeroDegree(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rule for `{generator}^{exponent}` has degree {leading} but replacement term has degree {found}")]
    RuleDegreeMismatch {
        generator: String,
        exponent: u32,
        leading: u32,
        found: u32,
    },
    #[error("rule for `{generator}^{exponent}` does not decrease the monomial order")]
    NonTerminating { generator: String, exponent: u32 },
    #[error("more than one rule rewrites generator `{0}`")]
    DuplicateRule(String),
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("constant term is {0}, expected 1")]
    NotAUnit(BigRational),
    #[error("degree {degree} outside 0..={truncation}")]
    DegreeOutOfRange { degree: u32, truncation: u32 },
    #[error("expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

/// `generator^exponent -> replacement`, where the replacement is given as
/// named terms `coeff * g1^k1 * g2^k2 ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub generator: String,
    pub exponent: u32,
    pub replacement: Vec<(BigRational, Vec<(String, u32)>)>,
}

/// Upper bound on the weighted degree carried by a subset of generators.
///
/// Used for pulled-back base classes: monomials purely in base generators
/// vanish above the base dimension even when the ambient truncation is larger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBound {
    pub generators: Vec<String>,
    pub max_degree: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingSpec {
    pub generators: Vec<GeneratorSpec>,
    pub rules: Vec<RewriteRule>,
    pub truncation: u32,
    pub bounds: Vec<DegreeBound>,
}

impl RingSpec {
    pub fn new(truncation: u32) -> Self {
        RingSpec {
            truncation,
            ..Default::default()
        }
    }

    pub fn generator(mut self, name: &str, degree: u32) -> Self {
        self.generators.push(GeneratorSpec {
            name: name.to_string(),
            degree,
        });
        self
    }

    /// Adds `generator^exponent -> sum coeff * prod g^k`.
    pub fn rule(mut self, generator: &str, exponent: u32, replacement: &[(i64, &[(&str, u32)])]) -> Self {
        self.rules.push(RewriteRule {
            generator: generator.to_string(),
            exponent,
            replacement: replacement
                .iter()
                .map(|(c, m)| {
                    (
                        BigRational::from_integer(BigInt::from(*c)),
                        m.iter().map(|(g, k)| (g.to_string(), *k)).collect(),
                    )
                })
                .collect(),
        });
        self
    }

    pub fn bound(mut self, generators: &[&str], max_degree: u32) -> Self {
        self.bounds.push(DegreeBound {
            generators: generators.iter().map(|g| g.to_string()).collect(),
            max_degree,
        });
        self
    }
}

#[derive(Debug, PartialEq, Eq)]
struct CompiledRule {
    var: usize,
    exponent: u32,
    replacement: Vec<(Monomial, BigRational)>,
}

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    generators: Vec<GeneratorSpec>,
    rules: Vec<CompiledRule>,
    truncation: u32,
    // (per-generator weight, or 0 when outside the bound's subset; max degree)
    bounds: Vec<(Vec<u32>, u32)>,
}

/// Shared handle to a ring presentation. Cloning is cheap.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.generators.iter().map(|g| g.name.as_str()).collect();
        write!(f, "Ring{:?}/deg<={}", names, self.0.truncation)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

/// Validates `spec` and builds the ring it presents.
pub fn make_ring(spec: RingSpec) -> Result<Ring, RingError> {
    let mut index = BTreeMap::new();
    for (i, g) in spec.generators.iter().enumerate() {
        if g.degree == 0 {
            return Err(RingError::ZeroDegree(g.name.clone()));
        }
        if index.insert(g.name.clone(), i).is_some() {
            return Err(RingError::DuplicateGenerator(g.name.clone()));
        }
    }
    let n = spec.generators.len();
    let weight = |m: &Monomial| -> u32 {
        m.iter()
            .zip(&spec.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    };
    let lookup = |name: &str| index.get(name).copied().ok_or_else(|| RingError::UnknownGenerator(name.to_string()));

    let mut rules: Vec<CompiledRule> = Vec::with_capacity(spec.rules.len());
    for rule in &spec.rules {
        let var = lookup(&rule.generator)?;
        if rules.iter().any(|r| r.var == var) {
            return Err(RingError::DuplicateRule(rule.generator.clone()));
        }
        let non_terminating = || RingError::NonTerminating {
            generator: rule.generator.clone(),
            exponent: rule.exponent,
        };
        if rule.exponent == 0 {
            return Err(non_terminating());
        }
        let mut leading = vec![0; n];
        leading[var] = rule.exponent;
        let leading_degree = weight(&leading);

        let mut replacement: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (coeff, factors) in &rule.replacement {
            let mut m = vec![0; n];
            for (g, k) in factors {
                m[lookup(g)?] += k;
            }
            let found = weight(&m);
            if found != leading_degree {
                return Err(RingError::RuleDegreeMismatch {
                    generator: rule.generator.clone(),
                    exponent: rule.exponent,
                    leading: leading_degree,
                    found,
                });
            }
            // Lex order with generator 0 most significant is a well-order
            // compatible with multiplication, so strict decrease terminates.
            if m.cmp(&leading) != Ordering::Less {
                return Err(non_terminating());
            }
            let slot = replacement.entry(m).or_insert_with(BigRational::zero);
            *slot += coeff;
        }
        replacement.retain(|_, c| !c.is_zero());
        rules.push(CompiledRule {
            var,
            exponent: rule.exponent,
            replacement: replacement.into_iter().collect(),
        });
    }

    let mut bounds = Vec::with_capacity(spec.bounds.len());
    for b in &spec.bounds {
        let mut w = vec![0; n];
        for g in &b.generators {
            let i = lookup(g)?;
            w[i] = spec.generators[i].degree;
        }
        bounds.push((w, b.max_degree));
    }

    Ok(Ring(Arc::new(RingData {
        generators: spec.generators,
        rules,
        truncation: spec.truncation,
        bounds,
    })))
}

impl Ring {
    /// The ring of a point: no generators, truncation 0.
    pub fn point() -> Ring {
        make_ring(RingSpec::new(0)).expect("empty presentation is valid")
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.0.generators
    }

    pub fn truncation(&self) -> u32 {
        self.0.truncation
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.0.generators.iter().position(|g| g.name == name)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(BigRational::one())
    }

    pub fn constant(&self, c: BigRational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; self.0.generators.len()], c);
        }
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    pub fn integer(&self, c: i64) -> Polynomial {
        self.constant(BigRational::from_integer(c.into()))
    }

    /// The class of a single generator.
    pub fn gen(&self, name: &str) -> Result<Polynomial, RingError> {
        let i = self
            .generator_index(name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        let mut m = vec![0; self.0.generators.len()];
        m[i] = 1;
        self.from_terms([(m, BigRational::one())])
    }

    /// Builds a polynomial from raw terms, reducing to normal form.
    pub fn from_terms<I>(&self, terms: I) -> Result<Polynomial, RingError>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let order: Vec<usize> = (0..self.0.rules.len()).collect();
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            if m.len() != self.0.generators.len() {
                return Err(RingError::ArityMismatch {
                    expected: self.0.generators.len(),
                    found: m.len(),
                });
            }
            self.reduce_into(m, c, &order, &mut out);
        }
        Ok(Polynomial {
            ring: self.clone(),
            terms: out,
        })
    }

    pub fn degree_of(&self, m: &[u32]) -> u32 {
        m.iter()
            .zip(&self.0.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn within_bounds(&self, m: &[u32]) -> bool {
        self.degree_of(m) <= self.0.truncation
            && self
                .0
                .bounds
                .iter()
                .all(|(w, max)| m.iter().zip(w).map(|(e, w)| e * w).sum::<u32>() <= *max)
    }

    fn is_reducible(&self, m: &[u32]) -> bool {
        self.0.rules.iter().any(|r| m[r.var] >= r.exponent)
    }

    /// Normal-form monomials of weighted degree `d`, in lex order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        fn walk(ring: &Ring, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            let gens = &ring.0.generators;
            if i == gens.len() {
                if left == 0 && ring.within_bounds(cur) && !ring.is_reducible(cur) {
                    out.push(cur.clone());
                }
                return;
            }
            let deg = gens[i].degree;
            for e in (0..=left / deg).rev() {
                cur[i] = e;
                walk(ring, i + 1, left - e * deg, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        if d <= self.0.truncation {
            let mut cur = vec![0; self.0.generators.len()];
            walk(self, 0, d, &mut cur, &mut out);
        }
        out
    }

    fn reduce_into(
        &self,
        m: Monomial,
        c: BigRational,
        order: &[usize],
        out: &mut BTreeMap<Monomial, BigRational>,
    ) {
        let mut stack = vec![(m, c)];
        while let Some((m, c)) = stack.pop() {
            if c.is_zero() || !self.within_bounds(&m) {
                continue;
            }
            let rule = order
                .iter()
                .map(|&i| &self.0.rules[i])
                .find(|r| m[r.var] >= r.exponent);
            match rule {
                Some(r) => {
                    for (rm, rc) in &r.replacement {
                        let mut next = m.clone();
                        next[r.var] -= r.exponent;
                        for (a, b) in next.iter_mut().zip(rm) {
                            *a += b;
                        }
                        stack.push((next, &c * rc));
                    }
                }
                None => match out.entry(m) {
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    Entry::Vacant(v) => {
                        v.insert(c);
                    }
                },
            }
        }
    }

    /// Product of two polynomials, applying rules in the given priority
    /// order. Normal forms do not depend on `order`; exposed so that this can
    /// be checked.
    pub fn mul_with_rule_order(
        &self,
        a: &Polynomial,
        b: &Polynomial,
        order: &[usize],
    ) -> Result<Polynomial, RingError> {
        if a.ring != *self || b.ring != *self {
            return Err(RingError::MixedRings);
        }
        let mut out = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                if self.degree_of(&m) > self.0.truncation {
                    continue;
                }
                self.reduce_into(m, ca * cb, order, &mut out);
            }
        }
        Ok(Polynomial {
            ring: self.clone(),
            terms: out,
        })
    }

    pub fn rule_count(&self) -> usize {
        self.0.rules.len()
    }
}

/// A class in a [`Ring`], stored in normal form with no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.ring.0.generators.len()])
    }

    /// Largest weighted degree of a term, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree_of(m)).max()
    }

    /// True if every term has weighted degree exactly `d` (zero qualifies).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree_of(m) == d)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        if self.ring != other.ring {
            return Err(RingError::MixedRings);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let slot = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        let order: Vec<usize> = (0..self.ring.0.rules.len()).collect();
        self.ring.mul_with_rule_order(self, other, &order)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Polynomial {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(self.ring.one(), |acc, _| &acc * self)
    }

    /// Inverse of a class with constant term 1, by the geometric series.
    pub fn invert_unit(&self) -> Result<Polynomial, RingError> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(RingError::NotAUnit(c));
        }
        // a = 1 + x, a^-1 = sum (-x)^k; x^k has degree >= k.
        let minus_x = &self.ring.one() - self;
        let mut power = self.ring.one();
        let mut acc = self.ring.one();
        for _ in 0..self.ring.0.truncation {
            power = &power * &minus_x;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc)
    }

    /// Sum of the terms of weighted degree `d`.
    pub fn grade_component(&self, d: u32) -> Result<Polynomial, RingError> {
        if d > self.ring.0.truncation {
            return Err(RingError::DegreeOutOfRange {
                degree: d,
                truncation: self.ring.0.truncation,
            });
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.degree_of(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Applies the ring homomorphism sending generator `i` to `images[i]`.
    pub fn map_into(&self, target: &Ring, images: &[Polynomial]) -> Result<Polynomial, RingError> {
        let n = self.ring.0.generators.len();
        if images.len() != n {
            return Err(RingError::ArityMismatch {
                expected: n,
                found: images.len(),
            });
        }
        if images.iter().any(|p| p.ring != *target) {
            return Err(RingError::MixedRings);
        }
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (img, &e) in images.iter().zip(m) {
                for _ in 0..e {
                    t = t.try_mul(img)?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Degree-sorted terms: ascending degree, then lex-descending exponents.
    fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            self.ring
                .degree_of(a)
                .cmp(&self.ring.degree_of(b))
                .then_with(|| b.cmp(a))
        });
        v
    }
}

/// Canonical text: `coeff*gen^k*gen^k...`, sorted by degree then lex.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .iter()
                .zip(&self.ring.0.generators)
                .filter(|(e, _)| **e > 0)
                .map(|(e, g)| {
                    if *e == 1 {
                        g.name.clone()
                    } else {
                        format!("{}^{}", g.name, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

// Operator forms panic on mixed rings; use the `try_*` methods where the
// operands may come from different presentations.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial operands from different rings")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Ring {
        make_ring(RingSpec::new(3).generator("H", 1).rule("H", 4, &[])).unwrap()
    }

    fn bundle_over_curve() -> Ring {
        make_ring(
            RingSpec::new(3)
                .generator("zeta", 1)
                .generator("L", 1)
                .rule("zeta", 3, &[(-1, &[("L", 1), ("zeta", 2)])])
                .bound(&["L"], 1),
        )
        .unwrap()
    }

    #[test]
    fn projective_three_space_binomial() {
        let r = p3();
        let h = r.gen("H").unwrap();
        let a = &r.one() + &h;
        let p = a.pow(4);
        assert_eq!(p.to_string(), "1 + 4*H + 6*H^2 + 4*H^3");
        assert_eq!(p.grade_component(2).unwrap().to_string(), "6*H^2");
        assert!(h.pow(4).is_zero());
    }

    #[test]
    fn projective_line_square() {
        let r = make_ring(RingSpec::new(1).generator("H", 1).rule("H", 2, &[])).unwrap();
        let a = &r.one() + &r.gen("H").unwrap();
        assert_eq!((&a * &a).to_string(), "1 + 2*H");
    }

    #[test]
    fn grothendieck_rule_fires() {
        let r = bundle_over_curve();
        let z = r.gen("zeta").unwrap();
        let l = r.gen("L").unwrap();
        assert_eq!(&z.pow(2) * &z, -(&l * &z.pow(2)));
    }

    #[test]
    fn point_ring_kills_positive_degree() {
        let r = Ring::point();
        assert_eq!(r.truncation(), 0);
        assert!(r.gen("H").is_err());
        assert_eq!(r.integer(5).grade_component(0).unwrap(), r.integer(5));
        assert!(r.one().grade_component(1).is_err());
    }

    #[test]
    fn inversion() {
        let r = p3();
        let h = r.gen("H").unwrap();
        let inv = (&r.one() + &h).invert_unit().unwrap();
        assert_eq!(inv.to_string(), "1 - H + H^2 - H^3");
        assert_eq!(r.one().invert_unit().unwrap(), r.one());

        let f = make_ring(RingSpec::new(2).generator("L", 1)).unwrap();
        let l = f.gen("L").unwrap();
        let inv = (&f.one() + &l.scale_int(2)).invert_unit().unwrap();
        assert_eq!(inv.to_string(), "1 - 2*L + 4*L^2");
    }

    #[test]
    fn inversion_rejects_non_units() {
        let r = p3();
        let h = r.gen("H").unwrap();
        assert!(matches!(h.invert_unit(), Err(RingError::NotAUnit(_))));
        assert!(matches!(r.integer(2).invert_unit(), Err(RingError::NotAUnit(_))));
    }

    #[test]
    fn grade_selection() {
        let r = make_ring(RingSpec::new(2).generator("L", 1).generator("c1", 1)).unwrap();
        let l = r.gen("L").unwrap();
        let c1 = r.gen("c1").unwrap();
        let a = &l.scale_int(12) + &(&c1 * &l).scale_int(3);
        assert_eq!(a.grade_component(2).unwrap().to_string(), "3*L*c1");
        assert!(r.one().grade_component(1).unwrap().is_zero());
        assert!(matches!(
            a.grade_component(3),
            Err(RingError::DegreeOutOfRange { degree: 3, truncation: 2 })
        ));
    }

    #[test]
    fn presentation_errors() {
        let dup = RingSpec::new(2).generator("H", 1).generator("H", 1);
        assert!(matches!(make_ring(dup), Err(RingError::DuplicateGenerator(g)) if g == "H"));

        let mismatch = RingSpec::new(3).generator("z", 1).generator("L", 1).rule("z", 3, &[(-1, &[("L", 1)])]);
        assert!(matches!(make_ring(mismatch), Err(RingError::RuleDegreeMismatch { .. })));

        // L first in the order: L*z^2 > z^3, so the rule climbs.
        let climbing = RingSpec::new(3)
            .generator("L", 1)
            .generator("z", 1)
            .rule("z", 3, &[(-1, &[("L", 1), ("z", 2)])]);
        assert!(matches!(make_ring(climbing), Err(RingError::NonTerminating { .. })));

        let unknown = RingSpec::new(1).generator("H", 1).rule("K", 2, &[]);
        assert!(matches!(make_ring(unknown), Err(RingError::UnknownGenerator(_))));

        let twice = RingSpec::new(3).generator("H", 1).rule("H", 4, &[]).rule("H", 5, &[]);
        assert!(matches!(make_ring(twice), Err(RingError::DuplicateRule(_))));

        let zero_deg = RingSpec::new(1).generator("H", 0);
        assert!(matches!(make_ring(zero_deg), Err(RingError::ZeroDegree(_))));
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = p3().gen("H").unwrap();
        let b = bundle_over_curve().gen("L").unwrap();
        assert_eq!(a.try_mul(&b), Err(RingError::MixedRings));
        assert_eq!(a.try_add(&b), Err(RingError::MixedRings));
    }

    #[test]
    fn equal_presentations_are_one_ring() {
        let a = p3().gen("H").unwrap();
        let b = p3().gen("H").unwrap();
        assert_eq!(&a * &b, p3().gen("H").unwrap().pow(2));
    }

    #[test]
    fn bounds_kill_high_base_degree() {
        let r = bundle_over_curve();
        let l = r.gen("L").unwrap();
        assert!(l.pow(2).is_zero());
        assert!(!(&l * &r.gen("zeta").unwrap()).is_zero());
    }

    #[test]
    fn degree_three_monomial_basis_of_formal_threefold() {
        let r = make_ring(
            RingSpec::new(3)
                .generator("L", 1)
                .generator("c1", 1)
                .generator("c2", 2)
                .generator("c3", 3),
        )
        .unwrap();
        assert_eq!(r.monomials_of_degree(3).len(), 7);
    }

    #[test]
    fn map_into_specializes() {
        let formal = make_ring(RingSpec::new(1).generator("L", 1).generator("c1", 1)).unwrap();
        let p1 = make_ring(RingSpec::new(1).generator("H", 1).rule("H", 2, &[])).unwrap();
        let h = p1.gen("H").unwrap();
        let a = &formal.one() + &formal.gen("c1").unwrap() + formal.gen("L").unwrap().scale_int(12);
        let img = a.map_into(&p1, &[h.clone(), h.scale_int(2)]).unwrap();
        assert_eq!(img.to_string(), "1 + 14*H");
    }

    #[test]
    fn rational_coefficients_display() {
        let r = p3();
        let h = r.gen("H").unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!((&h.scale(&half) - &r.one()).to_string(), "-1 + 1/2*H");
    }
}
