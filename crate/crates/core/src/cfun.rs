//! Constructible functions over a registry of named closed strata.
//!
//! Strata are symbols carrying an Euler characteristic, a CSM class on the
//! base and an expected codimension. Functions are finite integer
//! combinations of their indicators; pushforwards along stratified
//! fibrations are given by fiber Euler characteristic tables.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gring::{Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfunError {
    #[error("unknown stratum `{0}`")]
    UnknownStratum(String),
    #[error("stratum `{0}` has no numeric Euler characteristic")]
    ChiUnavailable(String),
    #[error("stratum `{0}` has no CSM class")]
    CsmUnavailable(String),
    #[error("stratum `{name}` has codimension {codim} > {dim} but nonzero invariants")]
    EmptyStratumNonzero { name: String, codim: u32, dim: u32 },
    #[error("stratum `{0}` registered twice")]
    DuplicateStratum(String),
    #[error("CSM class of stratum `{0}` lives in another ring")]
    WrongRing(String),
    #[error("fibration chain is not strictly decreasing at `{0}`")]
    ChainNotDecreasing(String),
    #[error("fibration chain is empty")]
    EmptyChain,
    #[error("no fibration table for `{0}`")]
    MissingTable(String),
    #[error("multiplicity of `{0}` must be at least 1")]
    ZeroMultiplicity(String),
    #[error("normal crossing divisor needs at least one component")]
    NoComponents,
}

/// A named closed subvariety of the base.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub name: String,
    /// `None` on formal bases, where only the top-degree class exists.
    pub chi: Option<i64>,
    pub csm: Option<Polynomial>,
    pub expected_codim: u32,
}

impl Stratum {
    pub fn new(name: &str, expected_codim: u32, chi: Option<i64>, csm: Option<Polynomial>) -> Self {
        Stratum {
            name: name.to_string(),
            chi,
            csm,
            expected_codim,
        }
    }
}

/// Strata of a fixed base, keyed by name.
#[derive(Clone, Debug)]
pub struct StrataRegistry {
    ring: Ring,
    base_dim: u32,
    strata: BTreeMap<String, Stratum>,
}

impl StrataRegistry {
    pub fn new(ring: Ring, base_dim: u32) -> Self {
        StrataRegistry {
            ring,
            base_dim,
            strata: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn base_dim(&self) -> u32 {
        self.base_dim
    }

    /// Registers a stratum. Strata of expected codimension above the base
    /// dimension must carry zero invariants.
    pub fn insert(&mut self, s: Stratum) -> Result<(), CfunError> {
        if let Some(csm) = &s.csm {
            if csm.ring() != &self.ring {
                return Err(CfunError::WrongRing(s.name));
            }
        }
        if s.expected_codim > self.base_dim {
            let chi_nonzero = s.chi.is_some_and(|c| c != 0);
            let csm_nonzero = s.csm.as_ref().is_some_and(|c| !c.is_zero());
            if chi_nonzero || csm_nonzero {
                return Err(CfunError::EmptyStratumNonzero {
                    name: s.name,
                    codim: s.expected_codim,
                    dim: self.base_dim,
                });
            }
        }
        if self.strata.contains_key(&s.name) {
            return Err(CfunError::DuplicateStratum(s.name));
        }
        self.strata.insert(s.name.clone(), s);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Stratum, CfunError> {
        self.strata
            .get(name)
            .ok_or_else(|| CfunError::UnknownStratum(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.values()
    }

    pub fn is_empty_stratum(&self, name: &str) -> Result<bool, CfunError> {
        Ok(self.get(name)?.expected_codim > self.base_dim)
    }
}

/// Finite integer combination of stratum indicators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstructibleFunction {
    coeffs: BTreeMap<String, i64>,
}

impl ConstructibleFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn indicator(name: &str) -> Self {
        Self::zero().with_term(name, 1)
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (name, c)| acc.with_term(name, c))
    }

    fn with_term(mut self, name: &str, c: i64) -> Self {
        self.add_term(name, c);
        self
    }

    pub fn add_term(&mut self, name: &str, c: i64) {
        let slot = self.coeffs.entry(name.to_string()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(name);
        }
    }

    pub fn coeff(&self, name: &str) -> i64 {
        self.coeffs.get(name).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        ConstructibleFunction {
            coeffs: self.coeffs.iter().map(|(n, c)| (n.clone(), c * k)).collect(),
        }
    }

    /// Value at a point lying exactly on the given closed strata.
    pub fn evaluate_at(&self, containing: &BTreeSet<&str>) -> i64 {
        self.terms()
            .filter(|(n, _)| containing.contains(n))
            .map(|(_, c)| c)
            .sum()
    }
}

impl Add for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn add(self, rhs: &ConstructibleFunction) -> ConstructibleFunction {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, c);
        }
        out
    }
}

impl Sub for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn sub(self, rhs: &ConstructibleFunction) -> ConstructibleFunction {
        self + &-rhs
    }
}

impl Neg for &ConstructibleFunction {
    type Output = ConstructibleFunction;
    fn neg(self) -> ConstructibleFunction {
        self.scale(-1)
    }
}

/// Closed strata `V1 > V2 > ... > Vk` with the Euler characteristic of the
/// fiber over each `Ui = Vi \ V(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationTable {
    chain: Vec<(String, i64)>,
}

impl FibrationTable {
    pub fn new<S: Into<String>>(chain: impl IntoIterator<Item = (S, i64)>) -> Result<Self, CfunError> {
        let chain: Vec<(String, i64)> = chain.into_iter().map(|(s, c)| (s.into(), c)).collect();
        if chain.is_empty() {
            return Err(CfunError::EmptyChain);
        }
        let mut seen = BTreeSet::new();
        for (name, _) in &chain {
            if !seen.insert(name.as_str()) {
                return Err(CfunError::ChainNotDecreasing(name.clone()));
            }
        }
        Ok(FibrationTable { chain })
    }

    pub fn chain(&self) -> &[(String, i64)] {
        &self.chain
    }

    /// Checks that expected codimensions strictly increase along the chain.
    pub fn check_against(&self, registry: &StrataRegistry) -> Result<(), CfunError> {
        let mut last: Option<u32> = None;
        for (name, _) in &self.chain {
            let codim = registry.get(name)?.expected_codim;
            if last.is_some_and(|l| codim <= l) {
                return Err(CfunError::ChainNotDecreasing(name.clone()));
            }
            last = Some(codim);
        }
        Ok(())
    }
}

/// `f_* 1_Z = sum chi(F_i) (1_{V_i} - 1_{W_i})` with `W_i = V_(i+1)`.
pub fn pushforward_stratified(t: &FibrationTable) -> ConstructibleFunction {
    let mut out = ConstructibleFunction::zero();
    for (i, (v, chi)) in t.chain.iter().enumerate() {
        out.add_term(v, *chi);
        if let Some((w, _)) = t.chain.get(i + 1) {
            out.add_term(w, -chi);
        }
    }
    out
}

/// Pushes a function on the upstairs strata down through their tables.
pub fn pushforward_cf(
    f: &ConstructibleFunction,
    tables: &BTreeMap<String, FibrationTable>,
) -> Result<ConstructibleFunction, CfunError> {
    let mut out = ConstructibleFunction::zero();
    for (name, c) in f.terms() {
        let t = tables
            .get(name)
            .ok_or_else(|| CfunError::MissingTable(name.to_string()))?;
        out = &out + &pushforward_stratified(t).scale(c);
    }
    Ok(out)
}

/// How the specialization function treats the mutual intersection of the
/// components of a normal crossing divisor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaRule {
    /// `m` on points of exactly one component of multiplicity `m`, `0`
    /// elsewhere; the intersection gets coefficient `-(m1 + ... + mk)`.
    #[default]
    DefinitionSd,
    /// Coefficient `-1` on the intersection regardless of multiplicities.
    Printed,
}

/// Normal crossing divisor with smooth components meeting in one stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcDescriptor {
    pub components: Vec<(String, u32)>,
    pub intersection: Option<String>,
}

pub fn specialization_function(nc: &NcDescriptor, rule: DeltaRule) -> Result<ConstructibleFunction, CfunError> {
    if nc.components.is_empty() {
        return Err(CfunError::NoComponents);
    }
    let mut out = ConstructibleFunction::zero();
    let mut total = 0i64;
    for (name, m) in &nc.components {
        if *m == 0 {
            return Err(CfunError::ZeroMultiplicity(name.clone()));
        }
        out.add_term(name, i64::from(*m));
        total += i64::from(*m);
    }
    if let Some(x) = &nc.intersection {
        let coeff = match rule {
            DeltaRule::DefinitionSd => -total,
            DeltaRule::Printed => -1,
        };
        out.add_term(x, coeff);
    }
    Ok(out)
}

pub fn euler_cf(f: &ConstructibleFunction, registry: &StrataRegistry) -> Result<i64, CfunError> {
    f.terms().try_fold(0i64, |acc, (name, c)| {
        let s = registry.get(name)?;
        let chi = s.chi.ok_or_else(|| CfunError::ChiUnavailable(name.to_string()))?;
        Ok(acc + c * chi)
    })
}

pub fn csm_cf(f: &ConstructibleFunction, registry: &StrataRegistry) -> Result<Polynomial, CfunError> {
    f.terms().try_fold(registry.ring().zero(), |acc, (name, c)| {
        let s = registry.get(name)?;
        let csm = s
            .csm
            .as_ref()
            .ok_or_else(|| CfunError::CsmUnavailable(name.to_string()))?;
        Ok(&acc + &csm.scale_int(c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{formal_base, LINE_BUNDLE};

    fn cf(terms: &[(&str, i64)]) -> ConstructibleFunction {
        ConstructibleFunction::from_terms(terms.iter().copied())
    }

    #[test]
    fn double_cover_pushforward() {
        let t = FibrationTable::new([("B", 2), ("O", 1)]).unwrap();
        assert_eq!(pushforward_stratified(&t), cf(&[("B", 2), ("O", -1)]));
    }

    #[test]
    fn conic_fibration_pushforward() {
        let t = FibrationTable::new([("B", 2), ("D1", 4), ("S1", 3)]).unwrap();
        assert_eq!(pushforward_stratified(&t), cf(&[("B", 2), ("D1", 2), ("S1", -1)]));
        let t = FibrationTable::new([("Z", 1)]).unwrap();
        assert_eq!(pushforward_stratified(&t), ConstructibleFunction::indicator("Z"));
    }

    #[test]
    fn table_validation() {
        assert_eq!(FibrationTable::new(Vec::<(String, i64)>::new()), Err(CfunError::EmptyChain));
        assert!(matches!(
            FibrationTable::new([("B", 2), ("O", 1), ("B", 1)]),
            Err(CfunError::ChainNotDecreasing(_))
        ));
        let base = formal_base(2).unwrap();
        let mut reg = StrataRegistry::new(base.ring().clone(), 2);
        reg.insert(Stratum::new("B", 0, None, None)).unwrap();
        reg.insert(Stratum::new("O", 1, None, None)).unwrap();
        reg.insert(Stratum::new("D", 1, None, None)).unwrap();
        FibrationTable::new([("B", 2), ("O", 1)]).unwrap().check_against(&reg).unwrap();
        assert!(matches!(
            FibrationTable::new([("B", 2), ("O", 1), ("D", 1)]).unwrap().check_against(&reg),
            Err(CfunError::ChainNotDecreasing(n)) if n == "D"
        ));
        assert!(matches!(
            FibrationTable::new([("B", 2), ("Q", 1)]).unwrap().check_against(&reg),
            Err(CfunError::UnknownStratum(_))
        ));
    }

    #[test]
    fn specialization_variants() {
        let nc = NcDescriptor {
            components: vec![("D1".into(), 1), ("D2".into(), 1)],
            intersection: Some("X".into()),
        };
        let sd = specialization_function(&nc, DeltaRule::DefinitionSd).unwrap();
        assert_eq!(sd, cf(&[("D1", 1), ("D2", 1), ("X", -2)]));
        let printed = specialization_function(&nc, DeltaRule::Printed).unwrap();
        assert_eq!(printed, cf(&[("D1", 1), ("D2", 1), ("X", -1)]));

        let single = NcDescriptor {
            components: vec![("D".into(), 3)],
            intersection: None,
        };
        assert_eq!(specialization_function(&single, DeltaRule::DefinitionSd).unwrap(), cf(&[("D", 3)]));

        let weighted = NcDescriptor {
            components: vec![("A".into(), 2), ("B".into(), 3)],
            intersection: Some("X".into()),
        };
        let f = specialization_function(&weighted, DeltaRule::DefinitionSd).unwrap();
        assert_eq!(f, cf(&[("A", 2), ("B", 3), ("X", -5)]));
        assert_eq!(f.evaluate_at(&["A"].into()), 2);
        assert_eq!(f.evaluate_at(&["B"].into()), 3);
        assert_eq!(f.evaluate_at(&["A", "B", "X"].into()), 0);

        let bad = NcDescriptor {
            components: vec![("A".into(), 0)],
            intersection: None,
        };
        assert!(matches!(
            specialization_function(&bad, DeltaRule::DefinitionSd),
            Err(CfunError::ZeroMultiplicity(_))
        ));
    }

    fn p1_registry() -> StrataRegistry {
        let base = crate::chow::projective_space(1).unwrap();
        let mut reg = StrataRegistry::new(base.ring().clone(), 1);
        for (name, codim, chi) in [("B", 0, 2), ("O", 1, 2), ("D1", 1, 2), ("S1", 2, 0), ("D2", 1, 4), ("S2", 3, 0)] {
            reg.insert(Stratum::new(name, codim, Some(chi), None)).unwrap();
        }
        reg
    }

    #[test]
    fn euler_of_combinations() {
        let reg = p1_registry();
        let f = cf(&[("O", 2), ("D1", 2), ("S1", -1), ("D2", 1), ("S2", -1)]);
        assert_eq!(euler_cf(&f, &reg).unwrap(), 12);
        assert_eq!(euler_cf(&ConstructibleFunction::zero(), &reg).unwrap(), 0);
        assert_eq!(euler_cf(&ConstructibleFunction::indicator("B"), &reg).unwrap(), 2);
        assert_eq!(
            euler_cf(&ConstructibleFunction::indicator("nope"), &reg),
            Err(CfunError::UnknownStratum("nope".into()))
        );
    }

    #[test]
    fn empty_strata_must_vanish() {
        let base = crate::chow::projective_space(1).unwrap();
        let mut reg = StrataRegistry::new(base.ring().clone(), 1);
        assert!(matches!(
            reg.insert(Stratum::new("S", 2, Some(3), None)),
            Err(CfunError::EmptyStratumNonzero { .. })
        ));
        reg.insert(Stratum::new("S", 2, Some(0), Some(base.ring().zero()))).unwrap();
        assert!(reg.is_empty_stratum("S").unwrap());
        assert!(matches!(reg.insert(Stratum::new("S", 2, Some(0), None)), Err(CfunError::DuplicateStratum(_))));
    }

    #[test]
    fn csm_of_combinations() {
        let base = formal_base(1).unwrap();
        let l = base.ring().gen(LINE_BUNDLE).unwrap();
        let mut reg = StrataRegistry::new(base.ring().clone(), 1);
        // codimension-1 strata on a curve: CSM class is the point class.
        reg.insert(Stratum::new("O", 1, None, Some(l.scale_int(2)))).unwrap();
        reg.insert(Stratum::new("D1", 1, None, Some(l.scale_int(2)))).unwrap();
        reg.insert(Stratum::new("D2", 1, None, Some(l.scale_int(4)))).unwrap();
        reg.insert(Stratum::new("S2", 3, None, Some(base.ring().zero()))).unwrap();
        reg.insert(Stratum::new("B", 0, None, None)).unwrap();
        let f = cf(&[("O", 2), ("D1", 2), ("D2", 1)]);
        assert_eq!(csm_cf(&f, &reg).unwrap(), l.scale_int(12));
        assert!(csm_cf(&ConstructibleFunction::indicator("S2"), &reg).unwrap().is_zero());
        assert_eq!(
            csm_cf(&ConstructibleFunction::indicator("B"), &reg),
            Err(CfunError::CsmUnavailable("B".into()))
        );
        assert_eq!(euler_cf(&f, &reg), Err(CfunError::ChiUnavailable("D1".into())));
    }

    #[test]
    fn group_operations() {
        let a = cf(&[("O", 2), ("B", 1)]);
        let b = cf(&[("O", -2), ("S", 4)]);
        assert_eq!(&a + &b, cf(&[("B", 1), ("S", 4)]));
        assert_eq!(&a - &a, ConstructibleFunction::zero());
        assert!((&a - &a).is_zero());
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"B":1,"O":2}"#);
    }
}
