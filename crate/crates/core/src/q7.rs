//! The Q7 elliptic fibration in `P(O + O + L)` and its weak coupling limit.
//!
//! The left side `phi_* c_SM(1_Y)` is computed upstairs, in the intersection
//! ring of the projective bundle. The right side is computed downstairs: the
//! specialization function on the normal crossing central fiber is pushed to
//! the base through fiber Euler characteristic tables, and its CSM class is
//! read off a registry of base strata. Nothing is shared between the two
//! routes except the base ring.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cclass::{csm_a1_hypersurface, csm_smooth_ci, pushforward_csm_hypersurface, CiSpec, ClassError, HypersurfaceSpec};
use crate::cfun::{
    csm_cf, euler_cf, pushforward_cf, specialization_function, CfunError, ConstructibleFunction, DeltaRule,
    FibrationTable, NcDescriptor, StrataRegistry, Stratum,
};
use crate::chow::{
    formal_base, proj_bundle_ool, projective_space, CenterSpec, ChowError, Integral, Space, HYPERPLANE, LINE_BUNDLE,
    TAUTOLOGICAL,
};
use crate::gring::{Polynomial, RingError};

/// Largest supported base dimension.
pub const MAX_BASE_DIM: u32 = 4;

pub const BASE: &str = "B";
pub const ORIENTIFOLD: &str = "O";
pub const BRANE_1: &str = "D1";
pub const SING_1: &str = "S1";
pub const BRANE_2: &str = "D2";
pub const SING_2: &str = "S2";
/// Components of the resolved central fiber and their intersection.
pub const COMPONENT_1: &str = "D1~";
pub const COMPONENT_2: &str = "D2~";
pub const DOUBLE_COVER: &str = "X";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Q7Error {
    #[error("unsupported base `{0}`")]
    UnsupportedBase(String),
    #[error("degree of L must be at least 1 on P^{0}")]
    LDegree(u32),
    #[error("orientifold Euler characteristics need a numeric base")]
    FormalBase,
    #[error("Euler characteristic of `{0}` is not an integer")]
    NonIntegralEuler(String),
    #[error("conic of rank {0} is not a fiber type")]
    ConicRank(u32),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Cfun(#[from] CfunError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseSpec {
    /// `P^n`; `n = 0` is a point.
    Projective(u32),
    Formal(u32),
}

impl BaseSpec {
    pub fn dim(&self) -> u32 {
        match self {
            BaseSpec::Projective(n) | BaseSpec::Formal(n) => *n,
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, BaseSpec::Formal(_))
    }
}

impl fmt::Display for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSpec::Projective(n) => write!(f, "P{n}"),
            BaseSpec::Formal(d) => write!(f, "formal:{d}"),
        }
    }
}

/// Parses `P0`..`P4` and `formal:1`..`formal:4`.
impl FromStr for BaseSpec {
    type Err = Q7Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Q7Error::UnsupportedBase(s.to_string());
        let spec = if let Some(n) = s.strip_prefix('P') {
            BaseSpec::Projective(n.parse().map_err(|_| bad())?)
        } else if let Some(d) = s.strip_prefix("formal:") {
            BaseSpec::Formal(d.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        match spec {
            BaseSpec::Formal(0) => Err(bad()),
            _ if spec.dim() > MAX_BASE_DIM => Err(bad()),
            _ => Ok(spec),
        }
    }
}

/// Which fiber Euler characteristic tables feed the downstairs pushforward.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum FiberTables {
    #[default]
    Reference,
    /// Replaces the reference table of each named upstairs component.
    Override(BTreeMap<String, FibrationTable>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariantFlags {
    pub delta_rule: DeltaRule,
    pub fiber_tables: FiberTables,
}

impl VariantFlags {
    pub fn with_delta_rule(delta_rule: DeltaRule) -> Self {
        VariantFlags {
            delta_rule,
            ..Default::default()
        }
    }
}

/// Euler characteristic of the fiber of a conic fibration, by the rank of
/// the conic: smooth conic, two lines meeting in a point, double line.
pub fn conic_fiber_chi(rank: u32) -> Result<i64, Q7Error> {
    match rank {
        3 => Ok(2),
        2 => Ok(3),
        1 => Ok(2),
        r => Err(Q7Error::ConicRank(r)),
    }
}

/// Fibration table of a conic fibration from the rank of the conic over
/// each closed stratum.
pub fn conic_table(ranks: &[(&str, u32)]) -> Result<FibrationTable, Q7Error> {
    let chain = ranks
        .iter()
        .map(|&(s, r)| Ok((s, conic_fiber_chi(r)?)))
        .collect::<Result<Vec<_>, Q7Error>>()?;
    Ok(FibrationTable::new(chain)?)
}

/// `m * chi(D) - chi(S cap O)`.
pub fn orientifold_euler(multiplicity: i64, chi_brane: i64, chi_sing_on_o: i64) -> i64 {
    multiplicity * chi_brane - chi_sing_on_o
}

#[derive(Clone, Debug)]
pub struct Q7Model {
    spec: BaseSpec,
    l_degree: Option<u32>,
    base: Space,
    l_class: Polynomial,
    ambient: Space,
    y_class: Polynomial,
    registry: StrataRegistry,
    tables: BTreeMap<String, FibrationTable>,
    nc: NcDescriptor,
}

fn euler_of(base: &Space, name: &str, class: &Polynomial) -> Result<Option<i64>, Q7Error> {
    match base.integrate(class)? {
        Integral::Number(q) => {
            if !q.is_integer() {
                return Err(Q7Error::NonIntegralEuler(name.to_string()));
            }
            let v = i64::try_from(&q.to_integer()).map_err(|_| Q7Error::NonIntegralEuler(name.to_string()))?;
            Ok(Some(v))
        }
        Integral::Formal(_) => Ok(None),
    }
}

/// Builds the fibration over `spec` with `L = O(l_degree)` on projective
/// bases; `l_degree` is ignored on formal bases and on a point.
pub fn build_model(spec: BaseSpec, l_degree: u32) -> Result<Q7Model, Q7Error> {
    if spec.dim() > MAX_BASE_DIM || spec == BaseSpec::Formal(0) {
        return Err(Q7Error::UnsupportedBase(spec.to_string()));
    }
    let (base, l_class, l_degree) = match spec {
        BaseSpec::Projective(0) => {
            let b = projective_space(0)?;
            let l = b.ring().zero();
            (b, l, None)
        }
        BaseSpec::Projective(n) => {
            if l_degree == 0 {
                return Err(Q7Error::LDegree(n));
            }
            let b = projective_space(n.into())?;
            let l = b.ring().gen(HYPERPLANE)?.scale_int(l_degree.into());
            (b, l, Some(l_degree))
        }
        BaseSpec::Formal(d) => {
            let b = formal_base(d.into())?;
            let l = b.ring().gen(LINE_BUNDLE)?;
            (b, l, None)
        }
    };
    let ambient = proj_bundle_ool(&base, &l_class)?;
    let y_class = &ambient.ring().gen(TAUTOLOGICAL)?.scale_int(3) + &ambient.pullback(&l_class)?.scale_int(2);

    // O, D1 reduced, h, theta, beta, iota all have class 2L; D2 = 4L.
    let two_l = l_class.scale_int(2);
    let ci = |classes: Vec<Polynomial>| {
        csm_smooth_ci(&CiSpec {
            ambient: &base,
            classes,
        })
    };
    let d2 = csm_a1_hypersurface(
        &HypersurfaceSpec {
            ambient: &base,
            divisor_class: l_class.scale_int(4),
        },
        &CenterSpec::new(vec![two_l.clone(), two_l.clone(), two_l.clone()]),
    )?;
    let strata: Vec<(&str, u32, Polynomial)> = vec![
        (BASE, 0, base.tangent_class().clone()),
        (ORIENTIFOLD, 1, ci(vec![two_l.clone()])?),
        (BRANE_1, 1, ci(vec![two_l.clone()])?),
        (SING_1, 2, ci(vec![two_l.clone(), two_l.clone()])?),
        (BRANE_2, 1, d2),
        (SING_2, 3, ci(vec![two_l.clone(), two_l.clone(), two_l.clone()])?),
    ];
    let mut registry = StrataRegistry::new(base.ring().clone(), base.dim());
    for (name, codim, csm) in strata {
        let chi = euler_of(&base, name, &csm)?;
        registry.insert(Stratum::new(name, codim, chi, Some(csm)))?;
    }

    let tables = reference_tables()?;
    for t in tables.values() {
        t.check_against(&registry)?;
    }
    let nc = NcDescriptor {
        components: vec![(COMPONENT_1.to_string(), 1), (COMPONENT_2.to_string(), 1)],
        intersection: Some(DOUBLE_COVER.to_string()),
    };
    Ok(Q7Model {
        spec,
        l_degree,
        base,
        l_class,
        ambient,
        y_class,
        registry,
        tables,
        nc,
    })
}

/// Fiber tables of the two central-fiber components and of their
/// intersection, a double cover of `B` branched along `O`.
pub fn reference_tables() -> Result<BTreeMap<String, FibrationTable>, Q7Error> {
    let mut tables = BTreeMap::new();
    // smooth conics, two disjoint lines, two lines meeting in a point
    tables.insert(
        COMPONENT_1.to_string(),
        FibrationTable::new([(BASE, 2), (BRANE_1, 4), (SING_1, 3)])?,
    );
    tables.insert(
        COMPONENT_2.to_string(),
        conic_table(&[(BASE, 3), (BRANE_2, 2), (SING_2, 1)])?,
    );
    tables.insert(
        DOUBLE_COVER.to_string(),
        FibrationTable::new([(BASE, 2), (ORIENTIFOLD, 1)])?,
    );
    Ok(tables)
}

impl Q7Model {
    pub fn spec(&self) -> BaseSpec {
        self.spec
    }

    pub fn l_degree(&self) -> Option<u32> {
        self.l_degree
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn l_class(&self) -> &Polynomial {
        &self.l_class
    }

    pub fn ambient(&self) -> &Space {
        &self.ambient
    }

    pub fn y_class(&self) -> &Polynomial {
        &self.y_class
    }

    pub fn registry(&self) -> &StrataRegistry {
        &self.registry
    }

    pub fn tables(&self) -> &BTreeMap<String, FibrationTable> {
        &self.tables
    }

    pub fn nc(&self) -> &NcDescriptor {
        &self.nc
    }

    fn chi(&self, name: &str) -> Result<i64, Q7Error> {
        self.registry
            .get(name)?
            .chi
            .ok_or(Q7Error::FormalBase)
    }

    fn tables_for(&self, flags: &VariantFlags) -> Result<BTreeMap<String, FibrationTable>, Q7Error> {
        let mut tables = self.tables.clone();
        if let FiberTables::Override(over) = &flags.fiber_tables {
            for (name, t) in over {
                t.check_against(&self.registry)?;
                tables.insert(name.clone(), t.clone());
            }
        }
        Ok(tables)
    }
}

/// `phi_* c_SM(1_Y)` for a general member `Y` of the family.
pub fn lhs_class(model: &Q7Model) -> Result<Polynomial, Q7Error> {
    Ok(pushforward_csm_hypersurface(&HypersurfaceSpec {
        ambient: &model.ambient,
        divisor_class: model.y_class.clone(),
    })?)
}

/// `phi0_* sigma_F 1` as a constructible function on the base strata.
pub fn rhs_constructible(model: &Q7Model, flags: &VariantFlags) -> Result<ConstructibleFunction, Q7Error> {
    let delta = specialization_function(&model.nc, flags.delta_rule)?;
    Ok(pushforward_cf(&delta, &model.tables_for(flags)?)?)
}

pub fn rhs_class(model: &Q7Model, cf: &ConstructibleFunction) -> Result<Polynomial, Q7Error> {
    Ok(csm_cf(cf, &model.registry)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// An Euler characteristic: an integer on concrete bases, the top-degree
/// class on formal ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ChiValue {
    Number(i64),
    Formal(String),
}

impl fmt::Display for ChiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiValue::Number(n) => write!(f, "{n}"),
            ChiValue::Formal(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub base: String,
    pub dim: u32,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantSummary {
    pub delta_rule: DeltaRule,
    pub fiber_tables: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LhsSection {
    pub by_degree: BTreeMap<u32, String>,
    pub chi: ChiValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhsSection {
    pub cf: ConstructibleFunction,
    pub by_degree: BTreeMap<u32, String>,
    pub chi: ChiValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumSummary {
    pub codim: u32,
    pub empty: bool,
    pub chi: ChiValue,
    pub csm: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientifoldSection {
    pub chi_o: BTreeMap<String, i64>,
    #[serde(rename = "chi_O")]
    pub chi_orientifold: i64,
    /// `2 chi(O) + sum chi_o(D_i)`.
    pub total: i64,
    pub matches_rhs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub config: ReportConfig,
    pub variant: VariantSummary,
    pub lhs: LhsSection,
    pub rhs: RhsSection,
    pub strata: BTreeMap<String, StratumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientifold: Option<OrientifoldSection>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// `(degree, lhs, rhs, equal)` for each degree of the base.
    pub fn degree_rows(&self) -> Vec<(u32, &str, &str, bool)> {
        self.lhs
            .by_degree
            .iter()
            .map(|(d, l)| {
                let r = self.rhs.by_degree.get(d).map(String::as_str).unwrap_or("0");
                (*d, l.as_str(), r, l == r)
            })
            .collect()
    }
}

fn by_degree(p: &Polynomial, dim: u32) -> Result<BTreeMap<u32, String>, Q7Error> {
    (0..=dim)
        .map(|d| Ok((d, p.grade_component(d)?.to_string())))
        .collect()
}

fn chi_value(base: &Space, class: &Polynomial) -> Result<ChiValue, Q7Error> {
    Ok(match base.integrate(class)? {
        Integral::Number(q) => ChiValue::Number(
            i64::try_from(&q.to_integer())
                .ok()
                .filter(|_| q.is_integer())
                .ok_or_else(|| Q7Error::NonIntegralEuler("class".into()))?,
        ),
        Integral::Formal(p) => ChiValue::Formal(p.to_string()),
    })
}

/// `chi_o(D1) = 2 chi(D1) - chi(S1)`, `chi_o(D2) = chi(D2) - chi(S2)`.
pub fn orientifold_report(model: &Q7Model) -> Result<OrientifoldSection, Q7Error> {
    if model.spec.is_formal() {
        return Err(Q7Error::FormalBase);
    }
    let chi_o1 = orientifold_euler(2, model.chi(BRANE_1)?, model.chi(SING_1)?);
    let chi_o2 = orientifold_euler(1, model.chi(BRANE_2)?, model.chi(SING_2)?);
    let chi_orientifold = model.chi(ORIENTIFOLD)?;
    let total = 2 * chi_orientifold + chi_o1 + chi_o2;
    let rhs = euler_cf(&rhs_constructible(model, &VariantFlags::default())?, &model.registry)?;
    Ok(OrientifoldSection {
        chi_o: [(BRANE_1.to_string(), chi_o1), (BRANE_2.to_string(), chi_o2)].into(),
        chi_orientifold,
        total,
        matches_rhs: total == rhs,
    })
}

/// Double-cover form of the tadpole relation, with branes pulled back to
/// `X` as if transverse to the branch locus. Informational only.
fn double_cover_note(model: &Q7Model, chi_y: i64) -> Result<String, Q7Error> {
    let two_l = model.l_class.scale_int(2);
    let d2_cap_o = csm_smooth_ci(&CiSpec {
        ambient: &model.base,
        classes: vec![model.l_class.scale_int(4), two_l],
    })?;
    let chi_d2_cap_o = euler_of(&model.base, "D2 cap O", &d2_cap_o)?.unwrap_or(0);
    let d1_bar = 2 * model.chi(BRANE_1)? - model.chi(SING_1)?;
    let d2_bar = 2 * model.chi(BRANE_2)? - chi_d2_cap_o;
    let s2_bar = model.chi(SING_2)?;
    let rhs = 4 * model.chi(ORIENTIFOLD)? + 2 * d1_bar + d2_bar - s2_bar;
    Ok(format!(
        "double-cover form (informational, transverse pullback; the pullback of D2 is tangent to the \
         branch locus so this is not a check): 2chi(Y) = {} vs 4chi(O) + 2chi(D1bar) + chi(D2bar) - chi(S2bar) = {}",
        2 * chi_y,
        rhs
    ))
}

pub fn verify(model: &Q7Model, flags: &VariantFlags) -> Result<VerificationReport, Q7Error> {
    let dim = model.base.dim();
    let lhs = lhs_class(model)?;
    let cf = rhs_constructible(model, flags)?;
    let rhs = rhs_class(model, &cf)?;

    let lhs_chi = chi_value(&model.base, &lhs)?;
    let rhs_chi = if model.spec.is_formal() {
        chi_value(&model.base, &rhs)?
    } else {
        ChiValue::Number(euler_cf(&cf, &model.registry)?)
    };
    let classes_equal = lhs == rhs;
    let verdict = if classes_equal && lhs_chi == rhs_chi {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let mut strata = BTreeMap::new();
    for s in model.registry.iter() {
        let csm = s.csm.clone().unwrap_or_else(|| model.base.ring().zero());
        strata.insert(
            s.name.clone(),
            StratumSummary {
                codim: s.expected_codim,
                empty: s.expected_codim > dim,
                chi: chi_value(&model.base, &csm)?,
                csm: csm.to_string(),
            },
        );
    }

    let mut notes = Vec::new();
    notes.push(match flags.delta_rule {
        DeltaRule::DefinitionSd => {
            "delta rule definition-sd: the intersection X of the two central-fiber components gets coefficient -2".to_string()
        }
        DeltaRule::Printed => {
            "delta rule printed: X gets coefficient -1, which disagrees with the pointwise definition (value 0 on X)"
                .to_string()
        }
    });
    notes.push("fiber table of D2~ ends on S2 (double line over S2)".to_string());
    if let FiberTables::Override(over) = &flags.fiber_tables {
        let names: Vec<&str> = over.keys().map(String::as_str).collect();
        notes.push(format!("fiber tables overridden for: {}", names.join(", ")));
    }
    let empty: Vec<&str> = model
        .registry
        .iter()
        .filter(|s| s.expected_codim > dim)
        .map(|s| s.name.as_str())
        .collect();
    if !empty.is_empty() {
        notes.push(format!("empty strata (codimension > {dim}): {}", empty.join(", ")));
    }
    let orientifold = if model.spec.is_formal() {
        notes.push(format!(
            "formal base: Euler characteristics are degree-{dim} classes in L, c1..c{dim}"
        ));
        None
    } else {
        if let ChiValue::Number(chi_y) = lhs_chi {
            notes.push(double_cover_note(model, chi_y)?);
        }
        Some(orientifold_report(model)?)
    };

    Ok(VerificationReport {
        config: ReportConfig {
            base: model.spec.to_string(),
            dim,
            l_degree: model.l_degree,
        },
        variant: VariantSummary {
            delta_rule: flags.delta_rule,
            fiber_tables: match flags.fiber_tables {
                FiberTables::Reference => "reference".to_string(),
                FiberTables::Override(_) => "override".to_string(),
            },
        },
        lhs: LhsSection {
            by_degree: by_degree(&lhs, dim)?,
            chi: lhs_chi,
        },
        rhs: RhsSection {
            cf,
            by_degree: by_degree(&rhs, dim)?,
            chi: rhs_chi,
        },
        strata,
        orientifold,
        verdict,
        notes,
    })
}
