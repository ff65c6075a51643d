//! Modeled varieties and their intersection rings.
//!
//! Four kinds of [`Space`] are supported:
//!
//! * `P^n` with hyperplane class `H`,
//! * a formal base of dimension `d` with generators `L, c1, ..., cd`
//!   (`ci` of degree `i`) and no relations other than truncation,
//! * the projective bundle of lines `P(O + O + L)` over a base, with
//!   hyperplane class `zeta = c1(O(1))` satisfying `zeta^3 = -L*zeta^2`,
//! * the blowup of a base along a smooth complete intersection of divisors
//!   `d1, ..., dr`, with exceptional class `e`.
//!
//! Bundle and blowup rings list their own generator first, followed by the
//! base generators, so pullback is the identity on base generator names.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::gring::{make_ring, Polynomial, Ring, RingError, RingSpec, RewriteRule};

pub const HYPERPLANE: &str = "H";
pub const LINE_BUNDLE: &str = "L";
pub const TAUTOLOGICAL: &str = "zeta";
pub const EXCEPTIONAL: &str = "e";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("projective space dimension must be non-negative, got {0}")]
    NegativeDimension(i64),
    #[error("formal base dimension must be at least 1, got {0}")]
    FormalDimension(i64),
    #[error("class `{0}` is not of pure degree 1")]
    NotDegreeOne(String),
    #[error("center of codimension {codim} does not fit in a base of dimension {dim}")]
    CenterTooLarge { codim: usize, dim: u32 },
    #[error("center needs at least one class")]
    EmptyCenter,
    #[error("space has no base to push forward to")]
    NoBase,
    #[error("iterated blowups are not supported")]
    IteratedBlowup,
    #[error("class does not live in the expected ring")]
    WrongRing,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Degree-1 classes cutting out a smooth complete intersection on a base.
#[derive(Clone, PartialEq, Eq)]
pub struct CenterSpec {
    pub classes: Vec<Polynomial>,
}

impl CenterSpec {
    pub fn new(classes: Vec<Polynomial>) -> Self {
        CenterSpec { classes }
    }

    pub fn codim(&self) -> usize {
        self.classes.len()
    }
}

impl fmt::Debug for CenterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.classes.iter().map(|c| c.to_string())).finish()
    }
}

#[derive(Clone, Debug)]
pub enum SpaceKind {
    ProjectiveSpace { n: u32 },
    FormalBase { dim: u32 },
    ProjBundleOol { base: Arc<Space>, l_class: Polynomial },
    BlowupCi { base: Arc<Space>, center: CenterSpec },
}

#[derive(Clone, Debug)]
pub struct Space {
    ring: Ring,
    dim: u32,
    tangent_class: Polynomial,
    kind: SpaceKind,
}

/// Result of a degree map: a number on concrete spaces, the top-degree class
/// on formal bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Integral {
    Number(BigRational),
    Formal(Polynomial),
}

impl Integral {
    pub fn as_number(&self) -> Option<&BigRational> {
        match self {
            Integral::Number(q) => Some(q),
            Integral::Formal(_) => None,
        }
    }

    /// The value as an integer, if it is numeric and integral.
    pub fn as_integer(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.as_number()
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_i64())
    }
}

impl fmt::Display for Integral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integral::Number(q) => write!(f, "{q}"),
            Integral::Formal(p) => write!(f, "{p}"),
        }
    }
}

fn check_degree_one(ring: &Ring, a: &Polynomial) -> Result<(), ChowError> {
    if a.ring() != ring {
        return Err(ChowError::WrongRing);
    }
    if !a.is_homogeneous(1) {
        return Err(ChowError::NotDegreeOne(a.to_string()));
    }
    Ok(())
}

/// `P^n`, or a point for `n = 0`.
pub fn projective_space(n: i64) -> Result<Space, ChowError> {
    let n = u32::try_from(n).map_err(|_| ChowError::NegativeDimension(n))?;
    let ring = if n == 0 {
        Ring::point()
    } else {
        make_ring(RingSpec::new(n).generator(HYPERPLANE, 1).rule(HYPERPLANE, n + 1, &[]))?
    };
    let tangent_class = if n == 0 {
        ring.one()
    } else {
        (&ring.one() + &ring.gen(HYPERPLANE)?).pow(n + 1)
    };
    Ok(Space {
        ring,
        dim: n,
        tangent_class,
        kind: SpaceKind::ProjectiveSpace { n },
    })
}

/// A base of dimension `d` known only through `L` and its Chern classes.
pub fn formal_base(d: i64) -> Result<Space, ChowError> {
    let dim = u32::try_from(d)
        .ok()
        .filter(|&d| d >= 1)
        .ok_or(ChowError::FormalDimension(d))?;
    let mut spec = RingSpec::new(dim).generator(LINE_BUNDLE, 1);
    for i in 1..=dim {
        spec = spec.generator(&format!("c{i}"), i);
    }
    let ring = make_ring(spec)?;
    let mut tangent_class = ring.one();
    for i in 1..=dim {
        tangent_class = &tangent_class + &ring.gen(&format!("c{i}"))?;
    }
    Ok(Space {
        ring,
        dim,
        tangent_class,
        kind: SpaceKind::FormalBase { dim },
    })
}

/// Ring spec of `base` with `extra` prepended as a degree-1 generator.
fn extended_spec(base: &Ring, extra: &str, truncation: u32, base_dim: u32) -> RingSpec {
    let mut spec = RingSpec::new(truncation).generator(extra, 1);
    for g in base.generators() {
        spec = spec.generator(&g.name, g.degree);
    }
    let base_names: Vec<&str> = base.generators().iter().map(|g| g.name.as_str()).collect();
    if !base_names.is_empty() {
        spec = spec.bound(&base_names, base_dim);
    }
    spec
}

/// Copies the base's rewrite rules (e.g. `H^{n+1} -> 0`) into an extended ring.
fn with_base_rules(mut spec: RingSpec, base: &Space) -> RingSpec {
    if let SpaceKind::ProjectiveSpace { n } = base.kind {
        if n > 0 {
            spec = spec.rule(HYPERPLANE, n + 1, &[]);
        }
    }
    spec
}

/// The bundle of lines `P(O + O + L)` over `base`.
pub fn proj_bundle_ool(base: &Space, l_class: &Polynomial) -> Result<Space, ChowError> {
    if l_class.ring() != &base.ring {
        return Err(ChowError::WrongRing);
    }
    if !l_class.is_homogeneous(1) {
        return Err(ChowError::NotDegreeOne(l_class.to_string()));
    }
    let base_names: Vec<String> = base.ring.generators().iter().map(|g| g.name.clone()).collect();
    let mut spec = extended_spec(&base.ring, TAUTOLOGICAL, base.dim + 2, base.dim);
    // zeta^3 -> -(L-class) * zeta^2, expanded over the base generators.
    spec.rules.push(RewriteRule {
        generator: TAUTOLOGICAL.to_string(),
        exponent: 3,
        replacement: l_class
            .terms()
            .map(|(m, c)| {
                let gen = m.iter().position(|&e| e == 1).expect("degree-1 monomial");
                (-c.clone(), vec![(base_names[gen].clone(), 1), (TAUTOLOGICAL.to_string(), 2)])
            })
            .collect(),
    });
    spec = with_base_rules(spec, base);
    let ring = make_ring(spec)?;

    let base_arc = Arc::new(base.clone());
    let mut space = Space {
        ring: ring.clone(),
        dim: base.dim + 2,
        tangent_class: ring.one(),
        kind: SpaceKind::ProjBundleOol {
            base: base_arc,
            l_class: l_class.clone(),
        },
    };
    let zeta = ring.gen(TAUTOLOGICAL)?;
    let l_up = space.pullback(l_class)?;
    let one = ring.one();
    let relative = (&one + &zeta).pow(2) * (&one + &zeta + &l_up);
    space.tangent_class = space.pullback(&base.tangent_class)? * relative;
    Ok(space)
}

/// Blowup of `base` along the complete intersection cut out by `center`.
pub fn blowup_ci(base: &Space, center: &CenterSpec) -> Result<Space, ChowError> {
    if matches!(base.kind, SpaceKind::BlowupCi { .. }) || base.ring.generator_index(EXCEPTIONAL).is_some() {
        return Err(ChowError::IteratedBlowup);
    }
    if center.classes.is_empty() {
        return Err(ChowError::EmptyCenter);
    }
    for d in &center.classes {
        check_degree_one(&base.ring, d)?;
    }
    if center.codim() > base.dim as usize {
        return Err(ChowError::CenterTooLarge {
            codim: center.codim(),
            dim: base.dim,
        });
    }
    let spec = with_base_rules(extended_spec(&base.ring, EXCEPTIONAL, base.dim, base.dim), base);
    let ring = make_ring(spec)?;
    let mut space = Space {
        ring: ring.clone(),
        dim: base.dim,
        tangent_class: ring.one(),
        kind: SpaceKind::BlowupCi {
            base: Arc::new(base.clone()),
            center: center.clone(),
        },
    };
    let e = ring.gen(EXCEPTIONAL)?;
    let one = ring.one();
    let mut normal = base.ring.one();
    let mut twisted = &one + &e;
    for d in &center.classes {
        normal = &normal * &(&base.ring.one() + d);
        twisted = twisted * (&one + &space.pullback(d)? - &e);
    }
    let segre = space.pullback(&normal.invert_unit()?)?;
    space.tangent_class = space.pullback(&base.tangent_class)? * twisted * segre;
    Ok(space)
}

impl Space {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Total Chern class of the tangent bundle.
    pub fn tangent_class(&self) -> &Polynomial {
        &self.tangent_class
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn base(&self) -> Option<&Space> {
        match &self.kind {
            SpaceKind::ProjBundleOol { base, .. } | SpaceKind::BlowupCi { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Image of the extra generator's position: index 0 in the extended ring.
    fn base_images(&self, base: &Space) -> Result<Vec<Polynomial>, ChowError> {
        base.ring
            .generators()
            .iter()
            .map(|g| self.ring.gen(&g.name).map_err(ChowError::from))
            .collect()
    }

    /// Pulls a class on the base back to this space.
    pub fn pullback(&self, a: &Polynomial) -> Result<Polynomial, ChowError> {
        let base = self.base().ok_or(ChowError::NoBase)?;
        if a.ring() != &base.ring {
            return Err(ChowError::WrongRing);
        }
        Ok(a.map_into(&self.ring, &self.base_images(base)?)?)
    }

    /// Proper pushforward to the base.
    pub fn pushforward_to_base(&self, a: &Polynomial) -> Result<Polynomial, ChowError> {
        if a.ring() != &self.ring {
            return Err(ChowError::WrongRing);
        }
        match &self.kind {
            SpaceKind::ProjBundleOol { base, .. } => {
                // Normal form is a0 + a1*zeta + a2*zeta^2 over the base; the
                // fiberwise degree picks out a2.
                base.ring
                    .from_terms(
                        a.terms()
                            .filter(|(m, _)| m[0] == 2)
                            .map(|(m, c)| (m[1..].to_vec(), c.clone())),
                    )
                    .map_err(ChowError::from)
            }
            SpaceKind::BlowupCi { base, center } => {
                let pushes = exceptional_pushforwards(base, center)?;
                let mut acc = base.ring.zero();
                for (m, c) in a.terms() {
                    let k = m[0] as usize;
                    let push = &pushes[k];
                    if push.is_zero() {
                        continue;
                    }
                    let alpha = base.ring.from_terms([(m[1..].to_vec(), c.clone())])?;
                    acc = &acc + &(&alpha * push);
                }
                Ok(acc)
            }
            _ => Err(ChowError::NoBase),
        }
    }

    /// Degree map. Concrete spaces give a number; formal bases (and spaces
    /// built over them) give the top-degree class of the formal base.
    pub fn integrate(&self, a: &Polynomial) -> Result<Integral, ChowError> {
        if a.ring() != &self.ring {
            return Err(ChowError::WrongRing);
        }
        match &self.kind {
            SpaceKind::ProjectiveSpace { n } => {
                let mut top = vec![0; self.ring.generators().len()];
                if *n > 0 {
                    top[0] = *n;
                }
                Ok(Integral::Number(a.coeff(&top)))
            }
            SpaceKind::FormalBase { dim } => Ok(Integral::Formal(a.grade_component(*dim)?)),
            SpaceKind::ProjBundleOol { base, .. } | SpaceKind::BlowupCi { base, .. } => {
                base.integrate(&self.pushforward_to_base(a)?)
            }
        }
    }

    /// Euler characteristic: the degree of the total Chern class.
    pub fn euler_characteristic(&self) -> Result<Integral, ChowError> {
        self.integrate(&self.tangent_class)
    }
}

/// `pi_*(e^k)` for `k = 0..=dim`: zero for `1 <= k < r`, and
/// `(-1)^(k-1) * (d1 ... dr) * s_(k-r)` for `k >= r`, where `s` is the
/// inverse of `(1+d1)...(1+dr)`.
fn exceptional_pushforwards(base: &Space, center: &CenterSpec) -> Result<Vec<Polynomial>, ChowError> {
    let ring = &base.ring;
    let r = center.codim();
    let mut product = ring.one();
    let mut normal = ring.one();
    for d in &center.classes {
        product = &product * d;
        normal = &normal * &(&ring.one() + d);
    }
    let segre = normal.invert_unit()?;
    let mut out = vec![ring.one()];
    for k in 1..=base.dim as usize {
        if k < r {
            out.push(ring.zero());
            continue;
        }
        let sign = if (k - 1) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let s = segre.grade_component((k - r) as u32)?;
        out.push((&product * &s).scale(&sign));
    }
    Ok(out)
}
