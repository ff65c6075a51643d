//! Characteristic classes of hypersurfaces and complete intersections,
//! pushed into the ambient ring.

use thiserror::Error;

use crate::chow::{blowup_ci, CenterSpec, ChowError, Space, SpaceKind, EXCEPTIONAL};
use crate::gring::{Polynomial, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("divisor class `{0}` is not of pure degree 1")]
    NotDegreeOne(String),
    #[error("ambient space is not a projective bundle")]
    NotABundle,
    #[error("class does not live in the ambient ring")]
    WrongRing,
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A hypersurface given by its divisor class.
#[derive(Clone, Debug)]
pub struct HypersurfaceSpec<'a> {
    pub ambient: &'a Space,
    pub divisor_class: Polynomial,
}

/// A complete intersection of hypersurfaces with the given degree-1 classes.
#[derive(Clone, Debug)]
pub struct CiSpec<'a> {
    pub ambient: &'a Space,
    pub classes: Vec<Polynomial>,
}

fn check_class(ambient: &Space, class: &Polynomial) -> Result<(), ClassError> {
    if class.ring() != ambient.ring() {
        return Err(ClassError::WrongRing);
    }
    if !class.is_homogeneous(1) {
        return Err(ClassError::NotDegreeOne(class.to_string()));
    }
    Ok(())
}

/// `c(T)` times `v / (1 + v)`: the pushforward of `c(TZ)` for a smooth
/// divisor `Z` of class `v`.
fn adjunction_factor(v: &Polynomial) -> Result<Polynomial, ClassError> {
    let one = v.ring().one();
    Ok(v * &(&one + v).invert_unit()?)
}

/// CSM class of a smooth complete intersection, as a class on the ambient.
/// Genericity (hence smoothness) is assumed; more equations than the
/// ambient dimension give the empty set and the zero class.
pub fn csm_smooth_ci(ci: &CiSpec<'_>) -> Result<Polynomial, ClassError> {
    let ring = ci.ambient.ring();
    if ci.classes.len() > ci.ambient.dim() as usize {
        return Ok(ring.zero());
    }
    let mut acc = ci.ambient.tangent_class().clone();
    for v in &ci.classes {
        check_class(ci.ambient, v)?;
        acc = &acc * &adjunction_factor(v)?;
    }
    Ok(acc)
}

/// `c(T_ambient) * D / (1 + D)`, the Chern-Fulton class of a hypersurface.
pub fn fulton_hypersurface_class(h: &HypersurfaceSpec<'_>) -> Result<Polynomial, ClassError> {
    check_class(h.ambient, &h.divisor_class)?;
    Ok(h.ambient.tangent_class() * &adjunction_factor(&h.divisor_class)?)
}

/// Intermediate data of [`csm_a1_hypersurface`].
#[derive(Clone, Debug)]
pub struct A1Resolution {
    /// Pushforward of `c(T)` of the proper transform.
    pub resolved: Polynomial,
    /// CSM class of the singular locus.
    pub center: Polynomial,
    /// `resolved - center`, the CSM class of the hypersurface.
    pub class: Polynomial,
}

/// CSM class of a hypersurface with transversal A1 singularities along a
/// smooth complete intersection `Z`.
///
/// Blowing up `Z`, the proper transform `D' = D - 2E` is smooth and meets each
/// exceptional fiber in a smooth conic, so `p_* 1_D' = 1_D + 1_Z`. The
/// multiplicity hypothesis is not checked.
pub fn resolve_a1_hypersurface(
    h: &HypersurfaceSpec<'_>,
    center: &CenterSpec,
) -> Result<A1Resolution, ClassError> {
    let base = h.ambient;
    check_class(base, &h.divisor_class)?;
    for c in &center.classes {
        check_class(base, c)?;
    }
    if center.codim() > base.dim() as usize || center.classes.is_empty() {
        // Empty singular locus: the hypersurface is smooth.
        let class = fulton_hypersurface_class(h)?;
        return Ok(A1Resolution {
            resolved: class.clone(),
            center: base.ring().zero(),
            class,
        });
    }
    let blown = blowup_ci(base, center)?;
    let e = blown.ring().gen(EXCEPTIONAL)?;
    let proper = &blown.pullback(&h.divisor_class)? - &e.scale_int(2);
    let upstairs = blown.tangent_class() * &adjunction_factor(&proper)?;
    let resolved = blown.pushforward_to_base(&upstairs)?;
    let center_class = csm_smooth_ci(&CiSpec {
        ambient: base,
        classes: center.classes.clone(),
    })?;
    let class = &resolved - &center_class;
    Ok(A1Resolution {
        resolved,
        center: center_class,
        class,
    })
}

pub fn csm_a1_hypersurface(h: &HypersurfaceSpec<'_>, center: &CenterSpec) -> Result<Polynomial, ClassError> {
    Ok(resolve_a1_hypersurface(h, center)?.class)
}

/// `phi_* c_SM(1_Y)` on the base, for a smooth hypersurface `Y` in a
/// projective bundle.
pub fn pushforward_csm_hypersurface(h: &HypersurfaceSpec<'_>) -> Result<Polynomial, ClassError> {
    if !matches!(h.ambient.kind(), SpaceKind::ProjBundleOol { .. }) {
        return Err(ClassError::NotABundle);
    }
    let class = fulton_hypersurface_class(h)?;
    Ok(h.ambient.pushforward_to_base(&class)?)
}
