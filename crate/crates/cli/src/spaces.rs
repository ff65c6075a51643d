//! Named test spaces for the `chi` subcommand.

use anyhow::{anyhow, bail, Context, Result};

use tadpole_core::cclass::{csm_smooth_ci, resolve_a1_hypersurface, CiSpec, HypersurfaceSpec};
use tadpole_core::chow::{blowup_ci, projective_space, CenterSpec, HYPERPLANE};
use tadpole_core::{Polynomial, Space};

pub const NAMES: [&str; 11] = [
    "P<n>",
    "quadric-P3",
    "cubic-surface-P3",
    "quartic-P3",
    "ci22-P3",
    "plane-cubic-P2",
    "blowup-pt-P2",
    "blowup-pt-P3",
    "nodal-quartic-P3",
    "resolved-nodal-quartic-P3",
    "nodes-of-quartic-P3",
];

fn hyperplanes(space: &Space, degrees: &[i64]) -> Result<Vec<Polynomial>> {
    let h = space.ring().gen(HYPERPLANE)?;
    Ok(degrees.iter().map(|&d| h.scale_int(d)).collect())
}

fn integer(space: &Space, class: &Polynomial) -> Result<i64> {
    space
        .integrate(class)?
        .as_integer()
        .ok_or_else(|| anyhow!("Euler characteristic is not an integer"))
}

fn ci(n: i64, degrees: &[i64]) -> Result<i64> {
    let p = projective_space(n)?;
    let classes = hyperplanes(&p, degrees)?;
    integer(&p, &csm_smooth_ci(&CiSpec { ambient: &p, classes })?)
}

fn blowup_point(n: i64) -> Result<i64> {
    let p = projective_space(n)?;
    let center = CenterSpec::new(hyperplanes(&p, &vec![1; n as usize])?);
    blowup_ci(&p, &center)?
        .euler_characteristic()?
        .as_integer()
        .ok_or_else(|| anyhow!("Euler characteristic is not an integer"))
}

/// Quartic surface with 8 nodes at the complete intersection of three quadrics.
fn nodal_quartic(part: &str) -> Result<i64> {
    let p = projective_space(3)?;
    let h = HypersurfaceSpec {
        ambient: &p,
        divisor_class: p.ring().gen(HYPERPLANE)?.scale_int(4),
    };
    let res = resolve_a1_hypersurface(&h, &CenterSpec::new(hyperplanes(&p, &[2, 2, 2])?))?;
    let class = match part {
        "resolved" => res.resolved,
        "nodes" => res.center,
        _ => res.class,
    };
    integer(&p, &class)
}

/// Euler characteristic of a named space.
pub fn chi(name: &str) -> Result<i64> {
    match name {
        "quadric-P3" => ci(3, &[2]),
        "cubic-surface-P3" => ci(3, &[3]),
        "quartic-P3" => ci(3, &[4]),
        "ci22-P3" => ci(3, &[2, 2]),
        "plane-cubic-P2" => ci(2, &[3]),
        "blowup-pt-P2" => blowup_point(2),
        "blowup-pt-P3" => blowup_point(3),
        "nodal-quartic-P3" => nodal_quartic("singular"),
        "resolved-nodal-quartic-P3" => nodal_quartic("resolved"),
        "nodes-of-quartic-P3" => nodal_quartic("nodes"),
        _ => {
            let n: i64 = name
                .strip_prefix('P')
                .and_then(|n| n.parse().ok())
                .with_context(|| format!("unknown space `{name}`; known: {}", NAMES.join(", ")))?;
            if !(0..=8).contains(&n) {
                bail!("projective dimension {n} outside 0..=8");
            }
            projective_space(n)?
                .euler_characteristic()?
                .as_integer()
                .ok_or_else(|| anyhow!("Euler characteristic is not an integer"))
        }
    }
}
