//! Integer bookkeeping for the plane-curve and covering-surface invariants.

use serde::Serialize;

use crate::error::{Error, Result};

/// Genus of a base curve with one degree-12 component carrying `cusps` cusps.
const BASE_GENUS: i64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveNumerics {
    pub degree: i64,
    pub nodes: i64,
    pub cusps: i64,
    pub genus: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceNumerics {
    pub k_squared: i64,
    pub euler: i64,
    pub chi: i64,
    pub genus_r: i64,
}

/// Geometric genus of an irreducible plane curve whose only singularities
/// are ordinary nodes and cusps.
pub fn plane_curve_genus(d: i64, nodes: i64, cusps: i64) -> Result<i64> {
    if d < 1 || nodes < 0 || cusps < 0 {
        return Err(Error::Constraint(format!("degree {d}, nodes {nodes}, cusps {cusps}")));
    }
    let g = (d - 1) * (d - 2) / 2 - nodes - cusps;
    if g < 0 {
        return Err(Error::Constraint(format!("negative genus {g}")));
    }
    Ok(g)
}

pub fn curve_numerics(d: i64, nodes: i64, cusps: i64) -> Result<CurveNumerics> {
    Ok(CurveNumerics {
        degree: d,
        nodes,
        cusps,
        genus: plane_curve_genus(d, nodes, cusps)?,
    })
}

/// Riemann-Hurwitz for a double cover of a genus-`g_base` curve branched at
/// `branch_points` points.
pub fn hurwitz_double_cover_genus(g_base: i64, branch_points: i64) -> Result<i64> {
    if g_base < 0 || branch_points < 0 || branch_points % 2 != 0 {
        return Err(Error::NonIntegral(format!(
            "double cover of genus {g_base} branched at {branch_points} points"
        )));
    }
    Ok((2 * (2 * g_base - 2) + branch_points) / 2 + 1)
}

/// Euler number of the triple-plane covering surface, from the numbers of
/// nodes `n1`, triple points `n2` and cusps of the branch curve.
pub fn covering_euler(n1: i64, n2: i64, cusps: i64) -> Result<i64> {
    if n1 < 0 || n2 < 0 || n1 + 3 * n2 != 21 || cusps != 24 {
        return Err(Error::Constraint(format!(
            "need n1 + 3 n2 = 21 and 24 cusps, got n1={n1}, n2={n2}, c={cusps}"
        )));
    }
    let g = BASE_GENUS;
    let e_b = -2 * (g - 1) - n1 - 2 * n2;
    let e_smooth_part = -2 * (g - 1) - 2 * n1 - 3 * n2 - cusps;
    let e_complement = 3 - e_b;
    Ok(9 * e_complement + 5 * e_smooth_part + 4 * n1 + 6 * n2 + 2 * cusps)
}

/// `chi = (K^2 + e) / 12`; errors unless divisible.
pub fn noether_chi(k_squared: i64, euler: i64) -> Result<i64> {
    let s = k_squared + euler;
    if s % 12 != 0 {
        return Err(Error::NonIntegral(format!("(K^2 + e) / 12 = {s} / 12")));
    }
    Ok(s / 12)
}

/// The full chain: dual-curve numbers to base genus, branched double cover,
/// Euler number and holomorphic Euler characteristic.
pub fn surface_chain(k_squared: i64) -> Result<SurfaceNumerics> {
    let dual = curve_numerics(18, 84, 42)?;
    let genus_r = hurwitz_double_cover_genus(dual.genus, 24)?;
    let euler = covering_euler(21, 0, 24)?;
    let chi = noether_chi(k_squared, euler)?;
    Ok(SurfaceNumerics {
        k_squared,
        euler,
        chi,
        genus_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_values() {
        assert_eq!(plane_curve_genus(18, 84, 42).unwrap(), 10);
        assert_eq!(plane_curve_genus(1, 0, 0).unwrap(), 0);
        assert_eq!(plane_curve_genus(12, 21, 24).unwrap(), 10);
        assert!(plane_curve_genus(3, 2, 0).is_err());
    }

    #[test]
    fn hurwitz_values() {
        assert_eq!(hurwitz_double_cover_genus(10, 24).unwrap(), 31);
        assert_eq!(hurwitz_double_cover_genus(0, 2).unwrap(), 0);
        assert_eq!(hurwitz_double_cover_genus(0, 4).unwrap(), 1);
        assert!(hurwitz_double_cover_genus(0, 3).is_err());
    }

    #[test]
    fn euler_is_split_independent() {
        for n2 in 0..=7 {
            assert_eq!(covering_euler(21 - 3 * n2, n2, 24).unwrap(), 90);
        }
        assert!(covering_euler(20, 0, 24).is_err());
        assert!(covering_euler(21, 0, 23).is_err());
    }

    #[test]
    fn noether_values() {
        assert_eq!(noether_chi(18, 90).unwrap(), 9);
        assert_eq!(noether_chi(9 - 9, 12).unwrap(), 1);
        assert!(noether_chi(1, 1).is_err());
    }

    #[test]
    fn chain() {
        let s = surface_chain(18).unwrap();
        assert_eq!((s.genus_r, s.euler, s.chi), (31, 90, 9));
    }
}
