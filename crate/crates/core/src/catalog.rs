//! Named cubics, the standard labeling of the Hesse configuration, and the
//! one-parameter families used by the local experiments.

use num_complex::Complex64 as C64;

use crate::forms::{CubicForm, ProjPoint};
use crate::track::{Loop, Segment};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Primitive cube root of unity `e^{2 pi i / 3}`.
pub fn omega() -> C64 {
    C64::new(-0.5, 3f64.sqrt() / 2.0)
}

/// `z1^3 + z2^3 + z3^3`
pub fn fermat() -> CubicForm {
    CubicForm::from_real_terms(&[(3, 0, 1.0), (0, 3, 1.0), (0, 0, 1.0)])
}

/// `z1 z2 z3`: three lines in general position.
pub fn triangle() -> CubicForm {
    CubicForm::from_real_terms(&[(1, 1, 1.0)])
}

/// `z1 z2 z3 + z1^3 + z2^3`: irreducible with a node at `(0,0,1)`.
pub fn nodal() -> CubicForm {
    CubicForm::from_real_terms(&[(1, 1, 1.0), (3, 0, 1.0), (0, 3, 1.0)])
}

/// `z1^3 + z2^2 z3`: cusp at `(0,0,1)`.
pub fn cuspidal() -> CubicForm {
    CubicForm::from_real_terms(&[(3, 0, 1.0), (0, 2, 1.0)])
}

/// `z1 z2 z3 + z1^3 = z1 (z2 z3 + z1^2)`: conic plus a transversal line.
pub fn conic_line() -> CubicForm {
    CubicForm::from_real_terms(&[(1, 1, 1.0), (3, 0, 1.0)])
}

/// `z1 (z2^2 - z1 z3)`: conic plus a tangent line.
pub fn conic_tangent() -> CubicForm {
    CubicForm::from_real_terms(&[(1, 2, 1.0), (2, 0, -1.0)])
}

/// `z1^3 + z2^3`: three concurrent lines.
pub fn concurrent() -> CubicForm {
    CubicForm::from_real_terms(&[(3, 0, 1.0), (0, 3, 1.0)])
}

/// `z1^2 z2`: a double line plus a line.
pub fn double_line() -> CubicForm {
    CubicForm::from_real_terms(&[(2, 1, 1.0)])
}

/// `z1^3`
pub fn triple_line() -> CubicForm {
    CubicForm::from_real_terms(&[(3, 0, 1.0)])
}

pub const NAMES: [&str; 9] = [
    "fermat",
    "triangle",
    "nodal",
    "cuspidal",
    "conic_line",
    "conic_tangent",
    "concurrent",
    "double_line",
    "triple_line",
];

pub fn by_name(name: &str) -> Option<CubicForm> {
    Some(match name {
        "fermat" => fermat(),
        "triangle" => triangle(),
        "nodal" => nodal(),
        "cuspidal" => cuspidal(),
        "conic_line" => conic_line(),
        "conic_tangent" => conic_tangent(),
        "concurrent" => concurrent(),
        "double_line" => double_line(),
        "triple_line" => triple_line(),
        _ => return None,
    })
}

/// `z1 z2 z3 + a z1^3 + b z2^3 + c z3^3`.
pub fn pi1_member(a: C64, b: C64, cc: C64) -> CubicForm {
    CubicForm::from_terms(&[(1, 1, c(1.0)), (3, 0, a), (0, 3, b), (0, 0, cc)])
}

/// `z1^3 + z2^2 z3 + tau z3^3`; smooth for `tau != 0`, cuspidal at `tau = 0`.
pub fn cusp_family(tau: C64) -> CubicForm {
    CubicForm::from_terms(&[(3, 0, c(1.0)), (0, 2, c(1.0)), (0, 0, tau)])
}

/// Loop `c_{axis+1}` in the family `z1 z2 z3 + a z1^3 + b z2^3 + c z3^3`:
/// from `(delta, delta, delta)` the coordinate number `axis` runs once around
/// the circle of radius `delta` about zero.
pub fn pi1_loop(axis: usize, delta: f64) -> Loop {
    assert!(axis < 3, "axis is 0, 1 or 2");
    let d = c(delta);
    let mut center = [d, d, d];
    center[axis] = c(0.0);
    let mut dir = [c(0.0); 3];
    dir[axis] = c(1.0);
    let monomial = |v: [C64; 3]| CubicForm::from_terms(&[(3, 0, v[0]), (0, 3, v[1]), (0, 0, v[2])]);
    Loop::new(
        pi1_member(d, d, d),
        vec![Segment::Arc {
            center: pi1_member(center[0], center[1], center[2]),
            direction: monomial(dir),
            radius: delta,
            turn_start: 0.0,
            turn_end: 1.0,
        }],
    )
    .expect("closed by construction")
}

/// The circle `tau = delta e^{2 pi i t}` in [`cusp_family`].
pub fn cusp_loop(delta: f64) -> Loop {
    Loop::new(
        cusp_family(c(delta)),
        vec![Segment::Arc {
            center: cuspidal(),
            direction: CubicForm::from_real_terms(&[(0, 0, 1.0)]),
            radius: delta,
            turn_start: 0.0,
            turn_end: 1.0,
        }],
    )
    .expect("closed by construction")
}

/// The nine common inflection points of the Hesse pencil, in label order 1..9.
pub fn q_table() -> [ProjPoint; 9] {
    let w = omega();
    let w2 = w * w;
    let z = c(0.0);
    let o = c(1.0);
    let pts = [
        [z, o, -o],
        [o, z, -o],
        [o, -o, z],
        [z, o, -w],
        [o, z, -w2],
        [o, -w, z],
        [z, o, -w2],
        [o, z, -w],
        [o, -w2, z],
    ];
    pts.map(|q| ProjPoint::new(q).expect("nonzero"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm;

    #[test]
    fn q_points_are_base_points_of_the_hesse_pencil() {
        for q in q_table() {
            assert!(fermat().evaluate(&q).norm() < 1e-14);
            assert!(triangle().evaluate(&q).norm() < 1e-14);
        }
    }

    /// The linear maps `diag(1, w, w^2)`-type symmetries act on the q-labels as
    /// elements of the Hesse group.
    #[test]
    fn projective_symmetries_permute_labels_inside_hes() {
        let w = omega();
        let z = c(0.0);
        let o = c(1.0);
        let maps = [
            [[o, z, z], [z, w, z], [z, z, w * w]],
            [[z, o, z], [z, z, o], [o, z, z]],
            [[o, z, z], [z, z, o], [z, o, z]],
        ];
        let q = q_table();
        let hes = perm::hes();
        for m in maps {
            let mut img = [0usize; 9];
            for (k, p) in q.iter().enumerate() {
                let mp = p.transform(&m);
                img[k] = 1 + q.iter().position(|r| r.distance(&mp) < 1e-12).expect("symmetry preserves q");
            }
            let g = perm::Perm::from_images(img).unwrap();
            assert!(hes.contains(&g), "{g}");
        }
    }

    #[test]
    fn names_resolve() {
        for n in NAMES {
            assert!(by_name(n).is_some());
        }
        assert!(by_name("quartic").is_none());
    }
}
