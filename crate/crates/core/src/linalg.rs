//! Small dense complex linear algebra used by the numerical kernels.

use num_complex::Complex64 as C64;

pub type Mat3 = [[C64; 3]; 3];

/// LU factorization with partial pivoting, in place. Returns the
/// determinant sign-adjusted product of pivots and the permutation.
fn lu_in_place(a: &mut [Vec<C64>]) -> (C64, Vec<usize>) {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k][k].norm();
        for (i, row) in a.iter().enumerate().skip(k + 1) {
            let v = row[k].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return (C64::new(0.0, 0.0), perm);
        }
        if piv != k {
            a.swap(piv, k);
            perm.swap(piv, k);
            det = -det;
        }
        let pivot = a[k][k];
        det *= pivot;
        for i in k + 1..n {
            let factor = a[i][k] / pivot;
            a[i][k] = factor;
            for j in k + 1..n {
                let t = a[k][j];
                a[i][j] -= factor * t;
            }
        }
    }
    (det, perm)
}

pub(crate) fn det(mut a: Vec<Vec<C64>>) -> C64 {
    lu_in_place(&mut a).0
}

/// Solve `a x = b`; `None` when the matrix is numerically singular.
pub(crate) fn solve(mut a: Vec<Vec<C64>>, b: &[C64]) -> Option<Vec<C64>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let (d, perm) = lu_in_place(&mut a);
    if d.norm() == 0.0 || scale == 0.0 {
        return None;
    }
    if (0..n).any(|k| a[k][k].norm() <= 1e-15 * scale) {
        return None;
    }
    let mut x: Vec<C64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let t = a[i][j] * x[j];
            x[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let t = a[i][j] * x[j];
            x[i] -= t;
        }
        x[i] /= a[i][i];
    }
    Some(x)
}

pub(crate) fn solve2(m: [[C64; 2]; 2], b: [C64; 2]) -> Option<[C64; 2]> {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 || d.norm() <= 1e-14 * scale * scale {
        return None;
    }
    Some([
        (b[0] * m[1][1] - m[0][1] * b[1]) / d,
        (m[0][0] * b[1] - m[1][0] * b[0]) / d,
    ])
}

/// Minimum-norm damped least-squares step for a possibly rank-deficient
/// 2x2 system: `(J^H J + lambda I)^{-1} J^H b`.
pub(crate) fn damped_solve2(m: [[C64; 2]; 2], b: [C64; 2]) -> [C64; 2] {
    let (s1, s2) = singular_values2(m);
    if s2 > 1e-8 * s1 {
        if let Some(x) = solve2(m, b) {
            return x;
        }
    }
    let lambda = (1e-8 * s1).powi(2).max(1e-300);
    let mut n = [[C64::new(0.0, 0.0); 2]; 2];
    let mut r = [C64::new(0.0, 0.0); 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                n[i][j] += m[k][i].conj() * m[k][j];
            }
        }
        n[i][i] += C64::new(lambda, 0.0);
        for k in 0..2 {
            r[i] += m[k][i].conj() * b[k];
        }
    }
    let d = n[0][0] * n[1][1] - n[0][1] * n[1][0];
    if d.norm() == 0.0 {
        return [C64::new(0.0, 0.0); 2];
    }
    [
        (r[0] * n[1][1] - n[0][1] * r[1]) / d,
        (n[0][0] * r[1] - n[1][0] * r[0]) / d,
    ]
}

/// Singular values (descending) of a complex 2x2 matrix.
pub(crate) fn singular_values2(m: [[C64; 2]; 2]) -> (f64, f64) {
    let fro2 = m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>();
    let d = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    // s1^2 + s2^2 = fro2, s1 s2 = |det|
    let disc = (fro2 * fro2 - 4.0 * d * d).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    let s2 = if s1 > 0.0 { d / s1 } else { 0.0 };
    (s1, s2)
}

pub(crate) fn det3(m: &Mat3) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn adjugate3(m: &Mat3) -> Mat3 {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

pub(crate) fn mat_vec3(m: &Mat3, v: &[C64; 3]) -> [C64; 3] {
    let mut out = [C64::new(0.0, 0.0); 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += m[i][j] * v[j];
        }
    }
    out
}

fn dot(u: &[C64; 3], v: &[C64; 3]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn vnorm(u: &[C64; 3]) -> f64 {
    u.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormalize the columns given as rows of `cols` (modified Gram-Schmidt).
pub(crate) fn gram_schmidt(mut cols: [[C64; 3]; 3]) -> Option<[[C64; 3]; 3]> {
    for k in 0..3 {
        for j in 0..k {
            let p = dot(&cols[j], &cols[k]);
            let cj = cols[j];
            for i in 0..3 {
                cols[k][i] -= p * cj[i];
            }
        }
        let n = vnorm(&cols[k]);
        if n < 1e-12 {
            return None;
        }
        for v in cols[k].iter_mut() {
            *v /= n;
        }
    }
    Some(cols)
}

/// A unitary matrix whose last column is `p / |p|`.
pub(crate) fn unitary_with_last_column(p: &[C64; 3]) -> Mat3 {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let basis = [[one, zero, zero], [zero, one, zero], [zero, zero, one]];
    // pick the two standard vectors least aligned with p
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| p[a].norm().total_cmp(&p[b].norm()));
    let cols = gram_schmidt([*p, basis[order[0]], basis[order[1]]]).expect("p is nonzero");
    let mut m = [[zero; 3]; 3];
    for i in 0..3 {
        m[i][0] = cols[1][i];
        m[i][1] = cols[2][i];
        m[i][2] = cols[0][i];
    }
    m
}

/// Evaluate `x` on the unit circle sample points and return polynomial
/// coefficients by an inverse DFT of length `n`.
pub(crate) fn inverse_dft(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                acc += v * C64::from_polar(1.0, ang);
            }
            acc / n as f64
        })
        .collect()
}

pub(crate) fn unit_root(j: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn det_and_solve_agree() {
        let a = vec![
            vec![c(2.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)],
            vec![c(0.0, 2.0), c(-1.0, 0.0), c(4.0, 0.0)],
        ];
        let m: Mat3 = [
            [a[0][0], a[0][1], a[0][2]],
            [a[1][0], a[1][1], a[1][2]],
            [a[2][0], a[2][1], a[2][2]],
        ];
        assert!((det(a.clone()) - det3(&m)).norm() < 1e-12);
        let b = [c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
        let x = solve(a, &b).unwrap();
        let back = mat_vec3(&m, &[x[0], x[1], x[2]]);
        for i in 0..3 {
            assert!((back[i] - b[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_completion() {
        let p = [c(0.3, 0.1), c(-1.0, 0.0), c(0.2, 0.5)];
        let u = unitary_with_last_column(&p);
        let n = vnorm(&p);
        for i in 0..3 {
            assert!((u[i][2] - p[i] / n).norm() < 1e-14);
        }
        for a in 0..3 {
            for b in 0..3 {
                let ip: C64 = (0..3).map(|i| u[i][a].conj() * u[i][b]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_values_of_rank_one() {
        let m = [[c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]];
        let (s1, s2) = singular_values2(m);
        assert!((s1 - 5.0).abs() < 1e-12);
        assert!(s2.abs() < 1e-12);
    }
}
