//! Ternary cubic forms, points of the projective plane, pencils and nets.
//!
//! A cubic is stored as its ten coefficients `a[i,j]` of the monomials
//! `z1^i z2^j z3^(3-i-j)`, in lexicographic order of `(i, j)`:
//! `(0,0), (0,1), (0,2), (0,3), (1,0), (1,1), (1,2), (2,0), (2,1), (3,0)`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Exponent pairs `(i, j)` in storage order.
pub const MONOMIALS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (1, 1),
    (1, 2),
    (2, 0),
    (2, 1),
    (3, 0),
];

/// Storage index of `(i, j)` in a form of degree `d`.
#[inline]
fn index(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i + j <= d);
    i * (d + 1) - i * i.saturating_sub(1) / 2 + j
}

pub fn monomial_index(i: usize, j: usize) -> usize {
    index(3, i, j)
}

/// Dense ternary form of arbitrary degree, used for exact expansion of
/// products (Hessians, substitutions).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct TernaryPoly {
    degree: usize,
    coeffs: Vec<C64>,
}

impl TernaryPoly {
    pub(crate) fn zero(degree: usize) -> Self {
        TernaryPoly {
            degree,
            coeffs: vec![ZERO; (degree + 1) * (degree + 2) / 2],
        }
    }

    pub(crate) fn linear(c: [C64; 3]) -> Self {
        let mut p = Self::zero(1);
        p.coeffs[index(1, 1, 0)] = c[0];
        p.coeffs[index(1, 0, 1)] = c[1];
        p.coeffs[index(1, 0, 0)] = c[2];
        p
    }

    fn one() -> Self {
        TernaryPoly {
            degree: 0,
            coeffs: vec![C64::new(1.0, 0.0)],
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let d = self.degree;
        (0..=d).flat_map(move |i| (0..=d - i).map(move |j| (i, j, self.coeffs[index(d, i, j)])))
    }

    fn mul(&self, other: &Self) -> Self {
        let d = self.degree + other.degree;
        let mut out = Self::zero(d);
        for (i1, j1, a) in self.terms() {
            if a == ZERO {
                continue;
            }
            for (i2, j2, b) in other.terms() {
                out.coeffs[index(d, i1 + i2, j1 + j2)] += a * b;
            }
        }
        out
    }

    fn add_assign(&mut self, other: &Self, scale: C64) {
        assert_eq!(self.degree, other.degree);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += scale * b;
        }
    }

    /// Partial derivative with respect to `z_{var+1}`.
    fn partial(&self, var: usize) -> Self {
        let d = self.degree;
        if d == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(d - 1);
        for (i, j, a) in self.terms() {
            let k = d - i - j;
            match var {
                0 if i > 0 => out.coeffs[index(d - 1, i - 1, j)] += a * i as f64,
                1 if j > 0 => out.coeffs[index(d - 1, i, j - 1)] += a * j as f64,
                2 if k > 0 => out.coeffs[index(d - 1, i, j)] += a * k as f64,
                _ => {}
            }
        }
        out
    }

    fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

/// A ternary cubic form `F(z) = sum a[i,j] z1^i z2^j z3^(3-i-j)`.
#[derive(Clone, Copy, PartialEq)]
pub struct CubicForm {
    coeffs: [C64; 10],
}

impl fmt::Debug for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "CubicForm(")?;
        for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
            let c = self.coeffs[k];
            if c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)·z1^{}z2^{}z3^{}", c.re, c.im, i, j, 3 - i - j)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl CubicForm {
    /// Build a cubic from its coefficients; rejects the zero form.
    pub fn new(coeffs: [C64; 10]) -> Result<Self> {
        let f = CubicForm { coeffs };
        if f.is_zero() {
            return Err(Error::Invalid("all cubic coefficients are zero".into()));
        }
        Ok(f)
    }

    /// Build without the nonzero check. Intermediate results such as the
    /// Hessian of a triple line can be the zero form.
    pub fn from_raw(coeffs: [C64; 10]) -> Self {
        CubicForm { coeffs }
    }

    /// Sum of `c * z1^i z2^j z3^(3-i-j)` terms. Panics on exponents with `i + j > 3`.
    pub fn from_terms(terms: &[(usize, usize, C64)]) -> Self {
        let mut coeffs = [ZERO; 10];
        for &(i, j, c) in terms {
            assert!(i + j <= 3, "exponent pair ({i},{j}) out of range");
            coeffs[index(3, i, j)] += c;
        }
        CubicForm { coeffs }
    }

    /// Same as [`CubicForm::from_terms`] with real coefficients.
    pub fn from_real_terms(terms: &[(usize, usize, f64)]) -> Self {
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, C64::new(c, 0.0))).collect();
        Self::from_terms(&t)
    }

    pub fn coeffs(&self) -> &[C64; 10] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> C64 {
        self.coeffs[index(3, i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Divide by the coefficient of largest modulus (the first one, when
    /// several agree to within rounding), which then equals 1 exactly.
    pub fn normalized(&self) -> Self {
        let m = self.max_modulus();
        if m == 0.0 {
            return *self;
        }
        let k = self
            .coeffs
            .iter()
            .position(|c| c.norm() >= m * (1.0 - 1e-12))
            .unwrap();
        let pivot = self.coeffs[k];
        let mut out = self.coeffs.map(|c| c / pivot);
        out[k] = C64::new(1.0, 0.0);
        CubicForm { coeffs: out }
    }

    pub fn scale(&self, s: C64) -> Self {
        CubicForm {
            coeffs: self.coeffs.map(|c| c * s),
        }
    }

    /// `sum w_k f_k`, possibly the zero form.
    pub fn combination(terms: &[(C64, &CubicForm)]) -> Self {
        let mut coeffs = [ZERO; 10];
        for (w, f) in terms {
            for (a, b) in coeffs.iter_mut().zip(&f.coeffs) {
                *a += w * b;
            }
        }
        CubicForm { coeffs }
    }

    pub fn add(&self, other: &CubicForm) -> Self {
        Self::combination(&[(C64::new(1.0, 0.0), self), (C64::new(1.0, 0.0), other)])
    }

    pub fn sub(&self, other: &CubicForm) -> Self {
        Self::combination(&[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)])
    }

    /// Chordal distance between the lines spanned by the two coefficient
    /// vectors in C^10 (zero iff projectively equal).
    pub fn distance(&self, other: &CubicForm) -> f64 {
        chordal(&self.coeffs, &other.coeffs)
    }

    pub(crate) fn to_poly(self) -> TernaryPoly {
        TernaryPoly {
            degree: 3,
            coeffs: self.coeffs.to_vec(),
        }
    }

    pub(crate) fn from_poly(p: &TernaryPoly) -> Self {
        assert_eq!(p.degree, 3);
        let mut coeffs = [ZERO; 10];
        coeffs.copy_from_slice(&p.coeffs);
        CubicForm { coeffs }
    }

    /// Value of the form at a point given by raw homogeneous coordinates.
    pub fn eval(&self, z: &[C64; 3]) -> C64 {
        let pw = powers(z);
        MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .map(|(&(i, j), c)| c * pw[0][i] * pw[1][j] * pw[2][3 - i - j])
            .sum()
    }

    pub fn evaluate(&self, p: &ProjPoint) -> C64 {
        self.eval(&p.z)
    }

    /// `(dF/dz1, dF/dz2, dF/dz3)` at raw coordinates.
    pub fn grad(&self, z: &[C64; 3]) -> [C64; 3] {
        let pw = powers(z);
        let mut g = [ZERO; 3];
        for (&(i, j), c) in MONOMIALS.iter().zip(&self.coeffs) {
            let k = 3 - i - j;
            if i > 0 {
                g[0] += c * (i as f64) * pw[0][i - 1] * pw[1][j] * pw[2][k];
            }
            if j > 0 {
                g[1] += c * (j as f64) * pw[0][i] * pw[1][j - 1] * pw[2][k];
            }
            if k > 0 {
                g[2] += c * (k as f64) * pw[0][i] * pw[1][j] * pw[2][k - 1];
            }
        }
        g
    }

    pub fn gradient(&self, p: &ProjPoint) -> [C64; 3] {
        self.grad(&p.z)
    }

    /// Matrix of second partials at raw coordinates.
    pub fn second_partials(&self, z: &[C64; 3]) -> Mat3 {
        let mut m = [[ZERO; 3]; 3];
        for (&(i, j), c) in MONOMIALS.iter().zip(&self.coeffs) {
            if *c == ZERO {
                continue;
            }
            let e = [i, j, 3 - i - j];
            for a in 0..3 {
                for b in a..3 {
                    let mut ee = e;
                    let mut coef = *c;
                    coef *= ee[a] as f64;
                    if ee[a] == 0 {
                        continue;
                    }
                    ee[a] -= 1;
                    coef *= ee[b] as f64;
                    if ee[b] == 0 {
                        continue;
                    }
                    ee[b] -= 1;
                    let v = coef * ipow(z[0], ee[0]) * ipow(z[1], ee[1]) * ipow(z[2], ee[2]);
                    m[a][b] += v;
                    if a != b {
                        m[b][a] += v;
                    }
                }
            }
        }
        m
    }

    /// The Hessian determinant `det(d^2F / dz_i dz_j)`, expanded exactly as
    /// a cubic form.
    pub fn hessian_form(&self) -> CubicForm {
        let p = self.to_poly();
        let d: Vec<TernaryPoly> = (0..3).map(|v| p.partial(v)).collect();
        let h: Vec<Vec<TernaryPoly>> = (0..3)
            .map(|a| (0..3).map(|b| d[a].partial(b)).collect())
            .collect();
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            let mut m = h[r0][c0].mul(&h[r1][c1]);
            m.add_assign(&h[r0][c1].mul(&h[r1][c0]), C64::new(-1.0, 0.0));
            m
        };
        let mut det = h[0][0].mul(&minor(1, 2, 1, 2));
        det.add_assign(&h[0][1].mul(&minor(1, 2, 0, 2)), C64::new(-1.0, 0.0));
        det.add_assign(&h[0][2].mul(&minor(1, 2, 0, 1)), C64::new(1.0, 0.0));
        CubicForm::from_poly(&det)
    }

    /// The pulled-back form `z -> F(M z)`.
    pub fn compose(&self, m: &Mat3) -> CubicForm {
        let lin: Vec<TernaryPoly> = (0..3).map(|r| TernaryPoly::linear(m[r])).collect();
        let pows: Vec<Vec<TernaryPoly>> = lin.iter().map(|l| (0..=3).map(|e| l.pow(e)).collect()).collect();
        let mut out = TernaryPoly::zero(3);
        for (&(i, j), c) in MONOMIALS.iter().zip(&self.coeffs) {
            if *c == ZERO {
                continue;
            }
            let term = pows[0][i].mul(&pows[1][j]).mul(&pows[2][3 - i - j]);
            out.add_assign(&term, *c);
        }
        CubicForm::from_poly(&out)
    }

    /// Reorder the variables: the result `G` satisfies
    /// `G(w) = F(z)` with `z[order[k]] = w[k]`.
    pub fn permute_vars(&self, order: [usize; 3]) -> CubicForm {
        let mut m = [[ZERO; 3]; 3];
        for (k, &o) in order.iter().enumerate() {
            m[o][k] = C64::new(1.0, 0.0);
        }
        self.compose(&m)
    }

    /// The cube of the linear form `l1 z1 + l2 z2 + l3 z3`.
    pub fn cube_of_linear(l: [C64; 3]) -> CubicForm {
        CubicForm::from_poly(&TernaryPoly::linear(l).pow(3))
    }

    /// The product of a linear form and a quadratic form given by its
    /// coefficients on `z1^i z2^j z3^(2-i-j)`.
    pub fn linear_times_quadric(l: [C64; 3], q: &[(usize, usize, C64)]) -> CubicForm {
        let mut qp = TernaryPoly::zero(2);
        for &(i, j, c) in q {
            qp.coeffs[index(2, i, j)] += c;
        }
        CubicForm::from_poly(&TernaryPoly::linear(l).mul(&qp))
    }

    /// Directional derivative of the Hessian value at `z` when the
    /// coefficients move in direction `dir`: `tr(adj(M) * M_dir)`.
    pub fn hessian_value_derivative(&self, dir: &CubicForm, z: &[C64; 3]) -> C64 {
        let m = self.second_partials(z);
        let md = dir.second_partials(z);
        let adj = linalg::adjugate3(&m);
        let mut tr = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                tr += adj[i][j] * md[j][i];
            }
        }
        tr
    }
}

fn ipow(z: C64, e: usize) -> C64 {
    match e {
        0 => C64::new(1.0, 0.0),
        1 => z,
        2 => z * z,
        _ => z * z * z,
    }
}

fn powers(z: &[C64; 3]) -> [[C64; 4]; 3] {
    let mut pw = [[C64::new(1.0, 0.0); 4]; 3];
    for v in 0..3 {
        for e in 1..4 {
            pw[v][e] = pw[v][e - 1] * z[v];
        }
    }
    pw
}

/// Chordal distance between the complex lines through `u` and `v`.
pub(crate) fn chordal(u: &[C64], v: &[C64]) -> f64 {
    let nu = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return if nu == nv { 0.0 } else { 1.0 };
    }
    let ip: C64 = u.iter().zip(v).map(|(a, b)| b.conj() * a).sum::<C64>() / (nu * nv);
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { C64::new(1.0, 0.0) };
    u.iter()
        .zip(v)
        .map(|(a, b)| (a / nu - phase * b / nv).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// A point of the complex projective plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    z: [C64; 3],
}

impl ProjPoint {
    pub fn new(z: [C64; 3]) -> Result<Self> {
        if z.iter().all(|c| *c == ZERO) {
            return Err(Error::Invalid("projective point (0,0,0)".into()));
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Invalid("non-finite projective coordinate".into()));
        }
        Ok(ProjPoint { z })
    }

    pub fn from_real(z: [f64; 3]) -> Result<Self> {
        Self::new(z.map(|x| C64::new(x, 0.0)))
    }

    pub fn coords(&self) -> &[C64; 3] {
        &self.z
    }

    /// Index of the coordinate with largest modulus (first among near-ties).
    pub fn chart(&self) -> usize {
        let m = self.z.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.z.iter().position(|c| c.norm() >= m * (1.0 - 1e-12)).unwrap()
    }

    /// Scale so that the coordinate of largest modulus is exactly 1.
    pub fn normalized(&self) -> Self {
        let k = self.chart();
        let pivot = self.z[k];
        let mut z = self.z.map(|c| c / pivot);
        z[k] = C64::new(1.0, 0.0);
        ProjPoint { z }
    }

    pub fn distance(&self, other: &ProjPoint) -> f64 {
        chordal(&self.z, &other.z)
    }

    /// `M z`.
    pub fn transform(&self, m: &Mat3) -> ProjPoint {
        ProjPoint {
            z: linalg::mat_vec3(m, &self.z),
        }
    }
}

/// A line in the space of cubics: the members `t1 f0 + t2 f1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pencil {
    pub f0: CubicForm,
    pub f1: CubicForm,
}

impl Pencil {
    pub fn new(f0: CubicForm, f1: CubicForm) -> Result<Self> {
        if f0.is_zero() || f1.is_zero() || f0.distance(&f1) < 1e-10 {
            return Err(Error::Degenerate("pencil generators are linearly dependent".into()));
        }
        Ok(Pencil { f0, f1 })
    }

    /// The Hesse pencil `t1 (z1^3 + z2^3 + z3^3) + t2 z1 z2 z3`.
    pub fn hesse() -> Self {
        Pencil {
            f0: crate::catalog::fermat(),
            f1: crate::catalog::triangle(),
        }
    }

    /// `t1 f0 + t2 f1` without normalization (may be the zero form).
    pub fn raw_member(&self, t: [C64; 2]) -> CubicForm {
        CubicForm::combination(&[(t[0], &self.f0), (t[1], &self.f1)])
    }

    pub fn member(&self, t: [C64; 2]) -> Result<CubicForm> {
        if t.iter().all(|c| *c == ZERO) {
            return Err(Error::DegenerateParameter);
        }
        Ok(self.raw_member(t).normalized())
    }
}

/// A plane in the space of cubics: the members `t1 f0 + t2 f1 + t3 f2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Net {
    pub f0: CubicForm,
    pub f1: CubicForm,
    pub f2: CubicForm,
}

impl Net {
    pub fn new(f0: CubicForm, f1: CubicForm, f2: CubicForm) -> Result<Self> {
        // Gram-Schmidt on the three coefficient vectors
        let mut basis: Vec<Vec<C64>> = Vec::new();
        for f in [&f0, &f1, &f2] {
            let scale = f.norm();
            let mut v: Vec<C64> = f.coeffs.to_vec();
            for b in &basis {
                let p: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= p * bi;
                }
            }
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if scale == 0.0 || n < 1e-10 * scale {
                return Err(Error::Degenerate("net generators do not span a plane".into()));
            }
            basis.push(v.into_iter().map(|c| c / n).collect());
        }
        Ok(Net { f0, f1, f2 })
    }

    pub fn raw_member(&self, t: [C64; 3]) -> CubicForm {
        CubicForm::combination(&[(t[0], &self.f0), (t[1], &self.f1), (t[2], &self.f2)])
    }

    pub fn member(&self, t: [C64; 3]) -> Result<CubicForm> {
        if t.iter().all(|c| *c == ZERO) {
            return Err(Error::DegenerateParameter);
        }
        Ok(self.raw_member(t).normalized())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct CubicJson {
    coeffs: Vec<TermJson>,
}

impl Serialize for CubicForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .map(|(&(i, j), c)| TermJson { i, j, re: c.re, im: c.im })
            .collect();
        CubicJson { coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CubicJson::deserialize(d)?;
        CubicForm::try_from_json_terms(raw).map_err(serde::de::Error::custom)
    }
}

impl CubicForm {
    fn try_from_json_terms(raw: CubicJson) -> Result<Self> {
        if raw.coeffs.len() != 10 {
            return Err(Error::Schema(format!(
                "expected exactly 10 coefficients, found {}",
                raw.coeffs.len()
            )));
        }
        let mut coeffs = [ZERO; 10];
        for (k, (t, &(i, j))) in raw.coeffs.iter().zip(MONOMIALS.iter()).enumerate() {
            if (t.i, t.j) != (i, j) {
                return Err(Error::Schema(format!(
                    "entry {k} has exponents ({},{}), expected ({i},{j})",
                    t.i, t.j
                )));
            }
            coeffs[k] = C64::new(t.re, t.im);
        }
        CubicForm::new(coeffs).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: CubicJson = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Self::try_from_json_terms(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cubic serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rng::{complex_normal, random_cubic, seeded};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn storage_index_is_lexicographic() {
        for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
            assert_eq!(monomial_index(i, j), k);
        }
    }

    #[test]
    fn fermat_evaluations() {
        let f = catalog::fermat();
        let q3 = ProjPoint::from_real([1.0, -1.0, 0.0]).unwrap();
        assert!(f.evaluate(&q3).norm() < 1e-15);
        let p = ProjPoint::from_real([1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.evaluate(&p), c(3.0));
        let g = f.gradient(&ProjPoint::from_real([1.0, 0.0, 0.0]).unwrap());
        assert_eq!(g, [c(3.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn zero_point_rejected() {
        assert!(ProjPoint::from_real([0.0, 0.0, 0.0]).is_err());
        assert!(CubicForm::new([ZERO; 10]).is_err());
    }

    #[test]
    fn gradients_vanish_at_singular_points() {
        let s = ProjPoint::from_real([0.0, 0.0, 1.0]).unwrap();
        for f in [catalog::triangle(), catalog::cuspidal()] {
            let g = f.gradient(&s);
            assert!(g.iter().all(|v| v.norm() == 0.0), "{g:?}");
        }
    }

    #[test]
    fn hessian_of_fermat() {
        let h = catalog::fermat().hessian_form();
        assert_eq!(h, CubicForm::from_real_terms(&[(1, 1, 216.0)]));
    }

    #[test]
    fn hessian_of_cusp_family() {
        // z1^3 + z2^2 z3 + tau z3^3 has Hessian 24 z1 (3 tau z3^2 - z2^2)
        let tau = C64::new(0.3, -0.7);
        let f = CubicForm::from_terms(&[(3, 0, c(1.0)), (0, 2, c(1.0)), (0, 0, tau)]);
        let want = CubicForm::from_terms(&[(1, 0, tau * 72.0), (1, 2, c(-24.0))]);
        let h = f.hessian_form();
        for k in 0..10 {
            assert!((h.coeffs()[k] - want.coeffs()[k]).norm() < 1e-12, "{h:?}");
        }
    }

    #[test]
    fn hessian_of_pi1_family_has_minus_sign() {
        // z1z2z3 + a z1^3 + b z2^3 + c z3^3
        // -> (216abc + 2) z1z2z3 - 6 (a z1^3 + b z2^3 + c z3^3)
        let (a, b, cc) = (C64::new(0.2, 0.1), C64::new(-0.4, 0.0), C64::new(0.0, 0.9));
        let f = catalog::pi1_member(a, b, cc);
        let want = CubicForm::from_terms(&[
            (1, 1, a * b * cc * 216.0 + 2.0),
            (3, 0, -a * 6.0),
            (0, 3, -b * 6.0),
            (0, 0, -cc * 6.0),
        ]);
        let h = f.hessian_form();
        for k in 0..10 {
            assert!((h.coeffs()[k] - want.coeffs()[k]).norm() < 1e-12);
        }
    }

    /// Independent route: the Hessian value at a point by a numeric 3x3
    /// determinant of central finite differences of the gradient.
    #[test]
    fn hessian_form_matches_finite_difference_determinant() {
        let mut rng = seeded(41);
        for _ in 0..20 {
            let f = random_cubic(&mut rng);
            let z = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
            let h = 1e-4;
            let mut m = [[ZERO; 3]; 3];
            for b in 0..3 {
                let mut zp = z;
                let mut zm = z;
                zp[b] += h;
                zm[b] -= h;
                let gp = f.grad(&zp);
                let gm = f.grad(&zm);
                for a in 0..3 {
                    m[a][b] = (gp[a] - gm[a]) / (2.0 * h);
                }
            }
            let numeric = linalg::det3(&m);
            let exact = f.hessian_form().eval(&z);
            assert!((numeric - exact).norm() < 1e-6 * (1.0 + exact.norm()));
        }
    }

    #[test]
    fn euler_identity() {
        let mut rng = seeded(5);
        for _ in 0..100 {
            let f = random_cubic(&mut rng);
            let z = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
            let g = f.grad(&z);
            let lhs: C64 = (0..3).map(|k| z[k] * g[k]).sum();
            let rhs = f.eval(&z) * 3.0;
            assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn hessian_scales_cubically() {
        let mut rng = seeded(6);
        for _ in 0..20 {
            let f = random_cubic(&mut rng);
            let lam = complex_normal(&mut rng);
            let lhs = f.scale(lam).hessian_form();
            let rhs = f.hessian_form().scale(lam * lam * lam);
            for k in 0..10 {
                assert!((lhs.coeffs()[k] - rhs.coeffs()[k]).norm() < 1e-10 * (1.0 + rhs.max_modulus()));
            }
        }
    }

    #[test]
    fn hessian_vanishes_on_line_component() {
        // z1 * (random quadric): Hessian vanishes identically on z1 = 0
        let mut rng = seeded(8);
        let q: Vec<(usize, usize, C64)> = (0..=2)
            .flat_map(|i| (0..=2 - i).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, complex_normal(&mut rng)))
            .collect();
        let f = CubicForm::linear_times_quadric([c(1.0), c(0.0), c(0.0)], &q);
        let h = f.hessian_form();
        for _ in 0..20 {
            let p = ProjPoint::new([ZERO, complex_normal(&mut rng), complex_normal(&mut rng)])
                .unwrap()
                .normalized();
            assert!(h.evaluate(&p).norm() < 1e-8 * h.max_modulus().max(1.0));
        }
    }

    #[test]
    fn compose_matches_pointwise_evaluation() {
        let mut rng = seeded(9);
        let f = random_cubic(&mut rng);
        let m = crate::rng::random_gl3(&mut rng);
        let g = f.compose(&m);
        let z = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
        let mz = linalg::mat_vec3(&m, &z);
        assert!((g.eval(&z) - f.eval(&mz)).norm() < 1e-12 * (1.0 + g.eval(&z).norm()));
        // H(F o M) = det(M)^2 H(F) o M
        let d = linalg::det3(&m);
        let lhs = g.hessian_form().eval(&z);
        let rhs = f.hessian_form().eval(&mz) * d * d;
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn hesse_pencil_members() {
        let p = Pencil::hesse();
        assert_eq!(p.member([c(1.0), c(0.0)]).unwrap(), catalog::fermat());
        assert_eq!(p.member([c(0.0), c(1.0)]).unwrap(), catalog::triangle());
        assert!(matches!(p.member([c(0.0), c(0.0)]), Err(Error::DegenerateParameter)));
        assert!(Pencil::new(catalog::fermat(), catalog::fermat().scale(c(2.0))).is_err());
    }

    #[test]
    fn net_member_and_rank() {
        let n = Net::new(catalog::fermat(), catalog::triangle(), catalog::cuspidal()).unwrap();
        assert_eq!(n.member([c(0.0), c(0.0), c(1.0)]).unwrap(), catalog::cuspidal());
        let sum = catalog::fermat().add(&catalog::triangle());
        assert!(Net::new(catalog::fermat(), catalog::triangle(), sum).is_err());
    }

    #[test]
    fn normalization_pins_largest_coefficient() {
        let f = CubicForm::from_terms(&[(1, 1, C64::new(0.0, 3.0)), (0, 0, c(1.0))]).normalized();
        assert_eq!(f.coeff(1, 1), c(1.0));
        let p = ProjPoint::new([C64::new(0.0, 2.0), c(1.0), c(0.5)]).unwrap().normalized();
        assert_eq!(p.coords()[0], c(1.0));
    }

    #[test]
    fn json_schema() {
        let f = catalog::cuspidal();
        let s = f.to_json();
        assert_eq!(CubicForm::from_json(&s).unwrap(), f);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let mut short = v.clone();
        short["coeffs"].as_array_mut().unwrap().pop();
        assert!(matches!(CubicForm::from_json(&short.to_string()), Err(Error::Schema(_))));
        let mut swapped = v;
        swapped["coeffs"].as_array_mut().unwrap().swap(0, 1);
        assert!(matches!(CubicForm::from_json(&swapped.to_string()), Err(Error::Schema(_))));
    }
}
