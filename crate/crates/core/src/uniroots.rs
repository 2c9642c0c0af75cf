//! Univariate complex root finding (Aberth iteration with inclusion-disk
//! clustering) and the Sylvester resultant used to intersect two cubics.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::CubicForm;
use crate::linalg;

const EPS: f64 = f64::EPSILON;

/// Polynomial with complex coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<C64>,
    /// Known absolute error in each coefficient, beyond rounding.
    floor: f64,
}

impl UniPoly {
    /// Trims trailing coefficients below `1e-14 * max|c|`. Rejects the zero polynomial.
    pub fn new(mut coeffs: Vec<C64>) -> Result<Self> {
        let m = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 || !m.is_finite() {
            return Err(Error::Invalid("zero or non-finite polynomial".into()));
        }
        while coeffs.last().is_some_and(|c| c.norm() < 1e-14 * m) {
            coeffs.pop();
        }
        Ok(UniPoly { coeffs, floor: 0.0 })
    }

    /// Declare that every coefficient is only known to within `err` (absolute).
    /// Root clustering then treats roots that this error cannot separate as one.
    pub fn with_coefficient_error(mut self, err: f64) -> Self {
        self.floor = err.max(0.0);
        self
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// `lc * prod (z - r_k)^{m_k}`.
    pub fn from_roots(lc: C64, roots: &[(C64, usize)]) -> Self {
        let mut c = vec![lc];
        for &(r, m) in roots {
            for _ in 0..m {
                let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
                for (k, a) in c.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * r;
                }
                c = next;
            }
        }
        UniPoly { coeffs: c, floor: 0.0 }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() == 1 {
            return UniPoly { coeffs: vec![C64::new(0.0, 0.0)], floor: 0.0 };
        }
        let n = self.degree() as f64;
        UniPoly {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect(),
            floor: self.floor * n,
        }
    }

    /// Error bound for evaluating at `z`: rounding `4 eps sum |c_k| |z|^k`
    /// plus the coefficient error floor.
    fn noise(&self, z: C64) -> f64 {
        let r = z.norm();
        let weight = |c: &C64| 4.0 * EPS * c.norm() + self.floor;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + weight(c))
    }

    /// `p(z) / p'(z)`, evaluated through the reversed polynomial outside the unit disk.
    fn newton_ratio(&self, z: C64) -> C64 {
        let n = self.degree();
        if z.norm() <= 1.0 {
            let (mut p, mut dp) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for c in self.coeffs.iter().rev() {
                dp = dp * z + p;
                p = p * z + c;
            }
            p / dp
        } else {
            let w = z.inv();
            let (mut q, mut dq) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for c in self.coeffs.iter() {
                dq = dq * w + q;
                q = q * w + c;
            }
            z * q / (q * n as f64 - w * dq)
        }
    }

    fn normalized(&self) -> UniPoly {
        let m = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c / m).collect(),
            floor: self.floor / m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Roots closer than `r_cluster * max(1, |z|)` are merged.
    pub r_cluster: f64,
    pub max_iters: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { r_cluster: 1e-5, max_iters: 800 }
    }
}

pub fn all_roots(p: &UniPoly) -> Result<RootSet> {
    all_roots_with(p, &RootOptions::default())
}

/// Simultaneous Aberth iteration on all roots, then clustering and polish.
pub fn all_roots_with(p: &UniPoly, opts: &RootOptions) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Invalid("polynomial of degree 0 has no roots".into()));
    }
    let p = p.normalized();
    let z = aberth(&p, opts.max_iters)?;
    let clusters = cluster(&p, &z, opts.r_cluster);

    let dp = p.derivative();
    let mut roots = Vec::with_capacity(clusters.len());
    for members in clusters {
        let m = members.len();
        let mut c = members.iter().map(|&i| z[i]).sum::<C64>() / m as f64;
        if m == 1 {
            for _ in 0..3 {
                let step = p.newton_ratio(c);
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                c -= step;
            }
        } else {
            // an m-fold root is a simple root of the (m-1)-th derivative
            let spread = members.iter().map(|&i| (z[i] - c).norm()).fold(0.0, f64::max);
            let mut d = p.clone();
            for _ in 1..m {
                d = d.derivative();
            }
            let mut x = c;
            for _ in 0..4 {
                let step = d.newton_ratio(x);
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                x -= step;
            }
            if (x - c).norm() <= spread.max(1e-12) {
                c = x;
            }
            // a genuine multiple root makes p' small at the centroid as well
            let scale = c.norm().max(1.0);
            let size: f64 = dp
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm() * scale.powi(k as i32))
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
            let rel = dp.eval(c).norm() / size;
            if rel > 1e-6 {
                return Err(Error::MultiplicityDisagreement {
                    root: c,
                    cluster: m,
                    derivative: rel,
                });
            }
        }
        let residual = p.eval(c).norm() / (1.0 + c.norm()).powi(n as i32);
        roots.push(Root { value: c, multiplicity: m, residual });
    }
    roots.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(RootSet { roots })
}

fn aberth(p: &UniPoly, max_iters: usize) -> Result<Vec<C64>> {
    let n = p.degree();
    let lc = p.leading();
    let bound = 1.0
        + p.coeffs[..n]
            .iter()
            .map(|c| (c / lc).norm())
            .fold(0.0, f64::max);
    // geometric-mean radius is a tighter starting ring when it lies inside the bound
    let c0 = p.coeffs[0].norm();
    let gm = if c0 > 0.0 { (c0 / lc.norm()).powf(1.0 / n as f64) } else { 1.0 };
    let radius = gm.clamp(1e-3, bound);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..max_iters {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let val = p.eval(z[i]);
            if val.norm() <= p.noise(z[i]) {
                done[i] = true;
                continue;
            }
            all_done = false;
            let w = p.newton_ratio(z[i]);
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let mut corr = w / (C64::new(1.0, 0.0) - w * s);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                corr = w;
            }
            if !corr.re.is_finite() || !corr.im.is_finite() {
                continue;
            }
            z[i] -= corr;
            if corr.norm() <= 4.0 * EPS * z[i].norm() {
                done[i] = true;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    let residuals: Vec<f64> = z.iter().map(|&x| p.eval(x).norm() / p.noise(x).max(f64::MIN_POSITIVE)).collect();
    if residuals.iter().all(|&r| r < 1e4) {
        return Ok(z);
    }
    Err(Error::NonConvergence {
        iterations: max_iters,
        best: z,
        residuals,
    })
}

/// Groups approximations into root clusters, agglomeratively.
///
/// A cluster of `m` approximations with centroid `c` stands for an `m`-fold
/// root known up to the radius at which the evaluation error can move such
/// a root: `(err / |lc * prod_{j outside} (c - z_j)|)^(1/m)`. Clusters merge
/// while their radii overlap or they lie within the clustering radius.
fn cluster(p: &UniPoly, z: &[C64], r_cluster: f64) -> Vec<Vec<usize>> {
    let lc = p.leading().norm();
    let radius = |members: &[usize]| -> (C64, f64) {
        let m = members.len();
        let c = members.iter().map(|&i| z[i]).sum::<C64>() / m as f64;
        let err = p.eval(c).norm().max(p.noise(c));
        let log_den = lc.ln()
            + (0..z.len())
                .filter(|j| !members.contains(j))
                .map(|j| (c - z[j]).norm().max(f64::MIN_POSITIVE).ln())
                .sum::<f64>();
        (c, ((err.ln() - log_den) / m as f64).exp())
    };
    let mut groups: Vec<Vec<usize>> = (0..z.len()).map(|i| vec![i]).collect();
    loop {
        let info: Vec<(C64, f64)> = groups.iter().map(|g| radius(g)).collect();
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let d = (info[a].0 - info[b].0).norm();
                let near = d <= r_cluster * info[a].0.norm().max(info[b].0.norm()).max(1.0);
                let reach = 2.0 * (info[a].1 + info[b].1);
                if near || d <= reach {
                    let score = d / reach.max(f64::MIN_POSITIVE);
                    if best.is_none_or(|x| score < x.0) {
                        best = Some((score, a, b));
                    }
                }
            }
        }
        let Some((_, a, b)) = best else { break };
        let moved = groups.remove(b);
        groups[a].extend(moved);
    }
    for g in &mut groups {
        g.sort();
    }
    groups.sort();
    groups
}

/// Which pair of coordinates parametrizes the chart line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineChart {
    /// `(z1, z2) = (1, t)`
    OneT,
    /// `(z1, z2) = (t, 1)`
    TOne,
}

/// Coefficients of `f` as a cubic in `z3`, each a polynomial in `t` (ascending).
fn z3_coefficients(f: &CubicForm, chart: LineChart) -> [Vec<C64>; 4] {
    let mut out: [Vec<C64>; 4] = Default::default();
    for (k, slot) in out.iter_mut().enumerate() {
        // z3^k pairs with z1^i z2^j, i + j = 3 - k
        let d = 3 - k;
        let mut c = vec![C64::new(0.0, 0.0); d + 1];
        for i in 0..=d {
            let j = d - i;
            let t_power = match chart {
                LineChart::OneT => j,
                LineChart::TOne => i,
            };
            c[t_power] += f.coeff(i, j);
        }
        *slot = c;
    }
    out
}

fn eval_poly(c: &[C64], t: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * t + a)
}

/// The Sylvester resultant of `f` and `g` with respect to `z3`, restricted to
/// the chart line. Degree at most 9 in `t`.
pub fn resultant_z3(f: &CubicForm, g: &CubicForm, chart: LineChart) -> Result<UniPoly> {
    let fa = z3_coefficients(f, chart);
    let ga = z3_coefficients(g, chart);
    const N: usize = 16;
    let vals: Vec<C64> = (0..N)
        .map(|k| {
            let t = linalg::unit_root(k, N);
            let a: Vec<C64> = fa.iter().map(|c| eval_poly(c, t)).collect();
            let b: Vec<C64> = ga.iter().map(|c| eval_poly(c, t)).collect();
            linalg::det(sylvester(&a, &b))
        })
        .collect();
    let coeffs = linalg::inverse_dft(&vals);
    let scale = f.norm().powi(3) * g.norm().powi(3);
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max <= 1e-11 * scale {
        if f.coeff(0, 0).norm() < 1e-12 * f.max_modulus() && g.coeff(0, 0).norm() < 1e-12 * g.max_modulus() {
            return Err(Error::Degenerate("both cubics pass through the eliminated vertex".into()));
        }
        return Err(Error::CommonComponent);
    }
    // aliasing check: a degree <= 9 polynomial leaves the top coefficients empty
    if coeffs[10..].iter().any(|c| c.norm() > 1e-8 * max) {
        return Err(Error::Degenerate("resultant interpolation is inconsistent".into()));
    }
    // those top coefficients are pure evaluation error, a measure of the error in the rest
    let alias = coeffs[10..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(UniPoly::new(coeffs[..10].to_vec())?.with_coefficient_error(2.0 * alias))
}

/// 6x6 Sylvester matrix of two cubics given by ascending coefficients.
fn sylvester(a: &[C64], b: &[C64]) -> Vec<Vec<C64>> {
    let mut m = vec![vec![C64::new(0.0, 0.0); 6]; 6];
    for r in 0..3 {
        for k in 0..4 {
            m[r][r + k] = a[3 - k];
            m[r + 3][r + k] = b[3 - k];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rng::{complex_normal, seeded};
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn ninth_roots_of_unity() {
        let mut co = vec![c(0.0); 10];
        co[0] = c(-1.0);
        co[9] = c(1.0);
        let rs = all_roots(&UniPoly::new(co).unwrap()).unwrap();
        assert_eq!(rs.roots.len(), 9);
        for r in &rs.roots {
            assert_eq!(r.multiplicity, 1);
            assert!(r.residual < 1e-12);
            assert!((r.value.powu(9) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn triple_root() {
        let p = UniPoly::from_roots(c(1.0), &[(c(2.0), 3)]);
        let rs = all_roots(&p).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!((rs.roots[0].value - 2.0).norm() < 1e-8);
    }

    #[test]
    fn eightfold_plus_simple() {
        let p = UniPoly::from_roots(C64::new(0.3, 1.1), &[(C64::new(0.5, -0.2), 8), (c(-1.7), 1)]);
        let rs = all_roots(&p).unwrap();
        let mut m: Vec<usize> = rs.roots.iter().map(|r| r.multiplicity).collect();
        m.sort();
        assert_eq!(m, vec![1, 8]);
    }

    #[test]
    fn close_simple_roots_stay_apart() {
        let p = UniPoly::from_roots(c(1.0), &[(c(1.0), 1), (c(1.0 + 1e-3), 1), (c(-2.0), 1)]);
        let rs = all_roots(&p).unwrap();
        assert_eq!(rs.roots.len(), 3);
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(all_roots(&UniPoly::from_real(&[3.0]).unwrap()).is_err());
        assert!(UniPoly::from_real(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn fermat_against_triangle_resultant() {
        // on z1 = 1, z2 = t the common zeros of z1^3+z2^3+z3^3 and z1z2z3
        // satisfy t^3 = -1 (z3 = 0) or t = 0 (then z3^3 = -1)
        // the three common points on z1 = 0 sit at t = infinity, so the degree drops to 6
        let r = resultant_z3(&catalog::fermat(), &catalog::triangle(), LineChart::OneT).unwrap();
        assert_eq!(r.degree(), 6);
        let rs = all_roots(&r).unwrap();
        assert_eq!(rs.total_multiplicity(), 6);
        let at_zero = rs.roots.iter().find(|r| r.value.norm() < 1e-6).unwrap();
        assert_eq!(at_zero.multiplicity, 3);
        for root in &rs.roots {
            let t = root.value;
            let on_curve = (t.powu(3) + 1.0).norm() < 1e-8 || t.norm() < 1e-6;
            assert!(on_curve, "{t}");
        }
        let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        for target in [c(-1.0), -omega, -omega * omega] {
            assert!(rs.roots.iter().any(|r| (r.value - target).norm() < 1e-8));
        }
    }

    /// Independent oracle: brute-force the Sylvester determinant at a point and
    /// compare with the interpolated polynomial.
    #[test]
    fn resultant_matches_pointwise_determinant() {
        let mut rng = seeded(12);
        let f = crate::rng::random_cubic(&mut rng);
        let g = crate::rng::random_cubic(&mut rng);
        for chart in [LineChart::OneT, LineChart::TOne] {
            let r = resultant_z3(&f, &g, chart).unwrap();
            let t = complex_normal(&mut rng);
            let (z1, z2) = match chart {
                LineChart::OneT => (c(1.0), t),
                LineChart::TOne => (t, c(1.0)),
            };
            // coefficients of z3^k by direct evaluation
            let coef = |h: &CubicForm| -> Vec<C64> {
                (0..4)
                    .map(|k| {
                        let d = 3 - k;
                        (0..=d).map(|i| h.coeff(i, d - i) * z1.powu(i as u32) * z2.powu((d - i) as u32)).sum()
                    })
                    .collect()
            };
            let direct = linalg::det(sylvester(&coef(&f), &coef(&g)));
            assert!((r.eval(t) - direct).norm() < 1e-9 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn identical_cubics_share_a_component() {
        let f = catalog::fermat();
        assert!(matches!(resultant_z3(&f, &f, LineChart::OneT), Err(Error::CommonComponent)));
    }

    #[test]
    fn fermat_hessian_resultant_has_nine_roots() {
        let f = catalog::fermat();
        // in a generic frame no intersection point lies on the line at infinity
        let m = [
            [c(1.0), C64::new(0.3, 0.1), c(-0.2)],
            [c(0.4), c(1.0), C64::new(0.0, 0.5)],
            [c(-0.3), c(0.2), c(1.0)],
        ];
        let g = f.compose(&m);
        let r = resultant_z3(&g, &g.hessian_form(), LineChart::OneT).unwrap();
        let rs = all_roots(&r).unwrap();
        assert_eq!(rs.total_multiplicity(), 9);
        assert_eq!(rs.roots.len(), 9);
    }

    fn random_roots(seed: u64, n: usize) -> Vec<C64> {
        let mut rng = seeded(seed);
        // rejection sample for separation
        let mut out: Vec<C64> = Vec::new();
        while out.len() < n {
            let z = complex_normal(&mut rng) * 1.5;
            if out.iter().all(|w| (w - z).norm() > 0.2) {
                out.push(z);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reconstruction_and_degree(seed in 0u64..10_000, n in 1usize..12) {
            let r = random_roots(seed, n);
            let p = UniPoly::from_roots(c(1.0), &r.iter().map(|&z| (z, 1)).collect::<Vec<_>>());
            let rs = all_roots(&p).unwrap();
            prop_assert_eq!(rs.total_multiplicity(), n);
            let q = UniPoly::from_roots(c(1.0), &rs.roots.iter().map(|r| (r.value, r.multiplicity)).collect::<Vec<_>>());
            let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-7 * scale);
            }
        }

        #[test]
        fn perturbation_stability(seed in 0u64..10_000) {
            let r = random_roots(seed, 9);
            let p = UniPoly::from_roots(c(1.0), &r.iter().map(|&z| (z, 1)).collect::<Vec<_>>());
            let mut rng = seeded(seed ^ 0xabc);
            let eps = 1e-10;
            let pert = UniPoly::new(p.coeffs().iter().map(|a| a + complex_normal(&mut rng) * eps).collect()).unwrap();
            let a = all_roots(&p).unwrap();
            let b = all_roots(&pert).unwrap();
            for ra in &a.roots {
                let d = b.roots.iter().map(|rb| (rb.value - ra.value).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(d < 1e-6, "moved by {}", d);
            }
        }
    }
}
