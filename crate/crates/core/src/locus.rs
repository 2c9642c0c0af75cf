//! Inflection points (the intersection of a cubic with its Hessian curve)
//! and singular points of a single cubic.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::forms::{CubicForm, ProjPoint};
use crate::linalg::{self, Mat3};
use crate::rng::{complex_normal, seeded};
use crate::uniroots::{all_roots, resultant_z3, LineChart, UniPoly};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A chart coordinate beyond this modulus counts as escaping to infinity.
const ESCAPE: f64 = 1e6;
const DEDUP: f64 = 1e-7;
const GENERIC_FRAMES: usize = 8;
const FRAME_SEED: u64 = 0x9e37_79b9;
const SINGULAR_STARTS: usize = 60;
const FULL_GRADIENT_STARTS: usize = 20;
const SINGULAR_SEED: u64 = 0x5eed_0060;
const SINGULAR_DEDUP: f64 = 1e-3;
const SINGULAR_MERGE: f64 = 2e-2;
const NEWTON_ITERS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InflectionPoint {
    #[serde(serialize_with = "ser_point")]
    pub point: ProjPoint,
    pub multiplicity: usize,
    /// `max(|F|, |H|)` with the form, its Hessian and the point normalized.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InflectionSet {
    pub points: Vec<InflectionPoint>,
    /// Label (1..=9) of each point, parallel to `points`, when known.
    pub labels: Option<Vec<usize>>,
}

fn ser_point<S: serde::Serializer>(p: &ProjPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for c in p.coords() {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

impl InflectionSet {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// Multiplicities sorted in decreasing order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.points.iter().map(|p| p.multiplicity).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    pub fn all_simple(&self) -> bool {
        self.points.len() == 9 && self.points.iter().all(|p| p.multiplicity == 1)
    }

    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn projective_points(&self) -> Vec<ProjPoint> {
        self.points.iter().map(|p| p.point).collect()
    }

    /// Labels `1..=9` in the current order.
    pub fn with_positional_labels(mut self) -> Self {
        self.labels = Some((1..=self.points.len()).collect());
        self
    }

    /// Labels from the table of the nine base points of the Hesse pencil.
    /// Fails unless every point is one of them.
    pub fn with_q_labels(mut self) -> Result<Self> {
        let q = catalog::q_table();
        let mut labels = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let k = q
                .iter()
                .position(|r| r.distance(&p.point) < 1e-6)
                .ok_or_else(|| Error::LabelMatchingFailed("point is not a Hesse base point".into()))?;
            labels.push(k + 1);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Reorder so that `labels` reads `1..=9`.
    pub fn sorted_by_label(mut self) -> Self {
        if let Some(labels) = self.labels.take() {
            let mut pairs: Vec<(usize, InflectionPoint)> = labels.into_iter().zip(self.points).collect();
            pairs.sort_by_key(|(l, _)| *l);
            self.labels = Some(pairs.iter().map(|(l, _)| *l).collect());
            self.points = pairs.into_iter().map(|(_, p)| p).collect();
        }
        self
    }

    pub fn label_of(&self, i: usize) -> usize {
        self.labels.as_ref().map_or(i + 1, |l| l[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalType {
    Node,
    Cusp,
    Tacnode,
    OrdinaryTriple,
    NonIsolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    #[serde(serialize_with = "ser_point")]
    pub point: ProjPoint,
    pub local_type: LocalType,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularSet {
    pub points: Vec<SingularPoint>,
    /// The singular locus contains a whole line; `points` are samples of it.
    pub non_isolated: bool,
}

impl SingularSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count(&self, t: LocalType) -> usize {
        self.points.iter().filter(|p| p.local_type == t).count()
    }
}

/// `max(|F(p)|, |H(p)|)` after normalizing the forms and the point.
pub fn inflection_residual(f: &CubicForm, h: &CubicForm, p: &ProjPoint) -> f64 {
    let q = p.normalized();
    let fv = f.evaluate(&q).norm() / f.max_modulus();
    let hv = h.evaluate(&q).norm() / h.max_modulus();
    fv.max(hv)
}

/// Deterministic sequence of coordinate frames: the identity, then
/// fixed pseudo-random unitary frames.
fn frames() -> Vec<Mat3> {
    let mut out = vec![[[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]];
    let mut rng = seeded(FRAME_SEED);
    while out.len() < 1 + GENERIC_FRAMES {
        let rows: [[C64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| complex_normal(&mut rng)));
        if let Some(u) = linalg::gram_schmidt(rows) {
            out.push(u);
        }
    }
    out
}

/// The nine inflection points with multiplicities.
pub fn inflection_points(f: &CubicForm) -> Result<InflectionSet> {
    if f.is_zero() {
        return Err(Error::Invalid("zero cubic".into()));
    }
    let f = f.normalized();
    let h = f.hessian_form();
    if h.max_modulus() <= 1e-12 {
        // a cone over three points: every point of the curve is an inflection point
        return Err(Error::CommonComponent);
    }
    let h = h.normalized();
    let mut last_err = None;
    // a projection can make distinct intersection points look like one
    // multiple root, so only an answer seen from two projection centers is trusted
    let mut seen: Vec<(usize, InflectionSet)> = Vec::new();
    let mut shared = 0;
    for (fi, m) in frames().into_iter().enumerate() {
        let fm = f.compose(&m);
        let hm = h.compose(&m);
        let vertex_on_both =
            fm.coeff(0, 0).norm() < 1e-12 * fm.max_modulus() && hm.coeff(0, 0).norm() < 1e-12 * hm.max_modulus();
        if vertex_on_both {
            continue;
        }
        for chart in [LineChart::OneT, LineChart::TOne] {
            match solve_in_frame(&f, &h, &fm, &hm, &m, chart) {
                Ok(set) => {
                    if seen.iter().any(|(j, s)| *j != fi && same_scheme(s, &set)) {
                        return Ok(set);
                    }
                    seen.push((fi, set));
                    // the other chart shares this frame's projection center
                    break;
                }
                Err(Error::CommonComponent) => {
                    // a shared component shows in every frame; a lone report is a near-cancellation
                    shared += 1;
                    if shared >= 3 && seen.is_empty() {
                        return Err(Error::CommonComponent);
                    }
                    break;
                }
                Err(e) => {
                    log::debug!("inflection frame rejected: {e}");
                    last_err = Some(e);
                }
            }
        }
    }
    log::debug!("all inflection frames failed, last: {last_err:?}");
    if shared > 0 && seen.is_empty() {
        return Err(Error::CommonComponent);
    }
    Err(Error::ChartExhaustion)
}

fn same_scheme(a: &InflectionSet, b: &InflectionSet) -> bool {
    a.points.len() == b.points.len()
        && a.points.iter().all(|p| {
            b.points
                .iter()
                .any(|q| q.multiplicity == p.multiplicity && q.point.distance(&p.point) < 1e-6)
        })
}

fn solve_in_frame(
    f: &CubicForm,
    h: &CubicForm,
    fm: &CubicForm,
    hm: &CubicForm,
    m: &Mat3,
    chart: LineChart,
) -> Result<InflectionSet> {
    let r = resultant_z3(fm, hm, chart)?;
    if r.degree() < 9 {
        return Err(Error::Degenerate("intersection point on the chart boundary".into()));
    }
    let roots = all_roots(&r)?;
    let mut points: Vec<InflectionPoint> = Vec::new();
    for root in &roots.roots {
        let t = root.value;
        if t.norm() > ESCAPE {
            return Err(Error::Degenerate("intersection escapes the chart".into()));
        }
        let (z1, z2) = match chart {
            LineChart::OneT => (ONE, t),
            LineChart::TOne => (t, ONE),
        };
        let z3 = back_substitute(fm, hm, z1, z2)?;
        let local = ProjPoint::new([z1, z2, z3])?;
        let mut p = local.transform(m).normalized();
        if root.multiplicity == 1 {
            p = polish_fh(f, h, &p);
        } else {
            p = polish_singular(f, &p);
        }
        let residual = inflection_residual(f, h, &p);
        if residual > 1e-8 {
            return Err(Error::Degenerate(format!("inflection residual {residual:.2e}")));
        }
        // a cubic meets its Hessian simply at every smooth point
        if root.multiplicity > 1 {
            let g = f.gradient(&p).iter().map(|c| c.norm()).fold(0.0, f64::max);
            if g > 1e-6 * f.max_modulus() {
                return Err(Error::Degenerate("multiple intersection at a smooth point".into()));
            }
        }
        if let Some(q) = points.iter_mut().find(|q| q.point.distance(&p) < DEDUP) {
            q.multiplicity += root.multiplicity;
        } else {
            points.push(InflectionPoint {
                point: p,
                multiplicity: root.multiplicity,
                residual,
            });
        }
    }
    let total: usize = points.iter().map(|p| p.multiplicity).sum();
    if total != 9 {
        return Err(Error::CardinalityMismatch { expected: 9, got: total });
    }
    points.sort_by(|a, b| point_key(&a.point).partial_cmp(&point_key(&b.point)).unwrap());
    Ok(InflectionSet { points, labels: None })
}

fn point_key(p: &ProjPoint) -> [f64; 6] {
    let z = p.normalized();
    let c = z.coords();
    let r = |x: f64| (x * 1e6).round() / 1e6;
    [r(c[0].re), r(c[0].im), r(c[1].re), r(c[1].im), r(c[2].re), r(c[2].im)]
}

/// Coefficients of `f(z1, z2, z3)` in `z3`, ascending.
fn z3_cubic(f: &CubicForm, z1: C64, z2: C64) -> [C64; 4] {
    std::array::from_fn(|k| {
        let d = 3 - k;
        (0..=d)
            .map(|i| f.coeff(i, d - i) * z1.powu(i as u32) * z2.powu((d - i) as u32))
            .sum()
    })
}

fn relative_value(c: &[C64; 4], x: C64) -> f64 {
    let v = c.iter().rev().fold(ZERO, |acc, a| acc * x + a).norm();
    let r = x.norm();
    let s = c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
    if s == 0.0 { 0.0 } else { v / s }
}

/// The `z3` coordinate of the common zero of `f` and `h` above `(z1, z2)`.
/// Fails if the projection from the vertex identifies two common zeros.
fn back_substitute(f: &CubicForm, h: &CubicForm, z1: C64, z2: C64) -> Result<C64> {
    let a = z3_cubic(f, z1, z2);
    let b = z3_cubic(h, z1, z2);
    let cands = cubic_roots(&a).or_else(|| cubic_roots(&b)).ok_or_else(|| {
        Error::Degenerate("both cubics constant along the projection line".into())
    })?;
    let scored: Vec<(C64, f64)> = cands
        .iter()
        .map(|&x| (x, relative_value(&a, x).max(relative_value(&b, x))))
        .collect();
    let best = scored
        .iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .copied()
        .unwrap();
    let twin = scored
        .iter()
        .any(|&(x, s)| s < 1e-6 && (x - best.0).norm() > 1e-3 * x.norm().max(1.0));
    if twin {
        return Err(Error::Degenerate("projection is not injective on the intersection".into()));
    }
    Ok(best.0)
}

fn cubic_roots(c: &[C64; 4]) -> Option<Vec<C64>> {
    let p = UniPoly::new(c.to_vec()).ok()?;
    if p.degree() == 0 {
        return None;
    }
    let rs = all_roots(&p).ok()?;
    Some(rs.roots.iter().map(|r| r.value).collect())
}

/// Newton iteration on `(F, H) = 0` in the max-modulus chart of `p`.
fn polish_fh(f: &CubicForm, h: &CubicForm, p: &ProjPoint) -> ProjPoint {
    let mut z = *p.normalized().coords();
    let k = p.chart();
    let (a, b) = free_indices(k);
    let mut best = (*p, inflection_residual(f, h, p));
    for _ in 0..10 {
        let gf = f.grad(&z);
        let gh = h.grad(&z);
        let jac = [[gf[a], gf[b]], [gh[a], gh[b]]];
        let rhs = [-f.eval(&z), -h.eval(&z)];
        let d = linalg::damped_solve2(jac, rhs);
        z[a] += d[0];
        z[b] += d[1];
        let Ok(q) = ProjPoint::new(z) else { break };
        let res = inflection_residual(f, h, &q);
        if res < best.1 {
            best = (q, res);
        }
        if d[0].norm() + d[1].norm() < 1e-15 {
            break;
        }
    }
    best.0.normalized()
}

fn free_indices(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Relative size of `(F, grad F)` at the normalized point.
fn singular_residual(f: &CubicForm, p: &ProjPoint) -> f64 {
    let q = p.normalized();
    let s = f.max_modulus();
    let g = f.gradient(&q);
    let gn = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    (f.evaluate(&q).norm() / s).max(gn / s)
}

/// Newton on the gradient in the chart of `p`, keeping the best iterate.
fn polish_singular(f: &CubicForm, p: &ProjPoint) -> ProjPoint {
    let k = p.chart();
    let mut z = *p.normalized().coords();
    let (a, b) = free_indices(k);
    let mut best = (*p, singular_residual(f, p));
    for _ in 0..60 {
        let Some(d) = gradient_newton_step(f, &z, a, b, false) else { break };
        z[a] += d[0];
        z[b] += d[1];
        let Ok(q) = ProjPoint::new(z) else { break };
        let res = singular_residual(f, &q);
        if res < best.1 {
            best = (q, res);
        }
        if d[0].norm() + d[1].norm() < 1e-16 {
            break;
        }
    }
    best.0.normalized()
}

/// One Newton step for the gradient in the free coordinates `a`, `b`.
///
/// The square system `(F_a, F_b) = 0` converges best at cusps and tacnodes,
/// but it has a fourth, non-singular root and can leave a node with a tiny
/// basin. With `full` the step is Gauss-Newton on all three partials, whose
/// Jacobian keeps full rank at every node off the chart's line at infinity.
fn gradient_newton_step(f: &CubicForm, z: &[C64; 3], a: usize, b: usize, full: bool) -> Option<[C64; 2]> {
    let g = f.grad(z);
    let m = f.second_partials(z);
    let (normal, rhs) = if full {
        let mut normal = [[ZERO; 2]; 2];
        let mut rhs = [ZERO; 2];
        for (r, c) in [a, b].into_iter().enumerate() {
            for i in 0..3 {
                rhs[r] -= m[i][c].conj() * g[i];
                normal[r][0] += m[i][c].conj() * m[i][a];
                normal[r][1] += m[i][c].conj() * m[i][b];
            }
        }
        (normal, rhs)
    } else {
        ([[m[a][a], m[a][b]], [m[b][a], m[b][b]]], [-g[a], -g[b]])
    };
    let d = linalg::damped_solve2(normal, rhs);
    if d.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return None;
    }
    Some(d)
}

/// All singular points, by multistart Newton on the gradient in each chart.
pub fn singular_points(f: &CubicForm) -> SingularSet {
    let f = f.normalized();
    let mut rng = seeded(SINGULAR_SEED);
    let mut found: Vec<(ProjPoint, f64)> = Vec::new();
    for k in 0..3 {
        let (a, b) = free_indices(k);
        for start in 0..SINGULAR_STARTS + FULL_GRADIENT_STARTS {
            let full = start >= SINGULAR_STARTS;
            let mut z = [ZERO; 3];
            z[k] = ONE;
            z[a] = complex_normal(&mut rng) * rng.random_range(0.3..2.0);
            z[b] = complex_normal(&mut rng) * rng.random_range(0.3..2.0);
            // Newton stalls near non-nodal singular points, so keep the best iterate
            let mut best: Option<(ProjPoint, f64)> = None;
            for it in 0..NEWTON_ITERS {
                let Some(mut d) = gradient_newton_step(&f, &z, a, b, full) else { break };
                let len = (d[0].norm_sqr() + d[1].norm_sqr()).sqrt();
                let cap = 2.0 * (1.0 + z[a].norm() + z[b].norm());
                if len > cap {
                    d = [d[0] * (cap / len), d[1] * (cap / len)];
                }
                z[a] += d[0];
                z[b] += d[1];
                if z[a].norm() > 1e8 || z[b].norm() > 1e8 {
                    break;
                }
                let small = len < 1e-6 * (1.0 + z[a].norm() + z[b].norm());
                if small || it + 1 == NEWTON_ITERS {
                    if let Ok(q) = ProjPoint::new(z) {
                        let r = singular_residual(&f, &q);
                        if best.as_ref().is_none_or(|x| r < x.1) {
                            best = Some((q, r));
                        }
                    }
                }
                if len < 1e-14 * (1.0 + z[a].norm() + z[b].norm()) {
                    break;
                }
            }
            let Some((p, res)) = best else { continue };
            if res < 1e-11 {
                let p = p.normalized();
                match found.iter_mut().find(|(q, _)| q.distance(&p) < SINGULAR_DEDUP) {
                    Some(slot) if res < slot.1 => *slot = (p, res),
                    Some(_) => {}
                    None => found.push((p, res)),
                }
            }
        }
    }
    let mut found = merge_degenerate_copies(&f, found);
    found.sort_by(|a, b| point_key(a).partial_cmp(&point_key(b)).unwrap());
    let non_isolated = found.len() > 4
        || (found.len() == 3 && collinear(&found[0], &found[1], &found[2]))
        || (!found.is_empty() && has_multiple_component(&f));
    if non_isolated {
        return SingularSet {
            points: found
                .into_iter()
                .map(|point| SingularPoint {
                    point,
                    local_type: LocalType::NonIsolated,
                })
                .collect(),
            non_isolated: true,
        };
    }
    let points = found
        .into_iter()
        .map(|point| SingularPoint {
            point,
            local_type: local_type(&f, &point),
        })
        .collect();
    SingularSet {
        points,
        non_isolated: false,
    }
}

/// Newton only reaches a degenerate singular point to about
/// `residual^(1/mu)`, so one cusp or tacnode can leave several candidates a
/// little apart. Two candidates are the same point when the gradient stays
/// small across the segment between them: it grows like `d^2` there for
/// copies of one degenerate point but like `d` between distinct nodes.
fn merge_degenerate_copies(f: &CubicForm, mut found: Vec<(ProjPoint, f64)>) -> Vec<ProjPoint> {
    found.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut kept: Vec<ProjPoint> = Vec::new();
    for (p, _) in found {
        let same = kept.iter().any(|q| {
            let d = q.distance(&p);
            d < SINGULAR_MERGE && singular_residual(f, &midpoint(q, &p)) < 0.05 * d
        });
        if !same {
            kept.push(p);
        }
    }
    kept
}

fn midpoint(p: &ProjPoint, q: &ProjPoint) -> ProjPoint {
    let k = p.chart();
    let (a, b) = (p.coords(), q.coords());
    let z: [C64; 3] = std::array::from_fn(|i| (a[i] / a[k] + b[i] / b[k]) * 0.5);
    ProjPoint::new(z).unwrap_or(*p)
}

/// A cubic has a repeated component iff its restriction to every line has a
/// repeated root; two random lines decide it.
fn has_multiple_component(f: &CubicForm) -> bool {
    let mut rng = seeded(0x2e9e);
    (0..2).all(|_| {
        let p: [C64; 3] = std::array::from_fn(|_| complex_normal(&mut rng));
        let q: [C64; 3] = std::array::from_fn(|_| complex_normal(&mut rng));
        let vals: Vec<C64> = (0..4)
            .map(|k| {
                let s = linalg::unit_root(k, 4);
                f.eval(&std::array::from_fn(|i| p[i] + s * q[i]))
            })
            .collect();
        let c = linalg::inverse_dft(&vals);
        relative_binary_discriminant([c[3], c[2], c[1], c[0]]) < 1e-10
    })
}

fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    let m = [*p.coords(), *q.coords(), *r.coords()];
    let s = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    linalg::det3(&m).norm() < 1e-6 * s * s * s
}

/// Dehomogenized Taylor data of `f` at `p`: `f(U w)` with `U` unitary and
/// `U e3 = p`, so the singular point sits at the affine origin.
pub(crate) struct LocalJet {
    /// `[[a20, a11/2], [a11/2, a02]]`
    pub quad: [[C64; 2]; 2],
    /// `[a30, a21, a12, a03]`, coefficients of `x^3, x^2 y, x y^2, y^3`.
    pub cubic: [C64; 4],
    pub scale: f64,
}

pub(crate) fn local_jet(f: &CubicForm, p: &ProjPoint) -> LocalJet {
    let u = linalg::unitary_with_last_column(p.coords());
    let g = f.compose(&u);
    let half = C64::new(0.5, 0.0);
    LocalJet {
        quad: [[g.coeff(2, 0), g.coeff(1, 1) * half], [g.coeff(1, 1) * half, g.coeff(0, 2)]],
        cubic: [g.coeff(3, 0), g.coeff(2, 1), g.coeff(1, 2), g.coeff(0, 3)],
        scale: g.max_modulus(),
    }
}

impl LocalJet {
    pub fn cubic_at(&self, v: [C64; 2]) -> C64 {
        let [a, b, c, d] = self.cubic;
        a * v[0].powu(3) + b * v[0] * v[0] * v[1] + c * v[0] * v[1] * v[1] + d * v[1].powu(3)
    }

    /// Unit kernel direction of the quadratic part, by the smaller singular vector.
    pub fn quad_kernel(&self) -> [C64; 2] {
        // null vector of a near rank-1 symmetric matrix: orthogonal to its dominant row
        let q = self.quad;
        let r0 = q[0][0].norm_sqr() + q[0][1].norm_sqr();
        let r1 = q[1][0].norm_sqr() + q[1][1].norm_sqr();
        let row = if r0 >= r1 { q[0] } else { q[1] };
        let v = [-row[1], row[0]];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n == 0.0 {
            return [ONE, ZERO];
        }
        [v[0] / n, v[1] / n]
    }

    /// The two tangent directions of a node: the isotropic vectors of the quadratic part.
    pub fn node_tangents(&self) -> [[C64; 2]; 2] {
        let [[a, b], [_, c]] = self.quad;
        // a x^2 + 2 b x y + c y^2 = 0 with roots x/y = q/a and c/q
        let disc = (b * b - a * c).sqrt();
        let q = if (b + disc).norm() >= (b - disc).norm() { -(b + disc) } else { -(b - disc) };
        [[q, a], [c, q]].map(unit2)
    }

    /// Discriminant of the binary cubic part, relative to its coefficient scale.
    pub fn relative_cubic_discriminant(&self) -> f64 {
        relative_binary_discriminant(self.cubic)
    }
}

fn relative_binary_discriminant([a, b, c, d]: [C64; 4]) -> f64 {
    let disc =
        b * b * c * c - a * c * c * c * 4.0 - b * b * b * d * 4.0 - a * a * d * d * 27.0 + a * b * c * d * 18.0;
    let s = [a, b, c, d].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if s == 0.0 { 0.0 } else { disc.norm() / s.powi(4) }
}

fn unit2(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

const RANK_TOL: f64 = 1e-4;

fn local_type(f: &CubicForm, p: &ProjPoint) -> LocalType {
    let jet = local_jet(f, p);
    let (s1, s2) = linalg::singular_values2(jet.quad);
    let tol = RANK_TOL * jet.scale;
    if s2 > tol {
        LocalType::Node
    } else if s1 > tol {
        let v = jet.quad_kernel();
        if jet.cubic_at(v).norm() > tol {
            LocalType::Cusp
        } else {
            LocalType::Tacnode
        }
    } else if jet.relative_cubic_discriminant() > 1e-6 {
        LocalType::OrdinaryTriple
    } else {
        LocalType::NonIsolated
    }
}

pub fn is_smooth(f: &CubicForm) -> bool {
    singular_points(f).is_empty()
}

/// Matches each point of `pts` to the nearest point of `reference` and
/// returns the reference labels in the order of `pts`.
pub fn label_against(reference: &InflectionSet, pts: &InflectionSet) -> Result<Vec<usize>> {
    let n = reference.points.len();
    if n != 9 || pts.points.len() != 9 {
        return Err(Error::CardinalityMismatch {
            expected: 9,
            got: if n != 9 { n } else { pts.points.len() },
        });
    }
    if !reference.all_simple() || !pts.all_simple() {
        return Err(Error::LabelMatchingFailed("multiple inflection points".into()));
    }
    let refs = reference.projective_points();
    let mut min_sep = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_sep = min_sep.min(refs[i].distance(&refs[j]));
        }
    }
    let radius = 0.5 * min_sep;
    let mut used = [false; 9];
    let mut out = Vec::with_capacity(n);
    for (idx, p) in pts.points.iter().enumerate() {
        let mut d: Vec<(f64, usize)> = refs.iter().enumerate().map(|(k, r)| (r.distance(&p.point), k)).collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        if d[0].0 > radius {
            return Err(Error::LabelMatchingFailed(format!(
                "point {idx} is {:.2e} from the nearest reference point (radius {radius:.2e})",
                d[0].0
            )));
        }
        if d[1].0 < 2.0 * d[0].0 || used[d[0].1] {
            return Err(Error::AmbiguousMatching { index: idx });
        }
        used[d[0].1] = true;
        out.push(reference.label_of(d[0].1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::random_cubic;

    fn sorted_mults(s: &InflectionSet) -> Vec<usize> {
        s.multiplicities()
    }

    #[test]
    fn fermat_inflections_are_the_q_table() {
        let s = inflection_points(&catalog::fermat()).unwrap();
        assert!(s.all_simple());
        for q in catalog::q_table() {
            let d = s.points.iter().map(|p| p.point.distance(&q)).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-8, "{d}");
        }
        let labeled = s.with_q_labels().unwrap().sorted_by_label();
        assert_eq!(labeled.labels.as_deref().unwrap(), &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn cuspidal_multiplicities() {
        let s = inflection_points(&catalog::cuspidal()).unwrap();
        assert_eq!(sorted_mults(&s), vec![8, 1]);
        let flex = s.points.iter().find(|p| p.multiplicity == 1).unwrap();
        assert!(flex.point.distance(&ProjPoint::from_real([0.0, 1.0, 0.0]).unwrap()) < 1e-8);
        let cusp = s.points.iter().find(|p| p.multiplicity == 8).unwrap();
        assert!(cusp.point.distance(&ProjPoint::from_real([0.0, 0.0, 1.0]).unwrap()) < 1e-6);
    }

    #[test]
    fn nodal_multiplicities() {
        let s = inflection_points(&catalog::nodal()).unwrap();
        assert_eq!(sorted_mults(&s), vec![6, 1, 1, 1]);
    }

    #[test]
    fn line_components_are_rejected() {
        assert!(matches!(inflection_points(&catalog::conic_line()), Err(Error::CommonComponent)));
        assert!(matches!(inflection_points(&catalog::triple_line()), Err(Error::CommonComponent)));
    }

    #[test]
    fn singular_points_of_named_cubics() {
        assert!(singular_points(&catalog::fermat()).is_empty());
        let t = singular_points(&catalog::triangle());
        assert_eq!(t.points.len(), 3);
        assert_eq!(t.count(LocalType::Node), 3);
        for e in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            let q = ProjPoint::from_real(e).unwrap();
            assert!(t.points.iter().any(|p| p.point.distance(&q) < 1e-8));
        }
        let c = singular_points(&catalog::cuspidal());
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.points[0].local_type, LocalType::Cusp);
        assert_eq!(singular_points(&catalog::conic_tangent()).points[0].local_type, LocalType::Tacnode);
        assert_eq!(singular_points(&catalog::concurrent()).points[0].local_type, LocalType::OrdinaryTriple);
        assert!(singular_points(&catalog::double_line()).non_isolated);
        assert!(singular_points(&catalog::triple_line()).non_isolated);
        let n = singular_points(&catalog::conic_line());
        assert_eq!((n.points.len(), n.count(LocalType::Node)), (2, 2));
    }

    #[test]
    fn singular_points_are_inflection_points() {
        for f in [catalog::nodal(), catalog::cuspidal(), catalog::triangle(), catalog::conic_tangent()] {
            let h = f.normalized().hessian_form().normalized();
            for s in singular_points(&f).points {
                assert!(h.evaluate(&s.point).norm() < 1e-8);
            }
        }
        for f in [catalog::nodal(), catalog::cuspidal()] {
            let infl = inflection_points(&f).unwrap();
            for s in singular_points(&f).points {
                assert!(infl.points.iter().any(|p| p.point.distance(&s.point) < 1e-7));
            }
        }
    }

    #[test]
    fn random_cubics_have_nine_simple_flexes() {
        let mut rng = seeded(2024);
        for _ in 0..40 {
            let f = random_cubic(&mut rng);
            let s = inflection_points(&f).unwrap();
            assert!(s.all_simple());
            assert!(s.max_residual() < 1e-8);
        }
    }

    #[test]
    fn labeling() {
        let s = inflection_points(&catalog::fermat()).unwrap().with_q_labels().unwrap();
        let l = label_against(&s, &s).unwrap();
        assert_eq!(l, s.labels.clone().unwrap());
        // hesse pencil members share the nine base points
        let member = catalog::fermat().add(&catalog::triangle().scale(C64::new(0.3, 0.2)));
        let t = inflection_points(&member).unwrap();
        let l = label_against(&s, &t).unwrap();
        let direct = t.clone().with_q_labels().unwrap().labels.unwrap();
        assert_eq!(l, direct);
        // tiny perturbation keeps the labels
        let mut noisy = s.clone();
        let mut rng = seeded(3);
        for p in noisy.points.iter_mut() {
            let z = p.point.coords().map(|c| c + complex_normal(&mut rng) * 1e-9);
            p.point = ProjPoint::new(z).unwrap();
        }
        assert_eq!(label_against(&s, &noisy).unwrap(), s.labels.clone().unwrap());
        let short = InflectionSet {
            points: s.points[..8].to_vec(),
            labels: None,
        };
        assert!(matches!(label_against(&s, &short), Err(Error::CardinalityMismatch { .. })));
    }

    fn frame(seed: u64, index: usize) -> crate::Mat3 {
        let mut rng = seeded(seed);
        (0..index).for_each(|_| {
            crate::rng::random_gl3(&mut rng);
        });
        crate::rng::random_gl3(&mut rng)
    }

    #[test]
    fn node_with_a_small_square_newton_basin() {
        let m = frame(4u64.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(19), 32);
        let s = singular_points(&catalog::triangle().compose(&m));
        assert_eq!(s.count(LocalType::Node), 3);
    }

    #[test]
    fn tacnode_is_found_once() {
        let m = frame(1u64.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(19), 4);
        let s = singular_points(&catalog::conic_tangent().compose(&m));
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].local_type, LocalType::Tacnode);
    }
}
