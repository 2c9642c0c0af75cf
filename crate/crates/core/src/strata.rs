//! Equisingular classification of cubics, discriminant crossings of pencils
//! and cuspidal members of nets.

use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{CubicForm, Net, Pencil, ProjPoint, MONOMIALS};
use crate::linalg::{self, Mat3};
use crate::locus::{local_jet, singular_points, LocalType, SingularSet};
use crate::rng::{complex_normal, random_cubic, seeded};
use crate::uniroots::{all_roots, UniPoly};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumLabel {
    Smooth,
    B1,
    B21,
    B22,
    B31,
    B32,
    B4,
    B5,
    B7,
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentStructure {
    Irreducible,
    ConicLine,
    ThreeLines,
    DoubleLineLine,
    TripleLine,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub singular_points: SingularSet,
    pub component_structure: ComponentStructure,
    /// One flag per pairwise intersection of components: whether they are tangent there.
    pub tangency_flags: Vec<bool>,
}

const RANK_TOL: f64 = 1e-4;

/// Stratum of `f` with the evidence used to decide it.
pub fn classify(f: &CubicForm) -> Result<(StratumLabel, Certificate)> {
    if f.is_zero() {
        return Err(Error::Invalid("zero cubic".into()));
    }
    let f = f.normalized();
    let sing = singular_points(&f);
    let cert = |s: SingularSet, c: ComponentStructure, t: Vec<bool>| Certificate {
        singular_points: s,
        component_structure: c,
        tangency_flags: t,
    };
    if sing.is_empty() {
        return Ok((StratumLabel::Smooth, cert(sing, ComponentStructure::Irreducible, vec![])));
    }
    if sing.non_isolated {
        return if is_perfect_cube(&f) {
            Ok((StratumLabel::B7, cert(sing, ComponentStructure::TripleLine, vec![])))
        } else {
            Ok((StratumLabel::B5, cert(sing, ComponentStructure::DoubleLineLine, vec![true])))
        };
    }
    let nodes = sing.count(LocalType::Node);
    let n = sing.points.len();
    let only = |t: LocalType| n == 1 && sing.points[0].local_type == t;
    if nodes == n && n == 1 {
        let p = sing.points[0].point;
        if !node_is_irreducible(&f, &p) {
            return Err(Error::Unclassifiable(
                "one node but a nodal tangent line is a component".into(),
            ));
        }
        Ok((StratumLabel::B1, cert(sing, ComponentStructure::Irreducible, vec![])))
    } else if nodes == n && n == 2 {
        Ok((StratumLabel::B21, cert(sing, ComponentStructure::ConicLine, vec![false, false])))
    } else if nodes == n && n == 3 {
        Ok((StratumLabel::B31, cert(sing, ComponentStructure::ThreeLines, vec![false, false, false])))
    } else if only(LocalType::Cusp) {
        Ok((StratumLabel::B22, cert(sing, ComponentStructure::Irreducible, vec![])))
    } else if only(LocalType::Tacnode) {
        Ok((StratumLabel::B32, cert(sing, ComponentStructure::ConicLine, vec![true])))
    } else if only(LocalType::OrdinaryTriple) {
        Ok((StratumLabel::B4, cert(sing, ComponentStructure::ThreeLines, vec![false, false, false])))
    } else {
        let types: Vec<LocalType> = sing.points.iter().map(|p| p.local_type).collect();
        Err(Error::Unclassifiable(format!("singular points {types:?}")))
    }
}

pub fn stratum(f: &CubicForm) -> Result<StratumLabel> {
    classify(f).map(|(l, _)| l)
}

/// Whether `f` is proportional to the cube of a linear form. The gradient of
/// `l^3` at any point is proportional to `l`.
fn is_perfect_cube(f: &CubicForm) -> bool {
    let mut rng = seeded(0xc0be);
    for _ in 0..3 {
        let z: [C64; 3] = std::array::from_fn(|_| complex_normal(&mut rng));
        let l = f.grad(&z);
        if l.iter().all(|c| c.norm() < 1e-10) {
            continue;
        }
        return f.distance(&CubicForm::cube_of_linear(l)) < 1e-6;
    }
    false
}

/// A nodal cubic is reducible iff a tangent line at the node is a component,
/// i.e. the cubic part of the local equation vanishes on a nodal tangent.
fn node_is_irreducible(f: &CubicForm, p: &ProjPoint) -> bool {
    let jet = local_jet(f, p);
    let tol = RANK_TOL * jet.scale;
    jet.node_tangents().iter().all(|v| jet.cubic_at(*v).norm() > tol)
}

/// Discriminant evaluator in a fixed generic frame: the Macaulay quotient
/// for the resultant of the three partial derivatives.
#[derive(Clone)]
pub(crate) struct Discriminant {
    frame: Mat3,
}

/// Degree-4 monomials `(e1, e2, e3)`.
fn quartic_monomials() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(15);
    for a in (0..=4).rev() {
        for b in (0..=4 - a).rev() {
            out.push([a, b, 4 - a - b]);
        }
    }
    out
}

impl Discriminant {
    pub(crate) fn new() -> Self {
        let mut rng = seeded(0xd15c);
        loop {
            let rows: [[C64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| complex_normal(&mut rng)));
            if let Some(u) = linalg::gram_schmidt(rows) {
                return Discriminant { frame: u };
            }
        }
    }

    /// Pre-apply the frame; the value is then a fixed nonzero multiple of the
    /// discriminant of the original cubic.
    pub(crate) fn prepare(&self, f: &CubicForm) -> CubicForm {
        f.compose(&self.frame)
    }

    /// Value at a cubic that already went through [`Discriminant::prepare`].
    pub(crate) fn eval_prepared(&self, f: &CubicForm) -> C64 {
        let mons = quartic_monomials();
        let col = |e: [usize; 3]| mons.iter().position(|m| *m == e).expect("degree-4 monomial");
        // the three partial derivatives as lists of (exponent, coefficient)
        let mut partials: [Vec<([usize; 3], C64)>; 3] = Default::default();
        for (&(i, j), c) in MONOMIALS.iter().zip(f.coeffs()) {
            let e = [i, j, 3 - i - j];
            for v in 0..3 {
                if e[v] > 0 {
                    let mut d = e;
                    d[v] -= 1;
                    partials[v].push((d, c * e[v] as f64));
                }
            }
        }
        let n = mons.len();
        let mut m = vec![vec![ZERO; n]; n];
        for (r, e) in mons.iter().enumerate() {
            let v = (0..3).find(|&v| e[v] >= 2).expect("some exponent is at least 2");
            let mut shift = *e;
            shift[v] -= 2;
            for (d, c) in &partials[v] {
                let target = [shift[0] + d[0], shift[1] + d[1], shift[2] + d[2]];
                m[r][col(target)] += c;
            }
        }
        let extra: Vec<usize> = mons
            .iter()
            .enumerate()
            .filter(|(_, e)| e.iter().filter(|&&x| x >= 2).count() >= 2)
            .map(|(k, _)| k)
            .collect();
        let minor: Vec<Vec<C64>> = extra.iter().map(|&r| extra.iter().map(|&c| m[r][c]).collect()).collect();
        let den = linalg::det(minor);
        linalg::det(m) / den
    }

    pub(crate) fn eval(&self, f: &CubicForm) -> C64 {
        self.eval_prepared(&self.prepare(f))
    }
}

/// Value of the discriminant of `f` up to a fixed nonzero constant.
pub fn discriminant(f: &CubicForm) -> C64 {
    Discriminant::new().eval(f)
}

/// An affine coordinate `u` on the pencil's line: `t(u) = (m00 + m01 u, m10 + m11 u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilChart {
    m: [[C64; 2]; 2],
}

impl PencilChart {
    /// `(t1, t2) = (a - conj(b) u, b + conj(a) u)` for a random unit `(a, b)`.
    pub fn new(seed: u64) -> Self {
        let mut rng = seeded(seed);
        let a = complex_normal(&mut rng);
        let b = complex_normal(&mut rng);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        PencilChart { m: [[a, -b.conj()], [b, a.conj()]] }
    }

    /// `t2 / t1 = center + radius u`, or `t1 / t2` when `flip`.
    fn affine(center: C64, radius: f64, flip: bool) -> Self {
        let n = (1.0 + center.norm_sqr()).sqrt();
        let one = C64::new(1.0 / n, 0.0);
        let r = C64::new(radius / n, 0.0);
        let m = if flip { [[center / n, r], [one, ZERO]] } else { [[one, ZERO], [center / n, r]] };
        PencilChart { m }
    }

    /// Pencil parameter at `u`; `u = infinity` maps to [`PencilChart::dt`].
    pub fn t(&self, u: C64) -> [C64; 2] {
        [self.m[0][0] + self.m[0][1] * u, self.m[1][0] + self.m[1][1] * u]
    }

    pub fn dt(&self) -> [C64; 2] {
        [self.m[0][1], self.m[1][1]]
    }
}

/// Distance between two points of the projective line.
fn chordal2(x: &[C64; 2], y: &[C64; 2]) -> f64 {
    let cross = (x[0] * y[1] - x[1] * y[0]).norm();
    let nx = (x[0].norm_sqr() + x[1].norm_sqr()).sqrt();
    let ny = (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
    cross / (nx * ny)
}

/// Roots of the pencil discriminant as homogeneous parameters of the
/// unit-scaled generators, with multiplicities, and how many of them sit at
/// the base chart's point at infinity.
///
/// The base chart is a random rotation of the sphere. When crossings crowd
/// together it can merge them, so every multiple cluster is recomputed in an
/// affine chart zoomed onto it.
fn pencil_roots(p: &Pencil) -> Result<(Vec<([C64; 2], usize)>, usize)> {
    let chart = PencilChart::new(0x9e9c11);
    let poly = pencil_discriminant(p, &chart)?;
    let roots = all_roots(&poly)?;
    let mut coarse: Vec<([C64; 2], usize)> = roots.roots.iter().map(|r| (chart.t(r.value), r.multiplicity)).collect();
    let deficit = 12usize.saturating_sub(poly.degree());
    if deficit > 0 {
        coarse.push((chart.dt(), deficit));
    }
    let mut out = Vec::with_capacity(coarse.len());
    for (k, &(t, m)) in coarse.iter().enumerate() {
        match (m > 1).then(|| zoom(p, &coarse, k)).flatten() {
            Some(split) => out.extend(split),
            None => out.push((t, m)),
        }
    }
    Ok((out, deficit))
}

/// Roots inside an affine chart centered on cluster `k`, reaching halfway
/// to the nearest other cluster. `None` unless they account for the whole cluster.
fn zoom(p: &Pencil, clusters: &[([C64; 2], usize)], k: usize) -> Option<Vec<([C64; 2], usize)>> {
    let (t, m) = clusters[k];
    let flip = t[0].norm() < t[1].norm();
    let coord = |t: &[C64; 2]| if flip { t[0] / t[1] } else { t[1] / t[0] };
    let c = coord(&t);
    let gap = clusters
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, (o, _))| (coord(o) - c).norm())
        .filter(|d| d.is_finite())
        .fold(f64::INFINITY, f64::min);
    let radius = if gap.is_finite() { 0.5 * gap } else { 1.0 };
    let chart = PencilChart::affine(c, radius, flip);
    let poly = pencil_discriminant(p, &chart).ok()?;
    let roots = all_roots(&poly).ok()?;
    let inside: Vec<([C64; 2], usize)> = roots
        .roots
        .iter()
        .filter(|r| r.value.norm() < 1.0)
        .map(|r| (chart.t(r.value), r.multiplicity))
        .collect();
    (inside.iter().map(|x| x.1).sum::<usize>() == m).then_some(inside)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    /// Homogeneous pencil parameter `(t1, t2)`, scaled to unit norm.
    pub t: [C64; 2],
    pub multiplicity: usize,
    pub label: StratumLabel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilCrossings {
    pub crossings: Vec<Crossing>,
}

impl PencilCrossings {
    pub fn total_multiplicity(&self) -> usize {
        self.crossings.iter().map(|c| c.multiplicity).sum()
    }
}

const PENCIL_SAMPLES: usize = 32;
const PENCIL_STARTS: usize = 200;

/// Discriminant of the pencil members as a polynomial in the uniformizing
/// coordinate, interpolated from samples on the unit circle.
fn pencil_discriminant(p: &Pencil, chart: &PencilChart) -> Result<UniPoly> {
    let disc = Discriminant::new();
    let (f0, _) = unit_scaled(&p.f0);
    let (f1, _) = unit_scaled(&p.f1);
    let f0 = disc.prepare(&f0);
    let f1 = disc.prepare(&f1);
    let vals: Vec<C64> = (0..PENCIL_SAMPLES)
        .map(|k| {
            let t = chart.t(linalg::unit_root(k, PENCIL_SAMPLES));
            disc.eval_prepared(&CubicForm::combination(&[(t[0], &f0), (t[1], &f1)]))
        })
        .collect();
    let coeffs = linalg::inverse_dft(&vals);
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    // a typical discriminant value in this frame, for scale
    let mut rng = seeded(0x5ca1e);
    let typical = (0..4)
        .map(|_| disc.eval(&random_cubic(&mut rng)).norm())
        .fold(0.0, f64::max);
    if max < 1e-8 * typical {
        let probes = [C64::new(0.31, -0.17), C64::new(-0.52, 0.44)];
        let all_singular = probes.iter().all(|&u| {
            let t = chart.t(u);
            !singular_points(&p.raw_member(t)).is_empty()
        });
        if all_singular {
            return Err(Error::PencilInsideDiscriminant);
        }
    }
    if coeffs[13..].iter().any(|c| c.norm() > 1e-7 * max) {
        return Err(Error::Degenerate("discriminant samples inconsistent with degree 12".into()));
    }
    // the aliased coefficients would vanish in exact arithmetic; their size
    // measures the evaluation error of the kept ones
    let alias = coeffs[13..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(UniPoly::new(coeffs[..13].to_vec())?.with_coefficient_error(2.0 * alias))
}

/// `f / max|coefficient|` and that modulus.
fn unit_scaled(f: &CubicForm) -> (CubicForm, f64) {
    let m = f.max_modulus();
    (f.scale(C64::new(1.0 / m, 0.0)), m)
}

/// Homogeneous parameter of the unit-scaled generators, in terms of the raw ones.
fn raw_parameter(p: &Pencil, t: [C64; 2]) -> [C64; 2] {
    let t = [t[0] / p.f0.max_modulus(), t[1] / p.f1.max_modulus()];
    let n = (t[0].norm_sqr() + t[1].norm_sqr()).sqrt();
    [t[0] / n, t[1] / n]
}

/// Crossing parameters as `s = t2 / t1` for the members `f0 + s f1`, with
/// multiplicities. A crossing at `t1 = 0` is reported as infinite `s`.
pub fn crossing_parameters(p: &Pencil) -> Result<Vec<(C64, usize)>> {
    let (roots, _) = pencil_roots(p)?;
    Ok(roots
        .into_iter()
        .map(|(t, m)| {
            let t = raw_parameter(p, t);
            let s = if t[0].norm() < 1e-14 * t[1].norm() {
                C64::new(f64::INFINITY, 0.0)
            } else {
                t[1] / t[0]
            };
            (s, m)
        })
        .collect())
}

/// All singular members of a pencil, with multiplicities and strata.
pub fn pencil_crossings(p: &Pencil) -> Result<PencilCrossings> {
    let (roots, deficit) = pencil_roots(p)?;
    if deficit > 0 {
        return Err(Error::Degenerate("crossing at the chart's point at infinity".into()));
    }
    let chart = PencilChart::new(0x9e9c11);
    let normalized = Pencil {
        f0: unit_scaled(&p.f0).0,
        f1: unit_scaled(&p.f1).0,
    };

    let mut starts = PENCIL_STARTS;
    let mut hits = Vec::new();
    for attempt in 0..2 {
        hits = singular_member_parameters(&normalized, &chart, starts, 0x51a6 + attempt);
        if hits.len() == roots.len() {
            break;
        }
        starts *= 2;
    }
    let mismatch = || Error::CountMismatch {
        polynomial: roots.len(),
        multistart: hits.len(),
    };
    if hits.len() != roots.len() {
        return Err(mismatch());
    }
    let mut crossings = Vec::with_capacity(hits.len());
    for (t, multiplicity) in &roots {
        let (d, u) = hits
            .iter()
            .map(|&(u, _)| (chordal2(&chart.t(u), t), u))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        if d > 1e-4 {
            return Err(mismatch());
        }
        let member = normalized.raw_member(chart.t(u));
        let label = stratum(&member)?;
        crossings.push(Crossing {
            t: raw_parameter(p, chart.t(u)),
            multiplicity: *multiplicity,
            label,
        });
    }
    Ok(PencilCrossings { crossings })
}

/// Distinct `u` with a singular member, by multistart Newton on
/// `grad F(t(u), z) = 0` in each affine chart of the plane.
fn singular_member_parameters(p: &Pencil, chart: &PencilChart, starts: usize, seed: u64) -> Vec<(C64, f64)> {
    let mut rng = seeded(seed);
    let dt = chart.dt();
    let df = CubicForm::combination(&[(dt[0], &p.f0), (dt[1], &p.f1)]);
    let mut found: Vec<(C64, f64)> = Vec::new();
    for k in 0..3 {
        let (a, b) = free(k);
        for _ in 0..starts {
            let mut u = complex_normal(&mut rng) * rng.random_range(0.3..3.0);
            let mut z = [ZERO; 3];
            z[k] = ONE;
            z[a] = complex_normal(&mut rng);
            z[b] = complex_normal(&mut rng);
            let mut res = f64::INFINITY;
            for _ in 0..80 {
                let f = p.raw_member(chart.t(u));
                let g = f.grad(&z);
                let m = f.second_partials(&z);
                let gd = df.grad(&z);
                let jac: Vec<Vec<C64>> = (0..3).map(|i| vec![gd[i], m[i][a], m[i][b]]).collect();
                let Some(d) = linalg::solve(jac, &[-g[0], -g[1], -g[2]]) else { break };
                let len = d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let cap = 1.0 + u.norm() + z[a].norm() + z[b].norm();
                let s = if len > cap { cap / len } else { 1.0 };
                u += d[0] * s;
                z[a] += d[1] * s;
                z[b] += d[2] * s;
                if !u.re.is_finite() || u.norm() > 1e8 || z[a].norm() > 1e8 || z[b].norm() > 1e8 {
                    break;
                }
                if len < 1e-14 * cap {
                    let f = p.raw_member(chart.t(u));
                    let zn = ProjPoint::new(z).map(|q| q.normalized());
                    if let Ok(q) = zn {
                        let g = f.gradient(&q);
                        res = g.iter().map(|v| v.norm()).fold(0.0, f64::max) / f.max_modulus();
                    }
                    break;
                }
            }
            if res < 1e-9 {
                match found.iter_mut().find(|(v, _)| (*v - u).norm() < 1e-6 * u.norm().max(1.0)) {
                    Some(slot) if res < slot.1 => *slot = (u, res),
                    Some(_) => {}
                    None => found.push((u, res)),
                }
            }
        }
    }
    found.sort_by(|x, y| (x.0.re, x.0.im).partial_cmp(&(y.0.re, y.0.im)).unwrap());
    found
}

fn free(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspMember {
    /// Member `f0 + alpha f1 + beta f2`.
    pub alpha: C64,
    pub beta: C64,
    #[serde(serialize_with = "ser_point")]
    pub point: ProjPoint,
    /// `|F|, |F_x|, |F_y|, |hess|` at the solution.
    pub residuals: [f64; 4],
}

fn ser_point<S: serde::Serializer>(p: &ProjPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<[f64; 2]> = p.coords().iter().map(|c| [c.re, c.im]).collect();
    v.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetCusps {
    pub members: Vec<CuspMember>,
    /// Whether the count is the one expected of a general net.
    pub generic: bool,
}

pub const GENERIC_CUSP_COUNT: usize = 24;

/// Cuspidal members of a net, by multistart Newton on
/// `(F, F_x, F_y, F_xx F_yy - F_xy^2) = 0` in `(alpha, beta, x, y)`.
/// The count must be stable when the number of starts is doubled.
pub fn net_cusp_members(n: &Net, starts: usize, seed: u64) -> Result<NetCusps> {
    let first = cusp_search(n, starts, seed)?;
    let second = cusp_search(n, 2 * starts, seed.wrapping_add(0x2545_f491))?;
    if first.len() != second.len() {
        return Err(Error::InsufficientStarts {
            starts,
            first: first.len(),
            doubled: 2 * starts,
            second: second.len(),
        });
    }
    let generic = first.len() == GENERIC_CUSP_COUNT;
    Ok(NetCusps { members: first, generic })
}

/// Third partial derivatives of a cubic (constant).
fn third_partials(f: &CubicForm) -> [[[C64; 3]; 3]; 3] {
    // the second-partials matrix is linear in z
    let e = |c: usize| {
        let mut z = [ZERO; 3];
        z[c] = ONE;
        f.second_partials(&z)
    };
    let m = [e(0), e(1), e(2)];
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| m[c][a][b])))
}

fn cusp_search(n: &Net, starts: usize, seed: u64) -> Result<Vec<CuspMember>> {
    let gens = [n.f0.normalized(), n.f1.normalized(), n.f2.normalized()];
    let mut rng = seeded(seed);
    // projective parameters (t0 : t1 : t2) of verified hits
    let mut hits: Vec<([C64; 3], ProjPoint, [f64; 4])> = Vec::new();
    // parameters already classified as something other than a cusp
    let mut rejected: Vec<[C64; 3]> = Vec::new();
    let per = starts.div_ceil(9).max(1);
    for pc in 0..3 {
        let base = gens[pc];
        let d1 = gens[(pc + 1) % 3];
        let d2 = gens[(pc + 2) % 3];
        let t1 = third_partials(&base);
        let t2 = third_partials(&d1);
        let t3 = third_partials(&d2);
        for k in 0..3 {
            let (a, b) = free(k);
            for _ in 0..per {
                let mut al = complex_normal(&mut rng) * rng.random_range(0.2..2.0);
                let mut be = complex_normal(&mut rng) * rng.random_range(0.2..2.0);
                let mut z = [ZERO; 3];
                z[k] = ONE;
                z[a] = complex_normal(&mut rng);
                z[b] = complex_normal(&mut rng);
                let mut converged = false;
                for _ in 0..60 {
                    let f = CubicForm::combination(&[(ONE, &base), (al, &d1), (be, &d2)]);
                    let fv = f.eval(&z);
                    let g = f.grad(&z);
                    let m = f.second_partials(&z);
                    let hess = m[a][a] * m[b][b] - m[a][b] * m[a][b];
                    let g1 = d1.grad(&z);
                    let g2 = d2.grad(&z);
                    let m1 = d1.second_partials(&z);
                    let m2 = d2.second_partials(&z);
                    let dh = |mm: &Mat3| mm[a][a] * m[b][b] + m[a][a] * mm[b][b] - 2.0 * m[a][b] * mm[a][b];
                    // third derivatives of the member
                    let t = |x: usize, y: usize, w: usize| t1[x][y][w] + al * t2[x][y][w] + be * t3[x][y][w];
                    let dhz = |c: usize| {
                        t(a, a, c) * m[b][b] + m[a][a] * t(b, b, c) - 2.0 * m[a][b] * t(a, b, c)
                    };
                    let jac = vec![
                        vec![d1.eval(&z), d2.eval(&z), g[a], g[b]],
                        vec![g1[a], g2[a], m[a][a], m[a][b]],
                        vec![g1[b], g2[b], m[b][a], m[b][b]],
                        vec![dh(&m1), dh(&m2), dhz(a), dhz(b)],
                    ];
                    let rhs = [-fv, -g[a], -g[b], -hess];
                    let Some(d) = linalg::solve(jac, &rhs) else { break };
                    let len = d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                    let cap = 1.0 + al.norm() + be.norm() + z[a].norm() + z[b].norm();
                    let s = if len > cap { cap / len } else { 1.0 };
                    al += d[0] * s;
                    be += d[1] * s;
                    z[a] += d[2] * s;
                    z[b] += d[3] * s;
                    if !al.re.is_finite() || cap > 1e8 {
                        break;
                    }
                    if len < 1e-13 * cap {
                        converged = true;
                        break;
                    }
                }
                if !converged {
                    continue;
                }
                let mut tp = [ZERO; 3];
                tp[pc] = ONE;
                tp[(pc + 1) % 3] = al;
                tp[(pc + 2) % 3] = be;
                let seen = |h: &[C64; 3]| crate::forms::chordal(h, &tp) < 1e-6;
                if hits.iter().any(|(h, _, _)| seen(h)) || rejected.iter().any(seen) {
                    continue;
                }
                let member = n.raw_member_of(&gens, tp);
                let Ok(q) = ProjPoint::new(z) else { continue };
                let q = q.normalized();
                let res = cusp_residuals(&member, &q);
                if res.iter().any(|&r| r > 1e-8) {
                    continue;
                }
                if stratum(&member).ok() != Some(StratumLabel::B22) {
                    rejected.push(tp);
                    continue;
                }
                hits.push((tp, q, res));
            }
        }
    }
    let mut out = Vec::with_capacity(hits.len());
    for (tp, q, res) in hits {
        if tp[0].norm() < 1e-12 {
            log::warn!("cuspidal member outside the affine parameter chart");
            continue;
        }
        out.push(CuspMember {
            alpha: tp[1] / tp[0],
            beta: tp[2] / tp[0],
            point: q,
            residuals: res,
        });
    }
    out.sort_by(|x, y| {
        (x.alpha.re, x.alpha.im, x.beta.re, x.beta.im)
            .partial_cmp(&(y.alpha.re, y.alpha.im, y.beta.re, y.beta.im))
            .unwrap()
    });
    Ok(out)
}

fn cusp_residuals(f: &CubicForm, q: &ProjPoint) -> [f64; 4] {
    let f = f.normalized();
    let k = q.chart();
    let (a, b) = free(k);
    let z = q.coords();
    let g = f.grad(z);
    let m = f.second_partials(z);
    let hess = m[a][a] * m[b][b] - m[a][b] * m[a][b];
    [f.eval(z).norm(), g[a].norm(), g[b].norm(), hess.norm()]
}

impl Net {
    fn raw_member_of(&self, gens: &[CubicForm; 3], t: [C64; 3]) -> CubicForm {
        CubicForm::combination(&[(t[0], &gens[0]), (t[1], &gens[1]), (t[2], &gens[2])])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rng::random_gl3;

    #[test]
    fn named_strata() {
        let cases = [
            (catalog::fermat(), StratumLabel::Smooth),
            (catalog::triangle(), StratumLabel::B31),
            (catalog::nodal(), StratumLabel::B1),
            (catalog::cuspidal(), StratumLabel::B22),
            (catalog::conic_line(), StratumLabel::B21),
            (catalog::conic_tangent(), StratumLabel::B32),
            (catalog::concurrent(), StratumLabel::B4),
            (catalog::double_line(), StratumLabel::B5),
            (catalog::triple_line(), StratumLabel::B7),
        ];
        for (f, want) in cases {
            assert_eq!(stratum(&f).unwrap(), want, "{f:?}");
        }
    }

    #[test]
    fn classification_is_projectively_invariant() {
        let mut rng = seeded(31);
        for name in catalog::NAMES {
            let f = catalog::by_name(name).unwrap();
            let want = stratum(&f).unwrap();
            for _ in 0..5 {
                let m = random_gl3(&mut rng);
                assert_eq!(stratum(&f.compose(&m)).unwrap(), want, "{name}");
            }
        }
    }

    #[test]
    fn discriminant_vanishes_exactly_on_singular_cubics() {
        let smooth = discriminant(&catalog::fermat()).norm();
        assert!(smooth > 1e-6);
        for name in ["triangle", "nodal", "cuspidal", "conic_line"] {
            let v = discriminant(&catalog::by_name(name).unwrap()).norm();
            assert!(v < 1e-10 * smooth, "{name}: {v}");
        }
    }

    /// The discriminant is homogeneous of degree 12 in the coefficients.
    #[test]
    fn discriminant_degree() {
        let mut rng = seeded(4);
        let f = random_cubic(&mut rng);
        let lam = C64::new(1.3, -0.4);
        let ratio = discriminant(&f.scale(lam)) / discriminant(&f);
        assert!((ratio - lam.powu(12)).norm() < 1e-8 * lam.powu(12).norm());
    }

    #[test]
    fn hesse_pencil_meets_four_triangles() {
        let pc = pencil_crossings(&Pencil::hesse()).unwrap();
        assert_eq!(pc.crossings.len(), 4);
        assert_eq!(pc.total_multiplicity(), 12);
        for c in &pc.crossings {
            assert_eq!(c.multiplicity, 3);
            assert_eq!(c.label, StratumLabel::B31);
        }
    }

    #[test]
    fn random_pencil_has_twelve_nodal_members() {
        let mut rng = seeded(11);
        let p = Pencil::new(catalog::fermat(), random_cubic(&mut rng)).unwrap();
        let pc = pencil_crossings(&p).unwrap();
        assert_eq!(pc.crossings.len(), 12);
        assert!(pc.crossings.iter().all(|c| c.multiplicity == 1 && c.label == StratumLabel::B1));
        let s = crossing_parameters(&p).unwrap();
        assert_eq!(s.iter().map(|x| x.1).sum::<usize>(), 12);
    }

    /// Parameters refer to the generators as given, not to rescaled copies.
    #[test]
    fn crossing_parameters_follow_generator_scale() {
        let mut rng = seeded(12);
        let f0 = catalog::fermat();
        let f1 = random_cubic(&mut rng);
        let s1 = crossing_parameters(&Pencil::new(f0, f1).unwrap()).unwrap();
        let s7 = crossing_parameters(&Pencil::new(f0, f1.scale(C64::new(7.0, 0.0))).unwrap()).unwrap();
        for (s, _) in &s1 {
            assert!(s7.iter().any(|(x, _)| (*x * 7.0 - s).norm() < 1e-8 * s.norm().max(1.0)));
            let member = f0.add(&f1.scale(*s));
            assert!(discriminant(&member).norm() < 1e-8 * discriminant(&f0).norm());
        }
    }

    #[test]
    fn pencil_inside_discriminant() {
        let p = Pencil::new(catalog::triangle(), catalog::conic_line()).unwrap();
        assert!(matches!(pencil_crossings(&p), Err(Error::PencilInsideDiscriminant)));
    }

    #[test]
    fn b1_members_have_a_sixfold_node() {
        let mut rng = seeded(19);
        let p = Pencil::new(random_cubic(&mut rng), random_cubic(&mut rng)).unwrap();
        let pc = pencil_crossings(&p).unwrap();
        for c in pc.crossings.iter().take(3) {
            let member = p.raw_member(c.t);
            let infl = crate::locus::inflection_points(&member).unwrap();
            assert_eq!(infl.multiplicities(), vec![6, 1, 1, 1]);
        }
    }

    #[test]
    fn random_net_has_twenty_four_cuspidal_members() {
        let mut rng = seeded(3);
        let n = Net::new(random_cubic(&mut rng), random_cubic(&mut rng), random_cubic(&mut rng)).unwrap();
        let cusps = net_cusp_members(&n, 20000, 3).unwrap();
        assert_eq!(cusps.members.len(), GENERIC_CUSP_COUNT);
        assert!(cusps.generic);
        for m in &cusps.members {
            let member = n.f0.normalized().add(&n.f1.normalized().scale(m.alpha)).add(&n.f2.normalized().scale(m.beta));
            assert_eq!(stratum(&member).unwrap(), StratumLabel::B22);
        }
    }

    /// Every member of the span of the Hesse pencil and `z1^3` is a Hesse-type
    /// cubic up to scaling; none is cuspidal.
    #[test]
    fn hesse_span_net_is_not_generic() {
        let n = Net::new(catalog::fermat(), catalog::triangle(), catalog::triple_line()).unwrap();
        let cusps = net_cusp_members(&n, 3000, 3).unwrap();
        assert!(!cusps.generic);
    }
}
