//! Continuation of the nine inflection points along paths in coefficient
//! space, and the monodromy permutations of closed loops.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{CubicForm, Pencil, ProjPoint};
use crate::linalg::{self, Mat3};
use crate::locus::{self, InflectionPoint, InflectionSet};
use crate::perm::{Perm, PermGroup};
use crate::rng::{complex_normal, random_cubic, seeded};
use crate::strata;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const TAU: f64 = 2.0 * std::f64::consts::PI;

/// One piece of a path in coefficient space, parametrized by `t` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    Line {
        from: CubicForm,
        to: CubicForm,
    },
    /// `center + radius * exp(2 pi i s) * direction`, `s` from `turn_start` to `turn_end`.
    Arc {
        center: CubicForm,
        direction: CubicForm,
        radius: f64,
        turn_start: f64,
        turn_end: f64,
    },
}

impl Segment {
    pub fn at(&self, t: f64) -> CubicForm {
        match self {
            Segment::Line { from, to } => {
                CubicForm::combination(&[(C64::new(1.0 - t, 0.0), from), (C64::new(t, 0.0), to)])
            }
            Segment::Arc {
                center,
                direction,
                radius,
                turn_start,
                turn_end,
            } => {
                let s = turn_start + t * (turn_end - turn_start);
                let w = C64::from_polar(*radius, TAU * s);
                CubicForm::combination(&[(C64::new(1.0, 0.0), center), (w, direction)])
            }
        }
    }

    /// Derivative of [`Segment::at`] in `t`.
    pub fn velocity(&self, t: f64) -> CubicForm {
        match self {
            Segment::Line { from, to } => to.sub(from),
            Segment::Arc {
                direction,
                radius,
                turn_start,
                turn_end,
                ..
            } => {
                let span = turn_end - turn_start;
                let s = turn_start + t * span;
                let w = C64::from_polar(*radius, TAU * s) * C64::new(0.0, TAU * span);
                direction.scale(w)
            }
        }
    }

    pub fn start(&self) -> CubicForm {
        self.at(0.0)
    }

    pub fn end(&self) -> CubicForm {
        self.at(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: *to, to: *from },
            Segment::Arc {
                center,
                direction,
                radius,
                turn_start,
                turn_end,
            } => Segment::Arc {
                center: *center,
                direction: *direction,
                radius: *radius,
                turn_start: *turn_end,
                turn_end: *turn_start,
            },
        }
    }

    /// Largest step in `t` allowed before adaptive control: arcs advance at
    /// most 1/64 of a turn per step.
    fn max_step(&self) -> f64 {
        match self {
            Segment::Line { .. } => 1.0,
            Segment::Arc { turn_start, turn_end, .. } => {
                let span = (turn_end - turn_start).abs();
                if span == 0.0 { 1.0 } else { (1.0 / 64.0) / span }
            }
        }
    }
}

/// A closed path of cubics starting and ending at `basepoint`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    pub basepoint: CubicForm,
    pub segments: Vec<Segment>,
}

const CLOSURE_TOL: f64 = 1e-12;

impl Loop {
    /// Checks that consecutive segments meet and that the path returns to the basepoint.
    pub fn new(basepoint: CubicForm, segments: Vec<Segment>) -> Result<Self> {
        let l = Loop { basepoint, segments };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::Invalid("loop without segments".into()));
        }
        let mut here = self.basepoint;
        for s in &self.segments {
            if let Segment::Arc { radius, .. } = s {
                if !(*radius > 0.0) {
                    return Err(Error::Invalid(format!("arc radius {radius}")));
                }
            }
            let gap = here.distance(&s.start());
            if gap > CLOSURE_TOL {
                return Err(Error::LoopNotClosed { gap });
            }
            here = s.end();
        }
        let gap = here.distance(&self.basepoint);
        if gap > CLOSURE_TOL {
            return Err(Error::LoopNotClosed { gap });
        }
        Ok(())
    }

    pub fn reversed(&self) -> Loop {
        Loop {
            basepoint: self.basepoint,
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let l: Loop = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        l.validate()?;
        Ok(l)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("loops serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    pub proximity_guard: f64,
}

impl Default for TrackingConfig {
    fn default() -> Self {
        TrackingConfig {
            initial_step: 1e-2,
            min_step: 1e-7,
            newton_tol: 1e-11,
            newton_max_iters: 12,
            proximity_guard: 1e-4,
        }
    }
}

impl TrackingConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.initial_step, self.min_step, self.newton_tol, self.proximity_guard]
            .iter()
            .all(|&x| x > 0.0 && x.is_finite());
        if !positive || self.newton_max_iters == 0 || self.min_step >= self.initial_step {
            return Err(Error::Invalid(format!("tracking configuration {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub steps_taken: usize,
    pub min_pairwise_separation: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyResult {
    pub perm: Perm,
    pub diagnostics: Diagnostics,
}

/// Per-member data shared by all nine points at one parameter value.
struct Member {
    f: CubicForm,
    /// Third partials: the second-partials matrix is `sum_c z_c * third[c]`.
    third: [Mat3; 3],
    scale_f: f64,
    scale_h: f64,
}

impl Member {
    fn new(f: CubicForm) -> Self {
        let e = |c: usize| {
            let mut z = [ZERO; 3];
            z[c] = C64::new(1.0, 0.0);
            f.second_partials(&z)
        };
        let s = f.max_modulus();
        Member {
            third: [e(0), e(1), e(2)],
            f,
            scale_f: s,
            scale_h: s * s * s,
        }
    }

    fn hessian_matrix(&self, z: &[C64; 3]) -> Mat3 {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|c| z[c] * self.third[c][i][j]).sum()))
    }

    /// Values `(F, H)` and their gradients at `z`.
    fn system(&self, z: &[C64; 3]) -> ([C64; 2], [[C64; 3]; 2]) {
        let m = self.hessian_matrix(z);
        let adj = linalg::adjugate3(&m);
        let h = linalg::det3(&m);
        let hg: [C64; 3] = std::array::from_fn(|c| trace_product(&adj, &self.third[c]));
        ([self.f.eval(z), h], [self.f.grad(z), hg])
    }

    fn residual(&self, z: &[C64; 3]) -> f64 {
        let (v, _) = self.system(z);
        (v[0].norm() / self.scale_f).max(v[1].norm() / self.scale_h)
    }
}

fn trace_product(a: &Mat3, b: &Mat3) -> C64 {
    let mut tr = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            tr += a[i][j] * b[j][i];
        }
    }
    tr
}

fn free(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn chart_of(z: &[C64; 3]) -> usize {
    (0..3).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap()
}

fn renormalize(z: &[C64; 3]) -> [C64; 3] {
    let k = chart_of(z);
    let p = z[k];
    let mut out = z.map(|c| c / p);
    out[k] = C64::new(1.0, 0.0);
    out
}

/// `dz/dt` in the chart of `z` from implicit differentiation of `(F, H) = 0`.
fn tangent(m: &Member, velocity: &CubicForm, z: &[C64; 3]) -> Option<[C64; 3]> {
    let k = chart_of(z);
    let (a, b) = free(k);
    let (_, g) = m.system(z);
    let ft = velocity.eval(z);
    let ht = m.f.hessian_value_derivative(velocity, z);
    let d = linalg::solve2([[g[0][a], g[0][b]], [g[1][a], g[1][b]]], [-ft, -ht])?;
    let mut out = [ZERO; 3];
    out[a] = d[0];
    out[b] = d[1];
    Some(out)
}

struct Corrected {
    z: [C64; 3],
    first_step: f64,
    residual: f64,
}

fn correct(m: &Member, z0: &[C64; 3], cfg: &TrackingConfig) -> Option<Corrected> {
    let k = chart_of(z0);
    let (a, b) = free(k);
    let mut z = *z0;
    let mut first = None;
    for _ in 0..cfg.newton_max_iters {
        let (v, g) = m.system(&z);
        let d = linalg::solve2([[g[0][a], g[0][b]], [g[1][a], g[1][b]]], [-v[0], -v[1]])?;
        z[a] += d[0];
        z[b] += d[1];
        let len = (d[0].norm_sqr() + d[1].norm_sqr()).sqrt();
        if !len.is_finite() {
            return None;
        }
        first.get_or_insert(len);
        if len <= cfg.newton_tol * (1.0 + z[a].norm() + z[b].norm()) {
            return Some(Corrected {
                residual: m.residual(&z),
                z,
                first_step: first.unwrap(),
            });
        }
    }
    None
}

fn min_separation(pts: &[[C64; 3]]) -> (f64, Vec<f64>) {
    let n = pts.len();
    let mut each = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = crate::forms::chordal(&pts[i], &pts[j]);
            each[i] = each[i].min(d);
            each[j] = each[j].min(d);
        }
    }
    (each.iter().copied().fold(f64::INFINITY, f64::min), each)
}

/// Continue `start` (points of the inflection scheme of the first segment's
/// start) along `path` in lockstep. Returns the end points in the same order.
pub fn track_path(
    path: &[Segment],
    start: &[ProjPoint],
    cfg: &TrackingConfig,
) -> Result<(Vec<ProjPoint>, Diagnostics)> {
    cfg.validate()?;
    let mut pts: Vec<[C64; 3]> = start.iter().map(|p| renormalize(p.coords())).collect();
    let mut diag = Diagnostics {
        steps_taken: 0,
        min_pairwise_separation: min_separation(&pts).0,
        max_residual: 0.0,
    };
    for (si, seg) in path.iter().enumerate() {
        let cap = cfg.initial_step.min(seg.max_step());
        let mut h = cap;
        let mut t = 0.0;
        let mut easy = 0;
        let mut here = Member::new(seg.at(0.0));
        while t < 1.0 {
            let step = h.min(1.0 - t);
            let t1 = if 1.0 - t <= h { 1.0 } else { t + step };
            let vel = seg.velocity(t);
            let there = Member::new(seg.at(t1));
            let attempt = (|| {
                let mut predicted = Vec::with_capacity(pts.len());
                for z in &pts {
                    let dz = tangent(&here, &vel, z)?;
                    predicted.push(std::array::from_fn(|i| z[i] + dz[i] * step));
                }
                let (_, room) = min_separation(&predicted);
                let mut out = Vec::with_capacity(pts.len());
                let mut worst = 0.0f64;
                for (z, r) in predicted.iter().zip(&room) {
                    let c = correct(&there, z, cfg)?;
                    // a large first correction means the prediction may have jumped paths
                    if c.first_step > 0.25 * r {
                        return None;
                    }
                    worst = worst.max(c.residual);
                    out.push(renormalize(&c.z));
                }
                let (sep, _) = min_separation(&out);
                if sep <= cfg.proximity_guard || worst > 1e-8 {
                    return None;
                }
                Some((out, sep, worst))
            })();
            match attempt {
                Some((out, sep, worst)) => {
                    pts = out;
                    t = t1;
                    here = there;
                    diag.steps_taken += 1;
                    diag.min_pairwise_separation = diag.min_pairwise_separation.min(sep);
                    diag.max_residual = diag.max_residual.max(worst);
                    easy += 1;
                    if easy >= 4 {
                        h = (2.0 * h).min(cap);
                        easy = 0;
                    }
                }
                None => {
                    h *= 0.5;
                    easy = 0;
                    if h < cfg.min_step {
                        return Err(Error::PathHitsDiscriminant { segment: si, s: t });
                    }
                }
            }
        }
    }
    let end = pts.iter().map(|z| ProjPoint::new(*z).expect("nonzero")).collect();
    Ok((end, diag))
}

/// Labels `1..=9` of a labeled inflection set, checked to form a permutation.
fn label_vector(labels: &InflectionSet) -> Result<Vec<usize>> {
    let v: Vec<usize> = (0..labels.points.len()).map(|i| labels.label_of(i)).collect();
    let mut seen = [false; 9];
    for &l in &v {
        if !(1..=9).contains(&l) || seen[l - 1] {
            return Err(Error::LabelMatchingFailed(format!("labels {v:?} are not a permutation of 1..9")));
        }
        seen[l - 1] = true;
    }
    Ok(v)
}

fn check_start(f: &CubicForm, labels: &InflectionSet) -> Result<()> {
    if labels.points.len() != 9 || !labels.all_simple() {
        return Err(Error::BasepointNotSmooth);
    }
    let m = Member::new(*f);
    for p in &labels.points {
        let r = m.residual(p.point.normalized().coords());
        if r > 1e-8 {
            return Err(Error::LabelMatchingFailed(format!(
                "labeled point is not an inflection point of the basepoint (residual {r:.1e})"
            )));
        }
    }
    Ok(())
}

/// Carry a labeled inflection set along an open path; the end set keeps the labels.
pub fn transport_labels(path: &[Segment], labels: &InflectionSet, cfg: &TrackingConfig) -> Result<InflectionSet> {
    let first = path.first().ok_or_else(|| Error::Invalid("empty path".into()))?;
    check_start(&first.start(), labels)?;
    let lv = label_vector(labels)?;
    let (end, _) = track_path(path, &labels.projective_points(), cfg)?;
    let last = Member::new(path.last().unwrap().end());
    Ok(InflectionSet {
        points: end
            .into_iter()
            .map(|p| InflectionPoint {
                residual: last.residual(p.normalized().coords()),
                point: p.normalized(),
                multiplicity: 1,
            })
            .collect(),
        labels: Some(lv),
    })
}

/// Monodromy permutation of a closed loop on the given labels: label `l`
/// maps to the label of the point where the path starting at `l` ends.
pub fn track_loop(l: &Loop, labels: &InflectionSet, cfg: &TrackingConfig) -> Result<MonodromyResult> {
    l.validate()?;
    check_start(&l.basepoint, labels)?;
    let lv = label_vector(labels)?;
    let (end, diagnostics) = track_path(&l.segments, &labels.projective_points(), cfg)?;
    let end_set = InflectionSet {
        points: end
            .iter()
            .map(|p| InflectionPoint {
                point: p.normalized(),
                multiplicity: 1,
                residual: 0.0,
            })
            .collect(),
        labels: None,
    };
    let matched = locus::label_against(labels, &end_set)
        .map_err(|e| Error::LabelMatchingFailed(e.to_string()))?;
    let mut images = [0usize; 9];
    for (k, &target) in matched.iter().enumerate() {
        images[lv[k] - 1] = target;
    }
    let perm = Perm::from_images(images).map_err(|e| Error::LabelMatchingFailed(e.to_string()))?;
    Ok(MonodromyResult { perm, diagnostics })
}

/// Inflection points of a basepoint labeled by the standard table when it
/// is a member of the Hesse pencil, positionally otherwise.
pub fn basepoint_labels(f: &CubicForm) -> Result<InflectionSet> {
    let s = locus::inflection_points(f)?;
    if !s.all_simple() || s.points.len() != 9 {
        return Err(Error::BasepointNotSmooth);
    }
    match s.clone().with_q_labels() {
        Ok(q) => Ok(q),
        Err(_) => Ok(s.with_positional_labels()),
    }
}

/// Loop in the line `basepoint + s * direction`: straight out towards the
/// crossing `s = crossing`, once counter-clockwise around it at `radius`,
/// and straight back.
pub fn star_bypass(basepoint: &CubicForm, direction: &CubicForm, crossing: C64, radius: f64) -> Result<Loop> {
    if !(radius > 0.0) || crossing.norm() <= radius {
        return Err(Error::CrossingsTooClose(crossing.norm()));
    }
    let u = crossing / crossing.norm();
    let one = C64::new(1.0, 0.0);
    let near = CubicForm::combination(&[(one, basepoint), (crossing - u * radius, direction)]);
    let center = CubicForm::combination(&[(one, basepoint), (crossing, direction)]);
    let theta = (-u).arg() / TAU;
    Loop::new(
        *basepoint,
        vec![
            Segment::Line { from: *basepoint, to: near },
            Segment::Arc {
                center,
                direction: *direction,
                radius,
                turn_start: theta,
                turn_end: theta + 1.0,
            },
            Segment::Line { from: near, to: *basepoint },
        ],
    )
}

/// Bypass around the discriminant crossing of the segment `basepoint -> target`
/// nearest to `target`.
pub fn bypass_loop(basepoint: &CubicForm, target: &CubicForm, radius: f64) -> Result<Loop> {
    let direction = target.sub(basepoint);
    if direction.max_modulus() <= 1e-12 * basepoint.max_modulus() {
        return Err(Error::NoCrossingFound);
    }
    let pencil = Pencil::new(*basepoint, direction).map_err(|_| Error::NoCrossingFound)?;
    let crossings = strata::crossing_parameters(&pencil)?;
    let one = C64::new(1.0, 0.0);
    let (k, &(s, _)) = crossings
        .iter()
        .enumerate()
        .filter(|(_, (s, _))| s.re.is_finite())
        .min_by(|a, b| (a.1 .0 - one).norm().total_cmp(&(b.1 .0 - one).norm()))
        .ok_or(Error::NoCrossingFound)?;
    if (s - one).norm() > 0.25 {
        return Err(Error::NoCrossingFound);
    }
    for (j, (other, _)) in crossings.iter().enumerate() {
        let d = (*other - s).norm();
        if j != k && d < 3.0 * radius {
            return Err(Error::CrossingsTooClose(d));
        }
    }
    star_bypass(basepoint, &direction, s, radius)
}

/// Bypasses of one complex line through the basepoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineMonodromy {
    /// Crossing parameters in counter-clockwise order around the basepoint.
    pub crossings: Vec<C64>,
    pub perms: Vec<Perm>,
    /// Product of `perms` in that order (first factor applied first).
    pub product: Perm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalMonodromy {
    #[serde(skip)]
    pub group: PermGroup,
    pub order: usize,
    pub lines: Vec<LineMonodromy>,
    pub skipped_lines: usize,
}

/// Radius for a star bypass at `crossings[k]`: well inside the distance to
/// the other crossings and to the basepoint, and clear of the other rays.
fn bypass_radius(crossings: &[C64], k: usize) -> Result<f64> {
    let s = crossings[k];
    let mut room = s.norm();
    for (j, &o) in crossings.iter().enumerate() {
        if j != k {
            room = room.min((o - s).norm());
        }
    }
    let r = 0.3 * room;
    // the ray to s must miss every other crossing; passing nearby only slows tracking
    for (j, &o) in crossings.iter().enumerate() {
        if j == k {
            continue;
        }
        let along = (o * s.conj()).re / s.norm_sqr();
        let foot = s * along.clamp(0.0, 1.0);
        let clearance = (o - foot).norm();
        if clearance < 0.05 * r {
            return Err(Error::CrossingsTooClose(clearance));
        }
    }
    Ok(r)
}

fn line_monodromy(
    basepoint: &CubicForm,
    labels: &InflectionSet,
    direction: &CubicForm,
    cfg: &TrackingConfig,
) -> Result<LineMonodromy> {
    let pencil = Pencil::new(*basepoint, *direction)?;
    let mut crossings: Vec<C64> = Vec::new();
    for (s, m) in strata::crossing_parameters(&pencil)? {
        if m != 1 || !s.re.is_finite() {
            return Err(Error::Degenerate(format!("non-generic line: crossing {s} of multiplicity {m}")));
        }
        crossings.push(s);
    }
    crossings.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let mut perms = Vec::with_capacity(crossings.len());
    for k in 0..crossings.len() {
        let r = bypass_radius(&crossings, k)?;
        let l = star_bypass(basepoint, direction, crossings[k], r)?;
        perms.push(track_loop(&l, labels, cfg)?.perm);
    }
    let product = perms.iter().fold(Perm::identity(), |acc, p| acc * *p);
    Ok(LineMonodromy { crossings, perms, product })
}

/// Monodromy group generated by the bypasses of `line_count` random lines
/// through the basepoint. A line whose crossings are too crowded to bypass
/// safely is skipped with a warning and another is drawn, up to
/// `MAX_LINE_ATTEMPTS * line_count` lines in all.
pub fn generate_global_monodromy(
    basepoint: &CubicForm,
    line_count: usize,
    seed: u64,
    cfg: &TrackingConfig,
) -> Result<GlobalMonodromy> {
    let labels = basepoint_labels(basepoint)?;
    let base = basepoint.scale(C64::new(1.0 / basepoint.max_modulus(), 0.0));
    let mut rng = seeded(seed);
    let mut lines = Vec::new();
    let mut skipped = 0;
    for i in 0..MAX_LINE_ATTEMPTS * line_count {
        if lines.len() == line_count {
            break;
        }
        let direction = random_cubic(&mut rng);
        match line_monodromy(&base, &labels, &direction, cfg) {
            Ok(lm) => lines.push(lm),
            Err(e) => {
                log::warn!("line {i} skipped: {e}");
                skipped += 1;
            }
        }
    }
    if lines.is_empty() {
        return Err(Error::NoSuccessfulLoops);
    }
    let gens: Vec<Perm> = lines.iter().flat_map(|l| l.perms.iter().copied()).collect();
    let group = PermGroup::closure(&gens);
    Ok(GlobalMonodromy {
        order: group.order(),
        group,
        lines,
        skipped_lines: skipped,
    })
}

const MAX_LINE_ATTEMPTS: usize = 4;

/// Setup of a local monodromy experiment.
#[derive(Clone, Debug)]
pub struct LocalProbe {
    /// Smooth cubic near the stratum point, where the loops start.
    pub basepoint: CubicForm,
    /// Labeled inflection points of the basepoint.
    pub labels: InflectionSet,
    pub stratum_point: CubicForm,
    /// Crossings farther than `3 * radius` from the stratum point are ignored.
    pub radius: f64,
    pub probe_count: usize,
    pub seed: u64,
    /// Probe directions are drawn from this span; all of coefficient space when `None`.
    pub span: Option<Vec<CubicForm>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalMonodromy {
    #[serde(skip)]
    pub group: PermGroup,
    pub order: usize,
    pub orbits: Vec<Vec<usize>>,
    /// Every bypass permutation found, by probe.
    pub bypasses: Vec<Vec<Perm>>,
}

/// Local monodromy group at `probe.stratum_point`: bypasses around the nearby
/// crossings of random complex lines through the basepoint.
pub fn local_monodromy(probe: &LocalProbe, cfg: &TrackingConfig) -> Result<LocalMonodromy> {
    check_start(&probe.basepoint, &probe.labels)?;
    let mut rng = seeded(probe.seed);
    let mut bypasses = Vec::new();
    let mut gens = Vec::new();
    for i in 0..probe.probe_count {
        let raw = match &probe.span {
            Some(span) => {
                let terms: Vec<(C64, &CubicForm)> = span.iter().map(|f| (complex_normal(&mut rng), f)).collect();
                CubicForm::combination(&terms)
            }
            None => random_cubic(&mut rng),
        };
        let direction = raw.scale(C64::new(1.0 / raw.norm(), 0.0));
        match probe_line(probe, &direction, cfg) {
            Ok(perms) => {
                gens.extend(perms.iter().copied());
                bypasses.push(perms);
            }
            Err(e) => log::warn!("probe {i} skipped: {e}"),
        }
    }
    if gens.is_empty() {
        return Err(Error::NoSuccessfulLoops);
    }
    let group = PermGroup::closure(&gens);
    Ok(LocalMonodromy {
        order: group.order(),
        orbits: group.orbits(),
        group,
        bypasses,
    })
}

fn probe_line(probe: &LocalProbe, direction: &CubicForm, cfg: &TrackingConfig) -> Result<Vec<Perm>> {
    let pencil = Pencil::new(probe.basepoint, *direction)?;
    let all: Vec<C64> = strata::crossing_parameters(&pencil)?
        .into_iter()
        .map(|(s, _)| s)
        .filter(|s| s.re.is_finite())
        .collect();
    let one = C64::new(1.0, 0.0);
    let mut perms = Vec::new();
    for k in 0..all.len() {
        let member = CubicForm::combination(&[(one, &probe.basepoint), (all[k], direction)]);
        if member.sub(&probe.stratum_point).norm() > 3.0 * probe.radius {
            continue;
        }
        let r = bypass_radius(&all, k)?;
        let l = star_bypass(&probe.basepoint, direction, all[k], r)?;
        perms.push(track_loop(&l, &probe.labels, cfg)?.perm);
    }
    Ok(perms)
}

/// A random point of the coefficient ball of `radius` around `f`, for basepoints.
pub fn nearby<R: Rng + ?Sized>(f: &CubicForm, radius: f64, rng: &mut R) -> CubicForm {
    let d = random_cubic(rng);
    f.add(&d.scale(C64::new(radius / d.norm(), 0.0)))
}
