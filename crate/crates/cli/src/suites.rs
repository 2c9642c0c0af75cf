//! The verification experiments behind `paper-verify`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use hessemon::catalog;
use hessemon::locus::{self, InflectionSet};
use hessemon::numerology;
use hessemon::perm::{self, coset_action, g0, g1, g2, g3, g4, hes, hes1, PermGroup};
use hessemon::rng::{complex_normal, random_cubic, random_gl3, seeded};
use hessemon::strata::{self, StratumLabel};
use hessemon::track::{self, LocalProbe, Segment};
use hessemon::{CubicForm, Loop, Net, Pencil, Perm, C64};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::record::Verdict;

pub type Outcome = (Value, Vec<Verdict>);
type Run = fn(&Config, u64) -> hessemon::Result<Outcome>;

pub struct Experiment {
    pub name: &'static str,
    pub run: Run,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Group,
    Inflection,
    Local,
    Global,
    Strata,
    Counts,
    Invariants,
    Properties,
    All,
}

impl Suite {
    pub fn experiments(self) -> Vec<Experiment> {
        let e = |name, run| Experiment { name, run };
        match self {
            Suite::Group => vec![e("hesse-group", group_checks as Run)],
            Suite::Inflection => vec![
                e("fermat-inflections", fermat_inflections),
                e("singular-multiplicities", singular_multiplicities),
                e("random-smooth-inflections", random_smooth_inflections),
            ],
            Suite::Local => vec![
                e("hesse-loops", hesse_loops),
                e("b1-local", b1_local),
                e("b21-local", b21_local),
                e("b31-local", b31_local),
                e("cusp-bypass", cusp_bypass),
                e("b22-local", b22_local),
                e("b32-probe", b32_probe),
            ],
            Suite::Global => vec![e("global-fermat", global_fermat)],
            Suite::Strata => {
                let mut v = Suite::Inflection.experiments();
                v.push(e("named-strata", named_strata));
                v
            }
            Suite::Counts => vec![e("pencil-degrees", pencil_degrees), e("net-cusps", net_cusps)],
            Suite::Invariants => vec![e("invariant-chain", invariant_chain)],
            Suite::Properties => vec![
                e("euler-identity", euler_identity),
                e("null-loops", null_loops),
                e("reversal", reversal),
                e("projective-classification", projective_classification),
                e("projective-inflections", projective_inflections),
                e("orbit-stabilizer", orbit_stabilizer),
            ],
            Suite::All => [
                Suite::Group,
                Suite::Strata,
                Suite::Invariants,
                Suite::Local,
                Suite::Global,
                Suite::Counts,
                Suite::Properties,
            ]
            .into_iter()
            .flat_map(Suite::experiments)
            .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: &'static str,
    pub seed: u64,
    pub wall_time_s: f64,
    pub payload: Value,
    pub verdicts: Vec<Verdict>,
    /// Set when the experiment failed numerically before reaching a verdict.
    pub error: Option<String>,
}

impl ExperimentReport {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.pass || v.informational)
    }
}

/// Seed of experiment `index` within a run seeded by `seed`.
pub fn experiment_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64)
}

/// Runs the experiments on `workers` threads; reports come back in experiment order.
pub fn run_experiments(experiments: &[Experiment], cfg: &Config, seed: u64, workers: usize) -> Vec<ExperimentReport> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ExperimentReport>>> = Mutex::new(vec![None; experiments.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, experiments.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(ex) = experiments.get(i) else { break };
                let report = run_one(ex, cfg, experiment_seed(seed, i));
                slots.lock().expect("no worker panicked")[i] = Some(report);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|r| r.expect("every experiment ran"))
        .collect()
}

fn run_one(ex: &Experiment, cfg: &Config, seed: u64) -> ExperimentReport {
    let start = std::time::Instant::now();
    let result = (ex.run)(cfg, seed);
    let wall_time_s = start.elapsed().as_secs_f64();
    match result {
        Ok((payload, verdicts)) => ExperimentReport {
            name: ex.name,
            seed,
            wall_time_s,
            payload,
            verdicts,
            error: None,
        },
        Err(e) => {
            log::warn!("{} failed: {e}", ex.name);
            ExperimentReport {
                name: ex.name,
                seed,
                wall_time_s,
                payload: Value::Null,
                verdicts: vec![Verdict::new("completed", false, e.to_string())],
                error: Some(e.to_string()),
            }
        }
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_eq<T: PartialEq + std::fmt::Debug>(name: &str, got: T, want: T) -> Verdict {
    Verdict::new(name, got == want, format!("got {got:?}, expected {want:?}"))
}

// ---- group ----

fn group_checks(_: &Config, _: u64) -> hessemon::Result<Outcome> {
    let g = hes();
    let h1 = hes1();
    let gens = perm::named_generators();
    let (labels, reps): (Vec<usize>, Vec<Perm>) = perm::hes1_coset_words()
        .into_iter()
        .map(|(l, w)| Ok((l, perm::eval_word_functional(&gens, &perm::parse_word(w)?)?)))
        .collect::<hessemon::Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let cosets = coset_action(&h1, &PermGroup::closure(&[g1()]), &reps, &labels)?;
    let verdicts = vec![
        check_eq("order <g0,g1>", g.order(), 216),
        Verdict::new("2-transitive", g.is_k_transitive(2), ""),
        check_eq("order <g1,g2>", h1.order(), 24),
        check_eq("g2 = g0 g1 g0^-1", (g0() * g1() * g0().inverse()).to_string(), g2().to_string()),
        check_eq("g1 g2 g1 = g2 g1 g2", (g1() * g2() * g1()).to_string(), (g2() * g1() * g2()).to_string()),
        Verdict::new("g1^3 = 1", g1().pow(3).is_identity(), ""),
        check_eq("g2 g3 = g4^-1", (g2() * g3()).to_string(), g4().inverse().to_string()),
        Verdict::new(
            "stabilizer of 2 in <g1,g2> is <g1>",
            h1.stabilizer(2).elements() == PermGroup::closure(&[g1()]).elements(),
            "",
        ),
        Verdict::new(
            "coset action on {c2..c9} equals the point action",
            cosets.generators() == [g1(), g2()],
            format!("coset generators {:?}", cosets.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>()),
        ),
    ];
    Ok((json!({"order": g.order(), "stabilizer_order": h1.order()}), verdicts))
}

// ---- inflection ----

fn fermat_inflections(cfg: &Config, _: u64) -> hessemon::Result<Outcome> {
    let s = locus::inflection_points(&catalog::fermat())?;
    let pts = s.projective_points();
    let worst = catalog::q_table()
        .iter()
        .map(|q| pts.iter().map(|p| p.distance(q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let verdicts = vec![
        Verdict::new("nine simple points", s.all_simple() && s.points.len() == 9, format!("{:?}", s.multiplicities())),
        Verdict::new("match the table", worst < cfg.tolerance, format!("worst distance {worst:.2e}")),
    ];
    Ok((json!({"worst_distance": worst}), verdicts))
}

fn sorted_multiplicities(s: &InflectionSet) -> Vec<usize> {
    let mut v = s.multiplicities();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn singular_multiplicities(_: &Config, _: u64) -> hessemon::Result<Outcome> {
    let nodal = sorted_multiplicities(&locus::inflection_points(&catalog::nodal())?);
    let cusp = sorted_multiplicities(&locus::inflection_points(&catalog::cuspidal())?);
    let verdicts = vec![
        check_eq("nodal", nodal.clone(), vec![6, 1, 1, 1]),
        check_eq("cuspidal", cusp.clone(), vec![8, 1]),
    ];
    Ok((json!({"nodal": nodal, "cuspidal": cusp}), verdicts))
}

fn random_smooth_inflections(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut worst = 0.0f64;
    let mut bad = 0;
    for _ in 0..cfg.random_cubics {
        let f = random_cubic(&mut rng);
        let s = locus::inflection_points(&f)?;
        if !(s.all_simple() && s.points.len() == 9) {
            bad += 1;
        }
        worst = worst.max(s.max_residual());
    }
    let verdicts = vec![
        check_eq("all with nine simple points", bad, 0),
        Verdict::new("residuals", worst < 1e-8, format!("max residual {worst:.2e}")),
    ];
    Ok((json!({"cubics": cfg.random_cubics, "max_residual": worst}), verdicts))
}

// ---- strata ----

const NAMED_STRATA: [(&str, StratumLabel); 9] = [
    ("fermat", StratumLabel::Smooth),
    ("triangle", StratumLabel::B31),
    ("nodal", StratumLabel::B1),
    ("cuspidal", StratumLabel::B22),
    ("conic_line", StratumLabel::B21),
    ("conic_tangent", StratumLabel::B32),
    ("concurrent", StratumLabel::B4),
    ("double_line", StratumLabel::B5),
    ("triple_line", StratumLabel::B7),
];

fn named_strata(_: &Config, _: u64) -> hessemon::Result<Outcome> {
    let mut verdicts = Vec::new();
    let mut payload = serde_json::Map::new();
    for (name, want) in NAMED_STRATA {
        let f = catalog::by_name(name).expect("catalog name");
        let got = strata::stratum(&f)?;
        payload.insert(name.to_string(), json!(got));
        verdicts.push(check_eq(name, got, want));
    }
    Ok((Value::Object(payload), verdicts))
}

// ---- local ----

fn diagnostics_ok(cfg: &Config, r: &hessemon::MonodromyResult) -> bool {
    r.diagnostics.max_residual < 1e-8 && r.diagnostics.min_pairwise_separation > cfg.tracking.proximity_guard
}

fn hesse_loops(cfg: &Config, _: u64) -> hessemon::Result<Outcome> {
    let want = [g2(), g3(), g4()];
    let mut verdicts = Vec::new();
    let mut perms = Vec::new();
    for (axis, w) in want.iter().enumerate() {
        let l = catalog::pi1_loop(axis, cfg.delta);
        let labels = track::basepoint_labels(&l.basepoint)?;
        let r = track::track_loop(&l, &labels, &cfg.tracking)?;
        let back = track::track_loop(&l.reversed(), &labels, &cfg.tracking)?;
        let name = format!("c{}", axis + 1);
        verdicts.push(check_eq(&name, r.perm.to_string(), w.to_string()));
        verdicts.push(check_eq(&format!("{name} reversed"), back.perm, r.perm.inverse()));
        verdicts.push(Verdict::new(
            format!("{name} diagnostics"),
            diagnostics_ok(cfg, &r),
            format!("{:?}", r.diagnostics),
        ));
        perms.push(json!({"loop": name, "perm": r.perm, "diagnostics": r.diagnostics}));
    }
    Ok((json!(perms), verdicts))
}

fn pi1_axes() -> Vec<CubicForm> {
    [(3, 0), (0, 3), (0, 0)]
        .iter()
        .map(|&(i, j)| CubicForm::from_real_terms(&[(i, j, 1.0)]))
        .collect()
}

/// Labels at the member `(a, b, c)` carried from the member `(d, d, d)` along a straight path.
fn transported(cfg: &Config, to: [f64; 3]) -> hessemon::Result<(CubicForm, InflectionSet)> {
    let d = cfg.delta;
    let from = catalog::pi1_member(c(d), c(d), c(d));
    let target = catalog::pi1_member(c(to[0]), c(to[1]), c(to[2]));
    let labels = track::basepoint_labels(&from)?;
    let moved = track::transport_labels(&[Segment::Line { from, to: target }], &labels, &cfg.tracking)?;
    Ok((target, moved))
}

fn local_outcome(r: &track::LocalMonodromy, order: usize, orbits: Vec<Vec<usize>>) -> Outcome {
    let payload = json!({"order": r.order, "orbits": r.orbits, "bypasses": r.bypasses});
    let verdicts = vec![check_eq("order", r.order, order), check_eq("orbits", r.orbits.clone(), orbits)];
    (payload, verdicts)
}

fn pi1_probe(cfg: &Config, seed: u64, basepoint: [f64; 3], stratum: [f64; 3], radius: f64) -> hessemon::Result<track::LocalMonodromy> {
    let (basepoint, labels) = transported(cfg, basepoint)?;
    let probe = LocalProbe {
        basepoint,
        labels,
        stratum_point: catalog::pi1_member(c(stratum[0]), c(stratum[1]), c(stratum[2])),
        radius,
        probe_count: cfg.local_probes,
        seed,
        span: Some(pi1_axes()),
    };
    track::local_monodromy(&probe, &cfg.tracking)
}

fn triples() -> Vec<Vec<usize>> {
    vec![vec![1, 4, 7], vec![2, 5, 8], vec![3, 6, 9]]
}

fn b1_local(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let e = cfg.epsilon();
    let r = pi1_probe(cfg, seed, [e / 5.0, e, e], [0.0, e, e], e / 5.0)?;
    let (payload, mut verdicts) = local_outcome(&r, 3, vec![vec![1], vec![2, 5, 8], vec![3, 6, 9], vec![4], vec![7]]);
    let types: Vec<Vec<usize>> = r.group.elements().iter().filter(|p| !p.is_identity()).map(|p| p.cycle_type()).collect();
    verdicts.push(Verdict::new(
        "cycle type (3,3,1,1,1)",
        !types.is_empty() && types.iter().all(|t| *t == [3, 3, 1, 1, 1]),
        format!("{types:?}"),
    ));
    Ok((payload, verdicts))
}

fn b21_local(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let e = cfg.epsilon();
    let r = pi1_probe(cfg, seed, [e / 5.0, e / 5.0, e], [0.0, 0.0, e], e / 5.0)?;
    Ok(local_outcome(&r, 9, triples()))
}

fn b31_local(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let d = cfg.delta;
    let r = pi1_probe(cfg, seed, [d, d, d], [0.0, 0.0, 0.0], d)?;
    Ok(local_outcome(&r, 9, triples()))
}

fn cusp_bypass(cfg: &Config, _: u64) -> hessemon::Result<Outcome> {
    let l = catalog::cusp_loop(cfg.delta);
    let labels = track::basepoint_labels(&l.basepoint)?;
    let r = track::track_loop(&l, &labels, &cfg.tracking)?;
    let verdicts = vec![
        check_eq("cycle type", r.perm.cycle_type(), vec![6, 2, 1]),
        Verdict::new("diagnostics", diagnostics_ok(cfg, &r), format!("{:?}", r.diagnostics)),
    ];
    Ok((json!({"perm": r.perm, "diagnostics": r.diagnostics}), verdicts))
}

fn b22_local(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let basepoint = catalog::cusp_family(c(cfg.delta));
    let probe = LocalProbe {
        labels: track::basepoint_labels(&basepoint)?,
        basepoint,
        stratum_point: catalog::cuspidal(),
        radius: cfg.delta,
        probe_count: cfg.local_probes,
        seed,
        span: None,
    };
    let r = track::local_monodromy(&probe, &cfg.tracking)?;
    let sigma = perm::conjugate_in_s9(&r.group, &hes1());
    let mut sizes: Vec<usize> = r.orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    let verdicts = vec![
        check_eq("order", r.order, 24),
        Verdict::new("conjugate to <g1,g2>", sigma.is_some(), format!("{:?}", sigma.map(|s| s.to_string()))),
        check_eq("orbit sizes", sizes, vec![1, 8]),
    ];
    Ok((json!({"order": r.order, "orbits": r.orbits, "relabeling": sigma}), verdicts))
}

fn b32_probe(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let stratum_point = catalog::conic_tangent();
    let basepoint = track::nearby(&stratum_point, cfg.delta, &mut rng);
    let probe = LocalProbe {
        labels: track::basepoint_labels(&basepoint)?,
        basepoint,
        stratum_point,
        radius: cfg.delta,
        probe_count: cfg.local_probes,
        seed,
        span: None,
    };
    let r = track::local_monodromy(&probe, &cfg.tracking)?;
    let verdicts = vec![Verdict::info("generated order", format!("{} (whole group has 216)", r.order))];
    Ok((json!({"order": r.order, "orbits": r.orbits}), verdicts))
}

// ---- global ----

fn global_fermat(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let r = track::generate_global_monodromy(&catalog::fermat(), cfg.global_lines, seed, &cfg.tracking)?;
    let sigma = perm::conjugate_in_s9(&r.group, &hes());
    let products: Vec<bool> = r.lines.iter().map(|l| l.product.is_identity()).collect();
    let verdicts = vec![
        Verdict::new("at least two lines", r.lines.len() >= 2, format!("{} tracked, {} skipped", r.lines.len(), r.skipped_lines)),
        check_eq("order", r.order, 216),
        Verdict::new("conjugate to <g0,g1>", sigma.is_some(), format!("{:?}", sigma.map(|s| s.to_string()))),
        Verdict::new("line products are trivial", products.iter().all(|&b| b), format!("{products:?}")),
    ];
    Ok((serde_json::to_value(&r).expect("serializable"), verdicts))
}

// ---- counts ----

fn pencil_degrees(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut totals = Vec::new();
    let mut labels_ok = true;
    for _ in 0..cfg.random_pencils {
        let p = Pencil::new(random_cubic(&mut rng), random_cubic(&mut rng))?;
        let x = strata::pencil_crossings(&p)?;
        totals.push(x.total_multiplicity());
        labels_ok &= x.crossings.iter().all(|k| k.label == StratumLabel::B1 && k.multiplicity == 1);
    }
    let verdicts = vec![
        Verdict::new("degree 12", totals.iter().all(|&t| t == 12), format!("{totals:?}")),
        Verdict::new("simple nodal members", labels_ok, ""),
    ];
    Ok((json!({"totals": totals}), verdicts))
}

fn net_cusps(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let n = Net::new(random_cubic(&mut rng), random_cubic(&mut rng), random_cubic(&mut rng))?;
    let r = strata::net_cusp_members(&n, cfg.cusp_starts, seed)?;
    let worst = r.members.iter().flat_map(|m| m.residuals).fold(0.0, f64::max);
    let verdicts = vec![
        check_eq("cuspidal members", r.members.len(), strata::GENERIC_CUSP_COUNT),
        Verdict::new("stable under doubled starts", true, "checked during the search"),
        Verdict::new("residuals", worst < 1e-8, format!("{worst:.2e}")),
    ];
    Ok((json!({"count": r.members.len(), "generic": r.generic, "max_residual": worst}), verdicts))
}

// ---- invariants ----

fn invariant_chain(_: &Config, _: u64) -> hessemon::Result<Outcome> {
    let genus = numerology::plane_curve_genus(18, 84, 42)?;
    let genus_r = numerology::hurwitz_double_cover_genus(10, 24)?;
    let eulers: Vec<i64> = (0..=7)
        .map(|n2| numerology::covering_euler(21 - 3 * n2, n2, 24))
        .collect::<hessemon::Result<_>>()?;
    let chi = numerology::noether_chi(18, 90)?;
    let verdicts = vec![
        check_eq("genus of (18, 84, 42)", genus, 10),
        check_eq("g(R) from (10, 24)", genus_r, 31),
        Verdict::new("covering Euler number", eulers.iter().all(|&e| e == 90), format!("{eulers:?}")),
        check_eq("chi(18, 90)", chi, 9),
    ];
    Ok((json!({"genus": genus, "genus_r": genus_r, "euler": eulers, "chi": chi}), verdicts))
}

// ---- properties ----

fn euler_identity(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.property_cases {
        let f = random_cubic(&mut rng);
        let z = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
        let g = f.grad(&z);
        let lhs: C64 = (0..3).map(|i| z[i] * g[i]).sum();
        let scale = f.max_modulus() * z.iter().map(|v| v.norm()).fold(0.0, f64::max).powi(3);
        worst = worst.max((lhs - f.eval(&z) * 3.0).norm() / scale);
    }
    Ok((json!({"worst": worst}), vec![Verdict::new("z . grad F = 3F", worst < 1e-10, format!("{worst:.2e}"))]))
}

fn null_loops(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut trivial = 0;
    for _ in 0..cfg.property_cases {
        let f = random_cubic(&mut rng);
        let d = random_cubic(&mut rng);
        let r = 1e-3 * rng.random_range(0.5..2.0);
        let l = Loop::new(
            f,
            vec![Segment::Arc {
                center: f.sub(&d.scale(c(r))),
                direction: d,
                radius: r,
                turn_start: 0.0,
                turn_end: 1.0,
            }],
        )?;
        let res = track::track_loop(&l, &track::basepoint_labels(&f)?, &cfg.tracking)?;
        if res.perm.is_identity() {
            trivial += 1;
        }
    }
    Ok((json!({"trivial": trivial}), vec![check_eq("identity", trivial, cfg.property_cases)]))
}

fn reversal(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut agree = 0;
    for _ in 0..cfg.property_cases {
        let f = random_cubic(&mut rng);
        let dir = random_cubic(&mut rng);
        let xs: Vec<C64> = strata::crossing_parameters(&Pencil::new(f, dir)?)?.into_iter().map(|x| x.0).collect();
        let room = |k: usize| {
            xs.iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, o)| (o - xs[k]).norm())
                .fold(xs[k].norm(), f64::min)
        };
        let k = (0..xs.len()).max_by(|&a, &b| room(a).total_cmp(&room(b))).expect("crossings");
        let l = track::star_bypass(&f, &dir, xs[k], 0.2 * room(k))?;
        let labels = track::basepoint_labels(&f)?;
        let fwd = track::track_loop(&l, &labels, &cfg.tracking)?;
        let back = track::track_loop(&l.reversed(), &labels, &cfg.tracking)?;
        if back.perm == fwd.perm.inverse() && !fwd.perm.is_identity() {
            agree += 1;
        }
    }
    Ok((json!({"agree": agree}), vec![check_eq("reversed loop gives the inverse", agree, cfg.property_cases)]))
}

fn projective_classification(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut mismatches = Vec::new();
    for _ in 0..cfg.property_cases {
        let m = random_gl3(&mut rng);
        for (name, want) in NAMED_STRATA {
            let f = catalog::by_name(name).expect("catalog name");
            let got = strata::stratum(&f.compose(&m))?;
            if got != want {
                mismatches.push(format!("{name}: {got}"));
            }
        }
    }
    let v = Verdict::new("classification is invariant", mismatches.is_empty(), mismatches.join(", "));
    Ok((json!({"mismatches": mismatches}), vec![v]))
}

fn projective_inflections(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let mut worst = 0.0f64;
    let mut multiplicities_ok = true;
    for _ in 0..cfg.property_cases {
        let f = random_cubic(&mut rng);
        let m = random_gl3(&mut rng);
        let refs = locus::inflection_points(&f)?.projective_points();
        for q in locus::inflection_points(&f.compose(&m))?.projective_points() {
            let image = q.transform(&m).normalized();
            worst = worst.max(refs.iter().map(|r| r.distance(&image)).fold(f64::INFINITY, f64::min));
        }
        multiplicities_ok &= sorted_multiplicities(&locus::inflection_points(&catalog::nodal().compose(&m))?) == [6, 1, 1, 1];
        multiplicities_ok &= sorted_multiplicities(&locus::inflection_points(&catalog::cuspidal().compose(&m))?) == [8, 1];
    }
    let verdicts = vec![
        Verdict::new("points move with the frame", worst < cfg.tolerance, format!("{worst:.2e}")),
        Verdict::new("singular multiplicities are invariant", multiplicities_ok, ""),
    ];
    Ok((json!({"worst_distance": worst}), verdicts))
}

fn orbit_stabilizer(cfg: &Config, seed: u64) -> hessemon::Result<Outcome> {
    let mut rng = seeded(seed);
    let elems = hes().elements().to_vec();
    let mut failures = 0;
    for _ in 0..cfg.property_cases {
        let gens: Vec<Perm> = (0..rng.random_range(1..3usize)).map(|_| elems[rng.random_range(0..elems.len())]).collect();
        let g = PermGroup::closure(&gens);
        failures += (1..=9).filter(|&x| g.order() != g.orbit(x).len() * g.stabilizer(x).order()).count();
    }
    Ok((json!({"failures": failures}), vec![check_eq("|G| = |orbit| |stabilizer|", failures, 0)]))
}
