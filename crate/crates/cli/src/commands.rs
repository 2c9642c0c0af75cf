//! Subcommands. Each produces a JSON payload, a human-readable rendering and
//! possibly some verdicts; `run` turns those into output, records and an
//! exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hessemon::locus::{self, InflectionSet};
use hessemon::rng::{random_cubic, seeded};
use hessemon::{numerology, strata, track, CubicForm, Loop, Net, Pencil, Perm, PermGroup};
use serde_json::{json, Value};

use crate::config::Config;
use crate::record::{self, RunRecord, Verdict};
use crate::suites::{run_experiments, Suite};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hessemon", version, about = "Inflection points of plane cubics and their monodromy")]
pub struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Append a JSONL run record here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Point-comparison tolerance used by the checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Print the JSON payload instead of the text rendering.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabelMode {
    /// The standard table for Hesse-pencil members, positional otherwise.
    Auto,
    Q,
    Positional,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inflection points of a cubic.
    Inflect { cubic: PathBuf },
    /// Monodromy permutation of a loop.
    Monodromy {
        #[arg(name = "loop")]
        loop_file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        labels: LabelMode,
    },
    /// Group generated by permutations in cycle notation or by loop files.
    Group {
        #[arg(required = true)]
        items: Vec<String>,
    },
    /// Stratum of a cubic with its certificate.
    Classify { cubic: PathBuf },
    /// Discriminant crossings of the pencil `f0 + t f1`.
    Pencil { f0: PathBuf, f1: PathBuf },
    /// Cuspidal members of a net; a random net from the seed when no files are given.
    Cusps {
        files: Vec<PathBuf>,
        #[arg(long)]
        starts: Option<usize>,
    },
    /// Integer invariants of the dual curve, double cover and surface.
    Invariants {
        #[arg(long, default_value_t = 18)]
        degree: i64,
        #[arg(long, default_value_t = 84)]
        nodes: i64,
        #[arg(long, default_value_t = 42)]
        cusps: i64,
        #[arg(long, default_value_t = 24)]
        branch_points: i64,
        #[arg(long, default_value_t = 18)]
        k_squared: i64,
    },
    /// Run verification suites; exit 0 iff every check passes.
    PaperVerify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

pub struct Output {
    pub payload: Value,
    pub text: String,
    pub verdicts: Vec<Verdict>,
}

impl Output {
    fn plain(payload: Value, text: String) -> Self {
        Output {
            payload,
            text,
            verdicts: Vec::new(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn read_cubic(path: &Path) -> Result<CubicForm, CliError> {
    Ok(CubicForm::from_json(&read(path)?)?)
}

pub fn read_loop(path: &Path) -> Result<Loop, CliError> {
    Ok(Loop::from_json(&read(path)?)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn cycle_type_string(p: &Perm) -> String {
    p.cycle_type().iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

pub fn inflect(f: &CubicForm) -> Result<Output, CliError> {
    let s = locus::inflection_points(f)?;
    let text = s
        .points
        .iter()
        .map(|p| {
            let z = p.point.coords();
            format!(
                "m={} [{:.12}, {:.12}, {:.12}] residual {:.1e}",
                p.multiplicity,
                z[0],
                z[1],
                z[2],
                p.residual
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::plain(to_value(&s), text))
}

fn labels_for(f: &CubicForm, mode: LabelMode) -> Result<InflectionSet, CliError> {
    Ok(match mode {
        LabelMode::Auto => track::basepoint_labels(f)?,
        LabelMode::Q => locus::inflection_points(f)?.with_q_labels()?,
        LabelMode::Positional => locus::inflection_points(f)?.with_positional_labels(),
    })
}

pub fn monodromy(l: &Loop, mode: LabelMode, cfg: &Config) -> Result<Output, CliError> {
    let labels = labels_for(&l.basepoint, mode)?;
    let r = track::track_loop(l, &labels, &cfg.tracking)?;
    let cycle_type = cycle_type_string(&r.perm);
    let payload = json!({"perm": r.perm, "cycle_type": cycle_type, "diagnostics": r.diagnostics});
    let text = format!(
        "{}\ncycle type {cycle_type}\nsteps {}, min separation {:.3e}, max residual {:.1e}",
        r.perm, r.diagnostics.steps_taken, r.diagnostics.min_pairwise_separation, r.diagnostics.max_residual
    );
    Ok(Output::plain(payload, text))
}

/// Permutations from cycle-notation strings or, for anything that is not
/// one, from tracking the loop file of that name.
pub fn group_inputs(items: &[String], cfg: &Config) -> Result<Vec<Perm>, CliError> {
    if items.is_empty() {
        return Err(CliError::Usage("group needs at least one permutation or loop file".into()));
    }
    items
        .iter()
        .map(|it| {
            if it.trim_start().starts_with('(') {
                Ok(it.parse::<Perm>()?)
            } else {
                let l = read_loop(Path::new(it))?;
                let labels = track::basepoint_labels(&l.basepoint)?;
                Ok(track::track_loop(&l, &labels, &cfg.tracking)?.perm)
            }
        })
        .collect()
}

pub fn group(gens: &[Perm]) -> Output {
    let g = PermGroup::closure(gens);
    let transitivity = (1..=3).take_while(|&k| g.is_k_transitive(k)).last().unwrap_or(0);
    let stabilizers: Vec<usize> = (1..=9).map(|x| g.stabilizer(x).order()).collect();
    let payload = json!({
        "generators": gens,
        "order": g.order(),
        "orbits": g.orbits(),
        "transitivity": transitivity,
        "stabilizer_orders": stabilizers,
    });
    let text = format!(
        "order {}\norbits {:?}\n{transitivity}-transitive\nstabilizer orders {stabilizers:?}",
        g.order(),
        g.orbits()
    );
    Output::plain(payload, text)
}

pub fn classify(f: &CubicForm) -> Result<Output, CliError> {
    let (label, cert) = strata::classify(f)?;
    let payload = json!({"stratum": label, "certificate": cert});
    Ok(Output::plain(payload, label.to_string()))
}

pub fn pencil(p: &Pencil) -> Result<Output, CliError> {
    let x = strata::pencil_crossings(p)?;
    let mut lines: Vec<String> = x
        .crossings
        .iter()
        .map(|c| format!("t = [{:.10}, {:.10}] m={} {}", c.t[0], c.t[1], c.multiplicity, c.label))
        .collect();
    lines.push(format!("total multiplicity {}", x.total_multiplicity()));
    Ok(Output::plain(to_value(&x), lines.join("\n")))
}

pub fn cusps(n: &Net, starts: usize, seed: u64) -> Result<Output, CliError> {
    let r = strata::net_cusp_members(n, starts, seed)?;
    let text = format!(
        "{} cuspidal members ({})",
        r.members.len(),
        if r.generic { "generic count" } else { "not the generic count" }
    );
    Ok(Output::plain(to_value(&r), text))
}

pub fn invariants(degree: i64, nodes: i64, cusps: i64, branch_points: i64, k_squared: i64) -> Result<Output, CliError> {
    let curve = numerology::curve_numerics(degree, nodes, cusps)?;
    let genus_r = numerology::hurwitz_double_cover_genus(curve.genus, branch_points)?;
    let eulers: Vec<(i64, i64, i64)> = (0..=(degree + 3) / 3)
        .filter_map(|n2| {
            let n1 = degree + 3 - 3 * n2;
            (n1 >= 0).then_some((n1, n2))
        })
        .map(|(n1, n2)| Ok((n1, n2, numerology::covering_euler(n1, n2, branch_points)?)))
        .collect::<hessemon::Result<_>>()?;
    let euler = eulers.first().map(|e| e.2).unwrap_or_default();
    let chi = numerology::noether_chi(k_squared, euler)?;
    let payload = json!({
        "curve": curve,
        "genus_r": genus_r,
        "covering_euler": eulers.iter().map(|&(n1, n2, e)| json!({"n1": n1, "n2": n2, "euler": e})).collect::<Vec<_>>(),
        "chi": chi,
    });
    let text = format!(
        "genus {}\ng(R) {genus_r}\ne(X) {}\nchi {chi}",
        curve.genus,
        eulers.iter().map(|e| e.2.to_string()).collect::<Vec<_>>().join(" ")
    );
    Ok(Output::plain(payload, text))
}

fn net_from(files: &[PathBuf], seed: u64) -> Result<Net, CliError> {
    match files {
        [] => {
            let mut rng = seeded(seed);
            Ok(Net::new(random_cubic(&mut rng), random_cubic(&mut rng), random_cubic(&mut rng))?)
        }
        [a, b, c] => Ok(Net::new(read_cubic(a)?, read_cubic(b)?, read_cubic(c)?)?),
        _ => Err(CliError::Usage("cusps takes zero or three cubic files".into())),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Inflect { .. } => "inflect",
        Command::Monodromy { .. } => "monodromy",
        Command::Group { .. } => "group",
        Command::Classify { .. } => "classify",
        Command::Pencil { .. } => "pencil",
        Command::Cusps { .. } => "cusps",
        Command::Invariants { .. } => "invariants",
        Command::PaperVerify { .. } => "paper-verify",
    }
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = Config::load(cli.config.as_deref())?.with_tolerance(cli.tol)?;
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(CliError::Usage("no subcommand given (try --help)".into()));
    };
    if let Command::PaperVerify { suite } = command {
        return paper_verify(suite, &cfg, cli.seed, cli.out.as_deref());
    }
    let start = Instant::now();
    let name = command_name(&command);
    let out = match &command {
        Command::Inflect { cubic } => inflect(&read_cubic(cubic)?)?,
        Command::Monodromy { loop_file, labels } => monodromy(&read_loop(loop_file)?, *labels, &cfg)?,
        Command::Group { items } => group(&group_inputs(items, &cfg)?),
        Command::Classify { cubic } => classify(&read_cubic(cubic)?)?,
        Command::Pencil { f0, f1 } => pencil(&Pencil::new(read_cubic(f0)?, read_cubic(f1)?)?)?,
        Command::Cusps { files, starts } => cusps(&net_from(files, cli.seed)?, starts.unwrap_or(cfg.cusp_starts), cli.seed)?,
        Command::Invariants {
            degree,
            nodes,
            cusps,
            branch_points,
            k_squared,
        } => invariants(*degree, *nodes, *cusps, *branch_points, *k_squared)?,
        Command::PaperVerify { .. } => unreachable!("handled above"),
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out.payload).expect("payload serializes"));
    } else {
        println!("{}", out.text);
    }
    if let Some(path) = &cli.out {
        let rec = RunRecord::new(name, &cfg, cli.seed, start.elapsed().as_secs_f64(), out.payload, out.verdicts);
        record::append(path, &[rec])?;
    }
    Ok(0)
}

/// Runs a suite, prints one line per experiment and writes one record each.
pub fn paper_verify(suite: Suite, cfg: &Config, seed: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let experiments = suite.experiments();
    let reports = run_experiments(&experiments, cfg, seed, cfg.worker_count());
    let mut records = Vec::new();
    for r in &reports {
        let status = if r.pass() { "PASS" } else { "FAIL" };
        println!("{status} {} ({:.1} s)", r.name, r.wall_time_s);
        for v in &r.verdicts {
            let mark = match (v.informational, v.pass) {
                (true, _) => "info",
                (false, true) => "ok",
                (false, false) => "FAILED",
            };
            println!("    {mark:6} {}: {}", v.check, v.detail);
        }
        records.push(RunRecord::new(
            &format!("paper-verify/{}", r.name),
            cfg,
            r.seed,
            r.wall_time_s,
            r.payload.clone(),
            r.verdicts.clone(),
        ));
    }
    if let Some(path) = out {
        record::append(path, &records)?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.name).collect();
    println!("{} of {} experiments passed", reports.len() - failed.len(), reports.len());
    Ok(if reports.iter().any(|r| r.error.is_some()) {
        3
    } else if failed.is_empty() {
        0
    } else {
        4
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hessemon::catalog;
    use hessemon::perm::{g0, g1};

    #[test]
    fn group_of_the_generators() {
        let out = group(&[g0(), g1()]);
        assert_eq!(out.payload["order"], 216);
        assert_eq!(out.payload["transitivity"], 2);
    }

    #[test]
    fn empty_group_input_is_a_usage_error() {
        let e = group_inputs(&[], &Config::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn invariants_default_chain() {
        let out = invariants(18, 84, 42, 24, 18).unwrap();
        assert_eq!(out.payload["curve"]["genus"], 10);
        assert_eq!(out.payload["genus_r"], 31);
        assert_eq!(out.payload["chi"], 9);
        let eulers = out.payload["covering_euler"].as_array().unwrap();
        assert_eq!(eulers.len(), 8);
        assert!(eulers.iter().all(|e| e["euler"] == 90));
    }

    #[test]
    fn classify_payload_names_the_stratum() {
        assert_eq!(classify(&catalog::triangle()).unwrap().payload["stratum"], "B31");
        assert_eq!(classify(&catalog::triple_line()).unwrap().text, "B7");
    }

    #[test]
    fn cusp_circle_cycle_type() {
        let out = monodromy(&catalog::cusp_loop(0.05), LabelMode::Auto, &Config::default()).unwrap();
        assert_eq!(out.payload["cycle_type"], "6,2,1");
    }
}
