//! Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use hessemon_cli::config::Config;
use hessemon_cli::suites::{run_experiments, Suite};

struct Criterion {
    number: usize,
    title: &'static str,
    suite: Suite,
    budget: Duration,
}

fn criteria() -> Vec<Criterion> {
    let c = |number, title, suite, secs| Criterion {
        number,
        title,
        suite,
        budget: Duration::from_secs(secs),
    };
    vec![
        c(1, "Hesse group relations", Suite::Group, 1),
        c(2, "inflection points", Suite::Inflection, 10),
        c(3, "local monodromy", Suite::Local, 300),
        c(4, "global monodromy", Suite::Global, 900),
        c(5, "discriminant counts", Suite::Counts, 600),
        c(6, "invariants chain", Suite::Invariants, 1),
        c(7, "property suites", Suite::Properties, 600),
    ]
}

fn main() {
    let cfg = Config::default();
    let workers = cfg.worker_count();
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let reports = run_experiments(&c.suite.experiments(), &cfg, 1, workers);
        let elapsed = start.elapsed();
        let mut problems: Vec<String> = reports
            .iter()
            .flat_map(|r| {
                r.verdicts
                    .iter()
                    .filter(|v| !v.pass && !v.informational)
                    .map(move |v| format!("{}: {} ({})", r.name, v.check, v.detail))
            })
            .collect();
        if elapsed > c.budget {
            problems.push(format!("took {:.1} s, budget {} s", elapsed.as_secs_f64(), c.budget.as_secs()));
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {} ({:.2} s)", c.number, c.title, elapsed.as_secs_f64());
        for p in &problems {
            println!("    {p}");
        }
        for r in &reports {
            for v in r.verdicts.iter().filter(|v| v.informational) {
                println!("    note {}: {}: {}", r.name, v.check, v.detail);
            }
        }
        failed += usize::from(!problems.is_empty());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
