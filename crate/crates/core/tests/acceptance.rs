//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion (and
//! one indented line per check), then fails if any criterion failed.

use std::io::Write;
use std::time::Instant;

use periodic_interp::verify::{self, Criterion, VerifyOptions};

fn report(c: &Criterion, seconds: f64) {
    // written past the test harness capture so the lines always appear
    let mut out = std::io::stdout().lock();
    let status = if c.passed { "PASS" } else { "FAIL" };
    writeln!(out, "{status} criterion {}: {} ({seconds:.1}s)", c.id, c.title).unwrap();
    for check in &c.checks {
        writeln!(
            out,
            "    {} {} cases={} failures={} margin={:.3e} worst=[{}]",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.cases,
            check.failures,
            check.margin,
            check.worst
        )
        .unwrap();
    }
    out.flush().unwrap();
}

#[test]
fn acceptance_criteria() {
    let opts = VerifyOptions::default();
    type Run = Box<dyn Fn(&VerifyOptions) -> Criterion>;
    let runs: Vec<(&str, Run)> = vec![
        ("1", Box::new(verify::lattice_sum_bound)),
        ("2", Box::new(verify::kernel_bound)),
        ("3", Box::new(verify::periodization_bound)),
        ("4", Box::new(verify::fine_tuning_bound)),
        ("5", Box::new(verify::sandwich_suite)),
        ("6", Box::new(|o| verify::large_period_limit(o, true))),
        ("7", Box::new(verify::solver_sanity)),
        ("8", Box::new(verify::oracle_consistency)),
    ];
    // start on a fresh line after the harness's "test ... " prefix
    writeln!(std::io::stdout().lock()).unwrap();
    let mut failed = Vec::new();
    for (id, run) in &runs {
        let start = Instant::now();
        let c = run(&opts);
        report(&c, start.elapsed().as_secs_f64());
        if !c.passed {
            failed.push(*id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
