use std::fs;

use clap::Args;
use serde_json::json;

use mingc::verify::{run_suite, Suite, SuiteConfig};

use crate::manifest::RunManifest;
use crate::output::{emit, Table};
use crate::{CmdResult, Failure, Global};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// archive | delta | submodularity | cds-ordering | alpha-decay | bintrack
    #[arg(long)]
    pub suite: Suite,
    /// Largest instance size examined (suite-specific default)
    #[arg(long)]
    pub cap: Option<usize>,
    /// Seeded cases for randomized suites (suite-specific default)
    #[arg(long)]
    pub cases: Option<u64>,
}

pub fn run(global: &Global, args: &VerifyArgs) -> CmdResult {
    let defaults = SuiteConfig::defaults(args.suite);
    let cfg = SuiteConfig {
        cap: args.cap.unwrap_or(defaults.cap),
        cases: args.cases.unwrap_or(defaults.cases),
        seed: global.seed,
    };
    let report = run_suite(args.suite, &cfg);

    let mut summary = Table::new("verify", &["suite", "cap", "cases", "seed", "checks", "failures", "status"]);
    summary.push(vec![
        args.suite.to_string(),
        cfg.cap.to_string(),
        cfg.cases.to_string(),
        cfg.seed.to_string(),
        report.checks.to_string(),
        report.failures.len().to_string(),
        if report.passed() { "pass" } else { "fail" }.into(),
    ]);
    let mut failures = Table::new("failures", &["case", "detail"]);
    for f in &report.failures {
        failures.push(vec![f.case.clone(), f.detail.clone()]);
    }
    if report.passed() {
        emit(&[&summary], global.format, global.out.as_deref())?;
    } else {
        emit(&[&summary, &failures], global.format, global.out.as_deref())?;
    }
    if let Some(dir) = &global.out {
        for (i, f) in report.failures.iter().enumerate() {
            if let Some(text) = &f.instance {
                fs::write(dir.join(format!("counterexample-{i}.txt")), text)?;
            }
        }
    }
    RunManifest::new("verify", None, vec![cfg.seed], json!({ "suite": args.suite, "cap": cfg.cap, "cases": cfg.cases }))
        .write(global.out.as_deref())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("{} of {} checks failed in suite {}", report.failures.len(), report.checks, args.suite)))
    }
}
