use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use mingc::bintrack::{BinSystem, EventKind, Phase, ViolationKind};
use mingc::gsemo::{default_iterations, run_observed, GsemoConfig, RunResult, TraceLevel};
use mingc::oracle::{exact_opt_capped, OracleMode};
use mingc::Subset;

use crate::instance::{load, Kind};
use crate::manifest::RunManifest;
use crate::output::{emit, num, Table};
use crate::{CmdResult, Failure, Global};

#[derive(Args, Debug)]
pub struct TraceArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub iterations: Option<u64>,
    #[arg(long, default_value_t = 10.0, value_parser = crate::positive)]
    pub safety: f64,
    /// Reference optimum; computed with the exact oracle when absent
    #[arg(long)]
    pub opt: Option<f64>,
}

const RUN_COLUMNS: [&str; 10] = [
    "iteration",
    "parent",
    "flips",
    "level",
    "f1",
    "f2",
    "inserted",
    "evicted",
    "archive_size",
    "min_level",
];
const BIN_COLUMNS: [&str; 7] = ["iteration", "kind", "bin", "f1", "f2", "tracker", "phase"];

fn kind_name(k: EventKind) -> &'static str {
    match k {
        EventKind::Inserted => "inserted",
        EventKind::Evicted => "evicted",
        EventKind::TrackerMoved => "tracker_moved",
        EventKind::PhaseEnteredTwo => "phase_entered_two",
        EventKind::RejectedNoAdvance => "rejected_no_advance",
    }
}

fn run_table(r: &RunResult) -> Table {
    let mut t = Table::new("run", &RUN_COLUMNS);
    for e in &r.trace.events {
        t.push(vec![
            e.iteration.to_string(),
            e.parent.to_string(),
            e.flips.to_string(),
            e.level.to_string(),
            num(e.f1),
            num(e.f2),
            e.inserted.to_string(),
            e.evicted.to_string(),
            e.archive_size.to_string(),
            e.min_level.to_string(),
        ]);
    }
    t
}

pub fn run(global: &Global, args: &TraceArgs) -> CmdResult {
    let loaded = load(&args.instance, args.kind)?;
    let p = &loaded.problem;
    let t = args.iterations.unwrap_or_else(|| default_iterations(p, args.safety));
    if t == 0 {
        return Err(Failure::Input("--iterations must be positive".into()));
    }
    let cfg = GsemoConfig::new(t, global.seed).traced(TraceLevel::Events);
    let mut bins = Table::new("bintrack", &BIN_COLUMNS);
    let mut summary = Table::new(
        "summary",
        &[
            "instance",
            "seed",
            "iterations",
            "beta",
            "opt",
            "boundary",
            "tracker",
            "hitting_time",
            "violations",
            "dominator_choices",
        ],
    );
    let mut fatal = None;

    let (result, opt) = if p.beta() == 0 {
        // already nearly feasible: nothing for the analyzer to track
        let r = run_observed(p, &cfg, &mut ());
        summary.push(vec![
            p.name().into(),
            global.seed.to_string(),
            t.to_string(),
            "0".into(),
            String::new(),
            String::new(),
            "0".into(),
            "0".into(),
            "0".into(),
            "0".into(),
        ]);
        (r, args.opt)
    } else {
        let opt = match args.opt {
            Some(v) => v,
            None => {
                let mode = if p.is_integral() { OracleMode::Feasible } else { OracleMode::NearlyFeasible };
                exact_opt_capped(p, mode, global.oracle_cap)?.opt_cost
            }
        };
        let mut sys = BinSystem::new(p, opt, &p.evaluate(Subset::empty(p.n())))?;
        let r = run_observed(p, &cfg, &mut sys);
        for e in sys.events() {
            bins.push(vec![
                e.iteration.to_string(),
                kind_name(e.kind).into(),
                e.bin.to_string(),
                num(e.f1),
                num(e.f2),
                e.tracker.to_string(),
                if e.phase == Phase::One { "1" } else { "2" }.into(),
            ]);
        }
        for v in sys.violations() {
            if v.kind == ViolationKind::TrackerIncreased {
                fatal = Some(format!("tracker increased at iteration {}: {}", v.iteration, v.detail));
            } else {
                eprintln!("warning: iteration {}: {:?} condition failed: {}", v.iteration, v.kind, v.detail);
            }
        }
        summary.push(vec![
            p.name().into(),
            global.seed.to_string(),
            t.to_string(),
            p.beta().to_string(),
            num(opt),
            sys.boundary().to_string(),
            sys.tracker().to_string(),
            sys.hitting_time().map(|h| h.to_string()).unwrap_or_default(),
            sys.violations().len().to_string(),
            sys.dominator_choices().len().to_string(),
        ]);
        (r, Some(opt))
    };

    emit(&[&run_table(&result), &bins, &summary], global.format, global.out.as_deref())?;
    RunManifest::new(
        "trace",
        Some(&loaded),
        vec![global.seed],
        json!({ "kind": args.kind.name(), "iterations": t, "safety": args.safety, "opt": opt, "oracle_cap": global.oracle_cap }),
    )
    .write(global.out.as_deref())?;
    match fatal {
        Some(msg) => Err(Failure::Invariant(msg)),
        None => Ok(()),
    }
}
