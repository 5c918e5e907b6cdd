use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use mingc::greedy::{greedy_ratio_bound, greedy_solve};
use mingc::gsemo::{self, default_iterations, theorem2_integral_ratio, theorem2_ratio, GsemoConfig};
use mingc::oracle::{exact_opt_capped, OracleMode};
use mingc::{CoverProblem, Subset};

use crate::instance::{load, Kind};
use crate::manifest::RunManifest;
use crate::output::{emit, fixed, members, num, opt_num, Table};
use crate::{Algorithm, CmdResult, Failure, Global};

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long = "alg", value_enum, default_value_t = Algorithm::Gsemo)]
    pub algorithm: Algorithm,
    /// GSEMO iteration budget; defaults to ⌈safety·e·β(β+1)·n⌉
    #[arg(long)]
    pub iterations: Option<u64>,
    #[arg(long, default_value_t = 10.0, value_parser = crate::positive)]
    pub safety: f64,
    /// Reference optimum for the ratio columns
    #[arg(long, conflicts_with = "oracle")]
    pub opt: Option<f64>,
    /// Compute the reference optimum with the exact oracle
    #[arg(long)]
    pub oracle: bool,
}

struct Outcome {
    status: &'static str,
    set: Subset,
    iterations: u64,
}

pub fn run(global: &Global, args: &SolveArgs) -> CmdResult {
    let loaded = load(&args.instance, args.kind)?;
    let p = &loaded.problem;
    let outcome = match args.algorithm {
        Algorithm::Greedy => Outcome {
            status: "feasible",
            set: greedy_solve(p)?.set,
            iterations: 0,
        },
        Algorithm::Gsemo => {
            let t = args.iterations.unwrap_or_else(|| default_iterations(p, args.safety));
            if t == 0 {
                return Err(Failure::Input("--iterations must be positive".into()));
            }
            let r = gsemo::run(p, &GsemoConfig::new(t, global.seed));
            match &r.best {
                Some(best) => Outcome {
                    status: if p.is_feasible(&best.bits) { "feasible" } else { "nearly_feasible" },
                    set: best.bits.clone(),
                    iterations: t,
                },
                // report the member closest to feasibility instead
                None => Outcome {
                    status: "none",
                    set: r.min_f1_member().bits.clone(),
                    iterations: t,
                },
            }
        }
    };

    let opt = match (args.opt, args.oracle) {
        (Some(v), _) => Some(v),
        (None, true) => {
            let mode = match args.algorithm {
                Algorithm::Gsemo if !p.is_integral() => OracleMode::NearlyFeasible,
                _ => OracleMode::Feasible,
            };
            Some(exact_opt_capped(p, mode, global.oracle_cap)?.opt_cost)
        }
        (None, false) => None,
    };
    let cost = p.cost(&outcome.set);
    let bound = opt.and_then(|o| ratio_bound(p, args.algorithm, o));

    let mut table = Table::new(
        "solution",
        &[
            "instance", "kind", "algorithm", "seed", "iterations", "status", "cost", "members", "g", "g_total", "delta", "opt", "ratio",
            "bound", "within_bound",
        ],
    );
    let ratio = opt.filter(|&o| o > 0.0).map(|o| cost / o);
    table.push(vec![
        p.name().to_string(),
        args.kind.name().into(),
        format!("{:?}", args.algorithm).to_lowercase(),
        global.seed.to_string(),
        outcome.iterations.to_string(),
        outcome.status.into(),
        num(cost),
        members(&outcome.set),
        num(p.g(&outcome.set)),
        num(p.g_total()),
        num(p.delta()),
        opt_num(opt),
        ratio.map(fixed).unwrap_or_default(),
        bound.map(fixed).unwrap_or_default(),
        match (ratio, bound) {
            (Some(r), Some(b)) => (r <= b * (1.0 + 1e-9)).to_string(),
            _ => String::new(),
        },
    ]);
    emit(&[&table], global.format, global.out.as_deref())?;
    RunManifest::new(
        "solve",
        Some(&loaded),
        vec![global.seed],
        json!({
            "kind": args.kind.name(),
            "algorithm": format!("{:?}", args.algorithm).to_lowercase(),
            "iterations": outcome.iterations,
            "safety": args.safety,
            "opt": opt,
            "oracle_cap": global.oracle_cap,
        }),
    )
    .write(global.out.as_deref())
}

/// The applicable guarantee: the greedy bound, the integer-valued GSEMO bound,
/// or the general GSEMO bound (undefined when `opt ≤ δ`).
fn ratio_bound(p: &CoverProblem, alg: Algorithm, opt: f64) -> Option<f64> {
    if opt <= 0.0 {
        return None;
    }
    match alg {
        Algorithm::Greedy => Some(greedy_ratio_bound(p, opt)),
        Algorithm::Gsemo if p.is_integral() => Some(theorem2_integral_ratio(p, opt)),
        Algorithm::Gsemo => theorem2_ratio(p, opt).ok(),
    }
}
