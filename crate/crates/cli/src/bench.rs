use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use mingc::gsemo::{self, default_iterations, expected_hitting_bound, theorem2_integral_ratio, theorem2_ratio, GsemoConfig};
use mingc::oracle::{exact_opt_capped, OracleMode};
use mingc::rng::derive_seed;
use mingc::zoo::generate::{random_connected_graph, random_set_cover, random_weighted_coverage};
use mingc::zoo::{cds_problem, set_cover_problem, weighted_coverage_problem};
use mingc::{CoverProblem, Subset};

use crate::manifest::RunManifest;
use crate::output::{emit, fixed, Table};
use crate::{CmdResult, Failure, Global};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Setcover,
    Cds,
    Wcoverage,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Ground-set sizes: sets for setcover/wcoverage, vertices for cds
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 10.0, value_parser = crate::positive)]
    pub safety: f64,
    /// Largest integer set cost (1 gives unit costs)
    #[arg(long, default_value_t = 1)]
    pub max_cost: u64,
}

struct Trial {
    feasible: bool,
    hit: u64,
    hit_bound: f64,
    ratio: Option<f64>,
    theorem_bound: Option<f64>,
    paper_bound: Option<f64>,
}

fn instance(args: &BenchArgs, size: usize, seed: u64) -> mingc::Result<CoverProblem> {
    match args.family {
        Family::Setcover => set_cover_problem(&random_set_cover(size, size, 0.3, (1, args.max_cost), seed)),
        Family::Cds => cds_problem(&random_connected_graph(size, 0.35, seed)),
        Family::Wcoverage => weighted_coverage_problem(&random_weighted_coverage(size, size, 0.3, (1, args.max_cost), seed)),
    }
}

/// Closed-form guarantees quoted for the concrete problems: `1 + ln max_v g(v)`
/// for unit-cost set cover and `2 + ln Δ` for CDS.
fn paper_bound(args: &BenchArgs, p: &CoverProblem) -> Option<f64> {
    let singles = p.utility().gains(&Subset::empty(p.n()));
    let max_single = singles.iter().cloned().fold(0.0, f64::max);
    match args.family {
        Family::Setcover if args.max_cost == 1 => Some(1.0 + max_single.ln()),
        // a lone vertex v merges deg(v)+1 components of G⟨∅⟩ and adds one to p
        Family::Cds => Some(2.0 + (max_single + 1.0).ln()),
        _ => None,
    }
}

fn trial(args: &BenchArgs, global: &Global, size: usize, k: usize) -> mingc::Result<Trial> {
    let seed = derive_seed(derive_seed(global.seed, size as u64), k as u64);
    let p = instance(args, size, seed)?;
    let t = default_iterations(&p, args.safety);
    let r = gsemo::run(&p, &GsemoConfig::new(t, derive_seed(seed, 1)));
    let mode = if p.is_integral() { OracleMode::Feasible } else { OracleMode::NearlyFeasible };
    let opt = exact_opt_capped(&p, mode, global.oracle_cap)?.opt_cost;
    let theorem_bound = if p.is_integral() {
        Some(theorem2_integral_ratio(&p, opt))
    } else {
        theorem2_ratio(&p, opt).ok()
    };
    Ok(Trial {
        feasible: r.best.is_some(),
        hit: r.stats.first_feasible.unwrap_or(t),
        hit_bound: expected_hitting_bound(p.beta(), p.n()),
        ratio: r.best.as_ref().filter(|_| opt > 0.0).map(|b| b.f2() / opt),
        theorem_bound,
        paper_bound: paper_bound(args, &p),
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
}

pub fn run(global: &Global, args: &BenchArgs) -> CmdResult {
    if args.trials == 0 || args.max_cost == 0 {
        return Err(Failure::Input("--trials and --max-cost must be positive".into()));
    }
    let min_size = if args.family == Family::Cds { 3 } else { 1 };
    if let Some(&s) = args.sizes.iter().find(|&&s| s < min_size) {
        return Err(Failure::Input(format!("size {s} is too small for this family")));
    }
    let mut header = vec![
        "family",
        "size",
        "trials",
        "feasible",
        "mean_hit",
        "p95_hit",
        "hit_bound",
        "mean_ratio",
        "max_ratio",
        "theorem_bound",
        "bound_violations",
        "paper_bound",
    ];
    if args.trials > 1 {
        header.extend(["sd_hit", "sd_ratio"]);
    }
    let mut table = Table::new("bench", &header);
    let family = format!("{:?}", args.family).to_lowercase();

    for &size in &args.sizes {
        let trials = (0..args.trials)
            .into_par_iter()
            .map(|k| trial(args, global, size, k))
            .collect::<mingc::Result<Vec<_>>>()?;
        let hits: Vec<f64> = trials.iter().map(|t| t.hit as f64).collect();
        let mut sorted: Vec<u64> = trials.iter().map(|t| t.hit).collect();
        sorted.sort_unstable();
        let p95 = sorted[((0.95 * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1];
        let ratios: Vec<f64> = trials.iter().filter_map(|t| t.ratio).collect();
        let bounds: Vec<f64> = trials.iter().filter_map(|t| t.theorem_bound).collect();
        let violations = trials
            .iter()
            .filter(|t| matches!((t.ratio, t.theorem_bound), (Some(r), Some(b)) if r > b * (1.0 + 1e-9)))
            .count();
        // the tightest per-instance closed-form bound in the row
        let paper = trials.iter().filter_map(|t| t.paper_bound).fold(None, |acc: Option<f64>, b| Some(acc.map_or(b, |a| a.min(b))));
        let opt_fixed = |xs: &[f64], f: fn(&[f64]) -> f64| if xs.is_empty() { String::new() } else { fixed(f(xs)) };
        let mut row = vec![
            family.clone(),
            size.to_string(),
            trials.len().to_string(),
            trials.iter().filter(|t| t.feasible).count().to_string(),
            fixed(mean(&hits)),
            p95.to_string(),
            fixed(mean(&trials.iter().map(|t| t.hit_bound).collect::<Vec<_>>())),
            opt_fixed(&ratios, mean),
            opt_fixed(&ratios, |xs| xs.iter().cloned().fold(f64::MIN, f64::max)),
            opt_fixed(&bounds, mean),
            violations.to_string(),
            paper.map(fixed).unwrap_or_default(),
        ];
        if args.trials > 1 {
            row.push(fixed(sd(&hits)));
            row.push(if ratios.len() > 1 { fixed(sd(&ratios)) } else { String::new() });
        }
        table.push(row);
    }

    emit(&[&table], global.format, global.out.as_deref())?;
    RunManifest::new(
        "bench",
        None,
        vec![global.seed],
        json!({
            "family": family,
            "sizes": args.sizes,
            "trials": args.trials,
            "safety": args.safety,
            "max_cost": args.max_cost,
            "oracle_cap": global.oracle_cap,
        }),
    )
    .write(global.out.as_deref())
}
