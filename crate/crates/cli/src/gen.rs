use std::fs;

use clap::{Args, ValueEnum};

use mingc::zoo::format::{write_graph, write_set_system, write_weighted_coverage};
use mingc::zoo::generate::{random_connected_graph, random_set_cover, random_weighted_coverage};

use crate::instance::sha256_hex;
use crate::{CmdResult, Failure, Global};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Setcover,
    Graph,
    Wcoverage,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: GenFamily,
    /// Elements (setcover), vertices (graph) or items (wcoverage)
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Number of sets (setcover, wcoverage)
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    /// Edge probability (graph)
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Membership probability (setcover, wcoverage)
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Largest integer set cost
    #[arg(long, default_value_t = 1)]
    pub max_cost: u64,
}

pub fn run(global: &Global, args: &GenArgs) -> CmdResult {
    let prob = match args.family {
        GenFamily::Graph => args.p,
        _ => args.density,
    };
    if !(0.0..=1.0).contains(&prob) {
        return Err(Failure::Input(format!("probability {prob} is outside [0, 1]")));
    }
    if args.max_cost == 0 {
        return Err(Failure::Input("--max-cost must be at least 1".into()));
    }
    let text = match args.family {
        GenFamily::Setcover if args.m >= 1 => write_set_system(&random_set_cover(args.n, args.m, args.density, (1, args.max_cost), global.seed)),
        GenFamily::Graph => write_graph(&random_connected_graph(args.n, args.p, global.seed)),
        GenFamily::Wcoverage if args.m >= 1 && args.n >= 1 => {
            write_weighted_coverage(&random_weighted_coverage(args.n, args.m, args.density, (1, args.max_cost), global.seed))
        }
        _ => return Err(Failure::Input("--n and --m must be positive".into())),
    };
    let hash = sha256_hex(text.as_bytes());
    match &global.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, &text)?;
            println!("sha256 {hash}  {}", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("sha256 {hash}");
        }
    }
    Ok(())
}
