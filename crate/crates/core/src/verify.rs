//! Self-check suites: exhaustive or seeded property sweeps over the library's
//! own invariants. Each suite returns a report listing every failure, with
//! the offending instance serialized when there is one.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::archive::ParetoArchive;
use crate::bintrack::BinSystem;
use crate::greedy::{check_alpha_decay, greedy_ratio_bound, greedy_solve};
use crate::gsemo::{default_iterations, run_observed, GsemoConfig};
use crate::individual::Fitness;
use crate::oracle::{exact_opt, OracleMode};
use crate::problem::{approx_le, estimate_delta, CoverProblem, REL_TOL};
use crate::rng::{derive_seed, RngStream};
use crate::subset::Subset;
use crate::zoo::format::{write_graph, write_set_system, write_weighted_coverage};
use crate::zoo::generate::{random_connected_graph, random_set_cover, random_weighted_coverage};
use crate::zoo::{
    all_connected_graphs, cds_problem, connected_ordering, count_incident_components, set_cover_problem, weighted_coverage_problem,
    GraphInstance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Archive,
    Delta,
    Submodularity,
    CdsOrdering,
    AlphaDecay,
    Bintrack,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Archive,
        Suite::Delta,
        Suite::Submodularity,
        Suite::CdsOrdering,
        Suite::AlphaDecay,
        Suite::Bintrack,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Archive => "archive",
            Suite::Delta => "delta",
            Suite::Submodularity => "submodularity",
            Suite::CdsOrdering => "cds-ordering",
            Suite::AlphaDecay => "alpha-decay",
            Suite::Bintrack => "bintrack",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    /// Largest ground set (or graph) size examined.
    pub cap: usize,
    /// Number of seeded cases for randomized suites.
    pub cases: u64,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn defaults(suite: Suite) -> Self {
        let (cap, cases) = match suite {
            Suite::Archive => (40, 100),
            Suite::Delta => (10, 100),
            Suite::Submodularity | Suite::CdsOrdering => (6, 0),
            Suite::AlphaDecay => (8, 200),
            Suite::Bintrack => (8, 100),
        };
        SuiteConfig { cap, cases, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
    /// The instance in its text format, when the check had one.
    #[serde(skip)]
    pub instance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> (String, String, Option<String>)) {
        self.checks += 1;
        if !ok {
            let (case, detail, instance) = case();
            self.failures.push(Failure { case, detail, instance });
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    match suite {
        Suite::Archive => archive_suite(cfg),
        Suite::Delta => delta_suite(cfg),
        Suite::Submodularity => submodularity_suite(cfg),
        Suite::CdsOrdering => cds_ordering_suite(cfg),
        Suite::AlphaDecay => alpha_decay_suite(cfg),
        Suite::Bintrack => bintrack_suite(cfg),
    }
}

/// Insertions per stream in the archive suite.
pub const ARCHIVE_STREAM_LEN: usize = 10_000;

/// Feeds one seeded stream of random `(level, cost)` pairs with levels in
/// `0..=beta` to an archive, checking its invariants after every insertion.
pub fn archive_stream(seed: u64, beta: u64, len: usize) -> Result<(), String> {
    let mut rng = RngStream::new(seed);
    let mut archive: ParetoArchive<Fitness> = ParetoArchive::new();
    for i in 0..len {
        let f = Fitness::pair(rng.range_inclusive(0, beta), rng.range_inclusive(0, 100) as f64);
        archive.insert(f);
        archive.check_invariants(beta).map_err(|e| format!("after insertion {i}: {e}"))?;
    }
    Ok(())
}

fn archive_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Archive);
    for k in 0..cfg.cases {
        let seed = derive_seed(cfg.seed, k);
        let beta = 1 + seed % cfg.cap.max(1) as u64;
        let res = archive_stream(seed, beta, ARCHIVE_STREAM_LEN);
        r.check(res.is_ok(), || (format!("stream seed={seed} beta={beta}"), res.unwrap_err(), None));
    }
    r
}

/// A mixed corpus of small random instances, one per case index.
pub fn random_instance(index: u64, seed: u64, cap: usize) -> (CoverProblem, String) {
    let s = derive_seed(seed, index);
    let cap = cap.max(3);
    match index % 3 {
        0 => {
            let n = 3 + (s % (cap as u64 - 2)) as usize;
            let inst = random_set_cover(n + 2, n, 0.3, (1, 3), s);
            (set_cover_problem(&inst).unwrap(), write_set_system(&inst))
        }
        1 => {
            let n = 3 + (s % (cap.min(8) as u64 - 2)) as usize;
            let g = random_connected_graph(n, 0.4, s);
            (cds_problem(&g).unwrap(), write_graph(&g))
        }
        _ => {
            let n = 3 + (s % (cap as u64 - 2)) as usize;
            let inst = random_weighted_coverage(n + 1, n, 0.35, (1, 3), s);
            (weighted_coverage_problem(&inst).unwrap(), write_weighted_coverage(&inst))
        }
    }
}

/// Declared `δ` must not exceed the exact minimum positive gain.
fn delta_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Delta);
    let cap = cfg.cap.min(14);
    for k in 0..cfg.cases {
        let (p, text) = random_instance(k, cfg.seed, cap);
        let budget = p.n() << p.n().saturating_sub(1);
        let exact = estimate_delta(p.utility().as_ref(), budget.max(1), &mut RngStream::new(0));
        match exact {
            Ok(d) => r.check(approx_le(p.delta(), d), || (p.name().to_string(), format!("declared {} > exact {d}", p.delta()), Some(text))),
            // nothing positive: only possible when g(X) = 0
            Err(_) => r.check(p.g_total() == 0.0, || (p.name().to_string(), "no positive gain".into(), Some(text))),
        }
    }
    r
}

/// `q` over all subsets, indexed by bitmask.
fn q_table(g: &GraphInstance) -> Vec<i64> {
    let n = g.n();
    (0..1u64 << n)
        .map(|m| count_incident_components(g, &Subset::from_mask(n, m)) as i64)
        .collect()
}

/// Monotonicity, `g(V) = n − 2` and submodularity of `−q` on every connected
/// graph with up to `cap` vertices (3 ≤ n).
fn submodularity_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Submodularity);
    for n in 3..=cfg.cap.min(7) {
        for graph in all_connected_graphs(n) {
            let p = cds_problem(&graph).unwrap();
            let g: Vec<f64> = (0..1u64 << n).map(|m| p.g(&Subset::from_mask(n, m))).collect();
            let q = q_table(&graph);
            let full = (1usize << n) - 1;
            let edges = || (graph.name.clone(), String::new(), Some(write_graph(&graph)));
            r.check(g[full] == n as f64 - 2.0, || {
                let (c, _, i) = edges();
                (c, format!("g(V) = {}", g[full]), i)
            });
            for m in 0..=full {
                for u in (0..n).filter(|u| m & (1 << u) == 0) {
                    r.check(g[m | 1 << u] >= g[m], || {
                        let (c, _, i) = edges();
                        (c, format!("g decreases adding {u} to {m:#b}"), i)
                    });
                    // −q submodular ⇔ q(S+u) + q(S+v) ≤ q(S) + q(S+u+v)
                    for v in (u + 1..n).filter(|v| m & (1 << v) == 0) {
                        let ok = q[m | 1 << u] + q[m | 1 << v] <= q[m] + q[m | 1 << u | 1 << v];
                        r.check(ok, || {
                            let (c, _, i) = edges();
                            (c, format!("-q not submodular at S={m:#b}, u={u}, v={v}"), i)
                        });
                    }
                }
            }
        }
    }
    r
}

/// Along the connected ordering `v_1, …, v_k` of every optimal CDS `C*`, and
/// for every `C`, `Δ_{v_i} g(C*_{i−1} ∪ C) ≤ Δ_{v_i} g(C) + 1`.
fn cds_ordering_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::CdsOrdering);
    for n in 3..=cfg.cap.min(7) {
        for graph in all_connected_graphs(n) {
            let p = cds_problem(&graph).unwrap();
            let full = (1usize << n) - 1;
            let g: Vec<f64> = (0..=full).map(|m| p.g(&Subset::from_mask(n, m as u64))).collect();
            let feasible: Vec<usize> = (0..=full).filter(|&m| g[m] == g[full]).collect();
            let opt = feasible.iter().map(|m| m.count_ones()).min().unwrap();
            for &star in feasible.iter().filter(|m| m.count_ones() == opt) {
                let order = connected_ordering(&graph, &Subset::from_mask(n, star as u64)).unwrap();
                let mut prefix = 0usize;
                for &v in &order {
                    for c in 0..=full {
                        if c & (1 << v) != 0 {
                            continue;
                        }
                        let s = prefix | c;
                        let lhs = if s & (1 << v) != 0 { 0.0 } else { g[s | 1 << v] - g[s] };
                        let rhs = g[c | 1 << v] - g[c] + 1.0;
                        r.check(lhs <= rhs, || {
                            (
                                graph.name.clone(),
                                format!("C*={star:#b} v={v} C={c:#b}: {lhs} > {rhs}"),
                                Some(write_graph(&graph)),
                            )
                        });
                    }
                    prefix |= 1 << v;
                }
            }
        }
    }
    r
}

/// Greedy ratio bound and geometric `α` decay on unit-cost set cover and CDS
/// instances against the exact optimum.
fn alpha_decay_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::AlphaDecay);
    let cap = cfg.cap.max(3);
    for k in 0..cfg.cases {
        let s = derive_seed(cfg.seed, k);
        let (p, text) = if k % 2 == 0 {
            let n = 3 + (s % (cap as u64 - 2)) as usize;
            let inst = random_set_cover(n + 2, n, 0.3, (1, 1), s);
            (set_cover_problem(&inst).unwrap(), write_set_system(&inst))
        } else {
            let n = 3 + (s % (cap as u64 - 2)) as usize;
            let g = random_connected_graph(n, 0.4, s);
            (cds_problem(&g).unwrap(), write_graph(&g))
        };
        let opt = exact_opt(&p, OracleMode::Feasible).unwrap().opt_cost;
        let sol = greedy_solve(&p).unwrap();
        let bound = greedy_ratio_bound(&p, opt) * opt;
        r.check(sol.cost <= bound * (1.0 + REL_TOL), || {
            (p.name().to_string(), format!("greedy cost {} above bound {bound}", sol.cost), Some(text.clone()))
        });
        let decay = check_alpha_decay(&sol.trace, opt);
        r.check(decay.is_ok(), || {
            (p.name().to_string(), format!("alpha decay fails at step {}", decay.unwrap_err()), Some(text.clone()))
        });
    }
    r
}

/// Lock-step bin tracking over the mixed corpus; instances whose optimum is
/// at most `δ` are skipped since the analysis is undefined there.
fn bintrack_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Bintrack);
    for k in 0..cfg.cases {
        let (p, text) = random_instance(k, cfg.seed, cfg.cap);
        let mode = if p.is_integral() { OracleMode::Feasible } else { OracleMode::NearlyFeasible };
        let opt = exact_opt(&p, mode).unwrap().opt_cost;
        let zero = p.evaluate(Subset::empty(p.n()));
        let Ok(mut sys) = BinSystem::new(&p, opt, &zero) else {
            continue;
        };
        let run_seed = derive_seed(cfg.seed ^ 0x5eed, k);
        run_observed(&p, &GsemoConfig::new(default_iterations(&p, 10.0), run_seed), &mut sys);
        for v in sys.violations() {
            r.failures.push(Failure {
                case: format!("{} run seed {run_seed}", p.name()),
                detail: format!("iteration {}: {:?} {}", v.iteration, v.kind, v.detail),
                instance: Some(text.clone()),
            });
        }
        r.checks += 1;
    }
    r
}
