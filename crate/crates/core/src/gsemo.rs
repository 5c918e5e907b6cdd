//! Global SEMO over the bi-objective fitness `(f1, f2)`.
//!
//! The population starts as `{∅}`. Each iteration picks a member uniformly,
//! flips every bit independently with probability `1/n`, and offers the child
//! to the Pareto archive. After `T` iterations the cheapest member with
//! `f1 = 0` is returned.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::archive::{InsertOutcome, ParetoArchive};
use crate::error::{Error, Result};
use crate::greedy::ratio_bound_normalized;
use crate::individual::{flip_mutation, Individual};
use crate::problem::{CoverProblem, Evaluator};
use crate::rng::RngStream;
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceLevel {
    #[default]
    None,
    /// One [`TraceEvent`] per iteration.
    Events,
    /// Events plus archive invariant checks after every iteration.
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GsemoConfig {
    pub iterations: u64,
    pub seed: u64,
    pub trace_level: TraceLevel,
}

impl GsemoConfig {
    pub fn new(iterations: u64, seed: u64) -> Self {
        assert!(iterations >= 1, "iteration budget must be positive");
        GsemoConfig {
            iterations,
            seed,
            trace_level: TraceLevel::None,
        }
    }

    pub fn traced(mut self, level: TraceLevel) -> Self {
        self.trace_level = level;
        self
    }
}

/// One row of the run trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub iteration: u64,
    /// Position of the parent in the f1-ordered archive.
    pub parent: usize,
    pub flips: usize,
    pub level: u64,
    pub f1: f64,
    pub f2: f64,
    pub inserted: bool,
    pub evicted: usize,
    pub archive_size: usize,
    pub min_level: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunTrace {
    pub events: Vec<TraceEvent>,
    /// `(iteration, message)` for every failed archive check in full mode.
    pub violations: Vec<(u64, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub iterations: u64,
    pub insertions: u64,
    /// First iteration after which the archive held a member with `f1 = 0`;
    /// `Some(0)` when the empty set already qualifies.
    pub first_feasible: Option<u64>,
    pub oracle_calls: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub best: Option<Individual>,
    pub archive: ParetoArchive<Individual>,
    pub stats: RunStats,
    pub trace: RunTrace,
}

impl RunResult {
    /// The member closest to feasibility. Equals `best` when one exists.
    pub fn min_f1_member(&self) -> &Individual {
        self.archive.get(0)
    }

    /// Everything except wall time, for replay comparisons.
    pub fn same_outcome(&self, other: &RunResult) -> bool {
        self.best == other.best
            && self.archive == other.archive
            && self.trace == other.trace
            && self.stats.iterations == other.stats.iterations
            && self.stats.insertions == other.stats.insertions
            && self.stats.first_feasible == other.stats.first_feasible
    }
}

/// Receives every iteration of a run, in order, after the archive update.
pub trait Observer {
    fn observe(&mut self, iteration: u64, candidate: &Individual, outcome: &InsertOutcome<Individual>, archive: &ParetoArchive<Individual>);
}

impl Observer for () {
    fn observe(&mut self, _: u64, _: &Individual, _: &InsertOutcome<Individual>, _: &ParetoArchive<Individual>) {}
}

pub fn run(problem: &CoverProblem, cfg: &GsemoConfig) -> RunResult {
    run_observed(problem, cfg, &mut ())
}

pub fn run_observed<O: Observer + ?Sized>(problem: &CoverProblem, cfg: &GsemoConfig, observer: &mut O) -> RunResult {
    let started = Instant::now();
    let beta = problem.beta();
    let mut rng = RngStream::new(cfg.seed);
    let mut eval = Evaluator::new(problem);
    let mut archive = ParetoArchive::with_member(eval.evaluate(Subset::empty(problem.n())));
    let mut trace = RunTrace::default();
    let mut insertions = 0;
    let mut first_feasible = (archive.min_level() == Some(0)).then_some(0);
    let mut prev_min = archive.min_level().unwrap();

    for t in 1..=cfg.iterations {
        let parent_pos = rng.below(archive.len());
        let parent = archive.get(parent_pos).bits.clone();
        let child_bits = flip_mutation(&parent, &mut rng);
        let flips = (0..parent.len()).filter(|&i| parent.contains(i) != child_bits.contains(i)).count();
        let child = eval.evaluate(child_bits);
        let outcome = archive.insert(child.clone());
        let evicted = match &outcome {
            InsertOutcome::Inserted { evicted } => {
                insertions += 1;
                evicted.len()
            }
            InsertOutcome::Rejected { .. } => 0,
        };
        observer.observe(t, &child, &outcome, &archive);

        let min_level = archive.min_level().unwrap();
        if first_feasible.is_none() && min_level == 0 {
            first_feasible = Some(t);
        }
        if cfg.trace_level != TraceLevel::None {
            trace.events.push(TraceEvent {
                iteration: t,
                parent: parent_pos,
                flips,
                level: child.level(),
                f1: child.f1(),
                f2: child.f2(),
                inserted: outcome.inserted(),
                evicted,
                archive_size: archive.len(),
                min_level,
            });
        }
        if cfg.trace_level == TraceLevel::Full {
            if let Err(msg) = archive.check_invariants(beta) {
                trace.violations.push((t, msg));
            }
            if min_level > prev_min {
                trace.violations.push((t, format!("minimum level rose from {prev_min} to {min_level}")));
            }
        }
        prev_min = min_level;
    }

    RunResult {
        best: extract_best(&archive).cloned(),
        stats: RunStats {
            iterations: cfg.iterations,
            insertions,
            first_feasible,
            oracle_calls: eval.oracle_calls(),
            wall_time: started.elapsed(),
        },
        archive,
        trace,
    }
}

/// The `f1 = 0` member, if any. The archive holds at most one member per
/// level, so this is also the cheapest one.
pub fn extract_best(archive: &ParetoArchive<Individual>) -> Option<&Individual> {
    archive.members().first().filter(|x| x.level() == 0)
}

/// `⌈safety · e · β(β+1) · n⌉`, at least 1.
pub fn default_iterations(problem: &CoverProblem, safety: f64) -> u64 {
    iterations_for(problem.beta(), problem.n(), safety)
}

pub fn iterations_for(beta: u64, n: usize, safety: f64) -> u64 {
    assert!(safety > 0.0, "safety factor must be positive");
    let t = (safety * expected_hitting_bound(beta, n)).ceil();
    (t as u64).max(1)
}

/// `e · β(β+1) · n`, the expected-time bound for reaching `f1 = 0`.
pub fn expected_hitting_bound(beta: u64, n: usize) -> f64 {
    std::f64::consts::E * (beta * (beta + 1)) as f64 * n as f64
}

/// `ln(α'0 / (opt − δ))` with `α'0 = f1(∅) − (p+2δ)·opt`, in normalized
/// units, clamped to 0 when the argument is at most 1 (the first phase of
/// the analysis is then empty). Fails when `opt ≤ δ`.
pub fn phase_one_log(problem: &CoverProblem, opt: f64) -> Result<f64> {
    let delta = problem.delta();
    let opt_n = problem.normalize(opt);
    if opt_n <= delta {
        return Err(Error::DegenerateOpt { opt: opt_n, delta });
    }
    let alpha0 = problem.beta() as f64 * delta - (problem.p_param() + 2.0 * delta) * opt_n;
    let arg = alpha0 / (opt_n - delta);
    Ok(if arg > 1.0 { arg.ln() } else { 0.0 })
}

/// Approximation ratio guaranteed for a nearly feasible output:
/// `w_max/δ · (p+1+2δ) + ln(α'0/(opt−δ))`.
pub fn theorem2_ratio(problem: &CoverProblem, opt: f64) -> Result<f64> {
    let delta = problem.delta();
    let head = problem.w_max_normalized() / delta * (problem.p_param() + 1.0 + 2.0 * delta);
    Ok(head + phase_one_log(problem, opt)?)
}

/// The tighter ratio for integer-valued utilities:
/// `w_max(1+p) + ln((g(X) − p·opt)/opt)`, log clamped as in the greedy bound.
pub fn theorem2_integral_ratio(problem: &CoverProblem, opt: f64) -> f64 {
    ratio_bound_normalized(problem.p_param(), 1.0, problem.w_max_normalized(), problem.g_total(), problem.normalize(opt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::individual::Fitness;
    use crate::problem::test_util::modular;
    use crate::zoo::{cds_problem, set_cover_problem, GraphInstance, SetSystemInstance};

    fn three_sets() -> CoverProblem {
        let inst = SetSystemInstance::new("three", 3, vec![(1.0, vec![0, 1]), (1.0, vec![2]), (3.0, vec![0, 1, 2])]);
        set_cover_problem(&inst).unwrap()
    }

    fn ind(level: u64, f2: f64) -> Individual {
        Individual {
            bits: Subset::empty(0),
            fitness: Fitness::pair(level, f2),
        }
    }

    #[test]
    fn iteration_budget_formula() {
        // ⌈e · 2200⌉ = ⌈5980.2…⌉
        assert_eq!(iterations_for(10, 20, 1.0), 5981);
        assert_eq!(iterations_for(2, 4, 10.0), 653);
        assert_eq!(iterations_for(0, 20, 10.0), 1);
        assert_eq!(iterations_for(0, 20, 0.1), 1);
    }

    #[test]
    fn best_is_the_level_zero_member() {
        let mut a = ParetoArchive::with_member(ind(2, 3.0));
        a.insert(ind(0, 7.0));
        assert_eq!(extract_best(&a).unwrap().fitness, Fitness::pair(0, 7.0));
        assert!(extract_best(&ParetoArchive::with_member(ind(1, 2.0))).is_none());
    }

    #[test]
    fn single_element_instance() {
        let p = modular(&[4.0], 1.0);
        for seed in 0..20 {
            let r = run(&p, &GsemoConfig::new(100, seed));
            let best = r.best.expect("n = 1 flips every iteration");
            assert_eq!(best.bits.to_vec(), vec![0]);
            assert_eq!(best.f2(), 1.0);
            assert_eq!(r.stats.first_feasible, Some(1));
        }
    }

    #[test]
    fn already_feasible_instance() {
        let g = GraphInstance::new("empty", 3, vec![]).unwrap();
        let p = crate::zoo::vertex_cover_problem(&g, None).unwrap();
        let r = run(&p, &GsemoConfig::new(default_iterations(&p, 10.0), 0));
        assert_eq!(r.stats.first_feasible, Some(0));
        assert!(r.best.unwrap().bits.is_empty());
    }

    #[test]
    fn archive_invariants_hold_throughout() {
        let p = cds_problem(&GraphInstance::new("p4", 4, vec![(0, 1), (1, 2), (2, 3)]).unwrap()).unwrap();
        for seed in 0..30 {
            let r = run(&p, &GsemoConfig::new(500, seed).traced(TraceLevel::Full));
            assert!(r.trace.violations.is_empty(), "{:?}", r.trace.violations);
            assert!(r.trace.events.iter().all(|e| e.archive_size as u64 <= p.beta() + 1));
            let mins: Vec<u64> = r.trace.events.iter().map(|e| e.min_level).collect();
            assert!(mins.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let p = three_sets();
        let cfg = GsemoConfig::new(300, 42).traced(TraceLevel::Events);
        let a = run(&p, &cfg);
        let b = run(&p, &cfg);
        assert!(a.same_outcome(&b));
        let c = run(&p, &GsemoConfig::new(300, 43).traced(TraceLevel::Events));
        assert_ne!(a.trace, c.trace);
    }

    #[test]
    fn three_set_success_rate() {
        // brute force: {S1, S2} at cost 2 is the unique optimum
        let p = three_sets();
        let t = default_iterations(&p, 10.0);
        let hits = (0..100).filter(|&seed| run(&p, &GsemoConfig::new(t, seed)).best.map(|b| b.f2()) == Some(2.0)).count();
        assert!(hits >= 95, "{hits}/100");
    }

    #[test]
    fn ratio_formulas() {
        let p = three_sets();
        // w_max = 3, p = 0: 3 + ln(3/2)
        assert!((theorem2_integral_ratio(&p, 2.0) - (3.0 + 1.5f64.ln())).abs() < 1e-12);
        // β = 3, δ = 1, opt = 2: α'0 = 3 − 4 < 0, log clamped
        assert_eq!(theorem2_ratio(&p, 2.0).unwrap(), 9.0);
        assert_eq!(theorem2_ratio(&p, 1.0).unwrap_err(), Error::DegenerateOpt { opt: 1.0, delta: 1.0 });
    }

    #[test]
    fn observer_sees_every_iteration() {
        struct Count(u64, u64);
        impl Observer for Count {
            fn observe(&mut self, t: u64, _: &Individual, o: &InsertOutcome<Individual>, _: &ParetoArchive<Individual>) {
                assert_eq!(t, self.0 + 1);
                self.0 = t;
                self.1 += o.inserted() as u64;
            }
        }
        let p = three_sets();
        let mut c = Count(0, 0);
        let r = run_observed(&p, &GsemoConfig::new(77, 5), &mut c);
        assert_eq!(c.0, 77);
        assert_eq!(c.1, r.stats.insertions);
    }
}
