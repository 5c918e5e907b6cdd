//! Exact minimum-cost covers for small instances, used as the reference
//! optimum when checking approximation bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::{tol, CoverProblem};
use crate::subset::Subset;

/// Largest ground set the branch-and-bound accepts by default.
pub const DEFAULT_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// `g(C) = g(X)`.
    Feasible,
    /// `f1(C) = 0`, i.e. `g(C) > g(X) − δ`.
    NearlyFeasible,
}

impl OracleMode {
    fn accepts(self, problem: &CoverProblem, g: f64) -> bool {
        match self {
            OracleMode::Feasible => problem.is_feasible_value(g),
            OracleMode::NearlyFeasible => problem.level_of(g) == 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub opt_cost: f64,
    /// Lexicographically smallest optimal member list.
    pub witness: Subset,
    pub nodes_explored: u64,
    pub mode: OracleMode,
}

pub fn exact_opt(problem: &CoverProblem, mode: OracleMode) -> Result<OracleResult> {
    exact_opt_capped(problem, mode, DEFAULT_CAP)
}

/// Depth-first branch and bound. Elements are branched on in descending
/// singleton cost-effectiveness; a branch is cut when its cost exceeds the
/// incumbent or when adding every remaining element still misses the target.
pub fn exact_opt_capped(problem: &CoverProblem, mode: OracleMode, cap: usize) -> Result<OracleResult> {
    let n = problem.n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let empty = Subset::empty(n);
    let singles = problem.utility().gains(&empty);
    let w = problem.weights();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        // singles[b]/w[b] vs singles[a]/w[a], descending; index breaks ties
        (singles[b] * w[a]).partial_cmp(&(singles[a] * w[b])).unwrap().then(a.cmp(&b))
    });
    // cheapest weight among order[k..]
    let mut suffix_min = vec![f64::INFINITY; n + 1];
    for k in (0..n).rev() {
        suffix_min[k] = suffix_min[k + 1].min(w[order[k]]);
    }

    let mut search = Search {
        problem,
        mode,
        order: &order,
        suffix_min: &suffix_min,
        best: None,
        nodes: 0,
    };
    search.dfs(0, &mut empty.clone(), 0.0);
    let nodes = search.nodes;
    match search.best {
        Some((cost, witness, _)) => Ok(OracleResult {
            opt_cost: cost,
            witness,
            nodes_explored: nodes,
            mode,
        }),
        None => Err(Error::Infeasible),
    }
}

struct Search<'a> {
    problem: &'a CoverProblem,
    mode: OracleMode,
    order: &'a [usize],
    suffix_min: &'a [f64],
    best: Option<(f64, Subset, Vec<usize>)>,
    nodes: u64,
}

impl Search<'_> {
    fn within_best(&self, cost: f64) -> bool {
        match &self.best {
            None => true,
            Some((b, _, _)) => cost <= b + tol(*b),
        }
    }

    fn record(&mut self, cost: f64, set: &Subset) {
        let members = set.to_vec();
        let better = match &self.best {
            None => true,
            Some((b, _, m)) => cost < b - tol(*b) || (cost <= b + tol(*b) && members < *m),
        };
        if better {
            self.best = Some((cost, set.clone(), members));
        }
    }

    fn dfs(&mut self, k: usize, chosen: &mut Subset, cost: f64) {
        self.nodes += 1;
        let g = self.problem.g(chosen);
        if self.mode.accepts(self.problem, g) {
            // every superset costs strictly more
            self.record(cost, chosen);
            return;
        }
        if k == self.order.len() || !self.within_best(cost + self.suffix_min[k]) {
            return;
        }
        let mut everything = chosen.clone();
        for &v in &self.order[k..] {
            everything.insert(v);
        }
        if !self.mode.accepts(self.problem, self.problem.g(&everything)) {
            return;
        }
        let v = self.order[k];
        let with_cost = cost + self.problem.weights()[v];
        if self.within_best(with_cost) {
            chosen.insert(v);
            self.dfs(k + 1, chosen, with_cost);
            chosen.remove(v);
        }
        self.dfs(k + 1, chosen, cost);
    }
}

/// Plain enumeration of all `2^n` subsets, independent of the pruning logic
/// above. Limited to `n ≤ 20`.
pub fn exhaustive_opt(problem: &CoverProblem, mode: OracleMode) -> Result<OracleResult> {
    let n = problem.n();
    if n > 20 {
        return Err(Error::TooLarge { n, cap: 20 });
    }
    let mut best: Option<(f64, Subset, Vec<usize>)> = None;
    let mut nodes = 0;
    for set in crate::subset::all_subsets(n) {
        nodes += 1;
        if !mode.accepts(problem, problem.g(&set)) {
            continue;
        }
        let cost = problem.cost(&set);
        let members = set.to_vec();
        let better = match &best {
            None => true,
            Some((b, _, m)) => cost < b - tol(*b) || (cost <= b + tol(*b) && members < *m),
        };
        if better {
            best = Some((cost, set, members));
        }
    }
    best.map(|(opt_cost, witness, _)| OracleResult {
        opt_cost,
        witness,
        nodes_explored: nodes,
        mode,
    })
    .ok_or(Error::Infeasible)
}
