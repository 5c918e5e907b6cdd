//! Minimum weight general cover: pick a minimum-weight `C ⊆ X` with
//! `g(C) = g(X)` for a normalized, monotone nondecreasing utility `g`.
//!
//! Besides the raw instance this module owns the discretized fitness used by
//! the evolutionary search,
//!
//! ```text
//! f1(x) = ⌊(g(X) − g(x)) / δ⌋ · δ        f2(x) = w(x)
//! ```
//!
//! where `δ` is the smallest positive marginal gain of the utility. `f1`
//! takes values in `{0, δ, …, βδ}` with `β = ⌊g(X)/δ⌋`, and `f1(x) = 0`
//! exactly when `g(x) > g(X) − δ` ("nearly feasible").

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::individual::{Fitness, Individual};
use crate::rng::RngStream;
use crate::subset::Subset;

/// Relative tolerance for floating comparisons on utility values.
pub const REL_TOL: f64 = 1e-9;

pub(crate) fn tol(scale: f64) -> f64 {
    REL_TOL * scale.abs().max(1.0)
}

/// `a <= b` up to [`REL_TOL`].
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + tol(a.abs().max(b.abs()))
}

/// A set-function oracle over a ground set `{0, …, n-1}`.
///
/// Implementations must be pure: the value depends only on the subset.
pub trait Utility: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &Subset) -> f64;

    /// Marginal gain `g(C ∪ {v}) − g(C)` for every `v`, with `0` for members
    /// of `C`. Adapters with cheap incremental updates override this.
    fn gains(&self, set: &Subset) -> Vec<f64> {
        let base = self.value(set);
        (0..self.ground_size())
            .map(|v| {
                if set.contains(v) {
                    0.0
                } else {
                    self.value(&set.with(v)) - base
                }
            })
            .collect()
    }
}

/// Where an instance's `δ` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DeltaSource {
    /// Integer-valued utility, `δ = 1`.
    Integral,
    /// Analytic value or proven lower bound on every positive gain.
    Analytic,
    /// Sampled by [`estimate_delta`]; runs using it are not certified.
    Estimated,
}

impl DeltaSource {
    pub fn certified(self) -> bool {
        self != DeltaSource::Estimated
    }
}

#[derive(Clone)]
pub struct CoverProblem {
    name: String,
    weights: Vec<f64>,
    utility: Arc<dyn Utility>,
    g_total: f64,
    delta: f64,
    delta_source: DeltaSource,
    p_param: f64,
    w_min: f64,
}

impl fmt::Debug for CoverProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverProblem")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("g_total", &self.g_total)
            .field("delta", &self.delta)
            .field("p_param", &self.p_param)
            .finish()
    }
}

impl CoverProblem {
    /// Builds an instance, checking positive weights, `δ > 0` and `g(∅) = 0`.
    pub fn new(
        name: impl Into<String>,
        weights: Vec<f64>,
        utility: Arc<dyn Utility>,
        delta: f64,
        delta_source: DeltaSource,
        p_param: f64,
    ) -> Result<Self> {
        let n = utility.ground_size();
        if weights.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} weights for a ground set of {n}",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInstance(format!("weight of element {i} is not positive")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidInstance(format!("delta must be positive, got {delta}")));
        }
        if p_param.is_nan() || p_param < 0.0 {
            return Err(Error::InvalidInstance(format!("p must be nonnegative, got {p_param}")));
        }
        let g_empty = utility.value(&Subset::empty(n));
        if g_empty.abs() > tol(0.0) {
            return Err(Error::InvalidInstance(format!("utility is not normalized: g(∅) = {g_empty}")));
        }
        let g_total = utility.value(&Subset::full(n));
        if g_total < -tol(0.0) {
            return Err(Error::InvalidInstance(format!("g(X) = {g_total} is negative")));
        }
        let w_min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(CoverProblem {
            name: name.into(),
            weights,
            utility,
            g_total,
            delta,
            delta_source,
            p_param,
            w_min: if n == 0 { 1.0 } else { w_min },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn utility(&self) -> &Arc<dyn Utility> {
        &self.utility
    }

    pub fn g(&self, set: &Subset) -> f64 {
        self.utility.value(set)
    }

    pub fn g_total(&self) -> f64 {
        self.g_total
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn delta_source(&self) -> DeltaSource {
        self.delta_source
    }

    /// The curvature-like slack `p` declared by the adapter; analysis only.
    pub fn p_param(&self) -> f64 {
        self.p_param
    }

    /// `g` is integer-valued and `δ = 1`, so near-feasibility is feasibility.
    pub fn is_integral(&self) -> bool {
        self.delta_source == DeltaSource::Integral
    }

    pub fn beta(&self) -> u64 {
        floor_tol(self.g_total / self.delta).max(0.0) as u64
    }

    /// Cheapest weight; bounds are computed on weights divided by this.
    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    pub fn w_max(&self) -> f64 {
        self.weights.iter().cloned().fold(0.0, f64::max)
    }

    /// `w_max / w_min`, the most expensive weight after normalization.
    pub fn w_max_normalized(&self) -> f64 {
        if self.n() == 0 {
            1.0
        } else {
            self.w_max() / self.w_min
        }
    }

    /// Converts a raw cost into normalized units (cheapest element = 1).
    pub fn normalize(&self, cost: f64) -> f64 {
        cost / self.w_min
    }

    pub fn cost(&self, set: &Subset) -> f64 {
        set.iter().map(|i| self.weights[i]).sum()
    }

    /// `⌊(g(X) − g)/δ⌋`, clamped to `[0, β]`.
    pub fn level_of(&self, g: f64) -> u64 {
        let r = (self.g_total - g) / self.delta;
        if r <= 0.0 {
            return 0;
        }
        (floor_tol(r) as u64).min(self.beta())
    }

    pub fn f1(&self, set: &Subset) -> f64 {
        self.level_of(self.g(set)) as f64 * self.delta
    }

    pub fn f2(&self, set: &Subset) -> f64 {
        self.cost(set)
    }

    pub fn fitness_from_g(&self, set: &Subset, g: f64) -> Fitness {
        Fitness::new(self.level_of(g), self.delta, self.cost(set))
    }

    pub fn evaluate(&self, bits: Subset) -> Individual {
        let fitness = self.fitness_from_g(&bits, self.g(&bits));
        Individual { bits, fitness }
    }

    pub fn is_nearly_feasible(&self, set: &Subset) -> bool {
        self.level_of(self.g(set)) == 0
    }

    /// `g(C) = g(X)`, up to [`REL_TOL`].
    pub fn is_feasible_value(&self, g: f64) -> bool {
        g >= self.g_total - tol(self.g_total)
    }

    pub fn is_feasible(&self, set: &Subset) -> bool {
        self.is_feasible_value(self.g(set))
    }

    /// `g(C ∪ {v}) − g(C)` for `v ∉ C`.
    pub fn marginal_gain(&self, v: usize, set: &Subset) -> Result<f64> {
        assert!(!set.contains(v), "marginal gain of a member");
        let before = self.g(set);
        let after = self.g(&set.with(v));
        checked_gain(v, before, after)
    }

    /// Replaces `δ`, e.g. with an estimate when no analytic value exists.
    pub fn with_delta(mut self, delta: f64, source: DeltaSource) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidInstance(format!("delta must be positive, got {delta}")));
        }
        self.delta = delta;
        self.delta_source = source;
        Ok(self)
    }
}

pub(crate) fn checked_gain(v: usize, before: f64, after: f64) -> Result<f64> {
    let gain = after - before;
    if gain < -tol(before.abs().max(after.abs())) {
        return Err(Error::MonotonicityViolation { element: v, before, after });
    }
    Ok(gain.max(0.0))
}

/// Floor that absorbs rounding noise just below an integer.
fn floor_tol(r: f64) -> f64 {
    (r + tol(r)).floor()
}

/// Per-run memoizing front end to a problem's utility oracle.
pub struct Evaluator<'a> {
    problem: &'a CoverProblem,
    cache: HashMap<Subset, f64>,
    calls: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a CoverProblem) -> Self {
        Evaluator {
            problem,
            cache: HashMap::new(),
            calls: 0,
        }
    }

    pub fn problem(&self) -> &'a CoverProblem {
        self.problem
    }

    pub fn g(&mut self, set: &Subset) -> f64 {
        if let Some(&v) = self.cache.get(set) {
            return v;
        }
        self.calls += 1;
        let v = self.problem.g(set);
        self.cache.insert(set.clone(), v);
        v
    }

    pub fn evaluate(&mut self, bits: Subset) -> Individual {
        let g = self.g(&bits);
        let fitness = self.problem.fitness_from_g(&bits, g);
        Individual { bits, fitness }
    }

    /// Number of oracle calls that missed the cache.
    pub fn oracle_calls(&self) -> u64 {
        self.calls
    }
}

/// Smallest strictly positive marginal gain over sampled `(C, v)` pairs.
///
/// When the budget covers every pair (`n · 2^(n−1)`) the enumeration is
/// exhaustive and the result is the exact `δ`; otherwise it is a heuristic
/// upper estimate of it.
pub fn estimate_delta(utility: &dyn Utility, sample_budget: usize, rng: &mut RngStream) -> Result<f64> {
    assert!(sample_budget >= 1);
    let n = utility.ground_size();
    let floor = tol(0.0);
    let mut best = f64::INFINITY;
    let mut consider = |g: f64| {
        if g > floor && g < best {
            best = g;
        }
    };
    let exhaustive = n <= 20 && (sample_budget as u128) >= (n as u128) << n.saturating_sub(1);
    if exhaustive {
        for c in crate::subset::all_subsets(n) {
            let gains = utility.gains(&c);
            for v in (0..n).filter(|&v| !c.contains(v)) {
                consider(gains[v]);
            }
        }
    } else if n > 0 {
        for _ in 0..sample_budget {
            let density = rng.uniform();
            let mut c = Subset::empty(n);
            for i in 0..n {
                if rng.bernoulli(density) {
                    c.insert(i);
                }
            }
            let outside: Vec<usize> = (0..n).filter(|&v| !c.contains(v)).collect();
            if outside.is_empty() {
                continue;
            }
            let v = outside[rng.below(outside.len())];
            let base = utility.value(&c);
            consider(utility.value(&c.with(v)) - base);
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::NoPositiveGain { samples: sample_budget })
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    /// `g(C) = Σ values[i]` over members, a modular utility.
    pub struct Modular(pub Vec<f64>);

    impl Utility for Modular {
        fn ground_size(&self) -> usize {
            self.0.len()
        }
        fn value(&self, set: &Subset) -> f64 {
            set.iter().map(|i| self.0[i]).sum()
        }
    }

    /// A utility fixed by an explicit table over bitmasks.
    pub struct Table(pub usize, pub Vec<f64>);

    impl Utility for Table {
        fn ground_size(&self) -> usize {
            self.0
        }
        fn value(&self, set: &Subset) -> f64 {
            let mask: usize = set.iter().map(|i| 1 << i).sum();
            self.1[mask]
        }
    }

    pub fn modular(values: &[f64], delta: f64) -> CoverProblem {
        CoverProblem::new(
            "modular",
            vec![1.0; values.len()],
            Arc::new(Modular(values.to_vec())),
            delta,
            DeltaSource::Analytic,
            0.0,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;

    #[test]
    fn f1_formula_integer() {
        // g(X)=10, δ=1, g(x)=7 → 3
        let p = modular(&[7.0, 3.0], 1.0);
        let x = Subset::from_indices(2, [0]);
        assert_eq!(p.g_total(), 10.0);
        assert_eq!(p.f1(&x), 3.0);
        assert_eq!(p.beta(), 10);
        assert_eq!(p.f1(&Subset::full(2)), 0.0);
    }

    #[test]
    fn f1_formula_real() {
        // g(X)=1.0, δ=0.25, g(x)=0.55 → ⌊1.8⌋·0.25 = 0.25
        let p = modular(&[0.55, 0.45], 0.25);
        let x = Subset::from_indices(2, [0]);
        assert_eq!(p.f1(&x), 0.25);
        assert_eq!(p.beta(), 4);
        assert!(!p.is_nearly_feasible(&x));
        // g(x)=0.8 > 0.75 → nearly feasible
        let q = modular(&[0.8, 0.2], 0.25);
        assert!(q.is_nearly_feasible(&Subset::from_indices(2, [0])));
        assert!(!q.is_feasible(&Subset::from_indices(2, [0])));
    }

    #[test]
    fn f1_absorbs_rounding_below_level_boundary() {
        // g(X) − g(x) is exactly δ in reals but may round just under it.
        let p = modular(&[0.1, 0.2, 0.7], 0.1);
        let x = Subset::from_indices(3, [1, 2]);
        assert_eq!(p.level_of(p.g(&x)), 1);
        assert!(!p.is_nearly_feasible(&x));
    }

    #[test]
    fn f2_sums_weights() {
        let p = CoverProblem::new(
            "w",
            vec![1.0, 3.0, 2.0],
            Arc::new(Modular(vec![1.0; 3])),
            1.0,
            DeltaSource::Integral,
            0.0,
        )
        .unwrap();
        assert_eq!(p.f2(&Subset::empty(3)), 0.0);
        assert_eq!(p.f2(&Subset::from_indices(3, [0, 2])), 3.0);
        assert_eq!(p.w_max_normalized(), 3.0);
        let unit = modular(&[1.0; 6], 1.0);
        assert_eq!(unit.f2(&Subset::from_indices(6, [0, 1, 2, 3])), 4.0);
    }

    #[test]
    fn integral_nearly_feasible_means_feasible() {
        let p = modular(&[1.0, 2.0], 1.0);
        for s in crate::subset::all_subsets(2) {
            assert_eq!(p.is_nearly_feasible(&s), p.is_feasible(&s));
        }
    }

    #[test]
    fn zero_gain_is_zero() {
        let p = modular(&[0.0, 2.0], 1.0);
        assert_eq!(p.marginal_gain(0, &Subset::empty(2)).unwrap(), 0.0);
        assert_eq!(p.marginal_gain(1, &Subset::empty(2)).unwrap(), 2.0);
    }

    #[test]
    fn negative_gain_is_reported() {
        // g({0}) = 2, g({0,1}) = 1: decreasing.
        let table = Table(2, vec![0.0, 2.0, 0.5, 1.0]);
        let p = CoverProblem::new("bad", vec![1.0; 2], Arc::new(table), 1.0, DeltaSource::Analytic, 0.0).unwrap();
        let err = p.marginal_gain(1, &Subset::from_indices(2, [0])).unwrap_err();
        assert!(matches!(err, Error::MonotonicityViolation { element: 1, .. }));
    }

    #[test]
    fn rejects_unnormalized_utility() {
        let table = Table(1, vec![1.0, 2.0]);
        let err = CoverProblem::new("bad", vec![1.0], Arc::new(table), 1.0, DeltaSource::Analytic, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance(_)));
    }

    #[test]
    fn rejects_nonpositive_weight() {
        let err = CoverProblem::new("bad", vec![0.0], Arc::new(Modular(vec![1.0])), 1.0, DeltaSource::Analytic, 0.0)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidInstance(_)));
    }

    #[test]
    fn estimate_delta_exhaustive_small() {
        // Enumerated pairs: gains are 0.5 and 0.25 in every context.
        let mut rng = RngStream::new(0);
        let d = estimate_delta(&Modular(vec![0.5, 0.25]), 4, &mut rng).unwrap();
        assert_eq!(d, 0.25);
    }

    #[test]
    fn estimate_delta_integer_coverage() {
        let mut rng = RngStream::new(3);
        let d = estimate_delta(&Modular(vec![2.0, 1.0, 3.0, 1.0, 5.0]), 200, &mut rng).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn estimate_delta_all_zero() {
        let mut rng = RngStream::new(0);
        let err = estimate_delta(&Modular(vec![0.0, 0.0]), 50, &mut rng).unwrap_err();
        assert_eq!(err, Error::NoPositiveGain { samples: 50 });
    }

    #[test]
    fn evaluator_memoizes() {
        let p = modular(&[1.0, 2.0, 3.0], 1.0);
        let mut ev = Evaluator::new(&p);
        let s = Subset::from_indices(3, [0, 2]);
        let a = ev.evaluate(s.clone());
        let b = ev.evaluate(s);
        assert_eq!(a, b);
        assert_eq!(ev.oracle_calls(), 1);
        assert_eq!(a.fitness.f1, 2.0);
    }
}
