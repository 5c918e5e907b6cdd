//! Coverage-style adapters: set cover, vertex cover and weighted (real-valued)
//! coverage. All three utilities are monotone submodular, so `p = 0`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{CoverProblem, DeltaSource, Utility};
use crate::subset::Subset;
use crate::zoo::graph::GraphInstance;

/// A set system: the ground set of the cover problem is the list of sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SetSystemInstance {
    pub name: String,
    /// Number of elements to cover (ids `0..universe`).
    pub universe: usize,
    /// `(cost, members)` per set, members 0-indexed.
    pub sets: Vec<(f64, Vec<usize>)>,
}

impl SetSystemInstance {
    pub fn new(name: impl Into<String>, universe: usize, sets: Vec<(f64, Vec<usize>)>) -> Self {
        SetSystemInstance {
            name: name.into(),
            universe,
            sets,
        }
    }

    /// Checks costs, element ids and that the sets cover the universe.
    pub fn validate(&self) -> Result<()> {
        let mut covered = vec![false; self.universe];
        for (i, (cost, members)) in self.sets.iter().enumerate() {
            if !(cost.is_finite() && *cost > 0.0) {
                return Err(Error::InvalidInstance(format!("set {} has non-positive cost {cost}", i + 1)));
            }
            for &e in members {
                if e >= self.universe {
                    return Err(Error::InvalidInstance(format!("set {} names element {} > {}", i + 1, e + 1, self.universe)));
                }
                covered[e] = true;
            }
        }
        match covered.iter().position(|c| !c) {
            Some(e) => Err(Error::UncoverableInstance(e)),
            None => Ok(()),
        }
    }
}

/// `g(C) = |⋃_{S ∈ C} S|`.
pub struct CoverageCount {
    universe: usize,
    sets: Vec<Subset>,
}

impl CoverageCount {
    fn covered(&self, set: &Subset) -> Subset {
        let mut acc = Subset::empty(self.universe);
        for i in set.iter() {
            acc.union_with(&self.sets[i]);
        }
        acc
    }
}

impl Utility for CoverageCount {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn value(&self, set: &Subset) -> f64 {
        self.covered(set).count() as f64
    }

    fn gains(&self, set: &Subset) -> Vec<f64> {
        let covered = self.covered(set);
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if set.contains(i) {
                    0.0
                } else {
                    s.iter().filter(|&e| !covered.contains(e)).count() as f64
                }
            })
            .collect()
    }
}

/// Set cover as a general cover problem: `δ = 1`, `p = 0`, `g(X) = |E|`.
pub fn set_cover_problem(inst: &SetSystemInstance) -> Result<CoverProblem> {
    inst.validate()?;
    let utility = CoverageCount {
        universe: inst.universe,
        sets: inst
            .sets
            .iter()
            .map(|(_, m)| Subset::from_indices(inst.universe, m.iter().copied()))
            .collect(),
    };
    CoverProblem::new(
        inst.name.clone(),
        inst.sets.iter().map(|(c, _)| *c).collect(),
        Arc::new(utility),
        1.0,
        DeltaSource::Integral,
        0.0,
    )
}

/// `g(C)` = number of edges with at least one endpoint in `C`.
pub struct EdgeCoverage {
    graph: GraphInstance,
}

impl Utility for EdgeCoverage {
    fn ground_size(&self) -> usize {
        self.graph.n()
    }

    fn value(&self, set: &Subset) -> f64 {
        self.graph
            .edges()
            .iter()
            .filter(|(u, v)| set.contains(*u) || set.contains(*v))
            .count() as f64
    }

    fn gains(&self, set: &Subset) -> Vec<f64> {
        (0..self.graph.n())
            .map(|v| {
                if set.contains(v) {
                    0.0
                } else {
                    self.graph.neighbors(v).iter().filter(|&&u| !set.contains(u)).count() as f64
                }
            })
            .collect()
    }
}

/// Vertex cover: elements are vertices, `g` counts covered edges.
pub fn vertex_cover_problem(graph: &GraphInstance, costs: Option<Vec<f64>>) -> Result<CoverProblem> {
    let weights = costs.unwrap_or_else(|| vec![1.0; graph.n()]);
    CoverProblem::new(
        graph.name.clone(),
        weights,
        Arc::new(EdgeCoverage { graph: graph.clone() }),
        1.0,
        DeltaSource::Integral,
        0.0,
    )
}

/// Items with positive values, covered by weighted sets.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCoverageInstance {
    pub name: String,
    pub item_values: Vec<f64>,
    /// `(cost, items)` per set, items 0-indexed.
    pub sets: Vec<(f64, Vec<usize>)>,
}

impl WeightedCoverageInstance {
    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.item_values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInstance(format!("item {} has non-positive value", i + 1)));
        }
        let as_sets = SetSystemInstance::new(self.name.clone(), self.item_values.len(), self.sets.clone());
        as_sets.validate()
    }
}

/// `g(C)` = total value of the items covered by `C`.
pub struct ValueCoverage {
    values: Vec<f64>,
    sets: Vec<Subset>,
}

impl Utility for ValueCoverage {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn value(&self, set: &Subset) -> f64 {
        let mut covered = Subset::empty(self.values.len());
        for i in set.iter() {
            covered.union_with(&self.sets[i]);
        }
        // summed in item order so equal covers give bit-identical values
        covered.iter().map(|e| self.values[e]).sum()
    }
}

/// Real-valued submodular cover. `δ` is the smallest item value, a proven
/// lower bound on every positive marginal gain (a gain is a sum of newly
/// covered item values).
pub fn weighted_coverage_problem(inst: &WeightedCoverageInstance) -> Result<CoverProblem> {
    inst.validate()?;
    let n_items = inst.item_values.len();
    let delta = inst.item_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let utility = ValueCoverage {
        values: inst.item_values.clone(),
        sets: inst
            .sets
            .iter()
            .map(|(_, m)| Subset::from_indices(n_items, m.iter().copied()))
            .collect(),
    };
    CoverProblem::new(
        inst.name.clone(),
        inst.sets.iter().map(|(c, _)| *c).collect(),
        Arc::new(utility),
        if delta.is_finite() { delta } else { 1.0 },
        DeltaSource::Analytic,
        0.0,
    )
}
