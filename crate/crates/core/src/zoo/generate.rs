//! Seeded random instance generators. Invalid samples are repaired rather
//! than rejected, so every seed maps to exactly one valid instance.

use crate::rng::RngStream;
use crate::zoo::coverage::{SetSystemInstance, WeightedCoverageInstance};
use crate::zoo::dsu::Dsu;
use crate::zoo::graph::GraphInstance;

/// Random membership matrix: each of `count` sets holds each of `ids`
/// elements with probability `density`. Empty sets get one random element,
/// uncovered elements are added to a random set.
fn random_memberships(ids: usize, count: usize, density: f64, rng: &mut RngStream) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0..count)
        .map(|_| (0..ids).filter(|_| rng.bernoulli(density)).collect())
        .collect();
    if ids == 0 {
        return sets;
    }
    for s in sets.iter_mut() {
        if s.is_empty() {
            s.push(rng.below(ids));
        }
    }
    let mut covered = vec![false; ids];
    for s in &sets {
        for &e in s {
            covered[e] = true;
        }
    }
    for (e, &hit) in covered.iter().enumerate() {
        if !hit {
            let target = rng.below(count);
            sets[target].push(e);
        }
    }
    for s in sets.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    sets
}

/// Set system over `elements` elements with `sets` sets; integer costs drawn
/// uniformly from `cost_range` (inclusive).
pub fn random_set_cover(elements: usize, sets: usize, density: f64, cost_range: (u64, u64), seed: u64) -> SetSystemInstance {
    assert!(sets >= 1 && (0.0..=1.0).contains(&density) && cost_range.0 >= 1 && cost_range.0 <= cost_range.1);
    let mut rng = RngStream::new(seed);
    let members = random_memberships(elements, sets, density, &mut rng);
    let sets: Vec<(f64, Vec<usize>)> = members
        .into_iter()
        .map(|m| (rng.range_inclusive(cost_range.0, cost_range.1) as f64, m))
        .collect();
    let name = format!("setcover-e{elements}-s{}-seed{seed}", sets.len());
    SetSystemInstance::new(name, elements, sets)
}

/// Erdős–Rényi `G(n, edge_prob)` made connected by joining its components
/// with a random spanning tree over them.
pub fn random_connected_graph(n: usize, edge_prob: f64, seed: u64) -> GraphInstance {
    assert!((0.0..=1.0).contains(&edge_prob));
    let mut rng = RngStream::new(seed);
    let mut edges = Vec::new();
    let mut dsu = Dsu::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(edge_prob) {
                edges.push((u, v));
                dsu.union(u, v);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = dsu.find(v);
        if slot[r] == usize::MAX {
            slot[r] = components.len();
            components.push(Vec::new());
        }
        components[slot[r]].push(v);
    }
    for k in 1..components.len() {
        let earlier = &components[rng.below(k)];
        let a = earlier[rng.below(earlier.len())];
        let b = components[k][rng.below(components[k].len())];
        edges.push((a.min(b), a.max(b)));
    }
    GraphInstance::new(format!("graph-n{n}-seed{seed}"), n, edges).expect("generated graph is simple")
}

/// Real-valued coverage instance. Item values are multiples of 1/8 in
/// `[1/8, 1]`, which keeps every coverage sum exact in binary floating point.
pub fn random_weighted_coverage(items: usize, sets: usize, density: f64, cost_range: (u64, u64), seed: u64) -> WeightedCoverageInstance {
    assert!(sets >= 1 && items >= 1 && cost_range.0 >= 1 && cost_range.0 <= cost_range.1);
    let mut rng = RngStream::new(seed);
    let item_values = (0..items).map(|_| rng.range_inclusive(1, 8) as f64 / 8.0).collect();
    let members = random_memberships(items, sets, density, &mut rng);
    let sets: Vec<(f64, Vec<usize>)> = members
        .into_iter()
        .map(|m| (rng.range_inclusive(cost_range.0, cost_range.1) as f64, m))
        .collect();
    WeightedCoverageInstance {
        name: format!("wcoverage-i{items}-s{}-seed{seed}", sets.len()),
        item_values,
        sets,
    }
}
