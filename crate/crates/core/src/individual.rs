//! Individuals of the evolutionary search and the Pareto dominance relations
//! on their bi-objective fitness. Both objectives are minimized.

use serde::{Deserialize, Serialize};

use crate::rng::RngStream;
use crate::subset::Subset;

/// Bi-objective fitness `(f1, f2)`.
///
/// `f1` is the discretized uncovered portion, always `level · δ`; `level` is
/// kept alongside it as an exact integer. `f2` is the total weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub level: u64,
    pub f1: f64,
    pub f2: f64,
}

impl Fitness {
    pub fn new(level: u64, delta: f64, f2: f64) -> Self {
        Fitness {
            level,
            f1: level as f64 * delta,
            f2,
        }
    }

    /// A bare `(f1, f2)` pair with `δ = 1`, handy for tests and archive streams.
    pub fn pair(f1: u64, f2: f64) -> Self {
        Fitness::new(f1, 1.0, f2)
    }

    pub fn weakly_dominates(&self, other: &Fitness) -> bool {
        self.f1 <= other.f1 && self.f2 <= other.f2
    }

    pub fn dominates(&self, other: &Fitness) -> bool {
        self.weakly_dominates(other) && (self.f1 < other.f1 || self.f2 < other.f2)
    }
}

/// Anything carrying a fitness can live in a [`crate::archive::ParetoArchive`].
pub trait Evaluated {
    fn fitness(&self) -> Fitness;
}

impl Evaluated for Fitness {
    fn fitness(&self) -> Fitness {
        *self
    }
}

/// A characteristic vector with its cached fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub bits: Subset,
    pub fitness: Fitness,
}

impl Individual {
    pub fn level(&self) -> u64 {
        self.fitness.level
    }

    pub fn f1(&self) -> f64 {
        self.fitness.f1
    }

    pub fn f2(&self) -> f64 {
        self.fitness.f2
    }
}

impl Evaluated for Individual {
    fn fitness(&self) -> Fitness {
        self.fitness
    }
}

pub fn weakly_dominates<A: Evaluated, B: Evaluated>(a: &A, b: &B) -> bool {
    a.fitness().weakly_dominates(&b.fitness())
}

pub fn dominates<A: Evaluated, B: Evaluated>(a: &A, b: &B) -> bool {
    a.fitness().dominates(&b.fitness())
}

/// Standard bit mutation: every bit flips independently with probability
/// `1/n`. Exactly one uniform draw is consumed per bit, in index order.
pub fn flip_mutation(bits: &Subset, rng: &mut RngStream) -> Subset {
    let n = bits.len();
    let mut child = bits.clone();
    if n == 0 {
        return child;
    }
    let rate = 1.0 / n as f64;
    for i in 0..n {
        if rng.uniform() < rate {
            child.flip(i);
        }
    }
    child
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(f1: u64, f2: f64) -> Fitness {
        Fitness::pair(f1, f2)
    }

    #[test]
    fn weak_dominance_examples() {
        assert!(weakly_dominates(&fit(2, 5.0), &fit(3, 5.0)));
        assert!(weakly_dominates(&fit(2, 5.0), &fit(2, 5.0)));
        assert!(!weakly_dominates(&fit(1, 9.0), &fit(3, 5.0)));
    }

    #[test]
    fn strict_dominance_examples() {
        assert!(dominates(&fit(2, 5.0), &fit(3, 5.0)));
        assert!(!dominates(&fit(2, 5.0), &fit(2, 5.0)));
        assert!(!dominates(&fit(3, 5.0), &fit(2, 9.0)));
    }

    #[test]
    fn f1_is_level_times_delta() {
        let f = Fitness::new(3, 0.25, 1.0);
        assert_eq!(f.f1, 0.75);
        assert_eq!(f.level, 3);
    }

    #[test]
    fn single_bit_always_flips() {
        let mut rng = RngStream::new(9);
        let zero = Subset::empty(1);
        for _ in 0..100 {
            assert_eq!(flip_mutation(&zero, &mut rng).to_vec(), vec![0]);
        }
    }

    #[test]
    fn mean_flip_count_is_one() {
        // Binomial(n, 1/n) has mean 1.
        let n = 50;
        let trials = 1_000_000;
        let mut rng = RngStream::new(1);
        let zero = Subset::empty(n);
        let total: usize = (0..trials)
            .map(|_| flip_mutation(&zero, &mut rng).count())
            .sum();
        let mean = total as f64 / trials as f64;
        assert!((0.98..=1.02).contains(&mean), "mean flips {mean}");
    }

    #[test]
    fn single_specific_flip_frequency() {
        // P(only bit 0 flips) = (1/n)(1 - 1/n)^(n-1) >= 1/(e n).
        let n = 20;
        let trials = 400_000;
        let mut rng = RngStream::new(2);
        let zero = Subset::empty(n);
        let hits = (0..trials)
            .filter(|_| flip_mutation(&zero, &mut rng).to_vec() == [0])
            .count();
        let freq = hits as f64 / trials as f64;
        let exact = (1.0 / n as f64) * (1.0 - 1.0 / n as f64).powi(n as i32 - 1);
        assert!((freq - exact).abs() <= 0.05 * exact, "freq {freq} vs {exact}");
        assert!(freq >= 0.95 / (std::f64::consts::E * n as f64));
    }

    #[test]
    fn mutation_replays_bit_exact() {
        let parent = Subset::from_indices(30, [1, 5, 7]);
        let mut a = RngStream::new(77);
        let mut b = RngStream::new(77);
        for _ in 0..200 {
            assert_eq!(flip_mutation(&parent, &mut a), flip_mutation(&parent, &mut b));
        }
    }
}
