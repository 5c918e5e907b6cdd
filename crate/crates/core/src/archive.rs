//! The GSEMO population: a set of mutually incomparable individuals.

use crate::individual::{Evaluated, Fitness};

/// Result of offering a newcomer to the archive.
#[derive(Clone, Debug, PartialEq)]
pub enum InsertOutcome<T> {
    /// Some member strictly dominates the newcomer; `by` is that member's
    /// position in the archive (the first one in f1 order).
    Rejected { by: usize },
    /// The newcomer was added; `evicted` holds the members it weakly dominated.
    Inserted { evicted: Vec<T> },
}

impl<T> InsertOutcome<T> {
    pub fn inserted(&self) -> bool {
        matches!(self, InsertOutcome::Inserted { .. })
    }
}

/// Mutually incomparable members, kept sorted by ascending `f1`.
///
/// Incomparability forces distinct `f1` values, so the archive holds at most
/// one member per f1 level and never more than `β + 1` members.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoArchive<T> {
    members: Vec<T>,
}

impl<T> Default for ParetoArchive<T> {
    fn default() -> Self {
        ParetoArchive { members: Vec::new() }
    }
}

impl<T: Evaluated> ParetoArchive<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_member(x: T) -> Self {
        ParetoArchive { members: vec![x] }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[T] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &T {
        &self.members[i]
    }

    /// Rejects `x` if a member strictly dominates it; otherwise removes every
    /// member that `x` weakly dominates (including equal-fitness incumbents)
    /// and adds `x`.
    pub fn insert(&mut self, x: T) -> InsertOutcome<T> {
        let fx = x.fitness();
        if let Some(by) = self.members.iter().position(|z| z.fitness().dominates(&fx)) {
            return InsertOutcome::Rejected { by };
        }
        let mut evicted = Vec::new();
        let mut kept = Vec::with_capacity(self.members.len() + 1);
        for z in self.members.drain(..) {
            if fx.weakly_dominates(&z.fitness()) {
                evicted.push(z);
            } else {
                kept.push(z);
            }
        }
        let pos = kept.partition_point(|z| z.fitness().f1 < fx.f1);
        kept.insert(pos, x);
        self.members = kept;
        InsertOutcome::Inserted { evicted }
    }

    /// Members strictly dominating `f`, in archive order.
    pub fn dominators_of<'a>(&'a self, f: &'a Fitness) -> impl Iterator<Item = &'a T> + 'a {
        self.members.iter().filter(move |z| z.fitness().dominates(f))
    }

    pub fn min_level(&self) -> Option<u64> {
        self.members.first().map(|z| z.fitness().level)
    }

    /// Checks mutual incomparability, f1 ordering and the `β + 1` size bound.
    pub fn check_invariants(&self, beta: u64) -> Result<(), String> {
        if self.members.len() as u64 > beta + 1 {
            return Err(format!("archive size {} exceeds beta + 1 = {}", self.members.len(), beta + 1));
        }
        for (i, a) in self.members.iter().enumerate() {
            let fa = a.fitness();
            if fa.level > beta {
                return Err(format!("member {i} has level {} above beta {beta}", fa.level));
            }
            for (j, b) in self.members.iter().enumerate() {
                if i != j && fa.weakly_dominates(&b.fitness()) {
                    return Err(format!("member {i} {:?} weakly dominates member {j} {:?}", fa, b.fitness()));
                }
            }
            if i > 0 && self.members[i - 1].fitness().f1 >= fa.f1 {
                return Err(format!("members {} and {i} out of f1 order", i - 1));
            }
        }
        Ok(())
    }
}
