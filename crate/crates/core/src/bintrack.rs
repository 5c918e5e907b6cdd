//! Bin-tracking instrumentation for GSEMO runs.
//!
//! A shadow structure with one bin per f1 level follows a run in lock-step.
//! A bin only receives an individual that *advances* something already
//! binned, and every binned individual must satisfy a phase-specific quality
//! condition. The tracker `I` (smallest non-empty bin) may only decrease;
//! once it reaches 0 the occupant of bin 0 is a nearly feasible solution
//! whose cost is bounded in terms of `opt`.
//!
//! All quantities here use normalized weights (cheapest element = 1), and
//! `opt` is a reference optimum supplied by the caller. Nothing in this
//! module influences the search itself.
//!
//! ```text
//! c    = (p + 2δ)·opt          α'0 = f1(∅) − c          boundary = ⌊(p+2δ+1)·opt/δ⌋
//! π1:  f1 ≤ α'0·e^(−f2/opt) + c
//! π2:  f2 ≤ w_max·(boundary − f1/δ) + ln(α'0/(opt−δ))·opt
//! ```

use serde::Serialize;

use crate::archive::{InsertOutcome, ParetoArchive};
use crate::error::Result;
use crate::gsemo::{expected_hitting_bound, phase_one_log, theorem2_ratio, Observer};
use crate::individual::{Fitness, Individual};
use crate::problem::{approx_le, CoverProblem, REL_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Inserted,
    Evicted,
    TrackerMoved,
    PhaseEnteredTwo,
    RejectedNoAdvance,
}

/// One analyzer event; `f1`/`f2` are raw fitness values, `tracker` and
/// `phase` are the state after the observation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackEvent {
    pub iteration: u64,
    pub kind: EventKind,
    pub bin: u64,
    pub f1: f64,
    pub f2: f64,
    pub tracker: u64,
    pub phase: Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    TrackerIncreased,
    Pi1,
    Pi2,
    Bridge,
    BinZeroCost,
    NotInArchive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub iteration: u64,
    pub kind: ViolationKind,
    pub detail: String,
}

/// Which archive member entered the bins when the candidate itself was
/// rejected, and how many dominators it was chosen from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominatorChoice {
    pub iteration: u64,
    pub candidate: Fitness,
    pub chosen: Fitness,
    pub alternatives: usize,
}

pub struct BinSystem {
    delta: f64,
    p: f64,
    w_min: f64,
    w_max: f64,
    opt: f64,
    alpha0: f64,
    boundary: u64,
    log_term: f64,
    b0_bound: f64,
    bins: Vec<Option<Individual>>,
    tracker: u64,
    phase: Phase,
    hit_zero_at: Option<u64>,
    events: Vec<TrackEvent>,
    violations: Vec<Violation>,
    choices: Vec<DominatorChoice>,
}

/// `⌊(p+2δ+1)·opt/δ⌋`, with `opt` in normalized units.
pub fn phase_boundary(opt: f64, p: f64, delta: f64) -> u64 {
    let r = (p + 2.0 * delta + 1.0) * opt / delta;
    (r + REL_TOL * r.max(1.0)).floor() as u64
}

impl BinSystem {
    /// Seeds bin `β` with the all-zero individual. `opt` is in raw cost units;
    /// fails with `DegenerateOpt` when the normalized `opt ≤ δ`.
    pub fn new(problem: &CoverProblem, opt: f64, initial: &Individual) -> Result<Self> {
        let log_term = phase_one_log(problem, opt)?;
        let b0_ratio = theorem2_ratio(problem, opt)?;
        let delta = problem.delta();
        let p = problem.p_param();
        let opt_n = problem.normalize(opt);
        let beta = problem.beta();
        let boundary = phase_boundary(opt_n, p, delta);
        let mut sys = BinSystem {
            delta,
            p,
            w_min: problem.w_min(),
            w_max: problem.w_max_normalized(),
            opt: opt_n,
            alpha0: beta as f64 * delta - (p + 2.0 * delta) * opt_n,
            boundary,
            log_term,
            b0_bound: b0_ratio * opt_n,
            bins: vec![None; beta as usize + 1],
            tracker: beta,
            phase: if beta < boundary { Phase::Two } else { Phase::One },
            hit_zero_at: None,
            events: Vec::new(),
            violations: Vec::new(),
            choices: Vec::new(),
        };
        let level = initial.level();
        sys.bins[level as usize] = Some(initial.clone());
        sys.tracker = level;
        sys.push_event(0, EventKind::Inserted, initial);
        sys.check_quality(0, initial);
        sys.check_bin_zero(0);
        Ok(sys)
    }

    pub fn boundary(&self) -> u64 {
        self.boundary
    }

    pub fn alpha0_prime(&self) -> f64 {
        self.alpha0
    }

    pub fn opt(&self) -> f64 {
        self.opt
    }

    pub fn tracker(&self) -> u64 {
        self.tracker
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn bin(&self, level: u64) -> Option<&Individual> {
        self.bins.get(level as usize).and_then(|b| b.as_ref())
    }

    /// Iteration at which the tracker first reached 0.
    pub fn hitting_time(&self) -> Option<u64> {
        self.hit_zero_at
    }

    pub fn events(&self) -> &[TrackEvent] {
        &self.events
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn dominator_choices(&self) -> &[DominatorChoice] {
        &self.choices
    }

    /// Normalized cost.
    fn cost(&self, f: &Fitness) -> f64 {
        f.f2 / self.w_min
    }

    fn slack(&self) -> f64 {
        (self.p + 2.0 * self.delta) * self.opt
    }

    pub fn pi1_check(&self, f: &Fitness) -> bool {
        approx_le(f.f1, self.alpha0 * (-self.cost(f) / self.opt).exp() + self.slack())
    }

    pub fn pi2_check(&self, f: &Fitness) -> bool {
        let room = self.boundary as f64 - f.level as f64;
        approx_le(self.cost(f), self.w_max * room + self.log_term * self.opt)
    }

    /// Cost bound carried by every phase-one individual at or above the
    /// boundary: `f2 ≤ opt·ln(α'0/(opt−δ))`.
    pub fn claim2_check(&self, f: &Fitness) -> bool {
        approx_le(self.cost(f), self.opt * self.log_term)
    }

    pub fn advances_phase1(&self, xp: &Fitness, x: &Fitness) -> bool {
        if xp.weakly_dominates(x) {
            return true;
        }
        let c = self.slack();
        let rise = self.cost(xp) - self.cost(x);
        approx_le(xp.f1 - c, (1.0 - rise / self.opt) * (x.f1 - c)) && xp.level < x.level && approx_le(rise, self.w_max)
    }

    pub fn advances_phase2(&self, xp: &Fitness, x: &Fitness) -> bool {
        xp.weakly_dominates(x) || (xp.level < x.level && approx_le(self.cost(xp) - self.cost(x), self.w_max))
    }

    fn advances(&self, xp: &Fitness, x: &Fitness) -> bool {
        match self.phase {
            Phase::One => self.advances_phase1(xp, x),
            Phase::Two => self.advances_phase2(xp, x),
        }
    }

    fn push_event(&mut self, iteration: u64, kind: EventKind, x: &Individual) {
        self.events.push(TrackEvent {
            iteration,
            kind,
            bin: x.level(),
            f1: x.f1(),
            f2: x.f2(),
            tracker: self.tracker,
            phase: self.phase,
        });
    }

    fn violation(&mut self, iteration: u64, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { iteration, kind, detail });
    }

    fn check_quality(&mut self, iteration: u64, x: &Individual) {
        let f = x.fitness;
        match self.phase {
            Phase::One if !self.pi1_check(&f) => self.violation(iteration, ViolationKind::Pi1, format!("{f:?}")),
            Phase::Two if !self.pi2_check(&f) => self.violation(iteration, ViolationKind::Pi2, format!("{f:?}")),
            _ => {}
        }
    }

    fn check_bin_zero(&mut self, iteration: u64) {
        if self.tracker != 0 || self.hit_zero_at.is_some() {
            return;
        }
        self.hit_zero_at = Some(iteration);
        let f = self.bins[0].as_ref().unwrap().fitness;
        if !approx_le(self.cost(&f), self.b0_bound) {
            self.violation(iteration, ViolationKind::BinZeroCost, format!("cost {} above {}", self.cost(&f), self.b0_bound));
        }
    }

    /// Processes one GSEMO iteration: `candidate` was just offered to the
    /// archive with `outcome`, and `archive` is the state afterwards.
    pub fn observe(&mut self, iteration: u64, candidate: &Individual, outcome: &InsertOutcome<Individual>, archive: &ParetoArchive<Individual>) {
        let before = self.tracker;
        let cand = candidate.fitness;
        let advanced: Vec<Individual> = self
            .bins
            .iter()
            .flatten()
            .filter(|x| self.phase == Phase::One || x.level() < self.boundary)
            .filter(|x| self.advances(&cand, &x.fitness))
            .cloned()
            .collect();

        // consistency: drop whatever the archive no longer holds
        for level in 0..self.bins.len() {
            if let Some(x) = &self.bins[level] {
                if !archive.members().iter().any(|m| m.bits == x.bits) {
                    let x = self.bins[level].take().unwrap();
                    self.push_event(iteration, EventKind::Evicted, &x);
                }
            }
        }

        if advanced.is_empty() {
            self.push_event(iteration, EventKind::RejectedNoAdvance, candidate);
        } else {
            let entrant = if outcome.inserted() {
                candidate.clone()
            } else {
                self.pick_dominator(iteration, &cand, archive)
            };
            let slot = entrant.level() as usize;
            if self.bins[slot].as_ref() != Some(&entrant) {
                if let Some(old) = self.bins[slot].take() {
                    self.push_event(iteration, EventKind::Evicted, &old);
                }
                self.bins[slot] = Some(entrant.clone());
                self.push_event(iteration, EventKind::Inserted, &entrant);
                self.check_quality(iteration, &entrant);
            }
            self.update_tracker(iteration, before, &entrant, &advanced);
        }

        for x in self.bins.iter().flatten() {
            if !archive.members().iter().any(|m| m.bits == x.bits) {
                let detail = format!("{:?}", x.fitness);
                self.violations.push(Violation {
                    iteration,
                    kind: ViolationKind::NotInArchive,
                    detail,
                });
            }
        }
    }

    fn pick_dominator(&mut self, iteration: u64, cand: &Fitness, archive: &ParetoArchive<Individual>) -> Individual {
        let dominators: Vec<&Individual> = archive.dominators_of(cand).collect();
        let chosen = dominators
            .iter()
            .min_by(|a, b| a.level().cmp(&b.level()).then(a.f2().total_cmp(&b.f2())))
            .expect("rejected candidate has a strict dominator");
        self.choices.push(DominatorChoice {
            iteration,
            candidate: *cand,
            chosen: chosen.fitness,
            alternatives: dominators.len(),
        });
        (*chosen).clone()
    }

    fn update_tracker(&mut self, iteration: u64, before: u64, entrant: &Individual, advanced: &[Individual]) {
        let now = self
            .bins
            .iter()
            .position(Option::is_some)
            .map_or(u64::MAX, |i| i as u64);
        if now > before {
            self.violation(iteration, ViolationKind::TrackerIncreased, format!("{before} -> {now}"));
        }
        self.tracker = now;
        if now < before {
            self.push_event(iteration, EventKind::TrackerMoved, entrant);
        }
        if self.phase == Phase::One && now < self.boundary {
            self.phase = Phase::Two;
            self.push_event(iteration, EventKind::PhaseEnteredTwo, entrant);
            if !self.pi2_check(&entrant.fitness) {
                self.violation(iteration, ViolationKind::Bridge, format!("entrant {:?} fails pi2", entrant.fitness));
            }
            if !advanced.iter().any(|x| self.claim2_check(&x.fitness)) {
                self.violation(iteration, ViolationKind::Bridge, "no advanced predecessor within the phase-one cost bound".into());
            }
        }
        if now != u64::MAX {
            self.check_bin_zero(iteration);
        }
    }
}

impl Observer for BinSystem {
    fn observe(&mut self, iteration: u64, candidate: &Individual, outcome: &InsertOutcome<Individual>, archive: &ParetoArchive<Individual>) {
        BinSystem::observe(self, iteration, candidate, outcome, archive);
    }
}

/// One traced run of an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct HittingSample {
    pub instance: String,
    pub beta: u64,
    pub n: usize,
    /// `None` when the tracker did not reach 0 within the budget.
    pub hit: Option<u64>,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HittingRow {
    pub instance: String,
    pub beta: u64,
    pub n: usize,
    pub runs: usize,
    /// Runs that never hit; counted at their full budget in the mean.
    pub censored: usize,
    pub mean: f64,
    pub std_dev: Option<f64>,
    pub p95: u64,
    pub bound: f64,
    pub ratio: f64,
    /// One-sided test at 95%: the mean is not significantly above the bound.
    pub within_bound: bool,
}

/// Groups samples by instance (in first-seen order) and compares the mean
/// hitting time with `e·β(β+1)·n`.
pub fn hitting_time_report(samples: &[HittingSample]) -> Vec<HittingRow> {
    let mut order: Vec<&str> = Vec::new();
    for s in samples {
        if !order.contains(&s.instance.as_str()) {
            order.push(&s.instance);
        }
    }
    order
        .into_iter()
        .map(|name| {
            let group: Vec<&HittingSample> = samples.iter().filter(|s| s.instance == name).collect();
            let mut times: Vec<u64> = group.iter().map(|s| s.hit.unwrap_or(s.budget)).collect();
            times.sort_unstable();
            let k = times.len() as f64;
            let mean = times.iter().sum::<u64>() as f64 / k;
            let std_dev = (times.len() > 1).then(|| {
                let ss: f64 = times.iter().map(|&t| (t as f64 - mean).powi(2)).sum();
                (ss / (k - 1.0)).sqrt()
            });
            let p95 = times[((0.95 * k).ceil() as usize).clamp(1, times.len()) - 1];
            let bound = expected_hitting_bound(group[0].beta, group[0].n);
            let within_bound = match std_dev {
                _ if mean <= bound => true,
                Some(sd) if sd > 0.0 => (mean - bound) / (sd / k.sqrt()) <= 1.645,
                _ => false,
            };
            HittingRow {
                instance: name.to_string(),
                beta: group[0].beta,
                n: group[0].n,
                runs: times.len(),
                censored: group.iter().filter(|s| s.hit.is_none()).count(),
                mean,
                std_dev,
                p95,
                bound,
                ratio: if bound > 0.0 { mean / bound } else { 0.0 },
                within_bound,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gsemo::{default_iterations, run_observed, GsemoConfig};
    use crate::subset::Subset;
    use crate::zoo::{cds_problem, set_cover_problem, GraphInstance, SetSystemInstance};

    fn three_sets() -> CoverProblem {
        let inst = SetSystemInstance::new("three", 3, vec![(1.0, vec![0, 1]), (1.0, vec![2]), (3.0, vec![0, 1, 2])]);
        set_cover_problem(&inst).unwrap()
    }

    /// A chain where every prefix of `0..k` covers one more element.
    fn line_cover(n: usize) -> CoverProblem {
        let sets = (0..n).map(|i| (1.0, vec![i])).collect();
        set_cover_problem(&SetSystemInstance::new("line", n, sets)).unwrap()
    }

    /// Three disjoint blocks of four plus cross pairs: opt 3, β 12, boundary 9.
    fn blocks() -> CoverProblem {
        let mut sets: Vec<(f64, Vec<usize>)> = (0..3).map(|b| (1.0, (4 * b..4 * b + 4).collect())).collect();
        sets.extend((0..4).map(|i| (1.0, vec![i, i + 4])));
        set_cover_problem(&SetSystemInstance::new("blocks", 12, sets)).unwrap()
    }

    fn system(p: &CoverProblem, opt: f64) -> BinSystem {
        BinSystem::new(p, opt, &p.evaluate(Subset::empty(p.n()))).unwrap()
    }

    #[test]
    fn boundary_formula() {
        assert_eq!(phase_boundary(2.0, 1.0, 1.0), 8);
        assert_eq!(phase_boundary(3.0, 0.0, 1.0), 9);
        assert_eq!(phase_boundary(1.0, 0.0, 0.25), 6);
    }

    #[test]
    fn degenerate_opt() {
        let p = three_sets();
        let zero = p.evaluate(Subset::empty(3));
        assert!(matches!(BinSystem::new(&p, 1.0, &zero), Err(Error::DegenerateOpt { .. })));
    }

    #[test]
    fn initial_state() {
        // β = 20, opt = 5 → boundary 15, so phase one
        let p = line_cover(20);
        let s = system(&p, 5.0);
        assert_eq!(s.boundary(), 15);
        assert_eq!(s.phase(), Phase::One);
        assert_eq!(s.tracker(), 20);
        assert_eq!(s.alpha0_prime(), 10.0);
        assert!(s.pi1_check(&Fitness::pair(20, 0.0)));
        assert!(s.violations().is_empty());
        // β = 3, opt = 2 → boundary 6 > β, phase two from the start
        assert_eq!(system(&three_sets(), 2.0).phase(), Phase::Two);
    }

    #[test]
    fn pi_conditions() {
        let p = line_cover(20);
        let s = system(&p, 5.0);
        // f1 at or below (p+2δ)·opt = 10 passes for any cost
        assert!(s.pi1_check(&Fitness::pair(10, 1e9)));
        assert!(!s.pi1_check(&Fitness::pair(11, 1e9)));
        // equality case of π2 at the boundary: f2 = ln(10/4)·5
        let edge = 5.0 * (10.0f64 / 4.0).ln();
        assert!(s.pi2_check(&Fitness::pair(15, edge)));
        assert!(!s.pi2_check(&Fitness::pair(15, edge + 1e-6)));
        assert!(s.pi2_check(&Fitness::pair(14, edge + 1.0)));
    }

    #[test]
    fn advance_relations() {
        let p = line_cover(20);
        let s = system(&p, 5.0);
        let x = Fitness::pair(18, 2.0);
        assert!(s.advances_phase1(&Fitness::pair(18, 2.0), &x));
        assert!(!s.advances_phase1(&Fitness::pair(18, 3.0), &x));
        // one level down for one unit of cost: 7 ≤ (1 − 1/5)·8 = 6.4 fails
        assert!(!s.advances_phase1(&Fitness::pair(17, 3.0), &x));
        // two levels down: 6 ≤ 6.4 holds
        assert!(s.advances_phase1(&Fitness::pair(16, 3.0), &x));
        assert!(s.advances_phase2(&Fitness::pair(17, 3.0), &x));
        assert!(!s.advances_phase2(&Fitness::pair(18, 2.5), &x));
        assert!(!s.advances_phase2(&Fitness::pair(17, 3.5), &x));
    }

    #[test]
    fn scripted_three_set_trace() {
        let p = three_sets();
        let zero = p.evaluate(Subset::empty(3));
        let mut s = BinSystem::new(&p, 2.0, &zero).unwrap();
        let mut archive = ParetoArchive::with_member(zero);
        assert_eq!(s.tracker(), 3);

        // S1 covers two elements at cost 1: level 1
        let s1 = p.evaluate(Subset::from_indices(3, [0]));
        let out = archive.insert(s1.clone());
        s.observe(1, &s1, &out, &archive);
        assert_eq!(s.tracker(), 1);
        assert!(s.events().iter().any(|e| e.kind == EventKind::TrackerMoved && e.tracker == 1));

        // level 1 at cost 5: no level drop against S1, too expensive a jump from ∅
        let heavy = Individual {
            bits: Subset::from_indices(3, [0, 1]),
            fitness: Fitness::pair(1, 5.0),
        };
        let n_events = s.events().len();
        s.observe(2, &heavy, &InsertOutcome::Rejected { by: 0 }, &archive);
        let tail = &s.events()[n_events..];
        assert_eq!(tail.len(), 1);
        assert_eq!(tail[0].kind, EventKind::RejectedNoAdvance);
        assert_eq!(s.bin(1), Some(&s1));

        let both = p.evaluate(Subset::from_indices(3, [0, 1]));
        let out = archive.insert(both.clone());
        s.observe(3, &both, &out, &archive);
        assert_eq!(s.tracker(), 0);
        assert_eq!(s.hitting_time(), Some(3));
        assert!(s.violations().is_empty(), "{:?}", s.violations());
    }

    #[test]
    fn rejected_candidate_brings_in_its_dominator() {
        let p = three_sets();
        let zero = p.evaluate(Subset::empty(3));
        let mut s = BinSystem::new(&p, 2.0, &zero).unwrap();
        let mut archive = ParetoArchive::with_member(zero);
        let s1 = p.evaluate(Subset::from_indices(3, [0]));
        let out = archive.insert(s1.clone());
        s.observe(1, &s1, &out, &archive);
        // S3 alone is level 0 at cost 3; {S1,S3} is dominated by it
        let s3 = p.evaluate(Subset::from_indices(3, [2]));
        archive.insert(s3);
        let worse = p.evaluate(Subset::from_indices(3, [0, 2]));
        let out = archive.insert(worse.clone());
        assert!(!out.inserted());
        s.observe(2, &worse, &out, &archive);
        assert_eq!(s.dominator_choices().len(), 1);
        assert_eq!(s.dominator_choices()[0].chosen.level, 0);
        assert_eq!(s.tracker(), 0);
    }

    #[test]
    fn lock_step_runs_are_sound() {
        let p4 = cds_problem(&GraphInstance::new("p4", 4, vec![(0, 1), (1, 2), (2, 3)]).unwrap()).unwrap();
        let line = line_cover(12);
        let blocks = blocks();
        assert_eq!(system(&blocks, 3.0).phase(), Phase::One);
        let mut entered_two = 0;
        for (p, opt) in [(&p4, 2.0), (&line, 12.0), (&blocks, 3.0)] {
            let t = default_iterations(p, 10.0);
            for seed in 0..40 {
                let mut s = system(p, opt);
                run_observed(p, &GsemoConfig::new(t, seed), &mut s);
                assert!(s.violations().is_empty(), "{} seed {seed}: {:?}", p.name(), s.violations());
                assert!(s.events().windows(2).all(|w| w[0].iteration <= w[1].iteration));
                assert!(s.hitting_time().is_some());
                entered_two += s.events().iter().filter(|e| e.kind == EventKind::PhaseEnteredTwo).count();
            }
        }
        assert_eq!(entered_two, 40);
    }

    #[test]
    fn report_handles_degenerate_and_censored() {
        let zero = HittingSample {
            instance: "empty".into(),
            beta: 0,
            n: 3,
            hit: Some(0),
            budget: 1,
        };
        let rows = hitting_time_report(&[zero]);
        assert_eq!(rows[0].mean, 0.0);
        assert!(rows[0].within_bound);
        assert!(rows[0].std_dev.is_none());

        let mk = |hit| HittingSample {
            instance: "x".into(),
            beta: 1,
            n: 1,
            hit,
            budget: 100,
        };
        let rows = hitting_time_report(&[mk(Some(1)), mk(Some(3)), mk(None)]);
        assert_eq!(rows[0].censored, 1);
        assert!((rows[0].mean - 104.0 / 3.0).abs() < 1e-12);
        assert_eq!(rows[0].p95, 100);
    }
}
