//! Depth-first DPLL with unit propagation and chronological backtracking,
//! instrumented to record the search tree.
//!
//! Clause bookkeeping uses per-clause counters of true and undetermined
//! literals. Undetermined, unsatisfied clauses live in index sets bucketed
//! by their number of free literals (bucket 0 holds violated clauses), so
//! the live clause vector and uniform clause sampling are both O(1).

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cnf::{ClauseVector, Instance, Literal, Mark, PartialState};
use crate::error::Error;
use crate::rng::{self, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heuristic {
    /// Unit clause if any, otherwise a uniform unset variable with a fair sign.
    #[serde(rename = "UC")]
    Uc,
    /// Uniform literal of a uniform shortest clause, asserted true.
    #[serde(rename = "GUC")]
    Guc,
    /// Unit clause if any, otherwise a uniform unset variable signed by its
    /// majority among 3-clauses.
    #[serde(rename = "SC1")]
    Sc1,
}

impl Heuristic {
    pub const ALL: [Heuristic; 3] = [Heuristic::Uc, Heuristic::Guc, Heuristic::Sc1];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Uc => "UC",
            Heuristic::Guc => "GUC",
            Heuristic::Sc1 => "SC1",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().as_str() {
            "UC" => Ok(Heuristic::Uc),
            "GUC" => Ok(Heuristic::Guc),
            "SC1" | "SC_1" => Ok(Heuristic::Sc1),
            _ => Err(Error::InvalidArgument(format!("unknown heuristic `{s}`"))),
        }
    }
}

/// Position of a 2+p-SAT formula in the (p, α) plane at assigned fraction t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub p: f64,
    pub alpha: f64,
    pub t: f64,
}

impl PhasePoint {
    /// From raw counts; `None` when no 2- or 3-clauses remain.
    pub fn from_counts(cv: ClauseVector, n_assigned: usize, n_vars: usize) -> Option<Self> {
        let m = cv.c2 + cv.c3;
        if m == 0 || n_assigned >= n_vars {
            return None;
        }
        let free = (n_vars - n_assigned) as f64;
        Some(PhasePoint { p: cv.c3 as f64 / m as f64, alpha: m as f64 / free, t: n_assigned as f64 / n_vars as f64 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveResult {
    Sat(Vec<bool>),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveStats {
    /// Split nodes Q.
    pub q_splits: u64,
    /// Leaves B: contradictions plus the solution leaf, if any.
    pub b_leaves: u64,
    /// Phase point at every split node, in visit order.
    pub cloud: Vec<PhasePoint>,
    /// Shallowest split whose second branch was entered.
    pub g_node: Option<PhasePoint>,
    pub result: SolveResult,
}

impl SolveStats {
    pub fn cloud(&self) -> &[PhasePoint] {
        &self.cloud
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    Quiescent,
    Contradiction,
}

/// Membership-indexed vector for O(1) insert, remove and uniform sampling.
#[derive(Clone, Debug)]
struct IndexSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl IndexSet {
    fn new(capacity: usize) -> Self {
        IndexSet { items: Vec::new(), pos: vec![ABSENT; capacity] }
    }

    fn insert(&mut self, x: u32) {
        debug_assert_eq!(self.pos[x as usize], ABSENT);
        self.pos[x as usize] = self.items.len() as u32;
        self.items.push(x);
    }

    fn remove(&mut self, x: u32) {
        let i = self.pos[x as usize];
        debug_assert_ne!(i, ABSENT);
        let last = self.items.pop().unwrap();
        if last != x {
            self.items[i as usize] = last;
            self.pos[last as usize] = i;
        }
        self.pos[x as usize] = ABSENT;
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn sample(&self, rng: &mut Rng) -> u32 {
        self.items[rng.gen_range(0..self.items.len())]
    }
}

#[derive(Clone, Copy, Debug)]
struct Occurrence {
    clause: u32,
    negated: bool,
}

#[derive(Clone, Debug)]
struct Decision {
    trail_len: usize,
    lit: Literal,
    flipped: bool,
    point: PhasePoint,
}

/// Information passed to a split observer.
pub struct SplitEvent<'a> {
    pub state: &'a PartialState,
    pub clause_vector: ClauseVector,
    pub point: PhasePoint,
    pub literal: Literal,
    pub depth: usize,
}

/// Mutable search state over a borrowed instance.
pub struct Solver<'a> {
    instance: &'a Instance,
    occ: Vec<Vec<Occurrence>>,
    state: PartialState,
    n_true: Vec<u8>,
    n_free: Vec<u8>,
    buckets: [IndexSet; 4],
    free_vars: IndexSet,
    trail: Vec<Literal>,
}

impl<'a> Solver<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let n = instance.n_vars();
        let m = instance.n_clauses();
        let mut occ = vec![Vec::new(); n];
        let mut buckets = [IndexSet::new(m), IndexSet::new(m), IndexSet::new(m), IndexSet::new(m)];
        let mut n_free = Vec::with_capacity(m);
        for (ci, c) in instance.clauses().iter().enumerate() {
            for l in c.literals() {
                occ[l.var as usize].push(Occurrence { clause: ci as u32, negated: l.negated });
            }
            n_free.push(c.len() as u8);
            buckets[c.len()].insert(ci as u32);
        }
        let mut free_vars = IndexSet::new(n);
        for v in 0..n {
            free_vars.insert(v as u32);
        }
        Solver { instance, occ, state: PartialState::undetermined(n), n_true: vec![0; m], n_free, buckets, free_vars, trail: Vec::new() }
    }

    pub fn state(&self) -> &PartialState {
        &self.state
    }

    /// Live counts of undetermined clauses by type.
    pub fn clause_vector(&self) -> ClauseVector {
        ClauseVector::new(self.buckets[1].len(), self.buckets[2].len(), self.buckets[3].len())
    }

    pub fn has_violated(&self) -> bool {
        !self.buckets[0].is_empty()
    }

    /// No clause is violated or undetermined.
    pub fn all_satisfied(&self) -> bool {
        self.buckets.iter().all(IndexSet::is_empty)
    }

    pub fn n_assigned(&self) -> usize {
        self.trail.len()
    }

    pub fn phase_point(&self) -> Option<PhasePoint> {
        PhasePoint::from_counts(self.clause_vector(), self.n_assigned(), self.instance.n_vars())
    }

    fn bucket_key(&self, c: usize) -> Option<usize> {
        if self.n_true[c] > 0 {
            None
        } else {
            Some(self.n_free[c] as usize)
        }
    }

    fn rebucket(&mut self, c: usize, old: Option<usize>) {
        let new = self.bucket_key(c);
        if old != new {
            if let Some(k) = old {
                self.buckets[k].remove(c as u32);
            }
            if let Some(k) = new {
                self.buckets[k].insert(c as u32);
            }
        }
    }

    /// Sets `lit` true. The variable must be undetermined.
    pub fn assign(&mut self, lit: Literal) {
        let v = lit.var as usize;
        debug_assert_eq!(self.state.get(v), Mark::Undetermined);
        self.state.set(v, lit.satisfying_mark());
        self.free_vars.remove(lit.var);
        self.trail.push(lit);
        for i in 0..self.occ[v].len() {
            let o = self.occ[v][i];
            let c = o.clause as usize;
            let old = self.bucket_key(c);
            if o.negated == lit.negated {
                self.n_true[c] += 1;
            }
            self.n_free[c] -= 1;
            self.rebucket(c, old);
        }
    }

    fn unassign_last(&mut self) {
        let lit = self.trail.pop().expect("trail is not empty");
        let v = lit.var as usize;
        for i in 0..self.occ[v].len() {
            let o = self.occ[v][i];
            let c = o.clause as usize;
            let old = self.bucket_key(c);
            if o.negated == lit.negated {
                self.n_true[c] -= 1;
            }
            self.n_free[c] += 1;
            self.rebucket(c, old);
        }
        self.state.set(v, Mark::Undetermined);
        self.free_vars.insert(lit.var);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            self.unassign_last();
        }
    }

    fn free_literals(&self, c: usize) -> impl Iterator<Item = Literal> + '_ {
        self.instance.clauses()[c].literals().iter().copied().filter(|l| self.state.get(l.var as usize) == Mark::Undetermined)
    }

    fn unit_literal(&self, c: usize) -> Literal {
        self.free_literals(c).next().expect("unit clause has a free literal")
    }

    /// Chooses the next literal to set true.
    ///
    /// Panics when no variable is undetermined.
    pub fn select_literal(&self, heuristic: Heuristic, rng: &mut Rng) -> Literal {
        assert!(!self.free_vars.is_empty(), "select_literal called with every variable assigned");
        if !self.buckets[1].is_empty() {
            return self.unit_literal(self.buckets[1].sample(rng) as usize);
        }
        match heuristic {
            Heuristic::Uc => self.uniform_variable(rng),
            Heuristic::Guc => {
                let Some(k) = (2..=3).find(|&k| !self.buckets[k].is_empty()) else {
                    return self.uniform_variable(rng);
                };
                let c = self.buckets[k].sample(rng) as usize;
                let lits: Vec<Literal> = self.free_literals(c).collect();
                lits[rng.gen_range(0..lits.len())]
            }
            Heuristic::Sc1 => {
                let v = self.free_vars.sample(rng);
                let (mut pos, mut neg) = (0usize, 0usize);
                for o in &self.occ[v as usize] {
                    if self.bucket_key(o.clause as usize) == Some(3) {
                        if o.negated {
                            neg += 1;
                        } else {
                            pos += 1;
                        }
                    }
                }
                let negated = match pos.cmp(&neg) {
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => rng.gen(),
                };
                Literal { var: v, negated }
            }
        }
    }

    fn uniform_variable(&self, rng: &mut Rng) -> Literal {
        Literal { var: self.free_vars.sample(rng), negated: rng.gen() }
    }

    /// Repeatedly satisfies a uniformly chosen unit clause until none is
    /// left or some clause is violated.
    pub fn unit_propagate(&mut self, rng: &mut Rng) -> Propagation {
        loop {
            if self.has_violated() {
                return Propagation::Contradiction;
            }
            if self.buckets[1].is_empty() {
                return Propagation::Quiescent;
            }
            let c = self.buckets[1].sample(rng) as usize;
            let lit = self.unit_literal(c);
            self.assign(lit);
        }
    }

    fn assignment(&self) -> Vec<bool> {
        self.state.marks().iter().map(|&m| m == Mark::True).collect()
    }
}

/// Runs DPLL to completion on `instance` with a fresh stream seeded by `seed`.
pub fn solve(instance: &Instance, heuristic: Heuristic, seed: u64) -> SolveStats {
    let mut rng = rng::stream(seed);
    solve_with(instance, heuristic, &mut rng, |_| {})
}

/// DPLL with a callback invoked at every split node, after the split literal
/// is chosen and before it is asserted.
pub fn solve_with<F>(instance: &Instance, heuristic: Heuristic, rng: &mut Rng, mut on_split: F) -> SolveStats
where
    F: FnMut(&SplitEvent<'_>),
{
    let mut s = Solver::new(instance);
    let mut decisions: Vec<Decision> = Vec::new();
    let mut stats = SolveStats { q_splits: 0, b_leaves: 0, cloud: Vec::new(), g_node: None, result: SolveResult::Unsat };
    let mut g_depth = usize::MAX;

    loop {
        if s.unit_propagate(rng) == Propagation::Contradiction {
            stats.b_leaves += 1;
            loop {
                let Some(d) = decisions.last_mut() else {
                    return stats;
                };
                let (len, lit) = (d.trail_len, d.lit);
                if d.flipped {
                    decisions.pop();
                    continue;
                }
                d.flipped = true;
                let depth = decisions.len() - 1;
                if depth < g_depth {
                    g_depth = depth;
                    stats.g_node = Some(decisions[depth].point);
                }
                s.undo_to(len);
                s.assign(lit.negate());
                break;
            }
            continue;
        }
        if s.all_satisfied() {
            stats.b_leaves += 1;
            let assignment = s.assignment();
            assert!(instance.is_satisfied_by(&assignment), "DPLL produced a non-model");
            stats.result = SolveResult::Sat(assignment);
            return stats;
        }
        let point = s.phase_point().expect("an undetermined clause of length >= 2 exists at a split");
        let lit = s.select_literal(heuristic, rng);
        on_split(&SplitEvent { state: s.state(), clause_vector: s.clause_vector(), point, literal: lit, depth: decisions.len() });
        stats.q_splits += 1;
        stats.cloud.push(point);
        decisions.push(Decision { trail_len: s.trail.len(), lit, flipped: false, point });
        s.assign(lit);
    }
}

/// Per-run record emitted as JSON.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub result: String,
    pub q_splits: u64,
    pub b_leaves: u64,
    pub g_node: Option<PhasePoint>,
    pub cloud: Vec<PhasePoint>,
    pub seed: u64,
    pub heuristic: Heuristic,
    pub n_vars: usize,
    pub alpha0: f64,
}

impl RunRecord {
    pub fn new(stats: &SolveStats, instance: &Instance, heuristic: Heuristic, seed: u64) -> Self {
        RunRecord {
            result: if stats.result.is_sat() { "SAT" } else { "UNSAT" }.to_string(),
            q_splits: stats.q_splits,
            b_leaves: stats.b_leaves,
            g_node: stats.g_node,
            cloud: stats.cloud.clone(),
            seed,
            heuristic,
            n_vars: instance.n_vars(),
            alpha0: instance.ratio(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{clause_vector, examples, generate_random_instance, random_3sat};
    use proptest::prelude::*;

    #[test]
    fn one_variable_refutes_without_split() {
        for h in Heuristic::ALL {
            let st = solve(&examples::one_variable(), h, 1);
            assert_eq!(st.result, SolveResult::Unsat);
            assert_eq!((st.b_leaves, st.q_splits), (1, 0));
            assert!(st.cloud().is_empty());
            assert!(st.g_node.is_none());
        }
    }

    #[test]
    fn two_variables_single_split() {
        for h in Heuristic::ALL {
            for seed in 0..50 {
                let st = solve(&examples::two_variables(), h, seed);
                assert_eq!(st.result, SolveResult::Unsat);
                assert_eq!((st.b_leaves, st.q_splits), (2, 1));
                assert_eq!(st.cloud(), &[PhasePoint { p: 0.0, alpha: 2.0, t: 0.0 }]);
                assert_eq!(st.g_node, Some(PhasePoint { p: 0.0, alpha: 2.0, t: 0.0 }));
            }
        }
    }

    #[test]
    fn propagation_after_split_contradicts() {
        let i2 = examples::two_variables();
        let mut s = Solver::new(&i2);
        let mut rng = rng::stream(0);
        assert_eq!(s.unit_propagate(&mut rng), Propagation::Quiescent);
        assert_eq!(s.n_assigned(), 0);
        s.assign(Literal::pos(0));
        assert_eq!(s.clause_vector(), ClauseVector::new(2, 0, 0));
        assert_eq!(s.unit_propagate(&mut rng), Propagation::Contradiction);
    }

    #[test]
    fn forced_unit_literal() {
        let inst = Instance::from_signed(4, &[&[-3], &[1, 2, 4], &[1, -2]]).unwrap();
        let s = Solver::new(&inst);
        for h in Heuristic::ALL {
            for seed in 0..10 {
                assert_eq!(s.select_literal(h, &mut rng::stream(seed)), Literal::neg(2));
            }
        }
    }

    #[test]
    fn sc1_majority_sign() {
        let inst = Instance::from_signed(5, &[&[1, 2, 3], &[1, 3, 4], &[1, 4, 5], &[-1, 2, 5]]).unwrap();
        let s = Solver::new(&inst);
        let mut rng = rng::stream(3);
        let mut saw = 0;
        for _ in 0..200 {
            let l = s.select_literal(Heuristic::Sc1, &mut rng);
            if l.var == 0 {
                assert!(!l.negated, "x1 occurs 3:1 positive");
                saw += 1;
            }
        }
        assert!(saw > 0);
    }

    #[test]
    fn guc_root_choice_in_two_variables_is_fair() {
        let i2 = examples::two_variables();
        let s = Solver::new(&i2);
        let mut rng = rng::stream(9);
        let n = 20_000;
        let x1 = (0..n).filter(|_| s.select_literal(Heuristic::Guc, &mut rng).var == 0).count();
        let f = x1 as f64 / n as f64;
        assert!((f - 0.5).abs() < 3.0 * (0.25f64 / n as f64).sqrt() + 1e-3, "{f}");
    }

    #[test]
    fn guc_satisfies_the_chosen_clause() {
        let inst = Instance::from_signed(3, &[&[-1, -2], &[1, 2, 3]]).unwrap();
        let s = Solver::new(&inst);
        let mut rng = rng::stream(1);
        for _ in 0..100 {
            let l = s.select_literal(Heuristic::Guc, &mut rng);
            assert!(l == Literal::neg(0) || l == Literal::neg(1));
        }
    }

    #[test]
    fn lower_sat_runs_are_backtrack_free_mostly() {
        let mut free = 0;
        for seed in 0..20 {
            let inst = random_3sat(500, 2.0, seed).unwrap();
            let st = solve(&inst, Heuristic::Guc, seed);
            assert!(st.result.is_sat());
            if st.b_leaves == 1 {
                free += 1;
            }
        }
        assert!(free >= 15, "{free}");
    }

    #[test]
    fn record_serializes() {
        let inst = examples::two_variables();
        let st = solve(&inst, Heuristic::Guc, 4);
        let rec = RunRecord::new(&st, &inst, Heuristic::Guc, 4);
        let js = serde_json::to_string(&rec).unwrap();
        assert!(js.contains("\"heuristic\":\"GUC\""));
        assert!(js.contains("\"result\":\"UNSAT\""));
        let back: RunRecord = serde_json::from_str(&js).unwrap();
        assert_eq!(back, rec);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_brute_force(n in 3usize..=12, ratio in 2.0f64..8.0, m2 in 0usize..6, seed: u64, h in 0usize..3) {
            let m3 = (ratio * n as f64) as usize;
            let inst = generate_random_instance(n, m2, m3, seed).unwrap();
            let heuristic = Heuristic::ALL[h];
            let mut rng = rng::stream(seed ^ 0xabc);
            let mut checked_splits = 0;
            let st = solve_with(&inst, heuristic, &mut rng, |ev| {
                assert_eq!(ev.clause_vector, clause_vector(&inst, ev.state));
                checked_splits += 1;
            });
            prop_assert_eq!(checked_splits as u64, st.q_splits);
            prop_assert_eq!(st.result.is_sat(), inst.brute_force_satisfiable().unwrap());
            match &st.result {
                SolveResult::Sat(a) => prop_assert!(inst.is_satisfied_by(a)),
                SolveResult::Unsat => prop_assert_eq!(st.q_splits + 1, st.b_leaves),
            }
        }
    }
}
