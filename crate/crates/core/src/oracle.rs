//! Exact evolution operator over partial states and the branch function
//! B(T) = ⟨Σ|H^T|U⟩ for tiny instances.
//!
//! States are packed base-3 integers (digit 0 = u, 1 = t, 2 = f, variable 0
//! least significant). Matrix entries are exact rationals.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cnf::{clause_status, ClauseStatus, Instance, Mark, PartialState};
use crate::dpll::{self, Heuristic};
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_MAX_VARS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateIndex(pub u64);

impl StateIndex {
    pub fn encode(state: &PartialState) -> Self {
        let mut x = 0u64;
        for &m in state.marks().iter().rev() {
            x = x * 3
                + match m {
                    Mark::Undetermined => 0,
                    Mark::True => 1,
                    Mark::False => 2,
                };
        }
        StateIndex(x)
    }

    pub fn decode(self, n_vars: usize) -> PartialState {
        let mut x = self.0;
        let marks = (0..n_vars)
            .map(|_| {
                let d = x % 3;
                x /= 3;
                [Mark::Undetermined, Mark::True, Mark::False][d as usize]
            })
            .collect();
        PartialState::from_marks(marks)
    }

    /// Index of the state with a single mark changed.
    fn with(self, var: usize, mark: Mark) -> Self {
        let p = 3u64.pow(var as u32);
        let old = (self.0 / p) % 3;
        let new = match mark {
            Mark::Undetermined => 0,
            Mark::True => 1,
            Mark::False => 2,
        };
        StateIndex(self.0 - old * p + new * p)
    }
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Column ⟨·|H|S⟩ of the evolution operator for a non-violating state.
///
/// With unit clauses present the weights are h(j|S)·g(x|S,j) and sum to 1.
/// Without them every chosen variable contributes both children with weight
/// h(j|S), so the weights sum to 2. A state that satisfies every clause has
/// no successors.
pub fn transition_probs(instance: &Instance, heuristic: Heuristic, state: &PartialState) -> Result<Vec<(StateIndex, BigRational)>> {
    let n = instance.n_vars();
    if state.len() != n {
        return Err(Error::InvalidArgument(format!("state over {} variables, instance has {n}", state.len())));
    }
    let mut by_len: [Vec<usize>; 4] = Default::default();
    for (ci, c) in instance.clauses().iter().enumerate() {
        match clause_status(c, state) {
            ClauseStatus::Violated => return Err(Error::InvalidArgument("transition_probs on a violating state".into())),
            ClauseStatus::Satisfied => {}
            ClauseStatus::Undetermined(k) => by_len[k.min(3)].push(ci),
        }
    }
    let here = StateIndex::encode(state);
    let free_lits = |ci: usize| {
        instance.clauses()[ci].literals().iter().copied().filter(|l| state.get(l.var as usize) == Mark::Undetermined).collect::<Vec<_>>()
    };
    let mut out: BTreeMap<StateIndex, BigRational> = BTreeMap::new();

    if !by_len[1].is_empty() {
        let w = ratio(1, by_len[1].len());
        for &ci in &by_len[1] {
            let l = free_lits(ci)[0];
            *out.entry(here.with(l.var as usize, l.satisfying_mark())).or_insert_with(BigRational::zero) += &w;
        }
        return Ok(out.into_iter().collect());
    }
    if by_len[2].is_empty() && by_len[3].is_empty() {
        return Ok(Vec::new());
    }

    // h(j|S) for the split case.
    let mut h: BTreeMap<usize, BigRational> = BTreeMap::new();
    match heuristic {
        Heuristic::Uc | Heuristic::Sc1 => {
            let w = ratio(1, state.n_undetermined());
            for v in (0..n).filter(|&v| state.get(v) == Mark::Undetermined) {
                h.insert(v, w.clone());
            }
        }
        Heuristic::Guc => {
            let shortest = if by_len[2].is_empty() { &by_len[3] } else { &by_len[2] };
            for &ci in shortest {
                let lits = free_lits(ci);
                let w = ratio(1, shortest.len() * lits.len());
                for l in lits {
                    *h.entry(l.var as usize).or_insert_with(BigRational::zero) += &w;
                }
            }
        }
    }
    for (v, w) in h {
        for mark in [Mark::True, Mark::False] {
            *out.entry(here.with(v, mark)).or_insert_with(BigRational::zero) += &w;
        }
    }
    Ok(out.into_iter().collect())
}

fn is_violating(instance: &Instance, state: &PartialState) -> bool {
    crate::cnf::violates(instance, state)
}

/// Sparse column-major operator restricted to a set of basis states that is
/// closed under successors.
#[derive(Clone, Debug)]
pub struct EvolutionOperator {
    n_vars: usize,
    columns: BTreeMap<StateIndex, Vec<(StateIndex, BigRational)>>,
}

impl EvolutionOperator {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_states(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.values().map(Vec::len).sum()
    }

    pub fn column(&self, s: StateIndex) -> &[(StateIndex, BigRational)] {
        self.columns.get(&s).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entry(&self, to: StateIndex, from: StateIndex) -> BigRational {
        self.column(from).iter().find(|(s, _)| *s == to).map(|(_, w)| w.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn states(&self) -> impl Iterator<Item = StateIndex> + '_ {
        self.columns.keys().copied()
    }

    /// Reachable-only operator: forward closure of the successors of |U⟩.
    pub fn reachable(instance: &Instance, heuristic: Heuristic, max_vars: usize) -> Result<Self> {
        check_cap(instance, max_vars)?;
        let n = instance.n_vars();
        let root = StateIndex::encode(&PartialState::undetermined(n));
        let mut columns = BTreeMap::new();
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            if columns.contains_key(&s) {
                continue;
            }
            let col = column_for(instance, heuristic, s)?;
            for (t, _) in &col {
                if !columns.contains_key(t) {
                    queue.push_back(*t);
                }
            }
            columns.insert(s, col);
        }
        Ok(EvolutionOperator { n_vars: n, columns })
    }

    /// CSV dump, `row,col,numerator,denominator` per nonzero, rows and
    /// columns as packed state indices.
    pub fn dump(&self) -> String {
        let mut s = String::from("row,col,numerator,denominator\n");
        for (from, col) in &self.columns {
            for (to, w) in col {
                let _ = writeln!(s, "{},{},{},{}", to.0, from.0, w.numer(), w.denom());
            }
        }
        s
    }

    /// Applies H to a sparse vector.
    pub fn apply(&self, v: &HashMap<StateIndex, BigRational>) -> HashMap<StateIndex, BigRational> {
        let mut out: HashMap<StateIndex, BigRational> = HashMap::with_capacity(v.len());
        for (s, x) in v {
            for (t, w) in self.column(*s) {
                *out.entry(*t).or_insert_with(BigRational::zero) += x * w;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// Applies the transpose of H to a vector over the operator's states.
    pub fn apply_transposed(&self, b: &HashMap<StateIndex, BigRational>) -> HashMap<StateIndex, BigRational> {
        self.columns
            .iter()
            .map(|(s, col)| {
                let mut acc = BigRational::zero();
                for (t, w) in col {
                    if let Some(x) = b.get(t) {
                        acc += w * x;
                    }
                }
                (*s, acc)
            })
            .collect()
    }
}

fn check_cap(instance: &Instance, max_vars: usize) -> Result<()> {
    if instance.n_vars() > max_vars {
        return Err(Error::Resource(format!("{} variables exceeds the exact-oracle cap of {max_vars}", instance.n_vars())));
    }
    Ok(())
}

fn column_for(instance: &Instance, heuristic: Heuristic, s: StateIndex) -> Result<Vec<(StateIndex, BigRational)>> {
    let state = s.decode(instance.n_vars());
    if is_violating(instance, &state) {
        Ok(vec![(s, BigRational::one())])
    } else {
        transition_probs(instance, heuristic, &state)
    }
}

/// Operator over the full 3^N basis.
pub fn build_evolution_operator(instance: &Instance, heuristic: Heuristic) -> Result<EvolutionOperator> {
    build_evolution_operator_capped(instance, heuristic, DEFAULT_MAX_VARS)
}

pub fn build_evolution_operator_capped(instance: &Instance, heuristic: Heuristic, max_vars: usize) -> Result<EvolutionOperator> {
    check_cap(instance, max_vars)?;
    let n = instance.n_vars();
    let mut columns = BTreeMap::new();
    for x in 0..3u64.pow(n as u32) {
        let s = StateIndex(x);
        columns.insert(s, column_for(instance, heuristic, s)?);
    }
    Ok(EvolutionOperator { n_vars: n, columns })
}

/// B(0..=t_max), with a flag set when the instance is satisfiable (the
/// values then count contradiction leaves and still-open branches only).
#[derive(Clone, Debug)]
pub struct BranchFunction {
    pub values: Vec<BigRational>,
    pub instance_satisfiable: bool,
}

impl BranchFunction {
    pub fn compute(instance: &Instance, heuristic: Heuristic, t_max: usize) -> Result<Self> {
        let op = EvolutionOperator::reachable(instance, heuristic, DEFAULT_MAX_VARS)?;
        let root = StateIndex::encode(&PartialState::undetermined(instance.n_vars()));
        let mut v = HashMap::from([(root, BigRational::one())]);
        let mut values = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            values.push(v.values().fold(BigRational::zero(), |a, x| a + x));
            if t < t_max {
                v = op.apply(&v);
            }
        }
        Ok(BranchFunction { values, instance_satisfiable: instance.brute_force_satisfiable()? })
    }
}

/// B(T) = ⟨Σ|H^T|U⟩.
pub fn branch_function(instance: &Instance, heuristic: Heuristic, t: usize) -> Result<BranchFunction> {
    BranchFunction::compute(instance, heuristic, t)
}

/// b_T(U) obtained from T transposed applications to |Σ⟩, the recursion
/// in terms of refutation-tree sizes from each state.
pub fn branch_function_transposed(instance: &Instance, heuristic: Heuristic, t_max: usize) -> Result<Vec<BigRational>> {
    let op = EvolutionOperator::reachable(instance, heuristic, DEFAULT_MAX_VARS)?;
    let root = StateIndex::encode(&PartialState::undetermined(instance.n_vars()));
    let mut b: HashMap<StateIndex, BigRational> = op.states().map(|s| (s, BigRational::one())).collect();
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        out.push(b[&root].clone());
        if t < t_max {
            b = op.apply_transposed(&b);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationarySize {
    pub t_star: usize,
    pub b_star: BigRational,
}

/// Smallest T* ≥ 1 with B(T) = B(T*) on [T*, N+1], and B* = B(T*).
pub fn stationary_tree_size(instance: &Instance, heuristic: Heuristic) -> Result<StationarySize> {
    if instance.brute_force_satisfiable()? {
        return Err(Error::Satisfiable);
    }
    let n = instance.n_vars();
    let values = branch_function_transposed(instance, heuristic, n + 1)?;
    let last = &values[n + 1];
    let mut t_star = n + 1;
    while t_star > 1 && &values[t_star - 1] == last {
        t_star -= 1;
    }
    if t_star > n {
        return Err(Error::numeric("branch function not stationary by T = N", n as f64, f64::NAN));
    }
    Ok(StationarySize { t_star, b_star: last.clone() })
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Mean and standard error of the DPLL leaf count over independent runs.
pub fn monte_carlo_leaf_mean(instance: &Instance, heuristic: Heuristic, n_trials: usize, seed: u64) -> Result<(f64, f64)> {
    if n_trials < 2 {
        return Err(Error::InvalidArgument("need at least two trials".into()));
    }
    let leaves: Vec<Option<u64>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|i| {
            let st = dpll::solve(instance, heuristic, rng::derive_seed(seed, i, 0));
            (!st.result.is_sat()).then_some(st.b_leaves)
        })
        .collect();
    let leaves: Vec<f64> = leaves.into_iter().map(|x| x.map(|b| b as f64).ok_or(Error::Satisfiable)).collect::<Result<_>>()?;
    let n = leaves.len() as f64;
    let mean = leaves.iter().sum::<f64>() / n;
    let var = leaves.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}
