//! CNF formulas with clauses of one to three literals, partial assignments
//! over {u, t, f}, and random 2+p-SAT generation.

use std::fmt;

use rand::seq::index;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng;

pub mod dimacs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, negated: !self.negated }
    }

    /// The mark that makes this literal true.
    pub fn satisfying_mark(self) -> Mark {
        if self.negated {
            Mark::False
        } else {
            Mark::True
        }
    }

    /// DIMACS integer: 1-based variable, negative when negated.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

/// Between one and three literals. Hand-built clauses may repeat a variable
/// (e.g. the tautology `x ∨ ¬x`); generated clauses never do.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(lits: Vec<Literal>) -> Result<Self> {
        if lits.is_empty() || lits.len() > 3 {
            return Err(Error::InvalidArgument(format!("clause length {} not in 1..=3", lits.len())));
        }
        Ok(Clause { lits })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    Undetermined,
    True,
    False,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Violated,
    /// Number of literals whose variable is still undetermined.
    Undetermined(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseVector {
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
}

impl ClauseVector {
    pub fn new(c1: usize, c2: usize, c3: usize) -> Self {
        ClauseVector { c1, c2, c3 }
    }

    pub fn total(&self) -> usize {
        self.c1 + self.c2 + self.c3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n_vars: usize,
    clauses: Vec<Clause>,
}

impl Instance {
    pub fn new(n_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(l) = c.literals().iter().find(|l| l.var as usize >= n_vars) {
                return Err(Error::InvalidArgument(format!("clause {i}: variable {} out of range for {n_vars} variables", l.var + 1)));
            }
        }
        Ok(Instance { n_vars, clauses })
    }

    /// Builds an instance from DIMACS-style signed 1-based integers.
    pub fn from_signed(n_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let mut out = Vec::with_capacity(clauses.len());
        for c in clauses {
            let lits = c
                .iter()
                .map(|&x| {
                    if x == 0 {
                        Err(Error::InvalidArgument("literal 0".into()))
                    } else {
                        Ok(Literal { var: (x.unsigned_abs() - 1) as u32, negated: x < 0 })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Clause::new(lits)?);
        }
        Instance::new(n_vars, out)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Clauses per variable.
    pub fn ratio(&self) -> f64 {
        self.clauses.len() as f64 / self.n_vars as f64
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.literals().iter().any(|l| assignment[l.var as usize] != l.negated))
    }

    /// Exhaustive satisfiability check; intended for tiny instances.
    pub fn brute_force_satisfiable(&self) -> Result<bool> {
        if self.n_vars > 24 {
            return Err(Error::Resource(format!("brute force over {} variables", self.n_vars)));
        }
        let mut assignment = vec![false; self.n_vars];
        for bits in 0u64..(1u64 << self.n_vars) {
            for (i, a) in assignment.iter_mut().enumerate() {
                *a = bits >> i & 1 == 1;
            }
            if self.is_satisfied_by(&assignment) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialState {
    marks: Vec<Mark>,
    n_undetermined: usize,
}

impl PartialState {
    pub fn undetermined(n_vars: usize) -> Self {
        PartialState { marks: vec![Mark::Undetermined; n_vars], n_undetermined: n_vars }
    }

    pub fn from_marks(marks: Vec<Mark>) -> Self {
        let n_undetermined = marks.iter().filter(|&&m| m == Mark::Undetermined).count();
        PartialState { marks, n_undetermined }
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn get(&self, var: usize) -> Mark {
        self.marks[var]
    }

    pub fn set(&mut self, var: usize, mark: Mark) {
        let old = std::mem::replace(&mut self.marks[var], mark);
        match (old == Mark::Undetermined, mark == Mark::Undetermined) {
            (true, false) => self.n_undetermined -= 1,
            (false, true) => self.n_undetermined += 1,
            _ => {}
        }
    }

    pub fn n_undetermined(&self) -> usize {
        self.n_undetermined
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        match self.marks[lit.var as usize] {
            Mark::Undetermined => None,
            Mark::True => Some(!lit.negated),
            Mark::False => Some(lit.negated),
        }
    }
}

pub fn clause_status(clause: &Clause, state: &PartialState) -> ClauseStatus {
    let mut free = 0;
    for &l in clause.literals() {
        match state.literal_value(l) {
            Some(true) => return ClauseStatus::Satisfied,
            Some(false) => {}
            None => free += 1,
        }
    }
    if free == 0 {
        ClauseStatus::Violated
    } else {
        ClauseStatus::Undetermined(free)
    }
}

/// Reference O(M·k) count of undetermined clauses by type.
pub fn clause_vector(instance: &Instance, state: &PartialState) -> ClauseVector {
    let mut v = ClauseVector::default();
    for c in instance.clauses() {
        match clause_status(c, state) {
            ClauseStatus::Undetermined(1) => v.c1 += 1,
            ClauseStatus::Undetermined(2) => v.c2 += 1,
            ClauseStatus::Undetermined(_) => v.c3 += 1,
            _ => {}
        }
    }
    v
}

pub fn violates(instance: &Instance, state: &PartialState) -> bool {
    instance.clauses().iter().any(|c| clause_status(c, state) == ClauseStatus::Violated)
}

/// Random 2+p-SAT: `n_2clauses` 2-clauses then `n_3clauses` 3-clauses, each on
/// distinct uniformly drawn variables with fair signs. Clauses are drawn
/// independently, so the same clause may occur twice.
pub fn generate_random_instance(n_vars: usize, n_2clauses: usize, n_3clauses: usize, seed: u64) -> Result<Instance> {
    if n_3clauses > 0 && n_vars < 3 {
        return Err(Error::InvalidArgument(format!("3-clauses need at least 3 variables, got {n_vars}")));
    }
    if n_2clauses > 0 && n_vars < 2 {
        return Err(Error::InvalidArgument(format!("2-clauses need at least 2 variables, got {n_vars}")));
    }
    if n_vars == 0 || n_vars > u32::MAX as usize {
        return Err(Error::InvalidArgument(format!("bad variable count {n_vars}")));
    }
    let mut rng = rng::stream(seed);
    let mut clauses = Vec::with_capacity(n_2clauses + n_3clauses);
    for k in std::iter::repeat_n(2, n_2clauses).chain(std::iter::repeat_n(3, n_3clauses)) {
        let lits = index::sample(&mut rng, n_vars, k).into_iter().map(|v| Literal { var: v as u32, negated: rng.gen::<bool>() }).collect();
        clauses.push(Clause { lits });
    }
    Ok(Instance { n_vars, clauses })
}

/// Random 3-SAT at ratio `alpha`, clause count rounded to nearest.
pub fn random_3sat(n_vars: usize, alpha: f64, seed: u64) -> Result<Instance> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("ratio {alpha}")));
    }
    generate_random_instance(n_vars, 0, (alpha * n_vars as f64).round() as usize, seed)
}

/// The three small instances used as golden references for the exact oracle.
pub mod examples {
    use super::Instance;

    /// x1 ∧ ¬x1.
    pub fn one_variable() -> Instance {
        Instance::from_signed(1, &[&[1], &[-1]]).unwrap()
    }

    /// All four 2-clauses over x1, x2.
    pub fn two_variables() -> Instance {
        Instance::from_signed(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]).unwrap()
    }

    /// The four 2-clauses plus the tautology x3 ∨ ¬x3.
    pub fn three_variables() -> Instance {
        Instance::from_signed(3, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2], &[3, -3]]).unwrap()
    }
}
