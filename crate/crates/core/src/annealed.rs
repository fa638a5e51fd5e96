//! Expected branch counts B̄(C⃗; T) under dynamical annealing for GUC.
//!
//! One step H̄ factorizes into two independent parts: the 1- and 2-clause
//! update (unit propagation or a split, with contradiction deaths) and the
//! 3-clause update. Each is applied to a dense field over (C₁, C₂, C₃).

use std::collections::BTreeMap;
use std::io::Write;

use crate::cnf::ClauseVector;
use crate::error::{Error, Result};

/// ln n! for n up to a fixed size.
struct LnFact(Vec<f64>);

impl LnFact {
    fn new(n: usize) -> Self {
        let mut v = Vec::with_capacity(n + 1);
        v.push(0.0);
        for i in 1..=n {
            v.push(v[i - 1] + (i as f64).ln());
        }
        LnFact(v)
    }

    fn choose(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

fn binom_pmf(lf: &LnFact, n: usize, k: usize, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    (lf.choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

/// Binomial(n, p) weights on their effective support.
#[derive(Clone, Debug)]
struct Kernel {
    start: usize,
    w: Vec<f64>,
}

const TAIL: f64 = 1e-16;

fn kernel(lf: &LnFact, n: usize, p: f64) -> Kernel {
    if n == 0 || p <= 0.0 {
        return Kernel { start: 0, w: vec![1.0] };
    }
    let mean = n as f64 * p;
    let sd = (mean * (1.0 - p)).sqrt();
    let lo = (mean - 12.0 * sd - 10.0).max(0.0) as usize;
    let hi = ((mean + 12.0 * sd + 10.0) as usize).min(n);
    let mut w: Vec<f64> = (lo..=hi).map(|k| binom_pmf(lf, n, k, p)).collect();
    let mut start = lo;
    let skip = w.iter().take_while(|&&x| x < TAIL).count().min(w.len() - 1);
    w.drain(..skip);
    start += skip;
    while w.len() > 1 && *w.last().unwrap() < TAIL {
        w.pop();
    }
    Kernel { start, w }
}

/// Row of H̄ for one source vector.
#[derive(Clone, Debug, Default)]
pub struct TransitionRow {
    pub entries: Vec<(ClauseVector, f64)>,
    /// Weight lost to contradictions.
    pub death: f64,
    /// Weight of branches that satisfy every clause.
    pub solved: f64,
}

impl TransitionRow {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

fn check_row_args(from: ClauseVector, t: usize, n: usize) -> Result<()> {
    if t >= n {
        return Err(Error::InvalidArgument(format!("T = {t} must be below N = {n}")));
    }
    if from.total() > 0 && n == 0 {
        return Err(Error::InvalidArgument("empty formula size".into()));
    }
    Ok(())
}

/// Full enumeration of the GUC row over (C₃′−C₃, w₂, z₂, w₁). A source with
/// neither unit nor 2-clauses splits on a 3-clause: one child satisfies it,
/// the other keeps it as a 2-clause.
pub fn guc_transition_row(from: ClauseVector, t: usize, n: usize) -> Result<TransitionRow> {
    check_row_args(from, t, n)?;
    let lf = LnFact::new(from.c1 + from.c2 + from.c3 + 2);
    let r = (n - t) as f64;
    let (c1p, c2p) = (from.c1, from.c2);
    let mut c3p = from.c3;
    let p3 = (3.0 / r).min(1.0);
    let p2 = (2.0 / r).min(1.0);
    let mut out: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
    let mut row = TransitionRow::default();

    // (C₁ part, C₂ shift before 3-clause reductions, weight)
    let mut a_terms: Vec<(usize, isize, f64)> = Vec::new();
    if c1p > 0 {
        let surv = (1.0 - 1.0 / (2.0 * r)).max(0.0).powi(c1p as i32 - 1);
        row.death = 1.0 - surv;
        for z2 in 0..=c2p {
            let pz = binom_pmf(&lf, c2p, z2, p2);
            for w1 in 0..=z2 {
                let w = surv * pz * binom_pmf(&lf, z2, w1, 0.5);
                a_terms.push((c1p - 1 + w1, -(z2 as isize), w));
            }
        }
    } else if c2p > 0 {
        for z2 in 0..c2p {
            let pz = binom_pmf(&lf, c2p - 1, z2, p2);
            for w1 in 0..=z2 {
                let w = pz * binom_pmf(&lf, z2, w1, 0.5);
                a_terms.push((w1, -(z2 as isize) - 1, w));
                a_terms.push((w1 + 1, -(z2 as isize) - 1, w));
            }
        }
    } else if c3p > 0 {
        c3p -= 1;
        a_terms.push((0, 0, 1.0));
        a_terms.push((0, 1, 1.0));
    } else {
        row.solved = 1.0;
        return Ok(row);
    }

    for k in 0..=c3p {
        let pk = binom_pmf(&lf, c3p, k, p3);
        for w2 in 0..=k {
            let b = pk * binom_pmf(&lf, k, w2, 0.5);
            for &(c1, dc2, a) in &a_terms {
                let c2 = (c2p as isize + dc2 + w2 as isize) as usize;
                *out.entry((c1, c2, c3p - k)).or_insert(0.0) += a * b;
            }
        }
    }
    row.entries = out.into_iter().filter(|e| e.1 > 0.0).map(|((a, b, c), w)| (ClauseVector::new(a, b, c), w)).collect();
    Ok(row)
}

/// Dense field B̄ over a bounding box of clause vectors.
#[derive(Clone, Debug)]
pub struct BranchCountField {
    pub t: usize,
    lo: [usize; 3],
    dims: [usize; 3],
    data: Vec<f64>,
}

impl BranchCountField {
    pub fn delta(c: ClauseVector) -> Self {
        BranchCountField { t: 0, lo: [c.c1, c.c2, c.c3], dims: [1, 1, 1], data: vec![1.0] }
    }

    fn empty(t: usize, lo: [usize; 3], hi: [usize; 3]) -> Self {
        let dims = [hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1];
        BranchCountField { t, lo, dims, data: vec![0.0; dims[0] * dims[1] * dims[2]] }
    }

    fn idx(&self, c1: usize, c2: usize, c3: usize) -> usize {
        ((c1 - self.lo[0]) * self.dims[1] + (c2 - self.lo[1])) * self.dims[2] + (c3 - self.lo[2])
    }

    fn hi(&self) -> [usize; 3] {
        [self.lo[0] + self.dims[0] - 1, self.lo[1] + self.dims[1] - 1, self.lo[2] + self.dims[2] - 1]
    }

    pub fn get(&self, c: ClauseVector) -> f64 {
        let hi = self.hi();
        if c.c1 < self.lo[0] || c.c2 < self.lo[1] || c.c3 < self.lo[2] || c.c1 > hi[0] || c.c2 > hi[1] || c.c3 > hi[2] {
            return 0.0;
        }
        self.data[self.idx(c.c1, c.c2, c.c3)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClauseVector, f64)> + '_ {
        let [d0, d1, d2] = self.dims;
        (0..d0 * d1 * d2).filter(move |&k| self.data[k] != 0.0).map(move |k| {
            let c3 = k % d2;
            let c2 = (k / d2) % d1;
            let c1 = k / (d1 * d2);
            (ClauseVector::new(c1 + self.lo[0], c2 + self.lo[1], c3 + self.lo[2]), self.data[k])
        })
    }

    pub fn mass(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn n_support(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0.0).count()
    }

    /// Mass-weighted means of (C₂, C₃).
    pub fn mean_c2_c3(&self) -> (f64, f64) {
        let m = self.mass();
        if m == 0.0 {
            return (0.0, 0.0);
        }
        let (a, b) = self.iter().fold((0.0, 0.0), |acc, (c, w)| (acc.0 + w * c.c2 as f64, acc.1 + w * c.c3 as f64));
        (a / m, b / m)
    }

    /// Smallest box holding the nonzero cells.
    fn shrink(self) -> Self {
        let mut lo = [usize::MAX; 3];
        let mut hi = [0usize; 3];
        let mut any = false;
        for (c, _) in self.iter() {
            any = true;
            for (d, v) in [c.c1, c.c2, c.c3].into_iter().enumerate() {
                lo[d] = lo[d].min(v);
                hi[d] = hi[d].max(v);
            }
        }
        if !any {
            return BranchCountField { t: self.t, lo: [0; 3], dims: [1, 1, 1], data: vec![0.0] };
        }
        let mut out = Self::empty(self.t, lo, hi);
        for (c, w) in self.iter() {
            let i = out.idx(c.c1, c.c2, c.c3);
            out.data[i] = w;
        }
        out
    }

    fn prune(&mut self, threshold: f64) -> f64 {
        let mut lost = 0.0;
        for x in self.data.iter_mut() {
            if *x != 0.0 && *x < threshold {
                lost += *x;
                *x = 0.0;
            }
        }
        lost
    }
}

/// Per-step bookkeeping of the annealed evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassPoint {
    pub t: usize,
    /// Alive + dead + solved: expected leaves of the tree grown so far.
    pub total_mass: f64,
    pub alive: f64,
    pub dead: f64,
    pub solved: f64,
    pub pruned: f64,
    /// Mean clause densities of alive branches, per initial variable.
    pub mean_c2: f64,
    pub mean_c3: f64,
}

#[derive(Clone, Debug)]
pub struct AnnealedRun {
    pub alpha0: f64,
    pub n: usize,
    pub curve: Vec<MassPoint>,
    pub final_field: BranchCountField,
}

impl AnnealedRun {
    /// (T, mass) at the end of the run: all alive mass gone.
    pub fn plateau(&self) -> &MassPoint {
        self.curve.last().expect("curve is never empty")
    }

    /// log₂(total mass)/N at the plateau.
    pub fn omega_bits(&self) -> f64 {
        self.plateau().total_mass.log2() / self.n as f64
    }
}

/// Moves d clauses out of axis `src` (into axis `dst` when given), with d
/// drawn from `kern[c_src]`. Output cells below `floor` are dropped and
/// their mass returned.
fn transfer(f: &BranchCountField, src: usize, dst: Option<usize>, kern: &[Kernel], floor: f64) -> (BranchCountField, f64) {
    let (lo, hi) = (f.lo, f.hi());
    let max_k = (lo[src]..=hi[src]).map(|c| kern[c].start + kern[c].w.len() - 1).max().unwrap_or(0);
    let mut out_lo = lo;
    let mut out_hi = hi;
    out_lo[src] = lo[src].saturating_sub(max_k);
    if let Some(d) = dst {
        out_hi[d] = hi[d] + max_k;
    }
    let mut out = BranchCountField::empty(f.t, out_lo, out_hi);
    let cut = 1e-3 * floor;
    let mut skipped = 0.0;
    for (c, m) in f.iter() {
        let c = [c.c1, c.c2, c.c3];
        let k = &kern[c[src]];
        for (i, w) in k.w.iter().enumerate() {
            if m * w < cut {
                skipped += m * w;
                continue;
            }
            let d = k.start + i;
            let mut to = c;
            to[src] -= d;
            if let Some(t) = dst {
                to[t] += d;
            }
            let j = out.idx(to[0], to[1], to[2]);
            out.data[j] += m * w;
        }
    }
    let lost = out.prune(floor);
    (out.shrink(), lost + skipped)
}

fn add_into(a: BranchCountField, b: &BranchCountField) -> BranchCountField {
    if b.n_support() == 0 {
        return a;
    }
    if a.n_support() == 0 {
        return b.clone();
    }
    let (alo, ahi, blo, bhi) = (a.lo, a.hi(), b.lo, b.hi());
    let lo = [alo[0].min(blo[0]), alo[1].min(blo[1]), alo[2].min(blo[2])];
    let hi = [ahi[0].max(bhi[0]), ahi[1].max(bhi[1]), ahi[2].max(bhi[2])];
    let mut out = BranchCountField::empty(a.t, lo, hi);
    for f in [&a, b] {
        for (c, w) in f.iter() {
            let i = out.idx(c.c1, c.c2, c.c3);
            out.data[i] += w;
        }
    }
    out
}

/// Stage A: 1- and 2-clause part. Returns (field, dead weight, solved weight).
fn stage_a(f: &BranchCountField, t: usize, n: usize, lf: &LnFact, floor: f64) -> (BranchCountField, f64, f64, f64) {
    let r = (n - t) as f64;
    let (lo, hi) = (f.lo, f.hi());
    // the assigned variable: propagate a unit clause, or split on a clause
    let mut base = BranchCountField::empty(t + 1, [0, lo[1].saturating_sub(1), lo[2]], [hi[0].max(1), hi[1], hi[2]]);
    let mut fresh = BranchCountField::empty(t + 1, [0, 0, lo[2].saturating_sub(1)], [0, 1, hi[2]]);
    let (mut dead, mut solved) = (0.0, 0.0);
    for (c, m) in f.iter() {
        if c.c1 > 0 {
            let surv = (1.0 - 1.0 / (2.0 * r)).max(0.0).powi(c.c1 as i32 - 1);
            dead += m * (1.0 - surv);
            let i = base.idx(c.c1 - 1, c.c2, c.c3);
            base.data[i] += m * surv;
        } else if c.c2 > 0 {
            for c1 in [0, 1] {
                let i = base.idx(c1, c.c2 - 1, c.c3);
                base.data[i] += m;
            }
        } else if c.c3 > 0 {
            for c2 in [0, 1] {
                let i = fresh.idx(0, c2, c.c3 - 1);
                fresh.data[i] += m;
            }
        } else {
            solved += m;
        }
    }
    // each other 2-clause becomes a unit clause with probability 1/(N−T),
    // is satisfied with the same probability, or stays
    let q = (1.0 / r).min(0.5);
    let q_sat = if q < 0.5 { q / (1.0 - q) } else { 1.0 };
    let base = base.shrink();
    let h2 = base.hi()[1];
    let ku: Vec<Kernel> = (0..=h2).map(|c2| kernel(lf, c2, q)).collect();
    let ks: Vec<Kernel> = (0..=h2).map(|c2| kernel(lf, c2, q_sat)).collect();
    let (after, lost) = if base.n_support() == 0 {
        (base, 0.0)
    } else {
        let (mid, l1) = transfer(&base, 1, Some(0), &ku, floor);
        let (after, l2) = transfer(&mid, 1, None, &ks, floor);
        (after, l1 + l2)
    };
    (add_into(after, &fresh.shrink()), dead, solved, lost)
}

/// Stage B: each 3-clause becomes a 2-clause with probability 3/(2(N−T)),
/// is satisfied with the same probability, or stays.
fn stage_b(f: &BranchCountField, t: usize, n: usize, lf: &LnFact, floor: f64) -> (BranchCountField, f64) {
    if f.n_support() == 0 {
        return (f.clone(), 0.0);
    }
    let r = (n - t) as f64;
    let p = (1.5 / r).min(0.5);
    let p_sat = if p < 0.5 { p / (1.0 - p) } else { 1.0 };
    let hi = f.hi()[2];
    let k2: Vec<Kernel> = (0..=hi).map(|c3| kernel(lf, c3, p)).collect();
    let ksat: Vec<Kernel> = (0..=hi).map(|c3| kernel(lf, c3, p_sat)).collect();
    let (mid, l1) = transfer(f, 2, Some(1), &k2, floor);
    let (out, l2) = transfer(&mid, 2, None, &ksat, floor);
    (out, l1 + l2)
}

/// One application of H̄ to a field.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub field: BranchCountField,
    pub dead: f64,
    pub solved: f64,
    pub pruned: f64,
}

/// One application of H̄; intermediate cells below `floor` are dropped.
pub fn step(f: &BranchCountField, n: usize, floor: f64) -> Result<StepOutcome> {
    if f.t >= n {
        return Err(Error::InvalidArgument("no variables left".into()));
    }
    let hi = f.hi();
    let lf = LnFact::new(hi[0] + hi[1] + hi[2] + 4);
    let (a, dead, solved, l1) = stage_a(f, f.t, n, &lf, floor);
    let (mut b, l2) = stage_b(&a, f.t, n, &lf, floor);
    b.t = f.t + 1;
    Ok(StepOutcome { field: b, dead, solved, pruned: l1 + l2 })
}

#[derive(Clone, Copy, Debug)]
pub struct AnnealedControls {
    /// Cells below this fraction of the alive mass are dropped.
    pub pruning_threshold: f64,
    /// Stop once the alive mass falls below this fraction of the total.
    pub alive_floor: f64,
}

impl Default for AnnealedControls {
    fn default() -> Self {
        AnnealedControls { pruning_threshold: 1e-12, alive_floor: 1e-10 }
    }
}

pub fn evolve_branch_counts(alpha0: f64, n: usize, pruning_threshold: f64) -> Result<AnnealedRun> {
    evolve_branch_counts_with(alpha0, n, &AnnealedControls { pruning_threshold, ..AnnealedControls::default() })
}

pub fn evolve_branch_counts_with(alpha0: f64, n: usize, ctl: &AnnealedControls) -> Result<AnnealedRun> {
    if !(alpha0 > 0.0) || n == 0 {
        return Err(Error::InvalidArgument("need α₀ > 0 and N ≥ 1".into()));
    }
    let m3 = (alpha0 * n as f64).round() as usize;
    let mut field = BranchCountField::delta(ClauseVector::new(0, 0, m3));
    let (mut dead, mut solved, mut pruned) = (0.0, 0.0, 0.0);
    let point = |f: &BranchCountField, dead: f64, solved: f64, pruned: f64| {
        let alive = f.mass();
        let (c2, c3) = f.mean_c2_c3();
        MassPoint { t: f.t, total_mass: alive + dead + solved, alive, dead, solved, pruned, mean_c2: c2 / n as f64, mean_c3: c3 / n as f64 }
    };
    let mut curve = vec![point(&field, 0.0, 0.0, 0.0)];
    while field.t < n {
        let floor = ctl.pruning_threshold * field.mass();
        let out = step(&field, n, floor)?;
        dead += out.dead;
        solved += out.solved;
        pruned += out.pruned;
        field = out.field;
        let pt = point(&field, dead, solved, pruned);
        curve.push(pt);
        if pt.alive <= ctl.alive_floor * pt.total_mass {
            break;
        }
    }
    Ok(AnnealedRun { alpha0, n, curve, final_field: field })
}

pub fn write_mass_curve_csv<W: Write>(run: &AnnealedRun, mut w: W) -> Result<()> {
    writeln!(w, "T,total_mass,mean_c2,mean_c3")?;
    for p in &run.curve {
        writeln!(w, "{},{},{},{}", p.t, p.total_mass, p.mean_c2, p.mean_c3)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(a: usize, b: usize, c: usize) -> ClauseVector {
        ClauseVector::new(a, b, c)
    }

    #[test]
    fn first_step_from_pure_3sat() {
        let (n, c3) = (20, 12);
        let row = guc_transition_row(cv(0, 0, c3), 0, n).unwrap();
        let lf = LnFact::new(40);
        let p = 3.0 / n as f64;
        for &(to, w) in &row.entries {
            assert_eq!(to.c1, 0);
            let k = c3 - 1 - to.c3;
            let expect: f64 = (0..=1usize)
                .filter(|&extra| to.c2 >= extra && to.c2 - extra <= k)
                .map(|extra| binom_pmf(&lf, c3 - 1, k, p) * binom_pmf(&lf, k, to.c2 - extra, 0.5))
                .sum();
            assert!((w - expect).abs() < 1e-14, "{to:?}");
        }
        assert!((row.total() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn row_totals() {
        let n = 30;
        for t in [0, 5, 20] {
            for from in [cv(0, 3, 7), cv(0, 1, 0), cv(0, 0, 5), cv(2, 4, 6), cv(1, 0, 0), cv(3, 0, 2)] {
                let row = guc_transition_row(from, t, n).unwrap();
                let total = row.total() + row.death;
                let want = if from.c1 == 0 { 2.0 } else { 1.0 };
                assert!((total - want).abs() < 1e-12, "{from:?} T={t}: {total}");
            }
        }
        let row = guc_transition_row(cv(1, 0, 0), 0, 1000).unwrap();
        assert_eq!(row.death, 0.0);
        assert_eq!(row.entries, vec![(cv(0, 0, 0), 1.0)]);
        let solved = guc_transition_row(cv(0, 0, 0), 3, 10).unwrap();
        assert_eq!(solved.solved, 1.0);
        assert!(guc_transition_row(cv(0, 0, 1), 10, 10).is_err());
    }

    #[test]
    fn factorized_step_matches_row() {
        let n = 25;
        for from in [cv(0, 4, 9), cv(2, 5, 8), cv(0, 0, 6), cv(3, 0, 0), cv(0, 1, 3)] {
            for t in [0, 7] {
                let row = guc_transition_row(from, t, n).unwrap();
                let mut f = BranchCountField::delta(from);
                f.t = t;
                let out = step(&f, n, 0.0).unwrap();
                let next = out.field;
                assert!((out.dead - row.death).abs() < 1e-14);
                assert_eq!(out.solved, row.solved);
                for &(to, w) in &row.entries {
                    assert!((next.get(to) - w).abs() < 1e-13, "{from:?} -> {to:?}: {} vs {w}", next.get(to));
                }
                assert!((next.mass() - row.total()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mass_bookkeeping() {
        let run = evolve_branch_counts(10.0, 40, 1e-12).unwrap();
        let kept = |p: &MassPoint| p.total_mass + p.pruned;
        assert!(run.curve.windows(2).all(|w| kept(&w[1]) >= kept(&w[0]) * (1.0 - 1e-12)));
        assert!(run.curve.iter().all(|p| p.total_mass >= 1.0 - 1e-9));
        assert!(run.curve.windows(2).all(|w| w[1].alive <= 2.0 * w[0].alive + 1e-12));
        assert!(run.plateau().alive <= 1e-9 * run.plateau().total_mass);
        let last = run.curve[run.curve.len() - 1].total_mass;
        let before = run.curve[run.curve.len() - 3].total_mass;
        assert!((last - before) / last < 1e-6);
        let mut buf = Vec::new();
        write_mass_curve_csv(&run, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("T,total_mass,mean_c2,mean_c3\n0,1,0,10\n"));
    }

    #[test]
    fn mass_decreases_with_alpha() {
        let a = evolve_branch_counts(10.0, 40, 1e-12).unwrap();
        let b = evolve_branch_counts(20.0, 40, 1e-12).unwrap();
        assert!(b.plateau().total_mass < a.plateau().total_mass);
    }
}
