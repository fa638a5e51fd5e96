//! Single-branch density trajectories, the (p, α) phase diagram, α_L, the
//! tricritical contact point and the G-point.
//!
//! Integration runs in s = −ln(1−t), in which the 3-clause equation reads
//! dc₃/ds = −3c₃ and the 2-clause equation
//! dc₂/ds = 3c₃/2 − 2c₂ − (1−t)ρ₁h.

pub mod bessel;
pub mod integrator;

use std::io::{BufRead, Write};

use crate::dpll::{Heuristic, PhasePoint};
use crate::error::{Error, Result};
use integrator::{Control, Options, Step};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityState {
    pub t: f64,
    pub c2: f64,
    pub c3: f64,
}

impl DensityState {
    pub fn initial(alpha0: f64) -> Self {
        DensityState { t: 0.0, c2: 0.0, c3: alpha0 }
    }

    /// Probability that a variable is not the target of a unit clause.
    pub fn rho1(&self) -> f64 {
        1.0 - self.c2 / (1.0 - self.t)
    }

    pub fn to_phase_coords(&self) -> Result<PhasePoint> {
        to_phase_coords(self)
    }
}

pub fn to_phase_coords(s: &DensityState) -> Result<PhasePoint> {
    let total = s.c2 + s.c3;
    if total <= 0.0 || s.t >= 1.0 {
        return Err(Error::UndefinedPoint);
    }
    Ok(PhasePoint { p: s.c3 / total, alpha: total / (1.0 - s.t), t: s.t })
}

/// Splitting rate h(t) for the single-branch equations.
pub fn heuristic_h(kind: Heuristic, state: &DensityState, alpha0: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&state.t) {
        return Err(Error::InvalidArgument(format!("t = {} outside [0, 1)", state.t)));
    }
    match kind {
        Heuristic::Uc => Ok(0.0),
        Heuristic::Guc if alpha0 <= 2.0 / 3.0 => {
            Err(Error::UnsupportedDomain(format!("GUC single-branch equations need α₀ > 2/3, got {alpha0}")))
        }
        Heuristic::Guc => Ok(1.0),
        Heuristic::Sc1 => Ok(sc1_h(3.0 * state.c3 / (1.0 - state.t))),
    }
}

fn sc1_h(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    0.5 * a * (bessel::i0e(a) + bessel::i1e(a))
}

#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step in s.
    pub max_step: f64,
    /// Stop once c₂ + c₃ falls below this.
    pub eps_end: f64,
    /// Stop once t exceeds 1 − eps_t.
    pub eps_t: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { rtol: 1e-11, atol: 1e-13, max_step: 0.01, eps_end: 1e-9, eps_t: 1e-6 }
    }
}

impl StepControl {
    fn options(&self) -> Options {
        Options { rtol: self.rtol, atol: self.atol, h_max: self.max_step, h_init: self.max_step.min(1e-3), ..Options::default() }
    }

    pub fn halved(&self) -> Self {
        StepControl { max_step: self.max_step / 2.0, rtol: self.rtol / 32.0, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// c₂ + c₃ fell below the end threshold or t reached 1 − ε.
    Exhausted,
    /// All 2-clauses used up under GUC; the branch continues on 3-clauses
    /// alone and p = 1.
    TwoClausesExhausted,
    /// ρ₁ left [0, 1]: unit clauses accumulate and the branch meets a
    /// contradiction.
    Rho1OutOfRange,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub alpha0: f64,
    pub heuristic: Heuristic,
    pub states: Vec<DensityState>,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn phase_points(&self) -> Vec<PhasePoint> {
        self.states.iter().filter_map(|s| to_phase_coords(s).ok()).collect()
    }
}

fn t_of(s: f64) -> f64 {
    -(-s).exp_m1()
}

fn rhs(kind: Heuristic, s: f64, y: &[f64; 2]) -> [f64; 2] {
    let (c2, c3) = (y[0], y[1]);
    let one_t = (-s).exp();
    let rho1 = (1.0 - c2 / one_t).clamp(0.0, 1.0);
    let h = match kind {
        Heuristic::Uc => 0.0,
        Heuristic::Guc => 1.0,
        Heuristic::Sc1 => sc1_h(3.0 * c3 / one_t),
    };
    [1.5 * c3 - 2.0 * c2 - one_t * rho1 * h, -3.0 * c3]
}

/// Runs the branch equations, calling `on_step` with every accepted step
/// in s. Returns the stop reason and the final point.
fn run<O>(alpha0: f64, kind: Heuristic, ctl: &StepControl, mut on_step: O) -> Result<(StopReason, DensityState)>
where
    O: FnMut(&Step<2>) -> bool,
{
    if alpha0 <= 0.0 || !alpha0.is_finite() {
        return Err(Error::InvalidArgument(format!("α₀ must be positive, got {alpha0}")));
    }
    heuristic_h(kind, &DensityState::initial(alpha0), alpha0)?;
    let s_end = -ctl.eps_t.ln();
    let mut stop = StopReason::Exhausted;
    let mut last = DensityState::initial(alpha0);
    let res = integrator::integrate(
        |s, y| rhs(kind, s, y),
        0.0,
        [0.0, alpha0],
        s_end,
        &ctl.options(),
        |st| {
            let (s1, y1) = (st.x1, st.y1);
            if y1[0] < 0.0 {
                let sr = st.locate(|_, y| y[0], 1e-13);
                let y = st.eval(sr);
                last = DensityState { t: t_of(sr), c2: 0.0, c3: y[1] };
                stop = StopReason::TwoClausesExhausted;
                return Control::Stop;
            }
            let cont = on_step(st);
            let state = DensityState { t: t_of(s1), c2: y1[0], c3: y1[1] };
            last = state;
            if !cont {
                return Control::Stop;
            }
            if state.rho1() < 0.0 {
                stop = StopReason::Rho1OutOfRange;
                return Control::Stop;
            }
            if y1[0] + y1[1] < ctl.eps_end {
                return Control::Stop;
            }
            Control::Continue
        },
    );
    match res {
        Ok(_) => Ok((stop, last)),
        Err(Error::Numeric { msg, residual, .. }) => Err(Error::Numeric {
            msg: format!("{msg}; last valid state t={}, c2={}, c3={}", last.t, last.c2, last.c3),
            t: last.t,
            residual,
        }),
        Err(e) => Err(e),
    }
}

pub fn integrate_branch(alpha0: f64, kind: Heuristic, ctl: &StepControl) -> Result<Trajectory> {
    let mut states = vec![DensityState::initial(alpha0)];
    let (stop, last) = run(alpha0, kind, ctl, |st| {
        states.push(DensityState { t: t_of(st.x1), c2: st.y1[0], c3: st.y1[1] });
        true
    })?;
    if states.last() != Some(&last) {
        states.push(last);
    }
    Ok(Trajectory { alpha0, heuristic: kind, states, stop })
}

/// Sat/unsat threshold in the (p, α) plane: 1/(1−p) up to p = 2/5, then a
/// monotone interpolation of tabulated points, never above 1/(1−p).
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalLine {
    points: Vec<(f64, f64)>,
    slopes: Vec<f64>,
}

pub const P_TRICRITICAL: f64 = 0.4;
pub const ALPHA_TRICRITICAL: f64 = 5.0 / 3.0;
pub const ALPHA_C_3SAT: f64 = 4.3;

impl Default for CriticalLine {
    fn default() -> Self {
        CriticalLine::from_points(vec![(P_TRICRITICAL, ALPHA_TRICRITICAL), (1.0, ALPHA_C_3SAT)]).expect("default anchors are valid")
    }
}

impl CriticalLine {
    /// Points with p > 2/5; the anchor (2/5, 5/3) is prepended if missing.
    pub fn from_points(mut pts: Vec<(f64, f64)>) -> Result<Self> {
        pts.retain(|&(p, _)| p > P_TRICRITICAL + 1e-12);
        pts.insert(0, (P_TRICRITICAL, ALPHA_TRICRITICAL));
        if pts.len() < 2 {
            return Err(Error::InvalidArgument("critical line needs a point with p > 2/5".into()));
        }
        for w in pts.windows(2) {
            if !(w[1].0 > w[0].0) || w[1].1 < w[0].1 || w[1].0 > 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "critical-line table must be increasing in p ≤ 1 and non-decreasing in α at p = {}",
                    w[1].0
                )));
            }
        }
        let slopes = pchip_slopes(&pts);
        Ok(CriticalLine { points: pts, slopes })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn alpha_c(&self, p: f64) -> f64 {
        if p <= P_TRICRITICAL {
            return 1.0 / (1.0 - p);
        }
        let pts = &self.points;
        let i = match pts.iter().position(|&(x, _)| x >= p) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => pts.len() - 2,
        };
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[i + 1];
        let h = x1 - x0;
        let u = ((p - x0) / h).clamp(0.0, 1.0);
        let (h00, h10, h01, h11) = ((1.0 + 2.0 * u) * (1.0 - u).powi(2), u * (1.0 - u).powi(2), u * u * (3.0 - 2.0 * u), u * u * (u - 1.0));
        let v = h00 * y0 + h10 * h * self.slopes[i] + h01 * y1 + h11 * h * self.slopes[i + 1];
        if p < 1.0 {
            v.min(1.0 / (1.0 - p))
        } else {
            v
        }
    }

    /// Reads `p,alpha_c` rows; a header line and `#` comments are skipped.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut pts = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let l = line.trim();
            if l.is_empty() || l.starts_with('#') || (i == 0 && l.starts_with('p')) {
                continue;
            }
            let bad = || Error::Parse { line: i + 1, msg: format!("expected `p,alpha_c`, got `{l}`") };
            let (a, b) = l.split_once(',').ok_or_else(bad)?;
            let p: f64 = a.trim().parse().map_err(|_| bad())?;
            let al: f64 = b.trim().parse().map_err(|_| bad())?;
            pts.push((p, al));
        }
        Self::from_points(pts)
    }

    pub fn write_csv<W: Write>(&self, mut w: W, samples: usize) -> Result<()> {
        writeln!(w, "p,alpha_c")?;
        let n = samples.max(2);
        for i in 0..n {
            let p = i as f64 / (n - 1) as f64 * (1.0 - 1e-9);
            writeln!(w, "{p},{}", self.alpha_c(p))?;
        }
        Ok(())
    }
}

fn pchip_slopes(pts: &[(f64, f64)]) -> Vec<f64> {
    let n = pts.len();
    let d: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let (h0, h1) = (pts[k].0 - pts[k - 1].0, pts[k + 1].0 - pts[k].0);
            let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m
}

/// Point of a trajectory closest to the exact branch of the critical line:
/// the maximum of α(1−p) = c₂/(1−t) = 1 − ρ₁.
#[derive(Clone, Copy, Debug)]
pub struct Contact {
    pub t: f64,
    pub p: f64,
    pub alpha: f64,
    pub one_minus_rho1: f64,
}

pub fn closest_approach(alpha0: f64, kind: Heuristic, ctl: &StepControl) -> Result<Contact> {
    let mut best = (f64::NEG_INFINITY, 0.0, [0.0, alpha0]);
    let x = |s: f64, y: &[f64; 2]| y[0] / (-s).exp();
    run(alpha0, kind, ctl, |st| {
        // golden-section refinement when the maximum is inside this step
        let (a, b) = (st.x0, st.x1);
        let m = 0.5 * (a + b);
        let (xa, xm, xb) = (x(a, &st.y0), x(m, &st.eval(m)), x(b, &st.y1));
        if xm >= xa && xm >= xb {
            let (mut lo, mut hi) = (a, b);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let (c, d) = (hi - g * (hi - lo), lo + g * (hi - lo));
                if x(c, &st.eval(c)) > x(d, &st.eval(d)) {
                    hi = d;
                } else {
                    lo = c;
                }
            }
            let sm = 0.5 * (lo + hi);
            let y = st.eval(sm);
            if x(sm, &y) > best.0 {
                best = (x(sm, &y), sm, y);
            }
        } else if xb > best.0 {
            best = (xb, b, st.y1);
        }
        true
    })?;
    let (v, s, y) = best;
    let st = DensityState { t: t_of(s), c2: y[0], c3: y[1] };
    let pp = to_phase_coords(&st)?;
    Ok(Contact { t: st.t, p: pp.p, alpha: pp.alpha, one_minus_rho1: v })
}

/// First crossing of a trajectory with a critical line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GPoint {
    pub t_g: f64,
    pub p_g: f64,
    pub alpha_g: f64,
}

fn crossing(alpha0: f64, kind: Heuristic, line: &CriticalLine, ctl: &StepControl) -> Result<Option<GPoint>> {
    let gap = |s: f64, y: &[f64; 2]| {
        let st = DensityState { t: t_of(s), c2: y[0], c3: y[1] };
        match to_phase_coords(&st) {
            Ok(pp) => pp.alpha - line.alpha_c(pp.p),
            Err(_) => -1.0,
        }
    };
    let mut hit = None;
    run(alpha0, kind, ctl, |st| {
        // a tangential touch can sit strictly inside a step
        let mut prev = st.x0;
        for k in 1..=8 {
            let s = st.x0 + (st.x1 - st.x0) * k as f64 / 8.0;
            let y = if k == 8 { st.y1 } else { st.eval(s) };
            if gap(s, &y) >= 0.0 {
                let sr = st.locate_in(prev, s, gap, 1e-13);
                hit = Some((sr, st.eval(sr)));
                return false;
            }
            prev = s;
        }
        true
    })?;
    Ok(hit.map(|(s, y)| {
        let t = t_of(s);
        let pp = to_phase_coords(&DensityState { t, c2: y[0], c3: y[1] }).expect("crossing lies inside the phase diagram");
        GPoint { t_g: t, p_g: pp.p, alpha_g: pp.alpha }
    }))
}

pub fn find_g(alpha0: f64, kind: Heuristic, line: &CriticalLine) -> Result<GPoint> {
    find_g_with(alpha0, kind, line, &StepControl::default())
}

pub fn find_g_with(alpha0: f64, kind: Heuristic, line: &CriticalLine, ctl: &StepControl) -> Result<GPoint> {
    crossing(alpha0, kind, line, ctl)?.ok_or(Error::NoCrossing)
}

/// Largest α₀ whose trajectory stays strictly inside the sat phase,
/// bracketed in [1, 4.3] and bisected to width `tol`.
pub fn find_alpha_l(kind: Heuristic, tol: f64) -> Result<f64> {
    find_alpha_l_with(kind, tol, &CriticalLine::default(), &StepControl::default())
}

pub fn find_alpha_l_with(kind: Heuristic, tol: f64, line: &CriticalLine, ctl: &StepControl) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let crosses = |a: f64| -> Result<bool> {
        if closest_approach(a, kind, ctl)?.one_minus_rho1 >= 1.0 {
            return Ok(true);
        }
        Ok(crossing(a, kind, line, ctl)?.is_some())
    };
    let (mut lo, mut hi) = (1.0, ALPHA_C_3SAT);
    if crosses(lo)? || !crosses(hi)? {
        return Err(Error::numeric("α_L bracket [1, 4.3] does not straddle the crossing", 0.0, f64::NAN));
    }
    while hi - lo > tol {
        let m = 0.5 * (lo + hi);
        if crosses(m)? {
            hi = m;
        } else {
            lo = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Contact point of the α_L trajectory with the line ρ₁ = 0, where
/// ρ₁ = ∂ρ₁/∂t = 0 hold together.
#[derive(Clone, Copy, Debug)]
pub struct Tricritical {
    pub alpha_l: f64,
    pub p_t: f64,
    pub alpha_t: f64,
    pub t_t: f64,
    pub rho1: f64,
}

pub fn tricritical_check(kind: Heuristic) -> Result<Tricritical> {
    let ctl = StepControl::default();
    let rho_max = |a: f64| closest_approach(a, kind, &ctl);
    // α_L from the tangency condition max(1 − ρ₁) = 1 alone
    let (mut lo, mut hi) = (1.0, ALPHA_C_3SAT);
    for _ in 0..50 {
        let m = 0.5 * (lo + hi);
        if rho_max(m)?.one_minus_rho1 >= 1.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    let a = 0.5 * (lo + hi);
    let c = rho_max(a)?;
    Ok(Tricritical { alpha_l: a, p_t: c.p, alpha_t: c.alpha, t_t: c.t, rho1: 1.0 - c.one_minus_rho1 })
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<()> {
    writeln!(w, "t,c2,c3,p,alpha,rho1")?;
    for s in &traj.states {
        if let Ok(pp) = to_phase_coords(s) {
            writeln!(w, "{},{},{},{},{},{}", s.t, s.c2, s.c3, pp.p, pp.alpha, s.rho1())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state_at(alpha0: f64, kind: Heuristic, ctl: &StepControl, s_target: f64) -> DensityState {
        let opts = Options { h_max: ctl.max_step, rtol: ctl.rtol, atol: ctl.atol, ..Options::default() };
        let (_, y) = integrator::integrate(|s, y| rhs(kind, s, y), 0.0, [0.0, alpha0], s_target, &opts, |_| Control::Continue)
            .expect("prefix of an integrated trajectory");
        DensityState { t: t_of(s_target), c2: y[0], c3: y[1] }
    }

    #[test]
    fn h_values() {
        let s = DensityState::initial(3.0);
        assert_eq!(heuristic_h(Heuristic::Uc, &s, 3.0).unwrap(), 0.0);
        assert_eq!(heuristic_h(Heuristic::Guc, &s, 3.0).unwrap(), 1.0);
        assert!(matches!(heuristic_h(Heuristic::Guc, &s, 0.5), Err(Error::UnsupportedDomain(_))));
        let zero = DensityState { t: 0.3, c2: 0.2, c3: 0.0 };
        assert_eq!(heuristic_h(Heuristic::Sc1, &zero, 3.0).unwrap(), 0.0);
        let a: f64 = 2.0;
        let direct = a * (-a).exp() * (2.279_585_302_336_067 + 1.590_636_854_637_329) / 2.0;
        let st = DensityState { t: 0.0, c2: 0.0, c3: a / 3.0 };
        assert!((heuristic_h(Heuristic::Sc1, &st, 1.0).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn phase_coordinates() {
        let p = to_phase_coords(&DensityState::initial(3.0)).unwrap();
        assert_eq!((p.p, p.alpha), (1.0, 3.0));
        let p = to_phase_coords(&DensityState { t: 0.5, c2: 0.1, c3: 0.3 }).unwrap();
        assert!((p.p - 0.75).abs() < 1e-15 && (p.alpha - 0.8).abs() < 1e-15);
        assert!(matches!(to_phase_coords(&DensityState { t: 0.5, c2: 0.0, c3: 0.0 }), Err(Error::UndefinedPoint)));
    }

    #[test]
    fn c3_closed_form_and_identity() {
        for kind in Heuristic::ALL {
            let tr = integrate_branch(2.0, kind, &StepControl::default()).unwrap();
            let c3_half = state_at(2.0, kind, &StepControl::default(), 2f64.ln()).c3;
            assert!((c3_half - 0.25).abs() < 1e-8);
            for s in &tr.states {
                assert!((s.c3 - 2.0 * (1.0 - s.t).powi(3)).abs() < 1e-8 * 2.0f64.max(1.0));
                if let Ok(pp) = to_phase_coords(s) {
                    assert!((pp.alpha * (1.0 - pp.p) - (1.0 - s.rho1())).abs() < 1e-12);
                }
            }
            assert_eq!(tr.states[0].rho1(), 1.0);
        }
    }

    #[test]
    fn guc_two_reverses() {
        let tr = integrate_branch(2.0, Heuristic::Guc, &StepControl::default()).unwrap();
        let pts = tr.phase_points();
        let imin = (0..pts.len()).min_by(|&a, &b| pts[a].p.total_cmp(&pts[b].p)).unwrap();
        assert!(pts[1..10].iter().all(|q| q.alpha < 2.0));
        assert!(pts[imin].p < 0.9);
        assert!(pts[imin..].iter().any(|q| q.p > 0.99));
        assert_eq!(tr.stop, StopReason::TwoClausesExhausted);
    }

    #[test]
    fn critical_line_shape() {
        let l = CriticalLine::default();
        assert!((l.alpha_c(0.4) - 5.0 / 3.0).abs() < 1e-12);
        assert!((l.alpha_c(0.4 + 1e-9) - 5.0 / 3.0).abs() < 1e-6);
        assert!((l.alpha_c(1.0) - 4.3).abs() < 1e-12);
        assert_eq!(l.alpha_c(0.2), 1.25);
        let mut prev = 0.0;
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            let a = l.alpha_c(p);
            assert!(a >= prev);
            if p < 1.0 {
                assert!(a <= 1.0 / (1.0 - p) + 1e-12);
            }
            prev = a;
        }
        let t = CriticalLine::from_points(vec![(0.6, 2.3), (0.8, 3.2), (1.0, 4.27)]).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf, 11).unwrap();
        assert_eq!(buf.split(|&b| b == b'\n').count(), 13);
        let back = CriticalLine::read_csv("p,alpha_c\n0.6,2.3\n0.8,3.2\n1.0,4.27\n".as_bytes()).unwrap();
        assert_eq!(back, t);
        assert!(CriticalLine::from_points(vec![(0.8, 3.0), (0.7, 3.5)]).is_err());
    }

    #[test]
    fn uc_alpha_l() {
        let a = find_alpha_l(Heuristic::Uc, 1e-4).unwrap();
        assert!((a - 8.0 / 3.0).abs() < 0.01, "{a}");
    }

    #[test]
    fn below_alpha_l_stays_sat() {
        let line = CriticalLine::default();
        for kind in Heuristic::ALL {
            let a = find_alpha_l(kind, 1e-3).unwrap();
            let tr = integrate_branch(a - 0.05, kind, &StepControl::default()).unwrap();
            for pp in tr.phase_points() {
                assert!(pp.alpha < line.alpha_c(pp.p));
            }
            assert!(matches!(find_g(a - 0.05, kind, &line), Err(Error::NoCrossing)));
        }
    }

    #[test]
    fn g_point_on_the_line() {
        let line = CriticalLine::default();
        let g = find_g(3.5, Heuristic::Guc, &line).unwrap();
        assert!((g.alpha_g - line.alpha_c(g.p_g)).abs() < 1e-6);
        let a_l = find_alpha_l(Heuristic::Guc, 1e-5).unwrap();
        let near = find_g(a_l + 0.002, Heuristic::Guc, &line).unwrap();
        assert!((near.p_g - 0.4).abs() < 0.03, "{near:?}");
    }
}
