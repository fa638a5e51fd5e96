//! Search-tree growth: φ(y₂, y₃; t) obeys φ_t = H(∇φ, y, t) with linear
//! initial data φ₀ = c₂⁰y₂ + c₃⁰y₃. Solved by characteristics, shooting the
//! launch point so that the curve ends at y = (0, 0).
//!
//! φ is kept in nats; `omega_bits` and the `*_bits` helpers divide by ln 2.

use std::f64::consts::LN_2;
use std::io::Write;

use rayon::prelude::*;

use crate::dpll::Heuristic;
use crate::error::{Error, Result};
use crate::ode::integrator::{self, Control, Options};
use crate::ode::{self, CriticalLine, GPoint};

/// ln of the golden ratio.
pub const LN_GOLDEN: f64 = 0.481_211_825_059_603_5;

/// y₁ root of the kernel e^{−y₂}(e^{2y₁} + e^{y₁}) = 1.
pub fn kernel_y1(y2: f64) -> f64 {
    y2 - ((1.0 + (1.0 + 4.0 * y2.exp()).sqrt()) / 2.0).ln()
}

pub fn kernel(y1: f64, y2: f64) -> f64 {
    (-y2).exp() * ((2.0 * y1).exp() + y1.exp()) - 1.0
}

/// H together with ∂H/∂q and ∂H/∂y, where q = (c₂, c₃), y = (y₂, y₃).
#[derive(Clone, Copy, Debug)]
pub struct HamiltonianParts {
    pub h: f64,
    pub dq: [f64; 2],
    pub dy: [f64; 2],
}

fn check_heuristic(kind: Heuristic) -> Result<()> {
    match kind {
        Heuristic::Sc1 => Err(Error::Unsupported("no growth equation for SC1".into())),
        _ => Ok(()),
    }
}

fn parts(kind: Heuristic, q: [f64; 2], y: [f64; 2], t: f64) -> HamiltonianParts {
    let (c2, c3) = (q[0], q[1]);
    let (y2, y3) = (y[0], y[1]);
    let a = 1.0 - t;
    let e3 = (-y3).exp();
    let e2 = y2.exp();
    let bracket = e3 * (1.0 + e2) / 2.0 - 1.0;
    let three = 3.0 * c3 / a;
    match kind {
        Heuristic::Uc => {
            let u = 1.5 / e2 - 2.0;
            HamiltonianParts {
                h: LN_2 + three * bracket + c2 / a * u,
                dq: [u / a, 3.0 * bracket / a],
                dy: [three * e3 * e2 / 2.0 - c2 / a * 1.5 / e2, -three * e3 * (1.0 + e2) / 2.0],
            }
        }
        _ => {
            let s = (1.0 + 4.0 * e2).sqrt();
            let y1 = y2 - ((1.0 + s) / 2.0).ln();
            let e_y1 = 2.0 / (s - 1.0);
            let y1p = (s + 1.0) / (2.0 * s);
            HamiltonianParts {
                h: -y1 + three * bracket + c2 / a * (e_y1 - 2.0),
                dq: [(e_y1 - 2.0) / a, 3.0 * bracket / a],
                dy: [-y1p + three * e3 * e2 / 2.0 - c2 / a * y1p * e_y1, -three * e3 * (1.0 + e2) / 2.0],
            }
        }
    }
}

pub fn hamiltonian(kind: Heuristic, c2: f64, c3: f64, y2: f64, y3: f64, t: f64) -> Result<f64> {
    check_heuristic(kind)?;
    if !(t < 1.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be below 1")));
    }
    Ok(parts(kind, [c2, c3], [y2, y3], t).h)
}

pub fn hamiltonian_parts(kind: Heuristic, q: [f64; 2], y: [f64; 2], t: f64) -> Result<HamiltonianParts> {
    check_heuristic(kind)?;
    Ok(parts(kind, q, y, t))
}

/// Halt line α(1−p) = const for the given heuristic: where the splitting
/// rate at y = 0 vanishes.
pub fn halt_constant(kind: Heuristic) -> Result<f64> {
    check_heuristic(kind)?;
    Ok(match kind {
        Heuristic::Uc => 2.0 * LN_2,
        _ => (3.0 + 5f64.sqrt()) / 2.0 * LN_GOLDEN,
    })
}

/// GUC halt line α = ((3+√5)/2) ln((1+√5)/2) / (1−p).
pub fn halt_line_alpha(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("halt line undefined at p = {p}")));
    }
    Ok(halt_constant(Heuristic::Guc)? / (1.0 - p))
}

/// Point on a characteristic curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicState {
    pub t: f64,
    pub y2: f64,
    pub y3: f64,
    pub c2: f64,
    pub c3: f64,
    pub phi: f64,
}

impl CharacteristicState {
    pub fn y(&self) -> [f64; 2] {
        [self.y2, self.y3]
    }

    pub fn q(&self) -> [f64; 2] {
        [self.c2, self.c3]
    }

    fn from(t: f64, z: &[f64; 5]) -> Self {
        CharacteristicState { t, y2: z[0], y3: z[1], c2: z[2], c3: z[3], phi: z[4] }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GrowthControls {
    /// Spacing of target times; `None` picks min(0.01, 0.05/α₀).
    pub dt: Option<f64>,
    pub t_max: f64,
    pub rtol: f64,
    pub atol: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    pub halt_tol: f64,
    /// End the series at the halt time.
    pub stop_at_halt: bool,
}

impl Default for GrowthControls {
    fn default() -> Self {
        GrowthControls {
            dt: None,
            t_max: 0.95,
            rtol: 1e-11,
            atol: 1e-12,
            newton_tol: 1e-11,
            max_newton: 60,
            halt_tol: 1e-6,
            stop_at_halt: true,
        }
    }
}

impl GrowthControls {
    fn options(&self) -> Options {
        Options { rtol: self.rtol, atol: self.atol, h_max: 0.01, h_init: 1e-5, ..Options::default() }
    }

    pub fn tightened(&self) -> Self {
        GrowthControls {
            rtol: self.rtol / 100.0,
            atol: self.atol / 100.0,
            newton_tol: self.newton_tol / 100.0,
            halt_tol: self.halt_tol / 10.0,
            ..*self
        }
    }
}

fn char_rhs(kind: Heuristic, t: f64, z: &[f64; 5]) -> [f64; 5] {
    let q = [z[2], z[3]];
    let hp = parts(kind, q, [z[0], z[1]], t);
    [-hp.dq[0], -hp.dq[1], hp.dy[0], hp.dy[1], hp.h - q[0] * hp.dq[0] - q[1] * hp.dq[1]]
}

/// Integrates one characteristic from y(0) = `y0` with q(0) = `q0` to time `t`.
pub fn characteristic(kind: Heuristic, y0: [f64; 2], q0: [f64; 2], t: f64, ctl: &GrowthControls) -> Result<CharacteristicState> {
    check_heuristic(kind)?;
    let z0 = [y0[0], y0[1], q0[0], q0[1], q0[0] * y0[0] + q0[1] * y0[1]];
    if t == 0.0 {
        return Ok(CharacteristicState::from(0.0, &z0));
    }
    let (_, z) = integrator::integrate(|s, z| char_rhs(kind, s, z), 0.0, z0, t, &ctl.options(), |_| Control::Continue)?;
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("characteristic diverged", t, f64::INFINITY));
    }
    Ok(CharacteristicState::from(t, &z))
}

/// Launch point y(0) whose characteristic reaches y(t) = 0. Damped Newton
/// with a forward-difference Jacobian.
pub fn shoot(kind: Heuristic, q0: [f64; 2], t: f64, guess: [f64; 2], ctl: &GrowthControls) -> Result<([f64; 2], CharacteristicState)> {
    let end = |y0: [f64; 2]| characteristic(kind, y0, q0, t, ctl);
    let norm = |s: &CharacteristicState| s.y2.hypot(s.y3);
    let mut y0 = guess;
    let mut cur = end(y0)?;
    for _ in 0..ctl.max_newton {
        let r = norm(&cur);
        if r < ctl.newton_tol {
            return Ok((y0, cur));
        }
        let eps = 1e-7;
        let a = end([y0[0] + eps, y0[1]])?;
        let b = end([y0[0], y0[1] + eps])?;
        let j = [[(a.y2 - cur.y2) / eps, (b.y2 - cur.y2) / eps], [(a.y3 - cur.y3) / eps, (b.y3 - cur.y3) / eps]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::numeric("singular shooting Jacobian", t, r));
        }
        let dx = [(j[1][1] * cur.y2 - j[0][1] * cur.y3) / det, (-j[1][0] * cur.y2 + j[0][0] * cur.y3) / det];
        let mut lambda = 1.0;
        loop {
            let trial = [y0[0] - lambda * dx[0], y0[1] - lambda * dx[1]];
            match end(trial) {
                Ok(s) if norm(&s) < r => {
                    y0 = trial;
                    cur = s;
                    break;
                }
                _ if lambda > 1e-6 => lambda *= 0.5,
                _ => return Err(Error::numeric("shooting stalled", t, r)),
            }
        }
    }
    let r = norm(&cur);
    if r < ctl.newton_tol * 100.0 {
        Ok((y0, cur))
    } else {
        Err(Error::numeric("shooting did not converge", t, r))
    }
}

/// Dominant-branch quantities at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthSample {
    pub t: f64,
    /// φ(0, 0; t) in nats per initial variable.
    pub omega: f64,
    pub c2: f64,
    pub c3: f64,
    pub p: f64,
    pub alpha: f64,
    pub rho_split: f64,
    pub launch: [f64; 2],
}

impl GrowthSample {
    pub fn omega_bits(&self) -> f64 {
        self.omega / LN_2
    }
}

#[derive(Clone, Debug)]
pub struct GrowthSeries {
    pub heuristic: Heuristic,
    pub q0: [f64; 2],
    pub samples: Vec<GrowthSample>,
    /// Exact halt sample when one was found.
    pub halt: Option<GrowthSample>,
}

fn sample(kind: Heuristic, launch: [f64; 2], end: &CharacteristicState) -> GrowthSample {
    let rate = parts(kind, end.q(), [0.0, 0.0], end.t).h;
    let total = end.c2 + end.c3;
    GrowthSample {
        t: end.t,
        omega: end.phi,
        c2: end.c2,
        c3: end.c3,
        p: if total > 0.0 { end.c3 / total } else { f64::NAN },
        alpha: total / (1.0 - end.t),
        rho_split: rate.exp() - 1.0,
        launch,
    }
}

/// Shoots every target time in turn, continuing the launch point, and
/// brackets the halt by bisection on the sign of the splitting rate.
pub fn solve_characteristics(alpha0: f64, kind: Heuristic, c2_init: f64, c3_init: f64, ctl: &GrowthControls) -> Result<GrowthSeries> {
    check_heuristic(kind)?;
    if !(c2_init >= 0.0 && c3_init >= 0.0 && c2_init + c3_init > 0.0) {
        return Err(Error::InvalidArgument("initial clause densities must be non-negative and not both zero".into()));
    }
    let q0 = [c2_init, c3_init];
    let dt = ctl.dt.unwrap_or_else(|| 0.01f64.min(0.05 / alpha0.max(1.0)));
    let first = CharacteristicState { t: 0.0, y2: 0.0, y3: 0.0, c2: c2_init, c3: c3_init, phi: 0.0 };
    let mut samples = vec![sample(kind, [0.0, 0.0], &first)];
    let mut halt = None;
    let (mut prev_t, mut prev_y, mut prev2_y) = (0.0, [0.0, 0.0], [0.0, 0.0]);
    let mut k = 1;
    loop {
        let t = (k as f64 * dt).min(ctl.t_max);
        let guess = if k > 1 { [2.0 * prev_y[0] - prev2_y[0], 2.0 * prev_y[1] - prev2_y[1]] } else { prev_y };
        let (y0, end) = shoot(kind, q0, t, guess, ctl).or_else(|_| shoot(kind, q0, t, prev_y, ctl))?;
        let s = sample(kind, y0, &end);
        if s.rho_split < 0.0 && halt.is_none() {
            let (mut lo, mut hi, mut g) = (prev_t, t, prev_y);
            while hi - lo > ctl.halt_tol {
                let m = 0.5 * (lo + hi);
                let (ym, em) = shoot(kind, q0, m, g, ctl)?;
                if sample(kind, ym, &em).rho_split < 0.0 {
                    hi = m;
                } else {
                    lo = m;
                    g = ym;
                }
            }
            let th = 0.5 * (lo + hi);
            let (yh, eh) = shoot(kind, q0, th, g, ctl)?;
            let hs = sample(kind, yh, &eh);
            samples.push(hs);
            halt = Some(hs);
            if ctl.stop_at_halt {
                break;
            }
        }
        samples.push(s);
        prev2_y = prev_y;
        prev_y = y0;
        prev_t = t;
        if t >= ctl.t_max {
            break;
        }
        k += 1;
    }
    Ok(GrowthSeries { heuristic: kind, q0, samples, halt })
}

fn halt_sample(alpha0: f64, kind: Heuristic, q0: [f64; 2], ctl: &GrowthControls) -> Result<GrowthSample> {
    let series = solve_characteristics(alpha0, kind, q0[0], q0[1], ctl)?;
    series.halt.ok_or_else(|| Error::NoHalt {
        t_max: ctl.t_max,
        min_rate: series.samples.iter().map(|s| s.rho_split.ln_1p()).fold(f64::INFINITY, f64::min),
    })
}

/// Halt time and φ at the halt, in nats.
pub fn halt_point(alpha0: f64, kind: Heuristic) -> Result<GrowthSample> {
    halt_sample(alpha0, kind, [0.0, alpha0], &GrowthControls::default())
}

/// ω_THE in bits per variable for 3-SAT at α₀ ≥ 4.3.
pub fn omega_theory(alpha0: f64, kind: Heuristic) -> Result<f64> {
    omega_theory_with(alpha0, kind, &GrowthControls::default())
}

pub fn omega_theory_with(alpha0: f64, kind: Heuristic, ctl: &GrowthControls) -> Result<f64> {
    if alpha0 < ode::ALPHA_C_3SAT - 1e-9 {
        return Err(Error::UnsupportedDomain(format!("α₀ = {alpha0} is below the 3-SAT threshold")));
    }
    Ok(halt_sample(alpha0, kind, [0.0, alpha0], ctl)?.omega_bits())
}

/// ω from a G-point start: the tree grows on the (1 − t_G)N remaining
/// variables, so ω = ω_G (1 − t_G), in bits.
pub fn omega_from_g(g: &GPoint, kind: Heuristic) -> Result<f64> {
    omega_from_g_with(g, kind, &GrowthControls::default())
}

pub fn omega_from_g_with(g: &GPoint, kind: Heuristic, ctl: &GrowthControls) -> Result<f64> {
    let q0 = [g.alpha_g * (1.0 - g.p_g), g.alpha_g * g.p_g];
    let hs = halt_sample(g.alpha_g, kind, q0, ctl)?;
    Ok(hs.omega_bits() * (1.0 - g.t_g))
}

/// Upper-sat ω: G from the branch trajectory, then growth from G.
pub fn omega_upper_sat(alpha0: f64, kind: Heuristic, line: &CriticalLine) -> Result<f64> {
    let g = ode::find_g(alpha0, kind, line)?;
    omega_from_g(&g, kind)
}

pub fn asymptotic_constant() -> f64 {
    (3.0 + 5f64.sqrt()) / (6.0 * LN_2) * LN_GOLDEN * LN_GOLDEN
}

/// Large-α₀ GUC asymptote of ω_THE, in bits.
pub fn asymptotic_omega(alpha0: f64) -> Result<f64> {
    if !(alpha0 > 0.0) {
        return Err(Error::InvalidArgument("α₀ must be positive".into()));
    }
    Ok(asymptotic_constant() / alpha0)
}

#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub n_p: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub n_alpha: usize,
    /// Launch fan half-width around the dominant launch point, per axis.
    pub fan_radius: f64,
    pub n_fan: usize,
}

impl GridSpec {
    pub fn around(alpha0: f64) -> Self {
        GridSpec { p_min: 0.0, p_max: 1.0, n_p: 41, alpha_min: 0.0, alpha_max: 1.05 * alpha0, n_alpha: 41, fan_radius: 1.0, n_fan: 41 }
    }

    pub fn p_at(&self, i: usize) -> f64 {
        self.p_min + (self.p_max - self.p_min) * i as f64 / (self.n_p - 1).max(1) as f64
    }

    pub fn alpha_at(&self, j: usize) -> f64 {
        self.alpha_min + (self.alpha_max - self.alpha_min) * j as f64 / (self.n_alpha - 1).max(1) as f64
    }
}

/// ω(p, α; t) on a grid; `None` where no characteristic lands nearby.
#[derive(Clone, Debug)]
pub struct SurfaceSnapshot {
    pub t: f64,
    pub grid: GridSpec,
    /// Row-major over p then α.
    pub omega: Vec<Option<f64>>,
    pub apex: GrowthSample,
}

impl SurfaceSnapshot {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.omega[i * self.grid.n_alpha + j]
    }

    pub fn max(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.grid.n_p {
            for j in 0..self.grid.n_alpha {
                if let Some(w) = self.get(i, j) {
                    if best.is_none_or(|b| w > b.2) {
                        best = Some((i, j, w));
                    }
                }
            }
        }
        best
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,p,alpha,omega_nats,omega_bits")?;
        for i in 0..self.grid.n_p {
            for j in 0..self.grid.n_alpha {
                let (p, a) = (self.grid.p_at(i), self.grid.alpha_at(j));
                match self.get(i, j) {
                    Some(v) => writeln!(w, "{},{p},{a},{v},{}", self.t, v / LN_2)?,
                    None => writeln!(w, "{},{p},{a},-inf,-inf", self.t)?,
                }
            }
        }
        Ok(())
    }
}

/// ω(c; t) = min over y of [φ(y; t) − y·c], evaluated from a fan of
/// characteristics: each endpoint (y_k, φ_k) is a tangent plane of φ, and
/// the minimum over the planes is the concave conjugate.
pub fn legendre_surface(alpha0: f64, kind: Heuristic, t: f64, grid: &GridSpec) -> Result<SurfaceSnapshot> {
    legendre_surface_from(kind, [0.0, alpha0], t, grid, &GrowthControls::default())
}

pub fn legendre_surface_from(kind: Heuristic, q0: [f64; 2], t: f64, grid: &GridSpec, ctl: &GrowthControls) -> Result<SurfaceSnapshot> {
    check_heuristic(kind)?;
    if grid.n_p < 2 || grid.n_alpha < 2 || grid.n_fan < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points per axis".into()));
    }
    let mut ctl_c = *ctl;
    ctl_c.stop_at_halt = true;
    ctl_c.t_max = t;
    let series = solve_characteristics(q0[0] + q0[1], kind, q0[0], q0[1], &ctl_c)?;
    let apex_sample = *series.samples.last().expect("series has a sample");
    if series.halt.is_some() && (apex_sample.t - t).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("t = {t} is past the halt at {}", apex_sample.t)));
    }
    let centre = apex_sample.launch;
    let n = grid.n_fan;
    let r = grid.fan_radius;
    let fan: Vec<CharacteristicState> = (0..n * n)
        .into_par_iter()
        .filter_map(|k| {
            let (a, b) = (k / n, k % n);
            let y0 = [centre[0] + r * (2.0 * a as f64 / (n - 1) as f64 - 1.0), centre[1] + r * (2.0 * b as f64 / (n - 1) as f64 - 1.0)];
            characteristic(kind, y0, q0, t, ctl).ok()
        })
        .chain(rayon::iter::once(CharacteristicState {
            t,
            y2: 0.0,
            y3: 0.0,
            c2: apex_sample.c2,
            c3: apex_sample.c3,
            phi: apex_sample.omega,
        }))
        .filter(|s| s.c2 >= 0.0 && s.c3 >= 0.0)
        .collect();

    let to_pa = |c2: f64, c3: f64| {
        let tot = c2 + c3;
        (c3 / tot, tot / (1.0 - t))
    };
    let (dp, da) = ((grid.p_max - grid.p_min) / (grid.n_p - 1) as f64, (grid.alpha_max - grid.alpha_min) / (grid.n_alpha - 1) as f64);
    let landed: Vec<(f64, f64)> = fan.iter().map(|s| to_pa(s.c2, s.c3)).collect();
    let mut omega = vec![None; grid.n_p * grid.n_alpha];
    for i in 0..grid.n_p {
        for j in 0..grid.n_alpha {
            let (p, a) = (grid.p_at(i), grid.alpha_at(j));
            let near = landed.iter().any(|&(lp, la)| (lp - p).abs() <= dp && (la - a).abs() <= da);
            if !near || a <= 0.0 {
                continue;
            }
            let (c2, c3) = (a * (1.0 - t) * (1.0 - p), a * (1.0 - t) * p);
            let w = fan.iter().map(|s| s.phi - s.y2 * c2 - s.y3 * c3).fold(f64::INFINITY, f64::min);
            omega[i * grid.n_alpha + j] = Some(w);
        }
    }
    Ok(SurfaceSnapshot { t, grid: *grid, omega, apex: apex_sample })
}

/// Coarse Lax–Friedrichs solution of φ_t = H(∇φ, y, t) on a square around
/// y = 0, returning φ(0, 0; t). Cross-check for the characteristics.
pub fn grid_cross_check(kind: Heuristic, q0: [f64; 2], t: f64, half_width: f64, n: usize) -> Result<f64> {
    check_heuristic(kind)?;
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument("grid size must be odd and at least 5".into()));
    }
    let dx = 2.0 * half_width / (n - 1) as f64;
    let coord = |i: usize| -half_width + i as f64 * dx;
    let mut phi: Vec<f64> = (0..n * n).map(|k| q0[0] * coord(k / n) + q0[1] * coord(k % n)).collect();
    let mut time = 0.0;
    while time < t {
        // dissipation bounds from the current gradients
        let mut amax = [0.0f64; 2];
        let mut grads = vec![[0.0; 2]; n * n];
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let g =
                    [(phi[(i + 1) * n + j] - phi[(i - 1) * n + j]) / (2.0 * dx), (phi[i * n + j + 1] - phi[i * n + j - 1]) / (2.0 * dx)];
                grads[i * n + j] = g;
                let hp = parts(kind, g, [coord(i), coord(j)], time);
                amax[0] = amax[0].max(hp.dq[0].abs());
                amax[1] = amax[1].max(hp.dq[1].abs());
            }
        }
        let dt = (0.4 * dx / (amax[0] + amax[1]).max(1e-12)).min(t - time);
        let mut next = phi.clone();
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let k = i * n + j;
                let hp = parts(kind, grads[k], [coord(i), coord(j)], time);
                let lap2 = phi[k + n] - 2.0 * phi[k] + phi[k - n];
                let lap3 = phi[k + 1] - 2.0 * phi[k] + phi[k - 1];
                next[k] = phi[k] + dt * (hp.h + amax[0] * lap2 / (2.0 * dx) + amax[1] * lap3 / (2.0 * dx));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                    let (ii, jj) = (i.clamp(1, n - 2), j.clamp(1, n - 2));
                    let (i2, j2) = (
                        if i == 0 {
                            2
                        } else if i == n - 1 {
                            n - 3
                        } else {
                            ii
                        },
                        if j == 0 {
                            2
                        } else if j == n - 1 {
                            n - 3
                        } else {
                            jj
                        },
                    );
                    let (a, b) = (next[ii * n + jj], next[i2 * n + j2]);
                    next[i * n + j] = 2.0 * a - b;
                }
            }
        }
        phi = next;
        time += dt;
    }
    let c = (n - 1) / 2;
    Ok(phi[c * n + c])
}

pub fn write_series_csv<W: Write>(series: &GrowthSeries, mut w: W) -> Result<()> {
    writeln!(w, "t,omega_nats,omega_bits,c2,c3,p,alpha,rho_split")?;
    for s in &series.samples {
        writeln!(w, "{},{},{},{},{},{},{},{}", s.t, s.omega, s.omega_bits(), s.c2, s.c3, s.p, s.alpha, s.rho_split)?;
    }
    Ok(())
}
