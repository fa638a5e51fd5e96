//! Dormand–Prince 5(4) with step-size control and the standard quartic
//! continuous extension.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { rtol: 1e-10, atol: 1e-12, h_init: 1e-4, h_max: 0.02, h_min: 1e-14, max_steps: 2_000_000 }
    }
}

/// One accepted step with its interpolant.
pub struct Step<const D: usize> {
    pub x0: f64,
    pub x1: f64,
    pub y0: [f64; D],
    pub y1: [f64; D],
    r: [[f64; D]; 5],
}

impl<const D: usize> Step<D> {
    pub fn eval(&self, x: f64) -> [f64; D] {
        let h = self.x1 - self.x0;
        let s = (x - self.x0) / h;
        let s1 = 1.0 - s;
        let r = &self.r;
        std::array::from_fn(|i| r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i]))))
    }

    /// Root of `g` on this step by bisection, given a sign change between
    /// the endpoints.
    pub fn locate<G: Fn(f64, &[f64; D]) -> f64>(&self, g: G, tol: f64) -> f64 {
        self.locate_in(self.x0, self.x1, g, tol)
    }

    /// As [`Step::locate`] on a sub-interval of the step.
    pub fn locate_in<G: Fn(f64, &[f64; D]) -> f64>(&self, a: f64, b: f64, g: G, tol: f64) -> f64 {
        let (mut a, mut b) = (a, b);
        let ga = g(a, &self.eval(a));
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let m = 0.5 * (a + b);
            let gm = g(m, &self.eval(m));
            if (gm > 0.0) == (ga > 0.0) && gm != 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

pub enum Control {
    Continue,
    Stop,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
const DC: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrates y' = f(x, y) from `x0` to `x_end`, handing every accepted step
/// to `observer`. Returns the final abscissa and state.
pub fn integrate<const D: usize, F, O>(f: F, x0: f64, y0: [f64; D], x_end: f64, opts: &Options, mut observer: O) -> Result<(f64, [f64; D])>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    O: FnMut(&Step<D>) -> Control,
{
    let (mut x, mut y) = (x0, y0);
    let mut h = opts.h_init.min(opts.h_max).min(x_end - x0);
    let mut k1 = f(x, &y);
    let mut steps = 0;
    while x < x_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::numeric("step budget exhausted", x, f64::NAN));
        }
        if x + h > x_end {
            h = x_end - x;
        }
        let mut k = [[0.0; D]; 7];
        k[0] = k1;
        for s in 1..7 {
            let ys: [f64; D] = std::array::from_fn(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>());
            k[s] = f(x + C[s] * h, &ys);
        }
        let y1: [f64; D] = std::array::from_fn(|i| y[i] + h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>());
        let mut err = 0.0;
        for i in 0..D {
            let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / D as f64).sqrt();
        if !err.is_finite() || err > 1.0 {
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            if h < opts.h_min {
                let res = if err.is_finite() { err } else { f64::INFINITY };
                return Err(Error::numeric("step size underflow", x, res));
            }
            continue;
        }
        let r2: [f64; D] = std::array::from_fn(|i| y1[i] - y[i]);
        let r3: [f64; D] = std::array::from_fn(|i| h * k[0][i] - r2[i]);
        let r4: [f64; D] = std::array::from_fn(|i| r2[i] - h * k[6][i] - r3[i]);
        let r5: [f64; D] = std::array::from_fn(|i| h * (0..7).map(|j| DC[j] * k[j][i]).sum::<f64>());
        let step = Step { x0: x, x1: x + h, y0: y, y1, r: [y, r2, r3, r4, r5] };
        x += h;
        y = y1;
        k1 = k[6];
        if let Control::Stop = observer(&step) {
            return Ok((x, y));
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * fac).min(opts.h_max);
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_dense_output() {
        let mut worst: f64 = 0.0;
        let (x, y) = integrate(
            |_, y: &[f64; 1]| [-y[0]],
            0.0,
            [1.0],
            3.0,
            &Options::default(),
            |st| {
                let xm = 0.5 * (st.x0 + st.x1);
                worst = worst.max((st.eval(xm)[0] - (-xm).exp()).abs());
                Control::Continue
            },
        )
        .unwrap();
        assert_eq!(x, 3.0);
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-10);
        assert!(worst < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let (_, y) = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], 20.0, &Options::default(), |_| Control::Continue).unwrap();
        assert!((y[0] - 20f64.cos()).abs() < 1e-8);
        assert!((y[0] * y[0] + y[1] * y[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn event_location() {
        let mut hit = None;
        integrate(
            |_, _: &[f64; 1]| [1.0],
            0.0,
            [0.0],
            2.0,
            &Options::default(),
            |st| {
                if st.y1[0] >= 0.75 {
                    hit = Some(st.locate(|_, y| y[0] - 0.75, 1e-13));
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        )
        .unwrap();
        assert!((hit.unwrap() - 0.75).abs() < 1e-12);
    }
}
