//! Dormand–Prince 5(4) with Hairer's continuous extension and event location.

use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Absolute tolerance on event times.
    pub event_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: 0.1,
            max_steps: 200_000,
            event_tol: 1e-14,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("step limit of {0} steps exceeded")]
    StepLimit(usize),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct Segment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    /// Last time covered; shorter than `t0 + h` when an event cut the step.
    pub end: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Segment<N> {
    pub fn t1(&self) -> f64 {
        self.end
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let r = &self.r;
        std::array::from_fn(|i| {
            r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])))
        })
    }
}

/// Scalar event function with a crossing direction: `+1` rising, `-1`
/// falling, `0` either.
pub struct Event<'a, const N: usize> {
    pub g: Box<dyn Fn(f64, &[f64; N]) -> f64 + 'a>,
    pub direction: i8,
}

impl<'a, const N: usize> Event<'a, N> {
    pub fn new(direction: i8, g: impl Fn(f64, &[f64; N]) -> f64 + 'a) -> Self {
        Event {
            g: Box::new(g),
            direction,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// Index of the terminating event, `None` when `t_end` was reached.
    pub event: Option<usize>,
    pub segments: Vec<Segment<N>>,
    pub steps: usize,
}

impl<const N: usize> Outcome<N> {
    /// Dense value at `t` inside the integrated range.
    pub fn at(&self, t: f64) -> [f64; N] {
        dense_at(&self.segments, t)
    }
}

pub fn dense_at<const N: usize>(segments: &[Segment<N>], t: f64) -> [f64; N] {
    let i = segments.partition_point(|s| s.t1() < t);
    let s = &segments[i.min(segments.len() - 1)];
    s.eval(t)
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (forward), stopping at the
/// first event crossing strictly after `t0`.
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Options,
    events: &[&Event<'_, N>],
) -> Result<Outcome<N>, IntegrateError> {
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&mut f, t, &y, &k1, opts).min(t_end - t);
    let mut segments = Vec::new();
    let mut g_old: Vec<f64> = events.iter().map(|e| (e.g)(t, &y)).collect();
    let mut steps = 0;
    let mut rejected_last = false;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(IntegrateError::StepLimit(opts.max_steps));
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        if h <= 1e-15 * t.abs().max(1.0) {
            return Err(IntegrateError::StepUnderflow(t));
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            t + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y1 = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(t + h, &y1);
        let mut err = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            rejected_last = true;
            continue;
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            rejected_last = true;
            continue;
        }
        let mut r = [[0.0; N]; 5];
        for i in 0..N {
            let dy = y1[i] - y[i];
            let bspl = h * k1[i] - dy;
            r[0][i] = y[i];
            r[1][i] = dy;
            r[2][i] = bspl;
            r[3][i] = dy - h * k7[i] - bspl;
            r[4][i] =
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        let mut seg = Segment {
            t0: t,
            h,
            end: t + h,
            r,
        };
        let mut hit: Option<(usize, f64)> = None;
        for (j, e) in events.iter().enumerate() {
            let g1 = (e.g)(t + h, &y1);
            let ga = g_old[j];
            let crosses = ga != 0.0 && (g1 == 0.0 || (ga < 0.0) != (g1 < 0.0));
            let dir_ok = match e.direction {
                1 => ga < 0.0,
                -1 => ga > 0.0,
                _ => true,
            };
            if crosses && dir_ok {
                let te = locate(&seg, &*e.g, t, t + h, ga, opts.event_tol);
                if hit.is_none_or(|(_, th)| te < th) {
                    hit = Some((j, te));
                }
            }
            g_old[j] = g1;
        }
        if let Some((j, te)) = hit {
            let ye = seg.eval(te);
            seg.end = te;
            segments.push(seg);
            return Ok(Outcome {
                t: te,
                y: ye,
                event: Some(j),
                segments,
                steps,
            });
        }
        segments.push(seg);
        t += h;
        y = y1;
        k1 = k7;
        let fac = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        let fac = if rejected_last { fac.min(1.0) } else { fac };
        rejected_last = false;
        h = (h * fac).min(opts.h_max);
    }
    Ok(Outcome {
        t,
        y,
        event: None,
        segments,
        steps,
    })
}

fn initial_step<const N: usize>(
    f: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    opts: &Options,
) -> f64 {
    let sc: Vec<f64> = y.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let d0 = (y.iter().zip(&sc).map(|(v, s)| (v / s).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d1 = (k1
        .iter()
        .zip(&sc)
        .map(|(v, s)| (v / s).powi(2))
        .sum::<f64>()
        / N as f64)
        .sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(opts.h_max);
    let y1 = axpy(y, h0, &[(1.0, k1)]);
    let k2 = f(t + h0, &y1);
    let d2 = (k2
        .iter()
        .zip(k1)
        .zip(&sc)
        .map(|((a, b), s)| ((a - b) / s).powi(2))
        .sum::<f64>()
        / N as f64)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    if h1.is_finite() {
        (100.0 * h0).min(h1).min(opts.h_max)
    } else {
        h0
    }
}

/// Illinois false position on the dense output; `ga` is `g(ta)`.
fn locate<const N: usize>(
    seg: &Segment<N>,
    g: &dyn Fn(f64, &[f64; N]) -> f64,
    mut ta: f64,
    mut tb: f64,
    mut ga: f64,
    tol: f64,
) -> f64 {
    let mut gb = g(tb, &seg.eval(tb));
    if gb == 0.0 {
        return tb;
    }
    let mut side = 0i8;
    for _ in 0..200 {
        if (tb - ta).abs() <= tol {
            break;
        }
        let mut tm = (ta * gb - tb * ga) / (gb - ga);
        if !(tm > ta.min(tb) && tm < ta.max(tb)) {
            tm = 0.5 * (ta + tb);
        }
        let gm = g(tm, &seg.eval(tm));
        if gm == 0.0 {
            return tm;
        }
        if (gm < 0.0) == (gb < 0.0) {
            tb = tm;
            gb = gm;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        } else {
            ta = tm;
            ga = gm;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        }
    }
    tb
}
