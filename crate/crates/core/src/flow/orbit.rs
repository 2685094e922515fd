use serde::Serialize;

use super::dopri::{self, Event, Options};
use super::system3d::{energy, integrate_3d, run_3d};
use super::{find_fixed_point, u_id, FlowError, U_FD};

#[derive(Debug, Clone, Copy)]
pub struct OrbitConfig {
    pub opts: Options,
    /// Stop shooting once `|x1 + x0|` is below this.
    pub shoot_tol: f64,
    pub closure_tol: f64,
    /// Number of uniformly spaced curve samples over one period.
    pub samples: usize,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            opts: Options {
                rtol: 1e-12,
                atol: 1e-14,
                h_max: 0.05,
                ..Options::default()
            },
            shoot_tol: 1e-13,
            closure_tol: 1e-6,
            samples: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub h: f64,
}

/// Comparison of the measured period with the two candidate rescalings of
/// the `ω = 1` period: `ω^{−q/(1+q)}` and `ω^{(1+q)/q}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingDiagnostic {
    pub period_omega1: f64,
    pub rel_err_tau: f64,
    pub rel_err_alt: f64,
    pub matches_tau: bool,
    pub matches_alt: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitResult {
    pub q: u32,
    pub omega: f64,
    /// Planar fixed point of the transition map and its crossing time.
    pub u_star: f64,
    pub t_star: f64,
    /// Start `(x0, 0, −ω²/x0)` of the 3D orbit and `x0 / ω^{1/(1+q)}`.
    pub x0: f64,
    pub u0: f64,
    pub half_period: f64,
    pub period: f64,
    /// `max |H + ω²|` over the curve, absolute and divided by `ω²`.
    pub energy_drift: f64,
    pub energy_drift_rel: f64,
    pub closure_error: f64,
    /// Closure measured by a plain fixed-horizon integration to `period`.
    pub recheck_closure_error: f64,
    /// `max ‖φ(t + T/2) + φ(t)‖`.
    pub symmetry_error: f64,
    /// `max |x z + ω²|` at the two points where the orbit meets `y = 0`.
    pub section_residual: f64,
    /// Distance between `−p0` and the 3D image of the lifted planar fixed
    /// point after the rescaled time `t*`.
    pub junction_gap: f64,
    pub x_zero_crossings: usize,
    pub scaling: ScalingDiagnostic,
    #[serde(skip)]
    pub curve: Vec<CurvePoint>,
    #[serde(skip)]
    segments: Vec<dopri::Segment<3>>,
}

impl OrbitResult {
    pub fn state_at(&self, t: f64) -> [f64; 3] {
        dopri::dense_at(&self.segments, t)
    }
}

fn scale_x(q: u32, omega: f64) -> f64 {
    omega.powf(1.0 / (1.0 + f64::from(q)))
}

fn start_state(omega: f64, x0: f64) -> [f64; 3] {
    [x0, 0.0, -omega * omega / x0]
}

/// First return of `(x0, 0, −ω²/x0)` to `y = 0`: returns `(x1, time)`.
pub fn half_return(q: u32, omega: f64, x0: f64, opts: &Options) -> Result<(f64, f64), FlowError> {
    let k = f64::from(q) + 1.0;
    let ev = Event::new(1, |_, s: &[f64; 3]| s[1]);
    let d = run_3d(q, k, 0.0, start_state(omega, x0), 1e3, opts, &[&ev], 1.0)?;
    if d.stopped.is_none() {
        return Err(FlowError::NoCrossing(1e3));
    }
    Ok((d.y[0], d.t))
}

/// Bisection for the symmetric orbit, `x1(x0) = −x0`, over the departure
/// section scaled to level `ω`.
pub fn shoot_symmetric(q: u32, omega: f64, cfg: &OrbitConfig) -> Result<(f64, f64), FlowError> {
    if !(omega > 0.0) {
        return Err(FlowError::BadOmega);
    }
    let s = scale_x(q, omega);
    let f = |x0: f64| half_return(q, omega, x0, &cfg.opts).map(|(x1, t)| (x1 + x0, t));
    let (mut a, mut b) = (s * u_id(q), s * U_FD);
    let (fa, _) = f(a)?;
    let (fb, _) = f(b)?;
    if !(fa < 0.0 && fb > 0.0) {
        return Err(FlowError::Bracket {
            lo: a,
            hi: b,
            h_lo: fa,
            h_hi: fb,
        });
    }
    let mut best = (f64::INFINITY, a, 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let (fm, tm) = f(m)?;
        if fm.abs() < best.0 {
            best = (fm.abs(), m, tm);
        }
        if fm.abs() < cfg.shoot_tol {
            break;
        }
        if fm < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((best.1, best.2))
}

/// Builds the symmetric periodic orbit on the level `H = −ω²`.
pub fn lift_orbit(
    q: u32,
    omega: f64,
    u_star: f64,
    t_star: f64,
    cfg: &OrbitConfig,
) -> Result<OrbitResult, FlowError> {
    let (x0, _) = shoot_symmetric(q, omega, cfg)?;
    let k = f64::from(q) + 1.0;
    let start = start_state(omega, x0);
    let up = Event::new(1, |_, s: &[f64; 3]| s[1]);
    let down = Event::new(-1, |_, s: &[f64; 3]| s[1]);
    let first = run_3d(q, k, 0.0, start, 1e3, &cfg.opts, &[&up], 1.0)?;
    if first.stopped.is_none() {
        return Err(FlowError::NoCrossing(1e3));
    }
    let mut mid = first.y;
    mid[1] = 0.0;
    let half_period = first.t;
    let second = run_3d(q, k, half_period, mid, 1e3, &cfg.opts, &[&down], -1.0)?;
    if second.stopped.is_none() {
        return Err(FlowError::NoCrossing(1e3));
    }
    let period = second.t;
    let end = second.y;
    let closure_error = dist(&end, &start);

    let mut segments = first.segments;
    segments.extend(second.segments);
    let knots: Vec<[f64; 3]> = first
        .knots
        .iter()
        .chain(&second.knots)
        .map(|k| k.1)
        .collect();
    let w2 = omega * omega;
    let n = cfg.samples.max(2);
    let curve: Vec<CurvePoint> = (0..n)
        .map(|i| {
            let t = period * i as f64 / (n - 1) as f64;
            let s = dopri::dense_at(&segments, t);
            CurvePoint {
                t,
                x: s[0],
                y: s[1],
                z: s[2],
                h: energy(q, &s),
            }
        })
        .collect();
    let energy_drift = knots
        .iter()
        .map(|s| energy(q, s))
        .chain(curve.iter().map(|c| c.h))
        .map(|h| (h + w2).abs())
        .fold(0.0, f64::max);
    let symmetry_error = (0..n / 2)
        .map(|i| {
            let t = 0.5 * period * i as f64 / (n / 2) as f64;
            let a = dopri::dense_at(&segments, t);
            let b = dopri::dense_at(&segments, t + 0.5 * period);
            dist(&a, &[-b[0], -b[1], -b[2]])
        })
        .fold(0.0, f64::max);
    let section_residual = [start, mid]
        .iter()
        .map(|s| (s[0] * s[2] + w2).abs())
        .fold(0.0, f64::max);

    let tight = Options {
        rtol: cfg.opts.rtol * 0.1,
        atol: cfg.opts.atol * 0.1,
        ..cfg.opts
    };
    let recheck = integrate_3d(q, k, start, period, &tight)?;
    let recheck_closure_error = dist(&recheck.last(), &start);

    let sx = scale_x(q, omega);
    let p0 = [sx * u_star, 0.0, -w2 / (sx * u_star)];
    let tau = omega.powf(-f64::from(q) / (1.0 + f64::from(q)));
    let lifted = integrate_3d(q, k, p0, t_star * tau, &cfg.opts)?;
    let junction_gap = dist(&lifted.last(), &[-p0[0], -p0[1], -p0[2]]);

    let period_omega1 = if omega == 1.0 {
        period
    } else {
        let (x1, _) = shoot_symmetric(q, 1.0, cfg)?;
        2.0 * half_return(q, 1.0, x1, &cfg.opts)?.1
    };
    let qf = f64::from(q);
    let pred_tau = period_omega1 * omega.powf(-qf / (1.0 + qf));
    let pred_alt = period_omega1 * omega.powf((1.0 + qf) / qf);
    let rel_err_tau = (period - pred_tau).abs() / period;
    let rel_err_alt = (period - pred_alt).abs() / period;
    let scaling = ScalingDiagnostic {
        period_omega1,
        rel_err_tau,
        rel_err_alt,
        matches_tau: rel_err_tau < 1e-8,
        matches_alt: rel_err_alt < 1e-8,
    };

    let result = OrbitResult {
        q,
        omega,
        u_star,
        t_star,
        x0,
        u0: x0 / sx,
        half_period,
        period,
        energy_drift,
        energy_drift_rel: energy_drift / w2,
        closure_error,
        recheck_closure_error,
        symmetry_error,
        section_residual,
        junction_gap,
        x_zero_crossings: first.switch_times.len() + second.switch_times.len(),
        scaling,
        curve,
        segments,
    };
    let worst = closure_error.max(recheck_closure_error);
    if !(worst < cfg.closure_tol) {
        return Err(FlowError::Closure {
            err: worst,
            tol: cfg.closure_tol,
        });
    }
    Ok(result)
}

/// Planar fixed point followed by the 3D lift.
pub fn periodic_orbit(q: u32, omega: f64, cfg: &OrbitConfig) -> Result<OrbitResult, FlowError> {
    let fp = find_fixed_point(q, &Options::default())?;
    lift_orbit(q, omega, fp.u_star, fp.t_star, cfg)
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
