use serde::Serialize;

use super::dopri::{self, Event, Options};
use super::drive::{drive, Driven};
use super::FlowError;

/// Right-hand side of `x' = y, y' = z, z' = −|x|^q z − k |x|^q/x y²`, with
/// `|x|^q/x` read as `side` at `x = 0` when `q = 1`.
pub fn rhs_3d(q: u32, k: f64, side: f64, s: &[f64; 3]) -> [f64; 3] {
    let [x, y, z] = *s;
    let qi = q as i32;
    let a = x.abs().powi(qi);
    let factor = if x != 0.0 {
        x.signum() * x.abs().powi(qi - 1)
    } else if q == 1 {
        side
    } else {
        0.0
    };
    [y, z, -a * z - k * factor * y * y]
}

/// `H = x z − y²/2 + |x|^q x y`, conserved when `k = q + 1`.
pub fn energy(q: u32, s: &[f64; 3]) -> f64 {
    let [x, y, z] = *s;
    x * z - 0.5 * y * y + x.abs().powi(q as i32) * x * y
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory3 {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    pub x_zero_crossings: Vec<f64>,
    #[serde(skip)]
    pub(crate) segments: Vec<dopri::Segment<3>>,
}

impl Trajectory3 {
    pub fn last(&self) -> [f64; 3] {
        *self.states.last().unwrap()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn at(&self, t: f64) -> [f64; 3] {
        dopri::dense_at(&self.segments, t)
    }

    /// Largest `|H − H(start)|` over the accepted steps.
    pub fn energy_drift(&self, q: u32) -> f64 {
        let h0 = energy(q, &self.states[0]);
        self.states
            .iter()
            .map(|s| (energy(q, s) - h0).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_driven(d: Driven<3>) -> Self {
        Trajectory3 {
            times: d.knots.iter().map(|k| k.0).collect(),
            states: d.knots.iter().map(|k| k.1).collect(),
            x_zero_crossings: d.switch_times,
            segments: d.segments,
        }
    }
}

pub(crate) fn run_3d(
    q: u32,
    k: f64,
    t0: f64,
    start: [f64; 3],
    t_max: f64,
    opts: &Options,
    stops: &[&Event<'_, 3>],
    side0: f64,
) -> Result<Driven<3>, FlowError> {
    if q == 0 {
        return Err(FlowError::BadQ);
    }
    let side = if start[0] != 0.0 {
        start[0].signum()
    } else {
        side0
    };
    Ok(drive(
        |side, s: &[f64; 3]| rhs_3d(q, k, side, s),
        0,
        side,
        t0,
        start,
        t_max,
        opts,
        stops,
    )?)
}

/// Integrates the 3D system from `start` over `[0, t_max]`, restarting at
/// each crossing of `x = 0`.
pub fn integrate_3d(
    q: u32,
    k: f64,
    start: [f64; 3],
    t_max: f64,
    opts: &Options,
) -> Result<Trajectory3, FlowError> {
    let side0 = if start[1] != 0.0 {
        start[1].signum()
    } else {
        1.0
    };
    let d = run_3d(q, k, 0.0, start, t_max, opts, &[], side0)?;
    Ok(Trajectory3::from_driven(d))
}
