//! Planar reduced fields, transition map, periodic orbits of the 3D system
//! and trapping-region checks.

pub mod dopri;
mod drive;
mod orbit;
mod system3d;
mod trap;

use serde::Serialize;
use thiserror::Error;

pub use dopri::{IntegrateError, Options};
pub use orbit::{
    half_return, lift_orbit, periodic_orbit, shoot_symmetric, CurvePoint, OrbitConfig, OrbitResult,
    ScalingDiagnostic,
};
pub use system3d::{energy, integrate_3d, rhs_3d, Trajectory3};
pub use trap::{
    trap_pieces, validate_trap_region, PieceReport, TrapPiece, TrapRegionSpec, TrapReport, Verdict,
};

use dopri::Event;
use drive::drive;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("q must be a positive integer")]
    BadQ,
    #[error("point ({u}, {v}) is outside the admissible set uv + 1 >= 0")]
    Inadmissible { u: f64, v: f64 },
    #[error("integration failed: {0}")]
    Integrate(#[from] IntegrateError),
    #[error("no hyperbola crossing before t = {0}")]
    NoCrossing(f64),
    #[error("start u0 = {u0} outside [{lo}, {hi}]")]
    OutOfSection { u0: f64, lo: f64, hi: f64 },
    #[error("bracket sign condition failed: h({lo}) = {h_lo}, h({hi}) = {h_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        h_lo: f64,
        h_hi: f64,
    },
    #[error("closure error {err:e} above tolerance {tol:e}")]
    Closure { err: f64, tol: f64 },
    #[error("omega must be positive")]
    BadOmega,
    #[error("endpoint isolation failed: {0}")]
    Endpoints(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarPoint {
    pub u: f64,
    pub v: f64,
}

impl PlanarPoint {
    pub fn new(u: f64, v: f64) -> Self {
        PlanarPoint { u, v }
    }

    /// `u v + 1`; the admissible set is where this is non-negative.
    pub fn hyperbola(&self) -> f64 {
        self.u * self.v + 1.0
    }

    pub fn is_admissible(&self) -> bool {
        self.hyperbola() >= 0.0
    }

    pub fn neg(&self) -> Self {
        PlanarPoint::new(-self.u, -self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub q: u32,
    pub branch: Branch,
}

impl FieldSpec {
    pub fn new(q: u32, branch: Branch) -> Result<Self, FlowError> {
        if q == 0 {
            return Err(FlowError::BadQ);
        }
        Ok(FieldSpec { q, branch })
    }

    pub fn minus(q: u32) -> Result<Self, FlowError> {
        Self::new(q, Branch::Minus)
    }

    /// Side used for `|u|^q/u` at `u = 0` when `q = 1`: the field crosses
    /// `u = 0` leftwards on the minus branch and rightwards on the plus one.
    fn crossing_side(&self) -> f64 {
        self.branch.sign()
    }

    fn raw(&self, side: f64, u: f64, v: f64) -> [f64; 2] {
        let q = self.q as i32;
        let a = u.abs().powi(q);
        let ua = u * a;
        let rad = ua * ua + 2.0 * (u * v + 1.0);
        let du = ua + self.branch.sign() * rad.sqrt();
        let factor = if u != 0.0 {
            u.signum() * u.abs().powi(q - 1)
        } else if q == 1 {
            side
        } else {
            0.0
        };
        let dv = factor * (-u * v - (q as f64 + 1.0) * du * du);
        [du, dv]
    }
}

/// Velocity of the reduced field at an admissible point.
pub fn eval_field(spec: &FieldSpec, p: PlanarPoint) -> Result<(f64, f64), FlowError> {
    if !p.is_admissible() {
        return Err(FlowError::Inadmissible { u: p.u, v: p.v });
    }
    let [du, dv] = spec.raw(spec.crossing_side(), p.u, p.v);
    Ok((du, dv))
}

/// `γ = 2^{1/(2(q+1))} (q+1)^{1/(q+1)}`.
pub fn gamma(q: u32) -> f64 {
    let n = f64::from(q) + 1.0;
    2f64.powf(0.5 / n) * n.powf(1.0 / n)
}

/// Left end of the departure section, `1/γ`.
pub fn u_id(q: u32) -> f64 {
    1.0 / gamma(q)
}

pub const U_FD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndTag {
    Hyperbola,
    TimeLimit,
    StepLimit,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PlanarPoint>,
    /// Times at which `u = 0` was crossed (integration restarted there).
    pub u_zero_crossings: Vec<f64>,
    pub end: EndTag,
    #[serde(skip)]
    segments: Vec<dopri::Segment<2>>,
}

impl Trajectory {
    pub fn last(&self) -> PlanarPoint {
        *self.points.last().unwrap()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Dense value at `t` within the integrated range.
    pub fn at(&self, t: f64) -> PlanarPoint {
        let [u, v] = dopri::dense_at(&self.segments, t);
        PlanarPoint::new(u, v)
    }
}

/// Integrates the reduced field from `p0` up to `t_max`. With
/// `stop_at_hyperbola` the run ends at the first crossing of `uv + 1 = 0`
/// from the admissible side.
pub fn integrate(
    spec: &FieldSpec,
    p0: PlanarPoint,
    stop_at_hyperbola: bool,
    t_max: f64,
    opts: &Options,
) -> Result<Trajectory, FlowError> {
    if !p0.is_admissible() {
        return Err(FlowError::Inadmissible { u: p0.u, v: p0.v });
    }
    let hyper = Event::new(-1, |_, y: &[f64; 2]| y[0] * y[1] + 1.0);
    let stops: Vec<&Event<'_, 2>> = if stop_at_hyperbola {
        vec![&hyper]
    } else {
        vec![]
    };
    let side0 = if p0.u == 0.0 {
        spec.crossing_side()
    } else {
        p0.u.signum()
    };
    let run = drive(
        |side, y: &[f64; 2]| spec.raw(side, y[0], y[1]),
        0,
        side0,
        0.0,
        [p0.u, p0.v],
        t_max,
        opts,
        &stops,
    );
    let run = match run {
        Ok(r) => r,
        Err(IntegrateError::StepLimit(_)) => {
            return Ok(Trajectory {
                times: vec![0.0],
                points: vec![p0],
                u_zero_crossings: vec![],
                end: EndTag::StepLimit,
                segments: vec![],
            })
        }
        Err(e) => return Err(e.into()),
    };
    let end = if run.stopped.is_some() {
        EndTag::Hyperbola
    } else {
        EndTag::TimeLimit
    };
    let points: Vec<PlanarPoint> = run
        .knots
        .iter()
        .map(|(_, y)| PlanarPoint::new(y[0], y[1]))
        .collect();
    let n = points.len();
    for (i, p) in points.iter().enumerate() {
        let last = i + 1 == n && end == EndTag::Hyperbola;
        if !last && p.hyperbola() < -1e-9 {
            return Err(FlowError::Inadmissible { u: p.u, v: p.v });
        }
    }
    Ok(Trajectory {
        times: run.knots.iter().map(|(t, _)| *t).collect(),
        points,
        u_zero_crossings: run.switch_times,
        end,
        segments: run.segments,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Transition {
    pub u1: f64,
    pub v1: f64,
    pub time: f64,
    /// `|u1 v1 + 1|` at the reported crossing.
    pub residual: f64,
    pub u_zero_crossings: usize,
}

/// Follows the minus branch from `(u0, −1/u0)` on the departure section to
/// the arrival hyperbola.
pub fn transition_map(q: u32, u0: f64, opts: &Options) -> Result<Transition, FlowError> {
    let spec = FieldSpec::minus(q)?;
    let (lo, hi) = (u_id(q), U_FD);
    let slack = 1e-12;
    if !(u0 >= lo - slack && u0 <= hi + slack) {
        return Err(FlowError::OutOfSection { u0, lo, hi });
    }
    let t_max = 1e3;
    let tr = integrate(&spec, PlanarPoint::new(u0, -1.0 / u0), true, t_max, opts)?;
    if tr.end != EndTag::Hyperbola {
        return Err(FlowError::NoCrossing(t_max));
    }
    let p = tr.last();
    Ok(Transition {
        u1: p.u,
        v1: p.v,
        time: tr.final_time(),
        residual: p.hyperbola().abs(),
        u_zero_crossings: tr.u_zero_crossings.len(),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedPoint {
    pub q: u32,
    pub u_star: f64,
    pub t_star: f64,
    /// `h` at the ends of the bracket `[u_iD, u_fD]`.
    pub h_lo: f64,
    pub h_hi: f64,
    /// `|P(u*) + u*|`.
    pub residual: f64,
    pub iterations: u32,
}

/// Bisection for `P(u) = −u` on `[u_iD, u_fD]`.
pub fn find_fixed_point(q: u32, opts: &Options) -> Result<FixedPoint, FlowError> {
    let h = |u: f64| transition_map(q, u, opts).map(|t| (t.u1 + u, t.time));
    let (mut a, mut b) = (u_id(q), U_FD);
    let (h_lo, _) = h(a)?;
    let (h_hi, _) = h(b)?;
    if !(h_lo < 0.0 && h_hi > 0.0) {
        return Err(FlowError::Bracket {
            lo: a,
            hi: b,
            h_lo,
            h_hi,
        });
    }
    let mut best = (f64::INFINITY, a, 0.0);
    let mut iterations = 0;
    while iterations < 200 {
        iterations += 1;
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let (hm, tm) = h(m)?;
        if hm.abs() < best.0 {
            best = (hm.abs(), m, tm);
        }
        if hm.abs() < 1e-13 {
            break;
        }
        if hm < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(FixedPoint {
        q,
        u_star: best.1,
        t_star: best.2,
        h_lo,
        h_hi,
        residual: best.0,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        for q in 1..=6 {
            let s = FieldSpec::minus(q).unwrap();
            let (a, b) = eval_field(&s, PlanarPoint::new(1.0, -1.0)).unwrap();
            assert!(a.abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
            let (a, b) = eval_field(&s, PlanarPoint::new(-1.0, 1.0)).unwrap();
            assert!((a + 2.0).abs() < 1e-15 && (b - (3.0 + 4.0 * q as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn inadmissible_rejected() {
        let s = FieldSpec::minus(2).unwrap();
        assert!(matches!(
            eval_field(&s, PlanarPoint::new(2.0, -1.0)),
            Err(FlowError::Inadmissible { .. })
        ));
        assert_eq!(FieldSpec::new(0, Branch::Plus), Err(FlowError::BadQ));
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(1) - 2f64.powf(0.75)).abs() < 1e-15);
        assert!((u_id(2) - 1.0 / (2f64.powf(1.0 / 6.0) * 3f64.powf(1.0 / 3.0))).abs() < 1e-15);
    }

    #[test]
    fn transition_lands_left() {
        let opts = Options::default();
        let t = transition_map(1, 2.0, &opts).unwrap();
        assert!(t.u1 < 0.0 && t.residual < 1e-12 && t.u_zero_crossings == 1);
    }
}
