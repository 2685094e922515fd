use serde::Serialize;

use dashu_base::SquareRoot;
use dashu_float::FBig;

use super::{u_id, FlowError, U_FD};
use crate::conditions::{isolate_endpoint, u_fi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Inward,
    Outward,
}

type F = FBig;

fn hp(x: f64, prec: usize) -> F {
    F::try_from(x)
        .expect("finite sample")
        .with_precision(prec)
        .value()
}

fn hpi(n: i64, prec: usize) -> F {
    F::from(n).with_precision(prec).value()
}

fn hpr((n, d): (i64, i64), prec: usize) -> F {
    hpi(n, prec) / hpi(d, prec)
}

fn pow(x: &F, k: u32) -> F {
    let mut acc = F::ONE;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

fn to_f64(x: &F) -> f64 {
    x.to_f64().value()
}

/// Boundary curve `v = c(u)` with exact rational (or `√2`, `γ`) data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Curve {
    /// `v = −1/u`.
    Hyperbola,
    /// `v = slope·u + offset`.
    Line {
        slope: (i64, i64),
        offset: (i64, i64),
    },
    /// `v = sqrt2·√2·|u|^q + gamma·γ`.
    Power {
        sqrt2: (i64, i64),
        gamma: (i64, i64),
    },
}

struct Consts {
    prec: usize,
    sqrt2: F,
    gamma: F,
}

impl Consts {
    fn new(q: u32, prec: usize) -> Self {
        let n = 2 * (i64::from(q) + 1);
        let r = 2 * (i64::from(q) + 1).pow(2);
        Consts {
            prec,
            sqrt2: hpi(2, prec).sqrt(),
            gamma: hpi(r, prec).nth_root(n as usize),
        }
    }
}

impl Curve {
    fn value(&self, q: u32, u: &F, k: &Consts) -> F {
        match *self {
            Curve::Hyperbola => -(hpi(1, k.prec) / u),
            Curve::Line { slope, offset } => hpr(slope, k.prec) * u + hpr(offset, k.prec),
            Curve::Power { sqrt2, gamma } => {
                hpr(sqrt2, k.prec) * &k.sqrt2 * pow(&abs(u), q) + hpr(gamma, k.prec) * &k.gamma
            }
        }
    }

    fn slope(&self, q: u32, u: &F, k: &Consts) -> F {
        match *self {
            Curve::Hyperbola => hpi(1, k.prec) / (u * u),
            Curve::Line { slope, .. } => hpr(slope, k.prec),
            Curve::Power { sqrt2, .. } => {
                let s = if *u < F::ZERO { -1 } else { 1 };
                hpr(sqrt2, k.prec) * &k.sqrt2 * hpi(s * i64::from(q), k.prec) * pow(&abs(u), q - 1)
            }
        }
    }
}

fn abs(x: &F) -> F {
    if *x < F::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrapPiece {
    pub name: String,
    pub curve: Curve,
    pub u_min: f64,
    pub u_max: f64,
    /// `+1` when the region lies on `v ≥ c(u)`, `−1` when on `v ≤ c(u)`.
    pub side: f64,
    pub expected: Verdict,
    /// Samples with `|u|` below this are skipped (tangency at `u = 0`).
    pub exclusion: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrapRegionSpec {
    pub q: u32,
    pub u_id: f64,
    pub u_fd: f64,
    pub u_ii: f64,
    pub u_fi: f64,
    pub pieces: Vec<TrapPiece>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub u: f64,
    pub v: f64,
    pub derivative: f64,
    pub guard: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceReport {
    pub name: String,
    pub expected: Verdict,
    pub checked: usize,
    pub excluded: usize,
    pub ok: bool,
    /// Smallest `|⟨∇g, X⟩|/guard` over checked samples.
    pub min_margin: f64,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrapReport {
    pub q: u32,
    pub samples_per_piece: usize,
    pub pass: bool,
    pub pieces: Vec<PieceReport>,
}

/// Boundary of the trapping region: the two hyperbola sections and
/// `U1..U5`; for `q ≤ 3` the equivalent low-degree pieces are listed too.
pub fn trap_pieces(q: u32, exclusion: f64) -> Result<TrapRegionSpec, FlowError> {
    if q == 0 {
        return Err(FlowError::BadQ);
    }
    let e = isolate_endpoint(q).map_err(|e| FlowError::Endpoints(e.to_string()))?;
    let qi = i64::from(q);
    let (uid, uii, ufi) = (u_id(q), e.u_ii, u_fi(q));
    let u1_end = (1.0 + 4.0 * f64::from(q)) / (2.0 * f64::from(q));
    let piece = |name: &str, curve, u_min, u_max, side, expected, excl: f64| TrapPiece {
        name: name.to_string(),
        curve,
        u_min,
        u_max,
        side,
        expected,
        exclusion: excl,
    };
    use Verdict::*;
    let line = Curve::Line {
        slope: (qi, 1),
        offset: (-(1 + 4 * qi), 2),
    };
    let lower = Curve::Power {
        sqrt2: (1 + qi, qi),
        gamma: (-(1 + qi), qi),
    };
    let upper = Curve::Power {
        sqrt2: (1 + qi, qi),
        gamma: (0, 1),
    };
    let zero = Curve::Line {
        slope: (0, 1),
        offset: (0, 1),
    };
    let mut pieces = vec![
        piece("Sigma_D", Curve::Hyperbola, uid, U_FD, 1.0, Inward, 0.0),
        piece("Sigma_I", Curve::Hyperbola, uii, ufi, -1.0, Outward, 0.0),
        piece("U1", zero, 0.0, u1_end, -1.0, Inward, exclusion),
        piece("U2", line, U_FD, u1_end, 1.0, Inward, 0.0),
        piece("U3", lower, 0.0, uid, 1.0, Inward, exclusion),
        piece("U4", lower, uii, 0.0, 1.0, Inward, exclusion),
        piece("U5", upper, ufi, 0.0, -1.0, Inward, exclusion),
    ];
    if q <= 3 {
        let letter = ["R", "S", "T"][q as usize - 1];
        let curves = [zero, line, lower, lower, upper];
        let ranges = [
            (0.0, u1_end),
            (U_FD, u1_end),
            (0.0, uid),
            (uii, 0.0),
            (ufi, 0.0),
        ];
        let sides = [-1.0, 1.0, 1.0, 1.0, -1.0];
        let excl = [exclusion, 0.0, exclusion, exclusion, exclusion];
        for i in 0..5 {
            pieces.push(piece(
                &format!("{letter}{}", i + 1),
                curves[i],
                ranges[i].0,
                ranges[i].1,
                sides[i],
                Inward,
                excl[i],
            ));
        }
    }
    Ok(TrapRegionSpec {
        q,
        u_id: uid,
        u_fd: U_FD,
        u_ii: uii,
        u_fi: ufi,
        pieces,
    })
}

/// `⟨∇g, X⟩` for `g = side·(v − c(u))` in `k.prec`-bit arithmetic, with an
/// error guard, both rounded to `f64`.
fn directional(q: u32, piece: &TrapPiece, u: f64, k: &Consts) -> (f64, f64, f64) {
    let p = k.prec;
    let uh = hp(u, p);
    let v = piece.curve.value(q, &uh, k);
    let a = pow(&abs(&uh), q);
    let ua = &uh * &a;
    let w = &uh * &v + hpi(1, p);
    let rad = &ua * &ua + hpi(2, p) * &w;
    let vf = to_f64(&v);
    if rad < F::ZERO {
        return (f64::NAN, 0.0, vf);
    }
    let root = rad.sqrt();
    let du = &ua - &root;
    let factor = if u < 0.0 {
        -pow(&abs(&uh), q - 1)
    } else {
        pow(&abs(&uh), q - 1)
    };
    let dv = &factor * (-(&uh * &v) - hpi(i64::from(q) + 1, p) * &du * &du);
    let c1 = piece.curve.slope(q, &uh, k);
    let d = hp(piece.side, p) * (dv - &c1 * &du);
    let du_terms = to_f64(&abs(&ua)) + to_f64(&root);
    let scale = to_f64(&abs(&factor))
        * ((u * vf).abs() + (f64::from(q) + 1.0) * du_terms * du_terms)
        + to_f64(&abs(&c1)) * du_terms;
    let guard = scale * 2f64.powi(-(p as i32) + 32);
    (to_f64(&d), guard, vf)
}

/// Working precision: enough bits to resolve the `O(|u|^(2q+2))`
/// cancellation next to the excluded tangency.
fn precision(q: u32, exclusion: f64) -> usize {
    let lost = (2.0 * (f64::from(q) + 1.0) * (1.0 / exclusion.max(1e-6)).log2()).ceil() as usize;
    128 + lost
}

/// Samples every boundary piece and checks the sign of the derivative of
/// its defining function along the minus-branch field, evaluated in
/// multiprecision floating point.
pub fn validate_trap_region(
    q: u32,
    samples_per_piece: usize,
    exclusion: f64,
) -> Result<TrapReport, FlowError> {
    let region = trap_pieces(q, exclusion)?;
    let consts = Consts::new(q, precision(q, exclusion));
    let n = samples_per_piece.max(1);
    let mut reports = Vec::new();
    for p in &region.pieces {
        let mut checked = 0;
        let mut excluded = 0;
        let mut min_margin = f64::INFINITY;
        let mut violations = Vec::new();
        for i in 0..n {
            let u = p.u_min + (p.u_max - p.u_min) * (i as f64 + 0.5) / n as f64;
            if u.abs() < p.exclusion {
                excluded += 1;
                continue;
            }
            checked += 1;
            let (d, guard, v) = directional(q, p, u, &consts);
            let signed = match p.expected {
                Verdict::Inward => d,
                Verdict::Outward => -d,
            };
            min_margin = min_margin.min(signed / guard);
            if !(signed > guard) {
                violations.push(Violation {
                    u,
                    v,
                    derivative: d,
                    guard,
                });
            }
        }
        reports.push(PieceReport {
            name: p.name.clone(),
            expected: p.expected,
            checked,
            excluded,
            ok: violations.is_empty() && checked > 0,
            min_margin,
            violations,
        });
    }
    Ok(TrapReport {
        q,
        samples_per_piece: n,
        pass: reports.iter().all(|r| r.ok),
        pieces: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hp_constants() {
        let k = Consts::new(2, 256);
        assert!((to_f64(&k.sqrt2) - 2f64.sqrt()).abs() < 1e-15);
        assert!((to_f64(&k.gamma) - super::super::gamma(2)).abs() < 1e-14);
    }

    #[test]
    fn sigma_i_outward_q1() {
        let r = validate_trap_region(1, 200, 1e-2).unwrap();
        let p = r.pieces.iter().find(|p| p.name == "Sigma_I").unwrap();
        assert_eq!(p.expected, Verdict::Outward);
        assert!(p.ok);
    }

    #[test]
    fn s1_inward_at_one() {
        let region = trap_pieces(2, 1e-2).unwrap();
        let s1 = region.pieces.iter().find(|p| p.name == "S1").unwrap();
        let k = Consts::new(2, precision(2, 1e-2));
        let (d, guard, _) = directional(2, s1, 1.0, &k);
        assert!(d > guard);
        // v = 0, u = 1: v' = −(q+1)(1 − √3)² < 0 and g = −v
        let want = 3.0 * (1.0 - 3f64.sqrt()).powi(2);
        assert!((d - want).abs() < 1e-12);
    }

    #[test]
    fn tangency_sign_resolved() {
        // next to the tangency the terms cancel to below f64 resolution
        let region = trap_pieces(7, 1e-2).unwrap();
        let u5 = region.pieces.iter().find(|p| p.name == "U5").unwrap();
        let k = Consts::new(7, precision(7, 1e-2));
        let (d, guard, _) = directional(7, u5, -0.011, &k);
        assert!(d > guard && guard > 0.0);
    }
}
