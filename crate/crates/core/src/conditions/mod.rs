//! Root-count conditions C1–C3 and the endpoint lemma.
//!
//! `P⁺`, `P⁻` and the lemma polynomial have coefficients in `Q(γ)`. Under
//! `u = w/γ` each of them becomes `γ^ρ` times a rational polynomial, so C2
//! is a rational Sturm problem on `(0, 1)` and C3 one on `(−2γ, 0)` with a
//! single algebraic endpoint.

pub mod appendix;

use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{AlgebraicNumber, RadicalField};
use crate::exact::{rat, rat_to_f64, ratio, BigInt, BigRational, Coeff, Poly, RatPoly, Sign};
use crate::sturm::{count_roots_with_multiplicity_open, Point, SturmChain, SturmError};

pub use appendix::{gen_appendix_polys, run_appendix, AppendixCheck, AppendixPoly, AppendixReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConditionsError {
    #[error("q must be a positive integer (got {0})")]
    BadQ(u32),
    #[error("coefficient of degree {degree} is not a single γ-power")]
    NotMonomial { degree: usize },
    #[error("coefficient of degree {degree} lies in γ-class {found}, expected {expected}")]
    ResidueMismatch {
        degree: usize,
        found: usize,
        expected: usize,
    },
    #[error("endpoint lemma failed: {0}")]
    Lemma(String),
    #[error(transparent)]
    Sturm(#[from] SturmError),
}

/// Parameters of the equation with `k = q + 1`.
#[derive(Clone, Debug)]
pub struct ChazyParams {
    pub q: u32,
    pub k: u32,
    pub field: Arc<RadicalField>,
}

impl ChazyParams {
    pub fn new(q: u32) -> Result<Self, ConditionsError> {
        if q == 0 {
            return Err(ConditionsError::BadQ(q));
        }
        Ok(ChazyParams {
            q,
            k: q + 1,
            field: RadicalField::chazy(q),
        })
    }
}

fn add_term(c: &mut Vec<BigRational>, i: usize, v: BigRational) {
    if c.len() <= i {
        c.resize(i + 1, BigRational::zero());
    }
    c[i] += v;
}

/// `P_0`, integer coefficients, degree `2(1+2q)`.
pub fn gen_p0(q: u32) -> RatPoly {
    assert!(q >= 1);
    let qi = i64::from(q);
    let q = BigInt::from(qi);
    let one = BigInt::one();
    let b = |x: i64| BigInt::from(x);
    let qq = qi as usize;
    let terms: Vec<(BigInt, usize)> = vec![
        (b(8) * &q * &q, 0),
        (-(b(4) * &q * &q * (&one + b(4) * &q)), 1),
        (b(8) * &q * &q * &q, 2),
        (-(b(16) * (&one + &q) * (&one + &q)), 2 * (qq - 1)),
        (
            b(8) * (&one + &q) * (b(3) + b(2) * &q) * (&one + b(4) * &q),
            2 * qq - 1,
        ),
        (
            -((&one + b(2) * &q) * (b(9) + b(2) * &q * (b(7) + b(4) * &q) * (b(7) + b(4) * &q))),
            2 * qq,
        ),
        (
            b(8) * &q * (&one + b(4) * &q) * (b(4) + &q * (b(5) + b(2) * &q)),
            2 * qq + 1,
        ),
        (
            -(b(4) * &q * &q * (b(7) + b(4) * &q * (b(2) + &q))),
            2 * (qq + 1),
        ),
        (b(8) * (&one + &q) * (&one + b(4) * &q), 4 * qq + 1),
        (-(b(16) * &q * (&one + &q)), 2 * (1 + 2 * qq)),
    ];
    let mut c = Vec::new();
    for (v, i) in terms {
        add_term(&mut c, i, BigRational::from_integer(v));
    }
    RatPoly::new(c)
}

fn p_pm(q: u32, minus: bool) -> Poly<AlgebraicNumber> {
    let f = RadicalField::chazy(q);
    let qi = i64::from(q);
    let qq = q as usize;
    let e = i64::from(q) + 1;
    let s = if minus && q % 2 == 1 { -1 } else { 1 };
    // (coefficient, γ-exponent, degree)
    let terms: Vec<(BigRational, i64, usize)> = vec![
        (rat(4 * qi * (2 + qi)), 1, 0),
        (rat(-(3 + 2 * qi) * (3 + 2 * qi)), 2, 1),
        (ratio(-8 * qi * s, qi + 1), e, qq),
        (rat(2 * (9 + 2 * qi) * s), e + 1, qq + 1),
        (rat(-2 * (9 + 10 * qi)), 0, 2 * qq + 1),
        (rat(4 * qi), 1, 2 * qq + 2),
        (ratio(-4 * qi * s, qi + 1), e, 3 * qq + 2),
    ];
    let mut c: Vec<AlgebraicNumber> = vec![AlgebraicNumber::from_int(&f, 0); 3 * qq + 3];
    for (v, g, i) in terms {
        c[i] = c[i].add(&AlgebraicNumber::monomial(&f, v, g));
    }
    Poly::new(c)
}

/// `P⁺` over `Q(γ)`, degree `3q + 2`.
pub fn gen_pplus(q: u32) -> Poly<AlgebraicNumber> {
    p_pm(q, false)
}

/// `P⁻` over `Q(γ)`: `P⁺` with `(−1)^q` on the degree `q`, `q+1`, `3q+2`
/// terms.
pub fn gen_pminus(q: u32) -> Poly<AlgebraicNumber> {
    p_pm(q, true)
}

/// `−q − (1+q)γ x + γ^(q+1) x^(q+1)`, whose unique positive root is
/// `x_{i,q}^I = −u_{i,q}^I`.
pub fn lemma_poly(q: u32) -> Poly<AlgebraicNumber> {
    let f = RadicalField::chazy(q);
    let qi = i64::from(q);
    let mut c = vec![AlgebraicNumber::from_int(&f, 0); q as usize + 2];
    c[0] = AlgebraicNumber::from_int(&f, -qi);
    c[1] = AlgebraicNumber::monomial(&f, rat(-(1 + qi)), 1);
    c[q as usize + 1] = c[q as usize + 1].add(&AlgebraicNumber::monomial(&f, rat(1), qi + 1));
    Poly::new(c)
}

/// `P(w/γ) = γ^rho · poly(w)`.
#[derive(Clone, Debug)]
pub struct Rationalized {
    pub poly: RatPoly,
    pub rho: usize,
}

/// Clear the radicals of `p` by the substitution `u = w/γ`.
///
/// Every nonzero coefficient must be `c_i γ^(e_i)` with `e_i − i` in one
/// residue class `ρ` mod `N`; then `c_i γ^(e_i) (w/γ)^i = γ^ρ · c_i r^t w^i`.
pub fn rationalize(p: &Poly<AlgebraicNumber>) -> Result<Rationalized, ConditionsError> {
    let Some(first) = p.coeffs().first() else {
        return Ok(Rationalized {
            poly: RatPoly::zero(),
            rho: 0,
        });
    };
    let field = first.field().clone();
    let n = field.index() as i64;
    let mut rho: Option<usize> = None;
    let mut out = Vec::with_capacity(p.coeffs().len());
    for (i, a) in p.coeffs().iter().enumerate() {
        if a.rep().is_zero() {
            out.push(BigRational::zero());
            continue;
        }
        let (c, e) = a
            .monomial_parts()
            .ok_or(ConditionsError::NotMonomial { degree: i })?;
        let diff = e as i64 - i as i64;
        let class = diff.rem_euclid(n) as usize;
        let rho_v = *rho.get_or_insert(class);
        if class != rho_v {
            return Err(ConditionsError::ResidueMismatch {
                degree: i,
                found: class,
                expected: rho_v,
            });
        }
        let t = (diff - rho_v as i64) / n;
        let r = field.radicand();
        let scale = if t >= 0 {
            num_traits::pow(r.clone(), t as usize)
        } else {
            num_traits::pow(r.recip(), (-t) as usize)
        };
        out.push(c * scale);
    }
    Ok(Rationalized {
        poly: RatPoly::new(out),
        rho: rho.unwrap_or(0),
    })
}

/// Closed form of the rationalized `P^±`, coefficient by coefficient.
pub fn q_pm_direct(q: u32, minus: bool) -> RatPoly {
    let qi = i64::from(q);
    let qq = q as usize;
    let r = 2 * (qi + 1) * (qi + 1);
    let s = if minus && q % 2 == 1 { -1 } else { 1 };
    let mut c = Vec::new();
    add_term(&mut c, 0, rat(4 * qi * (2 + qi)));
    add_term(&mut c, 1, rat(-(3 + 2 * qi) * (3 + 2 * qi)));
    add_term(&mut c, qq, ratio(-8 * qi * s, qi + 1));
    add_term(&mut c, qq + 1, rat(2 * (9 + 2 * qi) * s));
    add_term(&mut c, 2 * qq + 1, ratio(-2 * (9 + 10 * qi), r));
    add_term(&mut c, 2 * qq + 2, ratio(4 * qi, r));
    add_term(&mut c, 3 * qq + 2, ratio(-4 * qi * s, (qi + 1) * r));
    RatPoly::new(c)
}

/// Result of checking C1–C3 at one `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub q: u32,
    /// Distinct roots of `P_0` in `(2, (1+4q)/(2q))`.
    pub c1_roots: usize,
    /// Roots of `P⁺` in `(0, u_{i,q}^D)` with multiplicity.
    pub c2_roots: usize,
    /// Roots of `P⁻` in `(−2, 0)` with multiplicity.
    pub c3_roots: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub millis: Option<u64>,
}

/// Check C1, C2, C3 exactly.
pub fn check_conditions(q: u32) -> Result<ConditionReport, ConditionsError> {
    let params = ChazyParams::new(q)?;
    let t0 = Instant::now();
    let qi = i64::from(q);

    let p0 = gen_p0(q);
    let c1 = SturmChain::new(&p0)?
        .count_roots_open(&Point::int(2), &Point::Rational(ratio(1 + 4 * qi, 2 * qi)))?;

    let qp = rationalize(&gen_pplus(q))?.poly;
    let c2 = count_roots_with_multiplicity_open(&qp, &Point::int(0), &Point::int(1))?;

    let qm = rationalize(&gen_pminus(q))?.poly;
    let left = Point::Algebraic(AlgebraicNumber::monomial(&params.field, rat(-2), 1));
    let c3 = count_roots_with_multiplicity_open(&qm, &left, &Point::int(0))?;

    Ok(ConditionReport {
        q,
        c1_roots: c1,
        c2_roots: c2,
        c3_roots: c3,
        pass: c1 == 0 && c2 <= 1 && c3 <= 1,
        millis: Some(t0.elapsed().as_millis() as u64),
    })
}

/// Check every `q` in `q_min..=q_max` in parallel; output sorted by `q`.
pub fn scan(q_min: u32, q_max: u32) -> Result<Vec<ConditionReport>, ConditionsError> {
    if q_min == 0 || q_min > q_max {
        return Err(ConditionsError::BadQ(q_min));
    }
    // large q first so the slowest jobs start early
    let mut out: Vec<ConditionReport> = (q_min..=q_max)
        .rev()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(check_conditions)
        .collect::<Result<_, _>>()?;
    out.sort_by_key(|r| r.q);
    Ok(out)
}

/// Section endpoints on the hyperbola `uv + 1 = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Endpoints {
    pub q: u32,
    /// `u_{i,q}^D = 1/γ` and its enclosure half-width.
    pub u_id: f64,
    pub u_id_err: f64,
    pub u_fd: f64,
    pub u_fi: f64,
    /// `u_{i,q}^I = −x_{i,q}^I`, enclosure `[u_ii_lo, u_ii_hi]`.
    pub u_ii: f64,
    pub u_ii_lo: f64,
    pub u_ii_hi: f64,
    /// Positive roots of the rationalized lemma polynomial (must be 1).
    pub positive_roots: usize,
    /// Sign changes of its coefficients.
    pub descartes_changes: usize,
    /// Certified `x_{i,q}^I < 2`.
    pub below_two: bool,
}

/// `u_{f,q}^I = −(√2(1+q)/q)^(−1/(1+q))`.
pub fn u_fi(q: u32) -> f64 {
    let q = f64::from(q);
    -(std::f64::consts::SQRT_2 * (1.0 + q) / q).powf(-1.0 / (1.0 + q))
}

/// Certify the endpoint lemma and enclose `u_{i,q}^I`.
pub fn isolate_endpoint(q: u32) -> Result<Endpoints, ConditionsError> {
    let params = ChazyParams::new(q)?;
    let field = &params.field;
    let rz = rationalize(&lemma_poly(q))?;
    let ql = rz.poly;
    let chain = SturmChain::new(&ql)?;
    let zero = Point::int(0);
    let positive_roots = chain.count_roots(&zero, &Point::PosInf)?.count;
    if positive_roots != 1 {
        return Err(ConditionsError::Lemma(format!(
            "{positive_roots} positive roots"
        )));
    }
    let two_gamma = Point::Algebraic(AlgebraicNumber::monomial(field, rat(2), 1));
    let below = chain.count_roots_open(&zero, &two_gamma)?;
    if below != 1 {
        return Err(ConditionsError::Lemma("root not below 2".into()));
    }

    // bisect w* on rationals: ql(0) = −q < 0 and ql > 0 past the root
    let mut lo = BigRational::zero();
    let mut hi = rat(1);
    let ip = crate::exact::int_poly::IntPoly::primitive_from_rat(&ql);
    while ip.sign_at_rat(&hi) != Sign::Positive {
        hi *= rat(2);
    }
    for _ in 0..80 {
        let mid = (&lo + &hi) / rat(2);
        match ip.sign_at_rat(&mid) {
            Sign::Positive => hi = mid,
            Sign::Negative => lo = mid,
            Sign::Zero => {
                lo = mid.clone();
                hi = mid;
                break;
            }
        }
    }
    // x* = w*/γ with γ ∈ [m, m+1]/2^k
    let k = 80;
    let m = field.gamma_floor(k);
    let den = BigInt::one() << k;
    let g_lo = BigRational::new(m.clone(), den.clone());
    let g_hi = BigRational::new(m + 1u32, den);
    let x_lo = &lo / &g_hi;
    let x_hi = &hi / &g_lo;
    let (u_id, u_id_err) = AlgebraicNumber::monomial(field, rat(1), -1).to_float(60);
    Ok(Endpoints {
        q,
        u_id,
        u_id_err,
        u_fd: 2.0,
        u_fi: u_fi(q),
        u_ii: -rat_to_f64(&((&x_lo + &x_hi) / rat(2))),
        u_ii_lo: -rat_to_f64(&x_hi),
        u_ii_hi: -rat_to_f64(&x_lo),
        positive_roots,
        descartes_changes: ql.descartes_sign_changes(),
        below_two: true,
    })
}

/// Float evaluation of a `Q(γ)` polynomial (diagnostics and tests).
pub fn eval_f64(p: &Poly<AlgebraicNumber>, u: f64) -> f64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * u + c.to_f64())
}

/// Whether `x_{i,q}^I` is below `u_{f,q}^D = 2` and `u_{i,q}^I < u_{f,q}^I`.
pub fn endpoints_ordered(e: &Endpoints) -> bool {
    e.u_ii_hi < e.u_fi && e.u_fi < 0.0 && e.u_id > 0.0 && e.u_id < e.u_fd && e.below_two
}

/// Sign of `P⁺(u_{i,q}^D)`, exactly.
pub fn pplus_sign_at_uid(q: u32) -> Sign {
    let p = gen_pplus(q);
    let f = RadicalField::chazy(q);
    p.eval(&AlgebraicNumber::monomial(&f, rat(1), -1)).sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p0_shape() {
        for q in 1..6 {
            let p = gen_p0(q);
            assert_eq!(p.degree(), 2 * (1 + 2 * q as isize));
            let qi = i64::from(q);
            assert_eq!(p.lc().unwrap(), &rat(-16 * qi * (1 + qi)));
        }
        assert_eq!(gen_p0(1).coeffs()[0], rat(-56));
        assert_eq!(gen_p0(1).degree(), 6);
    }

    #[test]
    fn pplus_constant_term() {
        for q in 1..=5 {
            let p = gen_pplus(q);
            let qi = f64::from(q);
            let want = 2f64.powf((5.0 + 4.0 * qi) / (2.0 * (1.0 + qi)))
                * qi
                * (1.0 + qi).powf(1.0 / (1.0 + qi))
                * (2.0 + qi);
            let got = p.coeffs()[0].to_f64();
            assert!((got - want).abs() < 1e-12 * want, "q={q}");
            assert_eq!(p.degree(), 3 * q as isize + 2);
        }
    }

    #[test]
    fn even_q_branches_agree() {
        for q in [2, 4, 6] {
            assert_eq!(
                rationalize(&gen_pplus(q)).unwrap().poly,
                rationalize(&gen_pminus(q)).unwrap().poly
            );
        }
        assert_ne!(
            rationalize(&gen_pplus(3)).unwrap().poly,
            rationalize(&gen_pminus(3)).unwrap().poly
        );
    }

    #[test]
    fn rationalized_matches_closed_form() {
        for q in 1..=8 {
            for minus in [false, true] {
                let p = if minus { gen_pminus(q) } else { gen_pplus(q) };
                let r = rationalize(&p).unwrap();
                assert_eq!(r.rho, 1);
                assert_eq!(r.poly, q_pm_direct(q, minus), "q={q} minus={minus}");
            }
            let l = rationalize(&lemma_poly(q)).unwrap();
            assert_eq!(l.rho, 0);
            let qi = i64::from(q);
            let mut want = vec![rat(-qi), rat(-(1 + qi))];
            want.resize(q as usize + 2, rat(0));
            want[q as usize + 1] += rat(1);
            assert_eq!(l.poly, RatPoly::new(want));
        }
    }

    #[test]
    fn pplus_positive_at_uid() {
        for q in 1..=3 {
            assert_eq!(pplus_sign_at_uid(q), Sign::Positive);
        }
    }

    #[test]
    fn small_q_pass() {
        for q in 1..=5 {
            let r = check_conditions(q).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert_eq!(check_conditions(1).unwrap().c1_roots, 0);
        assert!(check_conditions(0).is_err());
    }

    #[test]
    fn endpoint_q1_closed_form() {
        let e = isolate_endpoint(1).unwrap();
        let want = -(1.0 + 2f64.sqrt()) / 2f64.powf(0.75);
        assert!((e.u_ii - want).abs() < 1e-12);
        assert!(e.u_ii_lo <= want && want <= e.u_ii_hi);
        assert!((e.u_id - 2f64.powf(-0.75)).abs() < 1e-15);
        assert_eq!(e.descartes_changes, 1);
        assert!(endpoints_ordered(&e));
        // q = 2: w* = 2, u_iI = −2/γ
        let e2 = isolate_endpoint(2).unwrap();
        let want2 = -(2f64.powf(5.0 / 6.0)) / 3f64.powf(1.0 / 3.0);
        assert!((e2.u_ii - want2).abs() < 1e-12);
    }
}
