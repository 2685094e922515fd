use std::str::FromStr;

use chazy_core::conditions::{
    check_conditions, gen_p0, gen_pminus, gen_pplus, isolate_endpoint, lemma_poly, q_pm_direct,
    rationalize, run_appendix, scan,
};
use chazy_core::exact::int_poly::{signed_prs_direct, IntPoly};
use chazy_core::exact::modular::signed_prs_modular;
use chazy_core::exact::{BigRational, Poly};
use chazy_core::{AlgebraicNumber, RadicalField};
use dashu_int::IBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type FBig = dashu_float::FBig;

const PREC: usize = 256;

fn big_rat(x: &BigRational) -> FBig {
    let n = FBig::from(IBig::from_str(&x.numer().to_string()).unwrap());
    let d = FBig::from(IBig::from_str(&x.denom().to_string()).unwrap());
    n.with_precision(PREC).value() / d.with_precision(PREC).value()
}

fn big_f64(x: f64) -> FBig {
    FBig::try_from(x).unwrap().with_precision(PREC).value()
}

fn gamma_big(q: u32) -> FBig {
    let r = 2 * i64::from(q + 1).pow(2);
    FBig::from(r)
        .with_precision(PREC)
        .value()
        .nth_root(2 * (q as usize + 1))
}

fn eval_alg(a: &AlgebraicNumber, g: &FBig) -> FBig {
    a.rep()
        .coeffs()
        .iter()
        .rev()
        .fold(big_f64(0.0), |acc, c| acc * g + big_rat(c))
}

fn eval_field_poly(p: &Poly<AlgebraicNumber>, u: &FBig, g: &FBig) -> FBig {
    p.coeffs()
        .iter()
        .rev()
        .fold(big_f64(0.0), |acc, c| acc * u + eval_alg(c, g))
}

fn eval_rat_poly(p: &Poly<BigRational>, w: &FBig) -> FBig {
    p.coeffs()
        .iter()
        .rev()
        .fold(big_f64(0.0), |acc, c| acc * w + big_rat(c))
}

fn abs(x: FBig) -> FBig {
    if x < FBig::ZERO {
        -x
    } else {
        x
    }
}

#[test]
fn rationalization_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in 1..=10u32 {
        let g = gamma_big(q);
        for (name, p) in [
            ("P+", gen_pplus(q)),
            ("P-", gen_pminus(q)),
            ("lemma", lemma_poly(q)),
        ] {
            let rz = rationalize(&p).unwrap();
            let g_rho = (0..rz.rho).fold(big_f64(1.0), |acc, _| acc * &g);
            for _ in 0..20 {
                let w = big_f64(rng.gen_range(-3.0..3.0));
                let lhs = eval_field_poly(&p, &(w.clone() / &g), &g);
                let rhs = g_rho.clone() * eval_rat_poly(&rz.poly, &w);
                let err = abs(lhs - &rhs) / (big_f64(1.0) + abs(rhs));
                let err: f64 = err.to_f64().value();
                assert!(err < 1e-10, "q={q} {name}: {err:e}");
            }
        }
    }
}

/// `P^±` straight from the closed form with real powers of 2 and `1+q`.
fn p_pm_formula(q: u32, minus: bool, u: f64) -> (f64, f64) {
    let qf = f64::from(q);
    let s = if minus && q % 2 == 1 { -1.0 } else { 1.0 };
    let e = 1.0 / (1.0 + qf);
    let c0 = 2f64.powf((5.0 + 4.0 * qf) / (2.0 * (1.0 + qf))) * qf * (1.0 + qf).powf(e);
    let terms = [
        c0 * (2.0 + qf),
        -2f64.powf(e) * (1.0 + qf).powf(2.0 * e) * (3.0 + 2.0 * qf).powi(2) * u,
        -8.0 * s * 2f64.sqrt() * qf * u.powi(q as i32),
        s * 2f64.powf((4.0 + 3.0 * qf) / (2.0 * (1.0 + qf)))
            * (1.0 + qf).powf((2.0 + qf) * e)
            * (9.0 + 2.0 * qf)
            * u.powi(q as i32 + 1),
        -2.0 * (9.0 + 10.0 * qf) * u.powi(2 * q as i32 + 1),
        c0 * u.powi(2 * q as i32 + 2),
        -4.0 * s * 2f64.sqrt() * qf * u.powi(3 * q as i32 + 2),
    ];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

#[test]
fn p_pm_coefficients_match_closed_form() {
    for q in 1..=12u32 {
        let g = gamma_big(q);
        for minus in [false, true] {
            let p = if minus { gen_pminus(q) } else { gen_pplus(q) };
            for i in 0..=20 {
                let u = -2.0 + 3.0 * f64::from(i) / 20.0;
                let (want, scale) = p_pm_formula(q, minus, u);
                let got: f64 = eval_field_poly(&p, &big_f64(u), &g).to_f64().value();
                assert!(
                    (got - want).abs() <= 1e-12 * scale,
                    "q={q} minus={minus} u={u}"
                );
            }
        }
    }
}

#[test]
fn rationalized_closed_form_up_to_100() {
    for q in (1..=100u32).step_by(9) {
        assert_eq!(
            rationalize(&gen_pplus(q)).unwrap().poly,
            q_pm_direct(q, false),
            "q={q}"
        );
        assert_eq!(
            rationalize(&gen_pminus(q)).unwrap().poly,
            q_pm_direct(q, true),
            "q={q}"
        );
    }
}

#[test]
fn modular_prs_matches_direct() {
    for q in 1..=30u32 {
        let p = IntPoly::primitive_from_rat(&gen_p0(q));
        let d = p.derivative();
        let a = signed_prs_modular(p.clone(), d.clone()).seq;
        let b = signed_prs_direct(p, d).seq;
        assert_eq!(a, b, "P0, q={q}");
    }
    for q in 1..=12u32 {
        let p = IntPoly::primitive_from_rat(&q_pm_direct(q, true));
        let d = p.derivative();
        assert_eq!(
            signed_prs_modular(p.clone(), d.clone()).seq,
            signed_prs_direct(p, d).seq,
            "Q-, q={q}"
        );
    }
}

#[test]
fn endpoint_lemma_and_enclosures() {
    for q in 1..=25u32 {
        let e = isolate_endpoint(q).unwrap();
        assert_eq!(e.positive_roots, 1);
        assert_eq!(e.descartes_changes, 1);
        assert!(e.below_two);
        assert!(e.u_ii_lo <= e.u_ii && e.u_ii <= e.u_ii_hi && e.u_ii_hi < 0.0);
        assert!(e.u_ii_lo > -2.0);
        let inv = RadicalField::chazy(q).gamma().inverse().unwrap();
        let (v, hw) = inv.to_float(60);
        assert!((e.u_id - v).abs() <= hw + e.u_id_err + 1e-16, "q={q}");
    }
    // u_{i,1}^I = −(1 + √2)/2^{3/4}
    let e = isolate_endpoint(1).unwrap();
    let closed = -(1.0 + 2f64.sqrt()) / 2f64.powf(0.75);
    assert!((e.u_ii - closed).abs() < 1e-12);
    assert!(e.u_ii_lo <= closed && closed <= e.u_ii_hi);
}

#[test]
fn appendix_root_counts() {
    let r = run_appendix().unwrap();
    let counts: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.name.contains("roots in"))
        .collect();
    assert_eq!(counts.len(), 2 * 9);
    for c in counts {
        assert!(c.ok, "{}: expected {}, got {}", c.name, c.expected, c.got);
    }
    for c in r.checks.iter().filter(|c| c.name.contains("resultant")) {
        assert!(c.ok, "{}: expected {}, got {}", c.name, c.expected, c.got);
    }
}

#[test]
fn scan_matches_check() {
    let mut a = scan(2, 2).unwrap();
    let mut b = check_conditions(2).unwrap();
    a[0].millis = None;
    b.millis = None;
    assert_eq!(a, vec![b]);
}
