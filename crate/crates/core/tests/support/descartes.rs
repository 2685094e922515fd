//! Independent real-root counter: naive Euclid for the square-free part,
//! then Descartes' rule with bisection (Vincent/Collins–Akritas) on each
//! interval. Shared by the Sturm oracle suite and the acceptance target.

#![allow(dead_code)]

use chazy_core::exact::{BigInt, BigRational, RatPoly};
use chazy_core::sturm::{Point, SturmChain};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn div_rem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], trim(r));
    }
    let mut quot = vec![Q::zero(); r.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &r[k + db] / &b[db];
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        quot[k] = c;
    }
    r.truncate(db);
    (trim(quot), trim(r))
}

fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(p: &[Q]) -> Vec<Q> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from_integer(i.into()))
            .collect(),
    )
}

fn square_free(p: &[Q]) -> Vec<Q> {
    let g = gcd(p, &derivative(p));
    div_rem(p, &g).0
}

/// Sign variations of `(1+x)^d p((l + r x)/(1+x))`, which bounds the roots in
/// `(l, r)`.
fn descartes(p: &[Q], l: &Q, r: &Q) -> usize {
    let d = p.len() - 1;
    let lin = [l.clone(), r.clone()];
    let one_x = [Q::one(), Q::one()];
    let mut t = vec![Q::zero(); d + 1];
    for (i, c) in p.iter().enumerate() {
        let mut term = vec![c.clone()];
        for _ in 0..i {
            term = mul(&term, &lin);
        }
        for _ in i..d {
            term = mul(&term, &one_x);
        }
        for (k, v) in term.into_iter().enumerate() {
            t[k] += v;
        }
    }
    let signs: Vec<bool> = t
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn count_open(p: &[Q], l: &Q, r: &Q, depth: usize) -> usize {
    assert!(depth < 400, "no isolation: not square-free?");
    match descartes(p, l, r) {
        0 => 0,
        1 => 1,
        _ => {
            let m = (l + r) / Q::from_integer(2.into());
            let at = usize::from(eval(p, &m).is_zero());
            count_open(p, l, &m, depth + 1) + at + count_open(p, &m, r, depth + 1)
        }
    }
}

#[derive(Clone, Debug)]
pub enum End {
    NegInf,
    PosInf,
    At(Q),
}

/// Distinct real roots in `(a, b]`.
pub fn oracle(p: &[Q], a: &End, b: &End) -> usize {
    let sf = square_free(p);
    if sf.len() <= 1 {
        return 0;
    }
    let lc = sf.last().unwrap().abs();
    let bound = Q::one() + sf.iter().map(|c| c.abs() / &lc).max().unwrap();
    let lo = match a {
        End::NegInf => -bound.clone(),
        End::At(x) => x.clone(),
        End::PosInf => unreachable!(),
    };
    let (hi, closed) = match b {
        End::PosInf => (bound, false),
        End::At(x) => (x.clone(), true),
        End::NegInf => unreachable!(),
    };
    if lo >= hi {
        return 0;
    }
    let at_b = closed && eval(&sf, &hi).is_zero();
    count_open(&sf, &lo, &hi, 0) + usize::from(at_b)
}

pub fn point(e: &End) -> Point {
    match e {
        End::NegInf => Point::NegInf,
        End::PosInf => Point::PosInf,
        End::At(x) => Point::Rational(x.clone()),
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

pub fn random_case(rng: &mut ChaCha8Rng) -> (Vec<Q>, End, End) {
    let mut a = random_rational(rng);
    let mut b = random_rational(rng);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if a == b {
        b += Q::one();
    }
    let deg = rng.gen_range(1..=8);
    let mut p: Vec<Q> = (0..=deg).map(|_| q(rng.gen_range(-10..=10), 1)).collect();
    if p[deg].is_zero() {
        p[deg] = Q::one();
    }
    // plant roots at the endpoints, sometimes repeated, within degree 8
    let kind = rng.gen_range(0..4);
    if kind > 0 {
        let planted = if kind == 1 { a.clone() } else { b.clone() };
        let mult = rng.gen_range(1..=2);
        let base = rng.gen_range(1..=(8 - mult).max(1));
        p.truncate(base + 1);
        if p.last().unwrap().is_zero() {
            *p.last_mut().unwrap() = Q::one();
        }
        for _ in 0..mult {
            p = mul(&p, &[-planted.clone(), Q::one()]);
        }
    }
    let a_end = if rng.gen_bool(0.15) {
        End::NegInf
    } else {
        End::At(a)
    };
    let b_end = if rng.gen_bool(0.15) {
        End::PosInf
    } else {
        End::At(b)
    };
    (trim(p), a_end, b_end)
}

/// Runs `cases` random comparisons; returns `(agreements, cases with roots)`
/// and the first disagreement, if any.
pub fn compare(seed: u64, cases: usize) -> (usize, usize, Option<String>) {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut with_roots, mut first) = (0, 0, None);
    for i in 0..cases {
        let (p, a, b) = random_case(&mut rng);
        assert!(p.len() <= 9, "degree above 8");
        let want = oracle(&p, &a, &b);
        let chain = SturmChain::new(&RatPoly::new(p.clone())).unwrap();
        let got = chain.count_roots(&point(&a), &point(&b)).unwrap().count;
        if got == want {
            agree += 1;
        } else if first.is_none() {
            first = Some(format!(
                "case {i}: p = {p:?} on ({a:?}, {b:?}]: {got} vs {want}"
            ));
        }
        with_roots += usize::from(want > 0);
    }
    (agree, with_roots, first)
}
