//! Subresultant sequence by reduction modulo word-size primes and Chinese
//! remaindering.
//!
//! The direct fraction-free sequence pseudo-divides with `lc^(δ+1)`, and a
//! large degree gap makes the intermediate coefficients hundreds of times
//! wider than the result. Modulo a prime the same recurrence runs in fixed
//! width; each member is then rebuilt from enough residues to cover its
//! Hadamard bound.

use num_traits::{Signed, ToPrimitive, Zero};

use super::int_poly::{IntPoly, SignedPrs};
use super::BigInt;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, descending.
struct Primes {
    next: u64,
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            self.next -= 2;
            if is_prime(self.next) {
                return Some(self.next);
            }
        }
    }
}

const PRIME_BITS: u64 = 61;

fn reduce(p: &IntPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut v: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| {
            let r = c % &mb;
            let r = if r.is_negative() { r + &mb } else { r };
            r.to_u64().unwrap()
        })
        .collect();
    trim(&mut v);
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `lc(b)^(deg a − deg b + 1) · (a mod b)` over `F_p`.
fn prem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lb = b[db];
    let inv = inv_mod(lb, p);
    let mut r = a.to_vec();
    let delta = a.len() - b.len();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], inv, p);
        if c != 0 {
            let off = dr - db;
            for (j, &bj) in b.iter().enumerate() {
                let t = mul_mod(c, bj, p);
                r[off + j] = if r[off + j] >= t {
                    r[off + j] - t
                } else {
                    r[off + j] + p - t
                };
            }
        }
        r.pop();
        trim(&mut r);
    }
    let f = pow_mod(lb, delta as u64 + 1, p);
    for x in r.iter_mut() {
        *x = mul_mod(*x, f, p);
    }
    r
}

/// Collins' recurrence modulo `p`; the same stopping rules as the direct
/// sequence.
fn prs_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<Vec<u64>> {
    let mut seq = vec![a, b];
    let (mut g, mut h) = (1u64, 1u64);
    loop {
        let n = seq.len();
        let (sa, sb) = (&seq[n - 2], &seq[n - 1]);
        if sb.len() <= 1 || sa.len() < sb.len() {
            break;
        }
        let delta = (sa.len() - sb.len()) as u64;
        let r = prem_mod(sa, sb, p);
        if r.is_empty() {
            break;
        }
        let beta = mul_mod(g, pow_mod(h, delta, p), p);
        let ib = inv_mod(beta, p);
        let r: Vec<u64> = r.into_iter().map(|x| mul_mod(x, ib, p)).collect();
        g = *sb.last().unwrap();
        if delta > 0 {
            h = mul_mod(
                pow_mod(g, delta, p),
                inv_mod(pow_mod(h, delta - 1, p), p),
                p,
            );
        }
        seq.push(r);
    }
    seq
}

fn log2_norm(p: &IntPoly) -> f64 {
    // log2 of the Euclidean norm, rounded up through the largest coefficient
    let mx = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as f64;
    mx + 0.5 * (p.coeffs().len() as f64).log2() + 1e-9
}

/// Mixed-radix reconstruction over a prefix of the primes.
struct Crt {
    primes: Vec<u64>,
    /// `pre[j][i] = p_0 ⋯ p_{i−1} mod p_j` for `i ≤ j`.
    pre: Vec<Vec<u64>>,
    inv: Vec<u64>,
}

impl Crt {
    fn new(primes: Vec<u64>) -> Self {
        let mut pre = Vec::with_capacity(primes.len());
        let mut inv = Vec::with_capacity(primes.len());
        for (j, &pj) in primes.iter().enumerate() {
            let mut row = Vec::with_capacity(j + 1);
            let mut acc = 1u64;
            row.push(acc);
            for &pi in &primes[..j] {
                acc = mul_mod(acc, pi % pj, pj);
                row.push(acc);
            }
            inv.push(inv_mod(acc, pj));
            pre.push(row);
        }
        Crt { primes, pre, inv }
    }

    /// Symmetric integer with the given residues modulo the first
    /// `res.len()` primes.
    fn combine(&self, res: &[u64]) -> BigInt {
        let k = res.len();
        let mut v = Vec::with_capacity(k);
        for j in 0..k {
            let pj = self.primes[j];
            let mut s = 0u64;
            for (i, &vi) in v.iter().enumerate() {
                s = (s + mul_mod(vi, self.pre[j][i], pj)) % pj;
            }
            let d = if res[j] >= s {
                res[j] - s
            } else {
                res[j] + pj - s
            };
            v.push(mul_mod(d, self.inv[j], pj));
        }
        let mut x = BigInt::zero();
        let mut m = BigInt::from(1u8);
        for j in (0..k).rev() {
            x = x * self.primes[j] + v[j];
        }
        for &p in &self.primes[..k] {
            m *= p;
        }
        if &x + &x > m {
            x - m
        } else {
            x
        }
    }
}

/// Same sequence as the direct fraction-free computation, rebuilt from
/// residues.
pub fn signed_prs_modular(a: IntPoly, b: IntPoly) -> SignedPrs {
    if b.is_zero() {
        return SignedPrs { seq: vec![a] };
    }
    if b.degree() == 0 || a.degree() < b.degree() {
        return SignedPrs { seq: vec![a, b] };
    }
    let (m, n) = (a.degree() as f64, b.degree() as f64);
    let (la, lb) = (log2_norm(&a), log2_norm(&b));
    let bound_bits = |deg: usize| -> u64 {
        let j = deg as f64;
        ((n - j).max(0.0) * la + (m - j).max(0.0) * lb).ceil() as u64 + 2
    };

    let mut primes = Primes {
        next: (1u64 << 62) + 1,
    };
    let mut used: Vec<u64> = Vec::new();
    let mut residues: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut shape: Option<Vec<usize>> = None;
    let mut need = 1usize;
    while used.len() < need {
        let p = primes.next().unwrap();
        let (ar, br) = (reduce(&a, p), reduce(&b, p));
        let s = prs_mod(ar, br, p);
        let lens: Vec<usize> = s.iter().map(Vec::len).collect();
        match &shape {
            Some(sh) if *sh == lens => {}
            Some(sh) if !dominates(&lens, sh) => continue,
            _ => {
                // first prime, or every earlier prime was unlucky
                need = lens
                    .iter()
                    .skip(2)
                    .map(|&l| bound_bits(l.saturating_sub(1)).div_ceil(PRIME_BITS) as usize)
                    .max()
                    .unwrap_or(0)
                    .max(1);
                shape = Some(lens);
                used.clear();
                residues.clear();
            }
        }
        used.push(p);
        residues.push(s);
    }
    let shape = shape.unwrap();
    let crt = Crt::new(used);
    let mut seq = vec![a, b];
    for (idx, &len) in shape.iter().enumerate().skip(2) {
        let k = (bound_bits(len - 1).div_ceil(PRIME_BITS) as usize).clamp(1, residues.len());
        let coeffs: Vec<BigInt> = (0..len)
            .map(|c| {
                let rs: Vec<u64> = residues[..k].iter().map(|r| r[idx][c]).collect();
                crt.combine(&rs)
            })
            .collect();
        seq.push(IntPoly::new(coeffs));
    }
    fix_signs(&mut seq);
    SignedPrs { seq }
}

/// True when degree sequence `x` is the image of a prime that kept every
/// leading coefficient, compared with `y`.
fn dominates(x: &[usize], y: &[usize]) -> bool {
    for (a, b) in x.iter().zip(y) {
        if a != b {
            return a > b;
        }
    }
    x.len() > y.len()
}

/// Collins' members are `± −rem` multiples; flip them into the positive
/// convention using the signs of the leading coefficients.
fn fix_signs(seq: &mut [IntPoly]) {
    let sg = |x: &BigInt| if x.is_negative() { -1i8 } else { 1 };
    let (mut g, mut h) = (1i8, 1i8);
    let mut sigma = vec![1i8; seq.len()];
    for i in 2..seq.len() {
        let delta = (seq[i - 2].degree() - seq[i - 1].degree()) as u32;
        let lc = sg(seq[i - 1].lc().unwrap());
        let beta = g * if delta % 2 == 1 { h } else { 1 };
        let kappa = (if (delta + 1) % 2 == 1 { lc } else { 1 }) * beta;
        sigma[i] = -sigma[i - 2] * kappa;
        g = lc;
        if delta > 0 {
            h = (if delta % 2 == 1 { g } else { 1 }) * (if (delta - 1) % 2 == 1 { h } else { 1 });
        }
    }
    for (p, s) in seq.iter_mut().zip(sigma) {
        if s < 0 {
            *p = IntPoly::new(p.coeffs().iter().map(|c| -c).collect());
        }
    }
}
