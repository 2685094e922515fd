//! Integer polynomials and fraction-free remainder sequences.
//!
//! Sturm chains at degree ~400 are far too slow with rational Euclid, whose
//! every step normalizes fractions. The signed subresultant sequence here
//! stays in `Z[x]`, divides out the predictable common factors exactly, and
//! keeps every element a positive multiple of the classical `−rem` chain.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BigInt, BigRational, RatPoly, Sign};

/// Dense integer polynomial, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly { c }
    }

    /// Positive rational multiple of `p` with coprime integer coefficients.
    pub fn primitive_from_rat(p: &RatPoly) -> Self {
        let mut l = BigInt::one();
        for a in p.coeffs() {
            l = l.lcm(a.denom());
        }
        let v: Vec<BigInt> = p
            .coeffs()
            .iter()
            .map(|a| a.numer() * (&l / a.denom()))
            .collect();
        IntPoly::new(v).primitive()
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::from_bigints(&self.c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.c.last()
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the (positive) content; signs are unchanged.
    pub fn primitive(self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        IntPoly {
            c: self.c.into_iter().map(|a| a / &g).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
    pub fn prem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        if self.c.len() < b.c.len() {
            return self.clone();
        }
        let db = b.c.len() - 1;
        let lb = &b.c[db];
        let mut e = self.c.len() - b.c.len() + 1;
        let mut r = self.c.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for x in r[..dr].iter_mut() {
                *x *= lb;
            }
            let off = dr - db;
            for j in 0..db {
                r[off + j] -= &lr * &b.c[j];
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        if e > 0 && !r.is_empty() {
            let f = num_traits::pow(lb.clone(), e);
            for x in r.iter_mut() {
                *x *= &f;
            }
        }
        IntPoly::new(r)
    }

    fn div_exact(mut self, d: &BigInt) -> IntPoly {
        if !d.is_one() {
            for x in self.c.iter_mut() {
                debug_assert!((&*x % d).is_zero());
                *x = &*x / d;
            }
        }
        self
    }

    fn neg_if(mut self, flip: bool) -> IntPoly {
        if flip {
            for x in self.c.iter_mut() {
                *x = -&*x;
            }
        }
        self
    }

    /// Exact sign of `p(n/d)` for `d > 0`, by homogeneous Horner.
    pub fn sign_at(&self, n: &BigInt, d: &BigInt) -> Sign {
        debug_assert!(d.is_positive());
        let mut it = self.c.iter().rev();
        let Some(top) = it.next() else {
            return Sign::Zero;
        };
        let mut acc = top.clone();
        let mut dp = BigInt::one();
        for a in it {
            dp *= d;
            acc = acc * n + a * &dp;
        }
        Sign::of_bigint(&acc)
    }

    pub fn sign_at_rat(&self, x: &BigRational) -> Sign {
        self.sign_at(x.numer(), x.denom())
    }

    /// Sign of `p(x)` as `x → +∞` (`positive`) or `x → −∞`.
    pub fn sign_at_infinity(&self, positive: bool) -> Sign {
        match self.lc() {
            None => Sign::Zero,
            Some(l) => {
                let s = Sign::of_bigint(l);
                if !positive && self.c.len().is_multiple_of(2) {
                    s.flip()
                } else {
                    s
                }
            }
        }
    }
}

/// Outcome of the signed remainder sequence of `(a, b)`.
pub struct SignedPrs {
    /// `a, b, ...` with each element a positive multiple of `−rem` of its
    /// two predecessors. The last element is the gcd up to scale.
    pub seq: Vec<IntPoly>,
}

/// Signed subresultant sequence of `a` and `b`.
pub fn signed_prs(a: IntPoly, b: IntPoly) -> SignedPrs {
    if a.degree() >= MODULAR_FROM_DEGREE {
        super::modular::signed_prs_modular(a, b)
    } else {
        signed_prs_direct(a, b)
    }
}

/// Below this degree the direct computation is faster than going through
/// residues.
pub const MODULAR_FROM_DEGREE: isize = 24;

/// Signed subresultant sequence by fraction-free pseudo-division in `Z[x]`.
pub fn signed_prs_direct(a: IntPoly, b: IntPoly) -> SignedPrs {
    let mut seq = vec![a, b];
    if seq[1].is_zero() {
        seq.pop();
        return SignedPrs { seq };
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let n = seq.len();
        let (sa, sb) = (&seq[n - 2], &seq[n - 1]);
        if sb.degree() == 0 || sa.degree() < sb.degree() {
            break;
        }
        let delta = (sa.degree() - sb.degree()) as usize;
        let r = sa.prem(sb);
        if r.is_zero() {
            break;
        }
        let flip = sb.lc().unwrap().is_negative() && delta.is_multiple_of(2);
        // −prem · sign(lc b)^(δ+1), then the subresultant divisor g·h^δ
        let r = r.neg_if(!flip);
        let beta = &g * num_traits::pow(h.clone(), delta);
        let r = r.div_exact(&beta);
        g = sb.lc().unwrap().abs();
        h = if delta == 0 {
            h
        } else {
            let gd = num_traits::pow(g.clone(), delta);
            gd / num_traits::pow(h.clone(), delta - 1)
        };
        seq.push(r);
    }
    SignedPrs { seq }
}

/// Monic gcd over `Q` computed through the integer sequence.
pub fn rat_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let (a, b) = if a.degree() >= b.degree() {
        (a, b)
    } else {
        (b, a)
    };
    let prs = signed_prs(
        IntPoly::primitive_from_rat(a),
        IntPoly::primitive_from_rat(b),
    );
    let last = prs.seq.last().unwrap().clone().primitive();
    last.to_rat().monic()
}
