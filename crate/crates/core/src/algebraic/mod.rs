//! The real radical field `Q(γ)`, `γ = r^(1/N)` the positive root.
//!
//! Elements are polynomials in `γ` of degree `< N`. Zero testing does not
//! assume `x^N − r` is irreducible (at `q = 53` it is not): a representative
//! vanishes at `γ` exactly when its gcd with `x^N − r` has a positive root.
//! Signs of nonzero elements come from interval evaluation on a dyadic
//! enclosure of `γ`, refined until zero is excluded.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::int_poly::IntPoly;
use crate::exact::{poly_gcd, rat, rat_to_f64, BigInt, BigRational, Coeff, RatPoly, Sign};
use crate::sturm::{Point, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraicError {
    #[error("radical index must be even and at least 2 (got {0})")]
    BadIndex(u32),
    #[error("radicand must be positive")]
    BadRadicand,
    #[error("elements belong to different fields")]
    FieldMismatch,
}

/// `Q(γ)` with `γ^N = r`, `N` even, `r > 0`.
pub struct RadicalField {
    n: u32,
    r: BigRational,
    relation: RatPoly,
    // dyadic floors m_k with γ ∈ [m_k, m_k + 1] / 2^k
    floors: Mutex<Vec<(u32, BigInt)>>,
}

impl RadicalField {
    pub fn new(n: u32, r: BigRational) -> Result<Arc<Self>, AlgebraicError> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(AlgebraicError::BadIndex(n));
        }
        if !r.is_positive() {
            return Err(AlgebraicError::BadRadicand);
        }
        let mut rel = vec![BigRational::zero(); n as usize + 1];
        rel[0] = -r.clone();
        rel[n as usize] = BigRational::one();
        Ok(Arc::new(RadicalField {
            n,
            r,
            relation: RatPoly::new(rel),
            floors: Mutex::new(Vec::new()),
        }))
    }

    /// The field of the Chazy conditions at parameter `q`:
    /// `N = 2(q+1)`, `r = 2(q+1)^2`.
    pub fn chazy(q: u32) -> Arc<Self> {
        assert!(q >= 1);
        let k = i64::from(q) + 1;
        Self::new(2 * (q + 1), rat(2 * k * k)).expect("valid Chazy field")
    }

    pub fn index(&self) -> u32 {
        self.n
    }

    pub fn radicand(&self) -> &BigRational {
        &self.r
    }

    /// `x^N − r`.
    pub fn relation(&self) -> &RatPoly {
        &self.relation
    }

    pub fn same_as(&self, other: &RadicalField) -> bool {
        self.n == other.n && self.r == other.r
    }

    /// `m` with `m / 2^k ≤ γ < (m + 1) / 2^k`.
    pub fn gamma_floor(&self, k: u32) -> BigInt {
        {
            let cache = self.floors.lock().unwrap();
            if let Some((_, m)) = cache.iter().find(|(kk, _)| *kk == k) {
                return m.clone();
            }
        }
        let scaled = (self.r.numer() << (k as usize * self.n as usize)) / self.r.denom();
        let m = scaled.nth_root(self.n);
        let mut cache = self.floors.lock().unwrap();
        if cache.len() > 16 {
            cache.remove(0);
        }
        cache.push((k, m.clone()));
        m
    }

    pub fn gamma_f64(&self) -> f64 {
        let k = 60;
        let m = self.gamma_floor(k);
        rat_to_f64(&BigRational::new(m, BigInt::one() << k))
    }

    pub fn gamma(self: &Arc<Self>) -> AlgebraicNumber {
        AlgebraicNumber::monomial(self, BigRational::one(), 1)
    }

    /// Exact test `rep(γ) = 0`.
    pub fn vanishes(&self, rep: &RatPoly) -> bool {
        if rep.is_zero() {
            return true;
        }
        if rep.degree() == 0 {
            return false;
        }
        let g = poly_gcd(rep, &self.relation);
        if g.degree() < 1 {
            return false;
        }
        // g divides x^N − r, so it is square-free and its only possible
        // positive root is γ
        let chain = SturmChain::new(&g).expect("nonzero gcd");
        chain
            .count_roots(&Point::Rational(BigRational::zero()), &Point::PosInf)
            .map(|c| c.count > 0)
            .unwrap_or(false)
    }

    /// Exact sign of `Σ c_j γ^j` for integer coefficients.
    pub fn sign_of_int(&self, c: &IntPoly) -> Sign {
        if c.is_zero() {
            return Sign::Zero;
        }
        if c.degree() == 0 {
            return Sign::of_bigint(&c.coeffs()[0]);
        }
        let split = Split::new(c.coeffs());
        let mut k = 64;
        let mut checked_zero = false;
        loop {
            let (lo, hi) = split.bounds(&self.gamma_floor(k), k);
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            if !checked_zero {
                if self.vanishes(&c.to_rat()) {
                    return Sign::Zero;
                }
                checked_zero = true;
            }
            k *= 2;
        }
    }
}

impl fmt::Debug for RadicalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(γ), γ^{} = {}", self.n, self.r)
    }
}

/// Positive and negative parts of an integer polynomial, for monotone
/// interval evaluation on `x ≥ 0`.
struct Split {
    pos: Vec<BigInt>,
    neg: Vec<BigInt>,
}

impl Split {
    fn new(c: &[BigInt]) -> Self {
        let z = BigInt::zero();
        Split {
            pos: c
                .iter()
                .map(|a| {
                    if a.is_positive() {
                        a.clone()
                    } else {
                        z.clone()
                    }
                })
                .collect(),
            neg: c
                .iter()
                .map(|a| {
                    if a.is_negative() {
                        a.clone()
                    } else {
                        z.clone()
                    }
                })
                .collect(),
        }
    }

    /// `[L, U]` containing `2^(k·d) · p(γ)` where `d = deg p` and
    /// `γ ∈ [m, m+1] / 2^k`.
    fn bounds(&self, m: &BigInt, k: u32) -> (BigInt, BigInt) {
        let m1 = m + 1u32;
        let lo = hom_horner(&self.pos, m, k) + hom_horner(&self.neg, &m1, k);
        let hi = hom_horner(&self.pos, &m1, k) + hom_horner(&self.neg, m, k);
        (lo, hi)
    }
}

/// `Σ c_j x^j 2^(k(d−j))`.
fn hom_horner(c: &[BigInt], x: &BigInt, k: u32) -> BigInt {
    let d = c.len() - 1;
    let mut acc = c[d].clone();
    for j in (0..d).rev() {
        acc *= x;
        if !c[j].is_zero() {
            acc += &c[j] << (k as usize * (d - j));
        }
    }
    acc
}

#[derive(Clone, Debug)]
struct Enclosure {
    k: u32,
    lo: BigRational,
    hi: BigRational,
}

/// Element `rep(γ)` of a [`RadicalField`].
///
/// The cached enclosure is shared between clones and guarded by a mutex; it
/// only ever narrows, so concurrent refinement is harmless.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<RadicalField>,
    rep: RatPoly,
    enclosure: Arc<Mutex<Option<Enclosure>>>,
}

/// Reduce modulo `γ^N = r` to degree `< N`.
pub fn reduce(rep: &RatPoly, field: &Arc<RadicalField>) -> AlgebraicNumber {
    let n = field.n as usize;
    let mut c: Vec<BigRational> = rep.coeffs().to_vec();
    for i in (n..c.len()).rev() {
        let v = std::mem::take(&mut c[i]);
        if !Zero::is_zero(&v) {
            c[i - n] += v * &field.r;
        }
    }
    c.truncate(n);
    AlgebraicNumber::from_reduced(field, RatPoly::new(c))
}

impl AlgebraicNumber {
    fn from_reduced(field: &Arc<RadicalField>, rep: RatPoly) -> Self {
        AlgebraicNumber {
            field: field.clone(),
            rep,
            enclosure: Arc::new(Mutex::new(None)),
        }
    }

    pub fn from_rat(field: &Arc<RadicalField>, c: BigRational) -> Self {
        Self::from_reduced(field, RatPoly::constant(c))
    }

    pub fn from_int(field: &Arc<RadicalField>, c: i64) -> Self {
        Self::from_rat(field, rat(c))
    }

    /// `c · γ^e`; negative `e` allowed.
    pub fn monomial(field: &Arc<RadicalField>, c: BigRational, e: i64) -> Self {
        let n = i64::from(field.n);
        let t = e.div_euclid(n);
        let j = e.rem_euclid(n) as usize;
        let scale = if t >= 0 {
            num_traits::pow(field.r.clone(), t as usize)
        } else {
            num_traits::pow(field.r.recip(), (-t) as usize)
        };
        Self::from_reduced(field, RatPoly::monomial(c * scale, j))
    }

    pub fn field(&self) -> &Arc<RadicalField> {
        &self.field
    }

    /// Representative of degree `< N`.
    pub fn rep(&self) -> &RatPoly {
        &self.rep
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.rep.degree() {
            -1 => Some(BigRational::zero()),
            0 => Some(self.rep.coeffs()[0].clone()),
            _ => None,
        }
    }

    /// `(c, e)` when the representative is a single term `c · γ^e`.
    pub fn monomial_parts(&self) -> Option<(BigRational, usize)> {
        let mut nz = self
            .rep
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c));
        let (e, c) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((c.clone(), e))
    }

    pub fn is_zero(&self) -> bool {
        self.field.vanishes(&self.rep)
    }

    pub fn sign(&self) -> Sign {
        if self.rep.is_zero() {
            return Sign::Zero;
        }
        if let Some(c) = self.as_rational() {
            return Coeff::sign(&c);
        }
        self.field
            .sign_of_int(&IntPoly::primitive_from_rat(&self.rep))
    }

    fn check_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.same_as(&other.field),
            "{}",
            AlgebraicError::FieldMismatch
        );
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraicError> {
        if !self.field.same_as(&other.field) {
            return Err(AlgebraicError::FieldMismatch);
        }
        Ok(Self::from_reduced(&self.field, self.rep.add(&other.rep)))
    }

    /// Multiplicative inverse; `None` exactly when the value is zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let rel = self.field.relation();
        let g = poly_gcd(&self.rep, rel);
        // γ is a root of rel / g, which is coprime to rep
        let modulus = rel.div_rem(&g).ok()?.0;
        let s = inverse_mod(&self.rep, &modulus)?;
        Some(reduce(&s, &self.field))
    }

    /// Current cached enclosure `[lo, hi]` (computed on first use).
    pub fn enclosure(&self) -> (BigRational, BigRational) {
        let mut g = self.enclosure.lock().unwrap();
        if g.is_none() {
            *g = Some(self.enclosure_at(16));
        }
        let e = g.as_ref().unwrap();
        (e.lo.clone(), e.hi.clone())
    }

    /// Tighten the cached enclosure to roughly half its width.
    pub fn refine(&self) -> (BigRational, BigRational) {
        let mut g = self.enclosure.lock().unwrap();
        let k = g.as_ref().map_or(16, |e| e.k + 1);
        let e = self.enclosure_at(k);
        *g = Some(e.clone());
        (e.lo, e.hi)
    }

    fn enclosure_at(&self, k: u32) -> Enclosure {
        if let Some(c) = self.as_rational() {
            return Enclosure {
                k,
                lo: c.clone(),
                hi: c,
            };
        }
        let ip = IntPoly::primitive_from_rat(&self.rep);
        // rep = ip / s for a positive rational s
        let s = &ip.coeffs()[ip.coeffs().len() - 1].clone();
        let lead = self.rep.lc().unwrap();
        let scale = BigRational::from_integer(s.clone()) / lead;
        let (lo, hi) = Split::new(ip.coeffs()).bounds(&self.field.gamma_floor(k), k);
        let d = ip.degree() as usize;
        let den = BigRational::from_integer(BigInt::one() << (k as usize * d)) * scale;
        Enclosure {
            k,
            lo: BigRational::from_integer(lo) / &den,
            hi: BigRational::from_integer(hi) / &den,
        }
    }

    /// Midpoint and half-width of an enclosure of width at most
    /// `2^(−precision)`.
    pub fn to_float(&self, precision: u32) -> (f64, f64) {
        assert!(precision >= 1);
        if self.rep.is_zero() {
            return (0.0, 0.0);
        }
        let target = BigRational::new(BigInt::one(), BigInt::one() << precision as usize);
        let mut k = {
            let g = self.enclosure.lock().unwrap();
            g.as_ref().map_or(64, |e| e.k.max(precision + 8))
        };
        loop {
            let e = self.enclosure_at(k);
            if &e.hi - &e.lo <= target {
                let mid = (&e.lo + &e.hi) / rat(2);
                let half = (&e.hi - &e.lo) / rat(2);
                let out = (rat_to_f64(&mid), rat_to_f64(&half));
                *self.enclosure.lock().unwrap() = Some(e);
                return out;
            }
            k *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(60).0
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Coeff::one_like(self);
        for _ in 0..e {
            acc = Coeff::mul(&acc, self);
        }
        acc
    }
}

/// `s` with `s · a ≡ 1 (mod m)`, assuming `gcd(a, m) = 1`.
fn inverse_mod(a: &RatPoly, m: &RatPoly) -> Option<RatPoly> {
    let (mut r0, mut r1) = (m.clone(), a.rem(m).ok()?);
    let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::constant(BigRational::one()));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).ok()?;
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.degree() != 0 {
        return None;
    }
    let c = r0.coeffs()[0].recip();
    s0.scale(&c).rem(m).ok()
}

impl Coeff for AlgebraicNumber {
    fn vanishes(&self) -> bool {
        AlgebraicNumber::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Self::from_reduced(&self.field, RatPoly::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_int(&self.field, 1)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::from_int(&self.field, n)
    }
    fn add(&self, rhs: &Self) -> Self {
        self.check_field(rhs);
        Self::from_reduced(&self.field, self.rep.add(&rhs.rep))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.check_field(rhs);
        Self::from_reduced(&self.field, self.rep.sub(&rhs.rep))
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.check_field(rhs);
        reduce(&self.rep.mul(&rhs.rep), &self.field)
    }
    fn neg(&self) -> Self {
        Self::from_reduced(&self.field, self.rep.neg())
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn sign(&self) -> Sign {
        AlgebraicNumber::sign(self)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.field.vanishes(&self.rep.sub(&other.rep))
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (≈ {:e})", self.to_f64())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.rep.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·γ")?,
                _ => write!(f, "({c})·γ^{i}")?,
            }
        }
        Ok(())
    }
}

/// Decimal rendering `(m, e)` of `x ≈ m × 10^e`, `1 ≤ |m| < 10`, with `m`
/// rounded half away from zero to `digits` significant digits.
pub fn decimal_digits(x: &BigRational, digits: u32) -> (f64, i64) {
    if x.is_zero() {
        return (0.0, 0);
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10);
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::from_integer(num_traits::pow(ten.clone(), (-e) as usize)).recip()
        }
    };
    let mut e: i64 = (a.numer().bits() as i64 - a.denom().bits() as i64) * 3 / 10;
    loop {
        let s = &a / pow10(e);
        if s < BigRational::one() {
            e -= 1;
        } else if s >= rat(10) {
            e += 1;
        } else {
            break;
        }
    }
    let f = pow10(i64::from(digits) - 1);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut m = (&a / pow10(e) * &f + half).floor().to_integer();
    if m >= num_traits::pow(ten.clone(), digits as usize) {
        m /= &ten;
        e += 1;
    }
    let mant = m.to_f64().unwrap() / f.to_integer().to_f64().unwrap();
    (if neg { -mant } else { mant }, e)
}

/// Whether `x` renders as `mantissa × 10^exp` to `digits` significant
/// digits.
pub fn digits_match(x: &BigRational, mantissa: f64, exp: i64, digits: u32) -> bool {
    let (m, e) = decimal_digits(x, digits);
    e == exp && (m - mantissa).abs() < 0.5 * 10f64.powi(1 - digits as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn reduce_relation() {
        let f = RadicalField::chazy(1);
        let n = f.index() as usize;
        let g_n = reduce(&RatPoly::monomial(rat(1), n), &f);
        assert_eq!(g_n.rep(), &RatPoly::constant(rat(8)));
        let g_n1 = reduce(&RatPoly::monomial(rat(1), n + 1), &f);
        assert_eq!(g_n1.rep(), &RatPoly::monomial(rat(8), 1));
        let g3 = f.gamma().pow(3);
        assert_eq!(Coeff::mul(&g3, &g3).rep(), &RatPoly::monomial(rat(8), 2));
    }

    #[test]
    fn zero_test_with_reducible_relation() {
        let f = RadicalField::new(4, rat(4)).unwrap();
        let a = reduce(&RatPoly::from_ints(&[-2, 0, 1]), &f);
        assert!(a.is_zero());
        assert_eq!(a.sign(), Sign::Zero);
        let f8 = RadicalField::new(4, rat(8)).unwrap();
        assert!(!reduce(&RatPoly::from_ints(&[-1, 1]), &f8).is_zero());
        assert!(reduce(&RatPoly::zero(), &f8).is_zero());
    }

    #[test]
    fn signs_near_gamma() {
        let f1 = RadicalField::chazy(1);
        let a = Coeff::sub(&f1.gamma(), &AlgebraicNumber::from_int(&f1, 2));
        assert_eq!(a.sign(), Sign::Negative);
        let f2 = RadicalField::chazy(2);
        let b = Coeff::sub(&f2.gamma(), &AlgebraicNumber::from_int(&f2, 1));
        assert_eq!(b.sign(), Sign::Positive);
    }

    #[test]
    fn floats() {
        let f1 = RadicalField::chazy(1);
        let (g, hw) = f1.gamma().to_float(40);
        assert!((g - 8f64.powf(0.25)).abs() < 1e-12);
        assert!(hw <= 2f64.powi(-40));
        let inv = f1.gamma().inverse().unwrap();
        assert!((inv.to_f64() - 2f64.powf(-0.75)).abs() < 1e-15);
        assert_eq!(AlgebraicNumber::from_int(&f1, 0).to_float(10), (0.0, 0.0));
    }

    #[test]
    fn inverse_in_reducible_field() {
        // γ = √2 in Q(4^(1/4)); 1 + γ^2 = 3
        let f = RadicalField::new(4, rat(4)).unwrap();
        let a = reduce(&RatPoly::from_ints(&[1, 0, 1]), &f);
        let inv = a.inverse().unwrap();
        assert_eq!(Coeff::mul(&a, &inv), AlgebraicNumber::from_int(&f, 1));
        assert!((inv.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn negative_powers() {
        let f = RadicalField::chazy(2);
        let a = AlgebraicNumber::monomial(&f, ratio(3, 2), -1);
        assert!((a.to_f64() - 1.5 / f.gamma_f64()).abs() < 1e-14);
    }

    #[test]
    fn decimal_rounding() {
        let x = BigRational::from_integer("-441356189000000000000000".parse().unwrap());
        assert_eq!(decimal_digits(&x, 6), (-4.41356, 23));
        assert!(digits_match(&x, -4.41356, 23, 6));
        let y = BigRational::from_integer("229036760418".parse().unwrap());
        assert_eq!(decimal_digits(&y, 6), (2.29037, 11));
        let z = BigRational::from_integer("9999996".parse().unwrap());
        assert_eq!(decimal_digits(&z, 6), (1.0, 7));
    }
}
