//! Sturm chains and root counting on half-open intervals `(a, b]`.
//!
//! [`SturmChain`] works over `Q` with the integer subresultant sequence and
//! accepts rational, algebraic or infinite endpoints. [`FieldSturmChain`]
//! runs the textbook `−rem` recursion over any exact field, including
//! `Q(γ)` directly; it is slower and serves as a cross-check.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebraic::AlgebraicNumber;
use crate::exact::int_poly::{signed_prs, IntPoly};
use crate::exact::{
    rat_to_f64, square_free_decomposition, square_free_part, BigInt, BigRational, Coeff, Poly,
    PolyError, RatPoly, Sign,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SturmError {
    #[error("Sturm chain of the zero polynomial")]
    ZeroPolynomial,
    #[error("empty interval: left endpoint is not below the right one")]
    EmptyInterval,
    #[error("algebraic endpoint not supported by this chain")]
    UnsupportedPoint,
}

impl From<PolyError> for SturmError {
    fn from(_: PolyError) -> Self {
        SturmError::ZeroPolynomial
    }
}

/// Interval endpoint.
#[derive(Clone, Debug)]
pub enum Point {
    NegInf,
    PosInf,
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
}

impl Point {
    pub fn int(n: i64) -> Self {
        Point::Rational(crate::exact::rat(n))
    }

    pub fn approx(&self) -> f64 {
        match self {
            Point::NegInf => f64::NEG_INFINITY,
            Point::PosInf => f64::INFINITY,
            Point::Rational(x) => rat_to_f64(x),
            Point::Algebraic(a) => a.to_f64(),
        }
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &Point) -> Ordering {
        use Point::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Rational(a), Rational(b)) => a.cmp(b),
            (Algebraic(a), Algebraic(b)) => sign_to_ordering(Coeff::sub(a, b).sign()),
            (Algebraic(a), Rational(b)) => {
                let b = AlgebraicNumber::from_rat(a.field(), b.clone());
                sign_to_ordering(Coeff::sub(a, &b).sign())
            }
            (Rational(_), Algebraic(_)) => other.cmp_exact(self).reverse(),
        }
    }
}

fn sign_to_ordering(s: Sign) -> Ordering {
    match s {
        Sign::Negative => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Positive => Ordering::Greater,
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Point::NegInf => s.serialize_str("-inf"),
            Point::PosInf => s.serialize_str("+inf"),
            Point::Rational(x) => s.serialize_str(&x.to_string()),
            Point::Algebraic(a) => s.serialize_str(&a.to_string()),
        }
    }
}

/// Number of distinct roots in `(a, b]`.
#[derive(Clone, Debug, Serialize)]
pub struct RootCount {
    pub count: usize,
    pub a: Point,
    pub b: Point,
    pub v_a: usize,
    pub v_b: usize,
}

/// Sturm sequence of a square-free rational polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    base: RatPoly,
    seq: Vec<IntPoly>,
    reduced_from_non_square_free: bool,
}

impl SturmChain {
    /// Build the chain of `p`, taking the square-free part first when `p`
    /// has repeated roots.
    pub fn new(p: &RatPoly) -> Result<Self, SturmError> {
        if p.is_zero() {
            return Err(SturmError::ZeroPolynomial);
        }
        let seq = build_seq(IntPoly::primitive_from_rat(p));
        if seq.last().unwrap().degree() <= 0 {
            return Ok(SturmChain {
                base: p.clone(),
                seq,
                reduced_from_non_square_free: false,
            });
        }
        let sf = square_free_part(p)?;
        let seq = build_seq(IntPoly::primitive_from_rat(&sf));
        debug_assert_eq!(seq.last().unwrap().degree(), 0);
        Ok(SturmChain {
            base: sf,
            seq,
            reduced_from_non_square_free: true,
        })
    }

    pub fn base(&self) -> &RatPoly {
        &self.base
    }

    /// Whether the input had repeated roots and was replaced by its
    /// square-free part.
    pub fn was_reduced(&self) -> bool {
        self.reduced_from_non_square_free
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Chain elements, each a positive multiple of the classical one.
    pub fn sequence(&self) -> Vec<RatPoly> {
        self.seq.iter().map(IntPoly::to_rat).collect()
    }

    pub fn int_sequence(&self) -> &[IntPoly] {
        &self.seq
    }

    pub fn signs_at(&self, x: &Point) -> Vec<Sign> {
        match x {
            Point::NegInf => self.seq.iter().map(|p| p.sign_at_infinity(false)).collect(),
            Point::PosInf => self.seq.iter().map(|p| p.sign_at_infinity(true)).collect(),
            Point::Rational(r) => self.seq.iter().map(|p| p.sign_at_rat(r)).collect(),
            Point::Algebraic(a) => self.seq.iter().map(|p| sign_at_algebraic(p, a)).collect(),
        }
    }

    /// `V(x)`: sign changes in the chain evaluated at `x`, zeros dropped.
    pub fn sign_variations_at(&self, x: &Point) -> usize {
        variations(&self.signs_at(x))
    }

    /// Distinct roots of the base in `(a, b]`.
    pub fn count_roots(&self, a: &Point, b: &Point) -> Result<RootCount, SturmError> {
        if a.cmp_exact(b) != Ordering::Less {
            return Err(SturmError::EmptyInterval);
        }
        let v_a = self.sign_variations_at(a);
        let v_b = self.sign_variations_at(b);
        debug_assert!(v_a >= v_b);
        Ok(RootCount {
            count: v_a - v_b,
            a: a.clone(),
            b: b.clone(),
            v_a,
            v_b,
        })
    }

    /// Whether `x` is a root of the base.
    pub fn is_root(&self, x: &Point) -> bool {
        match x {
            Point::NegInf | Point::PosInf => false,
            Point::Rational(r) => self.seq[0].sign_at_rat(r) == Sign::Zero,
            Point::Algebraic(a) => sign_at_algebraic(&self.seq[0], a) == Sign::Zero,
        }
    }

    /// Distinct roots in the open interval `(a, b)`.
    pub fn count_roots_open(&self, a: &Point, b: &Point) -> Result<usize, SturmError> {
        let c = self.count_roots(a, b)?.count;
        Ok(c - usize::from(self.is_root(b)))
    }
}

fn build_seq(p: IntPoly) -> Vec<IntPoly> {
    if p.degree() == 0 {
        return vec![p];
    }
    let d = p.derivative();
    signed_prs(p, d).seq
}

fn variations(signs: &[Sign]) -> usize {
    let mut last = Sign::Zero;
    let mut n = 0;
    for &s in signs {
        if s == Sign::Zero {
            continue;
        }
        if last != Sign::Zero && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Exact sign of `p(α)` for an integer polynomial and `α ∈ Q(γ)`.
pub fn sign_at_algebraic(p: &IntPoly, a: &AlgebraicNumber) -> Sign {
    if p.is_zero() {
        return Sign::Zero;
    }
    if let Some(c) = a.as_rational() {
        return p.sign_at_rat(&c);
    }
    let field = a.field();
    if let Some((c, e)) = a.monomial_parts() {
        return field.sign_of_int(&eval_at_monomial(p, &c, e, field.index(), field.radicand()));
    }
    // general element: Horner in the field
    let mut acc = a.zero_like();
    for coef in p.coeffs().iter().rev() {
        acc = acc.mul(a).add(&AlgebraicNumber::from_rat(
            field,
            BigRational::from_integer(coef.clone()),
        ));
    }
    acc.sign()
}

/// Positive integer multiple of `p(c·γ^e)` written in the basis `γ^j`,
/// `j < n`, using `γ^n = r`.
fn eval_at_monomial(p: &IntPoly, c: &BigRational, e: usize, n: u32, r: &BigRational) -> IntPoly {
    let n = n as usize;
    let d = p.degree() as usize;
    let (cn, cd) = (c.numer(), c.denom());
    let (rn, rd) = (r.numer(), r.denom());
    let tmax = (e * d) / n;
    let mut rn_pow = vec![BigInt::one()];
    let mut rd_pow = vec![BigInt::one()];
    for t in 1..=tmax {
        rn_pow.push(&rn_pow[t - 1] * rn);
        rd_pow.push(&rd_pow[t - 1] * rd);
    }
    let mut cd_pow = vec![BigInt::one()];
    for i in 1..=d {
        cd_pow.push(&cd_pow[i - 1] * cd);
    }
    let mut out = vec![BigInt::zero(); n];
    let mut cn_pow = BigInt::one();
    for (i, a) in p.coeffs().iter().enumerate() {
        if !a.is_zero() {
            let t = (e * i) / n;
            let j = (e * i) % n;
            // a_i cn^i cd^(d−i) rn^t rd^(tmax−t)
            let mut term = a * &cn_pow;
            term *= &cd_pow[d - i];
            term *= &rn_pow[t];
            term *= &rd_pow[tmax - t];
            out[j] += term;
        }
        cn_pow *= cn;
    }
    IntPoly::new(out)
}

/// Roots in `(a, b]` counted with multiplicity, via the square-free
/// decomposition.
pub fn count_roots_with_multiplicity(
    p: &RatPoly,
    a: &Point,
    b: &Point,
) -> Result<usize, SturmError> {
    multiplicity_count(p, a, b, false)
}

/// Roots in the open interval `(a, b)` counted with multiplicity.
pub fn count_roots_with_multiplicity_open(
    p: &RatPoly,
    a: &Point,
    b: &Point,
) -> Result<usize, SturmError> {
    multiplicity_count(p, a, b, true)
}

fn multiplicity_count(p: &RatPoly, a: &Point, b: &Point, open: bool) -> Result<usize, SturmError> {
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let count = |ch: &SturmChain| -> Result<usize, SturmError> {
        if open {
            ch.count_roots_open(a, b)
        } else {
            Ok(ch.count_roots(a, b)?.count)
        }
    };
    let chain = SturmChain::new(p)?;
    if !chain.was_reduced() {
        return count(&chain);
    }
    let mut total = 0;
    for (k, s) in square_free_decomposition(p)? {
        total += k * count(&SturmChain::new(&s)?)?;
    }
    Ok(total)
}

/// Endpoint for [`FieldSturmChain`].
#[derive(Clone, Debug)]
pub enum FieldPoint<F> {
    NegInf,
    PosInf,
    At(F),
}

/// Sturm chain computed by Euclidean division over an exact field.
#[derive(Clone, Debug)]
pub struct FieldSturmChain<F: Coeff> {
    seq: Vec<Poly<F>>,
    reduced_from_non_square_free: bool,
}

impl<F: Coeff> FieldSturmChain<F> {
    pub fn new(p: &Poly<F>) -> Result<Self, SturmError> {
        if p.is_zero() {
            return Err(SturmError::ZeroPolynomial);
        }
        let seq = euclid_seq(p)?;
        if seq.last().unwrap().degree() <= 0 {
            return Ok(FieldSturmChain {
                seq,
                reduced_from_non_square_free: false,
            });
        }
        let sf = square_free_part(p)?;
        Ok(FieldSturmChain {
            seq: euclid_seq(&sf)?,
            reduced_from_non_square_free: true,
        })
    }

    pub fn sequence(&self) -> &[Poly<F>] {
        &self.seq
    }

    pub fn was_reduced(&self) -> bool {
        self.reduced_from_non_square_free
    }

    pub fn sign_variations_at(&self, x: &FieldPoint<F>) -> usize {
        let signs: Vec<Sign> = self
            .seq
            .iter()
            .map(|p| match x {
                FieldPoint::PosInf => p.lc().map_or(Sign::Zero, Coeff::sign),
                FieldPoint::NegInf => {
                    let s = p.lc().map_or(Sign::Zero, Coeff::sign);
                    if p.degree() % 2 == 1 {
                        s.flip()
                    } else {
                        s
                    }
                }
                FieldPoint::At(v) => p.eval(v).sign(),
            })
            .collect();
        variations(&signs)
    }

    /// Distinct roots in `(a, b]`; the caller guarantees `a < b`.
    pub fn count_roots(&self, a: &FieldPoint<F>, b: &FieldPoint<F>) -> Result<usize, SturmError> {
        let va = self.sign_variations_at(a);
        let vb = self.sign_variations_at(b);
        va.checked_sub(vb).ok_or(SturmError::EmptyInterval)
    }
}

fn euclid_seq<F: Coeff>(p: &Poly<F>) -> Result<Vec<Poly<F>>, SturmError> {
    let mut seq = vec![p.clone()];
    if p.degree() == 0 {
        return Ok(seq);
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        if seq[n - 1].degree() == 0 {
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1])?;
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    Ok(seq)
}

/// Float view of a chain element's value; for diagnostics.
pub fn approx_eval(p: &IntPoly, x: f64) -> f64 {
    p.coeffs().iter().rev().fold(0.0, |acc, c| {
        acc * x + rat_to_f64(&BigRational::from_integer(c.clone()))
    })
}

/// Positive roots bracket: whether `p` has a root at a positive rational.
pub fn has_root_at(p: &RatPoly, x: &BigRational) -> bool {
    p.eval(x).is_zero()
}
