//! Exact rational arithmetic and dense univariate polynomials.
//!
//! Rational scalars are [`BigRational`] (always in lowest terms, positive
//! denominator). Polynomials are generic over a [`Coeff`] so that the same
//! Euclidean machinery runs over `Q` and over the radical field `Q(γ)`.
//! Rational polynomials additionally get an integer pseudo-remainder path
//! ([`int_poly`]) which is what the Sturm code uses at large degree.

pub mod int_poly;
pub mod modular;
mod poly;

use std::cmp::Ordering;
use std::fmt;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use poly::Poly;

/// Dense polynomial with rational coefficients.
pub type RatPoly = Poly<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by a non-invertible leading coefficient")]
    NotInvertible,
}

/// Exact sign of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn of_bigint(n: &BigInt) -> Self {
        if n.is_zero() {
            Sign::Zero
        } else if n.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}

/// Scalars usable as polynomial coefficients.
///
/// Elements of `Q(γ)` carry their field, so constants are produced from an
/// existing element (`zero_like`, `from_i64_like`) rather than from nothing.
/// `vanishes` and `sign` must be exact.
pub trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn vanishes(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn sign(&self) -> Sign;

    /// Greatest common divisor of two polynomials, normalized monic.
    ///
    /// The default is the Euclidean algorithm over the coefficient field.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        poly::euclid_gcd(a, b)
    }
}

impl Coeff for BigRational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn sign(&self) -> Sign {
        Sign::of_bigint(self.numer())
    }

    fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
        int_poly::rat_gcd(a, b)
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`; panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest double to a rational (saturates to ±inf).
pub fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite double.
pub fn f64_to_rat(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Greatest common divisor of two rational polynomials (monic; `gcd(0,0)=0`).
pub fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    int_poly::rat_gcd(a, b)
}

/// Resultant under the convention `res(f,g) = lc(f)^deg g · ∏ g(α)` over
/// the roots `α` of `f`; this equals the Sylvester determinant.
pub fn poly_resultant<F: Coeff>(a: &Poly<F>, b: &Poly<F>) -> Result<F, PolyError> {
    poly::resultant(a, b)
}

/// `p / gcd(p, p')`, monic.
pub fn square_free_part<F: Coeff>(p: &Poly<F>) -> Result<Poly<F>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let g = F::poly_gcd(p, &p.derivative());
    let (q, _) = p.div_rem(&g)?;
    Ok(q.monic())
}

/// Yun's square-free decomposition: returns `(k, s_k)` with
/// `p = c · ∏ s_k^k`, each `s_k` square-free, monic, non-constant and
/// pairwise coprime.
pub fn square_free_decomposition<F: Coeff>(
    p: &Poly<F>,
) -> Result<Vec<(usize, Poly<F>)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if p.degree() < 1 {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = F::poly_gcd(p, &dp);
    let mut b = p.div_rem(&a0)?.0;
    let mut c = dp.div_rem(&a0)?.0;
    let mut d = c.sub(&b.derivative());
    let mut k = 1;
    loop {
        let a = F::poly_gcd(&b, &d);
        if a.degree() > 0 {
            out.push((k, a.monic()));
        }
        b = b.div_rem(&a)?.0;
        if b.degree() < 1 {
            break;
        }
        c = d.div_rem(&a)?.0;
        d = c.sub(&b.derivative());
        k += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn gcd_examples() {
        // x^2 - 1 and 2x are coprime
        assert_eq!(poly_gcd(&rp(&[-1, 0, 1]), &rp(&[0, 2])), rp(&[1]));
        // (x-1)^2 and 2(x-1)
        assert_eq!(poly_gcd(&rp(&[1, -2, 1]), &rp(&[-2, 2])), rp(&[-1, 1]));
        assert!(poly_gcd(&RatPoly::zero(), &RatPoly::zero()).is_zero());
        assert_eq!(
            poly_gcd(&RatPoly::zero(), &rp(&[3, 6])),
            RatPoly::new(vec![ratio(1, 2), rat(1)])
        );
    }

    #[test]
    fn resultant_linear_factors() {
        // f = x - a, g = x - b: lc(f)^1 · g(a) = a - b
        let (a, b) = (3, 7);
        let r = poly_resultant(&rp(&[-a, 1]), &rp(&[-b, 1])).unwrap();
        assert_eq!(r, rat(a - b));
        let r = poly_resultant(&rp(&[-b, 1]), &rp(&[-a, 1])).unwrap();
        assert_eq!(r, rat(b - a));
    }

    #[test]
    fn resultant_rejects_zero() {
        assert_eq!(
            poly_resultant(&RatPoly::zero(), &rp(&[1, 1])),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn resultant_matches_sylvester_on_small_case() {
        // f = 2x^2 + 3x - 1, g = x^2 - 5; Sylvester determinant by hand:
        // res = lc(g)^2 · f(√5) f(-√5) = (10 - 1 + 3√5)(10 - 1 - 3√5) = 81 - 45 = 36
        let f = rp(&[-1, 3, 2]);
        let g = rp(&[-5, 0, 1]);
        assert_eq!(poly_resultant(&f, &g).unwrap(), rat(36));
        assert_eq!(poly_resultant(&g, &f).unwrap(), rat(36));
    }

    #[test]
    fn square_free_examples() {
        assert_eq!(square_free_part(&rp(&[0, 0, 1])).unwrap(), rp(&[0, 1]));
        assert_eq!(
            square_free_part(&rp(&[1, 0, -2, 0, 1])).unwrap(),
            rp(&[-1, 0, 1])
        );
        assert_eq!(
            square_free_part(&RatPoly::zero()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)^2 x
        let p = rp(&[-1, 1])
            .pow(3)
            .mul(&rp(&[2, 1]).pow(2))
            .mul(&rp(&[0, 1]));
        let dec = square_free_decomposition(&p).unwrap();
        assert_eq!(
            dec,
            vec![(1, rp(&[0, 1])), (2, rp(&[2, 1])), (3, rp(&[-1, 1]))]
        );
    }

    #[test]
    fn eval_and_derivative() {
        assert_eq!(rp(&[1, 0, 1]).eval(&rat(2)), rat(5));
        assert_eq!(rp(&[0, 0, 0, 1]).derivative(), rp(&[0, 0, 3]));
        let p = rp(&[1, -2, 1]);
        assert!(p.derivative().eval(&rat(1)).is_zero());
    }
}
