use std::fmt;

use num_traits::{Signed, Zero};

use super::{BigInt, BigRational, Coeff, PolyError};

/// Dense univariate polynomial; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// no coefficients and degree −1.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Coeff> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.vanishes()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        if c.vanishes() {
            return Self::zero();
        }
        let mut v = vec![c.zero_like(); k + 1];
        v[k] = c;
        Poly { coeffs: v }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut it = self.coeffs.iter().rev();
        let Some(first) = it.next() else {
            return x.zero_like();
        };
        let mut acc = first.clone();
        for c in it {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&c.from_i64_like(i as i64)))
            .collect();
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(Coeff::neg).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(&short.coeffs) {
            *a = a.add(b);
        }
        Self::new(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let Some(c) = self.coeffs.first() else {
            return if n == 0 {
                panic!("0^0 polynomial power")
            } else {
                Self::zero()
            };
        };
        let mut acc = Self::constant(c.one_like());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division over the coefficient field.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        let lc = d.lc().ok_or(PolyError::ZeroPolynomial)?;
        let inv = lc.inv().ok_or(PolyError::NotInvertible)?;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let dn = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let z = inv.zero_like();
        let mut q = vec![z; r.len() - dn];
        for k in (0..q.len()).rev() {
            let c = r[k + dn].mul(&inv);
            if c.vanishes() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(dc));
            }
            q[k] = c;
        }
        r.truncate(dn);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, PolyError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Scale to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lc().and_then(Coeff::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// `p(c·x)`.
    pub fn compose_scale(&self, c: &F) -> Self {
        let mut pw = c.one_like();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a.mul(&pw));
            pw = pw.mul(c);
        }
        Self::new(v)
    }

    pub fn map<G: Coeff>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<BigRational> {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(
            c.iter()
                .map(|&n| BigRational::from_integer(BigInt::from(n)))
                .collect(),
        )
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(
            c.iter()
                .map(|n| BigRational::from_integer(n.clone()))
                .collect(),
        )
    }

    /// Evaluate in double precision (diagnostics only).
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + super::rat_to_f64(c))
    }

    /// Number of sign changes in the coefficient sequence (Descartes' bound
    /// on positive roots).
    pub fn descartes_sign_changes(&self) -> usize {
        let signs: Vec<bool> = self
            .coeffs
            .iter()
            .filter(|c| !Zero::is_zero(*c))
            .map(|c| c.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

pub(crate) fn euclid_gcd<F: Coeff>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor over a field");
        a = b;
        b = r;
    }
    a.monic()
}

pub(crate) fn resultant<F: Coeff>(a: &Poly<F>, b: &Poly<F>) -> Result<F, PolyError> {
    if a.is_zero() || b.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut f = a.clone();
    let mut g = b.clone();
    let mut acc = f.coeffs[0].one_like();
    loop {
        let df = f.degree() as u32;
        let dg = g.degree() as u32;
        let lg = g.lc().unwrap().clone();
        if dg == 0 {
            return Ok(acc.mul(&pow(&lg, df)));
        }
        if df == 0 {
            return Ok(acc.mul(&pow(f.lc().unwrap(), dg)));
        }
        let r = f.rem(&g)?;
        if r.is_zero() {
            return Ok(acc.zero_like());
        }
        let dr = r.degree() as u32;
        acc = acc.mul(&pow(&lg, df - dr));
        if df % 2 == 1 && dg % 2 == 1 {
            acc = acc.neg();
        }
        f = g;
        g = r;
    }
}

fn pow<F: Coeff>(x: &F, n: u32) -> F {
    let mut acc = x.one_like();
    for _ in 0..n {
        acc = acc.mul(x);
    }
    acc
}

impl<F: Coeff> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl fmt::Display for Poly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let unit = a == BigRational::from_integer(BigInt::from(1));
            if !unit || i == 0 {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
