use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Rational};

/// Dense univariate polynomial over the rationals; `coeffs[k]` multiplies `x^k`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.recip()),
            None => UPoly::zero(),
        }
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading_coeff().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Coefficients scaled by a positive rational to coprime integers.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        primitive(ints)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Divide integer coefficients by their positive content.
pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

/// Monic greatest common divisor.
pub fn upoly_gcd(p: &UPoly, q: &UPoly) -> Result<UPoly, AlgebraError> {
    if p.is_zero() && q.is_zero() {
        return Err(AlgebraError::ZeroGcd);
    }
    // Primitive remainder sequence over the integers, normalised at the end.
    let mut a = p.primitive_integer_coeffs();
    let mut b = q.primitive_integer_coeffs();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_remainder(&a, &b);
        a = b;
        b = primitive(r);
    }
    Ok(UPoly::from_bigints(&a).monic())
}

/// Remainder of `|lc(b)|^(deg a - deg b + 1) * a` by `b`; the multiplier is positive.
pub(crate) fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return a.to_vec();
    }
    let lc = b[db].abs();
    let sign_neg = b[db].is_negative();
    let mut rem = a.to_vec();
    let steps = a.len() - db;
    for k in (0..steps).rev() {
        // rem <- lc * rem - (rem_top * sgn) * x^k * b
        let top = rem[k + db].clone();
        for c in rem.iter_mut() {
            *c *= &lc;
        }
        if !top.is_zero() {
            let factor = if sign_neg { -top } else { top };
            for (j, d) in b.iter().enumerate() {
                rem[k + j] -= &factor * d;
            }
        }
        debug_assert!(rem[k + db].is_zero());
        rem.truncate(k + db);
    }
    while rem.last().is_some_and(Zero::is_zero) {
        rem.pop();
    }
    rem
}

pub fn is_squarefree(p: &UPoly) -> Result<bool, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    // The subresultant chain of p and p' ends in a multiple of their gcd.
    Ok(super::sturm::SturmChain::new(p)?.is_squarefree())
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
                    match rhs.coeffs.get(k) {
                        Some(b) => a + b,
                        None => a,
                    }
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{abs}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_examples() {
        assert_eq!(UPoly::from_ints(&[-2, 0, 1]).derivative(), UPoly::from_ints(&[0, 2]));
        assert!(UPoly::from_ints(&[5]).derivative().is_zero());
        assert_eq!(UPoly::from_ints(&[0, 0, 0, 0, 1]).derivative(), UPoly::from_ints(&[0, 0, 0, 4]));
    }

    #[test]
    fn gcd_examples() {
        let sq = UPoly::from_ints(&[1, -2, 1]);
        let lin = UPoly::from_ints(&[-1, 1]);
        assert_eq!(upoly_gcd(&sq, &lin).unwrap(), lin);
        assert_eq!(
            upoly_gcd(&UPoly::from_ints(&[-2, 0, 1]), &UPoly::from_ints(&[0, 2])).unwrap(),
            UPoly::one()
        );
        // x^3 - x and x^2 - 1 by hand Euclid: x^3 - x = x(x^2 - 1), remainder 0.
        assert_eq!(
            upoly_gcd(&UPoly::from_ints(&[0, -1, 0, 1]), &UPoly::from_ints(&[-1, 0, 1])).unwrap(),
            UPoly::from_ints(&[-1, 0, 1])
        );
        assert_eq!(upoly_gcd(&UPoly::zero(), &UPoly::zero()), Err(AlgebraError::ZeroGcd));
        assert_eq!(upoly_gcd(&UPoly::zero(), &UPoly::from_ints(&[3, 6])).unwrap(), UPoly::new(vec![Rational::new(1.into(), 2.into()), Rational::one()]));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&UPoly::from_ints(&[-2, 0, 1])).unwrap());
        assert!(!is_squarefree(&UPoly::from_ints(&[1, -2, 1])).unwrap());
        assert!(!is_squarefree(&UPoly::from_ints(&[0, 0, 0, 1])).unwrap());
        assert_eq!(is_squarefree(&UPoly::zero()), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = UPoly::from_ints(&[3, -1, 4, 1, -5, 9]);
        let b = UPoly::new(vec![Rational::new(1.into(), 2.into()), Rational::from_integer(2.into()), Rational::from_integer(7.into())]);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn pseudo_remainder_is_positive_multiple() {
        let a: Vec<BigInt> = [1, 0, 3, 2].iter().map(|&c| BigInt::from(c)).collect();
        let b: Vec<BigInt> = [1, 1, -3].iter().map(|&c| BigInt::from(c)).collect();
        let r = pseudo_remainder(&a, &b);
        // |lc|^2 * a mod b computed over Q must agree with r.
        let (_, rq) = UPoly::from_bigints(&a).scale(&Rational::from_integer(9.into())).div_rem(&UPoly::from_bigints(&b));
        assert_eq!(UPoly::from_bigints(&r), rq);
    }
}
