use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Rational};

/// Exponent vector of a monomial. Ordered by graded lex with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept in a map keyed by graded-lex monomials; zero coefficients
/// are never stored. Iteration via [`MPoly::terms`] runs from the leading
/// term downwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range");
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, index), Rational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the leading (largest graded-lex) monomial downwards.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x_var = value`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &Rational) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0);
            out.add_term(Monomial(e), c * pow_rational(value, k));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * pow_rational(x, e))
            })
            .sum()
    }

    /// Coefficients as a univariate polynomial in `var`: entry `k` multiplies `x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0) as usize;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Largest power of `x_var` dividing every term.
    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    /// Drop variable `var`, which must not occur.
    pub fn remove_variable(&self, var: usize) -> MPoly {
        assert!(self.degree_in(var).unwrap_or(0) == 0);
        let mut out = MPoly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(var);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Append `extra` unused variables at the end.
    pub fn extend_variables(&self, extra: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars + extra);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.extend(std::iter::repeat(0).take(extra));
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MPoly) -> Option<MPoly> {
        let (dm, dc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let q = dm.quotient_of(m)?;
            let qc = c / dc;
            rem = &rem - &divisor.mul_monomial(&q, &qc);
            quot.add_term(q, qc);
        }
        Some(quot)
    }

    /// Rescale by a positive rational so all coefficients are coprime integers.
    pub fn primitive_part(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        self.scale(&Rational::new(lcm, gcd.abs()))
    }

    /// Whether `self = c * other` for a nonzero rational `c`.
    pub fn is_proportional_to(&self, other: &MPoly) -> bool {
        match (self.leading_term(), other.leading_term()) {
            (Some((m1, c1)), Some((m2, c2))) if m1 == m2 => {
                let ratio = c1 / c2;
                self.terms.len() == other.terms.len() && *self == other.scale(&ratio)
            }
            _ => false,
        }
    }

    pub(crate) fn check_arity(&self, other: &MPoly) -> Result<(), AlgebraError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(AlgebraError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }
}

pub(crate) fn pow_rational(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{}", v + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn graded_lex_leading_term() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = &(&x * &y) + &(&y.pow(3) + &x.pow(2));
        assert_eq!(p.leading_term().unwrap().0, &Monomial::from_exponents(vec![0, 3]));
        let p2 = &(&x * &y) + &y.pow(2);
        assert_eq!(p2.leading_term().unwrap().0, &Monomial::from_exponents(vec![1, 1]));
    }

    #[test]
    fn exact_division_recovers_factor() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let a = &x - &y;
        let b = &(&x * &x) + &(&y.scale(&q(3)) + &MPoly::from_int(2, 1));
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert!(prod.exact_div(&(&x + &MPoly::from_int(2, 5))).is_none());
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let x = MPoly::var(1, 0);
        let p = &x.scale(&Rational::new(2.into(), 3.into())) - &MPoly::constant(1, Rational::new(4.into(), 9.into()));
        let pp = p.primitive_part();
        assert_eq!(pp, &x.scale(&q(3)) - &MPoly::from_int(1, 2));
    }

    #[test]
    fn substitute_and_eval_agree() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = &(&x * &y.pow(2)) - &x.scale(&q(7));
        let s = p.substitute(1, &q(3));
        assert_eq!(s, x.scale(&q(2)));
        assert_eq!(p.eval(&[q(2), q(3)]), q(4));
    }

    #[test]
    fn display_uses_one_based_names() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = &(&x.pow(2) - &y.scale(&q(3))) + &MPoly::from_int(2, 1);
        assert_eq!(p.to_string(), "x1^2 - 3*x2 + 1");
    }
}
