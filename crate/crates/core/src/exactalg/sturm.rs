use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use super::upoly::pseudo_remainder;
use super::{AlgebraError, UPoly};

/// Sturm chain `p, p', -rem(p, p'), ...` with each entry replaced by a
/// positive multiple with integer coefficients.
///
/// The entries are computed as the subresultant remainder sequence, which
/// keeps the integer coefficients small without content computations; the
/// sign relating each subresultant to the Sturm remainder is tracked
/// alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    polys: Vec<Vec<BigInt>>,
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = pseudo_remainder(a, b);
    let delta = a.len() - b.len();
    if b.last().unwrap().is_negative() && delta % 2 == 0 {
        for c in r.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    r
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let r0 = p.primitive_integer_coeffs();
        let r1: Vec<BigInt> = r0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        if r1.iter().all(Zero::is_zero) {
            return Ok(SturmChain { polys: vec![r0] });
        }
        // rs[i] is the i-th subresultant remainder, negative[i] whether the
        // Sturm entry is a negative multiple of it.
        let mut rs = vec![r0, r1];
        let mut negative = vec![false, false];
        let mut psi = -BigInt::one();
        let mut delta = rs[0].len() - rs[1].len();
        let mut beta = if delta % 2 == 0 { -BigInt::one() } else { BigInt::one() };
        loop {
            let i = rs.len() - 1;
            let r = prem(&rs[i - 1], &rs[i]);
            if r.is_empty() {
                break;
            }
            let next: Vec<BigInt> = r.into_iter().map(|c| c / &beta).collect();
            let lc = rs[i].last().unwrap().clone();
            let flip = beta.is_negative() ^ (lc.is_negative() && delta % 2 == 0);
            negative.push(!(negative[i - 1] ^ flip));
            // update psi and beta for the next step
            let new_delta = rs[i].len() - next.len();
            psi = Pow::pow(-&lc, delta as u32) / Pow::pow(&psi, (delta - 1) as u32);
            beta = -lc * Pow::pow(&psi, new_delta as u32);
            delta = new_delta;
            rs.push(next);
        }
        let polys = rs
            .into_iter()
            .zip(negative)
            .map(|(r, neg)| if neg { r.into_iter().map(|c| -c).collect() } else { r })
            .collect();
        Ok(SturmChain { polys })
    }

    /// Whether the input was square-free: the last entry is a multiple of
    /// `gcd(p, p')`.
    pub fn is_squarefree(&self) -> bool {
        self.polys.last().is_some_and(|c| c.len() == 1)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> Vec<UPoly> {
        self.polys.iter().map(|c| UPoly::from_bigints(c)).collect()
    }

    /// Sign variations at `+inf` (`positive = true`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        let signs = self.polys.iter().map(|c| {
            let lc_neg = c.last().unwrap().is_negative();
            let odd = (c.len() - 1) % 2 == 1;
            lc_neg ^ (!positive && odd)
        });
        count_variations(signs)
    }

    /// Sign variations at a finite point; zero values are skipped.
    pub fn variations_at(&self, x: &num_rational::BigRational) -> usize {
        let signs = self.polys.iter().filter_map(|c| {
            let v = UPoly::from_bigints(c).eval(x);
            (!v.is_zero()).then(|| v.is_negative())
        });
        count_variations(signs)
    }
}

fn count_variations(signs: impl Iterator<Item = bool>) -> usize {
    let mut prev = None;
    let mut count = 0;
    for s in signs {
        if prev.is_some_and(|p| p != s) {
            count += 1;
        }
        prev = Some(s);
    }
    count
}

/// Number of distinct real roots of a square-free polynomial.
pub fn sturm_count(p: &UPoly) -> Result<usize, AlgebraError> {
    let chain = SturmChain::new(p)?;
    if !chain.is_squarefree() {
        return Err(AlgebraError::NotSquareFree);
    }
    Ok(chain.variations_at_infinity(false) - chain.variations_at_infinity(true))
}
