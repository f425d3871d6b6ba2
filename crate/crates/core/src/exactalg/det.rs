use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{AlgebraError, MPoly, Rational};

/// Determinant of a square matrix of polynomials.
///
/// Purely numeric matrices go through Bareiss elimination. Otherwise the
/// determinant is expanded by minors along the rows from the top, with the
/// minors of the trailing rows memoised by their column set.
pub fn mat_det(m: &[Vec<MPoly>]) -> Result<MPoly, AlgebraError> {
    let n = m.len();
    let nvars = check_square(m)?;
    if n == 0 {
        return Ok(MPoly::one(nvars));
    }
    if let Some(numeric) = as_numeric(m) {
        return Ok(MPoly::constant(nvars, det_rational(&numeric)?));
    }
    if n > 24 {
        return Err(AlgebraError::MatrixTooLarge(n));
    }
    // minors[mask] = det of the last popcount(mask) rows restricted to the columns in mask.
    let mut minors: HashMap<u32, MPoly> = HashMap::new();
    minors.insert(0, MPoly::one(nvars));
    let mut level: Vec<u32> = vec![0];
    for row in (0..n).rev() {
        let mut next: HashMap<u32, MPoly> = HashMap::new();
        for &mask in &level {
            let sub = &minors[&mask];
            if sub.is_zero() {
                continue;
            }
            for col in 0..n {
                let bit = 1u32 << col;
                if mask & bit != 0 || m[row][col].is_zero() {
                    continue;
                }
                let grown = mask | bit;
                // sign of moving `col` to the front of the sorted column set
                let before = (mask & (bit - 1)).count_ones();
                let term = &m[row][col] * sub;
                let entry = next.entry(grown).or_insert_with(|| MPoly::zero(nvars));
                *entry = if before % 2 == 0 { &*entry + &term } else { &*entry - &term };
            }
        }
        level = next.keys().copied().collect();
        level.sort_unstable();
        minors = next;
    }
    Ok(minors
        .remove(&((1u32 << n) - 1))
        .unwrap_or_else(|| MPoly::zero(nvars)))
}

fn check_square(m: &[Vec<MPoly>]) -> Result<usize, AlgebraError> {
    let n = m.len();
    let mut nvars = None;
    for row in m {
        if row.len() != n {
            return Err(AlgebraError::NotSquare {
                rows: n,
                cols: row.len(),
            });
        }
        for e in row {
            match nvars {
                None => nvars = Some(e.nvars()),
                Some(v) if v != e.nvars() => {
                    return Err(AlgebraError::ArityMismatch {
                        left: v,
                        right: e.nvars(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(nvars.unwrap_or(0))
}

fn as_numeric(m: &[Vec<MPoly>]) -> Option<Vec<Vec<Rational>>> {
    m.iter()
        .map(|row| row.iter().map(MPoly::as_constant).collect())
        .collect()
}

/// Fraction-free (Bareiss) determinant of a rational matrix.
pub fn det_rational(m: &[Vec<Rational>]) -> Result<Rational, AlgebraError> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(AlgebraError::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut sign_neg = false;
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_neg { -d } else { d })
}
