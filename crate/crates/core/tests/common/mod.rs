//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use monosec::exactalg::{Rational, UPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Laplace expansion along the first row.
pub fn cofactor_det<T: Clone>(m: &[Vec<T>], zero: T, mul: &dyn Fn(&T, &T) -> T, add: &dyn Fn(&T, &T, bool) -> T) -> T {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = zero.clone();
    for col in 0..m.len() {
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| v.clone()).collect())
            .collect();
        let sub = cofactor_det(&minor, zero.clone(), mul, add);
        acc = add(&acc, &mul(&m[0][col], &sub), col % 2 == 1);
    }
    acc
}

pub fn rational_cofactor(m: &[Vec<Rational>]) -> Rational {
    cofactor_det(m, Rational::zero(), &|a, b| a * b, &|a, b, neg| if neg { a - b } else { a + b })
}

/// `scale · Π (x − r/2) · Π (x² + bx + b²/4 + c)` with every `c > 0`; the
/// quadratics have no real roots.
pub fn constructed_polynomial(half_roots: &[i64], quads: &[(i64, i64)], scale: i64) -> UPoly {
    let mut p = UPoly::constant(q(scale, 1));
    for r in half_roots {
        p = &p * &UPoly::linear_root(q(*r, 2));
    }
    for (b, c) in quads {
        let constant = q(b * b, 4) + q(*c, 1);
        p = &p * &UPoly::new(vec![constant, q(*b, 1), Rational::one()]);
    }
    p
}

/// Fujiwara's bound `2 max |a_{n−k}/a_n|^{1/k}` on the absolute value of
/// every root, rounded up to an integer.
pub fn root_bound(p: &UPoly) -> BigInt {
    let coeffs = p.coeffs();
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let mut best = BigInt::one();
    for k in 1..=n {
        let ratio = coeffs[n - k].abs() / &lead;
        let mut b = ratio.to_integer().abs().nth_root(k as u32);
        while Rational::from_integer(b.pow(k as u32)) < ratio {
            b += 1;
        }
        best = best.max(b);
    }
    best * 2
}

/// Sign changes of exact values at `cells + 1` equally spaced points of
/// `[lo, hi]`; points where `p` vanishes are skipped.
pub fn sign_changes(p: &UPoly, lo: &Rational, hi: &Rational, cells: i64) -> usize {
    let width = (hi - lo) / Rational::from_integer(cells.into());
    let mut changes = 0;
    let mut prev: Option<bool> = None;
    for i in 0..=cells {
        let v = p.eval(&(lo + &width * Rational::from_integer(i.into())));
        if v.is_zero() {
            continue;
        }
        if prev.is_some_and(|s| s != v.is_positive()) {
            changes += 1;
        }
        prev = Some(v.is_positive());
    }
    changes
}

/// Roots of a constructed polynomial lie on multiples of 1/2, so a grid of
/// odd multiples of 1/8 separates them and never hits one.
pub fn half_grid_count(p: &UPoly) -> usize {
    let b = Rational::from_integer(root_bound(p)) + q(1, 8);
    let cells = (&b * Rational::from_integer(8.into())).to_integer();
    let cells: i64 = cells.to_string().parse().unwrap();
    sign_changes(p, &-b.clone(), &b, cells)
}

/// Distinct real roots seen on grids of `64 · 2^k` cells over the root
/// bound, refined until all `deg p` are seen or `2^16` cells are reached.
pub fn refining_grid_count(p: &UPoly) -> usize {
    let b = Rational::from_integer(root_bound(p));
    let mut cells = 64;
    let mut seen = sign_changes(p, &-b.clone(), &b, cells);
    while seen < p.degree().unwrap() && cells < 1 << 16 {
        cells *= 2;
        seen = sign_changes(p, &-b.clone(), &b, cells);
    }
    seen
}

/// Standard Young tableaux of an `a × b` rectangle.
pub fn hook_length_count(a: usize, b: usize) -> u128 {
    let mut num: u128 = (1..=(a * b) as u128).product();
    for i in 0..a {
        for j in 0..b {
            num /= ((a - 1 - i) + (b - 1 - j) + 1) as u128;
        }
    }
    num
}
