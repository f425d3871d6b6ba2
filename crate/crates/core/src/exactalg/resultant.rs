use super::{AlgebraError, MPoly};

/// Univariate view: coefficient `k` multiplies `var^k`, coefficients free of `var`.
type Coeffs = Vec<MPoly>;

fn degree(p: &Coeffs) -> Option<usize> {
    p.len().checked_sub(1)
}

fn trim(mut p: Coeffs) -> Coeffs {
    while p.last().is_some_and(MPoly::is_zero) {
        p.pop();
    }
    p
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_remainder(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut rem = a.clone();
    if rem.len() <= db {
        return rem;
    }
    for k in (0..rem.len() - db).rev() {
        let top = rem[k + db].clone();
        for c in rem.iter_mut() {
            *c = &*c * lc;
        }
        if !top.is_zero() {
            for (j, d) in b.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&top * d);
            }
        }
        rem.truncate(k + db);
    }
    trim(rem)
}

fn exact(p: &MPoly, d: &MPoly) -> MPoly {
    p.exact_div(d)
        .expect("subresultant division is exact over an integral domain")
}

/// Resultant of `p` and `q` with respect to `x_var`, via the subresultant
/// remainder sequence.
///
/// The sign follows the Sylvester matrix whose rows hold coefficients in
/// ascending powers of `x_var`; this is `(-1)^(deg p * deg q)` times the
/// descending-row convention. `res(x - a, x - b) = b - a`.
pub fn resultant(p: &MPoly, q: &MPoly, var: usize) -> Result<MPoly, AlgebraError> {
    p.check_arity(q)?;
    if var >= p.nvars() {
        return Err(AlgebraError::VariableOutOfRange {
            index: var,
            nvars: p.nvars(),
        });
    }
    let nvars = p.nvars();
    let mut a = trim(p.coefficients_in(var));
    let mut b = trim(q.coefficients_in(var));
    let (m, n) = match (degree(&a), degree(&b)) {
        (Some(m), Some(n)) if m > 0 && n > 0 => (m, n),
        _ => return Err(AlgebraError::ZeroDegreeInVariable(var)),
    };
    let mut negate = (m * n) % 2 == 1;
    if m < n {
        std::mem::swap(&mut a, &mut b);
        if (m * n) % 2 == 1 {
            negate = !negate;
        }
    }
    let mut g = MPoly::one(nvars);
    let mut h = MPoly::one(nvars);
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_remainder(&a, &b);
        a = b;
        if r.is_empty() {
            return Ok(MPoly::zero(nvars));
        }
        let divisor = &g * &h.pow(delta as u32);
        b = r.iter().map(|c| exact(c, &divisor)).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            exact(&g.pow(delta as u32), &h.pow(delta as u32 - 1))
        };
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = &b[0];
            let res = exact(&lb.pow(da as u32), &h.pow(da as u32 - 1));
            return Ok(if negate { -res } else { res });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eliminates_square_root() {
        // res(x^2 - 2, y - x; x) = y^2 - 2
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = &(&x * &x) - &MPoly::from_int(2, 2);
        let q = &y - &x;
        assert_eq!(resultant(&p, &q, 0).unwrap(), &(&y * &y) - &MPoly::from_int(2, 2));
    }

    #[test]
    fn common_root_gives_zero() {
        let x = MPoly::var(1, 0);
        let p = &x - &MPoly::from_int(1, 3);
        assert!(resultant(&p, &p, 0).unwrap().is_zero());
    }

    #[test]
    fn linear_sign_convention() {
        let x = MPoly::var(3, 0);
        let a = MPoly::var(3, 1);
        let b = MPoly::var(3, 2);
        assert_eq!(resultant(&(&x - &a), &(&x - &b), 0).unwrap(), &b - &a);
    }

    #[test]
    fn constant_in_variable_is_rejected() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        assert_eq!(resultant(&x, &y, 0), Err(AlgebraError::ZeroDegreeInVariable(0)));
    }
}
