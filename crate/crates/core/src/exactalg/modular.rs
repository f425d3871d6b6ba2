//! Multi-modular elimination for zero-dimensional systems.
//!
//! The reduced graded reverse lex basis is computed modulo word-sized primes.
//! When the kept variable separates the points (its minimal polynomial on the
//! quotient has full degree) the ideal is in shape position,
//! `I = (e(t), x_v - g_v(t))`, and `e`, `g_v` are read off by linear algebra
//! over each prime field. The images are combined by the Chinese remainder
//! theorem and rational reconstruction until they stabilise, and the result is
//! then checked exactly: every input equation must vanish identically after
//! substituting `x_v = g_v(t)` modulo `e(t)`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::groebner::{insert, select_pair, to_internal, Lead, Mono, MonomialOrder, Pair};
use super::{AlgebraError, MPoly, Rational, UPoly, MAX_VARS};

/// Primes used before giving up on lifting.
const MAX_PRIMES: usize = 4000;

/// Verified shape-lemma form of a zero-dimensional ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeForm {
    /// Monic generator of the elimination ideal in the kept variable.
    pub eliminant: UPoly,
    /// Rational univariate representation: on the solutions,
    /// `x_v = numerators[v](t) / e'(t)` reduced modulo `e(t)`, where `t` is
    /// the kept variable and `e` the eliminant.
    pub numerators: Vec<UPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularElimination {
    /// Every prime tried gives the unit ideal.
    Unit,
    /// Some variable has no pure power among the leading monomials.
    NotZeroDimensional,
    /// Shape position, verified exactly over the rationals.
    Shape(ShapeForm),
    /// The kept variable does not separate the points (or the ideal is not
    /// radical). The eliminant is the lifted minimal polynomial of the kept
    /// variable and is not verified.
    NotShape {
        quotient_dimension: usize,
        eliminant: UPoly,
    },
}

/// Eliminate all variables but `keep` by multi-modular computation.
pub fn modular_eliminate(system: &[MPoly], keep: usize) -> Result<ModularElimination, AlgebraError> {
    let nvars = system.first().map(MPoly::nvars).unwrap_or(0);
    if nvars > MAX_VARS {
        return Err(AlgebraError::TooManyVariables(nvars));
    }
    if keep >= nvars {
        return Err(AlgebraError::VariableOutOfRange { index: keep, nvars });
    }
    for p in system {
        if p.nvars() != nvars {
            return Err(AlgebraError::ArityMismatch {
                left: nvars,
                right: p.nvars(),
            });
        }
    }
    let var_order: Vec<usize> = (0..nvars).filter(|&v| v != keep).chain([keep]).collect();
    let order = MonomialOrder::GrevLex;
    let mut inputs = Vec::new();
    for p in system {
        if let Some(t) = to_internal(p, &var_order, order)? {
            inputs.push(t);
        }
    }
    if inputs.is_empty() {
        return Ok(ModularElimination::NotZeroDimensional);
    }

    let mut lifter: Option<Lifter> = None;
    let mut pending: Option<(ImageKey, usize)> = None;
    let mut agreeing_trivial = 0;
    let mut last_trivial: Option<ImageKey> = None;
    for k in 0..MAX_PRIMES {
        let p = prime(k);
        // Skip primes dividing a leading coefficient: they change the leading terms.
        if inputs.iter().any(|f| (&f[0].1 % p).is_zero()) {
            continue;
        }
        let zp = Zp::new(p);
        let reduced: Vec<Vec<ModTerm>> = inputs
            .iter()
            .map(|f| {
                f.iter()
                    .filter_map(|(m, c)| {
                        let r = zp.from_bigint(c);
                        (r != 0).then_some((*m, r))
                    })
                    .collect()
            })
            .collect();
        let image = mod_image(zp, order, reduced, nvars);

        match image.key {
            ImageKey::Unit | ImageKey::NotZeroDimensional => {
                if last_trivial == Some(image.key) {
                    agreeing_trivial += 1;
                } else {
                    last_trivial = Some(image.key);
                    agreeing_trivial = 1;
                }
                if agreeing_trivial >= 2 && lifter.is_none() {
                    return Ok(match image.key {
                        ImageKey::Unit => ModularElimination::Unit,
                        _ => ModularElimination::NotZeroDimensional,
                    });
                }
                continue;
            }
            _ => {}
        }

        let l = lifter.get_or_insert_with(|| Lifter::new(image.key));
        if l.key != image.key {
            // Unlucky prime, or the first key was the unlucky one.
            match &mut pending {
                Some((key, count)) if *key == image.key => {
                    *count += 1;
                    if *count >= 3 {
                        *l = Lifter::new(image.key);
                        pending = None;
                    } else {
                        continue;
                    }
                }
                _ => {
                    pending = Some((image.key, 1));
                    continue;
                }
            }
        } else {
            pending = None;
        }
        let key = l.key;
        if let Some(candidate) = l.add(p, &image.coeffs) {
            match key {
                ImageKey::Shape { dim } => {
                    let shape = candidate.shape(dim, nvars, keep, &var_order);
                    if verify_shape(system, &shape) {
                        return Ok(ModularElimination::Shape(shape));
                    }
                    l.reject_candidate();
                }
                ImageKey::NotShape { dim, degree } => {
                    let mut coeffs = candidate.values[..degree].to_vec();
                    coeffs.push(Rational::one());
                    return Ok(ModularElimination::NotShape {
                        quotient_dimension: dim,
                        eliminant: UPoly::new(coeffs),
                    });
                }
                _ => unreachable!(),
            }
        }
    }
    Err(AlgebraError::LiftingFailed(MAX_PRIMES))
}

/// Plain arithmetic modulo an odd number below 2^62.
#[derive(Clone, Copy, Debug)]
struct Plain {
    p: u64,
}

impl Plain {
    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    fn from_bigint(self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
}

/// Montgomery arithmetic modulo a prime below 2^62. Values are kept in
/// Montgomery form `a * 2^64 mod p`.
#[derive(Clone, Copy, Debug)]
struct Zp {
    p: u64,
    /// `-p^-1 mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
    one: u64,
}

impl Zp {
    fn new(p: u64) -> Zp {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Zp {
            p,
            pinv: inv.wrapping_neg(),
            r2,
            one: r,
        }
    }

    #[inline]
    fn redc(self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.one;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    fn to_mont(self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn from_mont(self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn from_bigint(self, x: &BigInt) -> u64 {
        self.to_mont(Plain { p: self.p }.from_bigint(x))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let z = Plain { p: n };
    'outer: for &b in &BASES {
        let mut x = z.pow(b, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = z.mul(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The `k`-th prime below 2^62, counting down.
fn prime(k: usize) -> u64 {
    let mut primes = PRIMES.lock().unwrap_or_else(|e| e.into_inner());
    while primes.len() <= k {
        let mut c = primes.last().map_or((1u64 << 62) - 1, |&p| p - 2);
        while !is_prime(c) {
            c -= 2;
        }
        primes.push(c);
    }
    primes[k]
}

type ModTerm = (Mono, u64);

#[derive(Clone, Debug)]
struct ModPoly {
    terms: Vec<ModTerm>,
    sugar: u32,
}

impl Lead for ModPoly {
    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }
    fn sugar(&self) -> u32 {
        self.sugar
    }
}

/// `a - c * q * b`, inputs sorted decreasingly.
fn sub_mul(zp: Zp, order: MonomialOrder, a: &[ModTerm], c: u64, q: &Mono, b: &[ModTerm]) -> Vec<ModTerm> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let mb = b[j].0.mul(q);
        match order.cmp(&a[i].0, &mb) {
            std::cmp::Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((mb, zp.sub(0, zp.mul(c, b[j].1))));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = zp.sub(a[i].1, zp.mul(c, b[j].1));
                if v != 0 {
                    out.push((mb, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        out.push((t.0.mul(q), zp.sub(0, zp.mul(c, t.1))));
    }
    out
}

fn make_monic(zp: Zp, terms: &mut [ModTerm]) {
    if let Some(&(_, lc)) = terms.first() {
        if lc != zp.one {
            let inv = zp.inv(lc);
            for t in terms.iter_mut() {
                t.1 = zp.mul(t.1, inv);
            }
        }
    }
}

fn reduce_mod(zp: Zp, order: MonomialOrder, polys: &[ModPoly], active: &[usize], f: Vec<ModTerm>) -> Vec<ModTerm> {
    let mut p = f;
    let mut rem = Vec::new();
    let mut i = 0;
    while i < p.len() {
        let (m, c) = p[i];
        match active.iter().map(|&k| &polys[k]).find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m);
                p = sub_mul(zp, order, &p[i + 1..], c, &q, &g.terms[1..]);
                i = 0;
            }
            None => {
                rem.push(p[i]);
                i += 1;
            }
        }
    }
    rem
}

/// Reduced monic Gröbner basis modulo a prime, sorted by increasing leading monomial.
fn buchberger_mod(zp: Zp, order: MonomialOrder, mut inputs: Vec<Vec<ModTerm>>) -> Vec<ModPoly> {
    inputs.retain(|f| !f.is_empty());
    for f in inputs.iter_mut() {
        f.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    inputs.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut polys: Vec<ModPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let unit = |sugar| {
        vec![ModPoly {
            terms: vec![(Mono::ONE, zp.one)],
            sugar,
        }]
    };

    for f in inputs {
        let sugar = f.iter().map(|t| t.0.deg).max().unwrap();
        let mut terms = reduce_mod(zp, order, &polys, &active, f);
        if terms.is_empty() {
            continue;
        }
        if terms[0].0.deg == 0 {
            return unit(sugar);
        }
        make_monic(zp, &mut terms);
        insert(&mut polys, &mut active, &mut pairs, ModPoly { terms, sugar });
    }

    while let Some(idx) = select_pair(order, &pairs) {
        let pair = pairs.swap_remove(idx);
        let (gi, gj) = (&polys[pair.i], &polys[pair.j]);
        let mi = gi.lm().quotient_of(&pair.lcm);
        let mj = gj.lm().quotient_of(&pair.lcm);
        let left: Vec<ModTerm> = gi.terms[1..].iter().map(|(m, c)| (m.mul(&mi), *c)).collect();
        let s = sub_mul(zp, order, &left, zp.one, &mj, &gj.terms[1..]);
        if s.is_empty() {
            continue;
        }
        let mut terms = reduce_mod(zp, order, &polys, &active, s);
        if terms.is_empty() {
            continue;
        }
        if terms[0].0.deg == 0 {
            return unit(pair.sugar);
        }
        make_monic(zp, &mut terms);
        let sugar = pair.sugar.max(terms[0].0.deg);
        insert(&mut polys, &mut active, &mut pairs, ModPoly { terms, sugar });
    }

    let mut idx = active;
    idx.sort_by(|&a, &b| order.cmp(polys[a].lm(), polys[b].lm()));
    let mut out: Vec<ModPoly> = Vec::with_capacity(idx.len());
    for &g in &idx {
        let others: Vec<usize> = idx.iter().copied().filter(|&o| o != g).collect();
        let mut terms = vec![polys[g].terms[0]];
        terms.extend(reduce_mod(zp, order, &polys, &others, polys[g].terms[1..].to_vec()));
        out.push(ModPoly {
            terms,
            sugar: polys[g].sugar,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ImageKey {
    Unit,
    NotZeroDimensional,
    Shape { dim: usize },
    NotShape { dim: usize, degree: usize },
}

struct ModImage {
    key: ImageKey,
    /// Shape: eliminant coefficients below the leading one, then the
    /// coordinate polynomials of the non-kept variables in internal order.
    /// NotShape: the eliminant coefficients below the leading one.
    coeffs: Vec<u64>,
}

/// Incremental row echelon form over `Z/p` tracking how each row combines
/// the pushed vectors.
struct ModEchelon {
    zp: Zp,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    count: usize,
}

impl ModEchelon {
    fn new(zp: Zp) -> Self {
        ModEchelon {
            zp,
            rows: Vec::new(),
            count: 0,
        }
    }

    /// Reduce `v` by the rows; returns the residual and the combination of
    /// pushed vectors that was subtracted.
    fn reduce(&self, mut v: Vec<u64>, width: usize) -> (Vec<u64>, Vec<u64>) {
        let zp = self.zp;
        let mut comb = vec![0u64; width];
        for (pivot, row, rcomb) in &self.rows {
            let f = v[*pivot];
            if f == 0 {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = zp.sub(*x, zp.mul(f, *r));
            }
            for (x, r) in comb.iter_mut().zip(rcomb) {
                *x = zp.add(*x, zp.mul(f, *r));
            }
        }
        (v, comb)
    }

    /// Push the next Krylov vector; returns the monic dependency when it is
    /// in the span of the earlier ones.
    fn push(&mut self, v: Vec<u64>) -> Option<Vec<u64>> {
        let zp = self.zp;
        let k = self.count;
        self.count += 1;
        let (mut v, subtracted) = self.reduce(v, k + 1);
        // v_k - Σ subtracted_i v_i = residual
        let mut comb: Vec<u64> = subtracted.iter().map(|&c| zp.sub(0, c)).collect();
        comb[k] = zp.one;
        match v.iter().position(|&x| x != 0) {
            None => Some(comb),
            Some(pivot) => {
                let inv = zp.inv(v[pivot]);
                for x in v.iter_mut() {
                    *x = zp.mul(*x, inv);
                }
                for x in comb.iter_mut() {
                    *x = zp.mul(*x, inv);
                }
                self.rows.push((pivot, v, comb));
                for (_, _, c) in self.rows.iter_mut() {
                    c.resize(k + 1, 0);
                }
                None
            }
        }
    }
}

/// `a * b mod m` over `Z/p` for monic `m`; ascending coefficients, result of length `deg m`.
fn mulmod_monic(zp: Zp, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let d = m.len() - 1;
    let mut prod = vec![0u64; (a.len() + b.len()).max(d + 1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = zp.add(prod[i + j], zp.mul(x, y));
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for i in 0..d {
            prod[k - d + i] = zp.sub(prod[k - d + i], zp.mul(c, m[i]));
        }
        prod[k] = 0;
    }
    prod.truncate(d);
    prod
}

fn mod_image(zp: Zp, order: MonomialOrder, inputs: Vec<Vec<ModTerm>>, nvars: usize) -> ModImage {
    let gb = buchberger_mod(zp, order, inputs);
    if gb.iter().any(|g| g.lm().deg == 0) {
        return ModImage {
            key: ImageKey::Unit,
            coeffs: Vec::new(),
        };
    }
    let mut hit = vec![false; nvars];
    for g in &gb {
        if let Some(v) = g.lm().pure_power_of() {
            hit[v] = true;
        }
    }
    if !hit.iter().all(|&h| h) {
        return ModImage {
            key: ImageKey::NotZeroDimensional,
            coeffs: Vec::new(),
        };
    }

    // Standard monomials.
    let lms: Vec<Mono> = gb.iter().map(|g| *g.lm()).collect();
    let mut index: HashMap<Mono, usize> = HashMap::new();
    let mut stack = vec![Mono::ONE];
    while let Some(m) = stack.pop() {
        if index.contains_key(&m) || lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        index.insert(m, index.len());
        for v in 0..nvars {
            stack.push(m.mul(&Mono::var(v)));
        }
    }
    let dim = index.len();
    let all: Vec<usize> = (0..gb.len()).collect();
    let dense = |terms: &[ModTerm]| {
        let mut v = vec![0u64; dim];
        for (m, c) in terms {
            v[index[m]] = *c;
        }
        v
    };

    let t = Mono::var(nvars - 1);
    let mut echelon = ModEchelon::new(zp);
    let mut power: Vec<ModTerm> = vec![(Mono::ONE, zp.one)];
    let eliminant = loop {
        if let Some(dep) = echelon.push(dense(&power)) {
            break dep;
        }
        let shifted = power.iter().map(|(m, c)| (m.mul(&t), *c)).collect();
        power = reduce_mod(zp, order, &gb, &all, shifted);
    };
    let degree = eliminant.len() - 1;
    let mut coeffs: Vec<u64> = eliminant[..degree].to_vec();
    if degree < dim {
        return ModImage {
            key: ImageKey::NotShape { dim, degree },
            coeffs: coeffs.into_iter().map(|c| zp.from_mont(c)).collect(),
        };
    }
    // Each non-kept variable as g(t), stored as the numerator g(t) e'(t) mod e(t).
    let de: Vec<u64> = (1..=degree).map(|i| zp.mul(zp.to_mont(i as u64), eliminant[i])).collect();
    for v in 0..nvars - 1 {
        let nf = reduce_mod(zp, order, &gb, &all, vec![(Mono::var(v), zp.one)]);
        let (residual, comb) = echelon.reduce(dense(&nf), dim);
        debug_assert!(residual.iter().all(|&x| x == 0));
        coeffs.extend(mulmod_monic(zp, &comb, &de, &eliminant));
    }
    ModImage {
        key: ImageKey::Shape { dim },
        coeffs: coeffs.into_iter().map(|c| zp.from_mont(c)).collect(),
    }
}

/// Chinese remaindering of coefficient images with rational reconstruction.
/// A reconstruction is released once it also agrees with the next prime.
struct Lifter {
    key: ImageKey,
    residues: Vec<BigInt>,
    modulus: BigInt,
    primes_used: usize,
    next_attempt: usize,
    candidate: Option<Vec<Rational>>,
}

struct Candidate {
    values: Vec<Rational>,
}

impl Candidate {
    fn shape(&self, dim: usize, nvars: usize, keep: usize, var_order: &[usize]) -> ShapeForm {
        let mut e = self.values[..dim].to_vec();
        e.push(Rational::one());
        let eliminant = UPoly::new(e);
        let mut numerators = vec![UPoly::zero(); nvars];
        for k in 0..nvars - 1 {
            let c = self.values[dim * (k + 1)..dim * (k + 2)].to_vec();
            numerators[var_order[k]] = UPoly::new(c);
        }
        numerators[keep] = (&UPoly::x() * &eliminant.derivative()).div_rem(&eliminant).1;
        ShapeForm { eliminant, numerators }
    }
}

impl Lifter {
    fn new(key: ImageKey) -> Self {
        Lifter {
            key,
            residues: Vec::new(),
            modulus: BigInt::one(),
            primes_used: 0,
            next_attempt: 1,
            candidate: None,
        }
    }

    /// Add one image; returns a candidate when the reconstruction agrees with
    /// this image.
    fn add(&mut self, p: u64, image: &[u64]) -> Option<Candidate> {
        let zp = Plain { p };
        if let Some(c) = self.candidate.take() {
            let agrees = c.iter().zip(image).all(|(q, &r)| {
                let d = zp.from_bigint(q.denom());
                d != 0 && zp.mul(zp.from_bigint(q.numer()), zp.inv(d)) == r
            });
            if agrees {
                return Some(Candidate { values: c });
            }
        }
        if self.residues.is_empty() {
            self.residues = image.iter().map(|&r| BigInt::from(r)).collect();
            self.modulus = BigInt::from(p);
        } else {
            let m_inv = zp.inv(zp.from_bigint(&self.modulus));
            for (x, &r) in self.residues.iter_mut().zip(image) {
                let t = zp.mul(zp.sub(r, zp.from_bigint(x)), m_inv);
                *x += &self.modulus * BigInt::from(t);
            }
            self.modulus *= BigInt::from(p);
        }
        self.primes_used += 1;
        if self.primes_used >= self.next_attempt {
            self.next_attempt = self.primes_used + 1 + self.primes_used / 8;
            self.candidate = reconstruct_all(&self.residues, &self.modulus);
        }
        None
    }

    fn reject_candidate(&mut self) {
        self.candidate = None;
    }
}

/// Reconstruct every residue, carrying the denominators found so far: most
/// coefficients share a denominator, and then only a multiplication is needed.
/// Reconstruction starts from the end, where the largest coefficients sit.
fn reconstruct_all(residues: &[BigInt], m: &BigInt) -> Option<Vec<Rational>> {
    let bound = (m / 2u32).sqrt();
    let half = m / 2u32;
    let mut den = BigInt::one();
    let mut out = vec![Rational::zero(); residues.len()];
    for (i, a) in residues.iter().enumerate().rev() {
        let mut b = (a * &den).mod_floor(m);
        if b > half {
            b -= m;
        }
        if b.abs() <= bound {
            out[i] = Rational::new(b, den.clone());
            continue;
        }
        let q = rational_reconstruction(&b, m)?;
        out[i] = &q / Rational::from_integer(den.clone());
        den *= q.denom();
        if den > bound {
            return None;
        }
    }
    Some(out)
}

/// The fraction `n/d` with `|n|, d <= sqrt(m/2)` congruent to `a` mod `m`.
fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// Exact check that each equation vanishes on the parametrisation: with
/// `x_v = h_v / e'`, the homogenised `e'^deg(f) f(h / e')` must be divisible
/// by `e`. Runs over the integers after clearing denominators.
fn verify_shape(system: &[MPoly], shape: &ShapeForm) -> bool {
    let e = &shape.eliminant;
    if e.degree().unwrap_or(0) == 0 {
        return false;
    }
    let nvars = shape.numerators.len();
    // bases[v] = L h_v for v < nvars, bases[nvars] = L e', with one common L
    let de = e.derivative();
    let rationals: Vec<&UPoly> = shape.numerators.iter().chain([&de]).collect();
    let lcm = rationals
        .iter()
        .flat_map(|p| p.coeffs())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let bases: Vec<Vec<BigInt>> = rationals
        .iter()
        .map(|p| p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
        .collect();
    let modulus = e.primitive_integer_coeffs();

    let mut powers: HashMap<(usize, u32), Vec<BigInt>> = HashMap::new();
    let mut power = |v: usize, k: u32| -> Vec<BigInt> {
        if let Some(p) = powers.get(&(v, k)) {
            return p.clone();
        }
        let mut acc = vec![BigInt::one()];
        for _ in 0..k {
            acc = int_mul(&acc, &bases[v]);
        }
        powers.insert((v, k), acc.clone());
        acc
    };
    for f in system {
        let Some(total_degree) = f.total_degree() else {
            continue;
        };
        let mut total: Vec<BigInt> = Vec::new();
        for (m, c) in f.primitive_part().terms() {
            let exps = m.exponents();
            let homogenising = total_degree - exps.iter().sum::<u32>();
            let mut term = vec![c.numer().clone()];
            for (v, k) in exps.iter().copied().enumerate().chain([(nvars, homogenising)]) {
                if k > 0 {
                    term = int_mul(&term, &power(v, k));
                }
            }
            if total.len() < term.len() {
                total.resize(term.len(), BigInt::zero());
            }
            for (t, x) in total.iter_mut().zip(term) {
                *t += x;
            }
        }
        if !divides_exactly(&modulus, total) {
            return false;
        }
    }
    true
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Whether the primitive integer polynomial `d` divides `f` in `Q[t]`
/// (equivalently in `Z[t]`, by Gauss's lemma).
fn divides_exactly(d: &[BigInt], mut f: Vec<BigInt>) -> bool {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    let dd = d.len() - 1;
    let lc = &d[dd];
    while f.len() > dd {
        let k = f.len() - 1;
        let (q, r) = f[k].div_rem(lc);
        if !r.is_zero() {
            return false;
        }
        for (i, c) in d.iter().enumerate() {
            f[k - dd + i] -= &q * c;
        }
        debug_assert!(f[k].is_zero());
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
    }
    f.is_empty()
}
