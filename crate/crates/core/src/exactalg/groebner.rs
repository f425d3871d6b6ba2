//! Buchberger's algorithm over the rationals.
//!
//! Polynomials are kept internally as primitive integer polynomials (the
//! ideal is unchanged by rescaling generators), which avoids rational
//! arithmetic in the inner loop. Pairs are selected by the sugar strategy and
//! pruned with Buchberger's product and chain criteria in the Gebauer–Möller
//! formulation.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, MPoly, Monomial, Rational, UPoly};

/// Largest number of variables the packed monomial representation supports.
pub const MAX_VARS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Pure lexicographic, first variable largest.
    Lex,
    /// Graded reverse lexicographic, last variable smallest.
    GrevLex,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(super) struct Mono {
    pub(super) e: [u16; MAX_VARS],
    pub(super) deg: u32,
    pub(super) mask: u32,
}

impl std::fmt::Debug for Mono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", &self.e[..])
    }
}

impl Mono {
    pub(super) const ONE: Mono = Mono {
        e: [0; MAX_VARS],
        deg: 0,
        mask: 0,
    };

    pub(super) fn from_exps(exps: impl Iterator<Item = u32>) -> Result<Mono, AlgebraError> {
        let mut m = Mono::ONE;
        for (v, x) in exps.enumerate() {
            let x16 = u16::try_from(x).map_err(|_| AlgebraError::ExponentOverflow)?;
            m.e[v] = x16;
            m.deg += x;
            if x > 0 {
                m.mask |= 1 << v;
            }
        }
        Ok(m)
    }

    pub(super) fn var(v: usize) -> Mono {
        let mut m = Mono::ONE;
        m.e[v] = 1;
        m.deg = 1;
        m.mask = 1 << v;
        m
    }

    #[inline]
    pub(super) fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for v in 0..MAX_VARS {
            m.e[v] += o.e[v];
        }
        m.deg += o.deg;
        m.mask |= o.mask;
        m
    }

    #[inline]
    pub(super) fn divides(&self, o: &Mono) -> bool {
        if self.mask & !o.mask != 0 || self.deg > o.deg {
            return false;
        }
        (0..MAX_VARS).all(|v| self.e[v] <= o.e[v])
    }

    /// `o / self`; caller guarantees divisibility.
    #[inline]
    pub(super) fn quotient_of(&self, o: &Mono) -> Mono {
        let mut m = Mono::ONE;
        for v in 0..MAX_VARS {
            m.e[v] = o.e[v] - self.e[v];
            if m.e[v] > 0 {
                m.mask |= 1 << v;
            }
        }
        m.deg = o.deg - self.deg;
        m
    }

    pub(super) fn lcm(&self, o: &Mono) -> Mono {
        let mut m = Mono::ONE;
        for v in 0..MAX_VARS {
            m.e[v] = self.e[v].max(o.e[v]);
            m.deg += m.e[v] as u32;
        }
        m.mask = self.mask | o.mask;
        m
    }

    pub(super) fn coprime(&self, o: &Mono) -> bool {
        self.mask & o.mask == 0
    }

    /// Exponent of variable `v` when every other exponent is zero.
    pub(super) fn pure_power_of(&self) -> Option<usize> {
        (self.mask.count_ones() == 1).then(|| self.mask.trailing_zeros() as usize)
    }
}

impl MonomialOrder {
    #[inline]
    pub(super) fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonomialOrder::Lex => a.e.cmp(&b.e),
            MonomialOrder::GrevLex => a.deg.cmp(&b.deg).then_with(|| {
                for v in (0..MAX_VARS).rev() {
                    if a.e[v] != b.e[v] {
                        return b.e[v].cmp(&a.e[v]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

pub(super) type Term = (Mono, BigInt);

/// `a * ma * p - b * mb * q`, inputs sorted decreasingly.
fn lincomb(
    order: MonomialOrder,
    a: &BigInt,
    ma: &Mono,
    p: &[Term],
    b: &BigInt,
    mb: &Mono,
    q: &[Term],
) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let (mut i, mut j) = (0, 0);
    let mut next_p = p.first().map(|t| t.0.mul(ma));
    let mut next_q = q.first().map(|t| t.0.mul(mb));
    loop {
        match (next_p, next_q) {
            (None, None) => break,
            (Some(mp), None) => {
                out.push((mp, a * &p[i].1));
                i += 1;
                next_p = p.get(i).map(|t| t.0.mul(ma));
            }
            (None, Some(mq)) => {
                out.push((mq, -(b * &q[j].1)));
                j += 1;
                next_q = q.get(j).map(|t| t.0.mul(mb));
            }
            (Some(mp), Some(mq)) => match order.cmp(&mp, &mq) {
                Ordering::Greater => {
                    out.push((mp, a * &p[i].1));
                    i += 1;
                    next_p = p.get(i).map(|t| t.0.mul(ma));
                }
                Ordering::Less => {
                    out.push((mq, -(b * &q[j].1)));
                    j += 1;
                    next_q = q.get(j).map(|t| t.0.mul(mb));
                }
                Ordering::Equal => {
                    let c = a * &p[i].1 - b * &q[j].1;
                    if !c.is_zero() {
                        out.push((mp, c));
                    }
                    i += 1;
                    j += 1;
                    next_p = p.get(i).map(|t| t.0.mul(ma));
                    next_q = q.get(j).map(|t| t.0.mul(mb));
                }
            },
        }
    }
    out
}

fn content(terms: &[Term]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in terms {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divide by the content and make the leading coefficient positive.
fn make_primitive(terms: &mut [Term]) {
    let mut g = content(terms);
    if g.is_zero() {
        return;
    }
    if terms[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for t in terms.iter_mut() {
            t.1 /= &g;
        }
    }
}

/// Access to what pair management needs from a basis element.
pub(super) trait Lead {
    fn lm(&self) -> &Mono;
    fn sugar(&self) -> u32;
}

#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<Term>,
    sugar: u32,
}

impl Lead for GPoly {
    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }
    fn sugar(&self) -> u32 {
        self.sugar
    }
}

impl GPoly {
    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }
}

#[derive(Clone, Debug)]
pub(super) struct Pair {
    pub(super) i: usize,
    pub(super) j: usize,
    pub(super) lcm: Mono,
    pub(super) sugar: u32,
}

/// Integer polynomial with the rational factor relating it to the intended value:
/// `value = terms / scale`.
struct Scaled {
    terms: Vec<Term>,
    scale: Rational,
}

struct Reducer<'a> {
    order: MonomialOrder,
    polys: &'a [GPoly],
    active: Cow<'a, [usize]>,
}

impl Reducer<'_> {
    fn find_divisor(&self, m: &Mono) -> Option<&GPoly> {
        self.active
            .iter()
            .map(|&k| &self.polys[k])
            .find(|g| g.lm().divides(m))
    }

    /// Full reduction. Returns `(r, mult)` with `mult * f ≡ r` modulo the active set.
    fn reduce(&self, f: Vec<Term>, full: bool) -> Scaled {
        let mut p = f;
        let mut rem: Vec<Term> = Vec::new();
        let mut mult = Rational::one();
        let mut i = 0;
        let mut steps = 0u32;
        while i < p.len() {
            if !full && !rem.is_empty() {
                rem.extend(p.drain(i..));
                break;
            }
            let found = self.find_divisor(&p[i].0);
            match found {
                Some(g) => {
                    let q = g.lm().quotient_of(&p[i].0);
                    let d = p[i].1.gcd(g.lc());
                    let mut a = g.lc() / &d;
                    let mut b = &p[i].1 / &d;
                    if a.is_negative() {
                        a = -a;
                        b = -b;
                    }
                    p = lincomb(
                        self.order,
                        &a,
                        &Mono::ONE,
                        &p[i + 1..],
                        &b,
                        &q,
                        &g.terms[1..],
                    );
                    i = 0;
                    if !a.is_one() {
                        for t in rem.iter_mut() {
                            t.1 *= &a;
                        }
                        mult *= Rational::from_integer(a);
                    }
                    steps += 1;
                    if steps % 8 == 0 {
                        let c = content(&p).gcd(&content(&rem));
                        if !c.is_zero() && !c.is_one() {
                            for t in p.iter_mut().chain(rem.iter_mut()) {
                                t.1 /= &c;
                            }
                            mult /= Rational::from_integer(c);
                        }
                    }
                }
                None => {
                    rem.push(p[i].clone());
                    i += 1;
                }
            }
        }
        let c = content(&rem);
        if !c.is_zero() && !c.is_one() {
            for t in rem.iter_mut() {
                t.1 /= &c;
            }
            mult /= Rational::from_integer(c);
        }
        Scaled {
            terms: rem,
            scale: mult,
        }
    }
}

/// A Gröbner basis together with the ordering data needed to use it.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    /// `var_order[k]` is the caller's index of internal variable `k`.
    var_order: Vec<usize>,
    polys: Vec<GPoly>,
}

impl GroebnerBasis {
    /// Compute a reduced Gröbner basis. `var_order` lists the variables from
    /// largest to smallest.
    pub fn compute(
        system: &[MPoly],
        order: MonomialOrder,
        var_order: &[usize],
    ) -> Result<GroebnerBasis, AlgebraError> {
        let nvars = system.first().map(MPoly::nvars).unwrap_or(var_order.len());
        if nvars > MAX_VARS {
            return Err(AlgebraError::TooManyVariables(nvars));
        }
        let mut seen = vec![false; nvars];
        if var_order.len() != nvars || var_order.iter().any(|&v| v >= nvars || std::mem::replace(&mut seen[v], true)) {
            return Err(AlgebraError::BadVariableOrder);
        }
        for p in system {
            if p.nvars() != nvars {
                return Err(AlgebraError::ArityMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
        }
        let mut inputs = Vec::new();
        for p in system {
            if let Some(t) = to_internal(p, var_order, order)? {
                inputs.push(t);
            }
        }
        let polys = buchberger(order, inputs);
        Ok(GroebnerBasis {
            nvars,
            order,
            var_order: var_order.to_vec(),
            polys,
        })
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Basis elements as monic rational polynomials, sorted by increasing leading monomial.
    pub fn polys(&self) -> Vec<MPoly> {
        self.polys.iter().map(|g| self.to_external(&g.terms, true)).collect()
    }

    /// Whether the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|g| g.lm().deg == 0)
    }

    /// Whether every variable has a pure power among the leading monomials.
    pub fn is_zero_dimensional(&self) -> bool {
        let mut hit = vec![false; self.nvars];
        for g in &self.polys {
            if g.lm().deg == 0 {
                return true;
            }
            if let Some(v) = g.lm().pure_power_of() {
                hit[v] = true;
            }
        }
        hit.iter().all(|&h| h)
    }

    /// Number of standard monomials, for a zero-dimensional ideal.
    pub fn quotient_dimension(&self) -> Option<usize> {
        if !self.is_zero_dimensional() {
            return None;
        }
        if self.is_unit() {
            return Some(0);
        }
        let lms: Vec<Mono> = self.polys.iter().map(|g| *g.lm()).collect();
        let mut count = 0;
        let mut stack = vec![Mono::ONE];
        let mut seen = std::collections::HashSet::new();
        while let Some(m) = stack.pop() {
            if !seen.insert(m) || lms.iter().any(|l| l.divides(&m)) {
                continue;
            }
            count += 1;
            for v in 0..self.nvars {
                stack.push(m.mul(&Mono::var(v)));
            }
        }
        Some(count)
    }

    /// Normal form of `f` with respect to the basis.
    pub fn normal_form(&self, f: &MPoly) -> Result<MPoly, AlgebraError> {
        let Some(terms) = to_internal(f, &self.var_order, self.order)? else {
            return Ok(MPoly::zero(self.nvars));
        };
        let primitive_scale = primitive_scale(f);
        let r = self.reducer().reduce(terms, true);
        let poly = self.to_external(&r.terms, false);
        // f = terms / primitive_scale and r = mult * terms (mod I)
        Ok(poly.scale(&(r.scale * primitive_scale).recip()))
    }

    /// Generator of the elimination ideal `I ∩ Q[x_var]`, monic.
    ///
    /// Computed as the minimal polynomial of multiplication by `x_var` on the
    /// quotient ring. Returns `None` when the ideal is not zero-dimensional.
    /// The unit ideal yields the constant `1`.
    pub fn eliminant(&self, var: usize) -> Result<Option<UPoly>, AlgebraError> {
        if var >= self.nvars {
            return Err(AlgebraError::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        if self.is_unit() {
            return Ok(Some(UPoly::one()));
        }
        if !self.is_zero_dimensional() {
            return Ok(None);
        }
        let internal = self.var_order.iter().position(|&v| v == var).unwrap();
        let x = Mono::var(internal);
        let reducer = self.reducer();
        let mut echelon = KrylovEchelon::default();
        // current power x^k as an integer polynomial `w` with x^k ≡ w / scale
        let mut w: Vec<Term> = vec![(Mono::ONE, BigInt::one())];
        let mut scale = Rational::one();
        loop {
            let vector: BTreeMap<Mono, Rational> = w
                .iter()
                .map(|(m, c)| (*m, Rational::from_integer(c.clone()) / &scale))
                .collect();
            if let Some(coeffs) = echelon.push(vector) {
                return Ok(Some(UPoly::new(coeffs).monic()));
            }
            let shifted: Vec<Term> = w.iter().map(|(m, c)| (m.mul(&x), c.clone())).collect();
            let r = reducer.reduce(shifted, true);
            scale *= r.scale;
            w = r.terms;
        }
    }

    fn reducer(&self) -> Reducer<'_> {
        Reducer {
            order: self.order,
            polys: &self.polys,
            active: Cow::Owned((0..self.polys.len()).collect()),
        }
    }

    fn to_external(&self, terms: &[Term], monic: bool) -> MPoly {
        let lc = if monic && !terms.is_empty() {
            terms[0].1.clone()
        } else {
            BigInt::one()
        };
        MPoly::from_terms(
            self.nvars,
            terms.iter().map(|(m, c)| {
                let mut exps = vec![0u32; self.nvars];
                for (k, &v) in self.var_order.iter().enumerate() {
                    exps[v] = m.e[k] as u32;
                }
                (Monomial::from_exponents(exps), Rational::new(c.clone(), lc.clone()))
            }),
        )
    }
}

/// Incremental Gaussian elimination detecting the first linear dependency
/// among pushed vectors.
#[derive(Default)]
struct KrylovEchelon {
    rows: Vec<(Mono, BTreeMap<Mono, Rational>, Vec<Rational>)>,
    count: usize,
}

impl KrylovEchelon {
    /// Returns the dependency coefficients (index = vector position) once the
    /// new vector is in the span of the previous ones.
    fn push(&mut self, mut v: BTreeMap<Mono, Rational>) -> Option<Vec<Rational>> {
        let k = self.count;
        self.count += 1;
        let mut comb = vec![Rational::zero(); k + 1];
        comb[k] = Rational::one();
        for (pivot, row, rcomb) in &self.rows {
            let Some(coef) = v.get(pivot).cloned() else {
                continue;
            };
            let factor = coef / &row[pivot];
            for (m, c) in row {
                let e = v.entry(*m).or_insert_with(Rational::zero);
                *e -= &factor * c;
                if e.is_zero() {
                    v.remove(m);
                }
            }
            for (i, c) in rcomb.iter().enumerate() {
                comb[i] -= &factor * c;
            }
        }
        match v.keys().next().copied() {
            None => Some(comb),
            Some(pivot) => {
                self.rows.push((pivot, v, comb));
                None
            }
        }
    }
}

pub(super) fn to_internal(
    p: &MPoly,
    var_order: &[usize],
    order: MonomialOrder,
) -> Result<Option<Vec<Term>>, AlgebraError> {
    if p.is_zero() {
        return Ok(None);
    }
    let pp = p.primitive_part();
    let mut terms = Vec::with_capacity(pp.num_terms());
    for (m, c) in pp.terms() {
        let e = m.exponents();
        let mono = Mono::from_exps(var_order.iter().map(|&v| e[v]))?;
        debug_assert!(c.is_integer());
        terms.push((mono, c.numer().clone()));
    }
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    Ok(Some(terms))
}

/// The positive rational `s` with `s * p` equal to the primitive image of `p`.
fn primitive_scale(p: &MPoly) -> Rational {
    let pp = p.primitive_part();
    match pp.leading_term() {
        Some((m, c)) => c / p.coefficient(m),
        None => Rational::one(),
    }
}

fn buchberger(order: MonomialOrder, mut inputs: Vec<Vec<Term>>) -> Vec<GPoly> {
    inputs.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut polys: Vec<GPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for f in inputs {
        let sugar = f.iter().map(|t| t.0.deg).max().unwrap();
        let r = Reducer {
            order,
            polys: &polys,
            active: Cow::Borrowed(&active),
        }
        .reduce(f, true);
        if r.terms.is_empty() {
            continue;
        }
        let mut terms = r.terms;
        make_primitive(&mut terms);
        insert(&mut polys, &mut active, &mut pairs, GPoly { terms, sugar });
        if polys[*active.last().unwrap()].lm().deg == 0 {
            return unit_basis(&polys, &active);
        }
    }

    while let Some(idx) = select_pair(order, &pairs) {
        let pair = pairs.swap_remove(idx);
        let (gi, gj) = (&polys[pair.i], &polys[pair.j]);
        let mi = gi.lm().quotient_of(&pair.lcm);
        let mj = gj.lm().quotient_of(&pair.lcm);
        let d = gi.lc().gcd(gj.lc());
        let a = gj.lc() / &d;
        let b = gi.lc() / &d;
        let s = lincomb(order, &a, &mi, &gi.terms[1..], &b, &mj, &gj.terms[1..]);
        if s.is_empty() {
            continue;
        }
        let r = Reducer {
            order,
            polys: &polys,
            active: Cow::Borrowed(&active),
        }
        .reduce(s, true);
        if r.terms.is_empty() {
            continue;
        }
        let mut terms = r.terms;
        make_primitive(&mut terms);
        let sugar = pair.sugar.max(terms[0].0.deg);
        insert(&mut polys, &mut active, &mut pairs, GPoly { terms, sugar });
        if polys[*active.last().unwrap()].lm().deg == 0 {
            return unit_basis(&polys, &active);
        }
    }

    interreduce(order, &polys, &active)
}

fn unit_basis(polys: &[GPoly], active: &[usize]) -> Vec<GPoly> {
    let g = &polys[*active.last().unwrap()];
    vec![GPoly {
        terms: vec![(Mono::ONE, BigInt::one())],
        sugar: g.sugar,
    }]
}

pub(super) fn select_pair(order: MonomialOrder, pairs: &[Pair]) -> Option<usize> {
    pairs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.sugar
                .cmp(&b.sugar)
                .then_with(|| order.cmp(&a.lcm, &b.lcm))
        })
        .map(|(k, _)| k)
}

/// Gebauer–Möller update: add `h` to the basis, creating and pruning pairs.
pub(super) fn insert<P: Lead>(
    polys: &mut Vec<P>,
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: P,
) {
    let hi = polys.len();
    let hlm = *h.lm();
    let hsugar = h.sugar();
    polys.push(h);

    let new_pairs: Vec<Pair> = active
        .iter()
        .map(|&g| {
            let glm = polys[g].lm();
            let lcm = hlm.lcm(glm);
            let sugar = (hsugar + lcm.deg - hlm.deg).max(polys[g].sugar() + lcm.deg - glm.deg);
            Pair {
                i: g,
                j: hi,
                lcm,
                sugar,
            }
        })
        .collect();

    // Chain criterion among the new pairs: drop (g, h) when another new pair's
    // lcm properly divides its lcm; among equal lcms keep one, preferring a
    // coprime pair (which is then discarded by the product criterion).
    let mut kept: Vec<Pair> = Vec::new();
    for (k, p) in new_pairs.iter().enumerate() {
        let glm = polys[p.i].lm();
        let coprime = hlm.coprime(glm);
        let dominated = new_pairs.iter().enumerate().any(|(l, q)| {
            if l == k {
                return false;
            }
            if q.lcm == p.lcm {
                // tie: keep the coprime one, else the earliest
                let q_coprime = hlm.coprime(polys[q.i].lm());
                if coprime {
                    q_coprime && l < k
                } else {
                    q_coprime || l < k
                }
            } else {
                q.lcm.divides(&p.lcm)
            }
        });
        if !dominated {
            kept.push(p.clone());
        }
    }
    // Product criterion.
    kept.retain(|p| !hlm.coprime(polys[p.i].lm()));

    // Old pairs made redundant by h.
    pairs.retain(|p| {
        if !hlm.divides(&p.lcm) {
            return true;
        }
        let l1 = hlm.lcm(polys[p.i].lm());
        let l2 = hlm.lcm(polys[p.j].lm());
        l1 == p.lcm || l2 == p.lcm
    });
    pairs.extend(kept);

    active.retain(|&g| !hlm.divides(polys[g].lm()));
    active.push(hi);
}

fn interreduce(order: MonomialOrder, polys: &[GPoly], active: &[usize]) -> Vec<GPoly> {
    let mut idx: Vec<usize> = active.to_vec();
    idx.sort_by(|&a, &b| order.cmp(polys[a].lm(), polys[b].lm()));
    let mut out: Vec<GPoly> = Vec::with_capacity(idx.len());
    for &g in &idx {
        let others: Vec<usize> = idx.iter().copied().filter(|&o| o != g).collect();
        let reducer = Reducer {
            order,
            polys,
            active: Cow::Borrowed(&others),
        };
        let lead = polys[g].terms[0].clone();
        let tail = reducer.reduce(polys[g].terms[1..].to_vec(), true);
        // lead * mult + tail: scale the leading term to match.
        let mut terms = Vec::with_capacity(tail.terms.len() + 1);
        let s = tail.scale;
        // tail ≡ s * original_tail; combine as numer(s) * lead + denom(s) * tail
        terms.push((lead.0, lead.1 * s.numer()));
        terms.extend(tail.terms.into_iter().map(|(m, c)| (m, c * s.denom())));
        make_primitive(&mut terms);
        out.push(GPoly {
            terms,
            sugar: polys[g].sugar,
        });
    }
    out
}

/// Reduced lexicographic Gröbner basis, monic. `var_order` lists the
/// variables from largest to smallest; the last one is the eliminated-to
/// variable of a zero-dimensional ideal.
pub fn groebner_lex(system: &[MPoly], var_order: &[usize]) -> Result<Vec<MPoly>, AlgebraError> {
    Ok(GroebnerBasis::compute(system, MonomialOrder::Lex, var_order)?.polys())
}
