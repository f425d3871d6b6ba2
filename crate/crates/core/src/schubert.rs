//! Schubert conditions on partial flag manifolds: permutations, validation,
//! degrees via iterated Monk products, and necklace classes of secancy
//! orderings.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchubertError {
    #[error("not a permutation of 1..{n}: {values:?}")]
    NotAPermutation { n: usize, values: Vec<usize> },
    #[error("invalid flag type {alpha:?} in dimension {n}")]
    BadFlagType { alpha: Vec<usize>, n: usize },
    #[error("index ({i}, {j}) out of range 1..={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("condition {condition} has length {length}; only length-1 conditions are supported")]
    Unsupported { condition: usize, length: usize },
    #[error("condition {condition} has descents {descents:?}; necklaces need a single descent")]
    NotGrassmannian { condition: usize, descents: Vec<usize> },
    #[error("problem is invalid: {0}")]
    Invalid(InvalidReason),
    #[error("Monk product left the span of permutations with descents in {alpha:?}: {perm}")]
    MonkEscape { alpha: Vec<usize>, perm: Permutation },
    #[error("degree depends on condition order ({forward} vs {reversed})")]
    NonCommutative { forward: u64, reversed: u64 },
    #[error("degree overflows 64 bits")]
    Overflow,
    #[error("cannot parse necklace `{0}`")]
    BadNecklace(String),
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, SchubertError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(SchubertError::NotAPermutation { n, values });
            }
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// The simple transposition swapping positions `a` and `a + 1` (1-based).
    pub fn simple_transposition(n: usize, a: usize) -> Self {
        let mut v: Vec<usize> = (1..=n).collect();
        v.swap(a - 1, a);
        Permutation(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// Positions `i` (1-based) with `σ(i) > σ(i+1)`.
    pub fn descent_set(&self) -> BTreeSet<usize> {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
            .sum()
    }

    /// `|{ l ≤ i : j + σ(l) > n }|`, indices 1-based.
    pub fn r_sigma(&self, i: usize, j: usize) -> Result<usize, SchubertError> {
        let n = self.n();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(SchubertError::IndexOutOfRange { i, j, n });
        }
        Ok(self.0[..i].iter().filter(|&&s| j + s > n).count())
    }

    /// The unique descent of a Grassmannian permutation.
    pub fn grassmannian_descent(&self) -> Option<usize> {
        let d = self.descent_set();
        (d.len() == 1).then(|| *d.iter().next().unwrap())
    }

    /// Compact one-line form, e.g. `13245`; values above 9 are comma separated.
    pub fn compact(&self) -> String {
        if self.0.iter().all(|&v| v < 10) {
            self.0.iter().map(|v| v.to_string()).collect()
        } else {
            self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Flag type `α = (a_1 < ... < a_k)` in `C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagType {
    alpha: Vec<usize>,
    n: usize,
}

impl FlagType {
    pub fn new(alpha: Vec<usize>, n: usize) -> Result<Self, SchubertError> {
        let ok = !alpha.is_empty()
            && alpha[0] >= 1
            && *alpha.last().unwrap() < n
            && alpha.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(FlagType { alpha, n })
        } else {
            Err(SchubertError::BadFlagType { alpha, n })
        }
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: usize) -> bool {
        self.alpha.contains(&a)
    }

    /// `Σ (n − a_i)(a_i − a_{i−1})` with `a_0 = 0`.
    pub fn dim(&self) -> usize {
        let mut prev = 0;
        self.alpha
            .iter()
            .map(|&a| {
                let d = (self.n - a) * (a - prev);
                prev = a;
                d
            })
            .sum()
    }

    /// The longest permutation with descents in `α`: the top cell.
    pub fn longest_element(&self) -> Permutation {
        let mut bounds = self.alpha.clone();
        bounds.push(self.n);
        let mut values = Vec::with_capacity(self.n);
        let mut prev = 0;
        let mut top = self.n;
        for b in bounds {
            let size = b - prev;
            values.extend(top + 1 - size..=top);
            top -= size;
            prev = b;
        }
        Permutation(values)
    }
}

pub fn flag_dim(ft: &FlagType) -> usize {
    ft.dim()
}

/// A list of Schubert conditions with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertProblem {
    flag_type: FlagType,
    conditions: Vec<(Permutation, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvalidReason {
    WrongSize {
        condition: usize,
        len: usize,
        n: usize,
    },
    DescentOutsideFlag {
        condition: usize,
        descents: Vec<usize>,
        alpha: Vec<usize>,
    },
    LengthMismatch {
        total: usize,
        dim: usize,
    },
    NoConditions,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::WrongSize { condition, len, n } => {
                write!(f, "condition {condition} permutes {len} letters, expected {n}")
            }
            InvalidReason::DescentOutsideFlag {
                condition,
                descents,
                alpha,
            } => write!(
                f,
                "condition {condition} has descents {descents:?} not contained in {alpha:?}"
            ),
            InvalidReason::LengthMismatch { total, dim } => {
                write!(f, "total length {total} ≠ dim {dim}")
            }
            InvalidReason::NoConditions => write!(f, "no conditions"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(InvalidReason),
}

impl SchubertProblem {
    pub fn new(flag_type: FlagType, conditions: Vec<(Permutation, usize)>) -> Self {
        SchubertProblem {
            flag_type,
            conditions,
        }
    }

    pub fn flag_type(&self) -> &FlagType {
        &self.flag_type
    }

    pub fn conditions(&self) -> &[(Permutation, usize)] {
        &self.conditions
    }

    /// Conditions repeated by multiplicity.
    pub fn expanded(&self) -> Vec<&Permutation> {
        self.conditions
            .iter()
            .flat_map(|(p, k)| std::iter::repeat(p).take(*k))
            .collect()
    }

    pub fn num_conditions(&self) -> usize {
        self.conditions.iter().map(|(_, k)| k).sum()
    }

    /// Canonical identifier such as `fl2.3-5_13245x4_12435x4`.
    pub fn canonical_id(&self) -> String {
        let alpha: Vec<String> = self.flag_type.alpha.iter().map(|a| a.to_string()).collect();
        let mut id = format!("fl{}-{}", alpha.join("."), self.flag_type.n);
        for (p, k) in &self.conditions {
            id.push_str(&format!("_{}x{}", p.compact().replace(',', "."), k));
        }
        id
    }

    /// Descents of the expanded conditions; every condition must be Grassmannian.
    pub fn descent_multiset(&self) -> Result<Vec<usize>, SchubertError> {
        self.expanded()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.grassmannian_descent()
                    .ok_or_else(|| SchubertError::NotGrassmannian {
                        condition: i + 1,
                        descents: p.descent_set().into_iter().collect(),
                    })
            })
            .collect()
    }

    /// Fails unless every condition has length one (the solvable class).
    pub fn require_simple(&self) -> Result<(), SchubertError> {
        for (i, (p, _)) in self.conditions.iter().enumerate() {
            let l = p.length();
            if l != 1 {
                return Err(SchubertError::Unsupported {
                    condition: i + 1,
                    length: l,
                });
            }
        }
        Ok(())
    }
}

pub fn validate_problem(p: &SchubertProblem) -> Validity {
    let ft = &p.flag_type;
    if p.conditions.iter().all(|(_, k)| *k == 0) {
        return Validity::Invalid(InvalidReason::NoConditions);
    }
    for (i, (perm, _)) in p.conditions.iter().enumerate() {
        if perm.n() != ft.n {
            return Validity::Invalid(InvalidReason::WrongSize {
                condition: i + 1,
                len: perm.n(),
                n: ft.n,
            });
        }
        let descents = perm.descent_set();
        if !descents.iter().all(|d| ft.contains(*d)) {
            return Validity::Invalid(InvalidReason::DescentOutsideFlag {
                condition: i + 1,
                descents: descents.into_iter().collect(),
                alpha: ft.alpha.clone(),
            });
        }
    }
    let total: usize = p.conditions.iter().map(|(s, k)| s.length() * k).sum();
    let dim = ft.dim();
    if total != dim {
        return Validity::Invalid(InvalidReason::LengthMismatch { total, dim });
    }
    Validity::Valid
}

/// Apply Monk's rule for the divisor at descent `a` to `w`: all `w·t_ij`
/// with `i ≤ a < j` and length exactly one more.
fn monk_terms(w: &[usize], a: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = w.len();
    (0..a).flat_map(move |i| {
        (a..n).filter_map(move |j| {
            let (lo, hi) = (w[i], w[j]);
            if lo < hi && !w[i + 1..j].iter().any(|&v| lo < v && v < hi) {
                let mut next = w.to_vec();
                next.swap(i, j);
                Some(next)
            } else {
                None
            }
        })
    })
}

fn degree_in_order(ft: &FlagType, descents: &[usize]) -> Result<u64, SchubertError> {
    let mut state: HashMap<Vec<usize>, u64> = HashMap::new();
    state.insert((1..=ft.n).collect(), 1);
    for &a in descents {
        let mut next: HashMap<Vec<usize>, u64> = HashMap::new();
        for (w, count) in &state {
            for v in monk_terms(w, a) {
                let perm = Permutation(v);
                if !perm.descent_set().iter().all(|d| ft.contains(*d)) {
                    return Err(SchubertError::MonkEscape {
                        alpha: ft.alpha.clone(),
                        perm,
                    });
                }
                let e = next.entry(perm.0).or_insert(0);
                *e = e.checked_add(*count).ok_or(SchubertError::Overflow)?;
            }
        }
        state = next;
    }
    Ok(state
        .get(ft.longest_element().values())
        .copied()
        .unwrap_or(0))
}

/// Number of solutions of a valid problem whose conditions all have length one,
/// by iterated Monk products from the identity to the top cell.
pub fn schubert_degree(p: &SchubertProblem) -> Result<u64, SchubertError> {
    if let Validity::Invalid(r) = validate_problem(p) {
        return Err(SchubertError::Invalid(r));
    }
    p.require_simple()?;
    let descents: Vec<usize> = p
        .expanded()
        .iter()
        .map(|s| s.grassmannian_descent().expect("length one has one descent"))
        .collect();
    let forward = degree_in_order(&p.flag_type, &descents)?;
    let reversed_order: Vec<usize> = descents.iter().rev().copied().collect();
    let reversed = degree_in_order(&p.flag_type, &reversed_order)?;
    if forward != reversed {
        return Err(SchubertError::NonCommutative { forward, reversed });
    }
    Ok(forward)
}

/// A dihedral class of circular descent sequences, stored as its
/// lexicographically smallest linear representative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace(Vec<usize>);

impl Necklace {
    /// Canonical representative of the class of `beads`.
    pub fn canonical(beads: &[usize]) -> Self {
        let m = beads.len();
        let mut best = beads.to_vec();
        let reversed: Vec<usize> = beads.iter().rev().copied().collect();
        for seq in [beads, &reversed[..]] {
            for r in 0..m {
                let rotated: Vec<usize> = seq[r..].iter().chain(&seq[..r]).copied().collect();
                if rotated < best {
                    best = rotated;
                }
            }
        }
        Necklace(best)
    }

    pub fn beads(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Some rotation is weakly increasing.
    pub fn is_monotone(&self) -> bool {
        is_monotone(self)
    }
}

pub fn is_monotone(nk: &Necklace) -> bool {
    let b = &nk.0;
    let m = b.len();
    (0..m).filter(|&i| b[i] > b[(i + 1) % m]).count() <= 1
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&v| v < 10) {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl FromStr for Necklace {
    type Err = SchubertError;

    /// Accepts `22223333` or, for multi-digit beads, `2.10.10.3`; the result is canonicalised.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SchubertError::BadNecklace(s.to_string());
        let beads: Vec<usize> = if s.contains(['.', ',']) {
            s.split(['.', ','])
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        if beads.is_empty() {
            return Err(bad());
        }
        Ok(Necklace::canonical(&beads))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All necklace classes of the problem's descent multiset, monotone classes
/// first, then in lexicographic order of the canonical representative.
pub fn enumerate_necklaces(p: &SchubertProblem) -> Result<Vec<Necklace>, SchubertError> {
    let mut beads = p.descent_multiset()?;
    Ok(necklaces_of_multiset(&mut beads))
}

pub fn necklaces_of_multiset(beads: &mut [usize]) -> Vec<Necklace> {
    beads.sort_unstable();
    let mut classes = BTreeSet::new();
    loop {
        classes.insert(Necklace::canonical(beads));
        if !next_permutation(beads) {
            break;
        }
    }
    let mut out: Vec<Necklace> = classes.into_iter().collect();
    out.sort_by_key(|nk| !nk.is_monotone());
    out
}
