//! Flags secant to or osculating the moment curve `γ(t) = (1, t, …, t^{n−1})`,
//! big-cell coordinates on a flag manifold, and the determinantal equations
//! expressing the Schubert conditions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exactalg::{mat_det, AlgebraError, MPoly, Rational};
use crate::schubert::{FlagType, Necklace, SchubertError, SchubertProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("descent {a} is not in the flag type {alpha:?}")]
    DescentNotInFlag { a: usize, alpha: Vec<usize> },
    #[error("osculating span of dimension {j} is out of range 1..{n}")]
    SpanOutOfRange { j: usize, n: usize },
    #[error("expected {expected} rows of length {n}, got {rows} rows")]
    RowShape { expected: usize, rows: usize, n: usize },
    #[error("necklace {necklace} does not match the problem's descents")]
    NecklaceMismatch { necklace: String },
    #[error(transparent)]
    Schubert(#[from] SchubertError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// How the fixed flags of an instance are chosen along the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlagMode {
    Secant,
    Osculating,
}

impl fmt::Display for FlagMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagMode::Secant => "secant",
            FlagMode::Osculating => "osculating",
        })
    }
}

impl FromStr for FlagMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "secant" => Ok(FlagMode::Secant),
            "osculating" => Ok(FlagMode::Osculating),
            other => Err(format!("unknown mode `{other}` (expected secant or osculating)")),
        }
    }
}

/// `(1, t, t², …, t^{n−1})`.
pub fn moment_row(t: &Rational, n: usize) -> Vec<Rational> {
    let mut row = Vec::with_capacity(n);
    let mut power = Rational::one();
    for _ in 0..n {
        row.push(power.clone());
        power *= t;
    }
    row
}

/// Rows `γ(t), γ'(t), …, γ^{(j−1)}(t)`.
pub fn osculating_rows(t: &Rational, j: usize, n: usize) -> Result<Vec<Vec<Rational>>, GeometryError> {
    if j == 0 || j >= n {
        return Err(GeometryError::SpanOutOfRange { j, n });
    }
    Ok((0..j)
        .map(|p| {
            (0..n)
                .map(|c| {
                    if c < p {
                        Rational::zero()
                    } else {
                        // d^p/dt^p t^c = c!/(c-p)! t^(c-p)
                        let falling: BigInt = ((c - p + 1)..=c).map(BigInt::from).product();
                        Rational::from_integer(falling) * num_traits::pow(t.clone(), c - p)
                    }
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartEntry {
    Zero,
    One,
    /// 0-based variable index.
    Var(usize),
}

/// Big-cell coordinates: row `i` of the `a_k × n` matrix has a one in column
/// `i`, zeros in the other columns up to the block boundary `a_l ≥ i`, and
/// fresh variables after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    flag_type: FlagType,
    entries: Vec<Vec<ChartEntry>>,
    nvars: usize,
}

impl Chart {
    pub fn flag_type(&self) -> &FlagType {
        &self.flag_type
    }

    pub fn entries(&self) -> &[Vec<ChartEntry>] {
        &self.entries
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The first `a` rows as polynomials in `nvars + extra` variables.
    fn rows_as_polys(&self, a: usize, extra: usize) -> Vec<Vec<MPoly>> {
        let total = self.nvars + extra;
        self.entries[..a]
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        ChartEntry::Zero => MPoly::zero(total),
                        ChartEntry::One => MPoly::one(total),
                        ChartEntry::Var(v) => MPoly::var(total, *v),
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row
                .iter()
                .map(|e| match e {
                    ChartEntry::Zero => "0".to_string(),
                    ChartEntry::One => "1".to_string(),
                    ChartEntry::Var(v) => format!("x{}", v + 1),
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn build_chart(ft: &FlagType) -> Chart {
    let n = ft.n();
    let alpha = ft.alpha();
    let rows = *alpha.last().unwrap();
    let mut entries = Vec::with_capacity(rows);
    let mut next_var = 0;
    for i in 1..=rows {
        let block_end = *alpha.iter().find(|&&a| a >= i).unwrap();
        let row = (1..=n)
            .map(|c| {
                if c == i {
                    ChartEntry::One
                } else if c <= block_end {
                    ChartEntry::Zero
                } else {
                    next_var += 1;
                    ChartEntry::Var(next_var - 1)
                }
            })
            .collect();
        entries.push(row);
    }
    Chart {
        flag_type: ft.clone(),
        entries,
        nvars: next_var,
    }
}

fn stacked_det(chart: &Chart, a: usize, rows: Vec<Vec<MPoly>>, extra: usize) -> Result<MPoly, GeometryError> {
    let ft = chart.flag_type();
    if !ft.contains(a) {
        return Err(GeometryError::DescentNotInFlag {
            a,
            alpha: ft.alpha().to_vec(),
        });
    }
    let n = ft.n();
    if rows.len() != n - a || rows.iter().any(|r| r.len() != n) {
        return Err(GeometryError::RowShape {
            expected: n - a,
            rows: rows.len(),
            n,
        });
    }
    let mut m = chart.rows_as_polys(a, extra);
    m.extend(rows);
    Ok(mat_det(&m)?)
}

/// Determinant of the first `a` chart rows stacked over `rows`; it vanishes
/// exactly when `E_a` meets the span of `rows`.
pub fn condition_polynomial(chart: &Chart, a: usize, rows: &[Vec<Rational>]) -> Result<MPoly, GeometryError> {
    let nvars = chart.nvars();
    let poly_rows = rows
        .iter()
        .map(|r| r.iter().map(|c| MPoly::constant(nvars, c.clone())).collect())
        .collect();
    stacked_det(chart, a, poly_rows, 0)
}

/// Points of one fixed flag: `n − δ` increasing secant parameters, or the
/// single osculation point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantGroup {
    /// Index into the problem's expanded condition list.
    pub condition: usize,
    pub descent: usize,
    pub params: Vec<Rational>,
}

impl SecantGroup {
    /// Rows spanning the flag subspace that meets `E_descent`.
    pub fn rows(&self, mode: FlagMode, n: usize) -> Result<Vec<Vec<Rational>>, GeometryError> {
        match mode {
            FlagMode::Secant => Ok(self.params.iter().map(|t| moment_row(t, n)).collect()),
            FlagMode::Osculating => osculating_rows(&self.params[0], n - self.descent, n),
        }
    }
}

/// One sampled instance: groups listed in their order along the real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagInstance {
    pub mode: FlagMode,
    pub groups: Vec<SecantGroup>,
    pub necklace: Necklace,
}

/// Sampling of curve parameters as cumulative sums of `p/q` with
/// `p ∈ [1, max_numerator]`, `q ∈ [1, max_denominator]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub max_numerator: u32,
    pub max_denominator: u32,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            max_numerator: 100,
            max_denominator: 10,
        }
    }
}

pub fn sample_instance<R: Rng + ?Sized>(
    p: &SchubertProblem,
    nk: &Necklace,
    mode: FlagMode,
    rng: &mut R,
    cfg: &SamplingConfig,
) -> Result<FlagInstance, GeometryError> {
    let n = p.flag_type().n();
    let descents = p.descent_multiset()?;
    let mut sorted_problem = descents.clone();
    sorted_problem.sort_unstable();
    let mut sorted_beads = nk.beads().to_vec();
    sorted_beads.sort_unstable();
    if sorted_problem != sorted_beads {
        return Err(GeometryError::NecklaceMismatch {
            necklace: nk.to_string(),
        });
    }
    let mut used = vec![false; descents.len()];
    let mut position = Rational::zero();
    let mut groups = Vec::with_capacity(nk.len());
    for &d in nk.beads() {
        let condition = (0..descents.len())
            .find(|&i| !used[i] && descents[i] == d)
            .expect("bead multiset matches the problem");
        used[condition] = true;
        let count = match mode {
            FlagMode::Secant => n - d,
            FlagMode::Osculating => 1,
        };
        let params = (0..count)
            .map(|_| {
                let num = rng.gen_range(1..=cfg.max_numerator);
                let den = rng.gen_range(1..=cfg.max_denominator);
                position += Rational::new(num.into(), den.into());
                position.clone()
            })
            .collect();
        groups.push(SecantGroup {
            condition,
            descent: d,
            params,
        });
    }
    Ok(FlagInstance {
        mode,
        groups,
        necklace: nk.clone(),
    })
}

/// Check that secant flags through `s, s+h, …` degenerate to the osculating
/// flag at `s` as `h → 0`: after removing the power of `h` dividing the
/// condition polynomial, setting `h = 0` must give a nonzero multiple of the
/// osculating condition polynomial.
pub fn secant_to_osculating_limit_check(a: usize, ft: &FlagType, s: &Rational) -> Result<bool, GeometryError> {
    let chart = build_chart(ft);
    let n = ft.n();
    if !ft.contains(a) {
        return Err(GeometryError::DescentNotInFlag {
            a,
            alpha: ft.alpha().to_vec(),
        });
    }
    let k = n - a;
    let total = chart.nvars() + 1;
    let h = MPoly::var(total, chart.nvars());
    let rows: Vec<Vec<MPoly>> = (0..k)
        .map(|p| {
            let point = &MPoly::constant(total, s.clone()) + &h.scale(&Rational::from_integer(p.into()));
            (0..n).map(|c| point.pow(c as u32)).collect()
        })
        .collect();
    let secant = stacked_det(&chart, a, rows, 1)?;
    let hvar = chart.nvars();
    let shift = secant.min_degree_in(hvar);
    let stripped = MPoly::from_terms(
        total,
        secant.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e[hvar] -= shift;
            (crate::exactalg::Monomial::from_exponents(e), c.clone())
        }),
    );
    let limit = stripped
        .substitute(hvar, &Rational::zero())
        .remove_variable(hvar);
    let osculating = condition_polynomial(&chart, a, &osculating_rows(s, k, n)?)?;
    Ok(!limit.is_zero() && limit.is_proportional_to(&osculating))
}
