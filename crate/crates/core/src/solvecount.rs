//! From a sampled instance to a certified count of real solutions.
//!
//! The square system in chart coordinates is eliminated to a univariate
//! eliminant in the last chart variable. When the eliminant is square-free of
//! the expected degree, the Shape Lemma puts its real roots in bijection with
//! the real solutions, which are then counted with a Sturm sequence.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactalg::{
    is_squarefree, modular_eliminate, sturm_count, AlgebraError, GroebnerBasis, MPoly,
    ModularElimination, MonomialOrder, UPoly,
};
use crate::geometry::{
    build_chart, condition_polynomial, sample_instance, FlagInstance, FlagMode, GeometryError,
    SamplingConfig,
};
use crate::schubert::{schubert_degree, Necklace, SchubertError, SchubertProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Schubert(#[from] SchubertError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("system is not square: {equations} equations in {variables} variables")]
    NotSquare { equations: usize, variables: usize },
    #[error("accepted instance with {real} real roots violates degree {degree} parity/bound")]
    InvariantViolation { real: usize, degree: u64 },
}

/// Square system of condition equations in chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub equations: Vec<MPoly>,
    pub nvars: usize,
}

impl PolynomialSystem {
    pub fn is_square(&self) -> bool {
        self.equations.len() == self.nvars
    }
}

/// One equation per fixed flag, each scaled to a primitive integer polynomial.
pub fn build_system(p: &SchubertProblem, inst: &FlagInstance) -> Result<PolynomialSystem, SolveError> {
    p.require_simple()?;
    let ft = p.flag_type();
    let chart = build_chart(ft);
    let mut equations = Vec::with_capacity(inst.groups.len());
    for group in &inst.groups {
        let rows = group.rows(inst.mode, ft.n())?;
        equations.push(condition_polynomial(&chart, group.descent, &rows)?.primitive_part());
    }
    Ok(PolynomialSystem {
        equations,
        nvars: chart.nvars(),
    })
}

/// Elimination back end. Each returns the monic generator of `I ∩ Q[x_keep]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EliminationEngine {
    /// Multi-modular shape-lemma lifting with exact verification. Falls back
    /// to [`EliminationEngine::GrevLexMinimalPolynomial`] when `x_keep` does
    /// not separate the points and its minimal polynomial is square-free.
    #[default]
    Modular,
    /// Graded reverse lex basis over the rationals, then the minimal
    /// polynomial of `x_keep` on the quotient ring.
    GrevLexMinimalPolynomial,
    /// Reduced lex basis with `x_keep` last; its univariate member.
    Lex,
}

/// Variable order with `keep` smallest and the others in index order.
fn elimination_order(nvars: usize, keep: usize) -> Vec<usize> {
    (0..nvars).filter(|&v| v != keep).chain([keep]).collect()
}

/// Eliminant in `x_keep`. The zero polynomial means the ideal has no
/// univariate member (not zero-dimensional); the unit ideal gives `1`.
pub fn eliminate_to_univariate(sys: &PolynomialSystem, keep: usize) -> Result<UPoly, SolveError> {
    eliminate_with(sys, keep, EliminationEngine::default())
}

pub fn eliminate_with(
    sys: &PolynomialSystem,
    keep: usize,
    engine: EliminationEngine,
) -> Result<UPoly, SolveError> {
    if !sys.is_square() {
        return Err(SolveError::NotSquare {
            equations: sys.equations.len(),
            variables: sys.nvars,
        });
    }
    if keep >= sys.nvars {
        return Err(AlgebraError::VariableOutOfRange {
            index: keep,
            nvars: sys.nvars,
        }
        .into());
    }
    let order = elimination_order(sys.nvars, keep);
    match engine {
        EliminationEngine::Modular => match modular_eliminate(&sys.equations, keep)? {
            ModularElimination::Unit => Ok(UPoly::one()),
            ModularElimination::NotZeroDimensional => Ok(UPoly::zero()),
            ModularElimination::Shape(shape) => Ok(shape.eliminant),
            ModularElimination::NotShape { eliminant, .. } => {
                if is_squarefree(&eliminant)? {
                    eliminate_with(sys, keep, EliminationEngine::GrevLexMinimalPolynomial)
                } else {
                    Ok(eliminant)
                }
            }
        },
        EliminationEngine::GrevLexMinimalPolynomial => {
            let gb = GroebnerBasis::compute(&sys.equations, MonomialOrder::GrevLex, &order)?;
            Ok(gb.eliminant(keep)?.unwrap_or_else(UPoly::zero))
        }
        EliminationEngine::Lex => {
            let gb = GroebnerBasis::compute(&sys.equations, MonomialOrder::Lex, &order)?;
            if gb.is_unit() {
                return Ok(UPoly::one());
            }
            // The lex basis is sorted by increasing leading monomial, so a
            // univariate member in the smallest variable comes first.
            let first = gb.polys().into_iter().next();
            Ok(first
                .filter(|g| {
                    g.terms()
                        .all(|(m, _)| m.exponents().iter().enumerate().all(|(v, &e)| v == keep || e == 0))
                })
                .map(|g| {
                    let coeffs = g.coefficients_in(keep);
                    UPoly::new(coeffs.iter().map(|c| c.as_constant().unwrap()).collect())
                })
                .unwrap_or_else(UPoly::zero))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscardReason {
    DegreeDrop,
    NotSquareFree,
    ChartMiss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Accepted,
    Discarded(DiscardReason),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Accepted => "ok",
            Status::Discarded(DiscardReason::DegreeDrop) => "discard_degree",
            Status::Discarded(DiscardReason::NotSquareFree) => "discard_squarefree",
            Status::Discarded(DiscardReason::ChartMiss) => "discard_chart",
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, Status::Accepted)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ok" => Status::Accepted,
            "discard_degree" => Status::Discarded(DiscardReason::DegreeDrop),
            "discard_squarefree" => Status::Discarded(DiscardReason::NotSquareFree),
            "discard_chart" => Status::Discarded(DiscardReason::ChartMiss),
            other => return Err(format!("unknown status `{other}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub status: Status,
    pub eliminant: UPoly,
    pub expected_degree: u64,
}

/// Accept iff the eliminant is square-free of the expected degree. Checks run
/// in the order chart miss, degree drop, square-freeness.
pub fn certify(e: &UPoly, expected: u64) -> Certification {
    let status = match e.degree() {
        None => Status::Discarded(DiscardReason::ChartMiss),
        Some(d) if d as u64 != expected => Status::Discarded(DiscardReason::DegreeDrop),
        Some(_) => match is_squarefree(e) {
            Ok(true) => Status::Accepted,
            _ => Status::Discarded(DiscardReason::NotSquareFree),
        },
    };
    Certification {
        status,
        eliminant: e.clone(),
        expected_degree: expected,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceResult {
    pub problem_id: String,
    pub necklace: Necklace,
    pub mode: FlagMode,
    pub instance_index: u64,
    pub seed: u64,
    pub status: Status,
    /// Present exactly when accepted.
    pub num_real: Option<usize>,
    pub eliminant_degree: Option<usize>,
    pub elapsed_ms: u64,
}

impl InstanceResult {
    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &InstanceResult) -> bool {
        InstanceResult {
            elapsed_ms: 0,
            ..self.clone()
        } == InstanceResult {
            elapsed_ms: 0,
            ..other.clone()
        }
    }
}

/// Stable 64-bit seed of one instance: the leading bytes of
/// SHA-256(`master:necklace:index`).
pub fn instance_seed(master: u64, nk: &Necklace, index: u64) -> u64 {
    let digest = Sha256::digest(format!("{master}:{nk}:{index}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Solver for repeated instances of one problem.
#[derive(Clone, Debug)]
pub struct Solver {
    problem: SchubertProblem,
    problem_id: String,
    degree: u64,
    sampling: SamplingConfig,
    engine: EliminationEngine,
}

impl Solver {
    pub fn new(problem: SchubertProblem, problem_id: impl Into<String>) -> Result<Self, SolveError> {
        let degree = schubert_degree(&problem)?;
        Ok(Solver {
            problem,
            problem_id: problem_id.into(),
            degree,
            sampling: SamplingConfig::default(),
            engine: EliminationEngine::default(),
        })
    }

    pub fn with_sampling(mut self, sampling: SamplingConfig) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn with_engine(mut self, engine: EliminationEngine) -> Self {
        self.engine = engine;
        self
    }

    pub fn problem(&self) -> &SchubertProblem {
        &self.problem
    }

    pub fn problem_id(&self) -> &str {
        &self.problem_id
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn sample(&self, nk: &Necklace, mode: FlagMode, seed: u64) -> Result<FlagInstance, SolveError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(sample_instance(&self.problem, nk, mode, &mut rng, &self.sampling)?)
    }

    /// Certification and eliminant of one sampled instance.
    pub fn certify_instance(&self, nk: &Necklace, mode: FlagMode, seed: u64) -> Result<Certification, SolveError> {
        let inst = self.sample(nk, mode, seed)?;
        let sys = build_system(&self.problem, &inst)?;
        let keep = sys.nvars - 1;
        let e = eliminate_with(&sys, keep, self.engine)?;
        Ok(certify(&e, self.degree))
    }

    pub fn solve(&self, nk: &Necklace, mode: FlagMode, seed: u64, index: u64) -> Result<InstanceResult, SolveError> {
        let start = Instant::now();
        let cert = self.certify_instance(nk, mode, seed)?;
        let num_real = match cert.status {
            Status::Accepted => {
                let real = sturm_count(&cert.eliminant)?;
                if real as u64 > self.degree || (real as u64 + self.degree) % 2 != 0 {
                    return Err(SolveError::InvariantViolation {
                        real,
                        degree: self.degree,
                    });
                }
                Some(real)
            }
            Status::Discarded(_) => None,
        };
        Ok(InstanceResult {
            problem_id: self.problem_id.clone(),
            necklace: nk.clone(),
            mode,
            instance_index: index,
            seed,
            status: cert.status,
            num_real,
            eliminant_degree: cert.eliminant.degree(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }
}

/// Sample, build, eliminate, certify and count one instance.
pub fn solve_instance(
    p: &SchubertProblem,
    nk: &Necklace,
    mode: FlagMode,
    seed: u64,
    index: u64,
) -> Result<InstanceResult, SolveError> {
    Solver::new(p.clone(), p.canonical_id())?.solve(nk, mode, seed, index)
}
