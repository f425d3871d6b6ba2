//! Exact real-solution counting for Schubert problems on flag manifolds.
//!
//! Schubert problems are posed by flags secant to (or osculating) the moment
//! curve, written as polynomial systems in big-cell coordinates, eliminated to
//! a univariate eliminant and certified with a square-free/degree check before
//! the real roots are counted with Sturm sequences.

pub mod exactalg;
pub mod geometry;
pub mod harness;
pub mod problem_file;
pub mod schubert;
pub mod solvecount;
