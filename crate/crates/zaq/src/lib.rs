//! Analyzer for zero-automatic queues.
//!
//! A zero-automatic queue is a single-server FIFO queue whose buffer behaves
//! like a random walk on a monoid: consecutive customers may cancel or merge
//! according to a partial product on the class alphabet. Stable queues of this
//! kind have a product-form stationary distribution and Poisson departures,
//! with the load and boundary vector determined by a nonlinear fixed-point
//! system (the twisted traffic equations).
//!
//! The crate is organized around that pipeline:
//!
//! - [`algebra`] — class alphabets, partial products, neighbor sets, and
//!   normal-form buffer words (the buffering mechanism itself);
//! - [`traffic`] — the traffic equations of the underlying random walk, its
//!   drift, and harmonic-measure marginals;
//! - [`twisted`] — the twisted traffic equations, stability classification,
//!   and the product-form stationary law;
//! - [`qbd`] — the lumped quasi-birth-and-death generator and its
//!   matrix-geometric solution;
//! - [`simulate`] — event-driven simulation of the queue and of the walk;
//! - [`oracle`] — brute-force ground truth from a truncated generator;
//! - [`model`] / [`cli`] — JSON model files and the command-line front end.
//!
//! Start from the `examples/` directory for end-to-end usage; each example is
//! a runnable walkthrough of one capability.

pub mod algebra;
pub mod cli;
mod linalg;
pub mod model;
pub mod oracle;
pub mod qbd;
pub mod simulate;
pub mod traffic;
pub mod twisted;

pub use algebra::{BufferWord, FactorSpec, GeneratorId, PairSpec, Reduction};
pub use model::{ModelFile, TriplePlusRates};
pub use traffic::{ClassDistribution, Functionals, TeSolution};
pub use twisted::{StabilityClass, StabilityVerdict, StationaryLaw, TteSolution};

use std::fmt;

/// Errors produced by construction, solving, and validation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A generator label occurs twice in an alphabet.
    DuplicateLabel(String),
    /// `build_pair` was called with no factors.
    EmptyFactorList,
    /// A factor contributes no generators (e.g. a finite monoid with only a unit).
    EmptyFactor(usize),
    /// A finite-monoid table has no two-sided unit.
    MissingUnit(usize),
    /// A finite-monoid table is not associative; the offending triple is reported.
    NonAssociative {
        factor: usize,
        triple: (String, String, String),
    },
    /// A custom table violates `Left(a*b)=Left(a)` / `Right(a*b)=Right(b)`.
    NeighborMismatch { a: String, b: String, c: String },
    /// A custom table is inconsistent on a triple whose pairwise products reduce.
    TripleInconsistent {
        triple: (String, String, String),
        detail: String,
    },
    /// A letter label does not belong to the alphabet.
    UnknownLetter(String),
    /// A word violates the normal-form condition.
    NotNormal(String),
    /// Serving from an empty buffer.
    EmptyWord,
    /// A probability vector has a negative entry or does not sum to one.
    BadDistribution(String),
    /// Rates must be strictly positive.
    NonPositiveRate(String),
    /// A fixed-point solve failed to converge from every start.
    NoConvergence { max_iter: usize, best_residual: f64 },
    /// Two supposedly equal quantities disagree beyond tolerance.
    Inconsistent { what: &'static str, delta: f64 },
    /// A plain stable triple produced several distinct admissible solutions
    /// (the theory guarantees one, so this signals a solver defect).
    PlainMultiplicity(usize),
    /// An operation needing a plain pair was applied to a general pair.
    NotPlain,
    /// An operation needing `rho < 1` was given a non-ergodic solution.
    NotErgodic { rho: f64 },
    /// Lumping weights require a strictly positive boundary vector.
    ZeroBoundaryEntry(String),
    /// The matrix-geometric iteration diverged.
    RIterationDiverged { iterations: usize },
    /// A dense linear system was singular.
    SingularSystem,
    /// A boundary solve produced a non-positive solution.
    NonPositiveSolution,
    /// Word enumeration beyond the configured cap.
    CapExceeded { requested: usize, cap: usize },
    /// Not enough departures to form statistics.
    TooFewDepartures { got: usize, need: usize },
    /// Model-file parsing or validation failure.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DuplicateLabel(l) => write!(f, "duplicate generator label `{l}`"),
            Error::EmptyFactorList => write!(f, "factor list is empty"),
            Error::EmptyFactor(i) => write!(f, "factor #{i} contributes no generators"),
            Error::MissingUnit(i) => write!(f, "factor #{i} has no two-sided unit"),
            Error::NonAssociative { factor, triple } => write!(
                f,
                "factor #{factor} is not associative on ({}, {}, {})",
                triple.0, triple.1, triple.2
            ),
            Error::NeighborMismatch { a, b, c } => write!(
                f,
                "table({a},{b})={c} but the neighbor sets of {c} do not match Left({a})/Right({b})"
            ),
            Error::TripleInconsistent { triple, detail } => write!(
                f,
                "products around ({}, {}, {}) are not associative: {detail}",
                triple.0, triple.1, triple.2
            ),
            Error::UnknownLetter(l) => write!(f, "unknown letter `{l}`"),
            Error::NotNormal(w) => write!(f, "word `{w}` is not in normal form"),
            Error::EmptyWord => write!(f, "the buffer word is empty"),
            Error::BadDistribution(d) => write!(f, "invalid distribution: {d}"),
            Error::NonPositiveRate(r) => write!(f, "rate {r} must be strictly positive"),
            Error::NoConvergence {
                max_iter,
                best_residual,
            } => write!(
                f,
                "no start converged within {max_iter} iterations (best residual {best_residual:.3e})"
            ),
            Error::Inconsistent { what, delta } => {
                write!(f, "{what} disagree by {delta:.3e}")
            }
            Error::PlainMultiplicity(n) => write!(
                f,
                "plain stable triple returned {n} distinct admissible solutions; expected exactly one"
            ),
            Error::NotPlain => write!(f, "operation requires a plain pair"),
            Error::NotErgodic { rho } => write!(f, "load rho = {rho} is not < 1"),
            Error::ZeroBoundaryEntry(l) => {
                write!(f, "boundary vector entry for `{l}` is zero; lumping weights undefined")
            }
            Error::RIterationDiverged { iterations } => {
                write!(f, "R iteration diverged after {iterations} steps")
            }
            Error::SingularSystem => write!(f, "linear system is singular"),
            Error::NonPositiveSolution => write!(f, "boundary solve produced a non-positive solution"),
            Error::CapExceeded { requested, cap } => {
                write!(f, "requested length {requested} exceeds the cap {cap}")
            }
            Error::TooFewDepartures { got, need } => {
                write!(f, "only {got} departures recorded; need at least {need}")
            }
            Error::Parse(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
