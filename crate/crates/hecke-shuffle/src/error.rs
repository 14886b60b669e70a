use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("d = {0} is not in the class-number-1 whitelist (or is not squarefree)")]
    NotWhitelisted(i64),
    #[error("no generator found for the prime above {p} within coefficient bound {bound}")]
    GeneratorSearchFailed { p: u64, bound: i64 },
    #[error("gamma pole at non-positive integer {0}")]
    PoleAt(i64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("truncation tail bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    TailNotConverged { bound: f64, tol: f64 },
    #[error("analytic continuation unavailable: {0}")]
    ContinuationUnavailable(String),
    #[error("denominator magnitude {0:.3e} below pole-proximity threshold")]
    PoleProximity(f64),
    #[error("quadrature did not converge: last refinement moved result by {0:.3e}")]
    QuadratureNotConverged(f64),
    #[error("truncation did not converge: doubling bounds moved result by {0:.3e}")]
    TruncationNotConverged(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("cache i/o: {0}")]
    CacheIo(String),
}

pub type Result<T> = std::result::Result<T, Error>;
