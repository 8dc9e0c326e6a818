use crate::oscgauss::Var;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(&'static str),
    #[error("outside the elliptic regime")]
    OutOfRegime,
    #[error("caustic: |sin| = {0:e}")]
    Caustic(f64),
    #[error("pivot {pivot:e} on {var} lies in the near-caustic band")]
    NearCaustic { var: Var, pivot: f64 },
    #[error("kernels are over different variable sets")]
    VariableMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(Var),
    #[error("a delta constraint ties boundary variables")]
    DeltaConstraint,
    #[error("degenerate Lagrangian coefficients")]
    DegenerateCoeffs,
    #[error("vertex {0:?} has no value")]
    MissingVertex([i32; 3]),
    #[error("invalid surface: {0}")]
    InvalidSurface(&'static str),
}
