use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not reach tolerance {tol:e} within {nodes} nodes (estimate {err_est:e})")]
    QuadratureNonConvergence { tol: f64, err_est: f64, nodes: usize },
    #[error("derivative of order {order} vanishes on the sampled grid")]
    DegenerateDerivative { order: usize },
    #[error("phase has a stationary point inside [{a}, {b}]")]
    StationaryPointInside { a: f64, b: f64 },
    #[error("no interior stationary point in [{a}, {b}]")]
    NoInteriorStationaryPoint { a: f64, b: f64 },
    #[error("second derivative is not positive at the stationary point ({value:e})")]
    NonPositiveSecondDerivative { value: f64 },
    #[error("curvature condition violated: {0}")]
    ConditionFViolated(String),
    #[error("gamma factor has a pole at s = {re} + {im}i")]
    PoleEncountered { re: f64, im: f64 },
    #[error("contour abscissa {sigma} outside the admissible range ({detail})")]
    ContourOutOfRange { sigma: f64, detail: String },
    #[error("format error: {0}")]
    Format(String),
    #[error("normalization error: lambda(1,1) = {0}")]
    Normalization(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("non-cuspidal coefficient table: {0}")]
    NonCuspidal(String),
    #[error("parameter window violated: {0}")]
    WindowViolation(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
