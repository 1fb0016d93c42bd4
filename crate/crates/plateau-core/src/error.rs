use thiserror::Error;

/// Errors shared across the pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),

    #[error("evaluation point {zeta} is within {dist:.3e} of the curve (cutoff {cutoff:.3e})")]
    NearBoundary {
        zeta: num_complex::Complex64,
        dist: f64,
        cutoff: f64,
    },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("component labeling unstable: {0}; refine the grid")]
    ResolutionTooCoarse(String),

    #[error("slice at t = {t} is not transverse; use the family integral instead")]
    UseAlternative { t: f64 },

    #[error("parameter t = {t} outside the sampled grid hull [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("singular point of the kernel: z' = z")]
    SingularPoint,

    #[error("both partials of F vanish at the evaluation point")]
    SingularPointOfCurve,

    #[error("negative or inconsistent fiber data on component {component}: {detail}")]
    NonPositiveChain { component: i32, detail: String },

    #[error("root solver failed to converge (degree {degree}, backward error {backward:.3e})")]
    RootFailure { degree: usize, backward: f64 },

    #[error("moment condition violated: residual {residual:.3e} exceeds {tol:.3e}")]
    MomentViolation { residual: f64, tol: f64 },

    #[error("Stokes boundary mismatch: residual {residual:.3e} under best sign (tolerance {tol:.3e})")]
    BoundaryMismatch { residual: f64, tol: f64 },

    #[error("mass estimate {mass:.6e} exceeds the bound {bound:.6e}")]
    MassBoundViolation { mass: f64, bound: f64 },

    #[error("boundary orientation sign differs across slices: {0}")]
    OrientationInconsistency(String),

    #[error("near-vanishing tangent at node {node}: |dz/dtheta| = {speed:.3e}")]
    DegenerateParametrization { node: usize, speed: f64 },

    #[error("harmonic extension obstructed: Green moment residual {residual:.3e} exceeds {tol:.3e}")]
    ObstructedExtension { residual: f64, tol: f64 },

    #[error("slice error at t = {t}: {source}")]
    AtParameter {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported domain for the Green stage: {0}")]
    UnsupportedDomain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn at_parameter(self, t: f64) -> Error {
        Error::AtParameter {
            t,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
