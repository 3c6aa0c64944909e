use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wavenumber must be a positive integer, got {0}")]
    InvalidWavenumber(i64),

    #[error("{0}")]
    InvalidInput(String),

    #[error("wronskian of an empty function list")]
    EmptyWronskian,

    #[error("wronskian supports at most {max} functions, got {got}")]
    WronskianTooLarge { max: usize, got: usize },

    #[error("wronskian inputs carry two distinct nonzero spectral factors {0} and {1}")]
    ConflictingSpectral(Complex64, Complex64),

    #[error("cannot locate roots of the zero polynomial")]
    ZeroPolynomial,

    #[error("mixed exponent parity: the zero set is not pi-periodic")]
    MixedParity,

    #[error("root residual {residual:.3e} exceeds tolerance {tol:.3e} near z = {z}")]
    RootResidual {
        z: Complex64,
        residual: f64,
        tol: f64,
    },

    #[error("ambiguous root matching near z = {0}: several counterparts within tolerance")]
    AmbiguousMatch(Complex64),

    #[error("kappa = {kappa} is within {dist:.3e} of the critical value {critical}; use build_critical")]
    NearCritical {
        kappa: Complex64,
        critical: f64,
        dist: f64,
    },

    #[error("evaluation at z = {0} is too close to a zero or pole")]
    AtSingularity(Complex64),

    #[error("coincident vortices near z = {0}")]
    CoincidentVortices(Complex64),

    #[error("vortex collision at t = {t:.6}: pairwise distance {dist:.3e}")]
    Collision { t: f64, dist: f64 },

    #[error("contour quadrature did not converge: doubling nodes changed a residue by {0:.3e}")]
    QuadratureNonConvergent(f64),

    #[error("total circulation {0} is nonzero; doubly-periodic equilibria require zero net circulation")]
    NonzeroCirculation(i64),

    #[error("degenerate lattice: omega2/omega1 must have positive imaginary part")]
    DegenerateLattice,

    #[error("z = {0} is a lattice point")]
    LatticePoint(Complex64),

    #[error("newton iteration did not converge after {0} steps")]
    NewtonDiverged(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
