use crate::lattice::{FaceCoord, Region};

/// Errors produced by lattice, weight-dynamics and numerical routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("face {face:?} is outside the region {region:?}")]
    FaceOutsideRegion { face: FaceCoord, region: Region },

    #[error("regions do not match: {0:?} vs {1:?}")]
    RegionMismatch(Region, Region),

    #[error("operation not supported on region {0:?}: {1}")]
    RegionUnsupported(Region, &'static str),

    #[error("face {0:?} is odd at parity {1}; an even face is required")]
    OddFace(FaceCoord, u8),

    #[error("non-positive edge weight {value} at face ({i},{j})")]
    NonPositiveWeight { i: i32, j: i32, value: f64 },

    #[error("window evolution for {steps} steps needs radius > {steps}, got {radius}")]
    WindowBudget { steps: u32, radius: i32 },

    #[error("configurations are not consecutive shuffle states: {0}")]
    InconsistentConfigs(&'static str),

    #[error("polynomial interpolation residual {residual:.3e} exceeds {tol:.3e}; grid too small or matrix degenerate")]
    InterpolationResidual { residual: f64, tol: f64 },

    #[error("empty polynomial support")]
    EmptySupport,

    #[error("spider step changed the characteristic polynomial by more than a constant (spread {spread:.3e})")]
    NotScalarMultiple { spread: f64 },

    #[error("polynomial supports differ; cannot form coefficient ratio")]
    SupportMismatch,

    #[error("slope ({0}, {1}) lies outside the open Newton polygon")]
    SlopeOutside(f64, f64),

    #[error("magnetic-field maximizer diverged for slope ({rho1}, {rho2}); last iterate B = ({b1:.4}, {b2:.4}), |grad| = {grad:.3e}")]
    MaximizerDiverged {
        rho1: f64,
        rho2: f64,
        b1: f64,
        b2: f64,
        grad: f64,
    },

    #[error("phase classification indeterminate at slope ({rho1}, {rho2}): {conforming}/{samples} gradient samples within tolerance (max deviation {max_dev:.3e})")]
    Indeterminate {
        rho1: f64,
        rho2: f64,
        conforming: usize,
        samples: usize,
        max_dev: f64,
    },

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailed(String),

    #[error("edge probability has imaginary residue {0:.3e} above tolerance")]
    ImaginaryResidue(f64),

    #[error("slope ({0}, {1}) is smooth; the Kasteleyn-sum estimator needs a rough slope")]
    SmoothSlope(f64, f64),

    #[error("no interior grid cell matches slope ({rho1}, {rho2}); best gradient residual {best:.3} (need < {need})")]
    NotResolved {
        rho1: f64,
        rho2: f64,
        best: f64,
        need: f64,
    },

    #[error("point ({0}, {1}) lies outside the rescaled diamond")]
    PointOutsideDiamond(f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
