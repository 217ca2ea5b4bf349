use std::path::PathBuf;

/// Errors produced by the toolkit.
///
/// Variants are grouped by the subsystem that raises them; the CLI maps
/// usage-level problems to exit code 2 and numeric/physics problems to 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("catalog parse error at line {line}: {message}")]
    CatalogParse { line: usize, message: String },

    #[error("catalog record `{record}` violates invariant: {rule}")]
    CatalogInvariant { record: String, rule: String },

    #[error("duplicate catalog id `{id}`")]
    DuplicateId { id: String },

    #[error("unknown transition id `{requested}`; available: {}", available.join(", "))]
    UnknownId {
        requested: String,
        available: Vec<String>,
    },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: String, message: String },

    #[error(
        "resonator provides no mode volume: set a radius (the fundamental \
         whispering-gallery mode volume is then computed) or set \
         mode_volume_override explicitly"
    )]
    MissingModeVolume,

    #[error(
        "resonator below fundamental-mode cutoff: azimuthal order \
         round(2*pi*R*n/lambda) = {ell} < 1 for radius {radius_m} m"
    )]
    BelowModeCutoff { ell: i64, radius_m: f64 },

    #[error(
        "resonator spec ({field}) disagrees with the transition it is paired \
         with; for a monolithic resonator build the spec with \
         ResonatorSpec::for_transition"
    )]
    InconsistentResonator { field: &'static str },

    #[error(
        "critical-number cross-check failed: closed-form and rate-form values \
         of {name} differ by {rel:.3e} relative (> {tol:.1e})"
    )]
    CrossCheckFailed {
        name: &'static str,
        rel: f64,
        tol: f64,
    },

    #[error("time grids disagree: {message}")]
    GridMismatch { message: String },

    #[error(
        "time step {dt} too large for rates (max rate {rate}): need \
         max(kappa, g, max|Omega|)*dt <= 0.05, suggested dt <= {suggested}"
    )]
    StepTooLarge { dt: f64, rate: f64, suggested: f64 },

    #[error("driving-field cap exceeded at t = {t}: |Omega| = {omega} > {cap}")]
    OmegaCapExceeded { t: f64, omega: f64, cap: f64 },

    #[error(
        "synthesized driving field is not real at t = {t} \
         (|Im| fraction {im_fraction:.3e}); complex targets are not supported"
    )]
    NonRealControl { t: f64, im_fraction: f64 },

    #[error(
        "probe sampling too fine for the response grid: probe step {probe_dt} \
         implies bandwidth beyond the grid extent; need grid extent >= \
         {required_extent} rad/s (got {extent} rad/s)"
    )]
    ProbeBandwidth {
        probe_dt: f64,
        required_extent: f64,
        extent: f64,
    },

    #[error("probe does not fit in the response window: {message}")]
    ProbePlacement { message: String },

    #[error("{0}")]
    Usage(String),
}
