use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate dispersion roots at omega = {omega:e} rad/s")]
    DegenerateRoot { omega: f64 },
    #[error("group velocity undefined at omega = {omega:e} rad/s, k = {k:e} rad/m")]
    ZeroDenominator { omega: f64, k: f64 },
    #[error("two propagating modes share Re Omega = {big_omega:e} rad/s")]
    LabelAmbiguity { big_omega: f64 },
    #[error("omega = {omega:e} rad/s lies within the guard band of interval edge {edge:e} rad/s")]
    BoundaryFrequency { omega: f64, edge: f64 },
    #[error("no horizon interval exists for this step")]
    NoHorizon,
    #[error("on-shell null space has dimension {dim} at omega = {omega:e} rad/s")]
    NullSpaceDimension { omega: f64, dim: usize },
    #[error("mode at omega = {omega:e} rad/s is within the guard band of resonance {resonance:e} rad/s")]
    NearResonance { omega: f64, resonance: f64 },
    #[error("local mode basis is singular (condition number {cond:e})")]
    SingularBasis { cond: f64 },
    #[error("flux census inconsistent with scenario at omega = {omega:e} rad/s: {detail}")]
    InconsistentScenario { omega: f64, detail: String },
    #[error("sigma_out is not invertible at omega = {omega:e} rad/s")]
    SigmaSingular { omega: f64 },
    #[error("grid too coarse: relative change {change:.3} between adjacent points near omega = {omega:e} rad/s")]
    GridTooCoarse { omega: f64, change: f64 },
    #[error("narrowband assumption violated: relative variation {variation:.3e}")]
    NarrowbandViolated { variation: f64 },
    #[error("laboratory group velocity is zero")]
    ZeroGroupVelocity,
    #[error("wavelength {lambda:e} m maps to no out mode")]
    NoContribution { lambda: f64 },
    #[error("root scan range too narrow: {0}")]
    RangeTooNarrow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
