//! Analytic scattering matrix of a moving refractive-index step in a three-resonance
//! Sellmeier dielectric, with the derived spontaneous emission spectra and correlations.
//!
//! ```
//! use rifscat::{medium::velocity_matched, observables::spectrum_point, scattering::Solver, Medium, Step};
//!
//! let m = Medium::fused_silica();
//! let u = velocity_matched(&m, 400e-9)?;
//! let solver = Solver::new(Step::new(m, 2e-6, u)?);
//! let whi = solver.intervals.as_ref().unwrap().whi.unwrap();
//! let s = solver.scatter(0.5 * (whi.0 + whi.1))?;
//! assert_eq!(s.scenario.case.to_string(), "b");
//! assert!(s.quasi_unitarity_residual < 1e-8);
//! assert!(!spectrum_point(&s).flux_per_mode.is_empty());
//! # Ok::<(), rifscat::Error>(())
//! ```

pub mod error;
pub mod medium;
pub mod modes;
pub mod num;
pub mod observables;
pub mod scattering;
pub mod verification;

pub use error::{Error, Result};
pub use num::{Real, C_LIGHT};

pub type Medium = medium::MediumSpec<f64>;
pub type Step = medium::StepConfig<f64>;
