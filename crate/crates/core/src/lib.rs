//! Curvature-induced spectral data of conical surfaces with smooth
//! cross-sections.
//!
//! The pipeline: a cross-section loop on S² (or a prescribed curvature
//! profile) determines the operator −d²/ds² − κ²/4 on the circle of
//! circumference ℓ; its negative eigenvalues fix the accumulation constant
//! k_S = (1/2π)Σ√(−λ_j), the slope of the bound-state counting functions
//! of the reduced half-line models against |ln E|.
//!
//! ```
//! use cone_spectra_core::cross_section_operator::{
//!     accumulation_constant, assemble, eigenvalues,
//! };
//! use cone_spectra_core::sphere_curves::{geodesic_curvature, SphericalLoop};
//!
//! // A circular cone of opening angle π/2 has κ ≡ cot(π/4) = 1.
//! let profile = geodesic_curvature(&SphericalLoop::circle(std::f64::consts::FRAC_PI_4), 256)?;
//! let spectrum = eigenvalues(&assemble(&profile), 4)?;
//! assert!((spectrum.eigenvalues[0] + 0.25).abs() < 1e-8);
//!
//! let k_s = accumulation_constant(&spectrum)?.k_s;
//! assert!((k_s - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-8);
//! # Ok::<(), cone_spectra_core::Error>(())
//! ```

pub mod asymptotics;
pub mod cross_section_operator;
pub mod eigen;
pub mod error;
pub mod fitting;
pub mod interp;
pub mod point_interaction_models;
pub mod radial_counting;
pub mod sphere_curves;
pub mod vec3;

pub use error::{Error, Result};
