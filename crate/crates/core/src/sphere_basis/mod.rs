//! Spherical harmonics, coefficient containers, quadrature grids and the
//! localized basis functions `ψ_{k,i}`.

mod coeffs;
mod grid;
mod harmonics;
pub mod io;
mod params;

pub use coeffs::{HarmonicCoeffs, LocalizedCoeffs};
pub use grid::{evaluate_on, gauss_legendre, latitude_profile, SphereGrid};
pub use harmonics::{
    epsilon, eval_psi, eval_sph_harmonic, harmonic_column, psi_coefficients, transition_apply,
};
pub use params::BandParams;


