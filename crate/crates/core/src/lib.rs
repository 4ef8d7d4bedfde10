//! Space-localized orthonormal bases for band-limited functions on the sphere.
//!
//! The basis functions `ψ_{k,i}` are the eigenfunctions of `P M P`, where `P`
//! projects onto spherical harmonics of degree `m..=n` and `M` multiplies by
//! `cos θ`. Each order `k` contributes one symmetric tridiagonal block whose
//! eigenvalues `x_{|k|,i}` locate `ψ_{k,i}` near the latitude `arccos x`.

pub mod approximation;
pub mod error;
pub mod jacobi_blocks;
pub mod perf;
pub mod sphere_basis;
pub mod transform;
pub mod ultraspherical;

pub use error::{Error, Result};
pub use jacobi_blocks::{EigenBlock, EigenSystem, JacobiBlock};
pub use sphere_basis::{BandParams, HarmonicCoeffs, LocalizedCoeffs, SphereGrid};
pub use ultraspherical::{ConnectionMatrix, UltrasphericalFamily};
pub use transform::{Mode, NdctMode, TransformPlan};
