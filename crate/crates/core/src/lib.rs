//! Numerical machinery for L²-indices of Dirac operators of Dirac-type
//! singular monopoles on ℝ³.
//!
//! The library is organized around the decomposition of the problem:
//!
//! * [`model`] — configurations of superposed abelian Dirac monopoles
//!   (singular points with integer weight vectors, asymptotic mass data)
//!   and samplers for the explicit model fields.
//! * [`sphere`] — the Dirac operator on S² twisted by O(k): the analytic
//!   eigenvalue law n = q² + |k|q, kernel dimensions, and a per-sector
//!   colatitude discretization that cross-checks both.
//! * [`radial`] — per-angular-mode radial analysis on (0, r₀]: 2×2 mode
//!   operators A/r + B, closed-form kernel exponents, the integral
//!   operator K_α, the Green operator G±, and shooting-based Fredholm
//!   indices.
//! * [`equivariant`] — exact evaluation of the S¹ fixed-point index
//!   formula through Laurent-polynomial division, plus an independent
//!   quadrature route.
//! * [`chern`] — plaquette Chern numbers of the boundary eigenbundle
//!   splitting V± on a meshed sphere.
//! * [`index`] — the index formulas themselves (compact and
//!   complete-with-boundary cases) and their cross-verifications.
//! * [`hopf`] — pointwise verification of the monopole↔instanton
//!   correspondence through the Hopf map, including the Clifford algebra
//!   identities and the Dirac intertwining relation.
//!
//! All computations are pure functions of immutable inputs; per-mode and
//! per-sector work is embarrassingly parallel.

pub mod acceptance;
pub mod chern;
pub mod equivariant;
pub mod error;
pub mod hopf;
pub mod index;
pub mod model;
pub mod numerics;
pub mod radial;
pub mod sphere;

pub use error::CoreError;
