//! Radially symmetric damped-wave and degenerate-heat solvers on an exterior
//! annulus, with self-similar weight functions built from Kummer's confluent
//! hypergeometric functions, and the weighted energy decay / diffusion
//! phenomena diagnostics that go with them.
//!
//! The model is the damped wave equation
//!   u_tt - Lap u + |x|^{-alpha} u_t = 0,  alpha in [0, 1),
//! on r > r_inner in dimension N >= 2 with Dirichlet boundary, next to its
//! diffusion limit v_t = |x|^alpha Lap v. The weight family
//!   Phi_beta(x, t) = t^{-beta} phi_beta(|x|^{2-alpha}/((2-alpha)^2 t)),
//!   phi_beta(s) = e^{-s} M((N-a)/(2-a) - beta, (N-a)/(2-a); s),
//! solves the degenerate heat equation exactly and powers both the weighted
//! energy functionals and their verification suites.
//!
//! Module map: [`special`] (Gamma, Kummer M/U, phi_beta), [`weights`]
//! (Psi/Phi and their identities), [`grid`] + [`initial_data`] (geometry,
//! quadrature, data families), [`wave`] / [`heat`] (solvers),
//! [`diagnostics`] (energies, Hardy, fits, diffusion gap), [`experiment`]
//! (config + reproducible runs), [`verify`] (the acceptance checks behind
//! `decaylab verify`).

pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod grid;
pub mod heat;
pub mod initial_data;
pub mod quad;
pub mod special;
pub mod verify;
pub mod wave;
pub mod weights;

pub use error::{Error, Result};
