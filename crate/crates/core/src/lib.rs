//! Exact construction and verification of the solid spherical harmonics of
//! the sublaplacian `L_α` on the Heisenberg group `H₁`, alongside the
//! classical Gegenbauer / R³ counterparts.
//!
//! * [`exactnum`]: arithmetic in Q(i), Pochhammer symbols, binomials.
//! * [`hpoly`]: polynomials in `(z, z̄, t)` and the left-invariant vector fields.
//! * [`specfun`]: terminating ₂F₁, Euler transformation, Gegenbauer polynomials.
//! * [`harmonics`]: the `L_α`-harmonics by several independent routes.
//! * [`classical`]: R³ harmonics, Laplacian, Gauss–Legendre quadrature.
//! * [`verify`]: per-index verification reports used by the CLI.

pub mod classical;
pub mod error;
pub mod exactnum;
pub mod harmonics;
pub mod hpoly;
pub mod linalg;
pub mod par;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{GaussianRational, Rational};
pub use harmonics::HarmonicIndex;
pub use hpoly::{HMonomial, HPoint, HPolynomial};
pub use specfun::UnivariatePoly;
