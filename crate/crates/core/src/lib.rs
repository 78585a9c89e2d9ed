//! Symbolic-numeric toolkit for complex contact forms on `C^{2n+1}`.
//!
//! * [`form`]: exterior algebra with mixed `dz`/`dz̄` covectors over exact
//!   Laurent or expression-tree coefficients.
//! * [`contact`]: contact, formal-contact and interpolation-pencil checks,
//!   and the Pfaffian expansion of `β^n`.
//! * [`jet`]: the first-order relation controlling the contact condition and
//!   its slice classification.
//! * [`dbar`]: `∂̄`-flat extension from the real slice and asymptotic
//!   holomorphy checks.
//! * [`ci`]: a grid convex-integration solver with an independent verifier.
//! * [`gallery`]: the closed-form contact families with their identities.
//!
//! Coordinates `(x, y, z)` of `C^3` are always `(z1, z2, z3)`.

pub mod ample;
pub mod ci;
pub mod cli;
pub mod coeff;
pub mod contact;
pub mod dbar;
pub mod error;
pub mod expr;
pub mod fit;
pub mod form;
pub mod gallery;
pub mod grid;
pub mod io;
pub mod jet;
pub mod laurent;
pub mod polymap;
pub mod report;
pub mod scalar;

pub use coeff::{Coeff, Evaluate, Point};
pub use error::{Error, Result};
pub use expr::Expr;
pub use form::{ExprForm, Form, LaurentForm};
pub use laurent::{Laurent, Monomial};
pub use polymap::PolyMap;
pub use report::VerificationReport;
pub use scalar::{GaussRational, Ring, Scalar};
pub use num_complex::Complex64;
