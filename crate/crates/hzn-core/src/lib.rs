//! Numerical kernel for higher Herglotz-Zagier-Novikov functions and twisted
//! zeta values of real quadratic fields.
//!
//! The crate is organized around five building blocks:
//!
//! * [`numerics`] — deterministic summation (phased summation by parts with
//!   compensated accumulation) and Gauss-Legendre quadrature on panels and on
//!   the half line.
//! * [`special`] — integer-order polylogarithms on the closed unit disk,
//!   double polylogarithms, digamma/polygamma, and the Lerch-type series
//!   `psi_beta(x) = sum_{q>=0} e^{2 pi i beta q} / (x + q)`.
//! * [`herglotz`] — the two-variable twisted family
//!   `F_k(x; alpha, beta) = sum e^{2 pi i (alpha p + beta q)} / (p^{k-1} (p x + q))`,
//!   its derivatives, asymptotic expansions, classical degenerations, the
//!   binomial-weighted difference operator `D_n`, and the weight-2k cocycle
//!   function built from the (2k-1)st derivative.
//! * [`quadfield`] — exact reduction theory: quadratic irrationals, minus and
//!   plus continued fractions, narrow class cycles, fundamental units, and
//!   indefinite forms of discriminant one.
//! * [`zeta`] — twisted zeta functions of forms and narrow classes, evaluated
//!   both as double series and through the limit-formula route, generalized
//!   Dedekind eta / Eisenstein series, and rational zeta-value combinations.
//!
//! `no_std` builds (with `alloc`) are supported by disabling the default
//! `std` feature; float math is then routed through `libm`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod herglotz;
pub mod numerics;
pub mod quadfield;
pub mod special;
pub mod zeta;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, SeriesConfig};

/// Re-export of the complex scalar type used throughout.
pub use num_complex::Complex64;
