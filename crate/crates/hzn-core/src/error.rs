//! Error type shared by all evaluation routines.

use core::fmt;

/// Errors reported by series, quadrature and reduction routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A series or quadrature failed to meet its tolerance within budget.
    NonConvergent,
    /// A phased sum was requested with a phase within `1e-12` of an integer.
    DegeneratePhase,
    /// Input outside the domain of the requested function.
    DomainError(&'static str),
    /// Arguments too close to a degenerate configuration (e.g. `x == y`).
    DegenerateArguments,
    /// A slash-action transform hit a pole (`c x + d` vanished).
    PoleEncountered,
    /// Discriminant is not a fundamental discriminant.
    NotFundamentalDiscriminant,
    /// Quadratic irrational is not reduced (`w > 1 > w' > 0` fails).
    NotReduced,
    /// Plus continued fraction cycle cannot be split into the two wide sets.
    DegenerateCycle,
    /// Twist pair carries no exact rational representation.
    NonRationalInput,
    /// Twist pair fails the integrality test against `N(eps - 1)`.
    TwistNotInS,
    /// Field has a unit of norm -1; the class/conjugate pairing is refused.
    NormMinusOneField,
    /// Invalid configuration (violated invariant on a config struct).
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergent => write!(f, "series or quadrature did not converge within budget"),
            Error::DegeneratePhase => write!(f, "phase is integral within 1e-12"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::DegenerateArguments => write!(f, "arguments are degenerate (x too close to y)"),
            Error::PoleEncountered => write!(f, "slash action hit a pole (cx+d ~ 0)"),
            Error::NotFundamentalDiscriminant => write!(f, "not a fundamental discriminant"),
            Error::NotReduced => write!(f, "quadratic irrational is not reduced"),
            Error::DegenerateCycle => write!(f, "plus continued fraction cycle has odd period"),
            Error::NonRationalInput => write!(f, "twists must be exact rationals"),
            Error::TwistNotInS => write!(f, "twist pair is not in the admissible set for this field"),
            Error::NormMinusOneField => write!(f, "field has a unit of norm -1"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
