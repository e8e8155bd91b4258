//! Specific heat and effective densities of states of open quantum systems
//! coupled to harmonic-oscillator baths.
//!
//! The central object is the dissipative partition function
//!
//! ```text
//! Z = Tr_{S+B} e^{-beta H} / Tr_B e^{-beta H_B},
//! ```
//!
//! the ratio of the partition function of system plus bath to that of the
//! bath alone. The specific heat derived from it,
//! `C = k_B beta^2 d^2(ln Z)/d(beta^2)`, is the *difference*
//! `C = C_{S+B} - C_B` of two ordinary (positive) specific heats and may
//! itself become negative at low temperatures for sufficiently strong
//! coupling.
//!
//! The crate provides four routes to this quantity, each validating the
//! others:
//!
//! * [`minimal`] — closed forms for a system coupled to a *single* bath
//!   oscillator (free particle and harmonic oscillator), including the
//!   mass-ratio threshold above which the free-particle specific heat
//!   turns negative.
//! * [`drude`] — the Drude-damped free particle and harmonic oscillator:
//!   trigamma closed forms plus a truncated Matsubara-product evaluator
//!   that serves as an independent numerical oracle.
//! * [`bathdisc`] — explicit N-mode bath discretizations diagonalized
//!   exactly; the brute-force bridge between one bath mode and the
//!   continuum limit.
//! * [`dos`] — effective densities of states: exact weighted delta combs
//!   (with negative weights), branch-sum curves for the free minimal
//!   model, and numerical inversion of the Laplace transform for the
//!   Drude oscillator.
//!
//! # Units
//!
//! Internally `hbar = k_B = 1`. All frequencies are measured in units of a
//! caller-chosen reference frequency (the bath frequency `omega` for the
//! minimal models, the system frequency `Omega` or the cutoff `omega_D`
//! for Drude models, matching each figure's axis). Temperatures enter as
//! the dimensionless `theta = k_B T / (hbar omega_ref)`; specific heats
//! are returned in units of `k_B`.

pub mod bathdisc;
pub mod dos;
pub mod drude;
pub mod minimal;
pub mod specfun;

/// Errors shared by all modules of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller violated a documented precondition (bad parameter range,
    /// wrong model variant for the operation, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A special function was evaluated at one of its poles.
    #[error("{function} has a pole at z = {re} + {im}i")]
    Pole {
        function: &'static str,
        re: f64,
        im: f64,
    },

    /// A result that must be real up to numerical noise carried an
    /// imaginary residue above the documented bound. This signals a
    /// root-pairing or special-function defect, not a physics effect.
    #[error("{context}: imaginary residue {residue:e} exceeds {limit:e}")]
    ImaginaryResidue {
        context: &'static str,
        residue: f64,
        limit: f64,
    },

    /// An iterative scheme failed its convergence check.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A numerically inverted density of states changed by more than the
    /// allowed fraction of its peak when the apodization window was
    /// swapped, so its features cannot be trusted.
    #[error(
        "window sensitivity: density of states changed by {observed:e} \
         of peak between windows (limit {limit:e})"
    )]
    WindowSensitivity { observed: f64, limit: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// One sample of a specific-heat-vs-temperature curve.
///
/// `c_total` always realizes the difference `C = C_{S+B} - C_B`. For
/// models in which both constituents are finite (one or N explicit bath
/// modes), `c_coupled` and `c_bath` carry the two terms and
/// `c_total = c_coupled - c_bath` holds exactly by construction. For the
/// continuum Drude models the two terms are separately infinite and only
/// their difference is defined, so the fields are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCurvePoint {
    /// Dimensionless temperature `k_B T / (hbar omega_ref)`, > 0.
    pub theta: f64,
    /// `C / k_B` of the dissipative system (may be negative).
    pub c_total: f64,
    /// `C_{S+B} / k_B` of system plus bath, when finite; always >= 0.
    pub c_coupled: Option<f64>,
    /// `C_B / k_B` of the decoupled bath, when finite; always >= 0.
    pub c_bath: Option<f64>,
}

impl HeatCurvePoint {
    /// Builds a point from the two constituent specific heats, storing
    /// their difference as `c_total` (exact by construction).
    pub fn from_parts(theta: f64, c_coupled: f64, c_bath: f64) -> Self {
        Self {
            theta,
            c_total: c_coupled - c_bath,
            c_coupled: Some(c_coupled),
            c_bath: Some(c_bath),
        }
    }

    /// Builds a point for a model that only defines the difference.
    pub fn total_only(theta: f64, c_total: f64) -> Self {
        Self {
            theta,
            c_total,
            c_coupled: None,
            c_bath: None,
        }
    }
}
