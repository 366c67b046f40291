use crate::prob::Sign;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Validation and consistency failures.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// A value that must be a probability is outside `[0, 1]` or not finite.
    #[error("{value} is not a probability in [0, 1]")]
    InvalidProbability {
        /// Offending value.
        value: f64,
    },

    /// A binary distribution does not sum to one.
    #[error(
        "distribution ({p_plus}, {p_minus}) violates normalization: \
         entries must lie in [0, 1] and sum to 1 within 1e-12"
    )]
    InvalidDistribution {
        /// Probability of `+1`.
        p_plus: f64,
        /// Probability of `-1`.
        p_minus: f64,
    },

    /// A column of a transition matrix is not a distribution.
    #[error(
        "transition matrix column {condition} sums to {sum}: \
         conditional probabilities p(·/α) must sum to 1 within 1e-12"
    )]
    InvalidMatrix {
        /// Conditioning value of the offending column.
        condition: Sign,
        /// Observed column sum.
        sum: f64,
    },

    /// The interference form produced a value outside `[0, 1]`.
    #[error(
        "interference formula yields {value}, outside [0, 1]: \
         the phase is inconsistent with the prior and transition matrix"
    )]
    OutOfRangeProbability {
        /// Value the formula produced.
        value: f64,
    },

    /// A statistical phase outside `[0, π]`.
    #[error("phase {theta} rad lies outside [0, π]")]
    InvalidPhase {
        /// Offending phase.
        theta: f64,
    },

    /// A parametrization angle outside the open interval `(0, π/2)`.
    #[error("angle {name} = {value} rad lies outside the open interval (0, π/2)")]
    AngleOutOfRange {
        /// Which angle (`xi` or `eta`).
        name: &'static str,
        /// Offending value in radians.
        value: f64,
    },

    /// Interference signs that are not `±1` or do not satisfy `cos θ₊ = −cos θ₋`.
    #[error(
        "sign convention (cos θ+ = {cos_theta_plus}, cos θ- = {cos_theta_minus}) \
         must take values in {{-1, +1}} with cos θ+ = -cos θ-"
    )]
    InvalidSignConvention {
        /// Supplied `cos θ₊`.
        cos_theta_plus: f64,
        /// Supplied `cos θ₋`.
        cos_theta_minus: f64,
    },

    /// Maximal interference `|cos θ±| = 1` does not hold.
    #[error(
        "maximal interference requires |cos θ+| = |cos θ-| = 1, \
         got ({cos_theta_plus}, {cos_theta_minus})"
    )]
    PreconditionViolation {
        /// Supplied `cos θ₊`.
        cos_theta_plus: f64,
        /// Supplied `cos θ₋`.
        cos_theta_minus: f64,
    },

    /// A trial count of zero.
    #[error("trial count must be at least 1")]
    InvalidCount,
}
