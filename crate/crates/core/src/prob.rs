//! Exact arithmetic of contextual probabilities for dichotomous observables.
//!
//! A [`TransitionMatrix`] stores `p(β/α)` as `entries[β][α]`: rows are the
//! result, columns the condition, so every column is a distribution.

use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance for normalization and column stochasticity at construction.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Default tolerance for [`TransitionMatrix::is_double_stochastic`].
pub const DOUBLE_STOCHASTIC_TOL: f64 = 1e-9;

/// Rounding slack accepted on interference results before they are rejected
/// as out of range. Values inside the slack are snapped onto `[0, 1]`.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// Value of a dichotomous observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    /// `+1`
    Plus,
    /// `-1`
    Minus,
}

impl Sign {
    /// Both values, `+` first. Matches matrix index order.
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// `+1.0` or `-1.0`.
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Storage index: `+` is 0, `-` is 1.
    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    /// The other value.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = &'static str;

    fn try_from(v: i8) -> core::result::Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err("sign must be +1 or -1"),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn check_probability(value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { value })
    }
}

/// Probabilities of `+1` and `-1` for a dichotomous observable in a context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution")]
pub struct BinaryDistribution {
    p_plus: f64,
    p_minus: f64,
}

#[derive(Deserialize)]
struct RawDistribution {
    p_plus: f64,
    p_minus: f64,
}

impl TryFrom<RawDistribution> for BinaryDistribution {
    type Error = Error;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        BinaryDistribution::new(raw.p_plus, raw.p_minus)
    }
}

impl BinaryDistribution {
    /// The uniform distribution `(1/2, 1/2)`.
    pub const UNIFORM: BinaryDistribution = BinaryDistribution { p_plus: 0.5, p_minus: 0.5 };

    /// Validates both entries and their sum.
    pub fn new(p_plus: f64, p_minus: f64) -> Result<Self> {
        let ok = p_plus.is_finite()
            && p_minus.is_finite()
            && (0.0..=1.0).contains(&p_plus)
            && (0.0..=1.0).contains(&p_minus)
            && (p_plus + p_minus - 1.0).abs() <= NORMALIZATION_TOL;
        if ok {
            Ok(BinaryDistribution { p_plus, p_minus })
        } else {
            Err(Error::InvalidDistribution { p_plus, p_minus })
        }
    }

    /// `(p, 1 − p)`.
    pub fn from_plus(p_plus: f64) -> Result<Self> {
        if !(p_plus.is_finite() && (0.0..=1.0).contains(&p_plus)) {
            return Err(Error::InvalidDistribution { p_plus, p_minus: 1.0 - p_plus });
        }
        Ok(BinaryDistribution { p_plus, p_minus: 1.0 - p_plus })
    }

    /// Filtration context: the observable takes `value` with probability 1.
    pub fn filtration(value: Sign) -> Self {
        match value {
            Sign::Plus => BinaryDistribution { p_plus: 1.0, p_minus: 0.0 },
            Sign::Minus => BinaryDistribution { p_plus: 0.0, p_minus: 1.0 },
        }
    }

    /// Probability of `+1`.
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    /// Probability of `-1`.
    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    /// Probability of `value`.
    pub fn get(&self, value: Sign) -> f64 {
        match value {
            Sign::Plus => self.p_plus,
            Sign::Minus => self.p_minus,
        }
    }
}

/// 2×2 matrix of conditional probabilities `p(β/α)`, stored `entries[β][α]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct TransitionMatrix {
    entries: [[f64; 2]; 2],
}

#[derive(Deserialize)]
struct RawMatrix {
    entries: [[f64; 2]; 2],
}

impl TryFrom<RawMatrix> for TransitionMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        TransitionMatrix::new(raw.entries)
    }
}

impl TransitionMatrix {
    /// Every entry `1/2`.
    pub const UNIFORM: TransitionMatrix = TransitionMatrix { entries: [[0.5; 2]; 2] };

    /// Validates entries and column sums. `entries[β][α] = p(β/α)`.
    pub fn new(entries: [[f64; 2]; 2]) -> Result<Self> {
        for row in &entries {
            for &p in row {
                check_probability(p)?;
            }
        }
        for condition in Sign::ALL {
            let a = condition.index();
            let sum = entries[0][a] + entries[1][a];
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidMatrix { condition, sum });
            }
        }
        Ok(TransitionMatrix { entries })
    }

    /// Builds the matrix from the conditional distributions `p(·/+)` and `p(·/−)`.
    pub fn from_columns(given_plus: BinaryDistribution, given_minus: BinaryDistribution) -> Self {
        TransitionMatrix {
            entries: [[given_plus.p_plus, given_minus.p_plus], [given_plus.p_minus, given_minus.p_minus]],
        }
    }

    /// `p(result/condition)`.
    pub fn get(&self, result: Sign, condition: Sign) -> f64 {
        self.entries[result.index()][condition.index()]
    }

    /// Raw storage, rows indexed by result.
    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.entries
    }

    /// The conditional distribution `p(·/condition)`.
    pub fn column(&self, condition: Sign) -> BinaryDistribution {
        let a = condition.index();
        BinaryDistribution { p_plus: self.entries[0][a], p_minus: self.entries[1][a] }
    }

    /// `p(result/+) + p(result/−)`.
    pub fn row_sum(&self, result: Sign) -> f64 {
        let row = self.entries[result.index()];
        row[0] + row[1]
    }

    /// Largest `|row sum − 1|`.
    pub fn row_residual(&self) -> f64 {
        Sign::ALL.iter().map(|&s| (self.row_sum(s) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest `|column sum − 1|`.
    pub fn column_residual(&self) -> f64 {
        Sign::ALL
            .iter()
            .map(|&c| (self.entries[0][c.index()] + self.entries[1][c.index()] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// True iff every row also sums to one within `tol`.
    pub fn is_double_stochastic(&self, tol: f64) -> bool {
        self.row_residual() <= tol
    }

    /// Largest entry-wise absolute difference.
    pub fn max_abs_diff(&self, other: &TransitionMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).abs());
            }
        }
        worst
    }

    /// True iff every entry is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().flatten().all(|&p| p > 0.0)
    }
}

/// Free-function form of [`TransitionMatrix::is_double_stochastic`].
pub fn is_double_stochastic(transition: &TransitionMatrix, tol: f64) -> bool {
    transition.is_double_stochastic(tol)
}

/// Classification of an incompatibility coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regime {
    /// `|λ| ≤ 1`; `λ = cos θ` with `θ ∈ [0, π]`.
    Trigonometric {
        /// Statistical phase in radians.
        theta: f64,
    },
    /// `|λ| > 1`.
    Hyperbolic,
    /// One of the four factors under the square root vanishes; λ is undefined.
    DegenerateDenominator,
}

/// The coefficient of statistical incompatibility λ(β/a, C) and its regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceCoefficient {
    /// `None` exactly when the regime is [`Regime::DegenerateDenominator`].
    pub lambda: Option<f64>,
    /// Regime implied by `lambda`.
    pub regime: Regime,
}

impl InterferenceCoefficient {
    /// Classifies a finite λ.
    pub fn from_lambda(lambda: f64) -> Self {
        let regime =
            if lambda.abs() <= 1.0 { Regime::Trigonometric { theta: libm::acos(lambda) } } else { Regime::Hyperbolic };
        InterferenceCoefficient { lambda: Some(lambda), regime }
    }

    /// λ with no value.
    pub fn degenerate() -> Self {
        InterferenceCoefficient { lambda: None, regime: Regime::DegenerateDenominator }
    }

    /// The statistical phase in the trigonometric regime.
    pub fn theta(&self) -> Option<f64> {
        match self.regime {
            Regime::Trigonometric { theta } => Some(theta),
            _ => None,
        }
    }
}

/// `cos θ` evaluated as `sin(π/2 − θ)`, which is exact at `0`, `π/2` and `π`.
pub fn phase_cosine(theta: f64) -> f64 {
    libm::sin(FRAC_PI_2 - theta)
}

/// The classical formula of total probability
/// `p(+)·p(β/+) + p(−)·p(β/−)`.
pub fn classical_total_probability(prior: &BinaryDistribution, transition: &TransitionMatrix, beta: Sign) -> f64 {
    prior.p_plus * transition.get(beta, Sign::Plus) + prior.p_minus * transition.get(beta, Sign::Minus)
}

/// The four factors `p(+), p(β/+), p(−), p(β/−)` under the interference square root.
fn interference_factors(prior: &BinaryDistribution, transition: &TransitionMatrix, beta: Sign) -> [f64; 4] {
    [prior.p_plus, transition.get(beta, Sign::Plus), prior.p_minus, transition.get(beta, Sign::Minus)]
}

/// `2·√(p(+)·p(β/+)·p(−)·p(β/−))`, the magnitude of the interference term at
/// `cos θ = 1` and the denominator of λ.
pub fn interference_scale(prior: &BinaryDistribution, transition: &TransitionMatrix, beta: Sign) -> f64 {
    let product: f64 = interference_factors(prior, transition, beta).iter().product();
    2.0 * libm::sqrt(product)
}

/// Coefficient of statistical incompatibility for an observed probability.
///
/// Returns the [`Regime::DegenerateDenominator`] regime, not an error, when a
/// factor under the square root is zero.
pub fn incompatibility_coefficient(
    observed: f64,
    prior: &BinaryDistribution,
    transition: &TransitionMatrix,
    beta: Sign,
) -> Result<InterferenceCoefficient> {
    check_probability(observed)?;
    if interference_factors(prior, transition, beta).contains(&0.0) {
        return Ok(InterferenceCoefficient::degenerate());
    }
    let classical = classical_total_probability(prior, transition, beta);
    let lambda = (observed - classical) / interference_scale(prior, transition, beta);
    Ok(InterferenceCoefficient::from_lambda(lambda))
}

/// The interference form of total probability,
/// `p(+)p(β/+) + p(−)p(β/−) + 2 cos θ √(p(+)p(β/+)p(−)p(β/−))`.
///
/// Fails with [`Error::OutOfRangeProbability`] instead of clamping when the
/// result leaves `[0, 1]` by more than [`ROUNDING_SLACK`].
pub fn interference_probability(
    prior: &BinaryDistribution,
    transition: &TransitionMatrix,
    beta: Sign,
    theta: f64,
) -> Result<f64> {
    if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
        return Err(Error::InvalidPhase { theta });
    }
    let value = classical_total_probability(prior, transition, beta)
        + phase_cosine(theta) * interference_scale(prior, transition, beta);
    if !(-ROUNDING_SLACK..=1.0 + ROUNDING_SLACK).contains(&value) {
        return Err(Error::OutOfRangeProbability { value });
    }
    Ok(value.clamp(0.0, 1.0))
}
