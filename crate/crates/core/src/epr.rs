//! EPR-Bohm conditionals as maximal interference.
//!
//! Transition matrices are parametrized by two angles:
//! `p^{a/c}(+/+) = cos² ξ` and `p^{b/a}(+/+) = sin² η`, both doubly stochastic.
//! Feeding them through the interference form of total probability with
//! `|cos θ±| = 1`, `cos θ₊ = −cos θ₋` and the phases of the `c = −1` context
//! fixed by `cos θ̃± = −cos θ±` yields `p^{b/c}(β/γ)` equal to `sin²(ξ−η)` on
//! the diagonal and `cos²(ξ−η)` off it.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use serde::{Deserialize, Serialize};

use crate::prob::{interference_probability, BinaryDistribution, Sign, TransitionMatrix};
use crate::{Error, Result};

/// Residual bound used by the lemma verifiers.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Parametrization angles `(ξ, η)`, each strictly inside `(0, π/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAngles")]
pub struct AnglePair {
    xi: f64,
    eta: f64,
}

#[derive(Deserialize)]
struct RawAngles {
    xi: f64,
    eta: f64,
}

impl TryFrom<RawAngles> for AnglePair {
    type Error = Error;

    fn try_from(raw: RawAngles) -> Result<Self> {
        AnglePair::new(raw.xi, raw.eta)
    }
}

fn check_open_quadrant(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 && value < FRAC_PI_2 {
        Ok(value)
    } else {
        Err(Error::AngleOutOfRange { name, value })
    }
}

impl AnglePair {
    /// Angles in radians.
    pub fn new(xi: f64, eta: f64) -> Result<Self> {
        Ok(AnglePair { xi: check_open_quadrant("xi", xi)?, eta: check_open_quadrant("eta", eta)? })
    }

    /// Angles in degrees.
    pub fn from_degrees(xi: f64, eta: f64) -> Result<Self> {
        AnglePair::new(xi.to_radians(), eta.to_radians())
    }

    /// ξ, with `p^{a/c}(+/+) = cos² ξ`.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// η, with `p^{b/a}(+/+) = sin² η`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `ξ − η`.
    pub fn difference(&self) -> f64 {
        self.xi - self.eta
    }

    /// `(η, ξ)`.
    pub fn swapped(&self) -> Self {
        AnglePair { xi: self.eta, eta: self.xi }
    }
}

/// Maximal-interference signs `(cos θ₊, cos θ₋)` for the `c = +1` context.
///
/// The default is `(−1, +1)`; `(+1, −1)` replaces `ξ − η` by `ξ + η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSigns")]
pub struct SignConvention {
    cos_theta_plus: f64,
    cos_theta_minus: f64,
}

#[derive(Deserialize)]
struct RawSigns {
    cos_theta_plus: f64,
    cos_theta_minus: f64,
}

impl TryFrom<RawSigns> for SignConvention {
    type Error = Error;

    fn try_from(raw: RawSigns) -> Result<Self> {
        SignConvention::new(raw.cos_theta_plus, raw.cos_theta_minus)
    }
}

impl Default for SignConvention {
    fn default() -> Self {
        SignConvention { cos_theta_plus: -1.0, cos_theta_minus: 1.0 }
    }
}

impl SignConvention {
    /// Both values must be exactly `±1` and opposite.
    pub fn new(cos_theta_plus: f64, cos_theta_minus: f64) -> Result<Self> {
        let unit = |v: f64| v == 1.0 || v == -1.0;
        if unit(cos_theta_plus) && unit(cos_theta_minus) && cos_theta_plus == -cos_theta_minus {
            Ok(SignConvention { cos_theta_plus, cos_theta_minus })
        } else {
            Err(Error::InvalidSignConvention { cos_theta_plus, cos_theta_minus })
        }
    }

    /// The other admissible choice.
    pub fn opposite(&self) -> Self {
        SignConvention { cos_theta_plus: self.cos_theta_minus, cos_theta_minus: self.cos_theta_plus }
    }

    /// `cos θ₊`.
    pub fn cos_theta_plus(&self) -> f64 {
        self.cos_theta_plus
    }

    /// `cos θ₋`.
    pub fn cos_theta_minus(&self) -> f64 {
        self.cos_theta_minus
    }

    /// `θ₊ ∈ {0, π}`.
    pub fn theta_plus(&self) -> f64 {
        libm::acos(self.cos_theta_plus)
    }

    /// `θ₋ = π − θ₊`.
    pub fn theta_minus(&self) -> f64 {
        PI - self.theta_plus()
    }

    fn phases(&self, tilde: TildePhases) -> Phases {
        let plus = self.theta_plus();
        let minus = self.theta_minus();
        match tilde {
            TildePhases::Consistent => Phases { plus, minus, tilde_plus: PI - plus, tilde_minus: PI - minus },
            TildePhases::EqualToSelection => Phases { plus, minus, tilde_plus: plus, tilde_minus: minus },
        }
    }
}

/// How the phases `θ̃±` of the `c = −1` context are set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TildePhases {
    /// `cos θ̃± = −cos θ±`.
    #[default]
    Consistent,
    /// `θ̃± = θ±`. Deliberately wrong; used to exercise the negative case.
    EqualToSelection,
}

struct Phases {
    plus: f64,
    minus: f64,
    tilde_plus: f64,
    tilde_minus: f64,
}

/// `P^{b/a}`, `P^{a/c}` and `P^{b/c}` of one model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalMatrixSet {
    /// `p^{b/a}(β/α)`.
    pub p_ba: TransitionMatrix,
    /// `p^{a/c}(α/γ)`.
    pub p_ac: TransitionMatrix,
    /// `p^{b/c}(β/γ)`.
    pub p_bc: TransitionMatrix,
}

impl ConditionalMatrixSet {
    /// The parametrized matrices together with the closed-form `P^{b/c}`.
    pub fn from_angles(angles: &AnglePair) -> Self {
        let (p_ac, p_ba) = matrices_from_angles(angles);
        ConditionalMatrixSet { p_ba, p_ac, p_bc: epr_bohm_probabilities(angles) }
    }
}

fn symmetric(diagonal: f64, off_diagonal: f64) -> TransitionMatrix {
    TransitionMatrix::from_columns(
        BinaryDistribution::new(diagonal, off_diagonal).expect("sin² + cos² = 1"),
        BinaryDistribution::new(off_diagonal, diagonal).expect("sin² + cos² = 1"),
    )
}

fn sin2(x: f64) -> f64 {
    let s = libm::sin(x);
    s * s
}

fn cos2(x: f64) -> f64 {
    let c = libm::cos(x);
    c * c
}

/// `(P^{a/c}, P^{b/a})` with `p^{a/c}(+/+) = cos² ξ` and `p^{b/a}(+/+) = sin² η`.
pub fn matrices_from_angles(angles: &AnglePair) -> (TransitionMatrix, TransitionMatrix) {
    let p_ac = symmetric(cos2(angles.xi), sin2(angles.xi));
    let p_ba = symmetric(sin2(angles.eta), cos2(angles.eta));
    (p_ac, p_ba)
}

/// Closed-form `P^{b/c}` for an arbitrary real difference `Δ = ξ − η`:
/// `sin² Δ` on the diagonal, `cos² Δ` off it.
pub fn epr_bohm_from_difference(delta: f64) -> TransitionMatrix {
    symmetric(sin2(delta), cos2(delta))
}

/// Closed-form EPR-Bohm conditionals `p^{b/c}(β/γ)`.
pub fn epr_bohm_probabilities(angles: &AnglePair) -> TransitionMatrix {
    epr_bohm_from_difference(angles.difference())
}

/// Raw interference values `[[p(+/+), p(+/−)], [p(−/+), p(−/−)]]` of `P^{b/c}`.
fn interference_entries(angles: &AnglePair, phases: &Phases) -> Result<[[f64; 2]; 2]> {
    let (p_ac, p_ba) = matrices_from_angles(angles);
    let selected_plus = p_ac.column(Sign::Plus);
    let selected_minus = p_ac.column(Sign::Minus);
    Ok([
        [
            interference_probability(&selected_plus, &p_ba, Sign::Plus, phases.plus)?,
            interference_probability(&selected_minus, &p_ba, Sign::Plus, phases.tilde_plus)?,
        ],
        [
            interference_probability(&selected_plus, &p_ba, Sign::Minus, phases.minus)?,
            interference_probability(&selected_minus, &p_ba, Sign::Minus, phases.tilde_minus)?,
        ],
    ])
}

/// `P^{b/c}` built entry by entry from the interference form of total
/// probability, with selection priors taken from the columns of `P^{a/c}`.
///
/// With the default signs this agrees with [`epr_bohm_probabilities`].
pub fn reconstruct_via_interference(angles: &AnglePair, signs: &SignConvention) -> Result<TransitionMatrix> {
    reconstruct_with_tilde(angles, signs, TildePhases::Consistent)
}

/// [`reconstruct_via_interference`] with an explicit rule for `θ̃±`.
pub fn reconstruct_with_tilde(
    angles: &AnglePair,
    signs: &SignConvention,
    tilde: TildePhases,
) -> Result<TransitionMatrix> {
    TransitionMatrix::new(interference_entries(angles, &signs.phases(tilde))?)
}

/// `|p^{b/c}(+/+) + p^{b/c}(−/+) − 1|` for arbitrary maximal-interference signs.
pub fn lemma1_residual(angles: &AnglePair, cos_theta_plus: f64, cos_theta_minus: f64) -> Result<f64> {
    let unit = |v: f64| (v.abs() - 1.0).abs() <= IDENTITY_TOL;
    if !(unit(cos_theta_plus) && unit(cos_theta_minus)) {
        return Err(Error::PreconditionViolation { cos_theta_plus, cos_theta_minus });
    }
    let (p_ac, p_ba) = matrices_from_angles(angles);
    let prior = p_ac.column(Sign::Plus);
    let theta = |c: f64| libm::acos(c.clamp(-1.0, 1.0));
    let plus = interference_probability(&prior, &p_ba, Sign::Plus, theta(cos_theta_plus))?;
    let minus = interference_probability(&prior, &p_ba, Sign::Minus, theta(cos_theta_minus))?;
    Ok((plus + minus - 1.0).abs())
}

/// True iff the `c = +1` column normalizes, which under maximal interference
/// happens exactly when `cos θ₊ = −cos θ₋`.
pub fn verify_lemma1(angles: &AnglePair, cos_theta_plus: f64, cos_theta_minus: f64) -> Result<bool> {
    Ok(lemma1_residual(angles, cos_theta_plus, cos_theta_minus)? <= IDENTITY_TOL)
}

/// Largest `|row sum − 1|` of the reconstructed `P^{b/c}`.
pub fn lemma2_residual(angles: &AnglePair, signs: &SignConvention, tilde: TildePhases) -> f64 {
    let entries = interference_entries(angles, &signs.phases(tilde))
        .expect("maximal interference terms are perfect squares in [0, 1]");
    entries.iter().map(|row| (row[0] + row[1] - 1.0).abs()).fold(0.0, f64::max)
}

/// True iff the reconstructed `P^{b/c}` is doubly stochastic within 1e-12.
pub fn verify_lemma2(angles: &AnglePair, signs: &SignConvention, tilde: TildePhases) -> bool {
    lemma2_residual(angles, signs, tilde) <= IDENTITY_TOL
}

/// `E(bc) = Σ β γ p^{b/c}(β/γ) p(c = γ)` for a conditional matrix.
pub fn correlation_from_matrix(p_bc: &TransitionMatrix, marginal_c: &BinaryDistribution) -> f64 {
    let mut e = 0.0;
    for gamma in Sign::ALL {
        for beta in Sign::ALL {
            e += beta.value() * gamma.value() * p_bc.get(beta, gamma) * marginal_c.get(gamma);
        }
    }
    e
}

/// Correlation at an arbitrary setting difference; `−cos 2Δ` for any marginal.
pub fn correlation_for_difference(delta: f64, marginal_c: &BinaryDistribution) -> f64 {
    correlation_from_matrix(&epr_bohm_from_difference(delta), marginal_c)
}

/// `E(bc)` over the EPR-Bohm conditionals.
pub fn correlation(angles: &AnglePair, marginal_c: &BinaryDistribution) -> f64 {
    correlation_for_difference(angles.difference(), marginal_c)
}

/// Four measurement settings `(a, a′, b, b′)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    /// First setting on the selection side.
    pub a: f64,
    /// Second setting on the selection side.
    pub a_prime: f64,
    /// First setting on the measurement side.
    pub b: f64,
    /// Second setting on the measurement side.
    pub b_prime: f64,
}

impl ChshSettings {
    /// Weights of the four correlators in `S`.
    pub const WEIGHTS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

    /// `(0, π/4, π/8, 3π/8)`, which reaches `|S| = 2√2` under `E = −cos 2Δ`.
    pub fn optimal() -> Self {
        ChshSettings { a: 0.0, a_prime: FRAC_PI_4, b: FRAC_PI_8, b_prime: 3.0 * FRAC_PI_8 }
    }

    /// All four settings equal to `angle`.
    pub fn uniform(angle: f64) -> Self {
        ChshSettings { a: angle, a_prime: angle, b: angle, b_prime: angle }
    }

    /// Setting pairs `(a,b), (a,b′), (a′,b), (a′,b′)`.
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [(self.a, self.b), (self.a, self.b_prime), (self.a_prime, self.b), (self.a_prime, self.b_prime)]
    }

    /// Setting differences in the order of [`ChshSettings::pairs`].
    pub fn differences(&self) -> [f64; 4] {
        self.pairs().map(|(x, y)| x - y)
    }

    /// `S` from four correlators in [`ChshSettings::pairs`] order.
    pub fn combine(correlations: [f64; 4]) -> f64 {
        correlations.iter().zip(Self::WEIGHTS).map(|(e, w)| w * e).sum()
    }
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)` of the closed-form correlation.
pub fn chsh(settings: &ChshSettings, marginal_c: &BinaryDistribution) -> f64 {
    ChshSettings::combine(settings.differences().map(|d| correlation_for_difference(d, marginal_c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_3, FRAC_PI_6, SQRT_2};
    use proptest::prelude::*;

    const ANTI: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];

    fn close(m: &TransitionMatrix, expected: [[f64; 2]; 2], tol: f64) -> bool {
        m.max_abs_diff(&TransitionMatrix::new(expected).unwrap()) <= tol
    }

    #[test]
    fn angle_validation() {
        assert!(AnglePair::new(0.0, 0.3).is_err());
        assert!(AnglePair::new(0.3, FRAC_PI_2).is_err());
        assert!(AnglePair::new(f64::NAN, 0.3).is_err());
        assert_eq!(AnglePair::new(0.3, -1.0), Err(Error::AngleOutOfRange { name: "eta", value: -1.0 }));
        let a = AnglePair::from_degrees(60.0, 30.0).unwrap();
        assert!((a.xi() - FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn sign_validation() {
        assert!(SignConvention::new(-1.0, 1.0).is_ok());
        assert!(SignConvention::new(1.0, -1.0).is_ok());
        assert!(SignConvention::new(1.0, 1.0).is_err());
        assert!(SignConvention::new(0.5, -0.5).is_err());
        assert_eq!(SignConvention::default().opposite(), SignConvention::new(1.0, -1.0).unwrap());
    }

    #[test]
    fn parametrized_matrices() {
        let (p_ac, _) = matrices_from_angles(&AnglePair::new(FRAC_PI_4, 0.3).unwrap());
        assert!(close(&p_ac, [[0.5; 2]; 2], 1e-15));
        let (_, p_ba) = matrices_from_angles(&AnglePair::new(0.3, FRAC_PI_4).unwrap());
        assert!(close(&p_ba, [[0.5; 2]; 2], 1e-15));
        let (p_ac, p_ba) = matrices_from_angles(&AnglePair::new(FRAC_PI_3, 0.2).unwrap());
        assert!((p_ac.get(Sign::Plus, Sign::Plus) - 0.25).abs() < 1e-15);
        assert!((p_ac.get(Sign::Minus, Sign::Plus) - 0.75).abs() < 1e-15);
        assert!(p_ac.is_double_stochastic(1e-15) && p_ba.is_double_stochastic(1e-15));
        assert!(p_ac.is_strictly_positive() && p_ba.is_strictly_positive());
    }

    #[test]
    fn closed_form_examples() {
        let equal = AnglePair::new(0.4, 0.4).unwrap();
        assert_eq!(epr_bohm_probabilities(&equal).entries(), ANTI);
        let quarter = AnglePair::new(FRAC_PI_4 + 0.5, 0.5).unwrap();
        assert!(close(&epr_bohm_probabilities(&quarter), [[0.5; 2]; 2], 1e-15));
        let m = epr_bohm_probabilities(&AnglePair::new(FRAC_PI_3, FRAC_PI_6).unwrap());
        assert!(close(&m, [[0.25, 0.75], [0.75, 0.25]], 1e-15));
    }

    #[test]
    fn reconstruction_examples() {
        let angles = AnglePair::new(FRAC_PI_3, FRAC_PI_6).unwrap();
        let op1 = reconstruct_via_interference(&angles, &SignConvention::default()).unwrap();
        assert!(op1.max_abs_diff(&epr_bohm_probabilities(&angles)) <= 1e-12);

        // (cos ξ sin η + sin ξ cos η)² = sin²(ξ+η) = 1 at ξ+η = π/2.
        let shifted = reconstruct_via_interference(&angles, &SignConvention::new(1.0, -1.0).unwrap()).unwrap();
        assert!((shifted.get(Sign::Plus, Sign::Plus) - 1.0).abs() <= 1e-12);

        let equal = AnglePair::new(0.7, 0.7).unwrap();
        let m = reconstruct_via_interference(&equal, &SignConvention::default()).unwrap();
        assert!(close(&m, ANTI, 1e-12));
    }

    #[test]
    fn lemma1_examples() {
        let angles = AnglePair::new(FRAC_PI_3, FRAC_PI_6).unwrap();
        assert!(verify_lemma1(&angles, -1.0, 1.0).unwrap());
        assert!(verify_lemma1(&angles, 1.0, -1.0).unwrap());
        assert!(!verify_lemma1(&angles, 1.0, 1.0).unwrap());
        // 4·cos ξ sin ξ cos η sin η = sin 2ξ sin 2η = 3/4
        let r = lemma1_residual(&angles, 1.0, 1.0).unwrap();
        assert!((r - 0.75).abs() < 1e-12);
        assert_eq!(
            verify_lemma1(&angles, 0.5, -1.0),
            Err(Error::PreconditionViolation { cos_theta_plus: 0.5, cos_theta_minus: -1.0 })
        );
    }

    #[test]
    fn lemma2_examples() {
        let signs = SignConvention::default();
        assert!(verify_lemma2(&AnglePair::new(0.9, 0.3).unwrap(), &signs, TildePhases::Consistent));
        let angles = AnglePair::new(FRAC_PI_3, FRAC_PI_6).unwrap();
        assert!(!verify_lemma2(&angles, &signs, TildePhases::EqualToSelection));
        let r = lemma2_residual(&angles, &signs, TildePhases::EqualToSelection);
        assert!((r - 0.75).abs() < 1e-12);
        let quarter = AnglePair::new(FRAC_PI_4 + 0.3, 0.3).unwrap();
        assert!(verify_lemma2(&quarter, &signs, TildePhases::Consistent));
    }

    #[test]
    fn correlation_examples() {
        let u = BinaryDistribution::UNIFORM;
        assert!((correlation(&AnglePair::new(0.5, 0.5).unwrap(), &u) + 1.0).abs() < 1e-15);
        assert!(correlation(&AnglePair::new(FRAC_PI_4 + 0.2, 0.2).unwrap(), &u).abs() < 1e-15);
        let e = correlation(&AnglePair::new(FRAC_PI_8 + 0.3, 0.3).unwrap(), &u);
        assert!((e + core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn chsh_examples() {
        let u = BinaryDistribution::UNIFORM;
        assert!((chsh(&ChshSettings::optimal(), &u).abs() - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((chsh(&ChshSettings::uniform(0.4), &u) + 2.0).abs() < 1e-15);
        // every difference equal to ±π/4
        let zero = ChshSettings { a: 0.0, a_prime: FRAC_PI_2, b: FRAC_PI_4, b_prime: -FRAC_PI_4 };
        assert!(chsh(&zero, &u).abs() < 1e-15);
    }

    fn arb_angles() -> impl Strategy<Value = AnglePair> {
        (1e-6..FRAC_PI_2 - 1e-6, 1e-6..FRAC_PI_2 - 1e-6).prop_map(|(x, e)| AnglePair::new(x, e).unwrap())
    }

    fn arb_marginal() -> impl Strategy<Value = BinaryDistribution> {
        (0.0..=1.0f64).prop_map(|p| BinaryDistribution::from_plus(p).unwrap())
    }

    proptest! {
        #[test]
        fn central_equivalence(angles in arb_angles()) {
            let m = reconstruct_via_interference(&angles, &SignConvention::default()).unwrap();
            prop_assert!(m.max_abs_diff(&epr_bohm_probabilities(&angles)) <= 1e-12);
            prop_assert!(m.column_residual() <= 1e-12);
            prop_assert!(m.row_residual() <= 1e-12);
        }

        #[test]
        fn lemma1_dichotomy(angles in arb_angles(), plus in any::<bool>(), minus in any::<bool>()) {
            let cp = if plus { 1.0 } else { -1.0 };
            let cm = if minus { 1.0 } else { -1.0 };
            // Off-diagonal sums leave 1 by sin 2ξ sin 2η, which must beat the tolerance.
            prop_assume!(libm::sin(2.0 * angles.xi()) * libm::sin(2.0 * angles.eta()) > 1e-9);
            prop_assert_eq!(verify_lemma1(&angles, cp, cm).unwrap(), cp * cm == -1.0);
        }

        #[test]
        fn symmetric_in_angles(angles in arb_angles()) {
            let a = epr_bohm_probabilities(&angles);
            let b = epr_bohm_probabilities(&angles.swapped());
            prop_assert!(a.max_abs_diff(&b) <= 1e-15);
        }

        #[test]
        fn correlation_bounded(angles in arb_angles(), m in arb_marginal()) {
            let e = correlation(&angles, &m);
            prop_assert!(e.abs() <= 1.0 + 1e-15);
            prop_assert!((e + libm::cos(2.0 * angles.difference())).abs() <= 1e-12);
        }

        #[test]
        fn chsh_bounded(a in -PI..PI, ap in -PI..PI, b in -PI..PI, bp in -PI..PI, m in arb_marginal()) {
            let s = chsh(&ChshSettings { a, a_prime: ap, b, b_prime: bp }, &m);
            prop_assert!(s.abs() <= 2.0 * SQRT_2 + 1e-12);
        }
    }
}
