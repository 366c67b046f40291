//! Seeded property sweep over the interference derivation.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use ctxprob_core::epr::{
    chsh, correlation, epr_bohm_probabilities, lemma1_residual, lemma2_residual, reconstruct_via_interference,
    verify_lemma1, AnglePair, ChshSettings, SignConvention, TildePhases, IDENTITY_TOL,
};
use ctxprob_core::prob::{incompatibility_coefficient, interference_probability, phase_cosine};
use ctxprob_core::{BinaryDistribution, Sign, TransitionMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Smallest factor under the interference square root in the λ sweep.
pub const MIN_FACTOR: f64 = 1e-3;

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    /// Short identifier.
    pub name: &'static str,
    /// Number of random cases checked.
    pub samples: usize,
    /// Largest residual observed.
    pub worst_residual: f64,
    /// Residual bound for a pass.
    pub tolerance: f64,
    /// Whether every case passed.
    pub pass: bool,
    /// Description of the first failing case.
    pub counterexample: Option<String>,
}

/// Sweep options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Random cases per property; at least 1.
    pub samples: usize,
    /// Seed of the sweep.
    pub seed: u64,
    /// Evaluate double stochasticity with `θ̃± = θ±` instead of `cos θ̃± = −cos θ±`.
    pub break_lemma2: bool,
}

struct Check {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    worst: f64,
    counterexample: Option<String>,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Check { name, tolerance, samples: 0, worst: 0.0, counterexample: None }
    }

    /// Records a residual; `describe` runs only for the first failure.
    fn residual(&mut self, r: f64, describe: impl FnOnce() -> String) {
        self.samples += 1;
        if r.is_nan() || r > self.worst {
            self.worst = r;
        }
        if (r.is_nan() || r > self.tolerance) && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    /// Records a boolean outcome with a separate residual.
    fn outcome(&mut self, ok: bool, r: f64, describe: impl FnOnce() -> String) {
        self.samples += 1;
        self.worst = self.worst.max(r);
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            samples: self.samples,
            worst_residual: self.worst,
            tolerance: self.tolerance,
            pass: self.counterexample.is_none(),
            counterexample: self.counterexample,
        }
    }
}

/// Uniform angle in the open interval `(0, π/2)`.
pub fn open_quadrant(rng: &mut impl Rng) -> f64 {
    loop {
        let x = rng.random::<f64>() * FRAC_PI_2;
        if x > 0.0 && x < FRAC_PI_2 {
            return x;
        }
    }
}

/// Random valid angle pair.
pub fn random_angles(rng: &mut impl Rng) -> AnglePair {
    AnglePair::new(open_quadrant(rng), open_quadrant(rng)).expect("open interval")
}

fn matrix_gap(a: &TransitionMatrix, b: &TransitionMatrix) -> f64 {
    a.max_abs_diff(b)
}

/// Runs every property; `None` when `samples` is zero.
pub fn run(options: &VerifyOptions) -> Option<Vec<PropertyResult>> {
    if options.samples == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let signs = SignConvention::default();

    let mut theorem = Check::new("theorem_equivalence", IDENTITY_TOL);
    let mut columns = Check::new("column_stochastic", IDENTITY_TOL);
    let mut lemma2 = Check::new("lemma2_double_stochastic", IDENTITY_TOL);
    let mut lemma1 = Check::new("lemma1_dichotomy", IDENTITY_TOL);
    let mut symmetry = Check::new("difference_symmetry", IDENTITY_TOL);
    let mut roundtrip = Check::new("lambda_roundtrip", IDENTITY_TOL);
    let mut bounds = Check::new("correlation_and_chsh_bounds", 0.0);

    let tilde = if options.break_lemma2 { TildePhases::EqualToSelection } else { TildePhases::Consistent };

    for _ in 0..options.samples {
        let angles = random_angles(&mut rng);
        let describe = |what: &str, r: f64| format!("xi={} eta={} {what} residual={r:e}", angles.xi(), angles.eta());

        let closed = epr_bohm_probabilities(&angles);
        match reconstruct_via_interference(&angles, &signs) {
            Ok(m) => {
                let r = matrix_gap(&m, &closed);
                theorem.residual(r, || describe("interference vs closed form", r));
                let c = m.column_residual();
                columns.residual(c, || describe("column sum", c));
            }
            Err(e) => {
                theorem.residual(f64::INFINITY, || describe(&e.to_string(), f64::INFINITY));
                columns.residual(f64::INFINITY, || describe(&e.to_string(), f64::INFINITY));
            }
        }

        let r = lemma2_residual(&angles, &signs, tilde);
        lemma2.residual(r, || describe(&format!("row sum with {tilde:?} tilde phases"), r));

        for (cp, cm) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let expected = cp * cm == -1.0;
            let got = verify_lemma1(&angles, cp, cm).unwrap_or(!expected);
            let res = lemma1_residual(&angles, cp, cm).unwrap_or(f64::INFINITY);
            let tracked = if expected { res } else { 0.0 };
            lemma1
                .outcome(got == expected, tracked, || describe(&format!("cos θ+={cp} cos θ-={cm} verify={got}"), res));
        }

        let r = matrix_gap(&closed, &epr_bohm_probabilities(&angles.swapped()));
        symmetry.residual(r, || describe("swap", r));

        let (prior, transition, theta, beta) = random_lambda_case(&mut rng);
        let r = interference_probability(&prior, &transition, beta, theta)
            .and_then(|p| incompatibility_coefficient(p, &prior, &transition, beta))
            .ok()
            .and_then(|c| c.lambda)
            .map_or(f64::INFINITY, |l| (l - phase_cosine(theta)).abs());
        roundtrip.residual(r, || {
            format!(
                "prior={} transition={:?} beta={beta} theta={theta} residual={r:e}",
                prior.p_plus(),
                transition.entries()
            )
        });

        let marginal = BinaryDistribution::from_plus(rng.random::<f64>()).expect("unit interval");
        let e = correlation(&angles, &marginal);
        let settings = ChshSettings {
            a: rng.random_range(-PI..PI),
            a_prime: rng.random_range(-PI..PI),
            b: rng.random_range(-PI..PI),
            b_prime: rng.random_range(-PI..PI),
        };
        let s = chsh(&settings, &marginal);
        let excess = (e.abs() - 1.0).max(s.abs() - 2.0 * SQRT_2 - 1e-12).max(0.0);
        bounds.residual(excess, || format!("E={e} S={s} settings={settings:?}"));
    }

    Some([theorem, columns, lemma2, lemma1, symmetry, roundtrip, bounds].into_iter().map(Check::finish).collect())
}

/// Random `(prior, doubly stochastic transition, θ, β)` with every factor ≥ [`MIN_FACTOR`].
pub fn random_lambda_case(rng: &mut impl Rng) -> (BinaryDistribution, TransitionMatrix, f64, Sign) {
    let p = rng.random_range(MIN_FACTOR..=1.0 - MIN_FACTOR);
    let q = rng.random_range(MIN_FACTOR..=1.0 - MIN_FACTOR);
    let prior = BinaryDistribution::from_plus(p).expect("unit interval");
    let transition = TransitionMatrix::new([[q, 1.0 - q], [1.0 - q, q]]).expect("doubly stochastic");
    let theta = rng.random_range(0.0..=PI);
    let beta = if rng.random::<bool>() { Sign::Plus } else { Sign::Minus };
    (prior, transition, theta, beta)
}
