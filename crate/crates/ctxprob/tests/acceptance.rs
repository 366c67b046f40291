//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, SQRT_2};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ctxprob::parallel::{self, Parallelism};
use ctxprob::verify::{random_angles, random_lambda_case};
use ctxprob_core::epr::{
    epr_bohm_probabilities, lemma1_residual, lemma2_residual, reconstruct_via_interference, verify_lemma1, AnglePair,
    ChshSettings, SignConvention, TildePhases,
};
use ctxprob_core::prob::{incompatibility_coefficient, interference_probability, phase_cosine};
use ctxprob_core::sim::{lhv_baseline_chsh, time_order_statistics, LhvStrategy, SimConfig, TimeDistribution};
use ctxprob_core::{BinaryDistribution, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const EXACT_TOL: f64 = 1e-12;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within_budget(v: Verdict, elapsed: Duration, budget: Duration) -> Verdict {
    let pass = v.pass && elapsed < budget;
    verdict(pass, format!("{}; {:.3}s (budget {}s)", v.detail, elapsed.as_secs_f64(), budget.as_secs()))
}

fn theorem_reproduction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let signs = SignConvention::default();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let angles = random_angles(&mut rng);
        let d = angles.difference();
        let (s, c) = (d.sin() * d.sin(), d.cos() * d.cos());
        let m = reconstruct_via_interference(&angles, &signs).expect("valid angles");
        for (beta, gamma, expected) in [
            (Sign::Plus, Sign::Plus, s),
            (Sign::Minus, Sign::Minus, s),
            (Sign::Plus, Sign::Minus, c),
            (Sign::Minus, Sign::Plus, c),
        ] {
            worst = worst.max((m.get(beta, gamma) - expected).abs());
        }
    }
    verdict(worst <= EXACT_TOL, format!("1000 angle pairs, worst |Δ| = {worst:e}"))
}

fn lemma1_dichotomy() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let angles = random_angles(&mut rng);
        for (cp, cm) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let expected = cp * cm == -1.0;
            if verify_lemma1(&angles, cp, cm).expect("maximal magnitude") != expected {
                mismatches += 1;
            }
            if expected {
                worst = worst.max(lemma1_residual(&angles, cp, cm).expect("maximal magnitude"));
            }
        }
    }
    verdict(
        mismatches == 0 && worst <= EXACT_TOL,
        format!("400 cases, {mismatches} mismatches, worst normalization residual {worst:e}"),
    )
}

fn lemma2_double_stochastic() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let signs = SignConvention::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        worst = worst.max(lemma2_residual(&random_angles(&mut rng), &signs, TildePhases::Consistent));
    }
    // Violation mode on angles kept away from the quadrant edges and from |ξ − η| = π/4.
    let margin = 0.05;
    let mut smallest_violation = f64::INFINITY;
    let mut violations = 0;
    while violations < 100 {
        let xi = rng.random_range(margin..FRAC_PI_2 - margin);
        let eta = rng.random_range(margin..FRAC_PI_2 - margin);
        if ((xi - eta).abs() - FRAC_PI_4).abs() < margin {
            continue;
        }
        let angles = AnglePair::new(xi, eta).expect("open interval");
        smallest_violation = smallest_violation.min(lemma2_residual(&angles, &signs, TildePhases::EqualToSelection));
        violations += 1;
    }
    verdict(
        worst <= EXACT_TOL && smallest_violation >= 1e-3,
        format!("worst row residual {worst:e}; smallest violated-mode residual {smallest_violation:.4}"),
    )
}

fn lambda_roundtrip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (prior, transition, theta, beta) = random_lambda_case(&mut rng);
        let observed = interference_probability(&prior, &transition, beta, theta).expect("doubly stochastic");
        let lambda = incompatibility_coefficient(observed, &prior, &transition, beta)
            .expect("valid observed")
            .lambda
            .expect("nondegenerate");
        worst = worst.max((lambda - phase_cosine(theta)).abs());
    }
    verdict(worst <= EXACT_TOL, format!("1000 triples, worst |λ − cos θ| = {worst:e}"))
}

fn within_four_se(config: &SimConfig) -> bool {
    let report = parallel::run_simulation(config, Parallelism::default()).expect("valid config");
    let analytic = epr_bohm_probabilities(&config.angles);
    Sign::ALL.iter().all(|&b| {
        Sign::ALL.iter().all(|&g| {
            let se = report.std_errors[b.index()][g.index()];
            (report.estimated_conditionals.get(b, g) - analytic.get(b, g)).abs() <= 4.0 * se
        })
    })
}

fn monte_carlo_convergence() -> Verdict {
    let angles = AnglePair::new(FRAC_PI_3, FRAC_PI_6).expect("open interval");
    let config = |seed| {
        SimConfig::new(angles, BinaryDistribution::UNIFORM, 1_000_000, seed, TimeDistribution::UniformSquare)
            .expect("valid config")
    };
    let fixed = within_four_se(&config(SEED));
    let passing = (0..100u64).filter(|&s| within_four_se(&config(1000 + s))).count();
    verdict(fixed && passing >= 99, format!("seed {SEED} within 4 SE: {fixed}; {passing}/100 seeds pass"))
}

fn chsh_separation() -> Verdict {
    let settings = ChshSettings::optimal();
    let quantum =
        parallel::simulate_chsh(&settings, &BinaryDistribution::UNIFORM, 1_000_000, SEED, Parallelism::default())
            .expect("valid settings");
    let lhv = lhv_baseline_chsh(&settings, LhvStrategy::DeterministicSign, 1_000_000, SEED).expect("valid settings");
    let target = 2.0 * SQRT_2;
    let near_tsirelson = (quantum.value.abs() - target).abs() <= 0.01;
    let lhv_bounded = lhv.value.abs() <= 2.0 + 3.0 * lhv.std_error;
    let gap = quantum.value.abs() - lhv.value.abs();
    verdict(
        near_tsirelson && lhv_bounded && gap >= 0.5,
        format!(
            "Ŝ = {:.6} (|Ŝ| − 2√2 = {:+.5}), Ŝ_lhv = {:.6} ± {:.6}, |Ŝ| − |Ŝ_lhv| = {gap:.4}",
            quantum.value,
            quantum.value.abs() - target,
            lhv.value,
            lhv.std_error
        ),
    )
}

fn time_structure_invariance() -> Verdict {
    let angles = AnglePair::new(FRAC_PI_3, FRAC_PI_6).expect("open interval");
    let run = |time| {
        let config = SimConfig::new(angles, BinaryDistribution::UNIFORM, 1_000_000, SEED, time).expect("valid");
        parallel::run_simulation(&config, Parallelism::default()).expect("valid")
    };
    let uniform = run(TimeDistribution::UniformSquare);
    let fixed = run(TimeDistribution::FixedOrder);
    let identical = uniform.estimated_conditionals == fixed.estimated_conditionals && uniform.counts == fixed.counts;
    let stats = time_order_statistics(&uniform);
    let mean_ok = (stats.mean_gap - 1.0 / 3.0).abs() <= 3.0 * stats.gap_std_error;
    verdict(
        identical && stats.n_redraws == 0 && mean_ok,
        format!(
            "identical conditionals: {identical}; redraws {}; mean(t2 − t1) = {:.6} ± {:.6}",
            stats.n_redraws, stats.mean_gap, stats.gap_std_error
        ),
    )
}

fn cli_json(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_ctxprob"))
        .args(["--format", "json"])
        .args(args)
        .output()
        .expect("run ctxprob");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Verdict {
    let sim = ["simulate", "--xi", "60", "--eta", "30", "--unit", "deg", "--n", "300000", "--seed", "42"];
    let chsh = ["chsh", "--optimal", "--n", "200000", "--seed", "42"];
    let mut identical = true;
    for base in [&sim[..], &chsh[..]] {
        let reference = cli_json(base);
        for threads in ["1", "2", "8"] {
            let mut args = base.to_vec();
            args.extend(["--threads", threads]);
            identical &= cli_json(&args) == reference;
        }
        identical &= cli_json(base) == reference;
    }
    verdict(identical, format!("simulate and chsh JSON byte-identical across repeats and 1/2/8 threads: {identical}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict, Option<u64>);
    let criteria: [Criterion; 8] = [
        ("1 theorem reproduction", theorem_reproduction, Some(1)),
        ("2 lemma 1 dichotomy", lemma1_dichotomy, Some(1)),
        ("3 lemma 2 double stochasticity", lemma2_double_stochastic, Some(1)),
        ("4 lambda roundtrip", lambda_roundtrip, Some(1)),
        ("5 monte carlo convergence", monte_carlo_convergence, Some(30)),
        ("6 chsh separation", chsh_separation, Some(60)),
        ("7 time-structure invariance", time_structure_invariance, None),
        ("8 determinism", determinism, None),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let mut v = check();
        if let Some(secs) = budget {
            v = within_budget(v, start.elapsed(), Duration::from_secs(secs));
        }
        println!("[{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failures += usize::from(!v.pass);
    }
    if failures == 0 {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
