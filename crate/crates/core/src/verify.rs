//! Verification suites: each suite drives a brute-force oracle against the
//! corresponding closed forms and reports per-check residuals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::error::Result;
use crate::params::{amplitude_aj, Branch, GtdParams};
use crate::{dephasing, dynamics, fock, quad, spectral};
use crate::C64;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckResult { name: name.into(), residual, tolerance, pass: residual.abs() <= tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    fn assemble(suite: &str, seed: u64, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.pass);
        VerifyReport { suite: suite.into(), seed, checks, passed }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Known suite names, in `run_suite` order.
pub const SUITES: [&str; 5] = ["wick", "hasvac", "bateman", "dephasing", "cp"];

/// Run one named suite, or every suite for `"all"`.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<VerifyReport>> {
    match name {
        "wick" => Ok(vec![wick_suite(seed)?]),
        "hasvac" => Ok(vec![hasvac_suite(seed)?]),
        "bateman" => Ok(vec![bateman_suite()?]),
        "dephasing" => Ok(vec![dephasing_suite(seed)?]),
        "cp" => Ok(vec![cp_suite(seed)?]),
        "all" => SUITES.iter().map(|s| Ok(run_suite(s, seed)?.remove(0))).collect(),
        other => Err(crate::Error::param(format!(
            "unknown verification suite '{other}' (expected one of {SUITES:?} or 'all')"
        ))),
    }
}

/// Vacuum and populated Wick contractions against the Fock oracle.
pub fn wick_suite(seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let ws = fock::FockWorkspace::fermion_pairs(1)?;
    let vac = fock::BathState::vacuum(&ws);
    let mut checks = Vec::new();

    for branch in [Branch::Plus, Branch::Minus] {
        let p = GtdParams::natural().with_branch(branch);
        let aj = amplitude_aj(&p, 1.0)?;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let tau: f64 = rng.gen_range(-10.0..10.0);
            let c = fock::correlator_jj(&ws, &p, 1.0, tau, &vac)?;
            let expect =
                C64::new(aj, 0.0) * (C64::i() * (-2.0 * branch.sign() * p.omega0 * tau)).exp();
            worst = worst.max((c - expect).norm());
        }
        checks.push(CheckResult::new(
            format!("vacuum_line_sigma_{}", if branch == Branch::Plus { "plus" } else { "minus" }),
            worst,
            1e-10,
        ));
    }

    let p = GtdParams::natural();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n_b: f64 = rng.gen_range(0.0..=1.0);
        let n_d: f64 = rng.gen_range(0.0..=1.0);
        let tau: f64 = rng.gen_range(-5.0..5.0);
        let state = fock::BathState::fermion_occupations(&ws, &[n_b, n_d])?;
        let c = fock::correlator_jj(&ws, &p, 1.0, tau, &state)?;
        let expect = fock::populated_correlator_analytic(&p, 1.0, tau, n_b, n_d)?;
        worst = worst.max((c - expect).norm());
    }
    checks.push(CheckResult::new("populated_coefficients", worst, 1e-10));

    // symmetrized oracle combination is A_J cos(2 omega0 tau)
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let tau: f64 = rng.gen_range(0.0..8.0);
        let c_plus = fock::correlator_jj(&ws, &p, 1.0, tau, &vac)?;
        let c_minus = fock::correlator_jj(&ws, &p, 1.0, -tau, &vac)?;
        let sym = (c_plus + c_minus) * C64::new(0.5, 0.0);
        let expect = spectral::csym(&p, 1.0, tau)?;
        worst = worst.max((sym - C64::new(expect, 0.0)).norm());
    }
    checks.push(CheckResult::new("symmetrized_cosine", worst, 1e-10));

    // surrogate consistency on the vacuum
    let bosons = fock::FockWorkspace::single_boson(4)?;
    let bvac = fock::BathState::vacuum(&bosons);
    let aj = amplitude_aj(&p, 1.0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let tau: f64 = rng.gen_range(-6.0..6.0);
        let c = fock::correlator_surrogate(&bosons, &p, 1.0, tau, &bvac)?;
        let expect = C64::new(aj, 0.0) * (C64::i() * (2.0 * tau)).exp();
        worst = worst.max((c - expect).norm());
    }
    checks.push(CheckResult::new("surrogate_line", worst, 1e-10));

    Ok(VerifyReport::assemble("wick", seed, checks))
}

/// Vacuum cancellation of the cross-sector bracket and its off-matching
/// coefficient formula.
pub fn hasvac_suite(seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let matched = fock::check_has_vacuum(1.0, 1.0, 1.0, 1.0, 4)?;
    checks.push(CheckResult::new("matched_masses_cancel", matched, 1e-12));

    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let ratio: f64 = rng.gen_range(0.05..20.0);
        let residual = fock::check_has_vacuum(ratio, 1.0, 1.0, 1.0, 4)?;
        let expect = (ratio.sqrt() - 1.0 / ratio.sqrt()).abs() / 2.0f64.sqrt();
        worst = worst.max((residual - expect).abs());
    }
    checks.push(CheckResult::new("off_matching_coefficient", worst, 1e-10));

    let sym = (fock::check_has_vacuum(3.7, 1.0, 1.0, 1.0, 4)?
        - fock::check_has_vacuum(1.0, 3.7, 1.0, 1.0, 4)?)
    .abs();
    checks.push(CheckResult::new("mass_exchange_symmetry", sym, 1e-11));

    Ok(VerifyReport::assemble("hasvac", seed, checks))
}

/// Oscillator-pair spectrum and ghost-phase checks.
pub fn bateman_suite() -> Result<VerifyReport> {
    let report = fock::bateman_check(5, 1.0, 1.0, 1.0)?;
    let checks = vec![
        CheckResult::new("sub_cutoff_spectrum", report.eigenvalue_residual, 1e-10),
        CheckResult::new("plus_sector_phase", report.plus_phase_residual, 1e-10),
        CheckResult::new("minus_sector_phase", report.minus_phase_residual, 1e-10),
        CheckResult::new("unbounded_below", report.min_eigenvalue + 4.0, 1e-10),
    ];
    Ok(VerifyReport::assemble("bateman", 0, checks))
}

/// Closed-form dephasing kernels against the quadrature oracle, the
/// short-time series, the long-time slope, and the Monte-Carlo Kraus average.
pub fn dephasing_suite(seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a_j: f64 = rng.gen_range(0.1..4.0);
        let gamma: f64 = rng.gen_range(0.0..3.0);
        let big_omega: f64 = rng.gen_range(0.1..6.0);
        let t: f64 = rng.gen_range(0.05..8.0);
        let d = dephasing::d_broadened(a_j, big_omega, gamma, t)?;
        let q = quad::double_time_integral_even(
            |tau| a_j * (-gamma * tau.abs()).exp() * (big_omega * tau).cos(),
            t,
            1e-12,
        );
        worst = worst.max((d - q).abs() / q.abs().max(1e-12));
    }
    checks.push(CheckResult::new("closed_form_vs_quadrature", worst, 1e-8));

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let gamma: f64 = rng.gen_range(0.0..2.0);
        let big_omega: f64 = rng.gen_range(0.1..4.0);
        let t = 0.01;
        let d = dephasing::d_broadened(1.0, big_omega, gamma, t)?;
        let s = dephasing::short_time_expansion(1.0, big_omega, gamma, t);
        worst = worst.max((d - s).abs());
    }
    checks.push(CheckResult::new("short_time_series", worst, 1e-9));

    let (a_j, gamma, big_omega) = (1.0, 0.5, 2.0);
    let t = 1e4 / gamma;
    let d = dephasing::d_broadened(a_j, big_omega, gamma, t)?;
    let s0 = 2.0 * a_j * gamma / (gamma * gamma + big_omega * big_omega);
    checks.push(CheckResult::new("long_time_slope", (d / t - s0).abs() / s0, 1e-4));

    let mut worst_sigma: f64 = 0.0;
    for (gap, t) in [(0.5, 0.4), (1.0, 1.0), (1.5, 2.0), (2.0, 0.7), (0.8, 3.0)] {
        let analytic = dephasing::coherence_ratio(gap, 0.25, 1.0, 0.0, t, 1.0)?;
        let est = dephasing::mc_dephasing_factor(gap, 0.25, 1.0, t, 1.0, 100_000, rng.gen());
        worst_sigma = worst_sigma.max((est.mean - analytic).abs() / est.std_error);
    }
    checks.push(CheckResult::new("monte_carlo_kraus_average_sigmas", worst_sigma, 3.0));

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let omega0: f64 = rng.gen_range(0.1..3.0);
        let t: f64 = rng.gen_range(0.1..4.0);
        let q = quad::iterated_square_integral(|a, b| (2.0 * omega0 * (a - b)).cos(), t, 1e-11);
        worst = worst.max((dephasing::route_b_exponent(omega0, t)? - q).abs());
    }
    checks.push(CheckResult::new("route_b_double_integral", worst, 1e-10));

    Ok(VerifyReport::assemble("dephasing", seed, checks))
}

/// Complete-positivity sweep, negative control, and the localization
/// obstruction.
pub fn cp_suite(seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p = GtdParams::natural();
    let mut checks = Vec::new();

    let mut worst_min: f64 = 0.0;
    for _ in 0..50 {
        let d = 2 + (rng.gen::<u64>() % 2) as usize;
        let n_ops = 1 + (rng.gen::<u64>() % 3) as usize;
        let ops: Vec<dynamics::JumpOperator> = (0..n_ops)
            .map(|_| dynamics::JumpOperator {
                bohr_frequency: rng.gen_range(-4.0..4.0),
                site: rng.gen_range(-1.0..1.0),
                matrix: crate::linalg::CMatrix::from_fn(d, d, |_, _| {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }),
            })
            .collect();
        let kernel = dynamics::SpatialKernel::gaussian(rng.gen_range(0.2..3.0))?;
        let gen = dynamics::lindblad_generator(&ops, &kernel, &p, 1.0)?;
        let ch = dynamics::choi_of(&gen, rng.gen_range(0.0..2.0))?;
        let verdict = dynamics::cp_check(&ch);
        worst_min = worst_min.min(verdict.min_choi_eigenvalue);
    }
    checks.push(CheckResult::new("random_channels_choi_psd", -worst_min, 1e-10));

    let mut m = crate::linalg::CMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(0.5, 0.0);
    m[(1, 1)] = C64::new(-0.5, 0.0);
    let ops = [dynamics::JumpOperator { bohr_frequency: -2.0, site: 0.0, matrix: m }];
    let gen = dynamics::lindblad_generator(&ops, &dynamics::SpatialKernel::Constant, &p, 1.0)?;
    let flipped = dynamics::choi_of(&gen.sign_flipped(), 1.0)?;
    let neg = dynamics::cp_check(&flipped).min_choi_eigenvalue;
    // negative control must dip below -1e-3; report how far it clears the bar
    checks.push(CheckResult::new(
        "sign_flip_negative_control",
        if neg < -1e-3 { 0.0 } else { 1.0 },
        0.5,
    ));

    // homogeneous-bath obstruction
    let grid: Vec<f64> = (0..30).map(|i| i as f64 * 0.5e-7).collect();
    let mut mass_a = vec![0.0; 30];
    let mut mass_b = vec![0.0; 30];
    mass_a[2] = 1.0;
    mass_a[4] = 1.0;
    mass_b[22] = 1.0;
    mass_b[24] = 1.0;
    let flat =
        dynamics::decoherence_functional(&grid, &mass_a, &mass_b, &dynamics::SpatialKernel::Constant)?;
    let gauss = dynamics::decoherence_functional(
        &grid,
        &mass_a,
        &mass_b,
        &dynamics::SpatialKernel::gaussian(1e-7)?,
    )?;
    checks.push(CheckResult::new("translation_invisible_to_constant_kernel", flat.abs() / gauss, 1e-12));
    checks.push(CheckResult::new(
        "gaussian_kernel_sees_translation",
        if gauss > 0.0 { 0.0 } else { 1.0 },
        0.5,
    ));

    Ok(VerifyReport::assemble("cp", seed, checks))
}
