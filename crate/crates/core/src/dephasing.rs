//! Dephasing kernel `D(T)`, coherence decay, and Monte-Carlo verification.
//!
//! For a pure-dephasing coupling to stationary noise of covariance
//! `C_sym(tau)`, the off-diagonal element between coupling eigenvalues `a, b`
//! obeys `rho_ab(T) = rho_ab(0) exp(-(a-b)^2 D(T) / (2 hbar^2))` with
//! `D(T) = Integral_{-T}^{T} (T - |tau|) C_sym(tau) dtau`. This is exact for
//! all `T`; the formula is a Kraus average and therefore completely positive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

/// Below `|z| T` of this size the closed form `(Tz - 1 + e^{-zT})/z^2`
/// cancels catastrophically; a truncated series takes over.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Exact dephasing kernel for the unbroadened covariance
/// `A_J cos(2 omega0 tau)`:  `D(T) = A_J (1 - cos(2 omega0 T)) / (2 omega0^2)`.
pub fn d_exact(a_j: f64, omega0: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::param(format!("T must be >= 0, got {t}")));
    }
    crate::error::require_positive("omega0", omega0)?;
    Ok(a_j * (1.0 - (2.0 * omega0 * t).cos()) / (2.0 * omega0 * omega0))
}

/// Dephasing kernel for the broadened covariance
/// `A_J e^{-gamma |tau|} cos(Omega tau)` with `Omega = 2 omega0`:
/// `D(T) = 2 A_J Re[(Tz - 1 + e^{-zT}) / z^2]`, `z = gamma - i Omega`.
///
/// `gamma = 0` delegates to [`d_exact`]; `gamma = Omega = 0` is the
/// well-defined `A_J T^2` limit. Small `|z| T` is evaluated by series.
pub fn d_broadened(a_j: f64, big_omega: f64, gamma: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::param(format!("T must be >= 0, got {t}")));
    }
    if gamma < 0.0 {
        return Err(Error::param(format!("gamma must be >= 0, got {gamma}")));
    }
    if gamma == 0.0 {
        if big_omega == 0.0 {
            return Ok(a_j * t * t);
        }
        return d_exact(a_j, big_omega / 2.0, t);
    }
    let z = C64::new(gamma, -big_omega);
    Ok(2.0 * a_j * phi_over_z2(z, t))
}

/// `Re[(Tz - 1 + e^{-zT}) / z^2]` with a series branch for small `|z| T`.
fn phi_over_z2(z: C64, t: f64) -> f64 {
    let zt = z * t;
    if zt.norm() < SERIES_THRESHOLD {
        // (Tz - 1 + e^{-zT})/z^2 = T^2 [ 1/2 - zT/6 + (zT)^2/24 - (zT)^3/120 ]
        let s = C64::new(0.5, 0.0) - zt / 6.0 + zt * zt / 24.0 - zt * zt * zt / 120.0;
        (s * t * t).re
    } else {
        (((zt - 1.0) + (-zt).exp()) / (z * z)).re
    }
}

/// Short-time expansion of the broadened kernel through `O(T^4)`:
/// `A_J T^2 - (A_J gamma / 3) T^3 + A_J (gamma^2 - Omega^2) T^4 / 12`.
pub fn short_time_expansion(a_j: f64, big_omega: f64, gamma: f64, t: f64) -> f64 {
    a_j * t * t * (1.0 - gamma * t / 3.0 + (gamma * gamma - big_omega * big_omega) * t * t / 12.0)
}

/// Coherence survival factor `exp(-(a-b)^2 D(T) / (2 hbar^2))`.
///
/// Exact only under the pure-dephasing assumption: the coupling operator must
/// commute with the system Hamiltonian over the run.
pub fn coherence_ratio(
    a_minus_b: f64,
    a_j: f64,
    omega0: f64,
    gamma: f64,
    t: f64,
    hbar: f64,
) -> Result<f64> {
    let d = d_broadened(a_j, 2.0 * omega0, gamma, t)?;
    Ok((-a_minus_b * a_minus_b * d / (2.0 * hbar * hbar)).exp())
}

/// Quasi-static dephasing coefficient `Gamma_qs = (a-b)^2 A_J / (2 hbar^2)`
/// (units 1/s^2; the short-time exponent is `Gamma_qs T^2`).
pub fn gamma_qs(a_minus_b: f64, a_j: f64, hbar: f64) -> f64 {
    a_minus_b * a_minus_b * a_j / (2.0 * hbar * hbar)
}

/// Effective Markovian rate producing the same exponent over one run of
/// duration `t_ref`: `lambda_eff = Gamma_qs * T_ref`.
pub fn lambda_eff(gamma_qs_val: f64, t_ref: f64) -> Result<f64> {
    crate::error::require_positive("T_ref", t_ref)?;
    Ok(gamma_qs_val * t_ref)
}

/// Quantum-bath-route dephasing exponent on the unbroadened Wightman
/// correlator: the modulus-squared double integral of `e^{-2i omega0 (t-s)}`
/// over `[0,T]^2`, which evaluates to `sin^2(omega0 T)/omega0^2`. Bounded by
/// `1/omega0^2`: an oscillatory plateau, not Markovian decay.
pub fn route_b_exponent(omega0: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::param(format!("T must be >= 0, got {t}")));
    }
    if omega0 == 0.0 {
        return Ok(t * t);
    }
    let s = (omega0 * t).sin();
    Ok(s * s / (omega0 * omega0))
}

/// One realization of the stationary Gaussian noise with covariance
/// `A_J cos(2 omega0 (t-s))`:
/// `xi(t) = sqrt(A_J) (alpha cos(2 omega0 t) + beta sin(2 omega0 t))` with
/// independent standard normal `alpha, beta`. The two-coefficient form is
/// exact for a single-line PSD.
#[derive(Debug, Clone, Copy)]
pub struct NoiseRealization {
    pub a_j: f64,
    pub omega0: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl NoiseRealization {
    pub fn sample<R: Rng + ?Sized>(a_j: f64, omega0: f64, rng: &mut R) -> Self {
        NoiseRealization {
            a_j,
            omega0,
            alpha: rng.sample(StandardNormal),
            beta: rng.sample(StandardNormal),
        }
    }

    /// Deterministic construction from a seed (one counter-based stream per
    /// realization index).
    pub fn from_seed(a_j: f64, omega0: f64, seed: u64, index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(index);
        NoiseRealization::sample(a_j, omega0, &mut rng)
    }

    pub fn value(&self, t: f64) -> f64 {
        let phase = 2.0 * self.omega0 * t;
        self.a_j.sqrt() * (self.alpha * phase.cos() + self.beta * phase.sin())
    }

    /// `Integral_0^T xi(t) dt` (closed form; the realization is a pure
    /// two-tone signal).
    pub fn integral(&self, t: f64) -> f64 {
        if self.omega0 == 0.0 {
            return self.a_j.sqrt() * self.alpha * t;
        }
        let w = 2.0 * self.omega0;
        self.a_j.sqrt() * (self.alpha * (w * t).sin() + self.beta * (1.0 - (w * t).cos())) / w
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Monte-Carlo estimator of the noise covariance `E[xi(t+tau) xi(t)]` at lag
/// `tau` (evaluated at `t = 0`; the process is stationary).
pub fn mc_covariance(a_j: f64, omega0: f64, tau: f64, samples: u64, seed: u64) -> McEstimate {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let xi = NoiseRealization::sample(a_j, omega0, &mut rng);
        let v = xi.value(tau) * xi.value(0.0);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    McEstimate { mean, std_error: (var / n).sqrt(), samples }
}

/// Monte-Carlo Kraus average of the dephasing factor
/// `Re E[exp(-i (a-b) / hbar * Integral_0^T xi dt)]`, to be compared with
/// [`coherence_ratio`] at `gamma = 0`. This is simultaneously the
/// complete-positivity demonstration for the quasi-static map.
pub fn mc_dephasing_factor(
    a_minus_b: f64,
    a_j: f64,
    omega0: f64,
    t: f64,
    hbar: f64,
    samples: u64,
    seed: u64,
) -> McEstimate {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let xi = NoiseRealization::sample(a_j, omega0, &mut rng);
        let phase = a_minus_b * xi.integral(t) / hbar;
        let v = phase.cos();
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    McEstimate { mean, std_error: (var / n).sqrt(), samples }
}

/// Monte-Carlo estimator of the unbroadened kernel `D(T)` itself, as the
/// second moment of the integrated noise `Phi = Integral_0^T xi dt`
/// (`E[Phi^2] = D(T)` for the single-line covariance).
pub fn mc_d_estimate(a_j: f64, omega0: f64, t: f64, samples: u64, seed: u64) -> McEstimate {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let xi = NoiseRealization::sample(a_j, omega0, &mut rng);
        let phi = xi.integral(t);
        let v = phi * phi;
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    McEstimate { mean, std_error: (var / n).sqrt(), samples }
}

/// Regime label for a sample of the dephasing curve, set by comparing `T`
/// against `1/Omega` and `1/gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    QuasiStatic,
    Oscillatory,
    Markovian,
}

impl Regime {
    pub fn classify(t: f64, big_omega: f64, gamma: f64) -> Regime {
        if gamma > 0.0 && t >= 1.0 / gamma {
            Regime::Markovian
        } else if big_omega > 0.0 && t >= 1.0 / big_omega {
            Regime::Oscillatory
        } else {
            Regime::QuasiStatic
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::QuasiStatic => "quasi_static",
            Regime::Oscillatory => "oscillatory",
            Regime::Markovian => "markovian",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub d: f64,
    pub regime: Regime,
}

/// Sampled dephasing curve `D(T)` with per-sample regime labels.
#[derive(Debug, Clone, Serialize)]
pub struct DephasingCurve {
    pub samples: Vec<CurveSample>,
}

impl DephasingCurve {
    /// Evaluate the broadened kernel on a grid of times.
    pub fn evaluate(a_j: f64, omega0: f64, gamma: f64, t_grid: &[f64]) -> Result<Self> {
        if t_grid.is_empty() {
            return Err(Error::InvalidGrid("empty T grid".into()));
        }
        let big_omega = 2.0 * omega0;
        let mut samples = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let d = d_broadened(a_j, big_omega, gamma, t)?;
            debug_assert!(d >= 0.0, "D(T) must be nonnegative, got {d} at T={t}");
            samples.push(CurveSample { t, d, regime: Regime::classify(t, big_omega, gamma) });
        }
        Ok(DephasingCurve { samples })
    }

    /// CSV with columns `T,D,regime` (no metadata header; callers prepend one).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,D,regime\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{}\n", s.t, s.d, s.regime.as_str()));
        }
        out
    }
}
