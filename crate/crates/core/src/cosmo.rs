//! Cosmological matching and rate arithmetic.
//!
//! Conventions pinned here: horizon volume `(4 pi / 3)(c/H0)^3`, mode count
//! `N_dS = pi (c/H0)^2 / L_P^2` with `L_P = hbar / (m_Pl c)`, rates compared
//! at the reference duration of one second. Horizon-volume conventions carry
//! an order-10 ambiguity; this one puts the per-mode energy at about
//! `0.1 hbar H0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PhysicalConstants;

/// de Sitter mode count `pi (c/H0)^2 / L_P^2`.
pub fn de_sitter_count(k: &PhysicalConstants) -> f64 {
    let r_h = k.c / k.h0;
    let l_p = k.hbar / (k.m_pl * k.c);
    std::f64::consts::PI * (r_h / l_p) * (r_h / l_p)
}

/// Energy per bath degree of freedom,
/// `rho_Lambda (4 pi / 3)(c/H0)^3 / N_dS` (J).
pub fn per_mode_energy(k: &PhysicalConstants) -> f64 {
    let r_h = k.c / k.h0;
    let volume = 4.0 * std::f64::consts::PI / 3.0 * r_h * r_h * r_h;
    k.rho_lambda * volume / de_sitter_count(k)
}

/// Holographic natural rate `H0 * C_match`.
pub fn lambda_natural(k: &PhysicalConstants, c_match: f64) -> Result<f64> {
    crate::error::require_positive("C_match", c_match)?;
    Ok(k.h0 * c_match)
}

/// One-second amplification threshold for the `N^2 lambda` scaling:
/// `N_star = (lambda * 1 s)^{-1/2}` and the corresponding mass
/// `N_star * m_nucleon`.
pub fn amplification_threshold(lambda: f64, m_nucleon: f64) -> Result<(f64, f64)> {
    crate::error::require_positive("lambda", lambda)?;
    let n_star = 1.0 / lambda.sqrt();
    Ok((n_star, n_star * m_nucleon))
}

/// Markovian-surrogate rate
/// `g^2 A_J gamma / (m0^2 hbar^2 [(2 omega0)^2 + gamma^2]) * V_rC`.
///
/// As a function of `gamma` at fixed line area this rises linearly in the
/// narrow-line regime, peaks at `gamma = 2 omega0`, and falls as `1/gamma`.
pub fn markov_surrogate_rate(
    g_int: f64,
    a_j: f64,
    gamma: f64,
    omega0: f64,
    m0: f64,
    hbar: f64,
    v_rc: f64,
) -> Result<f64> {
    for (name, v) in [
        ("g_int", g_int),
        ("A_J", a_j),
        ("gamma", gamma),
        ("omega0", omega0),
        ("m0", m0),
        ("hbar", hbar),
        ("V_rC", v_rc),
    ] {
        crate::error::require_positive(name, v)?;
    }
    let denom = (2.0 * omega0) * (2.0 * omega0) + gamma * gamma;
    Ok(g_int * g_int * a_j * gamma / (m0 * m0 * hbar * hbar * denom) * v_rc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingClass {
    Divergent,
    Finite,
    Vanishing,
}

/// Bath-size scaling of the induced noise for an effective vertex
/// `g_eff = g * N1^{-p}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AmScalingReport {
    /// `N1^{1 - 4p}`, the scale factor multiplying the single-contributor noise.
    pub factor: f64,
    pub class: ScalingClass,
    /// Relative charge fluctuation `eta = N1^{-1/2}`.
    pub eta: f64,
}

/// Classify the thermodynamic-limit behaviour of the summed bath noise:
/// divergent for `p < 1/4`, finite at `p = 1/4`, vanishing for `p > 1/4`.
pub fn am_scaling(p_exponent: f64, n1: f64) -> Result<AmScalingReport> {
    if n1.is_nan() || n1 < 1.0 {
        return Err(Error::param(format!("N1 must be >= 1, got {n1}")));
    }
    let exponent = 1.0 - 4.0 * p_exponent;
    let class = if p_exponent < 0.25 {
        ScalingClass::Divergent
    } else if p_exponent == 0.25 {
        ScalingClass::Finite
    } else {
        ScalingClass::Vanishing
    };
    Ok(AmScalingReport { factor: n1.powf(exponent), class, eta: 1.0 / n1.sqrt() })
}

/// Doppler shift of a spectral line seen from a frame moving at `v_over_c`.
pub fn doppler_shift(omega_line: f64, v_over_c: f64) -> Result<f64> {
    if v_over_c.abs() >= 1.0 {
        return Err(Error::param(format!("|v/c| must be < 1, got {v_over_c}")));
    }
    Ok(omega_line * v_over_c)
}

/// Predicted interferometric dephasing exponent over a run of duration `t`:
/// `lambda_bench * (m/m0)^2 * (t / 1s)^2`, dimensionless under the
/// one-second rate convention.
pub fn t1_exponent(lambda_bench: f64, m: f64, m0: f64, t: f64) -> Result<f64> {
    for (name, v) in [("lambda_bench", lambda_bench), ("m", m), ("m0", m0), ("t", t)] {
        crate::error::require_positive(name, v)?;
    }
    let ratio = m / m0;
    Ok(lambda_bench * ratio * ratio * t * t)
}

/// One amplification-threshold row.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdRow {
    pub c_match: f64,
    pub lambda: f64,
    pub n_star: f64,
    pub mass_kg: f64,
}

/// Cosmological matching summary plus threshold rows.
#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub n_ds: f64,
    pub eps_per_mode: f64,
    pub m_r_hol: f64,
    pub lambda_natural: f64,
    pub c_match: f64,
    pub thresholds: Vec<ThresholdRow>,
}

impl MatchReport {
    /// Build the report at reference matching factor `c_match`, with one
    /// threshold row per entry of `c_match_rows`.
    pub fn build(k: &PhysicalConstants, c_match: f64, c_match_rows: &[f64]) -> Result<Self> {
        let n_ds = de_sitter_count(k);
        let mut thresholds = Vec::with_capacity(c_match_rows.len());
        for &c in c_match_rows {
            let lambda = lambda_natural(k, c)?;
            let (n_star, mass_kg) = amplification_threshold(lambda, k.m_nucleon)?;
            thresholds.push(ThresholdRow { c_match: c, lambda, n_star, mass_kg });
        }
        Ok(MatchReport {
            n_ds,
            eps_per_mode: per_mode_energy(k),
            m_r_hol: crate::params::holographic_mass(k, n_ds)?,
            lambda_natural: lambda_natural(k, c_match)?,
            c_match,
            thresholds,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Threshold rows as CSV: `C_match,lambda,N_star,mass_kg`.
    pub fn thresholds_csv(&self) -> String {
        let mut out = String::from("C_match,lambda,N_star,mass_kg\n");
        for row in &self.thresholds {
            out.push_str(&format!("{},{},{},{}\n", row.c_match, row.lambda, row.n_star, row.mass_kg));
        }
        out
    }
}
