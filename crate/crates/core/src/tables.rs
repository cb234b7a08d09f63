//! Reference-table row builders: off-resonance suppression across the
//! experimental bands, thermal population factors, and amplification
//! thresholds.

use serde::Serialize;

use crate::cosmo;
use crate::error::Result;
use crate::params::PhysicalConstants;
use crate::spectral;

/// Experimental bands probed by the suppression table: `(label, omega_S in 1/s)`.
pub const SUPPRESSION_BANDS: [(&str, f64); 5] = [
    ("pulsar_timing_1nHz", 6.3e-9),
    ("lisa_band_1mHz", 6.3e-3),
    ("mechanical_1Hz", 6.3),
    ("mechanical_1kHz", 6.3e3),
    ("xray_1keV", 1.5e18),
];

/// Inverse temperatures (in units of `hbar omega0`) of the populated-bath
/// table: the loose `~hbar H0` identification, the de Sitter temperature
/// `beta hbar omega0 = 2 pi`, and a hot bath.
pub const POPULATED_BETAS: [f64; 3] = [1.0, std::f64::consts::TAU, 0.1];

/// Matching factors of the threshold table; the second entry is replaced by
/// `alpha_em^2` computed from the constants at build time.
pub fn threshold_c_matches(k: &PhysicalConstants) -> [f64; 4] {
    [1.0, k.alpha_em * k.alpha_em, 1e-8, 1e-12]
}

#[derive(Debug, Clone, Serialize)]
pub struct SuppressionRow {
    pub band: &'static str,
    pub omega_s: f64,
    pub suppression: f64,
}

/// Off-resonance suppression at the five band frequencies with
/// `gamma = omega0 = H0`.
pub fn suppression_table(k: &PhysicalConstants) -> Result<Vec<SuppressionRow>> {
    SUPPRESSION_BANDS
        .iter()
        .map(|&(band, omega_s)| {
            Ok(SuppressionRow {
                band,
                omega_s,
                suppression: spectral::offres_suppression(omega_s, k.h0, k.h0)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PopulatedRow {
    pub beta_hbar_omega0: f64,
    pub n_f: f64,
    pub backward_over_forward: f64,
    pub pedestal_weight: f64,
}

/// Thermal fermionic population factors: occupation, opposite-line weight
/// ratio, and zero-frequency pedestal weight (in units of `A_J`).
pub fn populated_table() -> Vec<PopulatedRow> {
    POPULATED_BETAS
        .iter()
        .map(|&x| {
            let n_f = spectral::fermi_occupation(x);
            PopulatedRow {
                beta_hbar_omega0: x,
                n_f,
                backward_over_forward: (n_f / (1.0 - n_f)).powi(2),
                pedestal_weight: 2.0 * n_f * (1.0 - n_f),
            }
        })
        .collect()
}

/// Amplification thresholds at the standard matching factors.
pub fn threshold_table(k: &PhysicalConstants) -> Result<Vec<cosmo::ThresholdRow>> {
    let report = cosmo::MatchReport::build(k, 1.0, &threshold_c_matches(k))?;
    Ok(report.thresholds)
}
