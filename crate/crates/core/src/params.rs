//! Physical constants, microscopic parameter sets, and derived amplitudes.
//!
//! Two unit modes are supported: SI (all reference tables) and natural units
//! `hbar = c = 1` with frequencies measured in units of `omega0` (all Fock
//! oracle tests). `alpha_em` and `alpha_gtd` are distinct couplings and are
//! never shared: the former is the QED fine-structure constant entering the
//! benchmark rate, the latter the internal coupling defining the microscopic
//! length `L_aik = alpha_gtd * c / omega0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the constructed `L_aik = alpha_gtd * c / omega0`
/// consistency check.
pub const L_AIK_REL_TOL: f64 = 1e-12;

/// Fixed physical inputs (SI unless constructed with [`PhysicalConstants::natural`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Speed of light (m/s).
    pub c: f64,
    /// Hubble rate (1/s).
    #[serde(rename = "H0")]
    pub h0: f64,
    /// Dark-energy density (J/m^3).
    pub rho_lambda: f64,
    /// Planck mass (kg).
    pub m_pl: f64,
    /// Nucleon (proton) reference mass (kg).
    pub m_nucleon: f64,
    /// QED fine-structure constant.
    pub alpha_em: f64,
    /// Solar-system velocity relative to the CMB rest frame, in units of c.
    pub v_cmb_over_c: f64,
}

impl PhysicalConstants {
    /// CODATA values plus the cosmological inputs used by the reference tables.
    pub fn si() -> Self {
        PhysicalConstants {
            hbar: 1.054_571_817e-34,
            c: 2.997_924_58e8,
            h0: 2.18e-18,
            rho_lambda: 5.3e-10,
            m_pl: 2.176_434e-8,
            m_nucleon: 1.672_621_923_69e-27,
            alpha_em: 7.297_352_569_3e-3,
            v_cmb_over_c: 1.23e-3,
        }
    }

    /// `hbar = c = 1` units for oracle tests. The cosmological entries are
    /// set to 1 and carry no meaning in this mode.
    pub fn natural() -> Self {
        PhysicalConstants {
            hbar: 1.0,
            c: 1.0,
            h0: 1.0,
            rho_lambda: 1.0,
            m_pl: 1.0,
            m_nucleon: 1.0,
            alpha_em: 7.297_352_569_3e-3,
            v_cmb_over_c: 1.23e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("hbar", self.hbar),
            ("c", self.c),
            ("H0", self.h0),
            ("rho_lambda", self.rho_lambda),
            ("m_pl", self.m_pl),
            ("m_nucleon", self.m_nucleon),
        ];
        for (name, v) in positive {
            crate::error::require_positive(name, v)?;
        }
        if !(self.alpha_em > 0.0 && self.alpha_em < 1.0) {
            return Err(Error::param(format!("alpha_em must lie in (0,1), got {}", self.alpha_em)));
        }
        if !(self.v_cmb_over_c > 0.0 && self.v_cmb_over_c < 1.0) {
            return Err(Error::param(format!(
                "v_cmb_over_c must lie in (0,1), got {}",
                self.v_cmb_over_c
            )));
        }
        Ok(())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants::si()
    }
}

/// Sign of the scalarized pure-fermion coefficient. `Plus` is the working
/// branch (Wightman line at `omega = -2 omega0`); `Minus` moves the line to
/// `+2 omega0`. The symmetrized correlator is branch-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl Serialize for Branch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        })
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            other => Err(serde::de::Error::custom(format!(
                "sigma_branch must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// Microscopic and matching parameters of the bath model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GtdParams {
    /// Oscillator mass scale (kg).
    #[serde(rename = "m_R")]
    pub m_r: f64,
    /// Oscillator angular frequency (1/s).
    pub omega0: f64,
    /// Internal dimensionless coupling (distinct from `alpha_em`).
    pub alpha_gtd: f64,
    /// Microscopic length `alpha_gtd * c / omega0` (m).
    #[serde(rename = "L_aik")]
    pub l_aik: f64,
    /// Matrix dimension of the fermionic variable.
    pub n_matrix: u32,
    /// Matrix-trace counting factor; defaults to `n_matrix^2`, overridable.
    #[serde(rename = "trace_factor_N")]
    pub trace_factor_n: f64,
    /// Dirac-trace factor of the chosen current; 1 for the scalar bilinear.
    #[serde(rename = "dirac_factor_D")]
    pub dirac_factor_d: f64,
    /// Sign of the scalarized pure-fermion coefficient.
    pub sigma_branch: Branch,
    /// Lorentzian line width (1/s); a free input of the model.
    pub gamma_width: f64,
    /// Matching-normalized matter-bath coupling.
    pub g_int: f64,
    /// Fermionic mass scale (kg); the vacuum cancellation needs `m_F = m_R`.
    #[serde(rename = "m_F")]
    pub m_f: f64,
}

/// Raw JSON shape: unknown keys rejected, optional fields defaulted in
/// [`GtdParams::from_json`].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GtdParamsFile {
    #[serde(rename = "m_R")]
    m_r: f64,
    omega0: f64,
    alpha_gtd: f64,
    #[serde(rename = "L_aik")]
    l_aik: Option<f64>,
    n_matrix: Option<u32>,
    #[serde(rename = "trace_factor_N")]
    trace_factor_n: Option<f64>,
    #[serde(rename = "dirac_factor_D")]
    dirac_factor_d: Option<f64>,
    sigma_branch: Option<Branch>,
    gamma_width: Option<f64>,
    g_int: Option<f64>,
    #[serde(rename = "m_F")]
    m_f: Option<f64>,
}

impl GtdParams {
    /// Build a parameter set; `l_aik` is derived from `alpha_gtd * c / omega0`
    /// and the remaining knobs take their default values (`n_matrix = 1`,
    /// `trace_factor_N = n_matrix^2`, `dirac_factor_D = 1`, working branch,
    /// `gamma_width = omega0`, `g_int = 1`, `m_F = m_R`).
    pub fn new(m_r: f64, omega0: f64, alpha_gtd: f64, c: f64) -> Result<Self> {
        let p = GtdParams {
            m_r,
            omega0,
            alpha_gtd,
            l_aik: alpha_gtd * c / omega0,
            n_matrix: 1,
            trace_factor_n: 1.0,
            dirac_factor_d: 1.0,
            sigma_branch: Branch::Plus,
            gamma_width: omega0,
            g_int: 1.0,
            m_f: m_r,
        };
        p.validate(c)?;
        Ok(p)
    }

    /// Natural-unit parameter set: `m_R = omega0 = alpha_gtd = L_aik = 1`.
    pub fn natural() -> Self {
        GtdParams::new(1.0, 1.0, 1.0, 1.0).expect("natural parameter set is valid")
    }

    /// SI parameter set with the holographic per-mode mass, `omega0 = H0`,
    /// `alpha_gtd = 1` (so `L_aik = c/H0`), and `gamma = H0`.
    pub fn si_holographic(k: &PhysicalConstants) -> Result<Self> {
        let n_ds = crate::cosmo::de_sitter_count(k);
        let m_hol = holographic_mass(k, n_ds)?;
        GtdParams::new(m_hol, k.h0, 1.0, k.c)
    }

    /// Set the matrix dimension, refreshing `trace_factor_N = n_matrix^2`.
    pub fn with_n_matrix(mut self, n: u32) -> Self {
        self.n_matrix = n;
        self.trace_factor_n = (n as f64) * (n as f64);
        self
    }

    pub fn with_branch(mut self, b: Branch) -> Self {
        self.sigma_branch = b;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma_width = gamma;
        self
    }

    /// Parse a flat JSON object (unknown keys rejected). Missing optional
    /// fields are defaulted; a missing `L_aik` is derived from
    /// `alpha_gtd * c / omega0`, a present one must satisfy that relation.
    pub fn from_json(text: &str, k: &PhysicalConstants) -> Result<Self> {
        let raw: GtdParamsFile = serde_json::from_str(text)?;
        let n_matrix = raw.n_matrix.unwrap_or(1);
        let p = GtdParams {
            m_r: raw.m_r,
            omega0: raw.omega0,
            alpha_gtd: raw.alpha_gtd,
            l_aik: raw.l_aik.unwrap_or(raw.alpha_gtd * k.c / raw.omega0),
            n_matrix,
            trace_factor_n: raw
                .trace_factor_n
                .unwrap_or((n_matrix as f64) * (n_matrix as f64)),
            dirac_factor_d: raw.dirac_factor_d.unwrap_or(1.0),
            sigma_branch: raw.sigma_branch.unwrap_or(Branch::Plus),
            gamma_width: raw.gamma_width.unwrap_or(raw.omega0),
            g_int: raw.g_int.unwrap_or(1.0),
            m_f: raw.m_f.unwrap_or(raw.m_r),
        };
        p.validate(k.c)?;
        Ok(p)
    }

    pub fn validate(&self, c: f64) -> Result<()> {
        let positive = [
            ("m_R", self.m_r),
            ("omega0", self.omega0),
            ("alpha_gtd", self.alpha_gtd),
            ("L_aik", self.l_aik),
            ("gamma_width", self.gamma_width),
            ("m_F", self.m_f),
        ];
        for (name, v) in positive {
            crate::error::require_positive(name, v)?;
        }
        if self.n_matrix == 0 {
            return Err(Error::param("n_matrix must be a positive integer"));
        }
        if self.trace_factor_n <= 0.0 || self.dirac_factor_d <= 0.0 {
            return Err(Error::param("trace_factor_N and dirac_factor_D must be positive"));
        }
        let expected = self.alpha_gtd * c / self.omega0;
        if (self.l_aik - expected).abs() > L_AIK_REL_TOL * expected.abs() {
            return Err(Error::param(format!(
                "L_aik = {} inconsistent with alpha_gtd*c/omega0 = {expected}",
                self.l_aik
            )));
        }
        Ok(())
    }
}

/// Connected equal-time variance of the bath current:
/// `A_J = (hbar / (2 m_R omega0 L_aik^2))^2 * N * D`.
pub fn amplitude_aj(p: &GtdParams, hbar: f64) -> Result<f64> {
    for (name, v) in [("m_R", p.m_r), ("omega0", p.omega0), ("L_aik", p.l_aik)] {
        crate::error::require_positive(name, v)?;
    }
    let base = hbar / (2.0 * p.m_r * p.omega0 * p.l_aik * p.l_aik);
    Ok(base * base * p.trace_factor_n * p.dirac_factor_d)
}

/// Squared coupling of the bosonic-ghost surrogate, fixed by matching its
/// vacuum correlator to the fermionic-current amplitude:
/// `kappa^2 = N * D / (8 L_aik^4)`.
pub fn surrogate_kappa_sq(p: &GtdParams) -> Result<f64> {
    crate::error::require_positive("L_aik", p.l_aik)?;
    let l2 = p.l_aik * p.l_aik;
    Ok(p.trace_factor_n * p.dirac_factor_d / (8.0 * l2 * l2))
}

/// Per-de-Sitter-mode mass scale `m_Pl / sqrt(N_dS)`.
pub fn holographic_mass(k: &PhysicalConstants, n_ds: f64) -> Result<f64> {
    crate::error::require_positive("N_dS", n_ds)?;
    Ok(k.m_pl / n_ds.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn aj_in_natural_units() {
        let p = GtdParams::natural();
        assert_relative_eq!(amplitude_aj(&p, 1.0).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn aj_linear_in_trace_factor() {
        let p = GtdParams::natural().with_n_matrix(2);
        assert_eq!(p.trace_factor_n, 4.0);
        assert_relative_eq!(amplitude_aj(&p, 1.0).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn aj_rejects_nonpositive_inputs() {
        let mut p = GtdParams::natural();
        p.m_r = 0.0;
        assert!(amplitude_aj(&p, 1.0).is_err());
        let mut p = GtdParams::natural();
        p.omega0 = -1.0;
        assert!(amplitude_aj(&p, 1.0).is_err());
    }

    #[test]
    fn aj_homogeneity_in_mass_and_hbar() {
        // degree -2 in m_R, degree +2 in hbar
        let p = GtdParams::natural();
        let base = amplitude_aj(&p, 1.0).unwrap();
        let mut p2 = p.clone();
        p2.m_r *= 3.0;
        p2.m_f = p2.m_r;
        assert_relative_eq!(amplitude_aj(&p2, 1.0).unwrap(), base / 9.0, epsilon = 1e-12);
        assert_relative_eq!(amplitude_aj(&p, 2.0).unwrap(), 4.0 * base, epsilon = 1e-12);
    }

    #[test]
    fn aj_frequency_exponent_at_fixed_alpha() {
        // With L_aik recomputed from fixed alpha_gtd, the closed form gives
        // A_J = (hbar omega0 / (2 m_R alpha^2 c^2))^2, i.e. exponent +2.
        let p1 = GtdParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let p2 = GtdParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        let a1 = amplitude_aj(&p1, 1.0).unwrap();
        let a2 = amplitude_aj(&p2, 1.0).unwrap();
        let exponent = (a2 / a1).log2();
        assert_relative_eq!(exponent, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn kappa_matching_reproduces_aj() {
        let p = GtdParams::natural();
        let k2 = surrogate_kappa_sq(&p).unwrap();
        assert_relative_eq!(k2, 0.125, epsilon = 1e-15);
        let hbar = 1.0;
        let surrogate_amp = 2.0 * k2 * (hbar / (p.m_r * p.omega0)).powi(2);
        assert_relative_eq!(surrogate_amp, amplitude_aj(&p, hbar).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn kappa_inverse_quartic_in_length() {
        let mut p = GtdParams::natural();
        p.alpha_gtd = 2.0;
        p.l_aik = 2.0;
        assert_relative_eq!(surrogate_kappa_sq(&p).unwrap(), 1.0 / 128.0, epsilon = 1e-15);
    }

    #[test]
    fn holographic_mass_examples() {
        let k = PhysicalConstants::si();
        let m = holographic_mass(&k, 2.3e122).unwrap();
        assert_relative_eq!(m, 1.4e-69, max_relative = 0.03);
        assert_relative_eq!(holographic_mass(&k, 1.0).unwrap(), k.m_pl, epsilon = 0.0);
        assert!(holographic_mass(&k, 0.0).is_err());
        assert!(holographic_mass(&k, -1.0).is_err());
        // monotone decreasing in N_dS
        let mut prev = f64::INFINITY;
        for n in [1.0, 1e10, 1e60, 1e122] {
            let m = holographic_mass(&k, n).unwrap();
            assert!(m < prev);
            prev = m;
        }
    }

    #[test]
    fn holographic_rest_energy_near_hubble_quantum() {
        let k = PhysicalConstants::si();
        let n_ds = crate::cosmo::de_sitter_count(&k);
        let m = holographic_mass(&k, n_ds).unwrap();
        let rest = m * k.c * k.c;
        assert_relative_eq!(rest, 1.3e-52, max_relative = 0.03);
        // same order as hbar * H0
        let ratio = rest / (k.hbar * k.h0);
        assert!(ratio > 0.3 && ratio < 1.0, "ratio = {ratio}");
    }

    #[test]
    fn json_round_trip_and_unknown_key_rejection() {
        let k = PhysicalConstants::natural();
        let p = GtdParams::natural().with_n_matrix(2);
        let text = serde_json::to_string(&p).unwrap();
        let back = GtdParams::from_json(&text, &k).unwrap();
        assert_eq!(back, p);

        let bad = r#"{"m_R":1.0,"omega0":1.0,"alpha_gtd":1.0,"mystery":3.0}"#;
        assert!(GtdParams::from_json(bad, &k).is_err());
    }

    #[test]
    fn json_defaults_applied() {
        let k = PhysicalConstants::natural();
        let text = r#"{"m_R":1.0,"omega0":1.0,"alpha_gtd":1.0}"#;
        let p = GtdParams::from_json(text, &k).unwrap();
        assert_eq!(p.l_aik, 1.0);
        assert_eq!(p.n_matrix, 1);
        assert_eq!(p.trace_factor_n, 1.0);
        assert_eq!(p.sigma_branch, Branch::Plus);
        assert_eq!(p.m_f, p.m_r);
    }

    #[test]
    fn l_aik_consistency_enforced() {
        let k = PhysicalConstants::natural();
        let text = r#"{"m_R":1.0,"omega0":1.0,"alpha_gtd":1.0,"L_aik":1.5}"#;
        assert!(GtdParams::from_json(text, &k).is_err());
    }

    #[test]
    fn constants_validation() {
        assert!(PhysicalConstants::si().validate().is_ok());
        let mut k = PhysicalConstants::si();
        k.alpha_em = 1.5;
        assert!(k.validate().is_err());
        let mut k = PhysicalConstants::si();
        k.h0 = 0.0;
        assert!(k.validate().is_err());
    }

    #[test]
    fn branch_serde() {
        let plus: Branch = serde_json::from_str("1").unwrap();
        let minus: Branch = serde_json::from_str("-1").unwrap();
        assert_eq!(plus, Branch::Plus);
        assert_eq!(minus, Branch::Minus);
        assert!(serde_json::from_str::<Branch>("0").is_err());
        assert_eq!(serde_json::to_string(&Branch::Minus).unwrap(), "-1");
    }
}
