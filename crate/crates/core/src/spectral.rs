//! Analytic correlator and spectrum models.
//!
//! Spectra are symbolic line collections, never sampled arrays: a delta line
//! at `2 H0` cannot live on any feasible frequency grid. Quadrature appears
//! only in oracle tests.
//!
//! Fourier convention (project-wide): `S(omega) = Integral dtau
//! exp(-i omega tau) C(tau)`, hence `C(tau) = Sum_k w_k exp(+i c_k tau)` for
//! delta lines of weight `w_k` (area under `S/2pi`) at centers `c_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{amplitude_aj, GtdParams};
use crate::C64;

/// A delta line: `weight` is the area under `S(omega)/2pi`, `center` in 1/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaLine {
    pub weight: f64,
    pub center: f64,
}

/// A Lorentzian line of unit-normalized shape `2*gamma/((omega-center)^2+gamma^2)`
/// scaled by `area` (again area under `S/2pi`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianLine {
    pub area: f64,
    pub center: f64,
    pub width: f64,
}

/// Symbolic spectrum: delta lines + Lorentzian lines + a zero-frequency
/// connected pedestal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SpectrumModel {
    pub delta_lines: Vec<DeltaLine>,
    pub lorentzians: Vec<LorentzianLine>,
    pub pedestal_weight: f64,
}

impl SpectrumModel {
    /// Total spectral weight; equals the equal-time correlator `C(0)`
    /// (Parseval at `tau = 0`).
    pub fn total_weight(&self) -> f64 {
        self.delta_lines.iter().map(|l| l.weight).sum::<f64>()
            + self.lorentzians.iter().map(|l| l.area).sum::<f64>()
            + self.pedestal_weight
    }

    /// Time-domain correlator `C(tau)` of the model.
    pub fn correlator(&self, tau: f64) -> C64 {
        let i = C64::i();
        let mut c = C64::new(self.pedestal_weight, 0.0);
        for l in &self.delta_lines {
            c += C64::new(l.weight, 0.0) * (i * l.center * tau).exp();
        }
        for l in &self.lorentzians {
            c += C64::new(l.area * (-l.width * tau.abs()).exp(), 0.0) * (i * l.center * tau).exp();
        }
        c
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn validate_lines(&self) -> Result<()> {
        for l in &self.lorentzians {
            crate::error::require_positive("Lorentzian width", l.width)?;
        }
        Ok(())
    }
}

/// Vacuum Wightman spectrum: one delta line of weight `A_J` at
/// `-sigma * 2 * omega0`.
pub fn wightman_line(p: &GtdParams, hbar: f64) -> Result<SpectrumModel> {
    let aj = amplitude_aj(p, hbar)?;
    Ok(SpectrumModel {
        delta_lines: vec![DeltaLine {
            weight: aj,
            center: -p.sigma_branch.sign() * 2.0 * p.omega0,
        }],
        lorentzians: vec![],
        pedestal_weight: 0.0,
    })
}

/// Symmetrized spectrum: two lines of weight `A_J/2` at `+-2*omega0`.
pub fn symmetrized_model(p: &GtdParams, hbar: f64) -> Result<SpectrumModel> {
    let aj = amplitude_aj(p, hbar)?;
    Ok(SpectrumModel {
        delta_lines: vec![
            DeltaLine { weight: 0.5 * aj, center: 2.0 * p.omega0 },
            DeltaLine { weight: 0.5 * aj, center: -2.0 * p.omega0 },
        ],
        lorentzians: vec![],
        pedestal_weight: 0.0,
    })
}

/// Symmetrized correlator `A_J cos(2 omega0 tau)`; branch-independent.
pub fn csym(p: &GtdParams, hbar: f64, tau: f64) -> Result<f64> {
    let aj = amplitude_aj(p, hbar)?;
    Ok(aj * (2.0 * p.omega0 * tau).cos())
}

/// Asymmetric (commutator) part of the kernel:
/// `-2i * sigma * A_J * sin(2 omega0 tau)`.
pub fn commutator_kernel(p: &GtdParams, hbar: f64, tau: f64) -> Result<C64> {
    let aj = amplitude_aj(p, hbar)?;
    Ok(C64::new(0.0, -2.0 * p.sigma_branch.sign() * aj * (2.0 * p.omega0 * tau).sin()))
}

/// Lorentzian spectral density `area * 2*gamma / ((omega-center)^2 + gamma^2)`,
/// normalized so that `Integral d omega / 2pi = area`.
pub fn lorentzian_s(omega: f64, area: f64, center: f64, width: f64) -> Result<f64> {
    crate::error::require_positive("Lorentzian width", width)?;
    let d = omega - center;
    Ok(area * 2.0 * width / (d * d + width * width))
}

/// Off-resonance suppression of the line-peak rate at system Bohr frequency
/// `omega_s`: `gamma^2 / ((omega_s + 2 omega0)^2 + gamma^2)`.
pub fn offres_suppression(omega_s: f64, omega0: f64, gamma: f64) -> Result<f64> {
    crate::error::require_positive("gamma", gamma)?;
    let d = omega_s + 2.0 * omega0;
    Ok(gamma * gamma / (d * d + gamma * gamma))
}

/// Fermi-Dirac occupation `1 / (exp(x) + 1)` at `x = beta*hbar*omega0`.
pub fn fermi_occupation(beta_hbar_omega0: f64) -> f64 {
    1.0 / (beta_hbar_omega0.exp() + 1.0)
}

/// Bose-Einstein occupation `1 / (exp(x) - 1)` at `x = beta*hbar*omega0`.
pub fn bose_occupation(beta_hbar_omega0: f64) -> f64 {
    1.0 / (beta_hbar_omega0.exp_m1())
}

/// Populated fermionic-current spectrum for a diagonal Gaussian state with
/// occupations `n_b`, `n_d`: forward line `(1-n_b)(1-n_d) A_J`, backward line
/// `n_b n_d A_J`, pedestal `[n_b(1-n_b) + n_d(1-n_d)] A_J`.
///
/// Line positions follow the branch: forward means the vacuum-direction line
/// at `-sigma * 2 omega0`.
pub fn populated_fermion_model(p: &GtdParams, hbar: f64, n_b: f64, n_d: f64) -> Result<SpectrumModel> {
    for (name, n) in [("n_b", n_b), ("n_d", n_d)] {
        if !(0.0..=1.0).contains(&n) {
            return Err(Error::param(format!("{name} must lie in [0,1], got {n}")));
        }
    }
    let aj = amplitude_aj(p, hbar)?;
    let forward_center = -p.sigma_branch.sign() * 2.0 * p.omega0;
    let model = SpectrumModel {
        delta_lines: vec![
            DeltaLine { weight: (1.0 - n_b) * (1.0 - n_d) * aj, center: forward_center },
            DeltaLine { weight: n_b * n_d * aj, center: -forward_center },
        ],
        lorentzians: vec![],
        pedestal_weight: (n_b * (1.0 - n_b) + n_d * (1.0 - n_d)) * aj,
    };
    model.validate_lines()?;
    Ok(model)
}

/// Populated bosonic-ghost surrogate spectrum for thermal occupation `n_B`:
/// lines `(n_B+1)^2 A_J` at `+2 omega0` and `n_B^2 A_J` at `-2 omega0`,
/// pedestal `2 n_B (n_B+1) A_J`. Total weight `(2 n_B + 1)^2 A_J`.
pub fn populated_boson_model(p: &GtdParams, hbar: f64, n_bose: f64) -> Result<SpectrumModel> {
    crate::error::require_nonnegative("n_B", n_bose)?;
    let aj = amplitude_aj(p, hbar)?;
    Ok(SpectrumModel {
        delta_lines: vec![
            DeltaLine { weight: (n_bose + 1.0) * (n_bose + 1.0) * aj, center: 2.0 * p.omega0 },
            DeltaLine { weight: n_bose * n_bose * aj, center: -2.0 * p.omega0 },
        ],
        lorentzians: vec![],
        pedestal_weight: 2.0 * n_bose * (n_bose + 1.0) * aj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Branch;
    use crate::quad;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn natural() -> GtdParams {
        GtdParams::natural()
    }

    #[test]
    fn wightman_line_positions() {
        let p = natural();
        let m = wightman_line(&p, 1.0).unwrap();
        assert_eq!(m.delta_lines.len(), 1);
        assert_eq!(m.delta_lines[0].center, -2.0);
        assert_relative_eq!(m.delta_lines[0].weight, 0.25, epsilon = 1e-15);

        let m = wightman_line(&p.clone().with_branch(Branch::Minus), 1.0).unwrap();
        assert_eq!(m.delta_lines[0].center, 2.0);
        assert_relative_eq!(m.delta_lines[0].weight, 0.25, epsilon = 1e-15);

        // Parseval at tau = 0
        assert_relative_eq!(m.correlator(0.0).re, 0.25, epsilon = 1e-15);
        assert_relative_eq!(m.correlator(0.0).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn csym_values() {
        let p = natural();
        assert_relative_eq!(csym(&p, 1.0, 0.0).unwrap(), 0.25, epsilon = 1e-15);
        assert_relative_eq!(
            csym(&p, 1.0, std::f64::consts::FRAC_PI_2).unwrap(),
            -0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn symmetrized_model_matches_csym_via_inverse_transform() {
        let p = natural();
        let m = symmetrized_model(&p, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..20 {
            let tau: f64 = rng.gen_range(-10.0..10.0);
            let from_model = m.correlator(tau);
            let analytic = csym(&p, 1.0, tau).unwrap();
            assert!((from_model.re - analytic).abs() < 1e-12);
            assert!(from_model.im.abs() < 1e-12);
        }
    }

    #[test]
    fn commutator_kernel_values() {
        let p = natural();
        assert_eq!(commutator_kernel(&p, 1.0, 0.0).unwrap(), C64::new(0.0, 0.0));
        let v = commutator_kernel(&p, 1.0, std::f64::consts::FRAC_PI_4).unwrap();
        assert_relative_eq!(v.im, -0.5, epsilon = 1e-12);
        assert_relative_eq!(v.re, 0.0, epsilon = 1e-15);
        // sign flips with the branch
        let v = commutator_kernel(&p.clone().with_branch(Branch::Minus), 1.0, std::f64::consts::FRAC_PI_4)
            .unwrap();
        assert_relative_eq!(v.im, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn lorentzian_peak_and_normalization() {
        assert_relative_eq!(lorentzian_s(3.0, 1.5, 3.0, 0.5).unwrap(), 2.0 * 1.5 / 0.5, epsilon = 1e-15);
        assert!(lorentzian_s(0.0, 1.0, 0.0, 0.0).is_err());

        // quadrature oracle over +-1e6 gamma recovers the area to 1e-6 relative
        let (area, center, width) = (2.25, -4.0, 0.35);
        let half = 1e6 * width;
        let (integral, _) = quad::integrate(
            |w| lorentzian_s(w, area, center, width).unwrap(),
            center - half,
            center + half,
            1e-9,
        );
        assert_relative_eq!(integral / (2.0 * std::f64::consts::PI), area, max_relative = 1e-6);
    }

    #[test]
    fn lorentzian_inverse_transform_pins_fourier_convention() {
        // C(tau) = (1/2pi) Integral S(omega) e^{+i omega tau} d omega must
        // recover area * e^{+i center tau - gamma |tau|}; in particular the
        // sign of the phase. Truncating the tail at 1e5*gamma costs ~6e-6
        // relative, hence the tolerance.
        let (area, center, gamma) = (0.25, -2.0, 1.0);
        let half_width = 1e5;
        for tau in [0.005, 0.013] {
            let c = quad::integrate_complex(
                |w| {
                    C64::new(lorentzian_s(w, area, center, gamma).unwrap(), 0.0)
                        * (C64::i() * (w * tau)).exp()
                },
                center - half_width,
                center + half_width,
                1e-9,
            ) / (2.0 * std::f64::consts::PI);
            let expect = C64::new(area * (-gamma * tau).exp(), 0.0) * (C64::i() * (center * tau)).exp();
            assert!(
                (c - expect).norm() < 5e-5 * area,
                "tau={tau}: {c} vs {expect}"
            );
        }
    }

    #[test]
    fn lorentzian_zero_frequency_form() {
        // S(0) for a line at -2*omega0 is 2*A*gamma/((2 omega0)^2 + gamma^2)
        let (omega0, gamma, area) = (1.7, 0.43, 0.9);
        let s0 = lorentzian_s(0.0, area, -2.0 * omega0, gamma).unwrap();
        assert_relative_eq!(
            s0,
            2.0 * area * gamma / ((2.0 * omega0).powi(2) + gamma * gamma),
            epsilon = 1e-15
        );
    }

    #[test]
    fn offres_reference_points() {
        let h0 = 2.18e-18;
        let s = offres_suppression(6.3, h0, h0).unwrap();
        assert_relative_eq!(s, 1.2e-37, max_relative = 0.05);
        let s = offres_suppression(1.5e18, h0, h0).unwrap();
        assert_relative_eq!(s, 2.1e-72, max_relative = 0.05);
        assert_relative_eq!(offres_suppression(-2.0 * h0, h0, h0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(offres_suppression(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn populated_fermion_reference_rows() {
        let p = natural();
        // beta*hbar*omega0 = 2*pi
        let n = fermi_occupation(2.0 * std::f64::consts::PI);
        let m = populated_fermion_model(&p, 1.0, n, n).unwrap();
        let backward_over_forward = m.delta_lines[1].weight / m.delta_lines[0].weight;
        assert_relative_eq!(backward_over_forward, (-4.0 * std::f64::consts::PI).exp(), epsilon = 1e-12);
        assert_relative_eq!(backward_over_forward, 3.49e-6, max_relative = 0.01);
        assert_relative_eq!(m.pedestal_weight / 0.25, 3.72e-3, max_relative = 0.01);

        // beta*hbar*omega0 = 0.1
        let n = fermi_occupation(0.1);
        assert_relative_eq!(n, 4.75e-1, max_relative = 0.01);
        let m = populated_fermion_model(&p, 1.0, n, n).unwrap();
        assert_relative_eq!(
            m.delta_lines[1].weight / m.delta_lines[0].weight,
            8.19e-1,
            max_relative = 0.01
        );
        assert_relative_eq!(m.pedestal_weight / 0.25, 4.99e-1, max_relative = 0.01);
    }

    #[test]
    fn populated_fermion_vacuum_reduction_and_domain() {
        let p = natural();
        let m = populated_fermion_model(&p, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(m.delta_lines[1].weight, 0.0);
        assert_eq!(m.pedestal_weight, 0.0);
        assert_relative_eq!(m.total_weight(), 0.25, epsilon = 1e-15);
        assert!(populated_fermion_model(&p, 1.0, -0.1, 0.0).is_err());
        assert!(populated_fermion_model(&p, 1.0, 0.0, 1.1).is_err());
    }

    #[test]
    fn populated_boson_enhancement() {
        let p = natural();
        let m = populated_boson_model(&p, 1.0, 0.0).unwrap();
        assert_relative_eq!(m.total_weight(), 0.25, epsilon = 1e-15);

        let n = bose_occupation(2.0 * std::f64::consts::PI);
        let m = populated_boson_model(&p, 1.0, n).unwrap();
        assert_relative_eq!(m.total_weight() / 0.25, 1.0075, max_relative = 1e-3);

        let n = bose_occupation(1.0);
        let m = populated_boson_model(&p, 1.0, n).unwrap();
        assert_relative_eq!(m.total_weight() / 0.25, 4.68, max_relative = 1e-3);

        assert!(populated_boson_model(&p, 1.0, -0.5).is_err());
    }

    #[test]
    fn spectrum_json_round_trip() {
        let p = natural();
        let m = populated_fermion_model(&p, 1.0, 0.2, 0.3).unwrap();
        let text = m.to_json().unwrap();
        assert!(text.contains("delta_lines"));
        assert_eq!(SpectrumModel::from_json(&text).unwrap(), m);
    }

    proptest! {
        #[test]
        fn equal_time_value_equals_total_weight(n_b in 0.0f64..=1.0, n_d in 0.0f64..=1.0) {
            let p = natural();
            let m = populated_fermion_model(&p, 1.0, n_b, n_d).unwrap();
            let c0 = m.correlator(0.0);
            prop_assert!((c0.re - m.total_weight()).abs() < 1e-14);
            prop_assert!(c0.im.abs() < 1e-14);
        }

        #[test]
        fn fermionic_total_weight_fixed_for_thermal(x in 1e-3f64..50.0) {
            // Equal-time connected variance stays A_J for every thermal occupation.
            let p = natural();
            let n = fermi_occupation(x);
            let m = populated_fermion_model(&p, 1.0, n, n).unwrap();
            prop_assert!((m.total_weight() - 0.25).abs() < 1e-14);
        }

        #[test]
        fn backward_forward_ratio_is_boltzmann_squared(x in 1e-2f64..20.0) {
            let p = natural();
            let n = fermi_occupation(x);
            let m = populated_fermion_model(&p, 1.0, n, n).unwrap();
            let ratio = m.delta_lines[1].weight / m.delta_lines[0].weight;
            prop_assert!((ratio - (-2.0 * x).exp()).abs() < 1e-12 * (-2.0 * x).exp().max(1e-30));
        }

        #[test]
        fn offres_strictly_decreasing(omega0 in 1e-3f64..1e3, gamma in 1e-3f64..1e3, w in 0.0f64..1e6) {
            let s1 = offres_suppression(w, omega0, gamma).unwrap();
            let s2 = offres_suppression(w + 1.0, omega0, gamma).unwrap();
            prop_assert!(s2 < s1);
        }
    }
}
