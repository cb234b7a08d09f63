//! Small-system master-equation machinery.
//!
//! The secular generator couples jump operators at Bohr frequency `omega_S`
//! with rate `Gamma(omega_S) = g^2/hbar^2 * 2 A_J gamma / (detuning^2 +
//! gamma^2)`, detuning measured from the line at `-2 sigma omega0`, and
//! cross-site weights from a positive-semidefinite spatial kernel. The
//! Lamb-shift (principal-value) term is deliberately omitted; only its
//! existence is named by the model, no closed form is supplied.
//!
//! Vectorization is column-stacking throughout: `vec(A X B) = (B^T kron A)
//! vec(X)`; one pinned test in [`crate::linalg`] prevents convention drift.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dagger, hermitize, identity, min_hermitian_eigenvalue, unvec, vec_of, CMatrix};
use crate::params::{amplitude_aj, GtdParams};
use crate::C64;

/// PSD verdict tolerance for eigenvalue checks (double-precision Choi
/// construction noise).
pub const PSD_TOL: f64 = 1e-10;

/// Bohr frequencies closer than this (relative to `omega0`) are secularized
/// into one group.
pub const SECULAR_GROUP_REL_TOL: f64 = 1e-9;

/// Spatial weight `Theta(x, y)` of the dissipator.
#[derive(Clone)]
pub enum SpatialKernel {
    /// `Theta = 1`: cosmologically coherent bath.
    Constant,
    /// `Theta = exp(-(x-y)^2 / (4 r_c^2))`, normalized to 1 at coincidence so
    /// two point masses separated by `dx` dephase as `1 - exp(-dx^2/4 r_c^2)`.
    Gaussian { r_c: f64 },
    /// User-supplied symmetric kernel.
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for SpatialKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpatialKernel::Constant => write!(f, "SpatialKernel::Constant"),
            SpatialKernel::Gaussian { r_c } => write!(f, "SpatialKernel::Gaussian {{ r_c: {r_c} }}"),
            SpatialKernel::Custom(_) => write!(f, "SpatialKernel::Custom(..)"),
        }
    }
}

impl SpatialKernel {
    pub fn gaussian(r_c: f64) -> Result<Self> {
        crate::error::require_positive("r_C", r_c)?;
        Ok(SpatialKernel::Gaussian { r_c })
    }

    pub fn sample(&self, x: f64, y: f64) -> f64 {
        match self {
            SpatialKernel::Constant => 1.0,
            SpatialKernel::Gaussian { r_c } => {
                let d = x - y;
                (-d * d / (4.0 * r_c * r_c)).exp()
            }
            SpatialKernel::Custom(f) => f(x, y),
        }
    }

    /// Gram matrix on a point set.
    pub fn gram(&self, sites: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(sites.len(), sites.len(), |i, j| self.sample(sites[i], sites[j]))
    }

    /// Reject kernels whose Gram matrix on `sites` has an eigenvalue below
    /// `-PSD_TOL`.
    pub fn require_psd(&self, sites: &[f64]) -> Result<()> {
        if sites.is_empty() {
            return Ok(());
        }
        let gram = self.gram(sites).map(|x| C64::new(x, 0.0));
        let min = min_hermitian_eigenvalue(&gram);
        if min < -PSD_TOL {
            return Err(Error::KernelNotPsd { min_eigenvalue: min });
        }
        Ok(())
    }
}

/// A jump operator `M(omega_S)` attached to a site position.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub bohr_frequency: f64,
    pub site: f64,
    pub matrix: CMatrix,
}

/// GKLS generator as a `d^2 x d^2` superoperator (column-stacking).
#[derive(Debug, Clone)]
pub struct Superoperator {
    pub dim: usize,
    pub matrix: CMatrix,
}

impl Superoperator {
    /// Apply to a density matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rho.nrows() });
        }
        Ok(unvec(&(&self.matrix * vec_of(rho)), self.dim))
    }

    /// Negated generator; the standard negative control for CP checks.
    pub fn sign_flipped(&self) -> Superoperator {
        Superoperator { dim: self.dim, matrix: -&self.matrix }
    }
}

/// Secular dissipator rate at Bohr frequency `omega_s`.
pub fn secular_rate(omega_s: f64, p: &GtdParams, hbar: f64) -> Result<f64> {
    let a_j = amplitude_aj(p, hbar)?;
    let line_center = -p.sigma_branch.sign() * 2.0 * p.omega0;
    let detuning = omega_s - line_center;
    let gamma = p.gamma_width;
    Ok(p.g_int * p.g_int / (hbar * hbar) * 2.0 * a_j * gamma
        / (detuning * detuning + gamma * gamma))
}

/// Build the secular GKLS dissipator
/// `sum_w Gamma(w) sum_{x,y} Theta(x,y) [M_x rho M_y^dag - 1/2 {M_y^dag M_x, rho}]`.
///
/// Jump operators are grouped by Bohr frequency to within
/// `SECULAR_GROUP_REL_TOL * omega0`. The kernel Gram matrix on the site set
/// must be PSD or the construction is rejected with the failing eigenvalue.
pub fn lindblad_generator(
    ops: &[JumpOperator],
    kernel: &SpatialKernel,
    p: &GtdParams,
    hbar: f64,
) -> Result<Superoperator> {
    if ops.is_empty() {
        return Err(Error::param("need at least one jump operator"));
    }
    let d = ops[0].matrix.nrows();
    for op in ops {
        if op.matrix.nrows() != d || op.matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: op.matrix.nrows() });
        }
    }
    let sites: Vec<f64> = ops.iter().map(|o| o.site).collect();
    kernel.require_psd(&sites)?;

    // group indices by Bohr frequency
    let tol = SECULAR_GROUP_REL_TOL * p.omega0;
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match groups.iter_mut().find(|(w, _)| (op.bohr_frequency - *w).abs() <= tol) {
            Some((_, members)) => members.push(i),
            None => groups.push((op.bohr_frequency, vec![i])),
        }
    }

    let eye = identity(d);
    let mut total = CMatrix::zeros(d * d, d * d);
    for (omega_s, members) in &groups {
        let rate = secular_rate(*omega_s, p, hbar)?;
        if rate < 0.0 {
            return Err(Error::param(format!("negative secular rate at omega_S = {omega_s}")));
        }
        for &ix in members {
            for &iy in members {
                let theta = kernel.sample(ops[ix].site, ops[iy].site);
                let m_x = &ops[ix].matrix;
                let m_y = &ops[iy].matrix;
                let m_y_dag_m_x = dagger(m_y) * m_x;
                let weight = C64::new(rate * theta, 0.0);
                // vec(M_x rho M_y^dag) = (conj(M_y) kron M_x) vec(rho)
                let sandwich = m_y.map(|z| z.conj()).kronecker(m_x);
                let left = eye.kronecker(&m_y_dag_m_x);
                let right = m_y_dag_m_x.transpose().kronecker(&eye);
                total += (sandwich - (left + right) * C64::new(0.5, 0.0)) * weight;
            }
        }
    }
    Ok(Superoperator { dim: d, matrix: total })
}

fn validate_density(rho: &CMatrix) -> Result<()> {
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-9 {
        return Err(Error::InvalidState(format!("density trace {trace} != 1")));
    }
    if crate::linalg::hermiticity_defect(rho) > 1e-9 {
        return Err(Error::InvalidState("density matrix not Hermitian".into()));
    }
    Ok(())
}

/// Propagate `rho0` for time `t` under the generator: `unvec(exp(gen t) vec(rho0))`,
/// re-Hermitized. The trace is NOT renormalized; trace preservation to 1e-9
/// is the correctness check, not an input assumption.
pub fn propagate(gen: &Superoperator, rho0: &CMatrix, t: f64) -> Result<CMatrix> {
    if gen.dim > 16 {
        return Err(Error::param(format!("propagation limited to d <= 16, got {}", gen.dim)));
    }
    if rho0.nrows() != gen.dim || rho0.ncols() != gen.dim {
        return Err(Error::DimensionMismatch { expected: gen.dim, got: rho0.nrows() });
    }
    validate_density(rho0)?;
    let u = (&gen.matrix * C64::new(t, 0.0)).exp();
    Ok(hermitize(&unvec(&(u * vec_of(rho0)), gen.dim)))
}

/// A candidate completely-positive map with its Choi representation.
#[derive(Debug, Clone)]
pub struct ChannelMap {
    pub dimension: usize,
    /// `d^2 x d^2` superoperator, column-stacking convention.
    pub superoperator: CMatrix,
    /// Choi matrix `sum_ij |i><j| kron E(|i><j|)`.
    pub choi: CMatrix,
}

impl ChannelMap {
    /// Build from a superoperator by acting on the (unnormalized) maximally
    /// entangled state.
    pub fn from_superoperator(dim: usize, superoperator: CMatrix) -> Result<Self> {
        if superoperator.nrows() != dim * dim || superoperator.ncols() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: superoperator.nrows() });
        }
        let mut choi = CMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut e_ij = CMatrix::zeros(dim, dim);
                e_ij[(i, j)] = C64::new(1.0, 0.0);
                let image = unvec(&(&superoperator * vec_of(&e_ij)), dim);
                for r in 0..dim {
                    for s in 0..dim {
                        choi[(i * dim + r, j * dim + s)] = image[(r, s)];
                    }
                }
            }
        }
        Ok(ChannelMap { dimension: dim, superoperator, choi })
    }

    /// Max deviation of the output-partial-trace of the Choi matrix from the
    /// identity; zero for a trace-preserving map.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.dimension;
        let mut defect: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut tr = C64::new(0.0, 0.0);
                for r in 0..d {
                    tr += self.choi[(i * d + r, j * d + r)];
                }
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                defect = defect.max((tr - expect).norm());
            }
        }
        defect
    }
}

impl Serialize for ChannelMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        fn rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect()
        }
        let mut st = s.serialize_struct("ChannelMap", 3)?;
        st.serialize_field("dimension", &self.dimension)?;
        st.serialize_field("superoperator", &rows(&self.superoperator))?;
        st.serialize_field("choi", &rows(&self.choi))?;
        st.end()
    }
}

/// Exponentiate the generator to time `t` and package the channel with its
/// Choi matrix.
pub fn choi_of(gen: &Superoperator, t: f64) -> Result<ChannelMap> {
    if gen.dim > 8 {
        return Err(Error::param(format!("Choi construction limited to d <= 8, got {}", gen.dim)));
    }
    let u = (&gen.matrix * C64::new(t, 0.0)).exp();
    ChannelMap::from_superoperator(gen.dim, u)
}

/// Complete-positivity verdict by Choi eigenvalue threshold.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
}

pub fn cp_check(ch: &ChannelMap) -> CpVerdict {
    let min = min_hermitian_eigenvalue(&ch.choi);
    CpVerdict { is_cp: min >= -PSD_TOL, min_choi_eigenvalue: min }
}

/// The exact qubit pure-dephasing channel: diagonal entries preserved,
/// coherence multiplied by `exp(-(a-b)^2 D_T / (2 hbar^2))`. Always CP for
/// `D_T >= 0`.
pub fn gaussian_dephasing_channel(a: f64, b: f64, d_t: f64, hbar: f64) -> Result<ChannelMap> {
    if d_t < 0.0 {
        return Err(Error::param(format!("D_T must be >= 0, got {d_t}")));
    }
    let f = (-(a - b) * (a - b) * d_t / (2.0 * hbar * hbar)).exp();
    let mut s = CMatrix::zeros(4, 4);
    s[(0, 0)] = C64::new(1.0, 0.0);
    s[(1, 1)] = C64::new(f, 0.0);
    s[(2, 2)] = C64::new(f, 0.0);
    s[(3, 3)] = C64::new(1.0, 0.0);
    ChannelMap::from_superoperator(2, s)
}

/// Discretized decoherence functional
/// `sum_ij (mu_a - mu_b)_i Theta(x_i, x_j) (mu_a - mu_b)_j` for two
/// mass-per-cell profiles on a common grid. Branches must carry equal total
/// mass. Vanishes identically for the constant kernel (mass conservation);
/// strictly positive for a Gaussian kernel once the branches differ on scales
/// beyond `r_c`.
pub fn decoherence_functional(
    grid: &[f64],
    mass_a: &[f64],
    mass_b: &[f64],
    kernel: &SpatialKernel,
) -> Result<f64> {
    if grid.len() != mass_a.len() || grid.len() != mass_b.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: mass_a.len().max(mass_b.len()) });
    }
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let total_a: f64 = mass_a.iter().sum();
    let total_b: f64 = mass_b.iter().sum();
    let scale = total_a.abs().max(total_b.abs()).max(1e-300);
    if (total_a - total_b).abs() > 1e-12 * scale {
        return Err(Error::param(format!(
            "branches must carry equal total mass (got {total_a} vs {total_b})"
        )));
    }
    let diff: Vec<f64> = mass_a.iter().zip(mass_b).map(|(a, b)| a - b).collect();
    let mut value = 0.0;
    for (i, &xi) in grid.iter().enumerate() {
        for (j, &xj) in grid.iter().enumerate() {
            value += diff[i] * kernel.sample(xi, xj) * diff[j];
        }
    }
    Ok(value)
}
