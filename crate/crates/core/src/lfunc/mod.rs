//! L-function evaluation: `ζ`, a general-degree approximate functional
//! equation, the first-moment integral and the GL(3) Voronoi transform.

pub mod afe;
pub mod gamma;
pub mod moment;
pub mod psi;
pub mod voronoi;
pub mod zeta;

use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{rankin_selberg_coeffs, sym2_coeffs, ArithError, CoefficientTable};
use crate::quad::QuadError;

pub use afe::{afe_value, afe_value_with, l_value, AfeSettings, AfeValue, DyadicBlock};
pub use gamma::{gamma, ln_gamma};
pub use moment::{i1_type_integral, moment_i, moment_with_bound, MomentReport};
pub use psi::{
    asymptotic_basis, calibrate_gammas, psi_pm_asymptotic, psi_pm_mellin, remainder_fit, AsymptoticValue, BumpWeight,
    Calibration, GL3ArchParams, LogNormalWeight, MellinPsi, MellinSettings, MellinWeight, RemainderFit, VoronoiKernel,
};
pub use voronoi::{voronoi_check, VoronoiReport};
pub use zeta::{zeta, zeta_critical};

#[derive(Debug, thiserror::Error)]
pub enum LfuncError {
    #[error("evaluation at a pole")]
    Pole,
    #[error("accuracy unreachable: {0}")]
    AccuracyUnreachable(String),
    #[error("coefficient table too short: need n <= {needed}, have n <= {available}")]
    TableTooShort { needed: u64, available: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("contour quadrature did not converge: {0}")]
    Contour(String),
    #[error("calibration ill-conditioned: {0}")]
    Calibration(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Gamma factor `π^{−ds/2} Π Γ((s − κ_j)/2)`, conductor, root number and
/// Dirichlet coefficients (slot 0 unused) of an L-function.
#[derive(Clone, Debug)]
pub struct LFunctionSpec {
    pub name: String,
    pub kappa: Vec<Complex64>,
    pub conductor: u64,
    pub root_number: Complex64,
    pub coeffs: Arc<Vec<Complex64>>,
    /// Poles of the completed function: `(location, residue)`.
    pub poles: Vec<(Complex64, Complex64)>,
}

impl LFunctionSpec {
    pub fn new(
        name: &str,
        kappa: Vec<Complex64>,
        conductor: u64,
        root_number: Complex64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self, LfuncError> {
        let spec = LFunctionSpec {
            name: name.to_string(),
            kappa,
            conductor,
            root_number,
            coeffs: Arc::new(coeffs),
            poles: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn degree(&self) -> usize {
        self.kappa.len()
    }

    /// Largest `n` with a stored coefficient.
    pub fn n_max(&self) -> u64 {
        self.coeffs.len().saturating_sub(1) as u64
    }

    pub fn validate(&self) -> Result<(), LfuncError> {
        if self.kappa.is_empty() {
            return Err(LfuncError::InvalidArgument("degree must be positive".into()));
        }
        if self.kappa.iter().any(|k| k.re >= 0.5) {
            return Err(LfuncError::InvalidArgument("gamma shifts need real part < 1/2".into()));
        }
        if self.conductor == 0 {
            return Err(LfuncError::InvalidArgument("conductor must be positive".into()));
        }
        if (self.root_number.norm() - 1.0).abs() > 1e-12 {
            return Err(LfuncError::InvalidArgument("root number must have modulus 1".into()));
        }
        if self.coeffs.len() < 2 {
            return Err(LfuncError::InvalidArgument("empty coefficient table".into()));
        }
        Ok(())
    }

    /// `ln γ(s)`.
    pub fn ln_gamma_factor(&self, s: Complex64) -> Complex64 {
        let d = self.degree() as f64;
        let mut acc = -s * (d / 2.0) * std::f64::consts::PI.ln();
        for k in &self.kappa {
            acc += ln_gamma((s - k) / 2.0);
        }
        acc
    }

    /// The contragredient: conjugated shifts, coefficients and root number.
    pub fn dual(&self) -> LFunctionSpec {
        LFunctionSpec {
            name: format!("{}~", self.name),
            kappa: self.kappa.iter().map(|k| k.conj()).collect(),
            conductor: self.conductor,
            root_number: self.root_number.conj(),
            coeffs: Arc::new(self.coeffs.iter().map(|c| c.conj()).collect()),
            poles: self.poles.iter().map(|(p, r)| (p.conj(), r.conj())).collect(),
        }
    }

    /// Average-bound check `Σ_{n≤x} |λ(n)| ≤ C x^{1.01}`; returns the smallest such `C`.
    pub fn partial_sum_constant(&self) -> f64 {
        let mut acc = 0.0;
        let mut worst: f64 = 0.0;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            acc += c.norm();
            worst = worst.max(acc / (n as f64).powf(1.01));
        }
        worst
    }

    /// `ζ(s)` with coefficients up to `n_max`.
    pub fn zeta(n_max: usize) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0); n_max + 1];
        coeffs[0] = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        LFunctionSpec {
            name: "zeta".into(),
            kappa: vec![Complex64::new(0.0, 0.0)],
            conductor: 1,
            root_number: one,
            coeffs: Arc::new(coeffs),
            poles: vec![(one, one), (Complex64::new(0.0, 0.0), -one)],
        }
    }

    /// Symmetric square of the discriminant form: shifts `−1, −11, −12`, level 1.
    pub fn sym2_delta(table: &CoefficientTable) -> Self {
        let coeffs = real_coeffs(sym2_coeffs(table));
        LFunctionSpec {
            name: "sym2".into(),
            kappa: [-1.0, -11.0, -12.0].iter().map(|k| Complex64::new(*k, 0.0)).collect(),
            conductor: 1,
            root_number: Complex64::new(1.0, 0.0),
            coeffs: Arc::new(coeffs),
            poles: Vec::new(),
        }
    }

    /// Rankin–Selberg square `ζ(s) L(s, Sym²)` of the discriminant form.
    ///
    /// Its completed function has simple poles at 1 and 0 with residues
    /// `±Λ(1, Sym²)`, which needs `L(1, Sym²)`.
    pub fn rankin_selberg_delta(table: &CoefficientTable) -> Result<Self, LfuncError> {
        let sym2 = Self::sym2_delta(table);
        let one = Complex64::new(1.0, 0.0);
        let l1 = l_value(&sym2, one, &AfeSettings::default())?.value;
        let lambda1 = sym2.ln_gamma_factor(one).exp() * l1;
        let coeffs = real_coeffs(rankin_selberg_coeffs(table));
        Ok(LFunctionSpec {
            name: "rankin-selberg".into(),
            kappa: [0.0, -1.0, -11.0, -12.0].iter().map(|k| Complex64::new(*k, 0.0)).collect(),
            conductor: 1,
            root_number: one,
            coeffs: Arc::new(coeffs),
            poles: vec![(one, lambda1), (Complex64::new(0.0, 0.0), -lambda1)],
        })
    }
}

fn real_coeffs(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|x| Complex64::new(*x, 0.0)).collect()
}
