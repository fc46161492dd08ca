use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::error::{mismatch, Error, Result};
use crate::hamiltonian::{gibbs_weights, DiagonalHamiltonian, InverseTemperature};
use crate::linalg::{kron, spectral_norm, ComplexMatrix, C64};

/// Rejection threshold for ‖U H_tot U* - H_tot‖_∞ and ‖U U* - 1‖_F.
pub const ENERGY_TOL: f64 = 1e-8;

/// A system Hamiltonian, a bath at inverse temperature β, and an
/// energy-conserving unitary on system ⊗ bath (index a·m + b).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct ThermalOpSpec {
    h_s: DiagonalHamiltonian,
    h_b: DiagonalHamiltonian,
    beta: InverseTemperature,
    unitary: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    #[serde(rename = "H_S")]
    h_s: DiagonalHamiltonian,
    #[serde(rename = "H_B")]
    h_b: DiagonalHamiltonian,
    beta: InverseTemperature,
    #[serde(rename = "U")]
    unitary: ComplexMatrix,
}

impl TryFrom<SpecRepr> for ThermalOpSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        Self::new(r.h_s, r.h_b, r.unitary, r.beta)
    }
}

impl From<ThermalOpSpec> for SpecRepr {
    fn from(s: ThermalOpSpec) -> Self {
        Self { h_s: s.h_s, h_b: s.h_b, beta: s.beta, unitary: s.unitary }
    }
}

impl ThermalOpSpec {
    pub fn new(
        h_s: DiagonalHamiltonian,
        h_b: DiagonalHamiltonian,
        unitary: ComplexMatrix,
        beta: InverseTemperature,
    ) -> Result<Self> {
        Self::with_tolerance(h_s, h_b, unitary, beta, ENERGY_TOL)
    }

    pub fn with_tolerance(
        h_s: DiagonalHamiltonian,
        h_b: DiagonalHamiltonian,
        unitary: ComplexMatrix,
        beta: InverseTemperature,
        tol: f64,
    ) -> Result<Self> {
        let dim = h_s.dim() * h_b.dim();
        if unitary.rows() != dim || unitary.cols() != dim {
            return Err(mismatch(format!(
                "unitary is {}x{} but system ⊗ bath has dimension {dim}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        if !unitary.is_finite() {
            return Err(Error::NonFinite("unitary"));
        }
        let residual = unitary.unitary_residual();
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
        let spec = Self { h_s, h_b, beta, unitary };
        let residual = spec.conservation_residual(tol);
        if residual > tol {
            return Err(Error::EnergyConservation { residual, tol });
        }
        Ok(spec)
    }

    /// The identity operation with a given bath.
    pub fn identity(h_s: DiagonalHamiltonian, h_b: DiagonalHamiltonian, beta: InverseTemperature) -> Self {
        let dim = h_s.dim() * h_b.dim();
        Self { h_s, h_b, beta, unitary: ComplexMatrix::identity(dim) }
    }

    pub fn system(&self) -> &DiagonalHamiltonian {
        &self.h_s
    }

    pub fn bath(&self) -> &DiagonalHamiltonian {
        &self.h_b
    }

    pub fn beta(&self) -> InverseTemperature {
        self.beta
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// Diagonal of H_S ⊗ 1 + 1 ⊗ H_B.
    pub fn total_energies(&self) -> Vec<f64> {
        crate::linalg::tensor_sum_diagonal(&self.h_s.energies(), &self.h_b.energies())
    }

    /// ‖U H U* - H‖_∞ for diagonal H, via ‖[U, H]‖_∞ (equal for unitary U).
    /// The Frobenius norm bounds it from above and decides clear passes cheaply.
    fn conservation_residual(&self, tol: f64) -> f64 {
        let h = self.total_energies();
        let c = ComplexMatrix::from_fn(h.len(), h.len(), |x, y| self.unitary[(x, y)] * (h[y] - h[x]));
        let fro = c.frobenius_norm();
        if fro <= tol {
            fro
        } else {
            spectral_norm(&c)
        }
    }

    /// Exact ‖U H_tot U* - H_tot‖_∞.
    pub fn energy_residual(&self) -> f64 {
        let h = self.total_energies();
        let c = ComplexMatrix::from_fn(h.len(), h.len(), |x, y| self.unitary[(x, y)] * (h[y] - h[x]));
        spectral_norm(&c)
    }

    pub(crate) fn from_parts_unchecked(
        h_s: DiagonalHamiltonian,
        h_b: DiagonalHamiltonian,
        unitary: ComplexMatrix,
        beta: InverseTemperature,
    ) -> Self {
        Self { h_s, h_b, beta, unitary }
    }
}

/// tr_B(U (ρ ⊗ diag(bath_weights)) U*) as a channel on dimension n.
pub fn dilate(unitary: &ComplexMatrix, bath_weights: &[f64], n: usize) -> Result<QuantumChannel> {
    let m = bath_weights.len();
    if unitary.rows() != n * m || unitary.cols() != n * m {
        return Err(mismatch("unitary does not match system and bath dimensions"));
    }
    let mut choi = ComplexMatrix::zeros(n * n, n * n);
    let col = |c: usize| -> Vec<C64> { (0..n * m).map(|r| unitary[(r, c)]).collect() };
    for (b, &w) in bath_weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let cols: Vec<Vec<C64>> = (0..n).map(|i| col(i * m + b)).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: C64 = (0..m)
                            .map(|e| cols[i][k * m + e] * cols[j][l * m + e].conj())
                            .sum();
                        choi[(i * n + k, j * n + l)] += s * w;
                    }
                }
            }
        }
    }
    QuantumChannel::from_choi(n, choi)
}

/// The channel ρ ↦ tr_B(U (ρ ⊗ g_B) U*) with g_B the bath Gibbs state.
pub fn realize(spec: &ThermalOpSpec) -> QuantumChannel {
    let w = gibbs_weights(&spec.h_b, spec.beta);
    dilate(&spec.unitary, &w, spec.h_s.dim()).expect("spec dimensions are consistent")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyResidual {
    pub exact_residual: f64,
    /// 2ε‖U - 1‖_∞(‖H_S‖_∞ + ‖H_B‖_∞)
    pub bound: f64,
    pub epsilon_pass: bool,
}

/// Slack added to the ε-bound for rounding.
const RESIDUAL_SLACK: f64 = 1e-9;

/// ε-relaxed energy conservation for general Hermitian H_S and H_B.
pub fn energy_residual(
    unitary: &ComplexMatrix,
    h_s: &ComplexMatrix,
    h_b: &ComplexMatrix,
    epsilon: f64,
) -> Result<EnergyResidual> {
    let (n, m) = (h_s.require_square()?, h_b.require_square()?);
    if unitary.rows() != n * m || unitary.cols() != n * m {
        return Err(mismatch("unitary does not match system and bath dimensions"));
    }
    if !(epsilon >= 0.0) {
        return Err(crate::error::invalid("epsilon must be >= 0"));
    }
    let h = &kron(h_s, &ComplexMatrix::identity(m)) + &kron(&ComplexMatrix::identity(n), h_b);
    let conj = &(unitary * &h) * &unitary.adjoint();
    let exact_residual = spectral_norm(&(&conj - &h));
    let dev = spectral_norm(&(unitary - &ComplexMatrix::identity(n * m)));
    let bound = 2.0 * epsilon * dev * (spectral_norm(h_s) + spectral_norm(h_b));
    let epsilon_pass = epsilon >= 1.0 || exact_residual <= bound + RESIDUAL_SLACK;
    Ok(EnergyResidual { exact_residual, bound, epsilon_pass })
}
