//! Thermal operations that only scale coherences.

use serde::Serialize;

use super::{check_q, psi, SemigroupElement};
use crate::error::{invalid, mismatch, Error, Result};
use crate::hamiltonian::{DiagonalHamiltonian, InverseTemperature};
use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::thermal::{realize, ThermalOpSpec};

#[derive(Clone, Debug)]
pub struct PhaseDephasing {
    pub spec: ThermalOpSpec,
    /// Gibbs average Σ q^j e^{iφ_j} / Σ q^j of the applied phases.
    pub c: C64,
    /// Smallest |c| reachable with m levels at this q; negative means 0 is reachable.
    pub r_m: f64,
    /// Coordinates of the realized channel; its coherence factor is conj(c).
    pub realized: SemigroupElement,
}

/// 2(1-q)/(1-q^m) - 1, with its limit 2/m - 1 at q = 1.
pub fn dephasing_annulus_radius(q: f64, m: usize) -> Result<f64> {
    check_q(q)?;
    if m == 0 {
        return Err(invalid("need at least one bath level"));
    }
    if q == 1.0 {
        return Ok(2.0 / m as f64 - 1.0);
    }
    Ok(2.0 * (1.0 - q) / (1.0 - q.powi(m as i32)) - 1.0)
}

/// Ladder bath j = 0..m-1 and the diagonal unitary 1 ⊕ diag(e^{iφ_j}): the
/// excited system state picks up phase φ_j next to bath level j.
pub fn dephasing_from_phases(phases: &[f64], q: f64) -> Result<PhaseDephasing> {
    check_q(q)?;
    let m = phases.len();
    if m == 0 {
        return Err(invalid("need at least one phase"));
    }
    if phases.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("phases"));
    }
    let h_s = DiagonalHamiltonian::ladder(2, 1.0)?;
    let h_b = DiagonalHamiltonian::ladder(m, 1.0)?;
    let mut diag = vec![ONE; m];
    diag.extend(phases.iter().map(|&p| C64::from_polar(1.0, p)));
    let beta = InverseTemperature::from_q(q, 1.0)?;
    let spec = ThermalOpSpec::new(h_s, h_b, ComplexMatrix::diag(&diag), beta)?;
    let weights: Vec<f64> = (0..m).map(|j| q.powi(j as i32)).collect();
    let z: f64 = weights.iter().sum();
    let c = phases.iter().zip(&weights).map(|(&p, &w)| C64::from_polar(w, p)).sum::<C64>() / z;
    let realized = psi(&realize(&spec))?;
    Ok(PhaseDephasing { spec, c, r_m: dephasing_annulus_radius(q, m)?, realized })
}

/// Two-level degenerate bath and U = 1₂ ⊕ V with tr V = 2γ; the realized
/// channel maps |e₁⟩⟨e₂| ↦ conj(γ)|e₁⟩⟨e₂| for any qubit H_S and β.
pub fn dephasing_spec(gamma: C64, h_s: &DiagonalHamiltonian, beta: InverseTemperature) -> Result<ThermalOpSpec> {
    if h_s.dim() != 2 {
        return Err(mismatch("dephasing construction needs a qubit system"));
    }
    if !(gamma.norm() <= 1.0 + 1e-12) {
        return Err(invalid(format!("|gamma| = {} exceeds 1", gamma.norm())));
    }
    let (rho, psi_angle) = gamma.to_polar();
    let spread = rho.min(1.0).acos();
    let v = [C64::from_polar(1.0, psi_angle + spread), C64::from_polar(1.0, psi_angle - spread)];
    let mut diag = vec![ONE; 2];
    diag.extend(v);
    let h_b = DiagonalHamiltonian::new(vec![1.0], vec![2])?;
    ThermalOpSpec::new(h_s.clone(), h_b, ComplexMatrix::diag(&diag), beta)
}

/// n-fold degenerate bath and U = ⊕_j diag(e^{2πijk/n}); the realized channel
/// removes every coherence between distinct system basis states.
pub fn full_dephasing_nd(h_s: &DiagonalHamiltonian, beta: InverseTemperature) -> Result<ThermalOpSpec> {
    let n = h_s.dim();
    if n < 2 {
        return Err(invalid("full dephasing needs a system of dimension >= 2"));
    }
    let h_b = DiagonalHamiltonian::new(vec![1.0], vec![n])?;
    let diag: Vec<C64> = (0..n * n)
        .map(|x| {
            let (j, k) = (x / n, x % n);
            C64::from_polar(1.0, std::f64::consts::TAU * ((j * k) % n) as f64 / n as f64)
        })
        .collect();
    ThermalOpSpec::new(h_s.clone(), h_b, ComplexMatrix::diag(&diag), beta)
}

/// Serializable view of a phase-dephasing construction.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseDephasingReport {
    pub c: C64,
    pub r_m: f64,
    pub realized: SemigroupElement,
}

impl From<&PhaseDephasing> for PhaseDephasingReport {
    fn from(p: &PhaseDephasing) -> Self {
        Self { c: p.c, r_m: p.r_m, realized: p.realized }
    }
}
