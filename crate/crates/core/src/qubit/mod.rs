//! Two-level systems: the (λ, c) coordinates of Gibbs-preserving covariant
//! channels, their composition law, membership tests and explicit families.
//!
//! The system is H_S = diag(0, gap) with the ground state first and
//! q = e^{-β·gap} ∈ (0, 1]. A covariant Gibbs-preserving channel maps
//! |e₂⟩⟨e₂| ↦ λ|e₁⟩⟨e₁| + (1-λ)|e₂⟩⟨e₂| and |e₁⟩⟨e₂| ↦ c|e₁⟩⟨e₂|.

mod cone;
mod dephasing;
mod families;

pub use cone::{bloch_action, thermal_cone, ConeGrid, ThermalCone};
pub use dephasing::{
    dephasing_annulus_radius, dephasing_from_phases, dephasing_spec, full_dephasing_nd, PhaseDephasing, PhaseDephasingReport,
};
pub use families::{
    extreme_approx_finite, extreme_approx_infinite, finite_extreme_limit, interior_family, FamilyRealization,
    Rational, DEFAULT_DIMENSION_CAP,
};

use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::error::{invalid, mismatch, Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Default tolerance for the boundary test in `membership`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// A point (λ, c) of the two-parameter composition semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupElement {
    pub lambda: f64,
    pub c: C64,
}

impl SemigroupElement {
    pub const IDENTITY: Self = Self { lambda: 0.0, c: C64::new(1.0, 0.0) };

    pub fn new(lambda: f64, c: C64) -> Result<Self> {
        if !lambda.is_finite() || !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::NonFinite("semigroup element"));
        }
        Ok(Self { lambda, c })
    }

    /// max(|Δλ|, |Δc|).
    pub fn distance(&self, other: &Self) -> f64 {
        (self.lambda - other.lambda).abs().max((self.c - other.c).norm())
    }
}

/// Polar coordinates (λ, r, φ) of a qubit channel at Boltzmann ratio q.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct QubitParams {
    lambda: f64,
    r: f64,
    phi: f64,
    q: f64,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    lambda: f64,
    r: f64,
    phi: f64,
    q: f64,
}

impl TryFrom<ParamsRepr> for QubitParams {
    type Error = Error;
    fn try_from(p: ParamsRepr) -> Result<Self> {
        Self::new(p.lambda, p.r, p.phi, p.q)
    }
}

impl From<QubitParams> for ParamsRepr {
    fn from(p: QubitParams) -> Self {
        Self { lambda: p.lambda, r: p.r, phi: p.phi, q: p.q }
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(invalid(format!("q must lie in (0, 1], got {q}")));
    }
    Ok(())
}

/// Maps any finite angle into [-π, π).
fn wrap_angle(phi: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = (phi + std::f64::consts::PI).rem_euclid(tau) - std::f64::consts::PI;
    if w >= std::f64::consts::PI {
        -std::f64::consts::PI
    } else {
        w
    }
}

impl QubitParams {
    /// Range checks only; feasibility (r within the bound) is not required.
    pub fn new(lambda: f64, r: f64, phi: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(invalid(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(invalid(format!("r must be finite and >= 0, got {r}")));
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite("phase"));
        }
        check_q(q)?;
        Ok(Self { lambda, r, phi: wrap_angle(phi), q })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn element(&self) -> SemigroupElement {
        SemigroupElement { lambda: self.lambda, c: C64::from_polar(self.r, self.phi) }
    }

    pub fn from_element(e: SemigroupElement, q: f64) -> Result<Self> {
        let (r, phi) = e.c.to_polar();
        Self::new(e.lambda, r, phi, q)
    }

    /// Largest admissible |c| at this λ.
    pub fn bound(&self) -> f64 {
        coherence_bound(self.lambda, self.q)
    }
}

/// √((1-λ)(1-λq)).
pub fn coherence_bound(lambda: f64, q: f64) -> f64 {
    ((1.0 - lambda) * (1.0 - lambda * q)).max(0.0).sqrt()
}

/// Reads (λ, c) = (⟨e₁|S(|e₂⟩⟨e₂|)|e₁⟩, ⟨e₁|S(|e₁⟩⟨e₂|)|e₂⟩).
pub fn psi(s: &QuantumChannel) -> Result<SemigroupElement> {
    if s.dim() != 2 {
        return Err(mismatch(format!("coordinates need a qubit channel, got dimension {}", s.dim())));
    }
    let choi = s.choi();
    Ok(SemigroupElement { lambda: choi[(2, 2)].re, c: choi[(0, 3)] })
}

/// The channel with coordinates (λ, re^{iφ}); rejects r above the bound by more than tol.
pub fn psi_inv(p: &QubitParams, tol: f64) -> Result<QuantumChannel> {
    let bound = p.bound();
    if p.r > bound + tol {
        return Err(Error::Infeasible(format!(
            "r = {} exceeds √((1-λ)(1-λq)) = {bound} at λ = {}, q = {}",
            p.r, p.lambda, p.q
        )));
    }
    let (l, q) = (p.lambda, p.q);
    let c = C64::from_polar(p.r, p.phi);
    let mut choi = ComplexMatrix::zeros(4, 4);
    choi[(0, 0)] = C64::new(1.0 - l * q, 0.0);
    choi[(1, 1)] = C64::new(l * q, 0.0);
    choi[(2, 2)] = C64::new(l, 0.0);
    choi[(3, 3)] = C64::new(1.0 - l, 0.0);
    choi[(0, 3)] = c;
    choi[(3, 0)] = c.conj();
    QuantumChannel::from_choi(2, choi)
}

/// Coordinates of the composition: (λ₁ + λ₂ - λ₁λ₂(1+q), c₁c₂).
pub fn circ(e1: SemigroupElement, e2: SemigroupElement, q: f64) -> SemigroupElement {
    SemigroupElement {
        lambda: e1.lambda + e2.lambda - e1.lambda * e2.lambda * (1.0 + q),
        c: e1.c * e2.c,
    }
}

/// Inverse under `circ`; none when λ(1+q) = 1 within tol or c = 0.
pub fn inverse_element(e: SemigroupElement, q: f64, tol: f64) -> Option<SemigroupElement> {
    let denom = e.lambda * (1.0 + q) - 1.0;
    if denom.abs() <= tol || e.c.norm() <= tol {
        return None;
    }
    Some(SemigroupElement { lambda: e.lambda / denom, c: e.c.inv() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// Strictly inside the feasible set; reachable.
    #[serde(rename = "interior")]
    InteriorTO,
    /// λ = 0: a pure dephasing, reachable.
    #[serde(rename = "dephasing")]
    DephasingTO,
    /// On the coherence bound with λ > 0: feasible, only approximately reachable.
    #[serde(rename = "boundary_not_reachable")]
    EnTOBoundaryNotTO,
    #[serde(rename = "outside")]
    OutsideEnTO,
}

pub fn membership(p: &QubitParams, tol: f64) -> Membership {
    let bound = p.bound();
    if p.r > bound + tol {
        Membership::OutsideEnTO
    } else if p.lambda <= tol {
        Membership::DephasingTO
    } else if (p.r - bound).abs() <= tol {
        Membership::EnTOBoundaryNotTO
    } else {
        Membership::InteriorTO
    }
}
