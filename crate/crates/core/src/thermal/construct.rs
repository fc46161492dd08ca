//! Building new thermal operations from old ones.

use serde::Serialize;

use super::spec::ThermalOpSpec;
use crate::channel::{convex_combine, QuantumChannel};
use crate::error::{invalid, mismatch, Error, Result};
use crate::hamiltonian::{
    is_spin_form, level_weights, resonance_graph, DiagonalHamiltonian, InverseTemperature,
};
use crate::linalg::{
    flip_operator, kron, permute_second_factor, unitary_from_generator, ComplexMatrix, ONE,
};

/// Tolerance for merging bath levels of composite baths.
const LEVEL_TOL: f64 = 1e-9;

fn require_compatible(s1: &ThermalOpSpec, s2: &ThermalOpSpec) -> Result<()> {
    if !s1.system().approx_eq(s2.system(), LEVEL_TOL) {
        return Err(invalid("specs act on different system Hamiltonians"));
    }
    let (b1, b2) = (s1.beta().beta(), s2.beta().beta());
    if (b1 - b2).abs() > 1e-12 * b1.abs().max(1.0) {
        return Err(invalid(format!("specs use different temperatures (β = {b1} vs {b2})")));
    }
    Ok(())
}

/// Sorts the last tensor factor's basis by energy and merges equal levels.
fn sorted_spec(
    h_s: &DiagonalHamiltonian,
    bath_energies: &[f64],
    unitary: &ComplexMatrix,
    beta: InverseTemperature,
) -> Result<ThermalOpSpec> {
    let (h_b, perm) = DiagonalHamiltonian::sorted_from_energies(bath_energies, LEVEL_TOL)?;
    let u = permute_second_factor(unitary, h_s.dim(), &perm);
    ThermalOpSpec::new(h_s.clone(), h_b, u, beta)
}

/// A spec realizing realize(s1) ∘ realize(s2): s2 couples to its own bath first.
pub fn compose_specs(s1: &ThermalOpSpec, s2: &ThermalOpSpec) -> Result<ThermalOpSpec> {
    require_compatible(s1, s2)?;
    let n = s1.system().dim();
    let (m1, m2) = (s1.bath().dim(), s2.bath().dim());
    // Acting on S ⊗ B1 ⊗ B2; w moves B2 next to the system.
    let w = kron(&ComplexMatrix::identity(n), &flip_operator(m1, m2));
    let first = kron(s1.unitary(), &ComplexMatrix::identity(m2));
    let second = kron(s2.unitary(), &ComplexMatrix::identity(m1));
    let u = &(&first * &w.adjoint()) * &(&second * &w);
    let energies = crate::linalg::tensor_sum_diagonal(&s1.bath().energies(), &s2.bath().energies());
    sorted_spec(s1.system(), &energies, &u, s1.beta())
}

/// A spec realizing (k/d)·realize(s1) + (1 - k/d)·realize(s2). A zero-energy
/// d-level register selects the branch; it projects on its first k basis vectors.
pub fn convex_combine_specs(s1: &ThermalOpSpec, s2: &ThermalOpSpec, k: usize, d: usize) -> Result<ThermalOpSpec> {
    if k == 0 || k >= d {
        return Err(invalid(format!("need 0 < k < d, got k = {k}, d = {d}")));
    }
    require_compatible(s1, s2)?;
    let n = s1.system().dim();
    let (m1, m2) = (s1.bath().dim(), s2.bath().dim());
    let proj = ComplexMatrix::diag(&(0..d).map(|i| if i < k { ONE } else { crate::linalg::ZERO }).collect::<Vec<_>>());
    let coproj = &ComplexMatrix::identity(d) - &proj;
    let id_d = ComplexMatrix::identity(d);
    let w = kron(&kron(&ComplexMatrix::identity(n), &flip_operator(m1, m2)), &id_d);
    let first = kron(&kron(s1.unitary(), &ComplexMatrix::identity(m2)), &proj);
    let second = kron(&kron(s2.unitary(), &ComplexMatrix::identity(m1)), &coproj);
    let u = &first + &(&(&w.adjoint() * &second) * &w);
    let pair = crate::linalg::tensor_sum_diagonal(&s1.bath().energies(), &s2.bath().energies());
    let energies = crate::linalg::tensor_sum_diagonal(&pair, &vec![0.0; d]);
    sorted_spec(s1.system(), &energies, &u, s1.beta())
}

/// A resonant piece of a thermal operation and its Gibbs weight.
#[derive(Clone, Debug)]
pub struct WeightedSpec {
    pub weight: f64,
    pub spec: ThermalOpSpec,
}

/// Splits the bath along the connected components of its resonance graph. An
/// energy-conserving U cannot couple different components, so each restriction
/// is again unitary; every component is connected, hence resonant.
pub fn decompose_nonresonant(spec: &ThermalOpSpec, tol: f64) -> Result<Vec<WeightedSpec>> {
    let graph = resonance_graph(spec.bath(), spec.system(), tol);
    if graph.is_resonant() {
        return Ok(vec![WeightedSpec { weight: 1.0, spec: spec.clone() }]);
    }
    let h_b = spec.bath();
    let weights = level_weights(h_b, spec.beta());
    let mult = h_b.multiplicities();
    let z: f64 = weights.iter().zip(mult).map(|(w, &k)| w * k as f64).sum();
    let level_of = h_b.level_index();
    let (n, m) = (spec.system().dim(), h_b.dim());
    let mut out = Vec::with_capacity(graph.components.len());
    for comp in &graph.components {
        let levels: Vec<f64> = comp.iter().map(|&l| h_b.levels()[l]).collect();
        let mults: Vec<usize> = comp.iter().map(|&l| mult[l]).collect();
        let bath_idx: Vec<usize> = (0..m).filter(|&b| comp.contains(&level_of[b])).collect();
        let idx: Vec<usize> = (0..n).flat_map(|a| bath_idx.iter().map(move |&b| a * m + b)).collect();
        let u = spec.unitary().select(&idx, &idx);
        let sub_z: f64 = comp.iter().map(|&l| weights[l] * mult[l] as f64).sum();
        let sub = ThermalOpSpec::new(spec.system().clone(), DiagonalHamiltonian::new(levels, mults)?, u, spec.beta())?;
        out.push(WeightedSpec { weight: sub_z / z, spec: sub });
    }
    Ok(out)
}

/// Grid levels E₀ + j·gap between the lowest and highest bath level that are absent.
pub fn missing_levels(h_b: &DiagonalHamiltonian, gap: f64, tol: f64) -> Result<Vec<f64>> {
    if !is_spin_form(h_b, gap, tol) {
        return Err(invalid(format!("bath levels are not on a grid of spacing {gap}")));
    }
    let e0 = h_b.ground();
    let top = ((h_b.levels().last().unwrap() - e0) / gap).round() as usize;
    let present: Vec<usize> = h_b.levels().iter().map(|e| ((e - e0) / gap).round() as usize).collect();
    Ok((0..=top).filter(|j| !present.contains(j)).map(|j| e0 + j as f64 * gap).collect())
}

/// Makes a gapped grid bath gap-free: α copies of the bath plus one copy of each
/// missing grid level, on which the generator acts as zero. The result is
/// (αZ·S + Z_J·id)/(αZ + Z_J), with Z the bath partition sum and Z_J that of the
/// missing levels, so it approaches S as α grows.
pub fn spin_embed(
    h_s: &DiagonalHamiltonian,
    h_b: &DiagonalHamiltonian,
    h_tot: &ComplexMatrix,
    gap: f64,
    alpha: usize,
    beta: InverseTemperature,
) -> Result<ThermalOpSpec> {
    if alpha == 0 {
        return Err(invalid("alpha must be >= 1"));
    }
    let (n, m) = (h_s.dim(), h_b.dim());
    if h_tot.rows() != n * m || h_tot.cols() != n * m {
        return Err(mismatch("generator does not match system and bath dimensions"));
    }
    let hr = h_tot.hermitian_residual();
    if hr > 1e-9 * h_tot.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual: hr });
    }
    let diag = crate::linalg::tensor_sum_diagonal(&h_s.energies(), &h_b.energies());
    let comm = ComplexMatrix::from_fn(n * m, n * m, |x, y| h_tot[(x, y)] * (diag[y] - diag[x]));
    let residual = comm.frobenius_norm();
    if residual > super::spec::ENERGY_TOL {
        return Err(Error::EnergyConservation { residual, tol: super::spec::ENERGY_TOL });
    }
    let missing = missing_levels(h_b, gap, LEVEL_TOL)?;
    let bath_e = h_b.energies();
    let mut energies: Vec<f64> = (0..alpha).flat_map(|_| bath_e.iter().copied()).collect();
    energies.extend(&missing);
    let mp = energies.len();
    let mut gen = ComplexMatrix::zeros(n * mp, n * mp);
    for a in 0..n {
        for a2 in 0..n {
            for c in 0..alpha {
                for b in 0..m {
                    for b2 in 0..m {
                        gen[(a * mp + c * m + b, a2 * mp + c * m + b2)] = h_tot[(a * m + b, a2 * m + b2)];
                    }
                }
            }
        }
    }
    let (h_b_new, perm) = DiagonalHamiltonian::sorted_from_energies(&energies, LEVEL_TOL)?;
    let gen = permute_second_factor(&gen, n, &perm).hermitian_part();
    let u = unitary_from_generator(&gen)?;
    ThermalOpSpec::new(h_s.clone(), h_b_new, u, beta)
}

/// The closed-form channel of `spin_embed` at a given α.
pub fn spin_embed_prediction(
    original: &QuantumChannel,
    h_b: &DiagonalHamiltonian,
    gap: f64,
    alpha: f64,
    beta: InverseTemperature,
) -> Result<QuantumChannel> {
    let missing = missing_levels(h_b, gap, LEVEL_TOL)?;
    let e0 = h_b.ground();
    let boltz = |e: f64| (-beta.beta() * (e - e0)).exp();
    let z: f64 = h_b.energies().iter().map(|&e| boltz(e)).sum();
    let zj: f64 = missing.iter().map(|&e| boltz(e)).sum();
    let total = alpha * z + zj;
    let id = QuantumChannel::identity(original.dim());
    convex_combine(&[original.clone(), id], &[alpha * z / total, 1.0 - alpha * z / total])
}

/// Summary of a decomposition for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionPart {
    pub weight: f64,
    pub bath_levels: Vec<f64>,
    pub bath_multiplicities: Vec<usize>,
}

impl From<&WeightedSpec> for DecompositionPart {
    fn from(w: &WeightedSpec) -> Self {
        Self {
            weight: w.weight,
            bath_levels: w.spec.bath().levels().to_vec(),
            bath_multiplicities: w.spec.bath().multiplicities().to_vec(),
        }
    }
}
