//! Diagonal Hamiltonians, temperatures and spectral bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::ComplexMatrix;

/// Distinct energy levels in ascending order, each with a multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LevelsRepr", into = "LevelsRepr")]
pub struct DiagonalHamiltonian {
    levels: Vec<f64>,
    mult: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LevelsRepr {
    levels: Vec<f64>,
    mult: Vec<usize>,
}

impl TryFrom<LevelsRepr> for DiagonalHamiltonian {
    type Error = Error;
    fn try_from(r: LevelsRepr) -> Result<Self> {
        Self::new(r.levels, r.mult)
    }
}

impl From<DiagonalHamiltonian> for LevelsRepr {
    fn from(h: DiagonalHamiltonian) -> Self {
        Self { levels: h.levels, mult: h.mult }
    }
}

impl DiagonalHamiltonian {
    pub fn new(levels: Vec<f64>, mult: Vec<usize>) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid("a Hamiltonian needs at least one level"));
        }
        if levels.len() != mult.len() {
            return Err(invalid("levels and multiplicities differ in length"));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("energy levels"));
        }
        if mult.contains(&0) {
            return Err(invalid("multiplicities must be positive"));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("levels must be strictly increasing"));
        }
        Ok(Self { levels, mult })
    }

    /// Groups energies closer than `tol`; a group takes its smallest value.
    pub fn from_energies(energies: &[f64], tol: f64) -> Result<Self> {
        Ok(Self::sorted_from_energies(energies, tol)?.0)
    }

    /// Like `from_energies`, also returning the stable sort order: expanded
    /// index k of the result is index `perm[k]` of the input.
    pub fn sorted_from_energies(energies: &[f64], tol: f64) -> Result<(Self, Vec<usize>)> {
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("energy levels"));
        }
        let mut perm: Vec<usize> = (0..energies.len()).collect();
        perm.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        let mut levels: Vec<f64> = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        for &i in &perm {
            let e = energies[i];
            match levels.last() {
                Some(&last) if e - last <= tol => *mult.last_mut().unwrap() += 1,
                _ => {
                    levels.push(e);
                    mult.push(1);
                }
            }
        }
        Ok((Self::new(levels, mult)?, perm))
    }

    /// n-fold degenerate level at zero energy.
    pub fn trivial(n: usize) -> Result<Self> {
        Self::new(vec![0.0], vec![n])
    }

    /// Equidistant levels 0, gap, ..., (n-1)·gap.
    pub fn ladder(n: usize, gap: f64) -> Result<Self> {
        Self::new((0..n).map(|j| j as f64 * gap).collect(), vec![1; n])
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn dim(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn ground(&self) -> f64 {
        self.levels[0]
    }

    /// Diagonal expanded with multiplicities.
    pub fn energies(&self) -> Vec<f64> {
        self.levels
            .iter()
            .zip(&self.mult)
            .flat_map(|(&e, &k)| std::iter::repeat_n(e, k))
            .collect()
    }

    /// Level index of each expanded basis vector.
    pub fn level_index(&self) -> Vec<usize> {
        self.mult.iter().enumerate().flat_map(|(l, &k)| std::iter::repeat_n(l, k)).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::real_diag(&self.energies())
    }

    /// Operator norm: the largest |E|.
    pub fn norm(&self) -> f64 {
        self.levels.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn shifted(&self, mu: f64) -> Self {
        Self { levels: self.levels.iter().map(|e| e + mu).collect(), mult: self.mult.clone() }
    }

    /// Requires `s > 0` so the level order is kept.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(invalid("scale factor must be positive"));
        }
        Ok(Self { levels: self.levels.iter().map(|e| e * s).collect(), mult: self.mult.clone() })
    }

    /// Same levels and multiplicities within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.mult == other.mult && self.levels.iter().zip(&other.levels).all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Levels of H₁ ⊗ 1 + 1 ⊗ H₂, sorted. `perm[k]` is the tensor index a·dim₂ + b
    /// of the k-th sorted basis vector.
    pub fn tensor_sum(&self, other: &Self, tol: f64) -> Result<(Self, Vec<usize>)> {
        let (e1, e2) = (self.energies(), other.energies());
        let diag = crate::linalg::tensor_sum_diagonal(&e1, &e2);
        Self::sorted_from_energies(&diag, tol)
    }
}

/// β ∈ [0, ∞); β = 0 is infinite temperature.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub const INFINITE_TEMPERATURE: Self = Self(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(invalid(format!("inverse temperature must be finite and >= 0, got {beta}")));
        }
        Ok(Self(beta))
    }

    /// β with e^{-β·gap} = q; q = 1 is infinite temperature.
    pub fn from_q(q: f64, gap: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(invalid(format!("q must lie in (0, 1], got {q}")));
        }
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(invalid("energy gap must be positive"));
        }
        Self::new(-q.ln() / gap)
    }

    pub fn beta(self) -> f64 {
        self.0
    }

    pub fn is_infinite_temperature(self) -> bool {
        self.0 == 0.0
    }

    /// Boltzmann ratio e^{-β·gap}.
    pub fn q(self, gap: f64) -> f64 {
        (-self.0 * gap).exp()
    }
}

impl TryFrom<f64> for InverseTemperature {
    type Error = Error;
    fn try_from(b: f64) -> Result<Self> {
        Self::new(b)
    }
}

impl From<InverseTemperature> for f64 {
    fn from(b: InverseTemperature) -> f64 {
        b.0
    }
}

/// Unnormalized weights e^{-β(E - E_ground)} per level (not expanded).
pub fn level_weights(h: &DiagonalHamiltonian, beta: InverseTemperature) -> Vec<f64> {
    let g = h.ground();
    h.levels().iter().map(|&e| (-beta.beta() * (e - g)).exp()).collect()
}

/// Gibbs probabilities of every basis vector.
pub fn gibbs_weights(h: &DiagonalHamiltonian, beta: InverseTemperature) -> Vec<f64> {
    let w = level_weights(h, beta);
    let z: f64 = w.iter().zip(h.multiplicities()).map(|(x, &k)| x * k as f64).sum();
    h.level_index().iter().map(|&l| w[l] / z).collect()
}

pub fn gibbs_state(h: &DiagonalHamiltonian, beta: InverseTemperature) -> ComplexMatrix {
    ComplexMatrix::real_diag(&gibbs_weights(h, beta))
}

/// One group of (nearly) equal values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub count: usize,
}

/// Groups sorted values whose distance to the group's first member is at most tol.
/// The representative is the member of smallest magnitude.
fn cluster(mut values: Vec<f64>, tol: f64) -> Vec<Cluster> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<Cluster> = Vec::new();
    let mut start = f64::NAN;
    for v in values {
        match out.last_mut() {
            Some(c) if v - start <= tol => {
                c.count += 1;
                if v.abs() < c.value.abs() {
                    c.value = v;
                }
            }
            _ => {
                start = v;
                out.push(Cluster { value: v, count: 1 });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrSpectrum {
    /// Signed differences E_i - E_j over all ordered basis pairs.
    pub differences: Vec<Cluster>,
    /// Distinct |E_i - E_j|, ascending.
    pub distinct: Vec<f64>,
    pub degenerate: bool,
}

pub fn bohr_spectrum(h: &DiagonalHamiltonian, tol: f64) -> BohrSpectrum {
    let e = h.energies();
    let n = e.len();
    let signed: Vec<f64> = e.iter().flat_map(|a| e.iter().map(move |b| a - b)).collect();
    let abs: Vec<f64> = signed.iter().map(|d| d.abs()).collect();
    let differences = cluster(signed, tol);
    let distinct = cluster(abs, tol).into_iter().map(|c| c.value).collect();
    let degenerate = differences.len() < n * n - n + 1;
    BohrSpectrum { differences, distinct, degenerate }
}

/// Bath levels joined when their gap is a system transition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceGraph {
    pub levels: Vec<f64>,
    /// Pairs (i, j), i < j, of level indices.
    pub edges: Vec<(usize, usize)>,
    /// Each component lists level indices ascending; components ordered by first index.
    pub components: Vec<Vec<usize>>,
}

impl ResonanceGraph {
    pub fn is_resonant(&self) -> bool {
        self.components.len() == 1
    }
}

pub fn resonance_graph(h_b: &DiagonalHamiltonian, h_s: &DiagonalHamiltonian, tol: f64) -> ResonanceGraph {
    let transitions = bohr_spectrum(h_s, tol).distinct;
    let levels = h_b.levels().to_vec();
    let k = levels.len();
    let mut edges = Vec::new();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..k {
        for j in i + 1..k {
            let gap = levels[j] - levels[i];
            if transitions.iter().any(|t| (gap - t).abs() <= tol) {
                edges.push((i, j));
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; k];
    for v in 0..k {
        let r = root(&mut parent, v);
        match slot[r] {
            Some(c) => components[c].push(v),
            None => {
                slot[r] = Some(components.len());
                components.push(vec![v]);
            }
        }
    }
    ResonanceGraph { levels, edges, components }
}

/// Whether a thermal operation may mix ρ_ij with ρ_kl (0-based basis indices of H_S):
/// the transitions must agree and lie in the bath's Bohr spectrum.
pub fn mixing_allowed(
    h_s: &DiagonalHamiltonian,
    h_b: &DiagonalHamiltonian,
    ij: (usize, usize),
    kl: (usize, usize),
    tol: f64,
) -> Result<bool> {
    let e = h_s.energies();
    let n = e.len();
    if [ij.0, ij.1, kl.0, kl.1].iter().any(|&x| x >= n) {
        return Err(invalid(format!("index out of range for system dimension {n}")));
    }
    let d1 = e[ij.0] - e[kl.0];
    let d2 = e[ij.1] - e[kl.1];
    if (d1 - d2).abs() > tol {
        return Ok(false);
    }
    Ok(bohr_spectrum(h_b, tol).differences.iter().any(|c| (c.value - d1).abs() <= tol))
}

fn real_gcd(a: f64, b: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (a.max(b), a.min(b));
    while b > tol {
        let r = (a - (a / b).round() * b).abs();
        a = b;
        b = r;
    }
    a
}

/// Largest r with every level gap an integer multiple of r (within tol).
/// Multiples are capped at 1/√tol: beyond that any real spectrum would pass.
pub fn rational_bohr_constant(h: &DiagonalHamiltonian, tol: f64) -> Option<f64> {
    let e0 = h.ground();
    let gaps: Vec<f64> = h.levels()[1..].iter().map(|e| e - e0).collect();
    let mut r = *gaps.first()?;
    for &g in &gaps[1..] {
        r = real_gcd(r, g, tol);
    }
    if r <= tol {
        return None;
    }
    let max_multiple = (1.0 / tol.sqrt()).floor();
    let ok = gaps.iter().all(|&g| {
        let k = (g / r).round();
        k <= max_multiple && (g - k * r).abs() <= tol
    });
    ok.then_some(r)
}

/// σ(H) ⊆ {E₁ + j·gap : j ∈ ℕ} within tol.
pub fn is_spin_form(h: &DiagonalHamiltonian, gap: f64, tol: f64) -> bool {
    let e0 = h.ground();
    gap > 0.0
        && h.levels().iter().all(|&e| {
            let d = e - e0;
            (d - (d / gap).round() * gap).abs() <= tol
        })
}
