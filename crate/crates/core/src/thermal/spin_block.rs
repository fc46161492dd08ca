//! Qubit thermal operations with an equidistant bath, given block by block.
//!
//! With H_S = diag(0, gap) and bath levels j·gap of multiplicity α_j
//! (j = 0..m-1), an energy-conserving unitary splits into blocks U_0 (energy 0,
//! size α_0), U_j for 0 < j < m (energy j·gap, size α_j + α_{j-1}) and U_m
//! (energy m·gap, size α_{m-1}). U_j = [[A_j, B_j], [C_j, D_j]] where the first
//! α_j coordinates are |e₁⟩ ⊗ level j and the rest |e₂⟩ ⊗ level j-1.

use serde::{Deserialize, Serialize};

use super::spec::ThermalOpSpec;
use crate::error::{invalid, mismatch, Error, Result};
use crate::hamiltonian::{DiagonalHamiltonian, InverseTemperature};
use crate::linalg::{ComplexMatrix, C64};

/// Unitarity tolerance for the blocks.
const BLOCK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlocksRepr", into = "BlocksRepr")]
pub struct SpinBlockSpec {
    gap: f64,
    alphas: Vec<usize>,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct BlocksRepr {
    gap: f64,
    alphas: Vec<usize>,
    blocks: Vec<ComplexMatrix>,
}

impl TryFrom<BlocksRepr> for SpinBlockSpec {
    type Error = Error;
    fn try_from(r: BlocksRepr) -> Result<Self> {
        Self::new(r.gap, r.alphas, r.blocks)
    }
}

impl From<SpinBlockSpec> for BlocksRepr {
    fn from(s: SpinBlockSpec) -> Self {
        Self { gap: s.gap, alphas: s.alphas, blocks: s.blocks }
    }
}

/// The closed-form coordinates of a spin-block operation and the assembled spec.
#[derive(Clone, Debug)]
pub struct SpinBlockChoi {
    pub lambda: f64,
    pub c: C64,
    pub spec: ThermalOpSpec,
}

impl SpinBlockSpec {
    /// `blocks` holds U_0, U_1, ..., U_m with m = alphas.len().
    pub fn new(gap: f64, alphas: Vec<usize>, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(invalid("energy gap must be positive"));
        }
        let m = alphas.len();
        if m == 0 || alphas.contains(&0) {
            return Err(invalid("multiplicities must be a non-empty list of positive counts"));
        }
        if blocks.len() != m + 1 {
            return Err(mismatch(format!("{m} bath levels need {} blocks, got {}", m + 1, blocks.len())));
        }
        for (j, b) in blocks.iter().enumerate() {
            let want = Self::block_size(&alphas, j);
            if b.rows() != want || b.cols() != want {
                return Err(mismatch(format!("block {j} is {}x{}, expected {want}x{want}", b.rows(), b.cols())));
            }
            if !b.is_finite() {
                return Err(Error::NonFinite("block unitary"));
            }
            let residual = b.unitary_residual();
            if residual > BLOCK_TOL {
                return Err(Error::NotUnitary { residual });
            }
        }
        Ok(Self { gap, alphas, blocks })
    }

    fn block_size(alphas: &[usize], j: usize) -> usize {
        let m = alphas.len();
        match j {
            0 => alphas[0],
            _ if j == m => alphas[m - 1],
            _ => alphas[j] + alphas[j - 1],
        }
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Number of bath levels.
    pub fn levels(&self) -> usize {
        self.alphas.len()
    }

    /// (A_j, B_j, C_j, D_j) for 0 < j < m.
    pub fn parts(&self, j: usize) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix) {
        assert!(j >= 1 && j < self.levels(), "block {j} has no 2x2 partition");
        let (a, d) = (self.alphas[j], self.alphas[j - 1]);
        let u = &self.blocks[j];
        (u.block(0, 0, a, a), u.block(0, a, a, d), u.block(a, 0, d, a), u.block(a, a, d, d))
    }

    pub fn system(&self) -> DiagonalHamiltonian {
        DiagonalHamiltonian::new(vec![0.0, self.gap], vec![1, 1]).expect("gap is positive")
    }

    pub fn bath(&self) -> DiagonalHamiltonian {
        let levels = (0..self.levels()).map(|j| j as f64 * self.gap).collect();
        DiagonalHamiltonian::new(levels, self.alphas.clone()).expect("levels increase")
    }

    /// Places the blocks into the full unitary on system ⊗ bath.
    pub fn assemble(&self) -> ComplexMatrix {
        let m = self.levels();
        let total: usize = self.alphas.iter().sum();
        let offsets: Vec<usize> = self
            .alphas
            .iter()
            .scan(0, |acc, &a| {
                let o = *acc;
                *acc += a;
                Some(o)
            })
            .collect();
        let offsets = &offsets;
        let ground = |j: usize| (0..self.alphas[j]).map(move |k| offsets[j] + k);
        let excited = |j: usize| (0..self.alphas[j]).map(move |k| total + offsets[j] + k);
        let mut u = ComplexMatrix::zeros(2 * total, 2 * total);
        for (j, block) in self.blocks.iter().enumerate() {
            let idx: Vec<usize> = match j {
                0 => ground(0).collect(),
                _ if j == m => excited(m - 1).collect(),
                _ => ground(j).chain(excited(j - 1)).collect(),
            };
            for (r, &x) in idx.iter().enumerate() {
                for (c, &y) in idx.iter().enumerate() {
                    u[(x, y)] = block[(r, c)];
                }
            }
        }
        u
    }
}

/// Ψ-coordinates of the spin-block operation from the blocks alone, plus the
/// assembled spec. β = 0 gives every bath level weight 1.
pub fn spin_block_choi(spec: &SpinBlockSpec, beta: InverseTemperature) -> SpinBlockChoi {
    let m = spec.levels();
    let w: Vec<f64> = (0..m).map(|j| (-beta.beta() * j as f64 * spec.gap).exp()).collect();
    let z: f64 = w.iter().zip(&spec.alphas).map(|(w, &a)| w * a as f64).sum();
    let ground_part = |j: usize| if j == 0 { spec.blocks[0].clone() } else { spec.parts(j).0 };
    let excited_part = |j: usize| if j + 1 == m { spec.blocks[m].clone() } else { spec.parts(j + 1).3 };
    let mut lambda = 0.0;
    for j in 0..m.saturating_sub(1) {
        let b = spec.parts(j + 1).1;
        lambda += b.frobenius_norm().powi(2) * w[j];
    }
    let mut c = C64::new(0.0, 0.0);
    for j in 0..m {
        let (x, y) = (ground_part(j), excited_part(j));
        let overlap: C64 = x.data().iter().zip(y.data()).map(|(a, b)| a * b.conj()).sum();
        c += overlap * w[j];
    }
    // Unitary blocks placed on equal-energy subspaces: no need to re-check the full matrix.
    let assembled = ThermalOpSpec::from_parts_unchecked(spec.system(), spec.bath(), spec.assemble(), beta);
    SpinBlockChoi { lambda: lambda / z, c: c / z, spec: assembled }
}
