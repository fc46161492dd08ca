//! Quantum channels stored as Choi matrices.
//!
//! The Choi matrix of S is Σ_ij |e_i⟩⟨e_j| ⊗ S(|e_i⟩⟨e_j|), so entry
//! ((i,k),(j,l)) at row i·n+k, column j·n+l is ⟨e_k|S(|e_i⟩⟨e_j|)|e_l⟩.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, mismatch, Error, Result};
use crate::hamiltonian::{gibbs_state, DiagonalHamiltonian, InverseTemperature};
use crate::linalg::{herm_eig, partial_trace, trace_norm, BipartiteShape, ComplexMatrix, Side, C64, ONE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct QuantumChannel {
    dim: usize,
    choi: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    dim: usize,
    choi: ComplexMatrix,
}

impl TryFrom<ChannelRepr> for QuantumChannel {
    type Error = Error;
    fn try_from(r: ChannelRepr) -> Result<Self> {
        Self::from_choi(r.dim, r.choi)
    }
}

impl From<QuantumChannel> for ChannelRepr {
    fn from(c: QuantumChannel) -> Self {
        Self { dim: c.dim, choi: c.choi }
    }
}

/// CP/TP residuals of a Choi matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CptpReport {
    pub tol: f64,
    pub hermitian_residual: f64,
    pub min_eigenvalue: f64,
    /// Frobenius norm of tr_out(Choi) - I.
    pub tp_residual: f64,
    pub cp: bool,
    pub tp: bool,
}

impl CptpReport {
    pub fn pass(&self) -> bool {
        self.cp && self.tp
    }
}

/// Gibbs fixed-point and covariance residuals in trace norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StationarityReport {
    pub fix_residual: f64,
    pub cov_residual: f64,
}

impl QuantumChannel {
    pub fn from_choi(dim: usize, choi: ComplexMatrix) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("channel dimension must be >= 1"));
        }
        if choi.rows() != dim * dim || choi.cols() != dim * dim {
            return Err(mismatch(format!(
                "Choi matrix of a {dim}-dimensional channel must be {0}x{0}, got {1}x{2}",
                dim * dim,
                choi.rows(),
                choi.cols()
            )));
        }
        if !choi.is_finite() {
            return Err(Error::NonFinite("Choi matrix"));
        }
        Ok(Self { dim, choi })
    }

    pub fn identity(n: usize) -> Self {
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                choi[(i * n + i, j * n + j)] = ONE;
            }
        }
        Self { dim: n, choi }
    }

    /// Zeroes every off-diagonal entry.
    pub fn full_dephasing(n: usize) -> Self {
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            choi[(i * n + i, i * n + i)] = ONE;
        }
        Self { dim: n, choi }
    }

    /// Builds the Choi matrix from the action on matrix units.
    pub fn from_action(n: usize, mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let out = f(&ComplexMatrix::unit(n, i, j));
                if out.rows() != n || out.cols() != n {
                    return Err(mismatch("channel action changed the dimension"));
                }
                choi.set_block(i * n, j * n, &out);
            }
        }
        Self::from_choi(n, choi)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// S(|e_i⟩⟨e_j|).
    pub fn image_of_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        let n = self.dim;
        self.choi.block(i * n, j * n, n, n)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim;
        if rho.rows() != n || rho.cols() != n {
            return Err(mismatch(format!("channel on dimension {n} applied to {}x{}", rho.rows(), rho.cols())));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let a = rho[(i, j)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        out[(k, l)] += a * self.choi[(i * n + k, j * n + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of S acting on row-major vectorized operators.
    pub fn superoperator(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n * n, n * n, |r, c| {
            let (k, l, i, j) = (r / n, r % n, c / n, c % n);
            self.choi[(i * n + k, j * n + l)]
        })
    }

    pub fn from_superoperator(n: usize, l: &ComplexMatrix) -> Result<Self> {
        if l.rows() != n * n || l.cols() != n * n {
            return Err(mismatch("superoperator shape"));
        }
        let choi = ComplexMatrix::from_fn(n * n, n * n, |r, c| {
            let (i, k, j, lc) = (r / n, r % n, c / n, c % n);
            l[(k * n + lc, i * n + j)]
        });
        Self::from_choi(n, choi)
    }

    pub fn validate(&self, tol: f64) -> CptpReport {
        let n = self.dim;
        let hermitian_residual = self.choi.hermitian_residual();
        let min_eigenvalue = herm_eig(&self.choi.hermitian_part())
            .map(|e| e.values[0])
            .unwrap_or(f64::NEG_INFINITY);
        let shape = BipartiteShape { dim_a: n, dim_b: n };
        let reduced = partial_trace(&self.choi, shape, Side::B).expect("Choi shape checked at construction");
        let tp_residual = (&reduced - &ComplexMatrix::identity(n)).frobenius_norm();
        CptpReport {
            tol,
            hermitian_residual,
            min_eigenvalue,
            tp_residual,
            cp: hermitian_residual <= tol && min_eigenvalue >= -tol,
            tp: tp_residual <= tol,
        }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(mismatch(format!("channel dimensions {} and {}", self.dim, other.dim)));
        }
        Ok(())
    }
}

/// S1 ∘ S2 (S2 acts first).
pub fn compose(s1: &QuantumChannel, s2: &QuantumChannel) -> Result<QuantumChannel> {
    s1.same_dim(s2)?;
    let l = &s1.superoperator() * &s2.superoperator();
    QuantumChannel::from_superoperator(s1.dim, &l)
}

/// Weights must be non-negative and sum to 1 within 1e-12.
pub fn convex_combine(channels: &[QuantumChannel], weights: &[f64]) -> Result<QuantumChannel> {
    let first = channels.first().ok_or_else(|| invalid("no channels to combine"))?;
    if channels.len() != weights.len() {
        return Err(invalid("one weight per channel required"));
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(invalid("weights must be non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("weights sum to {total}, not 1")));
    }
    let mut choi = ComplexMatrix::zeros(first.choi.rows(), first.choi.cols());
    for (c, &w) in channels.iter().zip(weights) {
        first.same_dim(c)?;
        choi = &choi + &c.choi.scale_real(w);
    }
    QuantumChannel::from_choi(first.dim, choi)
}

pub fn stationarity_covariance(
    s: &QuantumChannel,
    h: &DiagonalHamiltonian,
    beta: InverseTemperature,
) -> Result<StationarityReport> {
    let n = s.dim;
    if h.dim() != n {
        return Err(mismatch(format!("Hamiltonian dimension {} vs channel {n}", h.dim())));
    }
    let g = gibbs_state(h, beta);
    let fix_residual = trace_norm(&(&s.apply(&g)? - &g));
    let e = h.energies();
    let hm = h.to_matrix();
    let mut cov_residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            // [H, E_ij] = (E_i - E_j) E_ij
            let lhs = s.image_of_unit(i, j).scale_real(e[i] - e[j]);
            let sx = s.image_of_unit(i, j);
            let rhs = crate::linalg::commutator(&hm, &sx);
            cov_residual = cov_residual.max(trace_norm(&(&lhs - &rhs)));
        }
    }
    Ok(StationarityReport { fix_residual, cov_residual })
}

/// ‖C₁ - C₂‖₁ / n, a computable surrogate for the induced trace norm distance.
pub fn choi_distance(s1: &QuantumChannel, s2: &QuantumChannel) -> Result<f64> {
    s1.same_dim(s2)?;
    Ok(trace_norm(&(&s1.choi - &s2.choi)) / s1.dim as f64)
}

/// max over probes X (‖X‖₁ = 1) of ‖S₁(X) - S₂(X)‖₁; a lower bound on ‖S₁ - S₂‖_{1→1}.
pub fn induced_norm_lower_bound(
    s1: &QuantumChannel,
    s2: &QuantumChannel,
    probes: &[ComplexMatrix],
) -> Result<f64> {
    s1.same_dim(s2)?;
    let mut best: f64 = 0.0;
    for x in probes {
        let norm = trace_norm(x);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("probe has trace norm {norm}, expected 1")));
        }
        best = best.max(trace_norm(&(&s1.apply(x)? - &s2.apply(x)?)));
    }
    Ok(best)
}
