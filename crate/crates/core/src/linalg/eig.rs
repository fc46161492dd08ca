use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Relative Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigendecomposition H = V diag(values) V*, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let d = ComplexMatrix::real_diag(&self.values);
        &(v * &d) * &v.adjoint()
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<usize> {
    let n = h.require_square()?;
    if !h.is_finite() {
        return Err(Error::NonFinite("hermitian input"));
    }
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(n)
}

/// Cyclic complex Jacobi. Ties in the ascending order keep first-occurrence order.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    let n = check_hermitian(h)?;
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if n > 1 && scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
                .map(|(p, q)| a[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q, scale);
                }
            }
        }
    }
    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let values = order.iter().map(|&i| raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEig { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g <= 1e-300 || g <= 1e-18 * scale {
        return;
    }
    let n = a.rows();
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // G = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
    let pc = phase.conj();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * pc * s;
        a[(k, q)] = akp * s + akq * pc * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * pc * s;
        v[(k, q)] = vkp * s + vkq * pc * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// e^{iH} for Hermitian H.
pub fn unitary_from_generator(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    let phases: Vec<C64> = eig.values.iter().map(|&x| C64::from_polar(1.0, x)).collect();
    let v = &eig.vectors;
    Ok(&(v * &ComplexMatrix::diag(&phases)) * &v.adjoint())
}

/// Singular values, descending, by one-sided Jacobi on columns.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // Work on the orientation with fewer columns.
    let work = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (r, c) = (work.rows(), work.cols());
    let mut colv: Vec<Vec<C64>> = (0..c).map(|j| (0..r).map(|i| work[(i, j)]).collect()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..c.saturating_sub(1) {
            for q in p + 1..c {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = colv[p].iter().zip(&colv[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g <= 1e-300 {
                    continue;
                }
                rotated = true;
                let pc = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let (left, right) = colv.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yq = *y * pc;
                    let xp = *x;
                    *x = xp * cs - yq * sn;
                    *y = xp * sn + yq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = colv.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// ‖M‖₁ = sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Largest dimension for which the operator norm is computed by full SVD.
const DENSE_NORM_LIMIT: usize = 192;

/// Operator norm ‖M‖_∞ (largest singular value). Above a few hundred dimensions
/// this switches to power iteration on M*M, which converges from below.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    let fro = m.frobenius_norm();
    if fro == 0.0 {
        return 0.0;
    }
    if m.rows().min(m.cols()) <= DENSE_NORM_LIMIT {
        return singular_values(m).first().copied().unwrap_or(0.0);
    }
    let n = m.cols();
    let adj = m.adjoint();
    let mut x: Vec<C64> = (0..n).map(|i| C64::new(1.0 + (i as f64 * 0.618).fract(), 0.0)).collect();
    let mut est = 0.0;
    for _ in 0..2000 {
        let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x.iter_mut().for_each(|z| *z /= norm);
        let y = matvec(&adj, &matvec(m, &x));
        let next = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().sqrt();
        x = y;
        if (next - est).abs() <= 1e-14 * next {
            est = next;
            break;
        }
        est = next;
    }
    est.min(fro)
}

fn matvec(m: &ComplexMatrix, x: &[C64]) -> Vec<C64> {
    let c = m.cols();
    m.data().chunks(c).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}
