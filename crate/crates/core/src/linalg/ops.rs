use super::matrix::{ComplexMatrix, ONE};
use crate::error::{invalid, mismatch, Result};

/// Factor dimensions of a bipartite space A ⊗ B; index (a, b) is a·dim_b + b.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteShape {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteShape {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(invalid("bipartite factors must have dimension >= 1"));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Traces out the factor named by `side`.
pub fn partial_trace(m: &ComplexMatrix, shape: BipartiteShape, side: Side) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    if n != shape.total() {
        return Err(mismatch(format!(
            "partial trace of {n}x{n} over {}x{} factors",
            shape.dim_a, shape.dim_b
        )));
    }
    let (da, db) = (shape.dim_a, shape.dim_b);
    Ok(match side {
        Side::B => ComplexMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()
        }),
        Side::A => ComplexMatrix::from_fn(db, db, |b, b2| {
            (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()
        }),
    })
}

/// F(e_a ⊗ e_b) = e_b ⊗ e_a for e_a ∈ C^{m1}, e_b ∈ C^{m2}; maps C^{m1}⊗C^{m2} to C^{m2}⊗C^{m1}.
pub fn flip_operator(m1: usize, m2: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(m1 * m2, m1 * m2);
    for a in 0..m1 {
        for b in 0..m2 {
            f[(b * m1 + a, a * m2 + b)] = ONE;
        }
    }
    f
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// Permutation matrix P with P e_j = e_{perm[j]}.
pub fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    let mut p = ComplexMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        p[(i, j)] = ONE;
    }
    p
}

/// Conjugates a bipartite operator by 1 ⊗ P where bath index `k` of the result is old index `perm[k]`.
pub fn permute_second_factor(m: &ComplexMatrix, dim_a: usize, perm: &[usize]) -> ComplexMatrix {
    let db = perm.len();
    debug_assert_eq!(m.rows(), dim_a * db);
    let idx = |t: usize| (t / db) * db + perm[t % db];
    ComplexMatrix::from_fn(dim_a * db, dim_a * db, |i, j| m[(idx(i), idx(j))])
}

/// Sum of the diagonal of a real diagonal operator given as energies: H_S ⊗ 1 + 1 ⊗ H_B.
pub fn tensor_sum_diagonal(system: &[f64], bath: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(system.len() * bath.len());
    for &s in system {
        for &b in bath {
            out.push(s + b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::C64;
    use crate::linalg::testutil::{random_density, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
        let z = ComplexMatrix::real_diag(&[0.0, 1.0]);
        let i2 = ComplexMatrix::identity(2);
        let h = &kron(&z, &i2) + &kron(&i2, &z);
        assert_eq!(h, ComplexMatrix::real_diag(&[0.0, 1.0, 1.0, 2.0]));
        let p = kron(&ComplexMatrix::unit(2, 0, 0), &ComplexMatrix::unit(2, 1, 1));
        assert_eq!(p, ComplexMatrix::unit(4, 1, 1));
    }

    #[test]
    fn partial_trace_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_density(&mut rng, 2);
        let sigma = random_density(&mut rng, 3);
        let s = BipartiteShape::new(2, 3).unwrap();
        let r = partial_trace(&kron(&rho, &sigma), s, Side::B).unwrap();
        assert!(r.approx_eq(&rho, 1e-14));
        let r = partial_trace(&kron(&rho, &sigma), s, Side::A).unwrap();
        assert!(r.approx_eq(&sigma, 1e-14));
        let two = BipartiteShape::new(2, 2).unwrap();
        let t = partial_trace(&ComplexMatrix::identity(4), two, Side::B).unwrap();
        assert_eq!(t, ComplexMatrix::identity(2).scale_real(2.0));
        assert!(partial_trace(&ComplexMatrix::identity(5), two, Side::B).is_err());
        assert!(BipartiteShape::new(0, 2).is_err());
    }

    /// tr_B((C⊗B) M (D⊗B⁻¹)) = C tr_B(M) D, against an explicit index contraction.
    #[test]
    fn partial_trace_sandwich_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = random_matrix(&mut rng, 2, 2);
        let d = random_matrix(&mut rng, 2, 2);
        let m = random_matrix(&mut rng, 4, 4);
        let b = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.5), C64::new(0.3, 0.0)],
            vec![C64::new(-0.1, 0.2), C64::new(1.0, -1.0)],
        ]);
        let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
        let binv = ComplexMatrix::from_rows(&[
            vec![b[(1, 1)] / det, -b[(0, 1)] / det],
            vec![-b[(1, 0)] / det, b[(0, 0)] / det],
        ]);
        let lhs_full = &(&kron(&c, &b) * &m) * &kron(&d, &binv);
        let shape = BipartiteShape::new(2, 2).unwrap();
        let lhs = partial_trace(&lhs_full, shape, Side::B).unwrap();
        // Oracle: brute-force contraction of tr_B(M).
        let mut trm = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for a2 in 0..2 {
                for x in 0..2 {
                    trm[(a, a2)] += m[(a * 2 + x, a2 * 2 + x)];
                }
            }
        }
        let rhs = &(&c * &trm) * &d;
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn flip_examples() {
        let f = flip_operator(2, 2);
        // e1 ⊗ e2 is basis index 1; e2 ⊗ e1 is index 2.
        assert_eq!(f[(2, 1)], ONE);
        assert_eq!(flip_operator(1, 3), ComplexMatrix::identity(3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 3, 3);
        let f = flip_operator(2, 3);
        let lhs = &(&f.adjoint() * &kron(&b, &a)) * &f;
        assert!(lhs.approx_eq(&kron(&a, &b), 1e-14));
    }

    #[test]
    fn permute_second_factor_matches_matrix_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 6, 6);
        let perm = [2, 0, 1];
        let p = permutation_matrix(&perm);
        let full = kron(&ComplexMatrix::identity(2), &p);
        let expected = &(&full.adjoint() * &m) * &full;
        assert!(permute_second_factor(&m, 2, &perm).approx_eq(&expected, 1e-14));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn partial_trace_preserves_trace(seed in proptest::prelude::any::<u64>(), a in 1usize..4, b in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, a * b, a * b);
            let shape = BipartiteShape::new(a, b).unwrap();
            for side in [Side::A, Side::B] {
                let t = partial_trace(&m, shape, side).unwrap().trace();
                proptest::prop_assert!((t - m.trace()).norm() < 1e-12);
            }
        }

        /// Moving the second bath factor next to the system and tracing the first
        /// bath factor leaves tr_{B1}(X) ⊗ Y.
        #[test]
        fn flip_moves_factor_past_partial_trace(seed in proptest::prelude::any::<u64>(), n in 1usize..4, m1 in 1usize..4, m2 in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_matrix(&mut rng, n * m1, n * m1);
            let y = random_matrix(&mut rng, m2, m2);
            let w = kron(&ComplexMatrix::identity(n), &flip_operator(m1, m2));
            let moved = &(&w * &kron(&x, &y)) * &w.adjoint();
            let lhs = partial_trace(&moved, BipartiteShape::new(n * m2, m1).unwrap(), Side::B).unwrap();
            let trx = partial_trace(&x, BipartiteShape::new(n, m1).unwrap(), Side::B).unwrap();
            proptest::prop_assert!(lhs.approx_eq(&kron(&trx, &y), 1e-12));
        }
    }
}
