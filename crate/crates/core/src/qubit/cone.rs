//! Bloch-vector images of a qubit state under all feasible channels.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_q, coherence_bound, QubitParams};
use crate::error::{invalid, Error, Result};
use crate::linalg::C64;

/// Grid sizes for λ ∈ [0, 1], r/B(λ) ∈ [0, 1] and φ ∈ [-π, π).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeGrid {
    pub lambda: usize,
    pub radius: usize,
    pub phase: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThermalCone {
    pub q: f64,
    pub input: [f64; 3],
    pub gibbs: [f64; 3],
    /// Every grid image, then the Gibbs point and the input.
    pub points: Vec<[f64; 3]>,
    /// Images with r = B(λ), φ = 0, ordered by λ.
    pub boundary: Vec<[f64; 3]>,
}

/// Action on a Bloch vector: x' - iy' = c(x - iy), z' = z + λ(1-q) - λz(1+q).
pub fn bloch_action(p: &QubitParams, v: [f64; 3]) -> [f64; 3] {
    let c = C64::from_polar(p.r(), p.phi());
    let t = c * C64::new(v[0], -v[1]);
    let (l, q) = (p.lambda(), p.q());
    [t.re, -t.im, v[2] + l * (1.0 - q) - l * v[2] * (1.0 + q)]
}

fn linspace(n: usize, k: usize) -> f64 {
    if n == 1 {
        0.0
    } else {
        k as f64 / (n - 1) as f64
    }
}

pub fn thermal_cone(bloch: [f64; 3], q: f64, grid: ConeGrid) -> Result<ThermalCone> {
    check_q(q)?;
    if bloch.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("Bloch vector"));
    }
    let norm = bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(invalid(format!("Bloch vector has length {norm} > 1")));
    }
    if grid.lambda < 2 || grid.radius < 1 || grid.phase < 1 {
        return Err(invalid("grid needs at least 2 λ values, 1 radius and 1 phase"));
    }
    let per_lambda = grid.radius * grid.phase;
    let mut points: Vec<[f64; 3]> = (0..grid.lambda * per_lambda)
        .into_par_iter()
        .map(|idx| {
            let l = linspace(grid.lambda, idx / per_lambda);
            let rest = idx % per_lambda;
            let s = if grid.radius == 1 { 1.0 } else { linspace(grid.radius, rest / grid.phase) };
            let phi = -std::f64::consts::PI + std::f64::consts::TAU * (rest % grid.phase) as f64 / grid.phase as f64;
            let p = QubitParams::new(l, s * coherence_bound(l, q), phi, q).expect("grid point in range");
            bloch_action(&p, bloch)
        })
        .collect();
    let gibbs = [0.0, 0.0, (1.0 - q) / (1.0 + q)];
    points.push(gibbs);
    points.push(bloch);
    let boundary = (0..grid.lambda)
        .map(|k| {
            let l = linspace(grid.lambda, k);
            let p = QubitParams::new(l, coherence_bound(l, q), 0.0, q).expect("grid point in range");
            bloch_action(&p, bloch)
        })
        .collect();
    Ok(ThermalCone { q, input: bloch, gibbs, points, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::psi_inv;
    use crate::linalg::ComplexMatrix;
    use proptest::prelude::*;

    const GRID: ConeGrid = ConeGrid { lambda: 12, radius: 5, phase: 8 };

    fn scaled_input(c: f64) -> [f64; 3] {
        [0.5 * c, 0.4 * c, 0.59f64.sqrt() * c]
    }

    fn density(v: [f64; 3]) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![C64::new((1.0 + v[2]) / 2.0, 0.0), C64::new(v[0] / 2.0, -v[1] / 2.0)],
            vec![C64::new(v[0] / 2.0, v[1] / 2.0), C64::new((1.0 - v[2]) / 2.0, 0.0)],
        ])
    }

    #[test]
    fn bloch_action_matches_channel() {
        let p = QubitParams::new(0.4, 0.5, 0.9, 0.3).unwrap();
        let v = [0.3, -0.2, 0.5];
        let out = psi_inv(&p, 1e-12).unwrap().apply(&density(v)).unwrap();
        assert!(out.approx_eq(&density(bloch_action(&p, v)), 1e-15));
    }

    #[test]
    fn gibbs_input_collapses() {
        let q = 0.45;
        let g = [0.0, 0.0, (1.0 - q) / (1.0 + q)];
        let cone = thermal_cone(g, q, GRID).unwrap();
        assert!(cone.points.iter().all(|p| (0..3).all(|i| (p[i] - g[i]).abs() < 1e-15)));
    }

    #[test]
    fn cone_contains_gibbs_and_input() {
        let q = 0.45;
        let cone = thermal_cone(scaled_input(0.9), q, GRID).unwrap();
        assert!((cone.gibbs[2] - 0.37931).abs() < 1e-5);
        assert!(cone.points.contains(&cone.gibbs) && cone.points.contains(&cone.input));
        // λ = 0 on the boundary curve is the input itself.
        assert_eq!(cone.boundary[0], cone.input);
        let z = cone.input[2];
        let end = cone.boundary.last().unwrap();
        assert!((end[2] - ((1.0 - q) + z * (1.0 - (1.0 + q)))).abs() < 1e-15);
        assert!(thermal_cone([1.0, 1.0, 0.0], q, GRID).is_err());
    }

    #[test]
    fn deterministic() {
        let a = thermal_cone(scaled_input(-0.5), 0.45, GRID).unwrap();
        let b = thermal_cone(scaled_input(-0.5), 0.45, GRID).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn images_stay_in_ball(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, q in 0.01..=1.0f64) {
            let n = (x * x + y * y + z * z).sqrt().max(1.0);
            let cone = thermal_cone([x / n, y / n, z / n], q, ConeGrid { lambda: 6, radius: 3, phase: 4 }).unwrap();
            for p in &cone.points {
                prop_assert!((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() <= 1.0 + 1e-9);
            }
        }
    }
}
