//! Random instances and independent reference computations shared by the
//! integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use thermalops::channel::QuantumChannel;
use thermalops::hamiltonian::{DiagonalHamiltonian, InverseTemperature};
use thermalops::linalg::{ComplexMatrix, C64};
use thermalops::thermal::ThermalOpSpec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn gaussian_pair(rng: &mut impl Rng) -> C64 {
    // Box-Muller; enough for Haar-like sampling after orthonormalization.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    C64::new(r * u2.cos(), r * u2.sin())
}

/// Modified Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian_pair(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| gaussian_pair(rng));
    let p = &a * &a.adjoint();
    let t = p.trace().re;
    p.scale_real(1.0 / t)
}

/// Integer levels drawn from `pool` with multiplicities 1..=max_mult.
pub fn random_hamiltonian(rng: &mut impl Rng, pool: &[i32], count: usize, max_mult: usize) -> DiagonalHamiltonian {
    let mut levels: Vec<i32> = pool.choose_multiple(rng, count.min(pool.len())).copied().collect();
    levels.sort_unstable();
    let mult = levels.iter().map(|_| rng.gen_range(1..=max_mult)).collect();
    DiagonalHamiltonian::new(levels.into_iter().map(f64::from).collect(), mult).unwrap()
}

/// Expanded basis energies, system index major.
pub fn total_energies(h_s: &DiagonalHamiltonian, h_b: &DiagonalHamiltonian) -> Vec<f64> {
    let (es, eb) = (h_s.energies(), h_b.energies());
    es.iter().flat_map(|a| eb.iter().map(move |b| a + b)).collect()
}

/// Independent Haar unitary on every total-energy eigenspace.
pub fn random_conserving_unitary(rng: &mut impl Rng, energies: &[f64]) -> ComplexMatrix {
    let n = energies.len();
    let mut u = ComplexMatrix::zeros(n, n);
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let idx: Vec<usize> = (i..n).filter(|&j| energies[j] == energies[i]).collect();
        idx.iter().for_each(|&j| seen[j] = true);
        let block = random_unitary(rng, idx.len());
        for (a, &x) in idx.iter().enumerate() {
            for (b, &y) in idx.iter().enumerate() {
                u[(x, y)] = block[(a, b)];
            }
        }
    }
    u
}

pub fn random_spec(rng: &mut impl Rng, h_s: &DiagonalHamiltonian, bath_pool: &[i32], beta: InverseTemperature) -> ThermalOpSpec {
    let count = rng.gen_range(1..=3);
    let h_b = random_hamiltonian(rng, bath_pool, count, 2);
    let u = random_conserving_unitary(rng, &total_energies(h_s, &h_b));
    ThermalOpSpec::new(h_s.clone(), h_b, u, beta).unwrap()
}

pub fn random_system(rng: &mut impl Rng) -> DiagonalHamiltonian {
    let count = rng.gen_range(2..=3);
    random_hamiltonian(rng, &[0, 1, 2], count, 1)
}

pub fn qubit_system() -> DiagonalHamiltonian {
    DiagonalHamiltonian::ladder(2, 1.0).unwrap()
}

/// tr_B[U(ρ ⊗ γ_B)U*] evaluated entry by entry.
pub fn reference_realize(spec: &ThermalOpSpec) -> QuantumChannel {
    let (n, m) = (spec.system().dim(), spec.bath().dim());
    let beta = spec.beta().beta();
    let eb = spec.bath().energies();
    let e0 = eb.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = eb.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let u = spec.unitary();
    QuantumChannel::from_action(n, |rho| {
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..m {
                    for k in 0..n {
                        for l in 0..n {
                            for c in 0..m {
                                acc += u[(i * m + b, k * m + c)] * rho[(k, l)] * (w[c] / z) * u[(j * m + b, l * m + c)].conj();
                            }
                        }
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    })
    .unwrap()
}

pub fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}
