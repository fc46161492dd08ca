//! Numeric probes: discontinuity lower bounds, Gibbs-state separation,
//! set-distance surrogates, thermo-majorization and convergence studies.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::channel::{choi_distance, induced_norm_lower_bound, QuantumChannel};
use crate::error::{invalid, mismatch, Result};
use crate::hamiltonian::{level_weights, DiagonalHamiltonian, InverseTemperature};
use crate::linalg::{tensor_sum_diagonal, trace_norm, unitary_from_generator, ComplexMatrix, C64, ONE, ZERO};
use crate::qubit::{extreme_approx_finite, extreme_approx_infinite, psi_inv, QubitParams, Rational};
use crate::thermal::{realize, spin_embed, ThermalOpSpec};

/// A labeled table of real values, exportable as CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| (x + 0.0).to_string())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: Map<String, Value>,
    pub values: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub pass: bool,
    /// The threshold the verdict was checked against.
    pub criterion: String,
}

impl ExperimentReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            parameters: Map::new(),
            values: Map::new(),
            table: None,
            pass: false,
            criterion: String::new(),
        }
    }

    fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.parameters.insert(key.into(), json!(v));
        self
    }

    fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values.insert(key.into(), json!(v));
        self
    }

    fn verdict(mut self, pass: bool, criterion: &str) -> Self {
        self.pass = pass;
        self.criterion = criterion.to_string();
        self
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.values.get(key).and_then(Value::as_f64)
    }
}

fn check_q(q: f64) -> Result<InverseTemperature> {
    InverseTemperature::from_q(q, 1.0)
}

/// Two-qubit unitary coupling a qubit with no energy splitting to a trivial bath.
pub fn qubit_discontinuity_unitary() -> ComplexMatrix {
    let rows = [[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, -1.0], [1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, 1.0]];
    ComplexMatrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// The trivially-coupled qubit operation; it maps |e₁⟩⟨e₁| to a state with coherence.
pub fn qubit_discontinuity_spec(q: f64) -> Result<ThermalOpSpec> {
    let beta = check_q(q)?;
    ThermalOpSpec::new(DiagonalHamiltonian::trivial(2)?, DiagonalHamiltonian::trivial(2)?, qubit_discontinuity_unitary(), beta)
}

/// Any operation for a split qubit (ratio q) sends |e₁⟩⟨e₁| to diag(1-λq, λq); the
/// distance from ½[[1,1],[1,1]] is √(4λ'²+1) with λ' = λq - ½, at least 1.
pub fn discontinuity_qubit(q: f64) -> Result<ExperimentReport> {
    let spec = qubit_discontinuity_spec(q)?;
    let s = realize(&spec);
    let image = s.apply(&ComplexMatrix::unit(2, 0, 0))?;
    let target = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
    let image_deviation = (&image - &target).max_abs();
    let distance = |lp: f64| (4.0 * lp * lp + 1.0).sqrt();
    let relaxed_minimizer = 0.0;
    let bound = trace_norm(&ComplexMatrix::from_real_rows(&[vec![relaxed_minimizer, 0.5], vec![0.5, -relaxed_minimizer]]));
    // λ ∈ [0, 1] restricts λ' to [-½, q - ½].
    let lp = relaxed_minimizer.clamp(-0.5, q - 0.5);
    let lambda = (lp + 0.5) / q;
    let competitor = psi_inv(&QubitParams::new(lambda, 0.0, 0.0, q)?, 0.0)?;
    let probe = induced_norm_lower_bound(&s, &competitor, &[ComplexMatrix::unit(2, 0, 0)])?;
    let pass = (bound - 1.0).abs() <= 1e-12 && image_deviation <= 1e-15;
    Ok(ExperimentReport::new("discontinuity-qubit")
        .param("q", q)
        .value("bound", bound)
        .value("minimizer", relaxed_minimizer)
        .value("image", [[image[(0, 0)], image[(0, 1)]], [image[(1, 0)], image[(1, 1)]]])
        .value("image_deviation", image_deviation)
        .value("constrained_bound", distance(lp))
        .value("constrained_lambda", lambda)
        .value("probe_lower_bound", probe)
        .verdict(pass, "|bound - 1| <= 1e-12 and image within 1e-15 of [[1,1],[1,1]]/2"))
}

/// 1-indexed (row, column) positions of the ones in the qutrit permutation unitary.
const QUTRIT_PERMUTATION: [(usize, usize); 9] =
    [(1, 1), (2, 4), (3, 5), (4, 2), (5, 7), (6, 8), (7, 3), (8, 6), (9, 9)];

pub fn qutrit_discontinuity_spec(q: f64) -> Result<ThermalOpSpec> {
    let beta = check_q(q)?;
    let mut u = ComplexMatrix::zeros(9, 9);
    for (r, c) in QUTRIT_PERMUTATION {
        u[(r - 1, c - 1)] = ONE;
    }
    let h = DiagonalHamiltonian::ladder(3, 1.0)?;
    ThermalOpSpec::new(h.clone(), h, u, beta)
}

/// H_S = diag(0,1,2) with a copy of itself as bath. The realized map sends
/// |e₂⟩⟨e₃| to x|e₁⟩⟨e₂| with x = (1+q)/(1+q+q²); after lifting the Bohr
/// degeneracy an operation can only scale |e₂⟩⟨e₃|, so the distance is ≥ x.
pub fn discontinuity_qutrit(q: f64) -> Result<ExperimentReport> {
    let spec = qutrit_discontinuity_spec(q)?;
    let s = realize(&spec);
    let image = s.image_of_unit(1, 2);
    let coefficient = image[(0, 1)];
    let expected = (1.0 + q) / (1.0 + q + q * q);
    let mut others = image.clone();
    others[(0, 1)] = ZERO;
    // min over |γ| ≤ 1 of ‖x E₁₂ - γ E₂₃‖₁ = x + |γ|, attained at γ = 0.
    let bound = trace_norm(&image);
    let formula = 1.0 - q * q / (1.0 + q + q * q);
    let pass = (coefficient - C64::new(expected, 0.0)).norm() <= 1e-12
        && others.max_abs() <= 1e-12
        && (bound - formula).abs() <= 1e-12
        && bound >= 2.0 / 3.0 - 1e-12;
    Ok(ExperimentReport::new("discontinuity-qutrit")
        .param("q", q)
        .value("bound", bound)
        .value("bound_formula", formula)
        .value("coefficient", coefficient)
        .value("expected_coefficient", expected)
        .verdict(pass, "image of |e2><e3| is (1+q)/(1+q+q^2)|e1><e2| within 1e-12 and bound >= 2/3"))
}

/// Default cap on the multiplicity of the excited bath level in `cmap_probe`.
pub const CMAP_DEFAULT_CAP: u64 = 1_000_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CmapPoint {
    pub energy: f64,
    /// Multiplicity of the excited level, after capping.
    pub multiplicity: u64,
    pub capped: bool,
    pub distance: f64,
    pub gap: f64,
    pub upper_bound: f64,
}

/// Bath 0 ⊕ E·1_N with N = ⌊e^{E(β+β')/2}⌋ capped at `cap`: trace distance of
/// the two Gibbs states, computed per level without expanding the bath.
pub fn cmap_point(beta: f64, beta_prime: f64, energy: f64, cap: u64) -> Result<CmapPoint> {
    let (b1, b2) = (InverseTemperature::new(beta)?, InverseTemperature::new(beta_prime)?);
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(invalid("probe energies must be positive"));
    }
    if cap == 0 {
        return Err(invalid("multiplicity cap must be positive"));
    }
    let want = (energy * (beta + beta_prime) / 2.0).exp().floor();
    let capped = !(want <= cap as f64);
    let n = if capped { cap } else { (want as u64).max(1) };
    let h = DiagonalHamiltonian::new(vec![0.0, energy], vec![1, n as usize])?;
    let z = |w: &[f64]| w[0] + n as f64 * w[1];
    let (w1, w2) = (level_weights(&h, b1), level_weights(&h, b2));
    let (z1, z2) = (z(&w1), z(&w2));
    let distance = (w1[0] / z1 - w2[0] / z2).abs() + n as f64 * (w1[1] / z1 - w2[1] / z2).abs();
    // The estimate is stated for the colder of the two temperatures first.
    let (hot, cold) = if beta >= beta_prime { (beta_prime, beta) } else { (beta, beta_prime) };
    let x = (energy * (cold - hot) / 2.0).exp();
    let upper_bound = 2.0 * (1.0 / (1.0 + x - (-energy * hot).exp()) + 1.0 / (x + 1.0));
    Ok(CmapPoint { energy, multiplicity: n, capped, distance, gap: 2.0 - distance, upper_bound })
}

/// The gap 2 - ‖g_β - g_β'‖₁ along an energy grid; it should fall toward 0.
pub fn cmap_probe(beta: f64, beta_prime: f64, energies: &[f64], cap: u64) -> Result<ExperimentReport> {
    if !(beta > 0.0 && beta_prime > 0.0) {
        return Err(invalid("both inverse temperatures must be positive"));
    }
    if beta == beta_prime {
        return Err(invalid("the probe needs two different temperatures"));
    }
    if energies.is_empty() {
        return Err(invalid("empty energy grid"));
    }
    let points = energies.iter().map(|&e| cmap_point(beta, beta_prime, e, cap)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["energy", "multiplicity", "distance", "gap", "upper_bound"]);
    for p in &points {
        table.push(vec![p.energy, p.multiplicity as f64, p.distance, p.gap, p.upper_bound]);
    }
    let decreasing = points.windows(2).all(|w| w[1].gap < w[0].gap);
    let positive = points.iter().all(|p| p.gap > 0.0);
    let bounded = points.iter().all(|p| p.gap <= p.upper_bound + 1e-12);
    let mut report = ExperimentReport::new("cmap")
        .param("beta", beta)
        .param("beta_prime", beta_prime)
        .param("energies", energies)
        .param("multiplicity_cap", cap)
        .value("final_gap", points.last().map(|p| p.gap))
        .value("any_capped", points.iter().any(|p| p.capped))
        .value("points", &points)
        .verdict(decreasing && positive && bounded, "gap positive, strictly decreasing, below the upper estimate");
    report.table = Some(table);
    Ok(report)
}

/// Max-min Choi trace distance between two finite channel sets (a surrogate
/// for the induced-norm set distance).
pub fn hausdorff_surrogate(a: &[QuantumChannel], b: &[QuantumChannel]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("channel sets must be non-empty"));
    }
    let directed = |x: &[QuantumChannel], y: &[QuantumChannel]| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for s in x {
            let mut best = f64::INFINITY;
            for t in y {
                best = best.min(choi_distance(s, t)?);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    };
    Ok(directed(a, b)?.max(directed(b, a)?))
}

fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(invalid(format!("{what} must have non-negative entries")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

/// Whether ‖x - (y_i/d_i)d‖₁ ≤ ‖y - (y_i/d_i)d‖₁ for every i (within 1e-12).
pub fn thermo_majorization_check(x: &[f64], y: &[f64], d: &[f64]) -> Result<bool> {
    if x.len() != y.len() || x.len() != d.len() || x.is_empty() {
        return Err(mismatch("x, y and d must have equal non-zero length"));
    }
    check_distribution(x, "x")?;
    check_distribution(y, "y")?;
    if d.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(invalid("Gibbs weights must be positive"));
    }
    let dist = |p: &[f64], s: f64| p.iter().zip(d).map(|(a, w)| (a - s * w).abs()).sum::<f64>();
    Ok((0..d.len()).all(|i| {
        let s = y[i] / d[i];
        dist(x, s) <= dist(y, s) + 1e-12
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConvergenceKind {
    /// Finite-temperature boundary family against its large-bath formula.
    FiniteExtreme { lambda: f64, mu: Rational, q: f64, cap: u128 },
    /// Infinite-temperature family against its limit.
    InfiniteExtreme { lambda: f64, phi: f64 },
    /// Gap filling on a ladder bath: the schedule is the number of bath copies.
    SpinEmbed { system: DiagonalHamiltonian, bath: DiagonalHamiltonian, gap: f64, beta: InverseTemperature, coupling: f64 },
}

/// Generator coupling every pair of equal-energy basis states with strength `coupling`.
pub fn uniform_conserving_generator(h_s: &DiagonalHamiltonian, h_b: &DiagonalHamiltonian, coupling: f64) -> ComplexMatrix {
    let e = tensor_sum_diagonal(&h_s.energies(), &h_b.energies());
    ComplexMatrix::from_fn(e.len(), e.len(), |x, y| {
        if x != y && (e[x] - e[y]).abs() <= 1e-9 {
            C64::new(coupling, 0.0)
        } else {
            ZERO
        }
    })
}

/// Tabulates the distance to the target along `schedule` and checks that it
/// does not increase.
pub fn convergence_study(kind: &ConvergenceKind, schedule: &[usize]) -> Result<ExperimentReport> {
    if schedule.is_empty() {
        return Err(invalid("empty schedule"));
    }
    let mut table = Table::new(&["step", "error", "scaled_error"]);
    let report = match kind {
        ConvergenceKind::FiniteExtreme { lambda, mu, q, cap } => {
            for &m in schedule {
                let r = extreme_approx_finite(*lambda, *mu, m, *q, *cap)?;
                let err = r.realized.distance(&r.limit);
                table.push(vec![m as f64, err, err]);
            }
            ExperimentReport::new("converge-finite-extreme")
                .param("lambda", lambda)
                .param("mu", mu.to_string())
                .param("q", q)
                .param("dimension_cap", *cap as f64)
        }
        ConvergenceKind::InfiniteExtreme { lambda, phi } => {
            for &m in schedule {
                let r = extreme_approx_infinite(*lambda, *phi, m)?;
                let err = r.realized.distance(&r.limit);
                table.push(vec![m as f64, err, err * m as f64]);
            }
            ExperimentReport::new("converge-infinite-extreme").param("lambda", lambda).param("phi", phi)
        }
        ConvergenceKind::SpinEmbed { system, bath, gap, beta, coupling } => {
            let gen = uniform_conserving_generator(system, bath, *coupling);
            let original = realize(&ThermalOpSpec::new(system.clone(), bath.clone(), unitary_from_generator(&gen)?, *beta)?);
            for &alpha in schedule {
                let emb = realize(&spin_embed(system, bath, &gen, *gap, alpha, *beta)?);
                let err = choi_distance(&emb, &original)?;
                table.push(vec![alpha as f64, err, err * alpha as f64]);
            }
            ExperimentReport::new("converge-spin-embed")
                .param("system", system)
                .param("bath", bath)
                .param("gap", gap)
                .param("beta", beta)
                .param("coupling", coupling)
        }
    };
    let errors = table.column("error").expect("error column");
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let mut report = report
        .param("schedule", schedule)
        .value("errors", &errors)
        .verdict(monotone, "error non-increasing along the schedule");
    report.table = Some(table);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_bound_is_one() {
        for q in [0.1, 0.5, 1.0] {
            let r = discontinuity_qubit(q).unwrap();
            assert!(r.pass);
            assert_eq!(r.number("bound"), Some(1.0));
            assert_eq!(r.number("minimizer"), Some(0.0));
            let c = r.number("constrained_bound").unwrap();
            assert!(c >= 1.0 && (r.number("probe_lower_bound").unwrap() - c).abs() < 1e-12);
        }
        // Below q = ½ the box constraint binds: √(4(q-½)²+1).
        let r = discontinuity_qubit(0.1).unwrap();
        assert!((r.number("constrained_bound").unwrap() - (4.0f64 * 0.16 + 1.0).sqrt()).abs() < 1e-12);
        assert!(discontinuity_qubit(0.0).is_err());
    }

    #[test]
    fn qutrit_bound() {
        let r = discontinuity_qutrit(0.2).unwrap();
        assert!(r.pass);
        assert!((r.number("bound").unwrap() - (1.0 - 0.04 / 1.24)).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for k in 1..=10 {
            let b = discontinuity_qutrit(k as f64 / 10.0).unwrap().number("bound").unwrap();
            assert!(b < last && b >= 2.0 / 3.0 - 1e-12);
            last = b;
        }
        assert!((last - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cmap_gap_shrinks() {
        let r = cmap_probe(1.0, 0.5, &[2.0, 4.0, 8.0, 16.0], CMAP_DEFAULT_CAP).unwrap();
        assert!(r.pass);
        let same = cmap_point(0.7, 0.7, 5.0, CMAP_DEFAULT_CAP).unwrap();
        assert_eq!(same.distance, 0.0);
        assert!(cmap_probe(1.0, 1.0, &[2.0], CMAP_DEFAULT_CAP).is_err());
        let capped = cmap_point(1.0, 0.5, 32.0, 1_000_000).unwrap();
        assert!(capped.capped && capped.multiplicity == 1_000_000);
    }

    /// Oracle: expanded Gibbs vectors for a small bath.
    #[test]
    fn cmap_distance_matches_expanded_vectors() {
        let (b1, b2, e) = (1.0f64, 0.5f64, 3.0f64);
        let p = cmap_point(b1, b2, e, CMAP_DEFAULT_CAP).unwrap();
        let n = (e * (b1 + b2) / 2.0).exp().floor() as usize;
        let gibbs = |b: f64| {
            let mut w = vec![1.0];
            w.extend(std::iter::repeat_n((-b * e).exp(), n));
            let z: f64 = w.iter().sum();
            w.into_iter().map(|x| x / z).collect::<Vec<_>>()
        };
        let d: f64 = gibbs(b1).iter().zip(gibbs(b2)).map(|(a, b)| (a - b).abs()).sum();
        assert_eq!(p.multiplicity as usize, n);
        assert!((p.distance - d).abs() < 1e-13);
    }

    #[test]
    fn surrogate_examples() {
        let id = QuantumChannel::identity(2);
        let deph = QuantumChannel::full_dephasing(2);
        assert_eq!(hausdorff_surrogate(std::slice::from_ref(&id), std::slice::from_ref(&id)).unwrap(), 0.0);
        assert!((hausdorff_surrogate(std::slice::from_ref(&id), std::slice::from_ref(&deph)).unwrap() - 1.0).abs() < 1e-14);
        let half = crate::channel::convex_combine(&[id.clone(), deph.clone()], &[0.5, 0.5]).unwrap();
        let small = hausdorff_surrogate(std::slice::from_ref(&half), std::slice::from_ref(&deph)).unwrap();
        let larger_b = hausdorff_surrogate(std::slice::from_ref(&half), &[deph, id]).unwrap();
        assert!(larger_b <= small);
        assert!(hausdorff_surrogate(&[], &[half]).is_err());
    }

    #[test]
    fn thermo_majorization_examples() {
        let d = [1.0, 0.5, 0.25];
        let z: f64 = d.iter().sum();
        let g: Vec<f64> = d.iter().map(|w| w / z).collect();
        let x = [0.2, 0.3, 0.5];
        assert!(thermo_majorization_check(&x, &x, &d).unwrap());
        assert!(!thermo_majorization_check(&x, &g, &d).unwrap());
        assert!(thermo_majorization_check(&g, &g, &d).unwrap());
        for x0 in [0.0, 0.3, 1.0] {
            assert!(thermo_majorization_check(&[x0, 1.0 - x0], &[1.0, 0.0], &[1.0, 1.0]).unwrap());
        }
        assert!(thermo_majorization_check(&[0.5, 0.6], &[1.0, 0.0], &[1.0, 1.0]).is_err());
        assert!(thermo_majorization_check(&[0.5, 0.5], &[1.0, 0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn convergence_examples() {
        let r = convergence_study(&ConvergenceKind::InfiniteExtreme { lambda: 0.5, phi: 0.0 }, &[2, 4, 8, 16]).unwrap();
        assert!(r.pass);
        // error·m settles: the error is O(1/m).
        let scaled = r.table.as_ref().unwrap().column("scaled_error").unwrap();
        assert!((scaled[3] - scaled[2]).abs() < 1e-12);
        let fin = ConvergenceKind::FiniteExtreme { lambda: 0.5, mu: Rational::new(2, 1).unwrap(), q: 0.2, cap: 4096 };
        assert!(convergence_study(&fin, &[3, 4, 5, 6]).unwrap().pass);
        let emb = ConvergenceKind::SpinEmbed {
            system: DiagonalHamiltonian::ladder(2, 1.0).unwrap(),
            bath: DiagonalHamiltonian::new(vec![0.0, 1.0, 3.0], vec![1, 1, 1]).unwrap(),
            gap: 1.0,
            beta: InverseTemperature::new(0.7).unwrap(),
            coupling: 0.8,
        };
        let r = convergence_study(&emb, &[1, 2, 4, 8]).unwrap();
        assert!(r.pass);
        let e = r.table.unwrap().column("error").unwrap();
        assert!(e[3] < e[0]);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.0, 0.5]);
        assert_eq!(t.to_csv(), "a,b\n1,0.5\n");
    }
}
