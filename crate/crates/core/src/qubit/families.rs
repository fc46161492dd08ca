//! Explicit bath constructions whose channels approach the boundary of the
//! feasible set, built from spin-block unitaries on a ladder bath.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{check_q, coherence_bound, psi, SemigroupElement};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::InverseTemperature;
use crate::linalg::{ComplexMatrix, C64, I, ONE};
use crate::thermal::{realize, spin_block_choi, SpinBlockSpec, ThermalOpSpec};

/// Default limit on the system ⊗ bath dimension of the finite-temperature family.
pub const DEFAULT_DIMENSION_CAP: u128 = 4096;

/// A constructed thermal operation with its coordinates at this bath size
/// and in the large-bath limit.
#[derive(Clone, Debug)]
pub struct FamilyRealization {
    pub spec: ThermalOpSpec,
    /// Read from the realized channel.
    pub realized: SemigroupElement,
    /// Closed form at this bath size.
    pub closed_form: SemigroupElement,
    pub limit: SemigroupElement,
}

/// A positive fraction in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(invalid("numerator and denominator must be positive"));
        }
        let g = num.gcd(&den);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")));
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Self::new(parse(s)?, 1),
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

fn check_phi(phi: f64) -> Result<()> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    Ok(())
}

fn scalar(z: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![z]])
}

/// Single-multiplicity ladder bath with 2×2 middle blocks [[a, b], [c, d]].
fn ladder_blocks(m: usize, last: C64, middle: impl Fn(usize) -> [C64; 4]) -> Vec<ComplexMatrix> {
    let mut blocks = vec![scalar(ONE)];
    for j in 1..m {
        let [a, b, c, d] = middle(j);
        blocks.push(ComplexMatrix::from_rows(&[vec![a, b], vec![c, d]]));
    }
    blocks.push(scalar(last));
    blocks
}

fn realize_blocks(blocks: SpinBlockSpec, beta: InverseTemperature) -> Result<(ThermalOpSpec, SemigroupElement)> {
    let spec = spin_block_choi(&blocks, beta).spec;
    let realized = psi(&realize(&spec))?;
    Ok((spec, realized))
}

/// Infinite temperature, ladder bath with m levels: each middle block rotates by
/// √λ and applies the phase e^{-iφ} to the excited part.
pub fn extreme_approx_infinite(lambda: f64, phi: f64, m: usize) -> Result<FamilyRealization> {
    check_lambda(lambda)?;
    check_phi(phi)?;
    if m < 2 {
        return Err(invalid("need at least two bath levels"));
    }
    let (s, c) = (lambda.sqrt(), (1.0 - lambda).sqrt());
    let ph = C64::from_polar(1.0, -phi);
    let blocks = ladder_blocks(m, ONE, |_| [C64::new(c, 0.0), C64::new(s, 0.0), -ph * s, ph * c]);
    let (spec, realized) = realize_blocks(SpinBlockSpec::new(1.0, vec![1; m], blocks)?, InverseTemperature::INFINITE_TEMPERATURE)?;
    let e = C64::from_polar(1.0, phi);
    let mf = m as f64;
    let closed_form = SemigroupElement {
        lambda: lambda * (mf - 1.0) / mf,
        c: e * (1.0 - lambda) + (ONE + e * (1.0 - 2.0 * c)) * c / mf,
    };
    let limit = SemigroupElement { lambda, c: e * (1.0 - lambda) };
    Ok(FamilyRealization { spec, realized, closed_form, limit })
}

/// Ladder bath with m levels at ratio q. Middle block j is
/// [[γ^j, i√(1-γ^{2j})], [i e^{-iφ}√(1-γ^{2j}), e^{-iφ}γ^j]] with
/// γ² = (1-λ)/(1-λq). q = 1 uses the infinite-temperature family.
pub fn interior_family(lambda: f64, phi: f64, m: usize, q: f64) -> Result<FamilyRealization> {
    check_q(q)?;
    if q == 1.0 {
        return extreme_approx_infinite(lambda, phi, m);
    }
    check_lambda(lambda)?;
    check_phi(phi)?;
    if m < 2 {
        return Err(invalid("need at least two bath levels"));
    }
    let g2 = (1.0 - lambda) / (1.0 - lambda * q);
    let g = g2.sqrt();
    let ph = C64::from_polar(1.0, -phi);
    let blocks = ladder_blocks(m, ph, |j| {
        let a = g.powi(j as i32);
        let b = (1.0 - a * a).max(0.0).sqrt();
        [C64::new(a, 0.0), I * b, I * ph * b, ph * a]
    });
    let beta = InverseTemperature::from_q(q, 1.0)?;
    let (spec, realized) = realize_blocks(SpinBlockSpec::new(1.0, vec![1; m], blocks)?, beta)?;
    let k = (m - 1) as i32;
    let z = (1.0 - q) / (1.0 - q.powi(m as i32));
    let gq = g2 * q;
    let geometric = (1.0 - gq.powi(k)) / (1.0 - gq);
    let closed_form = SemigroupElement {
        lambda: (1.0 - q.powi(k)) / (1.0 - q.powi(m as i32)) - g2 * z * geometric,
        c: C64::from_polar(z * (g * geometric + (g * q).powi(k)), phi),
    };
    let limit = SemigroupElement { lambda, c: C64::from_polar(coherence_bound(lambda, q), phi) };
    Ok(FamilyRealization { spec, realized, closed_form, limit })
}

/// The m → ∞ coordinates of the finite-temperature family at ratio μ.
pub fn finite_extreme_limit(lambda: f64, mu: f64, q: f64) -> SemigroupElement {
    let denom = mu - lambda - mu * q * (1.0 - lambda);
    let root = (mu * (1.0 - lambda) * (mu - lambda)).sqrt();
    SemigroupElement {
        lambda: lambda * mu * (mu - 1.0) * q / denom,
        c: C64::new(root * q + (1.0 - mu * q) * (1.0 + root * lambda * q / denom), 0.0),
    }
}

/// Finite temperature, bath levels j (j < m) with multiplicities α₀μ^j where α₀
/// is the least integer making all of them whole. Blocks are diagonal
/// contractions D_1 = 1, A_j = D_j ⊕ 1, D_j = √((1-λ)/(1-λ/μ))·A_{j-1},
/// completed to rotations: B_j carries √(1-d²) on its top rows, C_j = -B_jᵀ.
/// `cap` bounds the system ⊗ bath dimension.
pub fn extreme_approx_finite(lambda: f64, mu: Rational, m: usize, q: f64, cap: u128) -> Result<FamilyRealization> {
    check_lambda(lambda)?;
    check_q(q)?;
    if q >= 1.0 {
        return Err(invalid("the finite-temperature family needs q < 1"));
    }
    let muf = mu.value();
    if !(muf > 1.0 && muf * q < 1.0) {
        return Err(invalid(format!("mu = {mu} must lie in (1, 1/q) = (1, {})", 1.0 / q)));
    }
    if m < 2 {
        return Err(invalid("need at least two bath levels"));
    }
    let alphas = multiplicities(mu, m, cap)?;
    let shrink = ((1.0 - lambda) / (1.0 - lambda / muf)).sqrt();
    // Diagonals of D_j for j = 1..m-1 (index j - 1) and A_j likewise.
    let mut d_diag: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    let mut a_diag: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    for j in 1..m {
        let d = if j == 1 { vec![1.0; alphas[0]] } else { a_diag[j - 2].iter().map(|x| shrink * x).collect() };
        let mut a = d.clone();
        a.resize(alphas[j], 1.0);
        d_diag.push(d);
        a_diag.push(a);
    }
    let mut blocks = vec![ComplexMatrix::identity(alphas[0])];
    for j in 1..m {
        let (aj, dj) = (alphas[j], alphas[j - 1]);
        let (a, d) = (&a_diag[j - 1], &d_diag[j - 1]);
        let mut u = ComplexMatrix::zeros(aj + dj, aj + dj);
        for (k, &x) in a.iter().enumerate() {
            u[(k, k)] = C64::new(x, 0.0);
        }
        for (k, &x) in d.iter().enumerate() {
            let s = (1.0 - x * x).max(0.0).sqrt();
            u[(aj + k, aj + k)] = C64::new(x, 0.0);
            u[(k, aj + k)] = C64::new(s, 0.0);
            u[(aj + k, k)] = C64::new(-s, 0.0);
        }
        blocks.push(u);
    }
    blocks.push(ComplexMatrix::identity(alphas[m - 1]));
    let beta = InverseTemperature::from_q(q, 1.0)?;
    let spin = SpinBlockSpec::new(1.0, alphas, blocks)?;
    let formula = spin_block_choi(&spin, beta);
    let realized = psi(&realize(&formula.spec))?;
    Ok(FamilyRealization {
        spec: formula.spec,
        realized,
        closed_form: SemigroupElement { lambda: formula.lambda, c: formula.c },
        limit: finite_extreme_limit(lambda, muf, q),
    })
}

/// α_j = s^{m-1-j}·p^j for μ = p/s, checked against the cap on 2·Σα_j.
fn multiplicities(mu: Rational, m: usize, cap: u128) -> Result<Vec<usize>> {
    let overflow = || Error::DimensionCap { requested: u128::MAX, cap };
    let (p, s) = (mu.num() as u128, mu.den() as u128);
    let mut alphas = Vec::with_capacity(m);
    let mut total: u128 = 0;
    for j in 0..m {
        let a = s
            .checked_pow((m - 1 - j) as u32)
            .and_then(|x| p.checked_pow(j as u32).and_then(|y| x.checked_mul(y)))
            .ok_or_else(overflow)?;
        total = total.checked_add(a).ok_or_else(overflow)?;
        alphas.push(a);
    }
    let requested = total.checked_mul(2).ok_or_else(overflow)?;
    if requested > cap {
        return Err(Error::DimensionCap { requested, cap });
    }
    Ok(alphas.into_iter().map(|a| a as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::coherence_bound;

    const Q: f64 = 0.2;

    #[test]
    fn infinite_temperature_examples() {
        // λ = 0: the phase sits on every level but the top one.
        let r = extreme_approx_infinite(0.0, 0.7, 3).unwrap();
        let e = C64::from_polar(1.0, 0.7);
        assert!(r.realized.distance(&SemigroupElement { lambda: 0.0, c: e + (ONE - e) / 3.0 }) < 1e-15);
        assert_eq!(r.limit, SemigroupElement { lambda: 0.0, c: e });
        let r = extreme_approx_infinite(0.0, 0.0, 5).unwrap();
        assert!(r.realized.distance(&SemigroupElement::IDENTITY) < 1e-15);
        let r = extreme_approx_infinite(0.5, 0.0, 4).unwrap();
        let h = 0.5f64.sqrt();
        let expected = SemigroupElement { lambda: 0.375, c: C64::new(0.5 + h * (2.0 - 2.0 * h) / 4.0, 0.0) };
        assert!(r.closed_form.distance(&expected) < 1e-15);
        assert!(r.realized.distance(&expected) < 1e-12);
        assert!(extreme_approx_infinite(0.5, 0.0, 1).is_err());
    }

    #[test]
    fn infinite_temperature_trend() {
        let mut last = f64::INFINITY;
        for m in [2, 4, 8, 16, 32] {
            let r = extreme_approx_infinite(0.3, 1.0, m).unwrap();
            assert!(r.realized.distance(&r.closed_form) < 1e-10);
            let d = r.realized.distance(&r.limit);
            assert!(d < last);
            last = d;
        }
    }

    #[test]
    fn interior_family_endpoints_and_closed_form() {
        for m in [2, 4, 6] {
            let top = interior_family(1.0, 0.4, m, Q).unwrap();
            let want = (1.0 - Q.powi(m as i32 - 1)) / (1.0 - Q.powi(m as i32));
            assert!((top.closed_form.lambda - want).abs() < 1e-15);
            assert!((top.realized.lambda - want).abs() < 1e-12);
            let bottom = interior_family(0.0, 0.4, m, Q).unwrap();
            assert!(bottom.realized.distance(&SemigroupElement { lambda: 0.0, c: C64::from_polar(1.0, 0.4) }) < 1e-12);
        }
        let r = interior_family(0.5, -1.1, 6, Q).unwrap();
        assert!(r.realized.distance(&r.closed_form) < 1e-10);
        assert!(r.realized.c.norm() < coherence_bound(r.realized.lambda, Q));
        let hot = interior_family(0.5, 0.0, 4, 1.0).unwrap();
        assert!(hot.realized.distance(&extreme_approx_infinite(0.5, 0.0, 4).unwrap().realized) < 1e-15);
    }

    #[test]
    fn interior_family_approaches_bound() {
        let mut last = f64::INFINITY;
        for m in [2, 4, 8, 16, 32] {
            let r = interior_family(0.5, 0.3, m, 0.5).unwrap();
            let d = r.realized.distance(&r.limit);
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("4/2".parse::<Rational>().unwrap(), Rational::new(2, 1).unwrap());
        assert_eq!("49/10".parse::<Rational>().unwrap().value(), 4.9);
        assert!("0/3".parse::<Rational>().is_err());
        assert!("a/3".parse::<Rational>().is_err());
    }

    #[test]
    fn finite_family_identity_at_zero_lambda() {
        let r = extreme_approx_finite(0.0, Rational::new(2, 1).unwrap(), 4, Q, DEFAULT_DIMENSION_CAP).unwrap();
        assert!(r.realized.distance(&SemigroupElement::IDENTITY) < 1e-12);
    }

    #[test]
    fn finite_family_converges_to_limit() {
        let mu = Rational::new(2, 1).unwrap();
        let mut last = f64::INFINITY;
        for m in 3..=8 {
            let r = extreme_approx_finite(0.5, mu, m, Q, DEFAULT_DIMENSION_CAP).unwrap();
            assert!(r.realized.distance(&r.closed_form) < 1e-10);
            let d = r.realized.distance(&r.limit);
            assert!(d < last, "m = {m}: {d} >= {last}");
            last = d;
        }
    }

    #[test]
    fn finite_family_limit_near_bound() {
        let l = finite_extreme_limit(0.5, 4.9, Q);
        assert!((l.lambda - 0.5).abs() < 0.05 && (l.c.re - 0.45f64.sqrt()).abs() < 0.05);
        let closer = finite_extreme_limit(0.5, 4.999, Q);
        assert!((closer.lambda - 0.5).abs() < 1e-3 && (closer.c.re - 0.45f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn finite_family_rejections() {
        let mu = Rational::new(3, 2).unwrap();
        assert!(matches!(extreme_approx_finite(0.5, mu, 12, Q, DEFAULT_DIMENSION_CAP), Err(Error::DimensionCap { .. })));
        assert!(matches!(extreme_approx_finite(0.5, mu, 200, Q, DEFAULT_DIMENSION_CAP), Err(Error::DimensionCap { .. })));
        assert!(extreme_approx_finite(0.5, Rational::new(5, 1).unwrap(), 3, Q, DEFAULT_DIMENSION_CAP).is_err());
        assert!(extreme_approx_finite(0.5, Rational::new(1, 1).unwrap(), 3, Q, DEFAULT_DIMENSION_CAP).is_err());
        assert!(extreme_approx_finite(0.5, mu, 3, 1.0, DEFAULT_DIMENSION_CAP).is_err());
        let small = extreme_approx_finite(0.5, mu, 3, Q, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(small.spec.bath().multiplicities(), &[4, 6, 9]);
    }
}
