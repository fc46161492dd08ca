use serde::Serialize;

use super::eig::herm_eig;
use super::matrix::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Hermitian,
    Unitary,
    Psd,
    Density,
}

impl std::str::FromStr for MatrixKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hermitian" => Ok(Self::Hermitian),
            "unitary" => Ok(Self::Unitary),
            "psd" => Ok(Self::Psd),
            "density" => Ok(Self::Density),
            other => Err(format!("unknown matrix kind '{other}'")),
        }
    }
}

/// Residuals are Frobenius norms; fields irrelevant to the kind are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub kind: MatrixKind,
    pub tol: f64,
    pub hermitian_residual: f64,
    pub unitary_residual: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub trace_residual: Option<f64>,
    pub pass: bool,
}

pub fn validate(m: &ComplexMatrix, kind: MatrixKind, tol: f64) -> ValidationReport {
    let square = m.is_square();
    let hermitian_residual = m.hermitian_residual();
    let mut report = ValidationReport {
        kind,
        tol,
        hermitian_residual,
        unitary_residual: None,
        min_eigenvalue: None,
        trace_residual: None,
        pass: false,
    };
    if !square || !m.is_finite() {
        return report;
    }
    let herm_ok = hermitian_residual <= tol;
    report.pass = match kind {
        MatrixKind::Hermitian => herm_ok,
        MatrixKind::Unitary => {
            let r = m.unitary_residual();
            report.unitary_residual = Some(r);
            r <= tol
        }
        MatrixKind::Psd | MatrixKind::Density => {
            let min = herm_eig(&m.hermitian_part()).ok().and_then(|e| e.values.first().copied());
            report.min_eigenvalue = min;
            let mut ok = herm_ok && min.is_some_and(|v| v >= -tol);
            if kind == MatrixKind::Density {
                let t = (m.trace() - 1.0).norm();
                report.trace_residual = Some(t);
                ok &= t <= tol;
            }
            ok
        }
    };
    report
}
