use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use super::args::{BathArg, SystemArg, TempArg};
use super::CliError;
use crate::hamiltonian::{DiagonalHamiltonian, InverseTemperature};

/// Degenerate energies closer than this are merged.
const MERGE_TOL: f64 = 1e-12;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        if e.is_data() {
            CliError::Validation(msg)
        } else {
            CliError::Parse(msg)
        }
    })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn to_pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

/// `0:2,1:3` as level:multiplicity pairs.
pub fn parse_levels(text: &str) -> Result<DiagonalHamiltonian, CliError> {
    let mut levels = Vec::new();
    let mut mult = Vec::new();
    for item in text.split(',') {
        let (e, m) = item
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("level `{item}` is not energy:multiplicity")))?;
        levels.push(e.trim().parse::<f64>().map_err(|err| CliError::Parse(format!("energy `{e}`: {err}")))?);
        mult.push(m.trim().parse::<usize>().map_err(|err| CliError::Parse(format!("multiplicity `{m}`: {err}")))?);
    }
    Ok(DiagonalHamiltonian::new(levels, mult)?)
}

fn hamiltonian(
    energies: &Option<Vec<f64>>,
    levels: &Option<String>,
    file: &Option<std::path::PathBuf>,
) -> Result<Option<DiagonalHamiltonian>, CliError> {
    Ok(match (energies, levels, file) {
        (Some(e), _, _) => Some(DiagonalHamiltonian::from_energies(e, MERGE_TOL)?),
        (_, Some(l), _) => Some(parse_levels(l)?),
        (_, _, Some(p)) => Some(read_json(p)?),
        _ => None,
    })
}

impl SystemArg {
    pub fn get(&self) -> Result<Option<DiagonalHamiltonian>, CliError> {
        hamiltonian(&self.energies, &self.levels, &self.ham)
    }

    pub fn require(&self) -> Result<DiagonalHamiltonian, CliError> {
        self.get()?.ok_or_else(|| CliError::Usage("a Hamiltonian is required (--energies, --levels or --ham)".into()))
    }
}

impl BathArg {
    pub fn require(&self) -> Result<DiagonalHamiltonian, CliError> {
        hamiltonian(&self.bath_energies, &self.bath_levels, &self.bath)?.ok_or_else(|| {
            CliError::Usage("a bath is required (--bath-energies, --bath-levels or --bath)".into())
        })
    }
}

impl TempArg {
    pub fn get(&self) -> Result<Option<InverseTemperature>, CliError> {
        Ok(match (self.beta, self.q) {
            (Some(b), _) => Some(InverseTemperature::new(b)?),
            (_, Some(q)) => Some(InverseTemperature::from_q(q, 1.0)?),
            _ => None,
        })
    }

    pub fn require(&self) -> Result<InverseTemperature, CliError> {
        self.get()?.ok_or_else(|| CliError::Usage("a temperature is required (--beta or --q)".into()))
    }
}

/// Adds the invocation to an object result, or wraps any other value.
pub fn with_invocation(result: Value, invocation: &Value) -> Value {
    match result {
        Value::Object(mut map) => {
            map.insert("invocation".into(), invocation.clone());
            Value::Object(map)
        }
        other => serde_json::json!({ "result": other, "invocation": invocation }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_syntax() {
        let h = parse_levels("0:2, 1.5:3").unwrap();
        assert_eq!(h.levels(), &[0.0, 1.5]);
        assert_eq!(h.multiplicities(), &[2, 3]);
        assert!(matches!(parse_levels("0-2"), Err(CliError::Parse(_))));
        assert!(matches!(parse_levels("1:1,0:1"), Err(CliError::Lib(_))));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, "1").unwrap();
        write_atomic(&p, "2").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "2");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
