//! Input file formats: semigroup tables and module coefficients as JSON,
//! presentations in the text format of the core crate. Field names are
//! frozen in docs/FORMATS.md.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;

use homzero::abelian::{FGAbelianGroup, IntMatrix};
use homzero::pipeline::GeneratorActions;
use homzero::presentation::Presentation;
use homzero::semigroup::{FiniteSemigroup, FiniteZeroSemigroup};
use homzero::zmodule::{SemigroupModuleAction, ZeroModuleAction};

use crate::CliError;

#[derive(Debug, Deserialize)]
pub struct SemigroupFile {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
pub struct ModuleFile {
    pub rank: usize,
    pub moduli: Vec<u64>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<Vec<i64>>>,
    /// Fills elements missing from `actions`: "identity" or "zero".
    #[serde(default)]
    pub default: Option<String>,
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_semigroup_file(path: &Path) -> Result<SemigroupFile, CliError> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn flatten_table(file: &SemigroupFile) -> Result<Vec<usize>, CliError> {
    let n = file.names.len();
    if file.table.len() != n || file.table.iter().any(|row| row.len() != n) {
        return Err(CliError::Invalid(format!(
            "table must be {n}x{n} to match {n} names"
        )));
    }
    Ok(file.table.iter().flatten().copied().collect())
}

pub fn load_zero_semigroup(path: &Path) -> Result<FiniteZeroSemigroup, CliError> {
    let file = parse_semigroup_file(path)?;
    let table = flatten_table(&file)?;
    FiniteZeroSemigroup::new(file.names, table).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn load_plain_semigroup(path: &Path) -> Result<FiniteSemigroup, CliError> {
    let file = parse_semigroup_file(path)?;
    let table = flatten_table(&file)?;
    FiniteSemigroup::new(file.names, table).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = read_to_string(path)?;
    Presentation::parse(&text).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn load_module_file(path: &Path) -> Result<ModuleFile, CliError> {
    let text = read_to_string(path)?;
    let file: ModuleFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    if file.moduli.len() != file.rank {
        return Err(CliError::Invalid(format!(
            "moduli lists {} entries for rank {}",
            file.moduli.len(),
            file.rank
        )));
    }
    Ok(file)
}

fn base_group(file: &ModuleFile) -> Result<FGAbelianGroup, CliError> {
    FGAbelianGroup::new(file.moduli.iter().map(|&m| BigInt::from(m)).collect())
        .map_err(|e| CliError::Invalid(e.to_string()))
}

fn matrix_from_rows(rank: usize, rows: &[Vec<i64>], who: &str) -> Result<IntMatrix, CliError> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(CliError::Invalid(format!(
            "action of '{who}' must be a {rank}x{rank} matrix"
        )));
    }
    Ok(IntMatrix::from_rows(rows))
}

fn default_matrix(file: &ModuleFile, who: &str) -> Result<IntMatrix, CliError> {
    match file.default.as_deref() {
        Some("identity") => Ok(IntMatrix::identity(file.rank)),
        Some("zero") => Ok(IntMatrix::zeros(file.rank, file.rank)),
        Some(other) => Err(CliError::Invalid(format!(
            "unknown default action '{other}' (use \"identity\" or \"zero\")"
        ))),
        None => Err(CliError::Invalid(format!(
            "no action given for '{who}' and no default set"
        ))),
    }
}

fn resolve_matrices(file: &ModuleFile, names: &[&str]) -> Result<Vec<IntMatrix>, CliError> {
    let mut unused: Vec<&String> = file
        .actions
        .keys()
        .filter(|k| !names.contains(&k.as_str()))
        .collect();
    if let Some(k) = unused.pop() {
        return Err(CliError::Invalid(format!(
            "action for unknown element '{k}'"
        )));
    }
    names
        .iter()
        .map(|name| match file.actions.get(*name) {
            Some(rows) => matrix_from_rows(file.rank, rows, name),
            None => default_matrix(file, name),
        })
        .collect()
}

/// Module coefficients over a semigroup with zero: one matrix per nonzero
/// element, keyed by element name.
pub fn module_over_zero_semigroup(
    file: &ModuleFile,
    s: &Arc<FiniteZeroSemigroup>,
) -> Result<ZeroModuleAction, CliError> {
    let base = base_group(file)?;
    let names: Vec<&str> = (1..s.size()).map(|i| s.name(i)).collect();
    let matrices = resolve_matrices(file, &names)?;
    ZeroModuleAction::new(Arc::clone(s), base, matrices)
        .map_err(|e| CliError::Invalid(e.to_string()))
}

/// Module coefficients over a plain semigroup: one matrix per element.
pub fn module_over_plain_semigroup(
    file: &ModuleFile,
    s: &Arc<FiniteSemigroup>,
) -> Result<SemigroupModuleAction, CliError> {
    let base = base_group(file)?;
    let names: Vec<&str> = (0..s.size()).map(|i| s.name(i)).collect();
    let matrices = resolve_matrices(file, &names)?;
    SemigroupModuleAction::new(Arc::clone(s), base, matrices)
        .map_err(|e| CliError::Invalid(e.to_string()))
}

/// Generator coefficients for a presented semigroup: one matrix per
/// generator name.
pub fn module_over_generators(
    file: &ModuleFile,
    p: &Presentation,
) -> Result<GeneratorActions, CliError> {
    let base = base_group(file)?;
    let names: Vec<&str> = p.generators().iter().map(String::as_str).collect();
    let matrices = resolve_matrices(file, &names)?;
    Ok(GeneratorActions { base, matrices })
}

/// FNV-1a digest of the inputs, for report reproducibility checks.
pub fn digest(parts: &[&str]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for part in parts {
        for byte in part.bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x100000001b3);
        }
        hash ^= 0xff;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}
