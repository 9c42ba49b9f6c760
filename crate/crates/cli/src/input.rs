//! The JSON process description.
//!
//! ```json
//! {
//!   "types": ["a", "b"],
//!   "weights": [1, 2],
//!   "target_types": ["a", "b"],
//!   "target_weights": [2, 1],
//!   "kernel": [[1, 1], [0.5, 0]],
//!   "observables": {"x": [1, -2]},
//!   "partitions": {"source": [["a", "b"]], "target": [["a"], ["b"]]},
//!   "next": {"kernel": [[0.5, 0.5], [0.5, 0.5]]},
//!   "open": {"orphan_weights": [0, 1]},
//!   "quantum": {"rho": [[1, 0], [0, 1]], "kraus": [[[1.4142135623730951, 0], [0, 0]]]}
//! }
//! ```
//!
//! `target_types` defaults to `types`; `target_weights` defaults to the
//! image `μw` and is validated against it when given. Observables apply to
//! every space whose dimension matches their length. Complex matrix entries
//! are either numbers or `[re, im]` pairs; superoperators act on
//! column-major vectorised matrices.

use std::collections::BTreeMap;
use std::path::Path;

use entropy::Partition;
use measure_core::{Error, Observable, Population, Result, TypeSet};
use num_complex::Complex64;
use process_core::Process;
use quantum::{CMatrix, DensityOperator, QuantumObservable, QuantumProcess};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parsed process description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSpecFile {
    /// Parent type labels.
    pub types: Vec<String>,
    /// Parent weights `μ`.
    pub weights: Vec<f64>,
    /// Child type labels (default: `types`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_types: Option<Vec<String>>,
    /// Child weights `μ′` (default: `μw`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_weights: Option<Vec<f64>>,
    /// Kernel `w[i][i′]`.
    pub kernel: Vec<Vec<f64>>,
    /// Named observables.
    #[serde(default)]
    pub observables: BTreeMap<String, Vec<f64>>,
    /// Parent and child partitions by label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<PartitionSpec>,
    /// A second process from `μ′`, for stationarity and Fisher diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next: Option<NextSpec>,
    /// Orphaned children for the open-process diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open: Option<OpenSpec>,
    /// A quantum process.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumSpec>,
}

/// Partitions given as blocks of labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    /// Blocks of parent labels.
    pub source: Vec<Vec<String>>,
    /// Blocks of child labels.
    pub target: Vec<Vec<String>>,
}

/// Second process `μ′ → μ″`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NextSpec {
    /// Grandchild labels (default: the child labels).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_types: Option<Vec<String>>,
    /// Kernel from children to grandchildren.
    pub kernel: Vec<Vec<f64>>,
}

/// Orphan increment for an open process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenSpec {
    /// Orphaned child mass per child type.
    pub orphan_weights: Vec<f64>,
}

/// A complex matrix entry: a real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    /// Real entry.
    Real(f64),
    /// Complex entry `[re, im]`.
    Complex([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(r) => Complex64::new(r, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Row-major complex matrix.
pub type MatrixSpec = Vec<Vec<Entry>>;

/// Quantum process description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSpec {
    /// Parent density matrix.
    pub rho: MatrixSpec,
    /// Superoperator (`d′² × d²`, column-major vectorisation).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superoperator: Option<MatrixSpec>,
    /// Kraus operators (`d′ × d`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixSpec>>,
    /// Child dimension when a superoperator is given (default: parent dimension).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_dim: Option<usize>,
    /// Named Hermitian observables; each applies to every space of matching dimension.
    #[serde(default)]
    pub observables: BTreeMap<String, MatrixSpec>,
    /// Projective partitions of the parent and child spaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<QuantumPartitionSpec>,
}

/// Projections resolving the parent and child identities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumPartitionSpec {
    /// Parent projections.
    pub source: Vec<MatrixSpec>,
    /// Child projections.
    pub target: Vec<MatrixSpec>,
}

/// Reads and parses a description file.
pub fn read_spec(path: &Path) -> std::result::Result<ProcessSpecFile, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Converts a row-major matrix description.
pub fn to_matrix(m: &MatrixSpec) -> Result<CMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape("matrix rows are empty or ragged".into()));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| m[i][j].into()))
}

impl ProcessSpecFile {
    /// Parent population.
    pub fn source(&self) -> Result<Population> {
        Population::new(TypeSet::new(self.types.clone())?, self.weights.clone())
    }

    /// Child type set.
    pub fn target_types(&self) -> Result<TypeSet> {
        TypeSet::new(self.target_types.clone().unwrap_or_else(|| self.types.clone()))
    }

    /// The process, validated against `target_weights` when present.
    pub fn process(&self) -> Result<Process> {
        let source = self.source()?;
        let types = self.target_types()?;
        match &self.target_weights {
            Some(w) => Process::new(source, Population::new(types, w.clone())?, self.kernel.clone()),
            None => Process::from_kernel(source, types, self.kernel.clone()),
        }
    }

    /// The second process, starting from the child population of `p`.
    pub fn next_process(&self, p: &Process) -> Result<Option<Process>> {
        let Some(next) = &self.next else { return Ok(None) };
        let types = match &next.target_types {
            Some(t) => TypeSet::new(t.clone())?,
            None => p.target().types().clone(),
        };
        Process::from_kernel(p.target().clone(), types, next.kernel.clone()).map(Some)
    }

    /// Named observables on `pop`'s type set (those of matching length).
    pub fn observables_on(&self, pop: &Population) -> Vec<(String, Observable)> {
        self.observables
            .iter()
            .filter(|(_, v)| v.len() == pop.len())
            .filter_map(|(k, v)| Observable::on(pop, v.clone()).ok().map(|o| (k.clone(), o)))
            .collect()
    }

    /// Parent and child partitions (singletons when absent).
    pub fn partitions(&self, p: &Process) -> Result<(Partition, Partition)> {
        match &self.partitions {
            Some(ps) => Ok((
                Partition::from_labels(p.source().types(), &ps.source)?,
                Partition::from_labels(p.target().types(), &ps.target)?,
            )),
            None => Ok((Partition::singletons(p.source().len()), Partition::singletons(p.target().len()))),
        }
    }
}

impl QuantumSpec {
    /// The quantum process.
    pub fn process(&self) -> Result<QuantumProcess> {
        let rho = DensityOperator::new(to_matrix(&self.rho)?)?;
        match (&self.superoperator, &self.kraus) {
            (Some(s), None) => {
                let d2 = self.target_dim.unwrap_or(rho.dim());
                QuantumProcess::from_superoperator(to_matrix(s)?, rho, d2)
            }
            (None, Some(k)) if !k.is_empty() => {
                let kraus = k.iter().map(to_matrix).collect::<Result<Vec<_>>>()?;
                QuantumProcess::from_kraus(&kraus, rho)
            }
            _ => Err(Error::Invalid("quantum section needs exactly one of a superoperator or a non-empty Kraus list".into())),
        }
    }

    /// Named observables of dimension `d`.
    pub fn observables_of_dim(&self, d: usize) -> Result<Vec<(String, QuantumObservable)>> {
        let mut out = Vec::new();
        for (name, m) in &self.observables {
            let m = to_matrix(m)?;
            if m.nrows() == d && m.ncols() == d {
                out.push((name.clone(), QuantumObservable::new(m)?));
            }
        }
        Ok(out)
    }

    /// Parent and child projections, if given.
    pub fn projections(&self) -> Result<Option<(Vec<CMatrix>, Vec<CMatrix>)>> {
        let Some(ps) = &self.partitions else { return Ok(None) };
        let a = ps.source.iter().map(to_matrix).collect::<Result<Vec<_>>>()?;
        let b = ps.target.iter().map(to_matrix).collect::<Result<Vec<_>>>()?;
        Ok(Some((a, b)))
    }
}
