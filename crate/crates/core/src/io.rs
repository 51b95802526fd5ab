//! State files and sweep tables.
//!
//! A state file is `{ "dims": [d_a, d_b], "rho": [[re, im], ...] }` with `rho`
//! in row-major order. Sweeps are written as CSV with the header
//! `eta,min_eig,log_negativity,concurrence,det_<name>...`; missing values are
//! empty fields.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::SweepRecord;
use crate::fock::{BipartiteState, ModeDims};
use crate::moments::{MomentMatrixSpec, MultiIndex3, MultiIndex4, Ordering};
use crate::numerics::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub rho: Vec<[f64; 2]>,
}

impl From<&BipartiteState> for StateFile {
    fn from(state: &BipartiteState) -> Self {
        let dims = state.dims();
        StateFile {
            dims: [dims.a, dims.b],
            rho: state.rho().as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<StateFile> for BipartiteState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        let dims = ModeDims::new(file.dims[0], file.dims[1])?;
        let n = dims.total();
        if file.rho.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "rho has {} entries, dims need {}",
                file.rho.len(),
                n * n
            )));
        }
        let data = file.rho.iter().map(|[re, im]| c(*re, *im)).collect();
        BipartiteState::new(ComplexMatrix::from_vec(n, n, data)?, dims)
    }
}

pub fn state_to_json(state: &BipartiteState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from(state))?)
}

pub fn state_from_json(text: &str) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text)?;
    file.try_into()
}

pub fn read_state(path: impl AsRef<Path>) -> Result<BipartiteState> {
    state_from_json(&fs::read_to_string(path)?)
}

pub fn write_state(path: impl AsRef<Path>, state: &BipartiteState) -> Result<()> {
    let mut text = state_to_json(state)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// On-disk witness spec: `{ "ordering": "nom_a", "indices": [[1,0,0], ...] }`.
/// `general_sv` takes four-component indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub ordering: Ordering,
    pub indices: Vec<Vec<usize>>,
}

impl TryFrom<SpecFile> for MomentMatrixSpec {
    type Error = Error;

    fn try_from(file: SpecFile) -> Result<Self> {
        let width = if file.ordering.is_normal() { 3 } else { 4 };
        if let Some(bad) = file.indices.iter().find(|i| i.len() != width) {
            return Err(Error::InvalidSpec(format!(
                "{} needs {width}-component indices, got {bad:?}",
                file.ordering
            )));
        }
        if file.ordering.is_normal() {
            let idx = file.indices.iter().map(|i| MultiIndex3([i[0], i[1], i[2]])).collect();
            MomentMatrixSpec::nom(file.ordering, idx)
        } else {
            let idx = file.indices.iter().map(|i| MultiIndex4([i[0], i[1], i[2], i[3]])).collect();
            MomentMatrixSpec::general(idx)
        }
    }
}

pub fn read_spec(path: impl AsRef<Path>) -> Result<MomentMatrixSpec> {
    let file: SpecFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    file.try_into()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes sweep records as CSV. All records must carry the same witness
/// names in the same order.
pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let names: Vec<&str> = records
        .first()
        .map(|r| r.det_values.iter().map(|(n, _)| n.as_str()).collect())
        .unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["eta".to_string(), "min_eig".into(), "log_negativity".into(), "concurrence".into()];
    header.extend(names.iter().map(|n| format!("det_{n}")));
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        if r.det_values.len() != names.len() || r.det_values.iter().zip(&names).any(|((a, _), b)| a != b) {
            return Err(Error::Invalid("sweep records carry different witness columns".into()));
        }
        let mut row = vec![num(r.eta), num(r.min_eig), opt(r.log_negativity), opt(r.concurrence)];
        row.extend(r.det_values.iter().map(|(_, v)| num(*v)));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
