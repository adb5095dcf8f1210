//! JSON state files.
//!
//! ```json
//! {"dims": [2, 2],
//!  "amplitudes": [{"idx": [0, 0], "re": 0.7071067811865476, "im": 0.0},
//!                 {"idx": [1, 1], "re": 0.7071067811865476, "im": 0.0}]}
//! ```
//!
//! Indices are 0-based. Omitted basis states have amplitude zero. Floats are
//! written in shortest round-trip form, so save-then-load is bit-exact.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PureState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeRecord {
    pub idx: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl StateFile {
    /// Records every amplitude whose bit pattern is not `+0.0 + 0.0i`.
    pub fn from_state(state: &PureState) -> Self {
        let amplitudes = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re.to_bits() != 0 || a.im.to_bits() != 0)
            .map(|(flat, a)| AmplitudeRecord {
                idx: state.multi_index(flat),
                re: a.re,
                im: a.im,
            })
            .collect();
        StateFile {
            dims: state.dims().to_vec(),
            amplitudes,
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        if self.dims.is_empty() {
            return Err(schema("dims", "at least one subsystem is required"));
        }
        if let Some(j) = self.dims.iter().position(|&d| d == 0) {
            return Err(schema(format!("dims[{j}]"), "dimension must be positive"));
        }
        let mut state = PureState::basis(self.dims.clone(), &vec![0; self.dims.len()]).map_err(
            |e| match e {
                Error::TooLarge(_) => e,
                other => schema("dims", other.to_string()),
            },
        )?;
        let mut values = vec![Complex64::new(0.0, 0.0); state.total_dim()];
        let mut seen = vec![false; values.len()];
        for (n, rec) in self.amplitudes.iter().enumerate() {
            let path = format!("amplitudes[{n}]");
            if rec.idx.len() != self.dims.len() {
                return Err(schema(
                    format!("{path}.idx"),
                    format!(
                        "has {} entries, dims has {}",
                        rec.idx.len(),
                        self.dims.len()
                    ),
                ));
            }
            if let Some(j) = (0..rec.idx.len()).find(|&j| rec.idx[j] >= self.dims[j]) {
                return Err(schema(
                    format!("{path}.idx[{j}]"),
                    format!(
                        "index {} is out of range for dimension {}",
                        rec.idx[j], self.dims[j]
                    ),
                ));
            }
            for (field, v) in [("re", rec.re), ("im", rec.im)] {
                if !v.is_finite() {
                    return Err(schema(format!("{path}.{field}"), "must be finite"));
                }
            }
            let flat = state.flat_index(&rec.idx)?;
            if std::mem::replace(&mut seen[flat], true) {
                return Err(schema(
                    format!("{path}.idx"),
                    format!("duplicate index {:?}", rec.idx),
                ));
            }
            values[flat] = Complex64::new(rec.re, rec.im);
        }
        state = PureState::new(self.dims.clone(), values)?;
        Ok(state)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            schema(path, e.into_inner().to_string())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }
}

pub fn parse_state(text: &str) -> Result<PureState> {
    StateFile::from_json(text)?.to_state()
}

pub fn load_state(path: impl AsRef<Path>) -> Result<PureState> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_state(&text)
}

pub fn save_state(path: impl AsRef<Path>, state: &PureState) -> Result<()> {
    let mut text = StateFile::from_state(state).to_json();
    text.push('\n');
    std::fs::write(path.as_ref(), text)
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}
