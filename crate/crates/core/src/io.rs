//! Plain-JSON state files: dims, `[re, im]` amplitude pairs, optional provenance.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::C64;
use crate::states::{Provenance, PureState3, StateError};

pub const STATE_SCHEMA_VERSION: u32 = 1;

/// Norm deviation repaired on load; anything larger is rejected.
pub const LOAD_NORM_TOL: f64 = 1e-8;

/// Deviations below this are left alone so files round-trip bit for bit.
const ROUNDTRIP_NORM_TOL: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read or write {path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed state JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("{count} amplitudes for dims {dims:?}")]
    AmplitudeCount { count: usize, dims: [usize; 3] },
    #[error("state norm {norm} is further than {LOAD_NORM_TOL:e} from 1")]
    Norm { norm: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: u32,
    pub dims: [usize; 3],
    /// `[re, im]` pairs at index i·d_B·d_C + j·d_C + k.
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl StateFile {
    pub fn from_state(psi: &PureState3) -> Self {
        Self {
            schema_version: STATE_SCHEMA_VERSION,
            dims: psi.dims(),
            amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            provenance: psi.provenance().cloned(),
        }
    }

    pub fn into_state(self) -> Result<PureState3, IoError> {
        if self.schema_version != STATE_SCHEMA_VERSION {
            return Err(IoError::Schema(self.schema_version));
        }
        let expected: usize = self.dims.iter().product();
        if self.amplitudes.len() != expected || expected == 0 {
            return Err(IoError::AmplitudeCount {
                count: self.amplitudes.len(),
                dims: self.dims,
            });
        }
        let amps: Vec<C64> = self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > LOAD_NORM_TOL {
            return Err(IoError::Norm { norm });
        }
        let psi = if (norm - 1.0).abs() <= ROUNDTRIP_NORM_TOL {
            PureState3::new(self.dims, amps)?
        } else {
            PureState3::from_unnormalized(self.dims, amps)?
        };
        Ok(match self.provenance {
            Some(p) => psi.with_provenance(p),
            None => psi,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn write_state(path: &Path, psi: &PureState3) -> Result<(), IoError> {
    let mut text = StateFile::from_state(psi).to_json();
    text.push('\n');
    std::fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_state(path: &Path) -> Result<PureState3, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    StateFile::from_json(&text)?.into_state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{haar_random, rnn_boundary};

    #[test]
    fn roundtrip_is_bit_exact() {
        for psi in [haar_random([2, 3, 4], 11), rnn_boundary(2).unwrap()] {
            let text = StateFile::from_state(&psi).to_json();
            let back = StateFile::from_json(&text).unwrap().into_state().unwrap();
            assert_eq!(back, psi);
        }
    }

    #[test]
    fn loader_renormalizes_small_drift_and_rejects_large() {
        let psi = haar_random([2, 2, 2], 1);
        let mut file = StateFile::from_state(&psi);
        for a in &mut file.amplitudes {
            a[0] *= 1.0 + 1e-9;
            a[1] *= 1.0 + 1e-9;
        }
        let fixed = file.clone().into_state().unwrap();
        assert!((fixed.norm() - 1.0).abs() < 1e-14);
        for a in &mut file.amplitudes {
            a[0] *= 1.001;
            a[1] *= 1.001;
        }
        assert!(matches!(file.into_state(), Err(IoError::Norm { .. })));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(StateFile::from_json("{").is_err());
        let mut file = StateFile::from_state(&haar_random([2, 2, 2], 1));
        file.amplitudes.pop();
        assert!(matches!(file.into_state(), Err(IoError::AmplitudeCount { .. })));
    }
}
