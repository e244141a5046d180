//! Model checkpoints (versioned JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::neuralop::MioNetParams;

use super::IoError;

const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub preset: String,
    pub seed: u64,
    pub generator: String,
    pub iterations: usize,
    pub final_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    version: u32,
    pub meta: CheckpointMeta,
    pub params: MioNetParams,
}

impl Checkpoint {
    pub fn new(meta: CheckpointMeta, params: MioNetParams) -> Self {
        Checkpoint {
            version: CHECKPOINT_FORMAT_VERSION,
            meta,
            params,
        }
    }
}

pub fn save_checkpoint(checkpoint: &Checkpoint, path: &Path) -> Result<(), IoError> {
    let mut text = serde_json::to_string(checkpoint)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, IoError> {
    let text = std::fs::read_to_string(path)?;
    let ckpt: Checkpoint = serde_json::from_str(&text)?;
    if ckpt.version != CHECKPOINT_FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion {
            found: ckpt.version,
            expected: CHECKPOINT_FORMAT_VERSION,
        });
    }
    Ok(ckpt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralop::poisson::{poisson_net_spec, Preset};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let params = MioNetParams::init(&poisson_net_spec(Preset::Desk, 4), 9).unwrap();
        let ckpt = Checkpoint::new(
            CheckpointMeta {
                preset: "desk".into(),
                seed: 9,
                generator: "poisson1d".into(),
                iterations: 0,
                final_loss: 0.0,
            },
            params,
        );
        save_checkpoint(&ckpt, &path).unwrap();
        let loaded = load_checkpoint(&path).unwrap();
        assert_eq!(loaded, ckpt);
    }
}
