//! Operator-dataset persistence (versioned JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::neuralop::OperatorDataset;

use super::IoError;

const DATASET_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct DatasetDoc {
    version: u32,
    dataset: OperatorDataset,
}

pub fn save_dataset(dataset: &OperatorDataset, path: &Path) -> Result<(), IoError> {
    let doc = DatasetDoc {
        version: DATASET_FORMAT_VERSION,
        dataset: dataset.clone(),
    };
    let mut text = serde_json::to_string(&doc)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<OperatorDataset, IoError> {
    let text = std::fs::read_to_string(path)?;
    let doc: DatasetDoc = serde_json::from_str(&text)?;
    if doc.version != DATASET_FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion {
            found: doc.version,
            expected: DATASET_FORMAT_VERSION,
        });
    }
    Ok(doc.dataset)
}
