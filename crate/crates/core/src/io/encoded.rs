//! Encoded-vector container: a one-line JSON header, then the raw
//! little-endian coefficient payload, block by block.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::{BasisFamily, BasisSpec};
use crate::encoder::{Block, EncodedVector, Normalization, Provenance};

use super::IoError;

const ENCODED_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct BlockEntry {
    name: String,
    len: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    version: u32,
    family: String,
    n: usize,
    d: usize,
    normalization: Normalization,
    provenance: Provenance,
    blocks: Vec<BlockEntry>,
    payload_sha256: String,
}

fn payload_bytes(vec: &EncodedVector) -> Vec<u8> {
    let total: usize = vec.blocks().map(|(_, c)| c.len()).sum();
    let mut bytes = Vec::with_capacity(total * 8);
    for (_, coeffs) in vec.blocks() {
        for c in coeffs {
            bytes.extend_from_slice(&c.to_le_bytes());
        }
    }
    bytes
}

pub fn save_encoded(vec: &EncodedVector, path: &Path) -> Result<(), IoError> {
    let payload = payload_bytes(vec);
    let digest = Sha256::digest(&payload);
    let header = Header {
        version: ENCODED_FORMAT_VERSION,
        family: vec.spec().family().name().to_string(),
        n: vec.spec().order(),
        d: vec.spec().dimension(),
        normalization: vec.normalization(),
        provenance: vec.provenance(),
        blocks: vec
            .blocks()
            .map(|(b, c)| BlockEntry {
                name: b.name().to_string(),
                len: c.len(),
            })
            .collect(),
        payload_sha256: hex::encode(digest),
    };
    let mut file = std::fs::File::create(path)?;
    serde_json::to_writer(&mut file, &header)?;
    file.write_all(b"\n")?;
    file.write_all(&payload)?;
    Ok(())
}

pub fn load_encoded(path: &Path) -> Result<EncodedVector, IoError> {
    let bytes = std::fs::read(path)?;
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or(IoError::TruncatedPayload {
            expected: 1,
            got: 0,
        })?;
    let header: Header = serde_json::from_slice(&bytes[..newline])?;
    if header.version != ENCODED_FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion {
            found: header.version,
            expected: ENCODED_FORMAT_VERSION,
        });
    }
    let payload = &bytes[newline + 1..];
    let expected: usize = header.blocks.iter().map(|b| b.len * 8).sum();
    if payload.len() != expected {
        return Err(IoError::TruncatedPayload {
            expected,
            got: payload.len(),
        });
    }
    let digest = hex::encode(Sha256::digest(payload));
    if digest != header.payload_sha256 {
        return Err(IoError::HashMismatch);
    }
    let family = match header.family.as_str() {
        "legendre" => BasisFamily::LegendreTensor,
        "fourier" => BasisFamily::FourierTensor,
        other => {
            return Err(IoError::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("unknown basis family '{other}'"),
            })
        }
    };
    let spec = BasisSpec::new(family, header.n, header.d)?;
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for entry in &header.blocks {
        let block = Block::from_name(&entry.name).ok_or_else(|| IoError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("unknown block '{}'", entry.name),
        })?;
        let mut coeffs = Vec::with_capacity(entry.len);
        for i in 0..entry.len {
            let start = (offset + i) * 8;
            let mut raw = [0u8; 8];
            raw.copy_from_slice(&payload[start..start + 8]);
            coeffs.push(f64::from_le_bytes(raw));
        }
        offset += entry.len;
        blocks.push((block, coeffs));
    }
    EncodedVector::new(spec, header.normalization, header.provenance, blocks)
        .map_err(IoError::from)
}
