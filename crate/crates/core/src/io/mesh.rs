//! Mesh documents (JSON) and CSV point clouds.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{validate_manifold, ManifoldFunction, SimplicialManifold, ValidationReport};

use super::IoError;

pub const MANIFOLD_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct MeshDoc {
    version: u32,
    d: usize,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertices: Vec<Vec<f64>>,
    simplices: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

/// A loaded manifold function together with its validation report.
/// Containment failures are fatal at load time; everything else in the
/// report is advisory.
#[derive(Debug)]
pub struct LoadedManifold {
    pub mf: ManifoldFunction,
    pub name: Option<String>,
    pub report: ValidationReport,
}

pub fn save_manifold(
    mf: &ManifoldFunction,
    name: Option<&str>,
    path: &Path,
) -> Result<(), IoError> {
    let man = &mf.manifold;
    let doc = MeshDoc {
        version: MANIFOLD_FORMAT_VERSION,
        d: man.ambient_dim(),
        k: man.intrinsic_dim(),
        name: name.map(|s| s.to_string()),
        vertices: (0..man.vertex_count())
            .map(|i| man.vertex(i).to_vec())
            .collect(),
        simplices: man.simplices().to_vec(),
        values: if mf.values.iter().all(|&v| v == 0.0) {
            None
        } else {
            Some(mf.values.clone())
        },
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Loads a mesh document (`.csv` files are read as point clouds).
pub fn load_manifold(path: &Path) -> Result<LoadedManifold, IoError> {
    if path.extension().map(|e| e == "csv").unwrap_or(false) {
        return load_point_cloud_csv(path, None);
    }
    let text = std::fs::read_to_string(path)?;
    let doc: MeshDoc = serde_json::from_str(&text)?;
    if doc.version != MANIFOLD_FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion {
            found: doc.version,
            expected: MANIFOLD_FORMAT_VERSION,
        });
    }
    let mut flat = Vec::with_capacity(doc.vertices.len() * doc.d);
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.len() != doc.d {
            return Err(IoError::Parse {
                path: path.display().to_string(),
                line: 0,
                message: format!("vertex {i} has {} coordinates, expected {}", v.len(), doc.d),
            });
        }
        flat.extend_from_slice(v);
    }
    let manifold = SimplicialManifold::new(doc.d, doc.k, flat, doc.simplices)?;
    let values = doc
        .values
        .unwrap_or_else(|| vec![0.0; manifold.vertex_count()]);
    let mf = ManifoldFunction::new(manifold, values)?;
    let report = validate_manifold(&mf.manifold);
    if report.has_fatal() {
        return Err(IoError::FatalValidation(report.summary()));
    }
    Ok(LoadedManifold {
        mf,
        name: doc.name,
        report,
    })
}

/// CSV point cloud: one `x1,...,xd[,value]` row per point, loaded as a
/// k = 0 manifold function.  With `dim = None`, rows of two or more
/// columns treat the last column as the value.
pub fn load_point_cloud_csv(path: &Path, dim: Option<usize>) -> Result<LoadedManifold, IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut d = dim;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| IoError::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        let d_here = *d.get_or_insert_with(|| if fields.len() >= 2 { fields.len() - 1 } else { 1 });
        if fields.len() != d_here && fields.len() != d_here + 1 {
            return Err(IoError::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                message: format!(
                    "expected {d_here} or {} columns, found {}",
                    d_here + 1,
                    fields.len()
                ),
            });
        }
        points.extend_from_slice(&fields[..d_here]);
        values.push(if fields.len() > d_here { fields[d_here] } else { 0.0 });
    }
    let d = d.unwrap_or(1);
    if points.is_empty() {
        return Err(IoError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: "point cloud is empty".into(),
        });
    }
    let count = points.len() / d;
    let simplices = (0..count).map(|i| vec![i]).collect();
    let manifold = SimplicialManifold::new(d, 0, points, simplices)?;
    let mf = ManifoldFunction::new(manifold, values)?;
    let report = validate_manifold(&mf.manifold);
    if report.has_fatal() {
        return Err(IoError::FatalValidation(report.summary()));
    }
    Ok(LoadedManifold {
        mf,
        name: None,
        report,
    })
}
