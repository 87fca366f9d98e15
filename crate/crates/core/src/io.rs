//! JSON file formats: spaces, maps, homotopy witnesses, and result
//! payloads. Scalars travel as "p/q" strings (integers allowed); spaces
//! inside map files may be inline or a path to another file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::DistanceResult;
use crate::homotopy::Homotopy;
use crate::maps::{LipschitzMap, MapError, ScaleParams};
use crate::scalar::Scalar;
use crate::space::{FiniteMetricSpace, SpaceError, SpaceRef};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub metric: Vec<Vec<Scalar>>,
}

impl SpaceFile {
    pub fn from_space(space: &SpaceRef) -> SpaceFile {
        SpaceFile {
            points: space.labels().to_vec(),
            metric: space.matrix(),
        }
    }

    pub fn build(self, name: &str) -> Result<SpaceRef, SpaceError> {
        FiniteMetricSpace::build(name, self.points, self.metric)
    }
}

/// A space either written out in place or referenced by file path
/// (relative paths resolve against the referencing file).
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSource {
    Path(String),
    Inline(SpaceFile),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub domain: SpaceSource,
    pub codomain: SpaceSource,
    pub values: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessFile {
    pub s: Scalar,
    pub r: Scalar,
    pub domain: SpaceSource,
    pub codomain: SpaceSource,
    pub frames: Vec<BTreeMap<String, String>>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_space(path: &Path) -> Result<SpaceRef, IoError> {
    let file: SpaceFile = read_json(path)?;
    Ok(file.build(&path.display().to_string())?)
}

fn resolve_space(source: &SpaceSource, base: &Path) -> Result<SpaceRef, IoError> {
    match source {
        SpaceSource::Path(rel) => {
            let path = base.parent().unwrap_or(Path::new(".")).join(rel);
            load_space(&path)
        }
        SpaceSource::Inline(file) => {
            let rebuilt = SpaceFile {
                points: file.points.clone(),
                metric: file.metric.clone(),
            };
            Ok(rebuilt.build("inline")?)
        }
    }
}

fn values_by_label(
    domain: &SpaceRef,
    codomain: &SpaceRef,
    values: &BTreeMap<String, String>,
) -> Result<Vec<usize>, IoError> {
    let mut out = Vec::with_capacity(domain.len());
    for i in 0..domain.len() {
        let label = domain.label(i);
        let image = values
            .get(label)
            .ok_or_else(|| IoError::UnknownLabel(label.to_string()))?;
        let index = codomain
            .index_of(image)
            .ok_or_else(|| IoError::UnknownLabel(image.clone()))?;
        out.push(index);
    }
    Ok(out)
}

pub fn load_map(path: &Path) -> Result<LipschitzMap, IoError> {
    let file: MapFile = read_json(path)?;
    let domain = resolve_space(&file.domain, path)?;
    let codomain = resolve_space(&file.codomain, path)?;
    let values = values_by_label(&domain, &codomain, &file.values)?;
    Ok(LipschitzMap::new(&domain, &codomain, values)?)
}

pub fn map_to_file(map: &LipschitzMap) -> MapFile {
    MapFile {
        domain: SpaceSource::Inline(SpaceFile::from_space(&map.domain)),
        codomain: SpaceSource::Inline(SpaceFile::from_space(&map.codomain)),
        values: map
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                (
                    map.domain.label(i).to_string(),
                    map.codomain.label(v).to_string(),
                )
            })
            .collect(),
    }
}

pub fn witness_to_file(h: &Homotopy) -> WitnessFile {
    let domain = &h.first().domain;
    let codomain = &h.first().codomain;
    WitnessFile {
        s: h.params.s,
        r: h.params.r,
        domain: SpaceSource::Inline(SpaceFile::from_space(domain)),
        codomain: SpaceSource::Inline(SpaceFile::from_space(codomain)),
        frames: h
            .frames
            .iter()
            .map(|frame| {
                frame
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        (
                            domain.label(i).to_string(),
                            codomain.label(v).to_string(),
                        )
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn load_witness(path: &Path) -> Result<(Homotopy, ScaleParams), IoError> {
    let file: WitnessFile = read_json(path)?;
    let domain = resolve_space(&file.domain, path)?;
    let codomain = resolve_space(&file.codomain, path)?;
    let params = ScaleParams::new(file.s, file.r).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut frames = Vec::with_capacity(file.frames.len());
    for frame in &file.frames {
        let values = values_by_label(&domain, &codomain, frame)?;
        frames.push(LipschitzMap::new(&domain, &codomain, values)?);
    }
    if frames.is_empty() {
        return Err(IoError::Parse {
            path: path.to_path_buf(),
            message: "witness has no frames".to_string(),
        });
    }
    Ok((Homotopy { frames, params }, params))
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Machine-readable distance payload: value or bounds, the cover by label
/// lists, and the witnesses inline.
#[derive(Debug, Serialize)]
pub struct DistancePayload {
    pub s: Scalar,
    pub r: Scalar,
    pub value: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WitnessFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn distance_payload(params: ScaleParams, result: &DistanceResult) -> DistancePayload {
    match result {
        DistanceResult::Finite { k, cover, witnesses } => DistancePayload {
            s: params.s,
            r: params.r,
            value: serde_json::json!(k),
            cover: Some(cover.iter().map(|c| c.labels()).collect()),
            witnesses: Some(witnesses.iter().map(witness_to_file).collect()),
            note: None,
        },
        DistanceResult::Infinite { bad_point, reason } => DistancePayload {
            s: params.s,
            r: params.r,
            value: serde_json::json!("inf"),
            cover: None,
            witnesses: None,
            note: Some(format!("point {bad_point}: {reason}")),
        },
        DistanceResult::Bounded { lower, upper, note } => DistancePayload {
            s: params.s,
            r: params.r,
            value: serde_json::json!(format!("{lower}..{upper}")),
            cover: None,
            witnesses: None,
            note: Some(note.clone()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;
    use crate::space::cycle_geodesic;

    #[test]
    fn space_roundtrip_through_json() {
        let c4 = cycle_geodesic(4).unwrap();
        let dir = std::env::temp_dir().join("drht-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c4.json");
        save_json(&path, &SpaceFile::from_space(&c4)).unwrap();
        let loaded = load_space(&path).unwrap();
        assert_eq!(*loaded, *c4);
    }

    #[test]
    fn map_roundtrip_with_inline_spaces() {
        let c4 = cycle_geodesic(4).unwrap();
        let f = LipschitzMap::new(&c4, &c4, vec![1, 2, 3, 0]).unwrap();
        let dir = std::env::temp_dir().join("drht-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rot.json");
        save_json(&path, &map_to_file(&f)).unwrap();
        let loaded = load_map(&path).unwrap();
        assert_eq!(loaded.values(), f.values());
    }

    #[test]
    fn witness_roundtrip() {
        let c4 = cycle_geodesic(4).unwrap();
        let id = LipschitzMap::identity(&c4);
        let fold = LipschitzMap::new(&c4, &c4, vec![0, 1, 1, 0]).unwrap();
        let c0 = LipschitzMap::constant(&c4, &c4, 0).unwrap();
        let h = Homotopy {
            frames: vec![id.clone(), fold, c0.clone()],
            params: ScaleParams::new(parse_scalar("1").unwrap(), parse_scalar("1").unwrap())
                .unwrap(),
        };
        let dir = std::env::temp_dir().join("drht-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("witness.json");
        save_json(&path, &witness_to_file(&h)).unwrap();
        let (loaded, _) = load_witness(&path).unwrap();
        assert!(crate::homotopy::is_valid_homotopy(&loaded, &id, &c0));
    }
}
