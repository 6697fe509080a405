//! Flag files, run configuration and OBJ export.
//!
//! A flag file is a JSON manifest
//!
//! ```json
//! {"version": 1, "N_u": 64, "N_v": 33, "equator_row": 16,
//!  "data_layout": "inline", "data": [[x, y, z], ...]}
//! ```
//!
//! with the samples row-major (row `j` = colatitude index, column `i` =
//! longitude index). With `"data_layout": "binary"` the samples live in a sidecar
//! file named by `"data_file"` (relative to the manifest) holding little-endian
//! `f64` triples in the same order.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{FlagError, Result};
use crate::geom::ParameterizedFlag;
use crate::linalg::Vec3;
use crate::metrics::{CurveElasticWeights, FlagWeights, MetricParams, SurfaceElasticWeights};
use crate::shapedist::StraightenOptions;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataLayout {
    Inline,
    Binary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagManifest {
    pub version: u32,
    #[serde(rename = "N_u")]
    pub n_u: usize,
    #[serde(rename = "N_v")]
    pub n_v: usize,
    pub equator_row: usize,
    pub data_layout: DataLayout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_file: Option<String>,
}

fn sidecar_path(manifest: &Path) -> PathBuf {
    manifest.with_extension("bin")
}

/// Writes `flag` to `path`; the binary layout also writes `path` with extension `.bin`.
pub fn write_flag(path: &Path, flag: &ParameterizedFlag<f64>, layout: DataLayout) -> Result<()> {
    let mut manifest = FlagManifest {
        version: FORMAT_VERSION,
        n_u: flag.n_u(),
        n_v: flag.n_v(),
        equator_row: flag.equator_row(),
        data_layout: layout,
        data: None,
        data_file: None,
    };
    match layout {
        DataLayout::Inline => {
            manifest.data = Some(flag.points().iter().map(|p| p.to_array()).collect());
        }
        DataLayout::Binary => {
            let side = sidecar_path(path);
            let mut bytes = Vec::with_capacity(flag.points().len() * 24);
            for p in flag.points() {
                for x in p.to_array() {
                    bytes.extend_from_slice(&x.to_le_bytes());
                }
            }
            fs::write(&side, bytes)?;
            manifest.data_file = Some(
                side.file_name()
                    .and_then(|s| s.to_str())
                    .ok_or_else(|| FlagError::Format(format!("bad sidecar name {}", side.display())))?
                    .to_owned(),
            );
        }
    }
    let file = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer(file, &manifest)?;
    Ok(())
}

fn decode_binary(bytes: &[u8], expected: usize) -> Result<Vec<Vec3<f64>>> {
    if bytes.len() != expected * 24 {
        return Err(FlagError::Format(format!(
            "binary payload holds {} bytes, expected {} for {expected} samples",
            bytes.len(),
            expected * 24
        )));
    }
    Ok(bytes
        .chunks_exact(24)
        .map(|c| {
            let f = |k: usize| f64::from_le_bytes(c[8 * k..8 * k + 8].try_into().expect("8-byte chunk"));
            Vec3::new(f(0), f(1), f(2))
        })
        .collect())
}

/// Reads and validates a flag file.
pub fn read_flag(path: &Path) -> Result<ParameterizedFlag<f64>> {
    let manifest: FlagManifest = serde_json::from_slice(&fs::read(path)?)?;
    if manifest.version != FORMAT_VERSION {
        return Err(FlagError::Format(format!(
            "unsupported version {} (expected {FORMAT_VERSION})",
            manifest.version
        )));
    }
    let expected = manifest.n_u * manifest.n_v;
    let points = match manifest.data_layout {
        DataLayout::Inline => {
            let data = manifest
                .data
                .ok_or_else(|| FlagError::Format("inline layout without `data`".into()))?;
            if data.len() != expected {
                return Err(FlagError::Format(format!(
                    "`data` holds {} samples, expected {expected}",
                    data.len()
                )));
            }
            data.into_iter().map(Vec3::from_array).collect()
        }
        DataLayout::Binary => {
            let name = manifest
                .data_file
                .ok_or_else(|| FlagError::Format("binary layout without `data_file`".into()))?;
            let side = path.parent().unwrap_or(Path::new(".")).join(name);
            decode_binary(&fs::read(side)?, expected)?
        }
    };
    ParameterizedFlag::new(points, manifest.n_u, manifest.n_v, manifest.equator_row)
}

/// Raw elastic weights `(a, b)` and `(a′, b′, c′)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawWeights {
    pub curve: CurveElasticWeights<f64>,
    pub surface: SurfaceElasticWeights<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    /// Directory for per-frame OBJ files of the straightened path.
    pub frames: Option<PathBuf>,
    /// File receiving the JSON report in addition to stdout.
    pub report: Option<PathBuf>,
}

/// Settings shared by the CLI subcommands. Every field is optional in the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Six flag weights; all ones when neither these nor `raw_weights` are given.
    pub weights: Option<FlagWeights<f64>>,
    /// Raw elastic weights, mapped to flag weights when `weights` is absent.
    pub raw_weights: Option<RawWeights>,
    /// Grid `[N_u, N_v]` for synthesized shapes.
    pub grid: [usize; 2],
    /// Number of time steps `K` of a path.
    pub steps: usize,
    pub optimizer: StraightenOptions,
    pub outputs: OutputPaths,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            weights: None,
            raw_weights: None,
            grid: [64, 33],
            steps: 16,
            optimizer: StraightenOptions::default(),
            outputs: OutputPaths::default(),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }

    pub fn metric_params(&self) -> Result<MetricParams<f64>> {
        let params = match (self.weights, self.raw_weights) {
            (Some(w), raw) => MetricParams {
                flag: w,
                curve: raw.map(|r| r.curve),
                surface: raw.map(|r| r.surface),
            },
            (None, Some(r)) => MetricParams::from_elastic(r.curve, r.surface),
            (None, None) => MetricParams::default(),
        };
        params.flag.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(FlagError::InvalidParameter("steps must be at least 1".into()));
        }
        self.optimizer.validate()?;
        self.metric_params().map(|_| ())
    }
}

/// Writes the grid as an OBJ surface of quads (pole rows included).
pub fn write_obj(path: &Path, flag: &ParameterizedFlag<f64>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for p in flag.points() {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z)?;
    }
    let n_u = flag.n_u();
    let idx = |i: usize, j: usize| j * n_u + (i % n_u) + 1;
    for j in 0..flag.n_v() - 1 {
        for i in 0..n_u {
            writeln!(
                out,
                "f {} {} {} {}",
                idx(i, j),
                idx(i, j + 1),
                idx(i + 1, j + 1),
                idx(i + 1, j)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes the marked curve as a closed OBJ polyline.
pub fn write_curve_obj(path: &Path, flag: &ParameterizedFlag<f64>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for p in flag.curve_points() {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z)?;
    }
    let line: Vec<String> = (1..=flag.n_u())
        .chain(std::iter::once(1))
        .map(|k| k.to_string())
        .collect();
    writeln!(out, "l {}", line.join(" "))?;
    out.flush()?;
    Ok(())
}

/// Writes `frame_000.obj`, `frame_000_curve.obj`, … for every flag into `dir`.
pub fn export_frames(dir: &Path, flags: &[ParameterizedFlag<f64>]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(2 * flags.len());
    for (k, f) in flags.iter().enumerate() {
        let surface = dir.join(format!("frame_{k:03}.obj"));
        let curve = dir.join(format!("frame_{k:03}_curve.obj"));
        write_obj(&surface, f)?;
        write_curve_obj(&curve, f)?;
        written.push(surface);
        written.push(curve);
    }
    Ok(written)
}
