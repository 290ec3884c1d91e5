//! JSON input files for `reconstruct`.

use std::fs::File;
use std::path::Path;

use lorentz_shape::io::read_table;
use lorentz_shape::{Error, LorentzVector, ReconstructionSpec, Result, ZFunction};
use serde::Deserialize;

/// One `zᵢ(σ)`.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ZEntry {
    Const(f64),
    /// `c/σ`
    Reciprocal(f64),
}

/// ```json
/// {
///   "dim": 3,
///   "z": [{"const": 0.0}, {"const": 1.0}],
///   "x0": [0.5, 0.0, 0.0],
///   "frame": [[0, -0.7071, 0.7071], [-1, 0, 0], [0, 0.7071, 0.7071]],
///   "sigma_range": [0.0, 1.0]
/// }
/// ```
///
/// `z_table` may replace `z`: a CSV path, relative to the spec file, with
/// header `sigma,z1,…,z{n-1}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructFile {
    pub dim: usize,
    #[serde(default)]
    pub z: Option<Vec<ZEntry>>,
    #[serde(default)]
    pub z_table: Option<String>,
    pub x0: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
    pub sigma_range: (f64, f64),
    #[serde(default)]
    pub frame_sigma: Option<f64>,
    #[serde(default)]
    pub initial_kappa1: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path)?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn z_from_table(path: &Path, n: usize) -> Result<Vec<ZFunction>> {
    let (header, mut cols) = read_table(File::open(path)?)?;
    let want: Vec<String> = std::iter::once("sigma".to_string()).chain((1..n).map(|i| format!("z{i}"))).collect();
    if header != want {
        return Err(Error::Parse(format!("{}: expected header {}", path.display(), want.join(","))));
    }
    let sigma = cols.remove(0);
    cols.into_iter().map(|v| ZFunction::table(sigma.clone(), v)).collect()
}

impl ReconstructFile {
    /// `base` is the directory of the spec file.
    pub fn into_spec(self, base: &Path) -> Result<ReconstructionSpec> {
        let n = self.dim;
        let z = match (self.z, self.z_table) {
            (Some(z), None) => z
                .into_iter()
                .map(|e| match e {
                    ZEntry::Const(c) => ZFunction::Constant(c),
                    ZEntry::Reciprocal(c) => ZFunction::Reciprocal(c),
                })
                .collect(),
            (None, Some(t)) => z_from_table(&base.join(t), n)?,
            _ => return Err(Error::InvalidInput("give exactly one of z and z_table".into())),
        };
        if z.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, found: z.len() });
        }
        let vec = |x: Vec<f64>| -> Result<LorentzVector> {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.len() });
            }
            LorentzVector::new(x)
        };
        let frame = self.frame.into_iter().map(vec).collect::<Result<Vec<_>>>()?;
        let mut spec = ReconstructionSpec::new(z, vec(self.x0)?, frame, self.sigma_range);
        if let Some(s) = self.frame_sigma {
            spec = spec.with_frame_sigma(s);
        }
        if let Some(k) = self.initial_kappa1 {
            spec = spec.with_initial_kappa1(k);
        }
        if let Some(h) = self.step {
            spec = spec.with_step(h);
        }
        Ok(spec)
    }
}
