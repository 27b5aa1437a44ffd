use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::StarBody;
use crate::error::{Error, Result};
use crate::integrate::{RuleKind, SphericalRule};

/// On-disk layout of a radial function sampled on a structured grid.
///
/// n = 2: `grid_shape = [N]`, values at angles `2πi/N`.
/// n = 3: `grid_shape = [rows, cols]`, row `i` at polar angle
/// `polar_nodes[i]` (ascending), column `j` at azimuth `2πj/cols`, values
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub dimension: usize,
    pub grid_shape: Vec<usize>,
    pub values: Vec<f64>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar_nodes: Option<Vec<f64>>,
}

/// A validated [`GridFile`] that can be turned into an interpolating body.
#[derive(Debug, Clone, PartialEq)]
pub struct GridBody {
    file: GridFile,
}

impl GridBody {
    pub fn new(file: GridFile) -> Result<Self> {
        let bad = |m: String| Err(Error::Parse(m));
        if let Some(v) = file.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return bad(format!("grid value {v} is not a finite nonnegative radius"));
        }
        match (file.dimension, file.grid_shape.as_slice()) {
            (2, [n]) => {
                if *n < 3 || file.values.len() != *n {
                    return bad(format!(
                        "planar grid needs N >= 3 values matching shape, got shape {n}, {} values",
                        file.values.len()
                    ));
                }
            }
            (3, [rows, cols]) => {
                if *rows < 1 || *cols < 3 || file.values.len() != rows * cols {
                    return bad(format!(
                        "spatial grid shape {rows}x{cols} does not match {} values",
                        file.values.len()
                    ));
                }
                let Some(polar) = &file.polar_nodes else {
                    return bad("spatial grid needs polar_nodes".to_string());
                };
                let ordered = polar.windows(2).all(|w| w[0] < w[1]);
                let inside = polar.iter().all(|t| *t > 0.0 && *t < std::f64::consts::PI);
                if polar.len() != *rows || !ordered || !inside {
                    return bad("polar_nodes must be ascending in (0, π), one per row".to_string());
                }
            }
            (d, shape) => return bad(format!("unsupported grid: dimension {d}, shape {shape:?}")),
        }
        Ok(Self { file })
    }

    /// Samples `body` at the nodes of a trapezoid or product rule.
    pub fn sample(body: &StarBody, rule: &SphericalRule) -> Result<Self> {
        if body.dimension() != rule.dimension() {
            return Err(Error::Dimension(format!(
                "body dimension {} differs from rule dimension {}",
                body.dimension(),
                rule.dimension()
            )));
        }
        let values: Vec<f64> = rule.nodes().iter().map(|u| body.radial(u)).collect();
        let file = match rule.kind() {
            RuleKind::Trapezoid2d => GridFile {
                dimension: 2,
                grid_shape: vec![rule.resolution()],
                values,
                label: body.label().to_string(),
                polar_nodes: None,
            },
            RuleKind::Product3d => GridFile {
                dimension: 3,
                grid_shape: vec![rule.resolution(), 2 * rule.resolution()],
                values,
                label: body.label().to_string(),
                polar_nodes: rule.polar_angles().map(|p| p.to_vec()),
            },
            RuleKind::MonteCarlo => return Err(Error::Domain("grids need a structured rule".to_string())),
        };
        Self::new(file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let file: GridFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("malformed grid file {}: {e}", path.display())))?;
        Self::new(file)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.file)
            .map_err(|e| Error::Parse(format!("cannot serialize grid: {e}")))?;
        std::fs::write(path.as_ref(), text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.as_ref().display())))
    }

    pub fn file(&self) -> &GridFile {
        &self.file
    }

    /// Interpolating body: linear in angle (n = 2), bilinear in
    /// (polar, azimuth) with pole values equal to the mean of the extreme rows (n = 3).
    pub fn to_star_body(&self) -> StarBody {
        let values: Arc<Vec<f64>> = Arc::new(self.file.values.clone());
        let lower = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let upper = values.iter().cloned().fold(0.0, f64::max);
        let label = self.file.label.clone();
        let body = if self.file.dimension == 2 {
            StarBody::from_fn(2, label, lower, upper, true, move |u| planar(&values, u))
        } else {
            let cols = self.file.grid_shape[1];
            let polar = Arc::new(self.file.polar_nodes.clone().unwrap_or_default());
            let rows = polar.len();
            let north = values[..cols].iter().sum::<f64>() / cols as f64;
            let south = values[(rows - 1) * cols..].iter().sum::<f64>() / cols as f64;
            StarBody::from_fn(3, label, lower, upper, true, move |u| spatial(&values, &polar, cols, north, south, u))
        };
        body.expect("validated grid has consistent bounds")
    }
}

fn periodic_lerp(row: &[f64], angle: f64) -> f64 {
    let n = row.len();
    let step = std::f64::consts::TAU / n as f64;
    let mut a = angle.rem_euclid(std::f64::consts::TAU) / step;
    if a >= n as f64 {
        a = 0.0;
    }
    let i = a.floor() as usize;
    let t = a - i as f64;
    let j = (i + 1) % n;
    (1.0 - t) * row[i.min(n - 1)] + t * row[j]
}

fn planar(values: &[f64], u: &[f64]) -> f64 {
    periodic_lerp(values, u[1].atan2(u[0]))
}

fn spatial(values: &[f64], polar: &[f64], cols: usize, north: f64, south: f64, u: &[f64]) -> f64 {
    let theta = u[2].clamp(-1.0, 1.0).acos();
    let phi = u[1].atan2(u[0]);
    let row_value = |i: usize| periodic_lerp(&values[i * cols..(i + 1) * cols], phi);
    let rows = polar.len();
    if theta <= polar[0] {
        let t = theta / polar[0];
        return (1.0 - t) * north + t * row_value(0);
    }
    if theta >= polar[rows - 1] {
        let t = (theta - polar[rows - 1]) / (std::f64::consts::PI - polar[rows - 1]);
        return (1.0 - t) * row_value(rows - 1) + t * south;
    }
    let i = polar.partition_point(|p| *p <= theta) - 1;
    let t = (theta - polar[i]) / (polar[i + 1] - polar[i]);
    (1.0 - t) * row_value(i) + t * row_value(i + 1)
}
