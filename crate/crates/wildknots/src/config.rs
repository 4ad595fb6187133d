//! Structured configuration (reference encoding: JSON) for necklace runs.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conformal::Ball;
use crate::necklace::{auto_place_beads, Necklace, NecklaceError, ThreadSample};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad config value: {0}")]
    BadValue(String),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

/// Central tolerance defaults: geometry predicates 1e-9, fiber continuity
/// 1e-6, dimension-estimate convergence 1e-2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "Tolerances::default_geometry")]
    pub geometry: f64,
    #[serde(default = "Tolerances::default_fiber_continuity")]
    pub fiber_continuity: f64,
    #[serde(default = "Tolerances::default_dimension_convergence")]
    pub dimension_convergence: f64,
}

impl Tolerances {
    fn default_geometry() -> f64 {
        1e-9
    }
    fn default_fiber_continuity() -> f64 {
        1e-6
    }
    fn default_dimension_convergence() -> f64 {
        1e-2
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geometry: Self::default_geometry(),
            fiber_continuity: Self::default_fiber_continuity(),
            dimension_convergence: Self::default_dimension_convergence(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThreadSpec {
    /// `"unit_circle"`
    Named(String),
    /// explicit closed polyline, one vertex per entry
    Points(Vec<Vec<f64>>),
}

impl Default for ThreadSpec {
    fn default() -> Self {
        ThreadSpec::Named("unit_circle".into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BeadEntry {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BeadSpec {
    /// `"auto"`: centers at `bead_params` (or equally spaced), the largest
    /// radius passing validation shrunk by 0.9
    Named(String),
    List(Vec<BeadEntry>),
}

impl Default for BeadSpec {
    fn default() -> Self {
        BeadSpec::Named("auto".into())
    }
}

fn default_dim() -> usize {
    3
}
fn default_k() -> usize {
    3
}
fn default_samples() -> usize {
    240
}
fn default_reach() -> f64 {
    1.0
}
fn default_tolerance() -> f64 {
    1e-9
}
fn default_depth() -> usize {
    4
}

/// Input configuration for necklace commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NecklaceConfig {
    #[serde(default = "default_dim")]
    pub ambient_dim: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub thread: ThreadSpec,
    #[serde(default = "default_samples")]
    pub thread_samples: usize,
    #[serde(default)]
    pub beads: BeadSpec,
    /// thread parameters of auto-placed bead centers
    #[serde(default)]
    pub bead_params: Option<Vec<f64>>,
    /// local thread reach bound used by auto placement
    #[serde(default = "default_reach")]
    pub reach: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// seed for any randomized downstream step; commands here are
    /// deterministic and carry it through for reproducibility
    #[serde(default)]
    pub seed: u64,
}

impl Default for NecklaceConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields defaulted")
    }
}

impl NecklaceConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn build_thread(&self) -> Result<ThreadSample, ConfigError> {
        match &self.thread {
            ThreadSpec::Named(name) if name == "unit_circle" => {
                if self.ambient_dim != 3 {
                    return Err(ConfigError::BadValue(format!(
                        "unit_circle thread needs ambient_dim 3, got {}",
                        self.ambient_dim
                    )));
                }
                Ok(ThreadSample::unit_circle(self.thread_samples))
            }
            ThreadSpec::Named(other) => Err(ConfigError::BadValue(format!(
                "unknown thread {other:?} (expected \"unit_circle\" or a vertex list)"
            ))),
            ThreadSpec::Points(points) => {
                if points.iter().any(|p| p.len() != self.ambient_dim) {
                    return Err(ConfigError::BadValue(
                        "thread vertices disagree with ambient_dim".into(),
                    ));
                }
                Ok(ThreadSample::new(points.clone(), None)?)
            }
        }
    }

    /// Thread and candidate bead balls, without constructing the necklace;
    /// lets callers validate configurations the constructor would reject.
    pub fn build_parts(&self) -> Result<(ThreadSample, Vec<Ball>), ConfigError> {
        let thread = self.build_thread()?;
        let balls = self.build_balls(&thread)?;
        Ok((thread, balls))
    }

    /// Assemble the stage-0 necklace described by the config.
    pub fn build(&self) -> Result<Necklace, ConfigError> {
        let (thread, balls) = self.build_parts()?;
        Ok(Necklace::stage0(Some(thread), balls, self.tolerance)?)
    }

    fn build_balls(&self, thread: &ThreadSample) -> Result<Vec<Ball>, ConfigError> {
        let balls: Vec<Ball> = match &self.beads {
            BeadSpec::Named(name) if name == "auto" => {
                let params: Vec<f64> = match &self.bead_params {
                    Some(p) => p.clone(),
                    None => (0..self.k).map(|j| j as f64 / self.k as f64).collect(),
                };
                if params.len() != self.k {
                    return Err(ConfigError::BadValue(format!(
                        "bead_params has {} entries for k = {}",
                        params.len(),
                        self.k
                    )));
                }
                auto_place_beads(thread, &params, self.reach, self.tolerance)?
            }
            BeadSpec::Named(other) => {
                return Err(ConfigError::BadValue(format!(
                    "unknown beads {other:?} (expected \"auto\" or a list)"
                )))
            }
            BeadSpec::List(entries) => {
                if entries.len() != self.k {
                    return Err(ConfigError::BadValue(format!(
                        "{} beads listed for k = {}",
                        entries.len(),
                        self.k
                    )));
                }
                entries
                    .iter()
                    .map(|e| Ball::new(e.center.clone(), e.radius))
                    .collect::<Result<_, _>>()
                    .map_err(NecklaceError::from)?
            }
        };
        Ok(balls)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_a_valid_necklace() {
        let cfg = NecklaceConfig::default();
        assert_eq!(cfg.k, 3);
        assert_eq!(cfg.tolerance, 1e-9);
        let neck = cfg.build().unwrap();
        assert_eq!(neck.k(), 3);
        assert!(neck.validate(cfg.tolerance).passed());
    }

    #[test]
    fn explicit_beads_roundtrip() {
        let json = r#"{
            "k": 3,
            "thread": "unit_circle",
            "thread_samples": 120,
            "beads": [
                {"center": [1.0, 0.0, 0.0], "radius": 0.5},
                {"center": [-0.5, 0.8660254037844386, 0.0], "radius": 0.5},
                {"center": [-0.5, -0.8660254037844387, 0.0], "radius": 0.5}
            ],
            "depth": 2
        }"#;
        let cfg: NecklaceConfig = serde_json::from_str(json).unwrap();
        let neck = cfg.build().unwrap();
        assert_eq!(neck.beads().len(), 3);
        assert!((neck.max_radius() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mismatched_bead_count_is_rejected() {
        let json = r#"{
            "k": 4,
            "beads": [{"center": [1.0, 0.0, 0.0], "radius": 0.5}]
        }"#;
        let cfg: NecklaceConfig = serde_json::from_str(json).unwrap();
        assert!(matches!(cfg.build(), Err(ConfigError::BadValue(_))));
    }

    #[test]
    fn tolerances_default_as_documented() {
        let t = Tolerances::default();
        assert_eq!(t.geometry, 1e-9);
        assert_eq!(t.fiber_continuity, 1e-6);
        assert_eq!(t.dimension_convergence, 1e-2);
    }
}
