//! Scenario files: floorplan, devices, objectives and optional overrides, as
//! JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::controller::{Objective, ObjectiveKind};
use crate::error::ScenarioError;
use crate::geometry::{Device, Floorplan, Point2D, TileId, Wall, DEFAULT_TILE_SIZE};
use crate::propagation::PropagationSettings;

pub const DEFAULT_COLUMNS_PER_TILE: u32 = 8;

fn default_tile_size() -> f64 {
    DEFAULT_TILE_SIZE
}

fn default_columns() -> u32 {
    DEFAULT_COLUMNS_PER_TILE
}

/// On-disk layout of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_tile_size")]
    pub tile_size: f64,
    #[serde(default = "default_columns")]
    pub columns_per_tile: u32,
    /// Any point inside the room; tile normals point toward it.
    pub interior_point: Point2D,
    pub walls: Vec<Wall>,
    pub devices: Vec<Device>,
    #[serde(default)]
    pub objectives: Vec<Objective>,
    /// Inter-tile network links. Defaults to a chain along each wall.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tile_links: Option<Vec<(TileId, TileId)>>,
    #[serde(default)]
    pub propagation: PropagationSettings,
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub plan: Floorplan,
    pub objectives: Vec<Objective>,
    pub tile_links: Option<Vec<(TileId, TileId)>>,
    pub propagation: PropagationSettings,
}

impl ScenarioFile {
    pub fn validate(self) -> Result<Scenario, ScenarioError> {
        let plan = Floorplan::new(self.walls, self.devices, self.tile_size, self.columns_per_tile, self.interior_point)?;

        for (i, obj) in self.objectives.iter().enumerate() {
            let at = |field: &str| format!("objectives[{i}].{field}");
            if plan.device(&obj.src).is_none() {
                return Err(ScenarioError::invalid(at("src"), format!("unknown device {:?}", obj.src)));
            }
            match (obj.kind, &obj.dst) {
                (ObjectiveKind::Block, Some(_)) => {
                    return Err(ScenarioError::invalid(at("dst"), "BLOCK takes no destination"));
                }
                (ObjectiveKind::Block, None) => {}
                (_, None) => return Err(ScenarioError::invalid(at("dst"), "missing destination")),
                (_, Some(d)) => {
                    if plan.device(d).is_none() {
                        return Err(ScenarioError::invalid(at("dst"), format!("unknown device {d:?}")));
                    }
                    if *d == obj.src {
                        return Err(ScenarioError::invalid(at("dst"), "source and destination coincide"));
                    }
                }
            }
            if !(obj.avoid_radius.is_finite() && obj.avoid_radius >= 0.0) {
                return Err(ScenarioError::invalid(at("avoid_radius"), "must be a non-negative finite number"));
            }
        }

        if let Some(links) = &self.tile_links {
            for (i, &(a, b)) in links.iter().enumerate() {
                for t in [a, b] {
                    if plan.tile(t).is_none() {
                        return Err(ScenarioError::invalid(format!("tile_links[{i}]"), format!("unknown tile {t}")));
                    }
                }
            }
        }

        let p = &self.propagation;
        let positive = [
            ("propagation.capture_radius", p.capture_radius),
            ("propagation.min_distance", p.min_distance),
        ];
        for (path, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ScenarioError::invalid(path, "must be a positive finite number"));
            }
        }
        if !(p.steer_window.is_finite() && p.steer_window >= 0.0) {
            return Err(ScenarioError::invalid("propagation.steer_window", "must be a non-negative finite number"));
        }
        if !p.reflection_phase.is_finite() {
            return Err(ScenarioError::invalid("propagation.reflection_phase", "must be finite"));
        }

        Ok(Scenario { plan, objectives: self.objectives, tile_links: self.tile_links, propagation: self.propagation })
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    file.validate()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    parse_scenario(&std::fs::read_to_string(path)?)
}
