use std::fmt::Write;

use pwe_core::controller::{AirPath, Objective, Status, TileCommand};
use pwe_core::emcompiler::Bits;
use pwe_core::geometry::{TileId, WallId};
use pwe_core::propagation::EmFunction;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub max_bounces: usize,
    pub rays: usize,
    pub seed: u64,
    pub budget: u64,
}

/// Simulated reception at an objective's destination. Powers are `None`
/// when nothing arrives (minus infinity dBm).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reception {
    pub path_count: usize,
    pub coherent_dbm: Option<f64>,
    pub incoherent_dbm: Option<f64>,
    pub rms_delay_spread_s: f64,
    /// Power of the simulated path whose hops equal the air path's tiles.
    pub matched_path_power_dbm: Option<f64>,
    /// Per-path phase offsets applied before the coherent sum (LINK_OPTIMIZE).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_offsets: Option<Vec<f64>>,
    pub pdp_csv: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveReport {
    pub label: String,
    pub objective: Objective,
    pub status: Status,
    pub rerouted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<AirPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_power_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub absorbed_tiles: Vec<TileId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub received: Option<Reception>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileState {
    pub tile_id: TileId,
    pub wall_id: WallId,
    #[serde(rename = "fn")]
    pub function: EmFunction,
    pub bits: Bits,
    pub quality: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectReport {
    pub wall_id: WallId,
    pub representative: TileId,
    pub tiles: Vec<TileId>,
    pub seq: u64,
    pub rounds: usize,
    pub acked: Vec<TileId>,
    pub complete: bool,
    pub trace: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario_hash: String,
    pub settings: RunSettings,
    pub objectives: Vec<ObjectiveReport>,
    /// Every tile not in its default SPECULAR state.
    pub tiles: Vec<TileState>,
    pub command_count: usize,
    pub compile_invocations: usize,
    pub commands: Vec<TileCommand>,
    pub tilenet: Vec<ObjectReport>,
    pub frame_traces: Vec<String>,
    pub wall_clock_s: f64,
}

impl RunReport {
    pub fn any_no_path(&self) -> bool {
        self.objectives.iter().any(|o| o.status == Status::NoPath)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn dbm(v: Option<f64>) -> String {
    v.map_or_else(|| "-inf".to_string(), |x| format!("{x:.2}"))
}

/// Human-readable summary of a report.
pub fn pretty(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}", r.scenario_hash);
    let s = &r.settings;
    let _ = writeln!(out, "max_bounces={} rays={} seed={} budget={}", s.max_bounces, s.rays, s.seed, s.budget);
    let _ = writeln!(out, "objectives: {}", r.objectives.len());
    for o in &r.objectives {
        let status = match o.status {
            Status::Satisfied => "SATISFIED",
            Status::NoPath => "NO_PATH",
        };
        let _ = write!(out, "  {:<32} {}", o.label, status);
        if o.rerouted {
            out.push_str(" (rerouted)");
        }
        out.push('\n');
        if let Some(p) = &o.path {
            let nodes: Vec<String> = p
                .nodes
                .iter()
                .map(|n| match n {
                    pwe_core::controller::NodeRef::Tile(t) => format!("#{t}"),
                    pwe_core::controller::NodeRef::Device(d) => d.clone(),
                })
                .collect();
            let _ = writeln!(out, "    path {}  loss {:.2} dB  length {:.3} m", nodes.join(" -> "), p.total_loss_db, p.total_length());
        }
        if let Some(p) = o.predicted_power_dbm {
            let _ = writeln!(out, "    predicted {p:.2} dBm");
        }
        if let Some(rx) = &o.received {
            let _ = writeln!(
                out,
                "    received coherent {} dBm, incoherent {} dBm, {} paths, delay spread {:.3} ns",
                dbm(rx.coherent_dbm),
                dbm(rx.incoherent_dbm),
                rx.path_count,
                rx.rms_delay_spread_s * 1e9
            );
        }
        if !o.absorbed_tiles.is_empty() {
            let _ = writeln!(out, "    absorbing tiles {:?}", o.absorbed_tiles);
        }
    }
    let _ = writeln!(out, "configured tiles: {}", r.tiles.len());
    for t in &r.tiles {
        let _ = writeln!(out, "  #{:<4} wall {:<3} {:<8} q={:.3} {}", t.tile_id, t.wall_id, t.function.kind_name(), t.quality, t.bits);
    }
    let _ = writeln!(out, "commands: {}  compiler runs: {}", r.command_count, r.compile_invocations);
    for n in &r.tilenet {
        let _ = writeln!(
            out,
            "  wall {} rep #{} seq {} rounds {} acked {}/{}{}",
            n.wall_id,
            n.representative,
            n.seq,
            n.rounds,
            n.acked.len(),
            n.tiles.len(),
            if n.complete { "" } else { " INCOMPLETE" }
        );
    }
    let _ = writeln!(out, "wall clock {:.3} s", r.wall_clock_s);
    out
}
