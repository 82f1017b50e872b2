//! scenario -> control step -> tile network -> propagation -> report

use std::collections::BTreeMap;

use anyhow::Result;
use pwe_core::controller::{objective_tx_power, Controller, ControllerSettings, ObjectiveKind, ObjectiveOutcome, TileCommand};
use pwe_core::emcompiler::{LookupTable, TileModel};
use pwe_core::propagation::{
    align_phases, launch_with, pdp, received_power, received_power_with_offsets, rms_delay_spread, PropPath, TileConfig,
};
use pwe_core::scenario::Scenario;
use pwe_core::tilenet::{build_networks, Payload};

use crate::render::render_svg;
use crate::report::{ObjectReport, ObjectiveReport, Reception, RunReport, RunSettings, TileState};

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub max_bounces: usize,
    pub rays: usize,
    pub seed: u64,
    pub budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        let c = ControllerSettings::default();
        Self { max_bounces: c.max_bounces, rays: c.n_rays, seed: c.seed, budget: c.budget }
    }
}

/// Everything a run produces, not yet written anywhere.
pub struct Artifacts {
    pub report: RunReport,
    /// Output files by name, the report included.
    pub files: Vec<(String, Vec<u8>)>,
    /// Compiler table for the requested model after the run.
    pub table: Option<LookupTable>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn objective_report(outcome: ObjectiveOutcome) -> ObjectiveReport {
    ObjectiveReport {
        label: outcome.objective.label(),
        objective: outcome.objective,
        status: outcome.status,
        rerouted: outcome.rerouted,
        path: outcome.path,
        predicted_power_dbm: outcome.predicted_power_dbm,
        absorbed_tiles: outcome.absorbed_tiles,
        received: None,
    }
}

/// Run one control step on `scenario`. With `propagate`, also disseminate the
/// commands over the tile networks and simulate every routed objective.
///
/// `table` seeds the compiler cache; the returned table is the cache for
/// `table_model` (or the scenario's default model) after the run.
pub fn run(
    scenario: &Scenario,
    scenario_hash: String,
    opts: &Options,
    table: Option<LookupTable>,
    propagate: bool,
) -> Result<Artifacts> {
    let plan = &scenario.plan;
    let settings = ControllerSettings {
        max_bounces: opts.max_bounces,
        n_rays: opts.rays,
        budget: opts.budget,
        seed: opts.seed,
        ..ControllerSettings::default()
    };
    let table_model = table.as_ref().map(|t| t.model().clone()).unwrap_or_else(|| TileModel::new(plan.columns_per_tile(), plan.frequency()));
    let mut controller = Controller::new(settings);
    if let Some(t) = table {
        controller = controller.with_table(t);
    }

    let step = controller.control_step(plan, &scenario.objectives)?;
    let mut objectives: Vec<ObjectiveReport> = step.outcomes.into_iter().map(objective_report).collect();
    let tiles: Vec<TileState> = controller
        .assignments()
        .iter()
        .map(|(&id, a)| TileState {
            tile_id: id,
            wall_id: plan.tile(id).expect("assigned tile exists").wall_id,
            function: a.function.clone(),
            bits: a.config.bits.clone(),
            quality: a.config.quality,
        })
        .collect();

    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut tilenet = Vec::new();
    let mut frame_traces = Vec::new();
    if propagate {
        disseminate(scenario, &step.commands, &mut tilenet, &mut frame_traces, &mut files)?;
        simulate_objectives(scenario, &controller, opts, &mut objectives, &mut files);
    }

    let report = RunReport {
        scenario_hash,
        settings: RunSettings { max_bounces: opts.max_bounces, rays: opts.rays, seed: opts.seed, budget: opts.budget },
        objectives,
        tiles,
        command_count: step.commands.len(),
        compile_invocations: controller.compile_count(),
        commands: step.commands,
        tilenet,
        frame_traces,
        wall_clock_s: 0.0,
    };
    if propagate {
        files.push(("floorplan.svg".into(), render_svg(plan, &report).into_bytes()));
    }
    let table = controller.table(&table_model).cloned();
    Ok(Artifacts { report, files, table })
}

fn disseminate(
    scenario: &Scenario,
    commands: &[TileCommand],
    reports: &mut Vec<ObjectReport>,
    traces: &mut Vec<String>,
    files: &mut Vec<(String, Vec<u8>)>,
) -> Result<()> {
    let plan = &scenario.plan;
    let networks = build_networks(plan, scenario.tile_links.as_deref())?;
    for mut net in networks {
        let batch: Vec<TileCommand> = commands.iter().filter(|c| net.nodes.contains_key(&c.tile_id)).cloned().collect();
        let Some(seq) = batch.iter().map(|c| c.seq).max() else { continue };
        let targets: Vec<u32> = batch.iter().map(|c| c.tile_id).collect();
        let wall_id = plan.tile(net.representative).expect("network tile exists").wall_id;
        let delivery = net.broadcast(seq, batch);
        let acked = match delivery.ack.as_ref().map(|f| &f.payload) {
            Some(Payload::Acked { acked }) => acked.clone(),
            _ => Vec::new(),
        };
        let complete = targets.iter().all(|t| acked.contains(t));
        let name = format!("frames_wall{wall_id}.jsonl");
        let mut text = String::new();
        for f in &delivery.trace {
            text.push_str(&f.to_json_line());
            text.push('\n');
        }
        files.push((name.clone(), text.into_bytes()));
        traces.push(name.clone());
        reports.push(ObjectReport {
            wall_id,
            representative: net.representative,
            tiles: net.nodes.keys().copied().collect(),
            seq,
            rounds: delivery.rounds,
            acked,
            complete,
            trace: name,
        });
    }
    Ok(())
}

fn simulate_objectives(
    scenario: &Scenario,
    controller: &Controller,
    opts: &Options,
    objectives: &mut [ObjectiveReport],
    files: &mut Vec<(String, Vec<u8>)>,
) {
    let plan = &scenario.plan;
    let config: TileConfig = controller.assignments().iter().map(|(&id, a)| (id, a.function.clone())).collect();
    let mut launches: BTreeMap<String, Vec<PropPath>> = BTreeMap::new();
    for (i, o) in objectives.iter_mut().enumerate() {
        let (Some(path), Some(dst)) = (&o.path, o.objective.dst.clone()) else { continue };
        let tx = plan.device(&o.objective.src).expect("validated objective");
        let all = launches
            .entry(tx.id.clone())
            .or_insert_with(|| launch_with(tx, plan, &config, opts.max_bounces, opts.rays, &scenario.propagation));
        let paths: Vec<PropPath> = all.iter().filter(|p| p.rx == dst).cloned().collect();
        let power = objective_tx_power(plan, &o.objective);
        let (rx, offsets) = if o.objective.kind == ObjectiveKind::LinkOptimize {
            let offs = align_phases(&paths);
            (received_power_with_offsets(&paths, &offs, power), Some(offs))
        } else {
            (received_power(&paths, power), None)
        };
        let tiles = path.tiles();
        let matched = paths.iter().find(|p| p.hops == tiles).map(|p| power + 10.0 * p.gain.log10());
        let profile = pdp(&paths, power);
        let name = format!("pdp_{i}.csv");
        files.push((name.clone(), profile.to_csv().into_bytes()));
        o.received = Some(Reception {
            path_count: paths.len(),
            coherent_dbm: finite(rx.coherent_dbm),
            incoherent_dbm: finite(rx.incoherent_dbm),
            rms_delay_spread_s: rms_delay_spread(&profile),
            matched_path_power_dbm: matched.and_then(finite),
            phase_offsets: offsets,
            pdp_csv: name,
        });
    }
}
