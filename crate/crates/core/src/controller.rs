//! SDN-style environment controller.
//!
//! Tiles and devices form a visibility graph. Each objective is served by an
//! air path: a hop-capped route through tiles minimizing free-space loss on
//! the unfolded length plus the per-tile efficiency loss. Objectives are
//! processed by priority; a tile serves at most one objective per step.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::emcompiler::{compile, CompileRequest, LookupTable, SwitchConfig, TileModel, DEFAULT_BUDGET};
use crate::error::{CompileError, RouteError};
use crate::geometry::{line_of_sight_excluding, segment_distance, Device, Floorplan, Point2D, Role, Tile, TileId};
use crate::propagation::{
    first_hit_power, free_space_loss, linear_to_db, EmFunction, DEFAULT_RAYS, FOCUS_EFFICIENCY, STEER_EFFICIENCY,
};

pub const DEFAULT_MAX_BOUNCES: usize = 3;
pub const DEFAULT_AVOID_RADIUS: f64 = 1.0;
pub const DEFAULT_P_MIN_DBM: f64 = -90.0;

const LENGTH_TIE: f64 = 1e-9;
const LOSS_TIE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObjectiveKind {
    LinkOptimize,
    SecureLink,
    PowerTransfer,
    Block,
}

impl ObjectiveKind {
    /// Lower runs first.
    pub fn priority(self) -> u8 {
        match self {
            Self::Block => 0,
            Self::SecureLink => 1,
            Self::PowerTransfer => 2,
            Self::LinkOptimize => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::LinkOptimize => "LINK_OPTIMIZE",
            Self::SecureLink => "SECURE_LINK",
            Self::PowerTransfer => "POWER_TRANSFER",
            Self::Block => "BLOCK",
        }
    }
}

fn default_avoid_radius() -> f64 {
    DEFAULT_AVOID_RADIUS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub src: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dst: Option<String>,
    #[serde(default = "default_avoid_radius")]
    pub avoid_radius: f64,
}

impl Objective {
    pub fn link(kind: ObjectiveKind, src: &str, dst: &str) -> Self {
        Self { kind, src: src.into(), dst: Some(dst.into()), avoid_radius: DEFAULT_AVOID_RADIUS }
    }

    pub fn secure(src: &str, dst: &str, avoid_radius: f64) -> Self {
        Self { kind: ObjectiveKind::SecureLink, src: src.into(), dst: Some(dst.into()), avoid_radius }
    }

    pub fn block(device: &str) -> Self {
        Self { kind: ObjectiveKind::Block, src: device.into(), dst: None, avoid_radius: DEFAULT_AVOID_RADIUS }
    }

    pub fn label(&self) -> String {
        match &self.dst {
            Some(d) => format!("{}:{}->{}", self.kind.name(), self.src, d),
            None => format!("{}:{}", self.kind.name(), self.src),
        }
    }

    fn order_key(&self) -> (u8, &str, Option<&str>) {
        (self.kind.priority(), self.src.as_str(), self.dst.as_deref())
    }
}

/// Graph node identity: a device id or a tile id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeRef {
    Tile(TileId),
    Device(String),
}

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub id: NodeRef,
    pub position: Point2D,
    pub tile: Option<Tile>,
    pub role: Option<Role>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub to: usize,
    pub length: f64,
    /// Free-space loss plus, when leaving a tile, its steering loss.
    pub weight_db: f64,
}

/// Visibility graph over devices (first) and tiles.
#[derive(Clone, Debug)]
pub struct TileGraph {
    pub nodes: Vec<GraphNode>,
    pub adjacency: Vec<Vec<Edge>>,
    pub frequency: f64,
}

impl TileGraph {
    pub fn index_of(&self, id: &NodeRef) -> Option<usize> {
        self.nodes.iter().position(|n| &n.id == id)
    }

    /// Number of undirected links.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&Edge> {
        self.adjacency[from].iter().find(|e| e.to == to)
    }
}

/// Steering loss of one tile interaction, in dB.
pub fn tile_loss_db(efficiency: f64) -> f64 {
    -linear_to_db(efficiency)
}

/// Link nodes `u` and `v` when they see each other and every tile endpoint
/// faces the other node.
pub fn build_tile_graph(plan: &Floorplan) -> TileGraph {
    let freq = plan.frequency();
    let mut nodes: Vec<GraphNode> = plan
        .devices()
        .iter()
        .map(|d| GraphNode { id: NodeRef::Device(d.id.clone()), position: d.position, tile: None, role: Some(d.role) })
        .collect();
    nodes.extend(plan.tiles().iter().map(|t| GraphNode {
        id: NodeRef::Tile(t.id),
        position: t.center,
        tile: Some(t.clone()),
        role: None,
    }));

    let steer_loss = tile_loss_db(STEER_EFFICIENCY);
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let (a, b) = (&nodes[i], &nodes[j]);
            if a.tile.as_ref().is_some_and(|t| !t.faces(b.position)) || b.tile.as_ref().is_some_and(|t| !t.faces(a.position)) {
                continue;
            }
            let skip: Vec<_> = [&a.tile, &b.tile].into_iter().flatten().map(|t| t.wall_id).collect();
            if !line_of_sight_excluding(a.position, b.position, plan, &skip) {
                continue;
            }
            let length = a.position.distance(b.position);
            let fspl = free_space_loss(length, freq);
            let extra = |n: &GraphNode| if n.tile.is_some() { steer_loss } else { 0.0 };
            adjacency[i].push(Edge { to: j, length, weight_db: fspl + extra(a) });
            adjacency[j].push(Edge { to: i, length, weight_db: fspl + extra(b) });
        }
    }
    TileGraph { nodes, adjacency, frequency: freq }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AirPath {
    pub objective: Objective,
    /// Source device, tiles in order, destination device.
    pub nodes: Vec<NodeRef>,
    pub segment_lengths: Vec<f64>,
    pub segment_losses_db: Vec<f64>,
    pub total_loss_db: f64,
}

impl AirPath {
    pub fn tiles(&self) -> Vec<TileId> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                NodeRef::Tile(t) => Some(*t),
                NodeRef::Device(_) => None,
            })
            .collect()
    }

    pub fn bounces(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    pub fn total_length(&self) -> f64 {
        self.segment_lengths.iter().sum()
    }
}

/// Loss of a route whose tiles each cost `efficiency`:
/// FSPL of the unfolded length plus the per-tile losses.
pub fn route_loss_db(total_length: f64, frequency: f64, tile_efficiencies: &[f64]) -> f64 {
    free_space_loss(total_length, frequency) + tile_efficiencies.iter().map(|&e| tile_loss_db(e)).sum::<f64>()
}

fn tile_efficiencies(kind: ObjectiveKind, hops: usize) -> Vec<f64> {
    (0..hops)
        .map(|i| if kind == ObjectiveKind::PowerTransfer && i + 1 == hops { FOCUS_EFFICIENCY } else { STEER_EFFICIENCY })
        .collect()
}

/// Positions of eavesdroppers a SECURE_LINK must keep clear of.
fn eavesdroppers(graph: &TileGraph, obj: &Objective) -> Vec<Point2D> {
    graph
        .nodes
        .iter()
        .filter(|n| n.role == Some(Role::Eavesdropper))
        .filter(|n| !matches!(&n.id, NodeRef::Device(d) if *d == obj.src || Some(d) == obj.dst.as_ref()))
        .map(|n| n.position)
        .collect()
}

pub fn compute_airpath(graph: &TileGraph, obj: &Objective, max_bounces: usize) -> Result<AirPath, RouteError> {
    compute_airpath_excluding(graph, obj, max_bounces, &BTreeSet::new())
}

#[derive(Clone)]
struct Partial {
    length: f64,
    tiles: Vec<TileId>,
    nodes: Vec<usize>,
}

fn better_partial(cand: &Partial, cur: Option<&Partial>) -> bool {
    match cur {
        None => true,
        Some(c) => cand.length < c.length - LENGTH_TIE || (cand.length <= c.length + LENGTH_TIE && cand.tiles < c.tiles),
    }
}

/// Minimum-loss air path using at most `max_bounces` tiles, none of them in
/// `excluded`. Ties go to fewer hops, then the lexicographically smaller tile
/// sequence.
pub fn compute_airpath_excluding(
    graph: &TileGraph,
    obj: &Objective,
    max_bounces: usize,
    excluded: &BTreeSet<TileId>,
) -> Result<AirPath, RouteError> {
    if obj.kind == ObjectiveKind::Block {
        return Err(RouteError::NotRoutable(obj.label()));
    }
    let dst_id = obj.dst.clone().ok_or_else(|| RouteError::NotRoutable(obj.label()))?;
    let src = graph.index_of(&NodeRef::Device(obj.src.clone())).ok_or_else(|| RouteError::UnknownDevice(obj.src.clone()))?;
    let dst = graph.index_of(&NodeRef::Device(dst_id.clone())).ok_or(RouteError::UnknownDevice(dst_id))?;

    let spies = if obj.kind == ObjectiveKind::SecureLink { eavesdroppers(graph, obj) } else { Vec::new() };
    let usable = |from: usize, e: &Edge| {
        let a = graph.nodes[from].position;
        let b = graph.nodes[e.to].position;
        spies.iter().all(|&s| segment_distance(a, b, s, s) > obj.avoid_radius)
    };
    let tile_ok = |i: usize| match &graph.nodes[i].id {
        NodeRef::Tile(t) => !excluded.contains(t),
        NodeRef::Device(_) => false,
    };

    // best walk from src ending at each tile with exactly h tiles
    let mut layer: BTreeMap<usize, Partial> = BTreeMap::new();
    let mut candidates: Vec<Partial> = Vec::new();
    if let Some(e) = graph.adjacency[src].iter().find(|e| e.to == dst) {
        if usable(src, e) {
            candidates.push(Partial { length: e.length, tiles: vec![], nodes: vec![src, dst] });
        }
    }
    for e in &graph.adjacency[src] {
        if tile_ok(e.to) && usable(src, e) {
            let tile = graph.nodes[e.to].tile.as_ref().map(|t| t.id).expect("tile node");
            let p = Partial { length: e.length, tiles: vec![tile], nodes: vec![src, e.to] };
            if better_partial(&p, layer.get(&e.to)) {
                layer.insert(e.to, p);
            }
        }
    }
    for h in 1..=max_bounces {
        for (&u, p) in &layer {
            if let Some(e) = graph.edge(u, dst) {
                if usable(u, e) {
                    let mut nodes = p.nodes.clone();
                    nodes.push(dst);
                    candidates.push(Partial { length: p.length + e.length, tiles: p.tiles.clone(), nodes });
                }
            }
        }
        if h == max_bounces {
            break;
        }
        let mut next: BTreeMap<usize, Partial> = BTreeMap::new();
        for (&u, p) in &layer {
            for e in &graph.adjacency[u] {
                if !tile_ok(e.to) || !usable(u, e) {
                    continue;
                }
                let mut cand = p.clone();
                cand.length += e.length;
                cand.tiles.push(graph.nodes[e.to].tile.as_ref().map(|t| t.id).expect("tile node"));
                cand.nodes.push(e.to);
                if better_partial(&cand, next.get(&e.to)) {
                    next.insert(e.to, cand);
                }
            }
        }
        layer = next;
    }

    let loss_of = |p: &Partial| route_loss_db(p.length, graph.frequency, &tile_efficiencies(obj.kind, p.tiles.len()));
    let best = candidates
        .into_iter()
        .map(|p| (loss_of(&p), p))
        .min_by(|(la, a), (lb, b)| {
            if (la - lb).abs() <= LOSS_TIE {
                a.tiles.len().cmp(&b.tiles.len()).then_with(|| a.tiles.cmp(&b.tiles))
            } else {
                la.partial_cmp(lb).unwrap_or(Ordering::Equal)
            }
        })
        .ok_or_else(|| RouteError::NoPath(obj.label()))?;

    let (total_loss_db, p) = best;
    let mut segment_lengths = Vec::new();
    let mut segment_losses_db = Vec::new();
    for w in p.nodes.windows(2) {
        let e = graph.edge(w[0], w[1]).expect("route follows graph edges");
        segment_lengths.push(e.length);
        segment_losses_db.push(e.weight_db);
    }
    Ok(AirPath {
        objective: obj.clone(),
        nodes: p.nodes.iter().map(|&i| graph.nodes[i].id.clone()).collect(),
        segment_lengths,
        segment_losses_db,
        total_loss_db,
    })
}

/// Tile function a path demands at each of its tiles, in path order.
pub fn path_functions(plan: &Floorplan, path: &AirPath) -> Vec<(TileId, EmFunction)> {
    let position = |n: &NodeRef| match n {
        NodeRef::Tile(t) => plan.tile(*t).expect("path tile exists").center,
        NodeRef::Device(d) => plan.device(d).expect("path device exists").position,
    };
    let mut out = Vec::new();
    for i in 1..path.nodes.len().saturating_sub(1) {
        let NodeRef::Tile(id) = path.nodes[i] else { continue };
        let tile = plan.tile(id).expect("path tile exists");
        let theta_in = tile.arrival_angle(position(&path.nodes[i - 1]));
        let next = position(&path.nodes[i + 1]);
        let last = i + 2 == path.nodes.len();
        let func = if path.objective.kind == ObjectiveKind::PowerTransfer && last {
            EmFunction::focus(theta_in, next)
        } else {
            EmFunction::steer(theta_in, tile.departure_angle(next))
        };
        out.push((id, func));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileCommand {
    pub seq: u64,
    pub tile_id: TileId,
    #[serde(rename = "fn")]
    pub function: EmFunction,
    pub config: SwitchConfig,
}

/// A tile's configured behaviour, without sequencing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub function: EmFunction,
    pub config: SwitchConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControllerSettings {
    pub max_bounces: usize,
    pub n_rays: usize,
    pub budget: u64,
    pub seed: u64,
    pub p_min_dbm: f64,
}

impl Default for ControllerSettings {
    fn default() -> Self {
        Self {
            max_bounces: DEFAULT_MAX_BOUNCES,
            n_rays: DEFAULT_RAYS,
            budget: DEFAULT_BUDGET,
            seed: 0,
            p_min_dbm: DEFAULT_P_MIN_DBM,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Satisfied,
    NoPath,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveOutcome {
    pub objective: Objective,
    pub status: Status,
    pub path: Option<AirPath>,
    /// Set when the unconstrained best path collided with a higher-priority
    /// objective and was recomputed on the residual graph.
    pub rerouted: bool,
    /// Tiles switched to ABSORB (BLOCK objectives).
    pub absorbed_tiles: Vec<TileId>,
    /// Transmit power minus path loss, for routed objectives.
    pub predicted_power_dbm: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepOutput {
    /// Tile-state changes relative to the controller's previous state.
    pub commands: Vec<TileCommand>,
    /// One entry per objective, in input order.
    pub outcomes: Vec<ObjectiveOutcome>,
}

/// Transmit power used for an objective: the source's, else the
/// destination's (reciprocal link), else 0 dBm.
pub fn objective_tx_power(plan: &Floorplan, obj: &Objective) -> f64 {
    let of = |id: &str| plan.device(id).and_then(|d| d.tx_power_dbm);
    of(&obj.src).or_else(|| obj.dst.as_deref().and_then(of)).unwrap_or(0.0)
}

/// Controller state: current tile assignments, compiled tables and the
/// command sequence counter.
#[derive(Clone, Debug)]
pub struct Controller {
    pub settings: ControllerSettings,
    tables: Vec<LookupTable>,
    assignments: BTreeMap<TileId, Assignment>,
    next_seq: u64,
    compile_count: usize,
}

impl Controller {
    pub fn new(settings: ControllerSettings) -> Self {
        Self { settings, tables: Vec::new(), assignments: BTreeMap::new(), next_seq: 1, compile_count: 0 }
    }

    /// Seed the compiler cache with a previously saved table.
    pub fn with_table(mut self, table: LookupTable) -> Self {
        self.tables.retain(|t| t.model() != table.model());
        self.tables.push(table);
        self
    }

    pub fn table(&self, model: &TileModel) -> Option<&LookupTable> {
        self.tables.iter().find(|t| t.model() == model)
    }

    pub fn assignments(&self) -> &BTreeMap<TileId, Assignment> {
        &self.assignments
    }

    /// Number of compiler invocations so far (table misses).
    pub fn compile_count(&self) -> usize {
        self.compile_count
    }

    fn next_seq(&mut self) -> u64 {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }

    /// Switch configuration for `func` on `tile`, from the table when
    /// possible.
    pub fn resolve(&mut self, plan: &Floorplan, tile: &Tile, func: &EmFunction) -> Result<SwitchConfig, CompileError> {
        let model = TileModel::new(tile.columns, plan.frequency());
        let req = CompileRequest::for_function(func, tile).quantized();
        let idx = match self.tables.iter().position(|t| t.model() == &model) {
            Some(i) => i,
            None => {
                self.tables.push(LookupTable::new(model.clone()));
                self.tables.len() - 1
            }
        };
        if let Some(cfg) = self.tables[idx].get(&req) {
            return Ok(cfg.clone());
        }
        let cfg = compile(&model, &req, model.design_frequency, self.settings.budget, self.settings.seed)?;
        self.compile_count += 1;
        self.tables[idx].put(&req, &cfg)?;
        Ok(self.tables[idx].get(&req).cloned().unwrap_or(cfg))
    }

    fn path_assignments(&mut self, plan: &Floorplan, path: &AirPath) -> Result<Vec<(TileId, Assignment)>, CompileError> {
        path_functions(plan, path)
            .into_iter()
            .map(|(id, function)| {
                let tile = plan.tile(id).expect("path tile exists");
                let config = self.resolve(plan, tile, &function)?;
                Ok((id, Assignment { function, config }))
            })
            .collect()
    }

    /// Commands realizing `path`, one per tile in path order.
    pub fn emit_commands(&mut self, plan: &Floorplan, path: &AirPath) -> Result<Vec<TileCommand>, CompileError> {
        let assigned = self.path_assignments(plan, path)?;
        Ok(assigned
            .into_iter()
            .map(|(tile_id, a)| TileCommand { seq: self.next_seq(), tile_id, function: a.function, config: a.config })
            .collect())
    }

    fn block_assignments(
        &mut self,
        plan: &Floorplan,
        taken: &BTreeSet<TileId>,
        blocked: &Device,
    ) -> Result<Vec<(TileId, Assignment)>, CompileError> {
        let hits = first_hit_power(blocked, plan, self.settings.n_rays);
        let mut out = Vec::new();
        for (id, power) in hits {
            if power < self.settings.p_min_dbm || taken.contains(&id) {
                continue;
            }
            let tile = plan.tile(id).expect("hit tile exists");
            let function = EmFunction::absorb();
            let config = self.resolve(plan, tile, &function)?;
            out.push((id, Assignment { function, config }));
        }
        Ok(out)
    }

    /// ABSORB commands for every tile the blocked device's ray fan reaches
    /// with at least `p_min` dBm, skipping tiles in `taken`.
    pub fn apply_block(&mut self, plan: &Floorplan, taken: &BTreeSet<TileId>, blocked: &Device) -> Result<Vec<TileCommand>, CompileError> {
        let assigned = self.block_assignments(plan, taken, blocked)?;
        Ok(assigned
            .into_iter()
            .map(|(tile_id, a)| TileCommand { seq: self.next_seq(), tile_id, function: a.function, config: a.config })
            .collect())
    }

    /// Serve every objective in priority order and return the tile-state
    /// delta against the current state. Unsatisfiable objectives are reported
    /// and do not affect the others.
    pub fn control_step(&mut self, plan: &Floorplan, objectives: &[Objective]) -> Result<StepOutput, RouteError> {
        for obj in objectives {
            for id in std::iter::once(&obj.src).chain(obj.dst.as_ref()) {
                if plan.device(id).is_none() {
                    return Err(RouteError::UnknownDevice(id.clone()));
                }
            }
        }

        let graph = build_tile_graph(plan);
        let mut order: Vec<usize> = (0..objectives.len()).collect();
        order.sort_by(|&a, &b| objectives[a].order_key().cmp(&objectives[b].order_key()).then(a.cmp(&b)));

        let mut desired: BTreeMap<TileId, Assignment> = BTreeMap::new();
        let mut outcomes: Vec<Option<ObjectiveOutcome>> = vec![None; objectives.len()];
        for idx in order {
            let obj = &objectives[idx];
            let taken: BTreeSet<TileId> = desired.keys().copied().collect();
            let mut outcome = ObjectiveOutcome {
                objective: obj.clone(),
                status: Status::Satisfied,
                path: None,
                rerouted: false,
                absorbed_tiles: Vec::new(),
                predicted_power_dbm: None,
            };
            if obj.kind == ObjectiveKind::Block {
                let blocked = plan.device(&obj.src).expect("checked above").clone();
                for (id, a) in self.block_assignments(plan, &taken, &blocked)? {
                    outcome.absorbed_tiles.push(id);
                    desired.insert(id, a);
                }
            } else {
                let free = compute_airpath(&graph, obj, self.settings.max_bounces);
                let collides = free.as_ref().is_ok_and(|p| p.tiles().iter().any(|t| taken.contains(t)));
                let routed = if collides {
                    outcome.rerouted = true;
                    compute_airpath_excluding(&graph, obj, self.settings.max_bounces, &taken)
                } else {
                    free
                };
                match routed {
                    Ok(path) => {
                        for (id, a) in self.path_assignments(plan, &path)? {
                            desired.insert(id, a);
                        }
                        outcome.predicted_power_dbm = Some(objective_tx_power(plan, obj) - path.total_loss_db);
                        outcome.path = Some(path);
                    }
                    Err(RouteError::NoPath(_)) => outcome.status = Status::NoPath,
                    Err(e) => return Err(e),
                }
            }
            outcomes[idx] = Some(outcome);
        }

        let mut changes: BTreeMap<TileId, Assignment> = BTreeMap::new();
        for (id, a) in &desired {
            if self.assignments.get(id) != Some(a) {
                changes.insert(*id, a.clone());
            }
        }
        let released: Vec<TileId> = self.assignments.keys().filter(|id| !desired.contains_key(id)).copied().collect();
        for id in released {
            let tile = plan.tile(id).expect("assigned tile exists").clone();
            let function = EmFunction::specular();
            let config = self.resolve(plan, &tile, &function)?;
            changes.insert(id, Assignment { function, config });
        }
        let commands = changes
            .into_iter()
            .map(|(tile_id, a)| TileCommand { seq: self.next_seq(), tile_id, function: a.function, config: a.config })
            .collect();
        self.assignments = desired;

        Ok(StepOutput { commands, outcomes: outcomes.into_iter().map(|o| o.expect("every objective processed")).collect() })
    }
}
