//! Ray-launching multipath engine.
//!
//! Paths are built by firing a uniform fan of rays from a transmitter and
//! letting each tile act on the ray according to its [`EmFunction`]. A ray is
//! credited to a device when it passes within the capture radius. Path gain
//! uses free-space loss on the unfolded length times the product of the tile
//! efficiencies met along the way.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::PropagationError;
use crate::geometry::{trace_ray, Device, Floorplan, Hit, Point2D, Tile, TileId, EPSILON};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const SPECULAR_EFFICIENCY: f64 = 0.7;
pub const STEER_EFFICIENCY: f64 = 0.8;
pub const FOCUS_EFFICIENCY: f64 = 0.8;
pub const ABSORB_LEAKAGE: f64 = 0.01;

pub const DEFAULT_RAYS: usize = 3600;

/// Free-space path loss in dB, `20 log10(4 pi d f / c)`. Distances below
/// `min_distance` are clamped.
pub fn free_space_loss_clamped(d: f64, f: f64, min_distance: f64) -> f64 {
    let d = d.max(min_distance);
    20.0 * (4.0 * PI * d * f / SPEED_OF_LIGHT).log10()
}

/// [`free_space_loss_clamped`] with the default 0.1 m near-field clamp.
pub fn free_space_loss(d: f64, f: f64) -> f64 {
    free_space_loss_clamped(d, f, PropagationSettings::default().min_distance)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Interaction a tile has been commanded to perform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE", deny_unknown_fields)]
pub enum FunctionKind {
    Specular,
    /// Re-radiate toward `target_angle` for waves arriving near `incident_angle`.
    Steer { incident_angle: f64, target_angle: f64 },
    Absorb,
    /// Converge onto `target`; `incident_angle` is the arrival the tile was
    /// compiled for.
    Focus { incident_angle: f64, target: Point2D },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmFunction {
    #[serde(flatten)]
    pub kind: FunctionKind,
    /// Linear power fraction re-radiated (leakage for ABSORB).
    pub efficiency: f64,
}

impl EmFunction {
    pub fn specular() -> Self {
        Self { kind: FunctionKind::Specular, efficiency: SPECULAR_EFFICIENCY }
    }

    pub fn steer(incident_angle: f64, target_angle: f64) -> Self {
        Self { kind: FunctionKind::Steer { incident_angle, target_angle }, efficiency: STEER_EFFICIENCY }
    }

    pub fn absorb() -> Self {
        Self { kind: FunctionKind::Absorb, efficiency: ABSORB_LEAKAGE }
    }

    pub fn focus(incident_angle: f64, target: Point2D) -> Self {
        Self { kind: FunctionKind::Focus { incident_angle, target }, efficiency: FOCUS_EFFICIENCY }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FunctionKind::Specular => "SPECULAR",
            FunctionKind::Steer { .. } => "STEER",
            FunctionKind::Absorb => "ABSORB",
            FunctionKind::Focus { .. } => "FOCUS",
        }
    }
}

/// Tunables of the propagation model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationSettings {
    /// Phase added at every tile interaction.
    pub reflection_phase: f64,
    pub capture_radius: f64,
    /// Half-width of the incidence window a STEER tile honours.
    pub steer_window: f64,
    pub min_distance: f64,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        Self { reflection_phase: PI, capture_radius: 0.05, steer_window: 10f64.to_radians(), min_distance: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outgoing {
    pub origin: Point2D,
    pub direction: Point2D,
    pub gain_factor: f64,
    pub phase_shift: f64,
}

/// Apply `func` to a ray that struck `tile` at `incident`.
pub fn interact(
    tile: &Tile,
    func: &EmFunction,
    incident: &Hit,
    settings: &PropagationSettings,
) -> Result<Option<Outgoing>, PropagationError> {
    debug_assert_eq!(incident.tile_id, Some(tile.id));
    if !incident.front {
        return Err(PropagationError::BackFaceHit(tile.id));
    }
    let theta = incident.incidence_angle;
    let mirror = tile.direction_at(-theta);
    let (direction, gain_factor) = match &func.kind {
        FunctionKind::Specular | FunctionKind::Absorb => (mirror, func.efficiency),
        FunctionKind::Steer { incident_angle, target_angle } => {
            if (theta - incident_angle).abs() <= settings.steer_window {
                (tile.direction_at(*target_angle), func.efficiency)
            } else {
                (mirror, SPECULAR_EFFICIENCY)
            }
        }
        FunctionKind::Focus { target, .. } => {
            let v = *target - incident.point;
            if v.dot(tile.normal) > EPSILON {
                (v.normalized(), func.efficiency)
            } else {
                (mirror, SPECULAR_EFFICIENCY)
            }
        }
    };
    if gain_factor <= 0.0 {
        return Ok(None);
    }
    Ok(Some(Outgoing { origin: incident.point, direction, gain_factor, phase_shift: settings.reflection_phase }))
}

/// One echo reaching a receiver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropPath {
    pub rx: String,
    pub hops: Vec<TileId>,
    pub segment_lengths: Vec<f64>,
    pub total_length: f64,
    /// Linear power gain including free-space loss.
    pub gain: f64,
    /// Carrier phase at the receiver, wrapped to [0, 2pi).
    pub phase: f64,
    pub delay: f64,
}

pub type TileConfig = BTreeMap<TileId, EmFunction>;

/// Fire `n_rays` uniformly spaced rays from `tx` and collect every path that
/// reaches another device within `max_bounces` tile interactions. Tiles absent
/// from `config` behave as SPECULAR.
pub fn launch(tx: &Device, plan: &Floorplan, config: &TileConfig, max_bounces: usize, n_rays: usize) -> Vec<PropPath> {
    launch_with(tx, plan, config, max_bounces, n_rays, &PropagationSettings::default())
}

pub fn launch_with(
    tx: &Device,
    plan: &Floorplan,
    config: &TileConfig,
    max_bounces: usize,
    n_rays: usize,
    settings: &PropagationSettings,
) -> Vec<PropPath> {
    assert!(n_rays >= 1, "n_rays must be at least 1");
    let freq = tx.frequency_hz;
    let default_fn = EmFunction::specular();
    let receivers: Vec<&Device> = plan.devices().iter().filter(|d| d.id != tx.id).collect();

    // every capture, tagged with the ray index and miss distance
    let mut captures: Vec<Capture> = Vec::new();
    for i in 0..n_rays {
        let mut dir = Point2D::from_angle(2.0 * PI * i as f64 / n_rays as f64);
        let mut origin = tx.position;
        let mut hops: Vec<TileId> = Vec::new();
        let mut segments: Vec<f64> = Vec::new();
        let mut factor = 1.0;
        let mut shift = 0.0;
        let mut exclude = None;

        loop {
            let hit = trace_ray(origin, dir, plan, exclude);
            let reach = hit.as_ref().map_or(f64::INFINITY, |h| h.distance);

            for dev in &receivers {
                let along = (dev.position - origin).dot(dir);
                if along <= 0.0 || along > reach {
                    continue;
                }
                let miss = (dev.position - (origin + dir * along)).norm();
                if miss > settings.capture_radius {
                    continue;
                }
                let mut lengths = segments.clone();
                lengths.push(dev.position.distance(origin));
                let total: f64 = lengths.iter().sum();
                let delay = total / SPEED_OF_LIGHT;
                let gain = db_to_linear(-free_space_loss_clamped(total, freq, settings.min_distance)) * factor;
                let phase = (-2.0 * PI * freq * delay + shift).rem_euclid(2.0 * PI);
                captures.push(Capture {
                    ray: i,
                    miss,
                    path: PropPath {
                        rx: dev.id.clone(),
                        hops: hops.clone(),
                        segment_lengths: lengths,
                        total_length: total,
                        gain,
                        phase,
                        delay,
                    },
                });
            }

            let Some(hit) = hit else { break };
            if hops.len() >= max_bounces || !hit.front {
                break;
            }
            let Some(tile_id) = hit.tile_id else { break };
            let tile = &plan.tiles()[tile_id as usize];
            let func = config.get(&tile_id).unwrap_or(&default_fn);
            let Ok(Some(out)) = interact(tile, func, &hit, settings) else { break };

            hops.push(tile_id);
            segments.push(hit.distance);
            factor *= out.gain_factor;
            shift += out.phase_shift;
            origin = out.origin;
            dir = out.direction;
            exclude = Some(tile_id);
        }
    }
    merge_captures(captures, n_rays)
}

struct Capture {
    ray: usize,
    miss: f64,
    path: PropPath,
}

/// Merge captures per (receiver, hop sequence), keeping the shortest.
///
/// A finite capture radius also credits rays that bounce off the tile next
/// to the true reflection point. Such a sequence is dropped when its
/// closest-passing ray has a fan neighbour that reached the same receiver in
/// the same number of hops over other tiles and passed closer.
fn merge_captures(captures: Vec<Capture>, n_rays: usize) -> Vec<PropPath> {
    type Key = (String, Vec<TileId>);
    let mut by_ray: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut closest: BTreeMap<Key, usize> = BTreeMap::new();
    for (idx, c) in captures.iter().enumerate() {
        by_ray.entry(c.ray).or_default().push(idx);
        let key = (c.path.rx.clone(), c.path.hops.clone());
        let e = closest.entry(key).or_insert(idx);
        if c.miss < captures[*e].miss {
            *e = idx;
        }
    }

    let ghost = |best: &Capture| {
        [(best.ray + n_rays - 1) % n_rays, (best.ray + 1) % n_rays].iter().any(|r| {
            by_ray.get(r).is_some_and(|list| {
                list.iter().map(|&j| &captures[j]).any(|c| {
                    c.path.rx == best.path.rx
                        && c.path.hops.len() == best.path.hops.len()
                        && c.path.hops != best.path.hops
                        && c.miss < best.miss
                })
            })
        })
    };
    let kept: BTreeMap<&Key, bool> = closest.iter().map(|(k, &i)| (k, !ghost(&captures[i]))).collect();

    let mut found: BTreeMap<Key, PropPath> = BTreeMap::new();
    for c in captures {
        let key = (c.path.rx.clone(), c.path.hops.clone());
        if !kept[&key] || found.get(&key).is_some_and(|p| p.total_length <= c.path.total_length) {
            continue;
        }
        found.insert(key, c.path);
    }
    found.into_values().collect()
}

/// Strongest free-space power (dBm) each tile receives from `tx` on a direct
/// first hit, for tiles struck on their front face by the ray fan.
pub fn first_hit_power(tx: &Device, plan: &Floorplan, n_rays: usize) -> BTreeMap<TileId, f64> {
    let power = tx.tx_power_dbm.unwrap_or(f64::NEG_INFINITY);
    let mut out: BTreeMap<TileId, f64> = BTreeMap::new();
    for i in 0..n_rays {
        let dir = Point2D::from_angle(2.0 * PI * i as f64 / n_rays as f64);
        let Some(hit) = trace_ray(tx.position, dir, plan, None) else { continue };
        let (Some(tile), true) = (hit.tile_id, hit.front) else { continue };
        let p = power - free_space_loss(hit.distance, tx.frequency_hz);
        let e = out.entry(tile).or_insert(f64::NEG_INFINITY);
        if p > *e {
            *e = p;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReceivedPower {
    pub coherent_dbm: f64,
    pub incoherent_dbm: f64,
}

fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

fn mw_to_dbm(mw: f64) -> f64 {
    if mw > 0.0 {
        linear_to_db(mw)
    } else {
        f64::NEG_INFINITY
    }
}

fn phasor(path: &PropPath) -> Complex64 {
    Complex64::from_polar(path.gain.sqrt(), path.phase)
}

/// |sum of phasors|^2 with per-path binary offsets (true = add pi).
fn coherent_sum(phasors: &[Complex64], flips: impl Fn(usize) -> bool) -> f64 {
    let s: Complex64 = phasors.iter().enumerate().map(|(k, v)| if flips(k) { -v } else { *v }).sum();
    s.norm_sqr()
}

/// Coherent and incoherent received power. An empty path set yields -inf for
/// both.
pub fn received_power(paths: &[PropPath], tx_power_dbm: f64) -> ReceivedPower {
    received_power_with_offsets(paths, &vec![0.0; paths.len()], tx_power_dbm)
}

/// As [`received_power`] with `offsets[k]` added to the phase of path `k`.
pub fn received_power_with_offsets(paths: &[PropPath], offsets: &[f64], tx_power_dbm: f64) -> ReceivedPower {
    assert_eq!(paths.len(), offsets.len());
    let p = dbm_to_mw(tx_power_dbm);
    let incoherent: f64 = paths.iter().map(|x| x.gain).sum();
    let s: Complex64 = paths.iter().zip(offsets).map(|(x, o)| Complex64::from_polar(x.gain.sqrt(), x.phase + o)).sum();
    let mut coherent = s.norm_sqr();
    // residue of exact cancellation
    if coherent <= 1e-24 * incoherent {
        coherent = 0.0;
    }
    ReceivedPower { coherent_dbm: mw_to_dbm(p * coherent), incoherent_dbm: mw_to_dbm(p * incoherent) }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tap {
    pub delay_s: f64,
    pub power_w: f64,
}

/// Power delay profile: one tap per path, ascending delay.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pdp {
    pub taps: Vec<Tap>,
    pub paths: Vec<PropPath>,
}

impl Pdp {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("delay_s,power_w\n");
        for t in &self.taps {
            s.push_str(&format!("{:e},{:e}\n", t.delay_s, t.power_w));
        }
        s
    }
}

pub fn pdp(paths: &[PropPath], tx_power_dbm: f64) -> Pdp {
    let watts = db_to_linear(tx_power_dbm - 30.0);
    let mut taps: Vec<Tap> = paths.iter().map(|p| Tap { delay_s: p.delay, power_w: watts * p.gain }).collect();
    taps.sort_by(|a, b| a.delay_s.total_cmp(&b.delay_s));
    Pdp { taps, paths: paths.to_vec() }
}

/// Power-weighted standard deviation of tap delays; 0 for an empty profile.
pub fn rms_delay_spread(p: &Pdp) -> f64 {
    let total: f64 = p.taps.iter().map(|t| t.power_w).sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mean = p.taps.iter().map(|t| t.power_w * t.delay_s).sum::<f64>() / total;
    let second = p.taps.iter().map(|t| t.power_w * t.delay_s * t.delay_s).sum::<f64>() / total;
    (second - mean * mean).max(0.0).sqrt()
}

/// Largest path count searched exhaustively by [`align_phases`].
pub const EXHAUSTIVE_ALIGN_LIMIT: usize = 20;

/// Choose a phase offset in {0, pi} per path maximizing coherent power.
/// Exhaustive for up to [`EXHAUSTIVE_ALIGN_LIMIT`] paths, greedy beyond.
pub fn align_phases(paths: &[PropPath]) -> Vec<f64> {
    let phasors: Vec<Complex64> = paths.iter().map(phasor).collect();
    let flips = if phasors.len() <= EXHAUSTIVE_ALIGN_LIMIT {
        align_exhaustive(&phasors)
    } else {
        let mut f = align_greedy(&phasors);
        polish(&phasors, &mut f);
        let baseline = vec![false; phasors.len()];
        if coherent_sum(&phasors, |k| f[k]) < coherent_sum(&phasors, |k| baseline[k]) {
            f = baseline;
        }
        f
    };
    flips.into_iter().map(|f| if f { PI } else { 0.0 }).collect()
}

/// Exhaustive search over 2^(K-1) sign patterns; path 0 is never flipped since
/// a global flip leaves the magnitude unchanged. Ties keep the smaller mask.
pub fn align_exhaustive(phasors: &[Complex64]) -> Vec<bool> {
    let k = phasors.len();
    if k <= 1 {
        return vec![false; k];
    }
    let mut best_mask = 0u64;
    let mut best = f64::NEG_INFINITY;
    for mask in 0..(1u64 << (k - 1)) {
        let v = coherent_sum(phasors, |i| i > 0 && mask >> (i - 1) & 1 == 1);
        if v > best {
            best = v;
            best_mask = mask;
        }
    }
    (0..k).map(|i| i > 0 && best_mask >> (i - 1) & 1 == 1).collect()
}

/// Add paths in descending gain, each with the sign that maximizes the
/// running sum magnitude.
pub fn align_greedy(phasors: &[Complex64]) -> Vec<bool> {
    let mut order: Vec<usize> = (0..phasors.len()).collect();
    order.sort_by(|&a, &b| phasors[b].norm_sqr().total_cmp(&phasors[a].norm_sqr()).then(a.cmp(&b)));
    let mut flips = vec![false; phasors.len()];
    let mut sum = Complex64::new(0.0, 0.0);
    for i in order {
        let v = phasors[i];
        if (sum - v).norm_sqr() > (sum + v).norm_sqr() {
            flips[i] = true;
            sum -= v;
        } else {
            sum += v;
        }
    }
    flips
}

// single-flip hill climbing
fn polish(phasors: &[Complex64], flips: &mut [bool]) {
    let mut current = coherent_sum(phasors, |k| flips[k]);
    for _ in 0..phasors.len() * phasors.len() {
        let mut improved = false;
        for i in 0..phasors.len() {
            flips[i] = !flips[i];
            let v = coherent_sum(phasors, |k| flips[k]);
            if v > current {
                current = v;
                improved = true;
            } else {
                flips[i] = !flips[i];
            }
        }
        if !improved {
            break;
        }
    }
}
