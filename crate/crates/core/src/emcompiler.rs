//! Electromagnetic compiler: turns a requested tile interaction into the
//! on/off amplitude and 0/pi phase switch states of the tile's meta-atom
//! columns.
//!
//! The reflected field is modelled as a 1-D array factor
//! `AF = (1/N) sum_n a_n exp(i[pi p_n + k s n (sin t_out + sin t_in)])`.
//! Small tiles are searched exhaustively; larger ones with a genetic
//! algorithm seeded by the quantized linear phase gradient. Results are cached
//! in a [`LookupTable`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CompileError;
use crate::geometry::Tile;
use crate::propagation::{EmFunction, FunctionKind, SPEED_OF_LIGHT};

/// Denominator floor for the steering score.
pub const QUALITY_EPSILON: f64 = 1e-12;
/// Table keys are quantized to this many degrees.
pub const TABLE_BIN_DEG: f64 = 5.0;
pub const POPULATION: usize = 32;
pub const ELITES: usize = 2;
pub const CROSSOVER_RATE: f64 = 0.9;
pub const DEFAULT_BUDGET: u64 = 20_000;

/// Observation grid: every whole degree in (-90, 90).
pub fn angle_grid() -> impl Iterator<Item = f64> {
    (-89..=89).map(|d| (d as f64).to_radians())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileModel {
    pub columns: u32,
    /// Column pitch in meters.
    pub spacing: f64,
    pub design_frequency: f64,
}

impl TileModel {
    /// Half-wavelength column pitch at `design_frequency`.
    pub fn new(columns: u32, design_frequency: f64) -> Self {
        Self { columns, spacing: SPEED_OF_LIGHT / design_frequency / 2.0, design_frequency }
    }

    pub fn bits(&self) -> usize {
        2 * self.columns as usize
    }
}

/// Switch states of one tile: for column `n`, bit `2n` is the amplitude
/// switch and bit `2n+1` the phase switch.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(pub Vec<bool>);

impl Bits {
    pub fn all_off(columns: usize) -> Self {
        Self(vec![false; 2 * columns])
    }

    /// Every column on, no phase flips: the specular configuration.
    pub fn uniform(columns: usize) -> Self {
        Self((0..2 * columns).map(|i| i % 2 == 0).collect())
    }

    pub fn from_phases(phases: &[bool]) -> Self {
        Self(phases.iter().flat_map(|&p| [true, p]).collect())
    }

    pub fn columns(&self) -> usize {
        self.0.len() / 2
    }

    pub fn amplitude(&self, n: usize) -> bool {
        self.0[2 * n]
    }

    pub fn phase(&self, n: usize) -> bool {
        self.0[2 * n + 1]
    }

    /// Column order reversed.
    pub fn mirrored(&self) -> Self {
        let n = self.columns();
        Self((0..n).rev().flat_map(|c| [self.amplitude(c), self.phase(c)]).collect())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = CompileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.len().is_multiple_of(2) {
            return Err(CompileError::BadBits(format!("odd length {}", s.len())));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CompileError::BadBits(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchConfig {
    pub bits: Bits,
    pub quality: f64,
}

/// Interaction kind as keyed in the lookup table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RequestKind {
    Specular,
    Steer,
    Absorb,
    Focus,
}

/// A compile request with every angle resolved relative to the tile normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompileRequest {
    pub kind: RequestKind,
    pub theta_in: f64,
    /// Desired departure angle; ignored for ABSORB.
    pub theta_target: f64,
}

impl CompileRequest {
    pub fn steer(theta_in: f64, theta_target: f64) -> Self {
        Self { kind: RequestKind::Steer, theta_in, theta_target }
    }

    pub fn specular(theta_in: f64) -> Self {
        Self { kind: RequestKind::Specular, theta_in, theta_target: -theta_in }
    }

    pub fn absorb(theta_in: f64) -> Self {
        Self { kind: RequestKind::Absorb, theta_in, theta_target: 0.0 }
    }

    /// Resolve `func` on `tile`. FOCUS is compiled as steering toward the
    /// focal point as seen from the tile center.
    pub fn for_function(func: &EmFunction, tile: &Tile) -> Self {
        match &func.kind {
            FunctionKind::Specular => Self::specular(0.0),
            FunctionKind::Steer { incident_angle, target_angle } => Self::steer(*incident_angle, *target_angle),
            FunctionKind::Absorb => Self::absorb(0.0),
            FunctionKind::Focus { incident_angle, target } => Self {
                kind: RequestKind::Focus,
                theta_in: *incident_angle,
                theta_target: tile.departure_angle(*target),
            },
        }
    }

    /// Snap both angles to the table grid.
    pub fn quantized(&self) -> Self {
        let q = |a: f64| quantize_deg(a) as f64 * PI / 180.0;
        let mut out = Self { kind: self.kind, theta_in: q(self.theta_in), theta_target: q(self.theta_target) };
        match self.kind {
            RequestKind::Specular => out.theta_target = -out.theta_in,
            RequestKind::Absorb => out.theta_target = 0.0,
            _ => {}
        }
        out
    }
}

pub fn quantize_deg(angle: f64) -> i32 {
    ((angle.to_degrees() / TABLE_BIN_DEG).round() * TABLE_BIN_DEG) as i32
}

/// Far-field reflected amplitude for incidence `theta_in` observed at
/// `theta_out`. Magnitude is at most 1.
pub fn array_factor(model: &TileModel, bits: &Bits, theta_in: f64, theta_out: f64, f: f64) -> Complex64 {
    let n = model.columns as usize;
    assert_eq!(bits.0.len(), 2 * n, "bit string does not match tile model");
    let k = 2.0 * PI * f / SPEED_OF_LIGHT;
    let u = theta_out.sin() + theta_in.sin();
    let mut sum = Complex64::new(0.0, 0.0);
    for c in 0..n {
        if bits.amplitude(c) {
            let phase = if bits.phase(c) { PI } else { 0.0 } + k * model.spacing * c as f64 * u;
            sum += Complex64::from_polar(1.0, phase);
        }
    }
    sum / n as f64
}

/// Precomputed column phasors for one incidence angle, over the observation
/// grid and one target direction.
pub struct Evaluator {
    columns: usize,
    // grid-major: grid[g * columns + c]
    grid: Vec<Complex64>,
    target: Vec<Complex64>,
}

impl Evaluator {
    pub fn new(model: &TileModel, theta_in: f64, theta_target: f64, f: f64) -> Self {
        let n = model.columns as usize;
        let k = 2.0 * PI * f / SPEED_OF_LIGHT;
        let row = |theta_out: f64| {
            let u = theta_out.sin() + theta_in.sin();
            (0..n).map(move |c| Complex64::from_polar(1.0, k * model.spacing * c as f64 * u))
        };
        Self { columns: n, grid: angle_grid().flat_map(row).collect(), target: row(theta_target).collect() }
    }

    fn field(row: &[Complex64], bits: &Bits) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (c, v) in row.iter().enumerate() {
            if bits.amplitude(c) {
                // pi phase applied as an exact sign flip
                if bits.phase(c) {
                    s -= v;
                } else {
                    s += v;
                }
            }
        }
        s
    }

    /// Sum over the grid of |N * AF|^2.
    pub fn grid_power(&self, bits: &Bits) -> f64 {
        self.grid.chunks_exact(self.columns).map(|row| Self::field(row, bits).norm_sqr()).sum()
    }

    pub fn steering(&self, bits: &Bits) -> f64 {
        let peak = Self::field(&self.target, bits).norm_sqr();
        let total = self.grid_power(bits);
        if peak == 0.0 {
            return 0.0;
        }
        (peak / total.max(QUALITY_EPSILON)).min(1.0)
    }

    pub fn absorption(&self, bits: &Bits) -> f64 {
        let reference = self.grid_power(&Bits::uniform(self.columns));
        (1.0 - self.grid_power(bits) / reference.max(QUALITY_EPSILON)).clamp(0.0, 1.0)
    }

    pub fn score(&self, kind: RequestKind, bits: &Bits) -> f64 {
        match kind {
            RequestKind::Absorb => self.absorption(bits),
            _ => self.steering(bits),
        }
    }
}

/// Fraction of the grid-sampled reflected power that lands at
/// `theta_target`, in [0, 1]. Zero when nothing is reflected.
pub fn steering_quality(model: &TileModel, bits: &Bits, theta_in: f64, theta_target: f64, f: f64) -> f64 {
    Evaluator::new(model, theta_in, theta_target, f).steering(bits)
}

/// One minus the grid-sampled reflected power relative to a fully
/// reflecting (uniform) tile.
pub fn absorption_quality(model: &TileModel, bits: &Bits, theta_in: f64, f: f64) -> f64 {
    Evaluator::new(model, theta_in, 0.0, f).absorption(bits)
}

/// Score of `bits` for `req`, as stored in [`SwitchConfig::quality`].
pub fn quality(model: &TileModel, bits: &Bits, req: &CompileRequest, f: f64) -> f64 {
    Evaluator::new(model, req.theta_in, req.theta_target, f).score(req.kind, bits)
}

/// Linear phase gradient toward `theta_target`, rounded to 0/pi per column,
/// every column switched on.
pub fn analytic_seed(model: &TileModel, theta_in: f64, theta_target: f64, f: f64) -> Bits {
    let k = 2.0 * PI * f / SPEED_OF_LIGHT;
    let u = theta_target.sin() + theta_in.sin();
    let phases: Vec<bool> = (0..model.columns)
        .map(|n| {
            let phi = (-k * model.spacing * n as f64 * u).rem_euclid(2.0 * PI);
            ((phi / PI).round() as i64).rem_euclid(2) == 1
        })
        .collect();
    Bits::from_phases(&phases)
}

/// Grid angles (radians) where |AF| reaches its maximum, within a relative
/// tolerance of 1e-9. Binary phase profiles are real, so a steered beam
/// usually comes with an equal-strength twin mirrored in sine space.
pub fn main_lobes(model: &TileModel, bits: &Bits, theta_in: f64, f: f64) -> Vec<f64> {
    let mags: Vec<(f64, f64)> = angle_grid().map(|t| (t, array_factor(model, bits, theta_in, t, f).norm())).collect();
    let peak = mags.iter().map(|m| m.1).fold(0.0, f64::max);
    if peak == 0.0 {
        return Vec::new();
    }
    mags.into_iter().filter(|m| m.1 >= peak * (1.0 - 1e-9)).map(|m| m.0).collect()
}

fn better(a: (f64, &Bits), b: (f64, &Bits)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Search for the configuration best realizing `req`. Exhaustive when all
/// `2^(2N)` states fit in `budget` evaluations, genetic otherwise.
pub fn compile(model: &TileModel, req: &CompileRequest, f: f64, budget: u64, seed: u64) -> Result<SwitchConfig, CompileError> {
    let n = model.columns as usize;
    if req.kind == RequestKind::Absorb {
        let bits = Bits::all_off(n);
        let quality = absorption_quality(model, &bits, req.theta_in, f);
        return Ok(SwitchConfig { bits, quality });
    }
    let eval = Evaluator::new(model, req.theta_in, req.theta_target, f);
    let space = 2 * n;
    if space < 64 && (1u64 << space) <= budget {
        return Ok(exhaustive(&eval, req.kind, space));
    }
    if budget < POPULATION as u64 {
        return Err(CompileError::BudgetTooSmall { budget, population: POPULATION });
    }
    let seed_bits = analytic_seed(model, req.theta_in, req.theta_target, f);
    Ok(genetic(&eval, req.kind, seed_bits, budget, seed))
}

/// Convenience wrapper resolving `func` on `tile` first.
pub fn compile_function(
    model: &TileModel,
    func: &EmFunction,
    tile: &Tile,
    f: f64,
    budget: u64,
    seed: u64,
) -> Result<SwitchConfig, CompileError> {
    compile(model, &CompileRequest::for_function(func, tile), f, budget, seed)
}

fn bits_of_mask(mask: u64, len: usize) -> Bits {
    // first character is the most significant bit, so integer order is
    // lexicographic order
    Bits((0..len).map(|j| mask >> (len - 1 - j) & 1 == 1).collect())
}

/// Best configuration over the full state space; ties go to the
/// lexicographically smallest bit string.
fn exhaustive(eval: &Evaluator, kind: RequestKind, len: usize) -> SwitchConfig {
    let mut best = (f64::NEG_INFINITY, Bits::all_off(len / 2));
    for mask in 0..(1u64 << len) {
        let bits = bits_of_mask(mask, len);
        let q = eval.score(kind, &bits);
        if q > best.0 {
            best = (q, bits);
        }
    }
    SwitchConfig { bits: best.1, quality: best.0 }
}

/// Exhaustive optimum of the steering score, exposed for oracle checks.
pub fn exhaustive_optimum(model: &TileModel, req: &CompileRequest, f: f64) -> SwitchConfig {
    let eval = Evaluator::new(model, req.theta_in, req.theta_target, f);
    exhaustive(&eval, req.kind, model.bits())
}

fn genetic(eval: &Evaluator, kind: RequestKind, seed_bits: Bits, budget: u64, seed: u64) -> SwitchConfig {
    let len = seed_bits.0.len();
    let mutation = 1.0 / len as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut pop: Vec<(f64, Bits)> = Vec::with_capacity(POPULATION);
    pop.push((eval.score(kind, &seed_bits), seed_bits));
    while pop.len() < POPULATION {
        let bits = Bits((0..len).map(|_| rng.gen_bool(0.5)).collect());
        pop.push((eval.score(kind, &bits), bits));
    }

    let generations = budget / POPULATION as u64;
    for _ in 1..generations {
        pop.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut next: Vec<(f64, Bits)> = pop[..ELITES].to_vec();
        while next.len() < POPULATION {
            let a = tournament(&pop, &mut rng);
            let b = tournament(&pop, &mut rng);
            let (mut c1, mut c2) = (a.clone(), b.clone());
            if rng.gen_bool(CROSSOVER_RATE) {
                let cut = rng.gen_range(1..len);
                c1.0[cut..].copy_from_slice(&b.0[cut..]);
                c2.0[cut..].copy_from_slice(&a.0[cut..]);
            }
            for child in [c1, c2] {
                if next.len() == POPULATION {
                    break;
                }
                let mut child = child;
                for bit in child.0.iter_mut() {
                    if rng.gen_bool(mutation) {
                        *bit = !*bit;
                    }
                }
                next.push((eval.score(kind, &child), child));
            }
        }
        pop = next;
    }

    let (quality, bits) = pop
        .into_iter()
        .reduce(|best, cand| if better((cand.0, &cand.1), (best.0, &best.1)) { cand } else { best })
        .expect("population is never empty");
    SwitchConfig { bits, quality }
}

fn tournament<'a>(pop: &'a [(f64, Bits)], rng: &mut ChaCha8Rng) -> &'a Bits {
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    if better((b.0, &b.1), (a.0, &a.1)) {
        &b.1
    } else {
        &a.1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableKey {
    pub kind: RequestKind,
    pub theta_in_deg: i32,
    /// `None` for ABSORB.
    pub target_deg: Option<i32>,
}

impl TableKey {
    pub fn of(req: &CompileRequest) -> Self {
        Self {
            kind: req.kind,
            theta_in_deg: quantize_deg(req.theta_in),
            target_deg: (req.kind != RequestKind::Absorb).then(|| quantize_deg(req.theta_target)),
        }
    }

    pub fn request(&self) -> CompileRequest {
        let theta_in = (self.theta_in_deg as f64).to_radians();
        let theta_target = self.target_deg.map_or(0.0, |d| (d as f64).to_radians());
        CompileRequest { kind: self.kind, theta_in, theta_target }
    }
}

/// Best known switch configuration per quantized request, for one tile model.
#[derive(Clone, Debug, PartialEq)]
pub struct LookupTable {
    model: TileModel,
    entries: BTreeMap<TableKey, SwitchConfig>,
}

impl LookupTable {
    pub fn new(model: TileModel) -> Self {
        Self { model, entries: BTreeMap::new() }
    }

    pub fn model(&self) -> &TileModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&TableKey, &SwitchConfig)> {
        self.entries.iter()
    }

    pub fn get(&self, req: &CompileRequest) -> Option<&SwitchConfig> {
        self.entries.get(&TableKey::of(req))
    }

    /// Store `cfg` under the quantized key of `req` if it scores strictly
    /// higher than the current entry. The quality is recomputed from the
    /// bits. Returns whether the table changed.
    pub fn put(&mut self, req: &CompileRequest, cfg: &SwitchConfig) -> Result<bool, CompileError> {
        if cfg.bits.0.len() != self.model.bits() {
            return Err(CompileError::ModelMismatch { expected: self.model.bits(), got: cfg.bits.0.len() });
        }
        let key = TableKey::of(req);
        let keyed = key.request();
        let f = self.model.design_frequency;
        let eval = Evaluator::new(&self.model, keyed.theta_in, keyed.theta_target, f);
        let fresh = eval.score(key.kind, &cfg.bits);
        let floor = eval.score(key.kind, &Bits::all_off(self.model.columns as usize));
        if fresh < floor {
            return Ok(false);
        }
        if self.entries.get(&key).is_some_and(|old| old.quality >= fresh) {
            return Ok(false);
        }
        self.entries.insert(key, SwitchConfig { bits: cfg.bits.clone(), quality: fresh });
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<TableEntryJson> = self
            .entries
            .iter()
            .map(|(k, v)| TableEntryJson {
                kind: k.kind,
                theta_in_deg: k.theta_in_deg,
                target: k.target_deg,
                bits: v.bits.clone(),
                quality: v.quality,
            })
            .collect();
        serde_json::to_value(TableJson { model: self.model.clone(), entries }).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        let raw: TableJson = serde_json::from_str(s)?;
        let mut table = Self::new(raw.model);
        for e in raw.entries {
            let key = TableKey { kind: e.kind, theta_in_deg: e.theta_in_deg, target_deg: e.target };
            table.entries.insert(key, SwitchConfig { bits: e.bits, quality: e.quality });
        }
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    model: TileModel,
    entries: Vec<TableEntryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntryJson {
    kind: RequestKind,
    theta_in_deg: i32,
    target: Option<i32>,
    bits: Bits,
    quality: f64,
}
