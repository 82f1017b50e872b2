//! Plan-view geometry: walls, their tessellation into tiles, and exact
//! ray/segment queries against a [`Floorplan`].

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;

/// Tolerance used for self-intersection and grazing tests, in meters.
pub const EPSILON: f64 = 1e-9;

/// Tile size used when a scenario omits one.
pub const DEFAULT_TILE_SIZE: f64 = 0.5;

pub type WallId = u32;
pub type TileId = u32;

/// A point (or free vector) in the plan, in meters.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unit vector at `angle` radians from the +x axis.
    pub fn from_angle(angle: f64) -> Self {
        Self::new(angle.cos(), angle.sin())
    }
}

impl From<[f64; 2]> for Point2D {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<Point2D> for [f64; 2] {
    fn from(p: Point2D) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2D {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2D {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2D {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wall {
    pub id: WallId,
    pub a: Point2D,
    pub b: Point2D,
    pub coated: bool,
}

impl Wall {
    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn tangent(&self) -> Point2D {
        (self.b - self.a).normalized()
    }
}

/// One addressable HyperSurface patch on a coated wall.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub id: TileId,
    pub wall_id: WallId,
    pub center: Point2D,
    pub tangent: Point2D,
    /// Points into the room (the side the tile acts on).
    pub normal: Point2D,
    pub width: f64,
    pub partial: bool,
    /// Number of meta-atom columns across the tile.
    pub columns: u32,
}

impl Tile {
    pub fn start(&self) -> Point2D {
        self.center - self.tangent * (self.width / 2.0)
    }

    pub fn end(&self) -> Point2D {
        self.center + self.tangent * (self.width / 2.0)
    }

    /// True when `p` lies strictly on the side the tile faces.
    pub fn faces(&self, p: Point2D) -> bool {
        (p - self.center).dot(self.normal) > EPSILON
    }

    /// Signed angle, from the normal, of a wave arriving from `from`.
    /// Positive when the source sits on the +tangent side.
    pub fn arrival_angle(&self, from: Point2D) -> f64 {
        let v = (from - self.center).normalized();
        v.dot(self.tangent).atan2(v.dot(self.normal))
    }

    /// Signed angle, from the normal, of a wave leaving toward `to`.
    pub fn departure_angle(&self, to: Point2D) -> f64 {
        let v = (to - self.center).normalized();
        v.dot(self.tangent).atan2(v.dot(self.normal))
    }

    /// Unit direction leaving the tile at `angle` from the normal.
    pub fn direction_at(&self, angle: f64) -> Point2D {
        self.normal * angle.cos() + self.tangent * angle.sin()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    Tx,
    Rx,
    Eavesdropper,
    Blocked,
    Idle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Device {
    pub id: String,
    pub position: Point2D,
    pub role: Role,
    /// Transmit power; required for TX and BLOCKED devices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power_dbm: Option<f64>,
    pub frequency_hz: f64,
}

/// Result of [`trace_ray`]: the first wall surface in front of the ray.
#[derive(Clone, Debug, PartialEq)]
pub struct Hit {
    pub wall_id: WallId,
    /// `None` when the wall is uncoated.
    pub tile_id: Option<TileId>,
    pub point: Point2D,
    pub distance: f64,
    /// Signed angle between the reversed ray and the normal of the face hit,
    /// in (-pi/2, pi/2).
    pub incidence_angle: f64,
    /// Whether the ray struck the side the tiles face.
    pub front: bool,
}

/// Immutable scene: walls, the tiles covering coated walls, and devices.
#[derive(Clone, Debug, PartialEq)]
pub struct Floorplan {
    walls: Vec<Wall>,
    tiles: Vec<Tile>,
    devices: Vec<Device>,
    tile_size: f64,
    columns_per_tile: u32,
    interior_point: Point2D,
    // per wall (same order as `walls`): index range into `tiles`
    wall_tiles: Vec<std::ops::Range<usize>>,
}

/// Split `wall` into tiles of `tile_size`, ordered from `a` to `b`, with a
/// trailing partial tile for any remainder. Normals point toward `interior`.
/// Ids are assigned consecutively from `first_id`.
pub fn tessellate(
    wall: &Wall,
    tile_size: f64,
    columns_per_tile: u32,
    interior: Point2D,
    first_id: TileId,
) -> Vec<Tile> {
    assert!(tile_size > 0.0, "tile_size must be positive");
    let length = wall.length();
    assert!(length > 0.0, "wall length must be positive");

    let tangent = wall.tangent();
    let mut normal = tangent.perp();
    if (interior - wall.a).dot(normal) < 0.0 {
        normal = -normal;
    }

    let full = (length / tile_size + EPSILON).floor() as usize;
    let remainder = length - full as f64 * tile_size;
    let mut widths = vec![tile_size; full];
    if remainder > EPSILON {
        widths.push(remainder);
    }

    let mut offset = 0.0;
    widths
        .iter()
        .enumerate()
        .map(|(i, &width)| {
            let partial = i >= full;
            let columns = if partial {
                ((columns_per_tile as f64 * width / tile_size).round() as u32).max(1)
            } else {
                columns_per_tile
            };
            let tile = Tile {
                id: first_id + i as TileId,
                wall_id: wall.id,
                center: wall.a + tangent * (offset + width / 2.0),
                tangent,
                normal,
                width,
                partial,
                columns,
            };
            offset += width;
            tile
        })
        .collect()
}

impl Floorplan {
    /// Validate the inputs and tessellate every coated wall. Tile ids are
    /// assigned consecutively in wall order.
    pub fn new(
        walls: Vec<Wall>,
        devices: Vec<Device>,
        tile_size: f64,
        columns_per_tile: u32,
        interior_point: Point2D,
    ) -> Result<Self, ScenarioError> {
        if !(tile_size.is_finite() && tile_size > 0.0) {
            return Err(ScenarioError::invalid("tile_size", "must be a positive finite number"));
        }
        if columns_per_tile == 0 {
            return Err(ScenarioError::invalid("columns_per_tile", "must be at least 1"));
        }
        if !interior_point.is_finite() {
            return Err(ScenarioError::invalid("interior_point", "coordinates must be finite"));
        }

        let mut seen = std::collections::BTreeSet::new();
        for (i, wall) in walls.iter().enumerate() {
            if !seen.insert(wall.id) {
                return Err(ScenarioError::invalid(format!("walls[{i}].id"), format!("duplicate wall id {}", wall.id)));
            }
            if !wall.a.is_finite() || !wall.b.is_finite() {
                return Err(ScenarioError::invalid(format!("walls[{i}]"), "coordinates must be finite"));
            }
            if wall.length() <= EPSILON {
                return Err(ScenarioError::invalid(format!("walls[{i}]"), "wall has zero length"));
            }
            if wall.coated && (interior_point - wall.a).cross(wall.tangent()).abs() <= EPSILON {
                return Err(ScenarioError::invalid(
                    "interior_point",
                    format!("lies on the line of coated wall {}", wall.id),
                ));
            }
        }

        let mut ids = std::collections::BTreeSet::new();
        for (i, dev) in devices.iter().enumerate() {
            if !ids.insert(dev.id.as_str()) {
                return Err(ScenarioError::invalid(format!("devices[{i}].id"), format!("duplicate device id {:?}", dev.id)));
            }
            if !dev.position.is_finite() {
                return Err(ScenarioError::invalid(format!("devices[{i}].position"), "coordinates must be finite"));
            }
            if !(dev.frequency_hz.is_finite() && dev.frequency_hz > 0.0) {
                return Err(ScenarioError::invalid(format!("devices[{i}].frequency_hz"), "must be positive"));
            }
            if matches!(dev.role, Role::Tx | Role::Blocked) && dev.tx_power_dbm.is_none() {
                return Err(ScenarioError::invalid(
                    format!("devices[{i}].tx_power_dbm"),
                    "required for TX and BLOCKED devices",
                ));
            }
            if let Some(p) = dev.tx_power_dbm {
                if p.is_nan() || p == f64::INFINITY {
                    return Err(ScenarioError::invalid(format!("devices[{i}].tx_power_dbm"), "must be a number"));
                }
            }
            if dev.frequency_hz != devices[0].frequency_hz {
                return Err(ScenarioError::invalid(
                    format!("devices[{i}].frequency_hz"),
                    "all devices must share one carrier frequency",
                ));
            }
            for wall in &walls {
                if point_segment_distance(dev.position, wall.a, wall.b) <= EPSILON {
                    return Err(ScenarioError::invalid(
                        format!("devices[{i}].position"),
                        format!("lies on wall {}", wall.id),
                    ));
                }
            }
        }

        let mut tiles = Vec::new();
        let mut wall_tiles = Vec::with_capacity(walls.len());
        for wall in &walls {
            let start = tiles.len();
            if wall.coated {
                tiles.extend(tessellate(wall, tile_size, columns_per_tile, interior_point, start as TileId));
            }
            wall_tiles.push(start..tiles.len());
        }

        Ok(Self { walls, tiles, devices, tile_size, columns_per_tile, interior_point, wall_tiles })
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    pub fn tile_size(&self) -> f64 {
        self.tile_size
    }

    pub fn columns_per_tile(&self) -> u32 {
        self.columns_per_tile
    }

    pub fn interior_point(&self) -> Point2D {
        self.interior_point
    }

    /// Tile ids equal their index, so this is a direct lookup.
    pub fn tile(&self, id: TileId) -> Option<&Tile> {
        self.tiles.get(id as usize)
    }

    pub fn wall(&self, id: WallId) -> Option<&Wall> {
        self.walls.iter().find(|w| w.id == id)
    }

    pub fn tiles_of_wall(&self, id: WallId) -> &[Tile] {
        match self.walls.iter().position(|w| w.id == id) {
            Some(i) => &self.tiles[self.wall_tiles[i].clone()],
            None => &[],
        }
    }

    pub fn device(&self, id: &str) -> Option<&Device> {
        self.devices.iter().find(|d| d.id == id)
    }

    /// Carrier frequency shared by all devices (2.4 GHz when there are none).
    pub fn frequency(&self) -> f64 {
        self.devices.first().map_or(2.4e9, |d| d.frequency_hz)
    }

    /// Copy of this floorplan with a different device list. Positions are
    /// re-validated.
    pub fn with_devices(&self, devices: Vec<Device>) -> Result<Self, ScenarioError> {
        Self::new(self.walls.clone(), devices, self.tile_size, self.columns_per_tile, self.interior_point)
    }
}

/// Nearest wall surface strictly ahead of `origin` (distance > [`EPSILON`]).
/// Hits on the tile `exclude` are ignored.
pub fn trace_ray(origin: Point2D, direction: Point2D, plan: &Floorplan, exclude: Option<TileId>) -> Option<Hit> {
    let mut best: Option<Hit> = None;
    for (wi, wall) in plan.walls.iter().enumerate() {
        let edge = wall.b - wall.a;
        let denom = direction.cross(edge);
        if denom.abs() < 1e-15 {
            continue;
        }
        let ao = wall.a - origin;
        let s = ao.cross(edge) / denom;
        let u = ao.cross(direction) / denom;
        if s <= EPSILON || !(0.0..=1.0).contains(&u) {
            continue;
        }

        let tile_id = if wall.coated {
            let range = plan.wall_tiles[wi].clone();
            let along = u * wall.length();
            let tiles = &plan.tiles[range];
            // first tile whose far edge reaches `along`; boundaries go to the lower id
            let mut acc = 0.0;
            let idx = tiles
                .iter()
                .position(|t| {
                    acc += t.width;
                    along <= acc
                })
                .unwrap_or(tiles.len() - 1);
            Some(tiles[idx].id)
        } else {
            None
        };
        if tile_id.is_some() && tile_id == exclude {
            continue;
        }

        let closer = match &best {
            None => true,
            Some(b) => s < b.distance || (s == b.distance && tile_id < b.tile_id),
        };
        if !closer {
            continue;
        }

        let tangent = wall.tangent();
        let normal = match tile_id {
            Some(id) => plan.tiles[id as usize].normal,
            None => {
                let n = tangent.perp();
                if (plan.interior_point - wall.a).dot(n) < 0.0 {
                    -n
                } else {
                    n
                }
            }
        };
        let front = direction.dot(normal) < 0.0;
        let face = if front { normal } else { -normal };
        let back = -direction;
        best = Some(Hit {
            wall_id: wall.id,
            tile_id,
            point: origin + direction * s,
            distance: s,
            incidence_angle: back.dot(tangent).atan2(back.dot(face)),
            front,
        });
    }
    best
}

pub fn point_segment_distance(p: Point2D, a: Point2D, b: Point2D) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Minimum distance between segments `pq` and `ab`; zero when they cross.
pub fn segment_distance(p: Point2D, q: Point2D, a: Point2D, b: Point2D) -> f64 {
    let d1 = (q - p).cross(a - p);
    let d2 = (q - p).cross(b - p);
    let d3 = (b - a).cross(p - a);
    let d4 = (b - a).cross(q - a);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return 0.0;
    }
    point_segment_distance(p, a, b)
        .min(point_segment_distance(q, a, b))
        .min(point_segment_distance(a, p, q))
        .min(point_segment_distance(b, p, q))
}

/// True iff segment `pq` comes no closer than [`EPSILON`] to any wall.
pub fn line_of_sight(p: Point2D, q: Point2D, plan: &Floorplan) -> bool {
    line_of_sight_excluding(p, q, plan, &[])
}

/// [`line_of_sight`] ignoring the listed walls, used for endpoints that sit on
/// a wall (tile centers).
pub fn line_of_sight_excluding(p: Point2D, q: Point2D, plan: &Floorplan, skip: &[WallId]) -> bool {
    plan.walls
        .iter()
        .filter(|w| !skip.contains(&w.id))
        .all(|w| segment_distance(p, q, w.a, w.b) > EPSILON)
}
