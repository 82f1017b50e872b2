//! Reference computations written from first principles. Only plain data
//! (positions, tile endpoints and normals) comes from the library.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use pwe_core::controller::{NodeRef, Objective, ObjectiveKind};
use pwe_core::geometry::{Floorplan, Point2D, Role, TileId, Wall};

pub const C: f64 = 299_792_458.0;
pub const EPS: f64 = 1e-9;
/// Loss of one steering tile, -10 log10(0.8).
pub const TILE_DB: f64 = 0.969_100_130_080_564;

pub fn fspl(d: f64, f: f64) -> f64 {
    20.0 * (4.0 * PI * d.max(0.1) * f / C).log10()
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: Point2D, b: Point2D) -> (f64, f64) {
    (a.x - b.x, a.y - b.y)
}

pub fn point_seg(p: Point2D, a: Point2D, b: Point2D) -> f64 {
    let (dx, dy) = sub(b, a);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0) };
    ((a.x + t * dx - p.x).powi(2) + (a.y + t * dy - p.y).powi(2)).sqrt()
}

pub fn seg_seg(p: Point2D, q: Point2D, a: Point2D, b: Point2D) -> f64 {
    let o = |u: Point2D, v: Point2D, w: Point2D| cross(sub(v, u), sub(w, u));
    if o(a, b, p) * o(a, b, q) < 0.0 && o(p, q, a) * o(p, q, b) < 0.0 {
        return 0.0;
    }
    point_seg(p, a, b).min(point_seg(q, a, b)).min(point_seg(a, p, q)).min(point_seg(b, p, q))
}

pub fn clear(p: Point2D, q: Point2D, walls: &[Wall], skip: &[u32]) -> bool {
    walls.iter().filter(|w| !skip.contains(&w.id)).all(|w| seg_seg(p, q, w.a, w.b) > EPS)
}

/// Distance along the ray `o + s d` to segment `ab`, if hit ahead.
pub fn ray_seg(o: Point2D, d: Point2D, a: Point2D, b: Point2D) -> Option<f64> {
    let e = sub(b, a);
    let den = cross((d.x, d.y), e);
    if den.abs() < 1e-15 {
        return None;
    }
    let ao = sub(a, o);
    let s = cross(ao, e) / den;
    let u = cross(ao, (d.x, d.y)) / den;
    (s > EPS && (-1e-12..=1.0 + 1e-12).contains(&u)).then_some(s)
}

/// Exhaustive air-path search over explicit tile sequences.
pub struct Routes<'a> {
    pub plan: &'a Floorplan,
    pub freq: f64,
}

impl Routes<'_> {
    pub fn pos(&self, n: &NodeRef) -> Point2D {
        match n {
            NodeRef::Tile(t) => self.plan.tiles()[*t as usize].center,
            NodeRef::Device(d) => self.plan.device(d).unwrap().position,
        }
    }

    pub fn link_ok(&self, a: &NodeRef, b: &NodeRef) -> bool {
        let (pa, pb) = (self.pos(a), self.pos(b));
        let mut skip = Vec::new();
        for (me, other) in [(a, pb), (b, pa)] {
            if let NodeRef::Tile(t) = me {
                let tile = &self.plan.tiles()[*t as usize];
                if (other - tile.center).dot(tile.normal) <= EPS {
                    return false;
                }
                skip.push(tile.wall_id);
            }
        }
        clear(pa, pb, self.plan.walls(), &skip)
    }

    pub fn spies(&self, obj: &Objective) -> Vec<Point2D> {
        self.plan
            .devices()
            .iter()
            .filter(|d| d.role == Role::Eavesdropper && d.id != obj.src && Some(&d.id) != obj.dst.as_ref())
            .map(|d| d.position)
            .collect()
    }

    /// Loss of `nodes` when it is a compliant route.
    pub fn evaluate(&self, obj: &Objective, nodes: &[NodeRef]) -> Option<f64> {
        let spies = if obj.kind == ObjectiveKind::SecureLink { self.spies(obj) } else { vec![] };
        let mut len = 0.0;
        for w in nodes.windows(2) {
            if w[0] == w[1] || !self.link_ok(&w[0], &w[1]) {
                return None;
            }
            let (a, b) = (self.pos(&w[0]), self.pos(&w[1]));
            if spies.iter().any(|&s| point_seg(s, a, b) <= obj.avoid_radius) {
                return None;
            }
            len += a.distance(b);
        }
        Some(fspl(len, self.freq) + (nodes.len() - 2) as f64 * TILE_DB)
    }

    /// Minimum loss over every tile sequence of at most `max` tiles.
    pub fn best(&self, obj: &Objective, max: usize) -> Option<f64> {
        let src = NodeRef::Device(obj.src.clone());
        let dst = NodeRef::Device(obj.dst.clone().unwrap());
        let tiles: Vec<TileId> = self.plan.tiles().iter().map(|t| t.id).collect();
        let mut best: Option<f64> = None;
        let mut seqs: Vec<Vec<TileId>> = vec![vec![]];
        for _ in 0..=max {
            let mut next = Vec::new();
            for s in &seqs {
                let mut nodes = vec![src.clone()];
                nodes.extend(s.iter().map(|&t| NodeRef::Tile(t)));
                nodes.push(dst.clone());
                if let Some(l) = self.evaluate(obj, &nodes) {
                    best = Some(best.map_or(l, |b: f64| b.min(l)));
                }
                if s.len() < max {
                    let last = s.last().map_or(src.clone(), |&x| NodeRef::Tile(x));
                    for &t in &tiles {
                        if last != NodeRef::Tile(t) && self.link_ok(&last, &NodeRef::Tile(t)) {
                            let mut e = s.clone();
                            e.push(t);
                            next.push(e);
                        }
                    }
                }
            }
            seqs = next;
        }
        best
    }
}

/// Tiles first struck on their front face by a uniform `n`-ray fan from
/// `dev` with at least `p_min` dBm.
pub fn fan_tiles(plan: &Floorplan, dev: &str, n: usize, p_min: f64) -> BTreeSet<TileId> {
    let d = plan.device(dev).unwrap();
    let mut out = BTreeSet::new();
    for i in 0..n {
        let dir = Point2D::from_angle(2.0 * PI * i as f64 / n as f64);
        let mut best: Option<(f64, Option<TileId>)> = None;
        for w in plan.walls().iter().filter(|w| !w.coated) {
            if let Some(s) = ray_seg(d.position, dir, w.a, w.b) {
                if best.is_none_or(|b| s < b.0) {
                    best = Some((s, None));
                }
            }
        }
        for t in plan.tiles() {
            if let Some(s) = ray_seg(d.position, dir, t.start(), t.end()) {
                if best.is_none_or(|b| s < b.0 - 1e-12) {
                    best = Some((s, Some(t.id)));
                }
            }
        }
        if let Some((s, Some(t))) = best {
            let tile = &plan.tiles()[t as usize];
            if dir.dot(tile.normal) < 0.0 && d.tx_power_dbm.unwrap() - fspl(s, d.frequency_hz) >= p_min {
                out.insert(t);
            }
        }
    }
    out
}

/// Best steering score of an `n`-column half-wavelength tile over every
/// distinct switch state: fraction of the 1-degree grid power at `target`.
pub fn brute_steering(n: usize, theta_in: f64, target: f64) -> f64 {
    let af2 = |w: &[f64], out: f64| {
        let u = theta_in.sin() + out.sin();
        let (mut re, mut im) = (0.0, 0.0);
        for (i, wi) in w.iter().enumerate() {
            re += wi * (PI * i as f64 * u).cos();
            im += wi * (PI * i as f64 * u).sin();
        }
        (re * re + im * im) / (n * n) as f64
    };
    let grid: Vec<f64> = (-89..=89).map(|d| (d as f64).to_radians()).collect();
    let mut best: f64 = 0.0;
    for code in 0..3usize.pow(n as u32) {
        // off columns contribute nothing whatever their phase bit
        let w: Vec<f64> = (0..n).map(|i| [0.0, 1.0, -1.0][code / 3usize.pow(i as u32) % 3]).collect();
        let peak = af2(&w, target);
        if peak == 0.0 {
            continue;
        }
        let total: f64 = grid.iter().map(|&t| af2(&w, t)).sum();
        best = best.max((peak / total.max(1e-12 / (n * n) as f64)).min(1.0));
    }
    best
}

/// |sum sqrt(g) e^{i(phi + offset)}|^2.
pub fn coherent(gains: &[f64], phases: &[f64], offsets: &[f64]) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for ((g, p), o) in gains.iter().zip(phases).zip(offsets) {
        re += g.sqrt() * (p + o).cos();
        im += g.sqrt() * (p + o).sin();
    }
    re * re + im * im
}

/// Best coherent power over all 2^K choices of 0/pi offsets.
pub fn brute_align(gains: &[f64], phases: &[f64]) -> f64 {
    let k = gains.len();
    (0..1u32 << k)
        .map(|m| {
            let offs: Vec<f64> = (0..k).map(|i| if m >> i & 1 == 1 { PI } else { 0.0 }).collect();
            coherent(gains, phases, &offs)
        })
        .fold(0.0, f64::max)
}

/// Queue-based BFS depths from `root`.
pub fn bfs(n: u32, links: &[(u32, u32)], root: u32) -> BTreeMap<u32, usize> {
    let mut adj = vec![Vec::new(); n as usize];
    for &(a, b) in links {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut dist = BTreeMap::from([(root, 0)]);
    let mut q = VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u as usize] {
            if !dist.contains_key(&v) {
                dist.insert(v, dist[&u] + 1);
                q.push_back(v);
            }
        }
    }
    dist
}
