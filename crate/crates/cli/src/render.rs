//! SVG floorplan: walls, tiles colored by function, devices and air paths.

use std::collections::BTreeMap;
use std::fmt::Write;

use pwe_core::controller::{NodeRef, ObjectiveKind};
use pwe_core::geometry::{Floorplan, Point2D, Role, TileId};

use crate::report::RunReport;

const SCALE: f64 = 60.0;
const MARGIN: f64 = 40.0;
const LEGEND_H: f64 = 70.0;
const TICK: f64 = 0.18;

pub fn function_color(kind: &str) -> &'static str {
    match kind {
        "STEER" => "#2ca02c",
        "ABSORB" => "#d62728",
        "FOCUS" => "#ff7f0e",
        _ => "#7f7f7f",
    }
}

pub fn objective_color(kind: ObjectiveKind) -> &'static str {
    match kind {
        ObjectiveKind::LinkOptimize => "#1f77b4",
        ObjectiveKind::SecureLink => "#9467bd",
        ObjectiveKind::PowerTransfer => "#8c564b",
        ObjectiveKind::Block => "#000000",
    }
}

/// CSS class name of an objective kind, e.g. `link-optimize`.
pub fn objective_class(kind: ObjectiveKind) -> String {
    kind.name().to_lowercase().replace('_', "-")
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Tx => "TX",
        Role::Rx => "RX",
        Role::Eavesdropper => "EAVESDROPPER",
        Role::Blocked => "BLOCKED",
        Role::Idle => "IDLE",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn map(&self, p: Point2D) -> (f64, f64) {
        (MARGIN + (p.x - self.min_x) * SCALE, MARGIN + (self.max_y - p.y) * SCALE)
    }
}

/// Render `plan` with the tile states and air paths recorded in `report`.
/// Identical inputs give identical bytes.
pub fn render_svg(plan: &Floorplan, report: &RunReport) -> String {
    let mut pts: Vec<Point2D> = plan.walls().iter().flat_map(|w| [w.a, w.b]).collect();
    pts.extend(plan.devices().iter().map(|d| d.position));
    let (min_x, max_x, min_y, max_y) = if pts.is_empty() {
        (0.0, 4.0, 0.0, 3.0)
    } else {
        pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY), |(a, b, c, d), p| {
            (a.min(p.x), b.max(p.x), c.min(p.y), d.max(p.y))
        })
    };
    let frame = Frame { min_x, max_y };
    let width = (max_x - min_x) * SCALE + 2.0 * MARGIN;
    let width = width.max(560.0);
    let plot_h = (max_y - min_y) * SCALE + 2.0 * MARGIN;
    let height = plot_h + LEGEND_H;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(s, r##"<rect class="canvas" x="0" y="0" width="{width:.0}" height="{height:.0}" fill="#ffffff"/>"##);

    for w in plan.walls() {
        let (x1, y1) = frame.map(w.a);
        let (x2, y2) = frame.map(w.b);
        let class = if w.coated { "wall coated" } else { "wall bare" };
        let dash = if w.coated { "" } else { r#" stroke-dasharray="6 4""# };
        let _ = writeln!(
            s,
            r##"<line class="{class}" data-wall="{}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#333333" stroke-width="3"{dash}/>"##,
            w.id
        );
    }

    let states: BTreeMap<TileId, &str> = report.tiles.iter().map(|t| (t.tile_id, t.function.kind_name())).collect();
    for t in plan.tiles() {
        let kind = states.get(&t.id).copied().unwrap_or("SPECULAR");
        let (x1, y1) = frame.map(t.center);
        let (x2, y2) = frame.map(t.center + t.normal * TICK);
        let _ = writeln!(
            s,
            r#"<line class="tile {}" data-tile="{}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{}" stroke-width="3"/>"#,
            kind.to_lowercase(),
            t.id,
            function_color(kind)
        );
    }

    for o in &report.objectives {
        let Some(path) = &o.path else { continue };
        let coords: Vec<String> = path
            .nodes
            .iter()
            .filter_map(|n| match n {
                NodeRef::Tile(t) => plan.tile(*t).map(|t| t.center),
                NodeRef::Device(d) => plan.device(d).map(|d| d.position),
            })
            .map(|p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let kind = o.objective.kind;
        let _ = writeln!(
            s,
            r#"<polyline class="airpath {}" data-objective="{}" points="{}" fill="none" stroke="{}" stroke-width="2" stroke-opacity="0.85"/>"#,
            objective_class(kind),
            escape(&o.label),
            coords.join(" "),
            objective_color(kind)
        );
    }

    for d in plan.devices() {
        let (x, y) = frame.map(d.position);
        let role = role_name(d.role);
        let _ = writeln!(
            s,
            r##"<circle class="device {}" cx="{x:.2}" cy="{y:.2}" r="6" fill="#ffffff" stroke="#000000" stroke-width="2"/>"##,
            role.to_lowercase()
        );
        let _ = writeln!(
            s,
            r#"<text class="label" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{} ({})</text>"#,
            x + 9.0,
            y - 9.0,
            escape(&d.id),
            role
        );
    }

    let _ = writeln!(s, r#"<g class="legend" font-family="sans-serif" font-size="11">"#);
    let y0 = plot_h + 10.0;
    for (i, kind) in ["STEER", "ABSORB", "FOCUS", "SPECULAR"].iter().enumerate() {
        let x = MARGIN + i as f64 * 120.0;
        let _ = writeln!(
            s,
            r#"<rect class="swatch tile {}" x="{x:.2}" y="{y0:.2}" width="14" height="14" fill="{}"/>"#,
            kind.to_lowercase(),
            function_color(kind)
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{kind} tile</text>"#, x + 20.0, y0 + 11.0);
    }
    let y1 = y0 + 28.0;
    for (i, kind) in [ObjectiveKind::LinkOptimize, ObjectiveKind::SecureLink, ObjectiveKind::PowerTransfer].into_iter().enumerate() {
        let x = MARGIN + i as f64 * 160.0;
        let _ = writeln!(
            s,
            r#"<rect class="swatch airpath {}" x="{x:.2}" y="{:.2}" width="24" height="4" fill="{}"/>"#,
            objective_class(kind),
            y1 + 5.0,
            objective_color(kind)
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 30.0, y1 + 11.0, kind.name());
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
