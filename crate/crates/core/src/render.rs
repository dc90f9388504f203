//! Deterministic SVG frames.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::homeo::PlanarMap;
use crate::metric::{BBox, Point2, Region};
use crate::scene::LoadedScene;

pub const CANVAS: f64 = 800.0;
const PER_CIRCLE: usize = 256;

/// Fixed affine map from the domain's bounding box to the canvas, y up.
#[derive(Clone, Copy, Debug)]
pub struct Viewport {
    bbox: BBox,
    scale: f64,
}

impl Viewport {
    pub fn new(domain: &Region) -> Self {
        let bbox = domain.bbox().unwrap_or(BBox::around(Point2::ORIGIN, 1.0)).expand(1e-9);
        let side = bbox.width().max(bbox.height()) * 1.05;
        Viewport { bbox, scale: CANVAS / side }
    }

    pub fn to_canvas(&self, p: Point2) -> (f64, f64) {
        let c = Point2::new((self.bbox.min.x + self.bbox.max.x) / 2.0, (self.bbox.min.y + self.bbox.max.y) / 2.0);
        (CANVAS / 2.0 + (p.x - c.x) * self.scale, CANVAS / 2.0 - (p.y - c.y) * self.scale)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

fn polyline(out: &mut String, view: &Viewport, pts: &[Point2], style: &str) {
    if pts.is_empty() {
        return;
    }
    out.push_str("<polygon points=\"");
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = view.to_canvas(*p);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.3},{y:.3}");
    }
    let _ = writeln!(out, "\" {style}/>");
}

/// One frame: domain, `U` (dashed) and the image of every element stage outline.
pub fn frame_svg(loaded: &LoadedScene, h: &impl PlanarMap) -> String {
    let view = Viewport::new(&loaded.scene.domain);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\"/>");
    for line in loaded.scene.domain.outlines(PER_CIRCLE) {
        polyline(&mut out, &view, &line, "fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"");
    }
    for line in loaded.decomposition.u.outlines(PER_CIRCLE) {
        polyline(&mut out, &view, &line, "fill=\"none\" stroke=\"#3366cc\" stroke-width=\"1\" stroke-dasharray=\"6 4\"");
    }
    let palette = ["#cc3333", "#dd8822", "#339933"];
    for e in &loaded.decomposition.elements {
        let _ = writeln!(out, "<g id=\"element-{}\">", e.id);
        for (i, body) in e.bodies.iter().enumerate() {
            if e.stages[i].len() == 1 {
                continue;
            }
            let style = format!(
                "fill=\"{c}\" fill-opacity=\"0.25\" stroke=\"{c}\" stroke-width=\"1\"",
                c = palette[i % palette.len()]
            );
            for line in body.outlines(PER_CIRCLE) {
                let img: Vec<Point2> = line.iter().map(|p| h.apply(*p)).collect();
                polyline(&mut out, &view, &img, &style);
            }
        }
        let (x, y) = view.to_canvas(h.apply(e.point));
        let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2\" fill=\"black\"/>");
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(loaded: &LoadedScene, h: &impl PlanarMap, path: &Path) -> Result<()> {
    std::fs::write(path, frame_svg(loaded, h))?;
    Ok(())
}

/// Canvas-space bounding boxes of the `<polygon>` elements of a frame.
pub fn polygon_bboxes(svg: &str) -> Vec<BBox> {
    svg.lines()
        .filter_map(|l| l.strip_prefix("<polygon points=\""))
        .map(|rest| {
            let pts = rest.split('"').next().unwrap_or("");
            let pts: Vec<Point2> = pts
                .split(' ')
                .filter_map(|xy| {
                    let (x, y) = xy.split_once(',')?;
                    Some(Point2::new(x.parse().ok()?, y.parse().ok()?))
                })
                .collect();
            BBox::of_points(&pts)
        })
        .collect()
}
