//! Deterministic SVG output for polygons, strips, partitions, necklaces and
//! orbit traces.
//!
//! Geometry stays exact up to the last moment: unbounded regions are
//! clipped to the viewport box exactly, and only the clipped vertices are
//! converted to decimals.

use std::fmt::Write as _;

use crate::billiards::Partition;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::Point;
use crate::paths::PathSet;
use crate::quasi::Bead;
use crate::region::ConvexRegion;
use crate::strips::PinwheelSystem;

/// Something drawable.
#[derive(Clone, Debug)]
pub enum Item<F: Field> {
    /// A closed polygon outline with a fill.
    Polygon { id: String, vertices: Vec<Point<F>>, fill: String },
    /// A convex region, clipped to the viewport.
    Region { id: String, region: ConvexRegion<F>, fill: String, title: Option<String> },
    /// An orbit as dots joined by a thin polyline.
    Trace { id: String, points: Vec<Point<F>>, stroke: String },
}

/// Axis-aligned box `[x0, x1] × [y0, y1]` in exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viewport<F: Field> {
    pub x0: F,
    pub y0: F,
    pub x1: F,
    pub y1: F,
}

impl<F: Field> Viewport<F> {
    /// Smallest box around `points`, padded by `pad` on every side.
    pub fn around<'a>(points: impl IntoIterator<Item = &'a Point<F>>, pad: &F) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut v = Viewport { x0: first.x.clone(), y0: first.y.clone(), x1: first.x.clone(), y1: first.y.clone() };
        for p in it {
            if p.x < v.x0 {
                v.x0 = p.x.clone();
            }
            if p.x > v.x1 {
                v.x1 = p.x.clone();
            }
            if p.y < v.y0 {
                v.y0 = p.y.clone();
            }
            if p.y > v.y1 {
                v.y1 = p.y.clone();
            }
        }
        let pad = if pad.is_positive() { pad.clone() } else { F::one() };
        v.x0 = v.x0 - &pad;
        v.y0 = v.y0 - &pad;
        v.x1 = v.x1 + &pad;
        v.y1 = v.y1 + &pad;
        Some(v)
    }

    pub fn region(&self) -> ConvexRegion<F> {
        ConvexRegion::closed_box(self.x0.clone(), self.y0.clone(), self.x1.clone(), self.y1.clone())
    }
}

/// An ordered list of items and a viewport.
#[derive(Clone, Debug)]
pub struct Scene<F: Field> {
    pub items: Vec<Item<F>>,
    pub viewport: Option<Viewport<F>>,
    pub title: Option<String>,
}

impl<F: Field> Default for Scene<F> {
    fn default() -> Self {
        Scene { items: Vec::new(), viewport: None, title: None }
    }
}

const PALETTE: [&str; 10] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
];

fn color(i: usize) -> String {
    PALETTE[i % PALETTE.len()].to_string()
}

impl<F: Field> Scene<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: Item<F>) -> &mut Self {
        self.items.push(item);
        self
    }

    pub fn with_viewport(mut self, v: Viewport<F>) -> Self {
        self.viewport = Some(v);
        self
    }

    /// Forward partition, polygon on top. The default viewport is the
    /// bounded-tile extent plus two strip widths, with the L∞ size of the
    /// largest strip vector standing in for the width.
    pub fn partition(system: &PinwheelSystem<F>, partition: &Partition<F>, paths: Option<&PathSet<F>>) -> Self {
        let mut scene = Scene::new();
        let n = system.n();
        for (i, tile) in partition.tiles().iter().enumerate() {
            let path = paths.and_then(|ps| ps.path_for_label(tile.label).ok());
            let title = match path {
                Some(p) => format!("{} path {}", tile.label, p.display_name(n)),
                None => tile.label.to_string(),
            };
            scene.push(Item::Region {
                id: format!("tile-{}-{}", tile.label.v + 1, tile.label.w + 1),
                region: tile.region.clone(),
                fill: color(i),
                title: Some(title),
            });
        }
        scene.push(Item::Polygon { id: "polygon".into(), vertices: system.polygon().vertices().to_vec(), fill: "#333333".into() });
        let width = system
            .pairs()
            .iter()
            .map(|p| Field::abs(&p.vector.x).max(Field::abs(&p.vector.y)))
            .max()
            .unwrap_or_else(F::one);
        let mut pts: Vec<Point<F>> = system.polygon().vertices().to_vec();
        for t in partition.tiles().iter().filter(|t| t.bounded) {
            if let Some(vs) = t.region.vertices() {
                pts.extend(vs.iter().cloned());
            }
        }
        scene.viewport = Viewport::around(&pts, &width.twice());
        scene
    }

    /// The polygon and its pinwheel strips.
    pub fn strips(system: &PinwheelSystem<F>) -> Self {
        let mut scene = Scene::new();
        for (j, pair) in system.pairs().iter().enumerate() {
            scene.push(Item::Region {
                id: format!("strip-{}", j + 1),
                region: pair.closed_strip(),
                fill: color(j),
                title: Some(format!("strip {}", j + 1)),
            });
        }
        scene.push(Item::Polygon { id: "polygon".into(), vertices: system.polygon().vertices().to_vec(), fill: "#333333".into() });
        let w = system.pairs().iter().map(|p| Field::abs(&p.vector.x).max(Field::abs(&p.vector.y))).max().unwrap_or_else(F::one);
        scene.viewport = Viewport::around(system.polygon().vertices(), &w.twice());
        scene
    }

    /// A necklace ring, one colour per strip index.
    pub fn necklace(system: &PinwheelSystem<F>, ring: &[Bead<F>]) -> Self {
        let mut scene = Scene::new();
        let mut pts = system.polygon().vertices().to_vec();
        for (j, bead) in ring.iter().enumerate() {
            for (side, spec) in [("plus", &bead.plus), ("minus", &bead.minus)] {
                for (which, vs) in [("p", &spec.p), ("q", &spec.q)] {
                    scene.push(Item::Polygon { id: format!("bead-{}-{side}-{which}", j + 1), vertices: vs.clone(), fill: color(j) });
                    pts.extend(vs.iter().cloned());
                }
            }
        }
        scene.push(Item::Polygon { id: "polygon".into(), vertices: system.polygon().vertices().to_vec(), fill: "#333333".into() });
        scene.viewport = Viewport::around(&pts, &F::one());
        scene
    }

    /// Adds an orbit trace and widens the viewport to contain it.
    pub fn add_trace(&mut self, id: &str, points: Vec<Point<F>>) {
        if let Some(v) = &self.viewport {
            let corners = [Point::new(v.x0.clone(), v.y0.clone()), Point::new(v.x1.clone(), v.y1.clone())];
            self.viewport = Viewport::around(corners.iter().chain(points.iter()), &F::zero());
        }
        self.push(Item::Trace { id: id.to_string(), points, stroke: "#d62728".into() });
    }

    fn auto_viewport(&self) -> Option<Viewport<F>> {
        let mut pts: Vec<&Point<F>> = Vec::new();
        for item in &self.items {
            match item {
                Item::Polygon { vertices, .. } => pts.extend(vertices),
                Item::Trace { points, .. } => pts.extend(points),
                Item::Region { region, .. } => {
                    if let Some(vs) = region.vertices() {
                        pts.extend(vs);
                    }
                }
            }
        }
        Viewport::around(pts, &F::one())
    }

    /// SVG 1.1 text. The same scene always yields the same bytes.
    pub fn to_svg(&self) -> Result<String> {
        if self.items.is_empty() {
            return Err(Error::EmptyScene);
        }
        let view = match &self.viewport {
            Some(v) => v.clone(),
            None => self.auto_viewport().ok_or(Error::EmptyScene)?,
        };
        let clip = view.region();
        let (x0, y0, x1, y1) = (view.x0.to_f64(), view.y0.to_f64(), view.x1.to_f64(), view.y1.to_f64());
        let (w, h) = (x1 - x0, y1 - y0);
        let stroke = w.max(h) / 800.0;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            num((800.0 * h / w).round()),
            num(x0),
            num(-y1),
            num(w),
            num(h)
        );
        if let Some(t) = &self.title {
            let _ = writeln!(out, "<title>{}</title>", escape(t));
        }
        // Flip y so that the picture has the usual orientation.
        let _ = writeln!(out, "<g transform=\"scale(1,-1)\" stroke=\"#000000\" stroke-width=\"{}\">", num(stroke));
        for item in &self.items {
            match item {
                Item::Polygon { id, vertices, fill } => {
                    let _ = writeln!(out, "<polygon id=\"{}\" fill=\"{}\" points=\"{}\"/>", escape(id), fill, point_list(vertices));
                }
                Item::Region { id, region, fill, title } => {
                    let clipped = region.intersect(&clip);
                    let Some(vs) = clipped.vertices() else { continue };
                    let _ = write!(out, "<path id=\"{}\" fill=\"{}\" d=\"M {} Z\"", escape(id), fill, point_list(vs));
                    match title {
                        Some(t) => {
                            let _ = writeln!(out, "><title>{}</title></path>", escape(t));
                        }
                        None => out.push_str("/>\n"),
                    }
                }
                Item::Trace { id, points, stroke: color } => {
                    let _ = writeln!(out, "<g id=\"{}\" stroke=\"{}\" fill=\"{}\">", escape(id), color, color);
                    if points.len() > 1 {
                        let _ = writeln!(out, "<polyline fill=\"none\" stroke-opacity=\"0.4\" points=\"{}\"/>", point_list(points));
                    }
                    for p in points {
                        let (x, y) = p.to_f64();
                        let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", num(x), num(y), num(stroke * 2.0));
                    }
                    out.push_str("</g>\n");
                }
            }
        }
        out.push_str("</g>\n</svg>\n");
        Ok(out)
    }
}

fn point_list<F: Field>(pts: &[Point<F>]) -> String {
    let parts: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = p.to_f64();
            format!("{},{}", num(x), num(y))
        })
        .collect();
    parts.join(" ")
}

/// Decimal with 12 significant digits and no trailing zeros.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let scale = 10f64.powi(mag - 11);
    let rounded = if mag > 11 { (x / scale).round() * scale } else { x };
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::polygon::NicePolygon;

    fn triangle() -> PinwheelSystem<Rational> {
        PinwheelSystem::new(NicePolygon::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap())
    }

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(-2.0), "-2");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(123456789012345.0), "123456789012000");
    }

    #[test]
    fn empty_scene_is_an_error() {
        assert_eq!(Scene::<Rational>::new().to_svg(), Err(Error::EmptyScene));
    }

    #[test]
    fn lone_triangle() {
        let mut s = Scene::<Rational>::new();
        s.push(Item::Polygon { id: "t".into(), vertices: triangle().polygon().vertices().to_vec(), fill: "#000".into() });
        let svg = s.to_svg().unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn partition_is_stable() {
        let sys = triangle();
        let part = Partition::forward(sys.polygon());
        let a = Scene::partition(&sys, &part, None).to_svg().unwrap();
        let b = Scene::partition(&sys, &part, None).to_svg().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<path").count(), 6);
    }
}
