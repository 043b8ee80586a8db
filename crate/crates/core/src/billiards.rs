//! Outer billiards, its square `ψ`, and the forward and backward partitions.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{HalfPlane, Point, Sense, Vector2};
use crate::polygon::NicePolygon;
use crate::region::{ConvexRegion, Location};

/// Ordered pair of tangent vertices. For the forward map `v` is used first;
/// for the backward map the label of `ψ(p)` is `(w, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileLabel {
    pub v: usize,
    pub w: usize,
}

impl TileLabel {
    pub fn new(v: usize, w: usize) -> Self {
        TileLabel { v, w }
    }

    pub fn reversed(self) -> Self {
        TileLabel { v: self.w, w: self.v }
    }

    /// `2(w − v)`.
    pub fn translation<F: Field>(&self, polygon: &NicePolygon<F>) -> Vector2<F> {
        (polygon.vertex(self.w) - polygon.vertex(self.v)).twice()
    }

    pub fn to_json(&self) -> Value {
        json!([self.v + 1, self.w + 1])
    }
}

impl std::fmt::Display for TileLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.v + 1, self.w + 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Hand {
    Right,
    Left,
}

impl Hand {
    fn wanted(self) -> Ordering {
        match self {
            Hand::Right => Ordering::Less,
            Hand::Left => Ordering::Greater,
        }
    }

    fn sense(self) -> Sense {
        match self {
            Hand::Right => Sense::Lt,
            Hand::Left => Sense::Gt,
        }
    }
}

impl<F: Field> NicePolygon<F> {
    fn tangent(&self, p: &Point<F>, hand: Hand) -> Result<usize> {
        if self.locate(p) != Location::Outside {
            return Err(Error::InsidePolygon);
        }
        self.tangent_outside(p, hand)
    }

    fn tangent_outside(&self, p: &Point<F>, hand: Hand) -> Result<usize> {
        let want = hand.wanted();
        let mut weak = false;
        for i in 0..self.n() {
            let v = self.vertex(i);
            let ray = v - p;
            let s1 = ray.cross(&(self.vertex(self.prev(i)) - p)).sign();
            let s2 = ray.cross(&(self.vertex(self.next(i)) - p)).sign();
            if s1 == want && s2 == want {
                return Ok(i);
            }
            if (s1 == want || s1 == Ordering::Equal) && (s2 == want || s2 == Ordering::Equal) {
                weak = true;
            }
        }
        debug_assert!(weak, "an exterior point always has a supporting line");
        Err(Error::OnPrimaryWall)
    }

    /// The vertex `v` with the polygon strictly to the right of the ray `p → v`.
    pub fn tangent_vertex(&self, p: &Point<F>) -> Result<usize> {
        self.tangent(p, Hand::Right)
    }

    /// Mirror rule used by the inverse map: polygon strictly to the left.
    pub fn left_tangent_vertex(&self, p: &Point<F>) -> Result<usize> {
        self.tangent(p, Hand::Left)
    }

    /// The outer billiards map `p ↦ 2v − p`.
    pub fn outer_step(&self, p: &Point<F>) -> Result<Point<F>> {
        let v = self.tangent_vertex(p)?;
        Ok(p.reflect_through(self.vertex(v)))
    }

    pub fn inverse_outer_step(&self, p: &Point<F>) -> Result<Point<F>> {
        let v = self.left_tangent_vertex(p)?;
        Ok(p.reflect_through(self.vertex(v)))
    }

    fn two_steps(&self, p: &Point<F>, hand: Hand) -> Result<(Point<F>, Option<TileLabel>)> {
        if self.locate(p) != Location::Outside {
            return Ok((p.clone(), None));
        }
        let stage = |k: usize| move |e: Error| if e == Error::OnPrimaryWall { Error::UndefinedOnWall { stage: k } } else { e };
        // Reflecting through a supporting vertex keeps the point outside.
        let v = self.tangent_outside(p, hand).map_err(stage(1))?;
        let x = p.reflect_through(self.vertex(v));
        let w = self.tangent_outside(&x, hand).map_err(stage(2))?;
        Ok((x.reflect_through(self.vertex(w)), Some(TileLabel::new(v, w))))
    }

    /// `ψ(p) = p + 2(w − v)` with its label; the identity on the closed polygon.
    pub fn square_map(&self, p: &Point<F>) -> Result<(Point<F>, Option<TileLabel>)> {
        self.two_steps(p, Hand::Right)
    }

    /// `ψ⁻¹` with its backward label.
    pub fn inverse_square_map(&self, p: &Point<F>) -> Result<(Point<F>, Option<TileLabel>)> {
        self.two_steps(p, Hand::Left)
    }

    /// `ψ(p)` for an exterior point.
    pub fn psi(&self, p: &Point<F>) -> Result<(Point<F>, TileLabel)> {
        match self.square_map(p)? {
            (q, Some(l)) => Ok((q, l)),
            (_, None) => Err(Error::InsidePolygon),
        }
    }

    fn cone(&self, v: usize, hand: Hand) -> ConvexRegion<F> {
        let (a, b) = (self.vertex(self.prev(v)), self.vertex(self.next(v)));
        let vv = self.vertex(v);
        ConvexRegion::new(vec![HalfPlane::from_cross(vv, a, hand.sense()), HalfPlane::from_cross(vv, b, hand.sense())])
    }

    /// Open cone of points whose tangent vertex is `v`.
    pub fn primary_cone(&self, v: usize) -> ConvexRegion<F> {
        self.cone(v, Hand::Right)
    }

    pub fn backward_cone(&self, v: usize) -> ConvexRegion<F> {
        self.cone(v, Hand::Left)
    }

    /// `cone(v) ∩ (2v − cone(w))`.
    pub fn tile_region(&self, label: TileLabel) -> ConvexRegion<F> {
        let c = self.primary_cone(label.v);
        c.intersect(&self.primary_cone(label.w).point_reflect(self.vertex(label.v)))
    }

    pub fn backward_tile_region(&self, label: TileLabel) -> ConvexRegion<F> {
        let c = self.backward_cone(label.v);
        c.intersect(&self.backward_cone(label.w).point_reflect(self.vertex(label.v)))
    }
}

/// One region of a partition.
#[derive(Clone, Debug)]
pub struct Tile<F: Field> {
    pub label: TileLabel,
    pub region: ConvexRegion<F>,
    pub translation: Vector2<F>,
    pub bounded: bool,
}

impl<F: Field> Tile<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label.to_json(),
            "V": self.translation.to_json(),
            "bounded": self.bounded,
            "region": self.region.to_json(),
        })
    }
}

/// Forward or backward partition of the exterior.
#[derive(Clone, Debug)]
pub struct Partition<F: Field> {
    tiles: Vec<Tile<F>>,
    by_label: HashMap<TileLabel, usize>,
    backward: bool,
}

impl<F: Field> Partition<F> {
    fn build(polygon: &NicePolygon<F>, backward: bool) -> Self {
        let n = polygon.n();
        let labels: Vec<TileLabel> = (0..n).flat_map(|v| (0..n).map(move |w| TileLabel::new(v, w))).collect();
        let tiles: Vec<Tile<F>> = labels
            .par_iter()
            .map(|&label| {
                let region = if backward { polygon.backward_tile_region(label) } else { polygon.tile_region(label) };
                (label, region)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .filter(|(_, r)| r.is_full_dimensional())
            .map(|(label, region)| {
                let translation = label.translation(polygon);
                Tile { label, bounded: region.is_bounded(), region, translation }
            })
            .collect();
        let by_label = tiles.iter().enumerate().map(|(i, t)| (t.label, i)).collect();
        Partition { tiles, by_label, backward }
    }

    pub fn forward(polygon: &NicePolygon<F>) -> Self {
        Self::build(polygon, false)
    }

    pub fn backward(polygon: &NicePolygon<F>) -> Self {
        Self::build(polygon, true)
    }

    pub fn is_backward(&self) -> bool {
        self.backward
    }

    pub fn tiles(&self) -> &[Tile<F>] {
        &self.tiles
    }

    pub fn get(&self, label: TileLabel) -> Option<&Tile<F>> {
        self.by_label.get(&label).map(|&i| &self.tiles[i])
    }

    pub fn bounded_count(&self) -> usize {
        self.tiles.iter().filter(|t| t.bounded).count()
    }

    pub fn unbounded_count(&self) -> usize {
        self.tiles.len() - self.bounded_count()
    }

    /// Tile of an exterior point off all walls.
    pub fn classify(&self, polygon: &NicePolygon<F>, p: &Point<F>) -> Result<&Tile<F>> {
        let step = if self.backward { polygon.inverse_square_map(p)? } else { polygon.square_map(p)? };
        let label = step.1.ok_or(Error::InsidePolygon)?;
        let tile = self.get(label).expect("every dynamic label names a nonempty tile");
        if tile.region.locate(p) != Location::Interior {
            // The dynamic label is defined but p sits on a tile boundary,
            // which only happens on walls of the next iterate.
            return Err(Error::UndefinedOnWall { stage: 2 });
        }
        Ok(tile)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "direction": if self.backward { "backward" } else { "forward" },
            "tiles": self.tiles.iter().map(Tile::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Forward partition of `P`.
pub fn forward_partition<F: Field>(polygon: &NicePolygon<F>) -> Partition<F> {
    Partition::forward(polygon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type P = Point<Rational>;

    fn triangle() -> NicePolygon<Rational> {
        NicePolygon::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap()
    }

    #[test]
    fn tangent_vertices() {
        let t = triangle();
        assert_eq!(t.tangent_vertex(&P::from_ints(8, -2)).unwrap(), 0);
        assert_eq!(t.tangent_vertex(&P::from_ints(-8, 2)).unwrap(), 1);
        assert_eq!(t.tangent_vertex(&P::from_ints(6, 0)), Err(Error::OnPrimaryWall));
        assert_eq!(t.tangent_vertex(&P::from_ints(1, 1)), Err(Error::InsidePolygon));
    }

    #[test]
    fn worked_square_map() {
        let t = triangle();
        assert_eq!(t.outer_step(&P::from_ints(8, -2)).unwrap(), P::from_ints(-8, 2));
        let (q, label) = t.square_map(&P::from_ints(8, -2)).unwrap();
        assert_eq!(q, P::from_ints(10, 4));
        assert_eq!(label, Some(TileLabel::new(0, 1)));
        assert_eq!(label.unwrap().translation(&t), Vector2::from_ints(2, 6));
        let (back, blabel) = t.inverse_square_map(&q).unwrap();
        assert_eq!(back, P::from_ints(8, -2));
        assert_eq!(blabel, Some(TileLabel::new(1, 0)));
        assert_eq!(t.square_map(&P::from_ints(1, 1)).unwrap(), (P::from_ints(1, 1), None));
    }

    #[test]
    fn triangle_partition_has_six_unbounded_tiles() {
        let t = triangle();
        let part = Partition::forward(&t);
        assert_eq!(part.tiles().len(), 6);
        assert_eq!(part.unbounded_count(), 6);
        let mut labels: Vec<_> = part.tiles().iter().map(|x| (x.label.v, x.label.w)).collect();
        labels.sort();
        assert_eq!(labels, vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
        assert_eq!(part.classify(&t, &P::from_ints(8, -2)).unwrap().label, TileLabel::new(0, 1));
    }

    #[test]
    fn cone_samples_have_their_vertex() {
        let t = triangle();
        let clip = ConvexRegion::closed_box(
            Rational::from_int(-50),
            Rational::from_int(-50),
            Rational::from_int(50),
            Rational::from_int(50),
        );
        for v in 0..3 {
            for p in t.primary_cone(v).sample_points(40, 3, Some(&clip)).unwrap() {
                assert_eq!(t.tangent_vertex(&p).unwrap(), v);
            }
        }
    }
}
