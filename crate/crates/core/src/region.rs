//! Convex regions cut out by finitely many half-planes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{HalfPlane, Point, Vector2};

/// Position of a point relative to a region's closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// Intersection of half-planes, kept reduced.
///
/// Full-dimensional regions keep only the constraints carrying an edge of
/// positive length. Bounded full-dimensional regions also cache their
/// vertices in clockwise order. The empty region has a unique
/// representation with no constraints.
#[derive(Clone)]
pub struct ConvexRegion<F: Field> {
    constraints: Vec<HalfPlane<F>>,
    empty: bool,
    bounded: bool,
    full: bool,
    vertices: Option<Vec<Point<F>>>,
}

impl<F: Field> PartialEq for ConvexRegion<F> {
    fn eq(&self, other: &Self) -> bool {
        self.empty == other.empty && self.constraints == other.constraints
    }
}

impl<F: Field> Eq for ConvexRegion<F> {}

impl<F: Field> std::fmt::Debug for ConvexRegion<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.empty {
            return write!(f, "ConvexRegion(empty)");
        }
        f.debug_list().entries(&self.constraints).finish()
    }
}

impl<F: Field> ConvexRegion<F> {
    pub fn plane() -> Self {
        ConvexRegion { constraints: Vec::new(), empty: false, bounded: false, full: true, vertices: None }
    }

    pub fn empty() -> Self {
        ConvexRegion { constraints: Vec::new(), empty: true, bounded: true, full: false, vertices: None }
    }

    pub fn new(constraints: Vec<HalfPlane<F>>) -> Self {
        reduce(constraints)
    }

    pub fn half_plane(h: HalfPlane<F>) -> Self {
        Self::new(vec![h])
    }

    /// Closed axis-aligned box `[x0, x1] × [y0, y1]`.
    pub fn closed_box(x0: F, y0: F, x1: F, y1: F) -> Self {
        use crate::geom::{Line, Sense};
        Self::new(vec![
            HalfPlane::new(Line::new(F::one(), F::zero(), x0), Sense::Ge),
            HalfPlane::new(Line::new(F::one(), F::zero(), x1), Sense::Le),
            HalfPlane::new(Line::new(F::zero(), F::one(), y0), Sense::Ge),
            HalfPlane::new(Line::new(F::zero(), F::one(), y1), Sense::Le),
        ])
    }

    /// Closed convex hull of the given points, which must be in convex
    /// position and listed in clockwise order (at least three, non-collinear).
    pub fn from_clockwise_polygon(vertices: &[Point<F>]) -> Self {
        use crate::geom::Sense;
        let n = vertices.len();
        let hs = (0..n)
            .map(|i| HalfPlane::from_cross(&vertices[i], &vertices[(i + 1) % n], Sense::Le))
            .collect();
        Self::new(hs)
    }

    pub fn constraints(&self) -> &[HalfPlane<F>] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Nonempty interior.
    pub fn is_full_dimensional(&self) -> bool {
        self.full
    }

    /// Clockwise vertex cycle of a bounded full-dimensional region.
    pub fn vertices(&self) -> Option<&[Point<F>]> {
        self.vertices.as_deref()
    }

    pub fn intersect(&self, other: &ConvexRegion<F>) -> ConvexRegion<F> {
        if self.empty || other.empty {
            return Self::empty();
        }
        let mut cs = self.constraints.clone();
        cs.extend(other.constraints.iter().cloned());
        Self::new(cs)
    }

    pub fn with(&self, h: HalfPlane<F>) -> ConvexRegion<F> {
        if self.empty {
            return Self::empty();
        }
        let mut cs = self.constraints.clone();
        cs.push(h);
        Self::new(cs)
    }

    /// Classification against the closure.
    pub fn locate(&self, p: &Point<F>) -> Location {
        if self.empty {
            return Location::Outside;
        }
        let mut on_boundary = !self.full;
        for h in &self.constraints {
            match h.offset(p).sign() {
                std::cmp::Ordering::Less => return Location::Outside,
                std::cmp::Ordering::Equal => on_boundary = true,
                std::cmp::Ordering::Greater => {}
            }
        }
        if on_boundary {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Membership honouring strict and non-strict constraints.
    pub fn contains(&self, p: &Point<F>) -> bool {
        !self.empty && self.constraints.iter().all(|h| h.contains(p))
    }

    pub fn closure(&self) -> ConvexRegion<F> {
        if self.empty {
            return Self::empty();
        }
        Self::new(self.constraints.iter().map(HalfPlane::closure).collect())
    }

    pub fn interior(&self) -> ConvexRegion<F> {
        if self.empty {
            return Self::empty();
        }
        Self::new(self.constraints.iter().map(HalfPlane::interior).collect())
    }

    pub fn area(&self) -> Result<F> {
        if self.empty || !self.full {
            return Ok(F::zero());
        }
        match &self.vertices {
            Some(vs) => Ok(shoelace(vs).abs().half()),
            None => Err(Error::UnboundedRegion),
        }
    }

    pub fn translate(&self, t: &Vector2<F>) -> ConvexRegion<F> {
        let mut constraints: Vec<_> = self.constraints.iter().map(|h| h.translate(t)).collect();
        constraints.sort();
        ConvexRegion {
            constraints,
            empty: self.empty,
            bounded: self.bounded,
            full: self.full,
            vertices: self.vertices.as_ref().map(|vs| vs.iter().map(|p| p + t).collect()),
        }
    }

    /// Image under `p ↦ 2c − p`.
    pub fn point_reflect(&self, c: &Point<F>) -> ConvexRegion<F> {
        if self.empty {
            return Self::empty();
        }
        Self::new(self.constraints.iter().map(|h| h.point_reflect(c)).collect())
    }

    /// Image under `(x, y) ↦ (x, −y)`.
    pub fn reflect_x(&self) -> ConvexRegion<F> {
        if self.empty {
            return Self::empty();
        }
        Self::new(self.constraints.iter().map(HalfPlane::reflect_x).collect())
    }

    /// Whether every point of `self` lies in the closure of `other`.
    /// Requires `self` to be bounded; decided on the vertices.
    pub fn closure_within(&self, other: &ConvexRegion<F>) -> Result<bool> {
        if self.empty {
            return Ok(true);
        }
        let vs = self.vertices.as_ref().ok_or(Error::UnboundedRegion)?;
        Ok(vs.iter().all(|v| other.locate(v) != Location::Outside))
    }

    /// A direction `d` with `p + t·d` in the region for every `t ≥ 0` and
    /// every point `p` of it; `None` for bounded or empty regions. Interior
    /// to the recession cone when that cone has interior.
    pub fn recession_direction(&self) -> Option<Vector2<F>> {
        if self.empty || self.bounded {
            return None;
        }
        let normals: Vec<Vector2<F>> = self.constraints.iter().map(|h| h.line().normal()).collect();
        if normals.is_empty() {
            return Some(Vector2::new(F::one(), F::zero()));
        }
        let ok = |d: &Vector2<F>| normals.iter().all(|nv| !nv.dot(d).is_negative());
        let valid: Vec<Vector2<F>> = normals
            .iter()
            .flat_map(|nv| [Vector2::new(-nv.y.clone(), nv.x.clone()), Vector2::new(nv.y.clone(), -nv.x.clone())])
            .filter(|d| ok(d))
            .collect();
        let sum = valid.iter().fold(Vector2::zero(), |acc, d| acc + d.clone());
        if !sum.is_zero() && ok(&sum) {
            Some(sum)
        } else {
            valid.into_iter().next()
        }
    }

    /// Deterministic interior sample points. Unbounded regions are first
    /// clipped to `clip`, which must be given in that case.
    pub fn sample_points(&self, count: usize, seed: u64, clip: Option<&ConvexRegion<F>>) -> Result<Vec<Point<F>>> {
        let clipped;
        let target = if self.bounded {
            self
        } else {
            match clip {
                Some(c) => {
                    clipped = self.intersect(c);
                    &clipped
                }
                None => return Err(Error::UnboundedRegion),
            }
        };
        let vs = match (&target.vertices, target.full) {
            (Some(vs), true) => vs,
            _ => return Err(Error::EmptyRegion),
        };
        Ok((0..count).map(|i| sample_in_polygon(vs, seed, i as u64)).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "empty": self.empty,
            "bounded": self.bounded,
            "constraints": self.constraints.iter().map(HalfPlane::to_json).collect::<Vec<_>>(),
            "vertices": self.vertices.as_ref().map(|vs| vs.iter().map(Point::to_json).collect::<Vec<_>>()),
        })
    }
}

/// Twice the signed area; negative for clockwise cycles.
pub(crate) fn shoelace<F: Field>(vs: &[Point<F>]) -> F {
    let n = vs.len();
    let mut s = F::zero();
    for i in 0..n {
        let (p, q) = (&vs[i], &vs[(i + 1) % n]);
        s = s + (p.x.clone() * &q.y - q.x.clone() * &p.y);
    }
    s
}

const WEIGHT_RANGE: i64 = 1 << 12;

/// Point of the open polygon: a fan triangle picked by the sample's own
/// stream, then positive integer barycentric weights.
fn sample_in_polygon<F: Field>(vs: &[Point<F>], seed: u64, index: u64) -> Point<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let t = rng.random_range(0..vs.len() - 2);
    let (a, b, c) = (&vs[0], &vs[t + 1], &vs[t + 2]);
    let wa = F::from_int(rng.random_range(1..=WEIGHT_RANGE));
    let wb = F::from_int(rng.random_range(1..=WEIGHT_RANGE));
    let wc = F::from_int(rng.random_range(1..=WEIGHT_RANGE));
    let total = wa.clone() + &wb + &wc;
    let x = (a.x.clone() * &wa + b.x.clone() * &wb + c.x.clone() * &wc) / &total;
    let y = (a.y.clone() * &wa + b.y.clone() * &wb + c.y.clone() * &wc) / &total;
    Point::new(x, y)
}

/// Clips a convex polygon (clockwise) by the closed half-plane.
fn clip<F: Field>(poly: &[Point<F>], h: &HalfPlane<F>) -> Vec<Point<F>> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let offs: Vec<F> = poly.iter().map(|p| h.offset(p)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (&poly[i], &poly[j]);
        let (fp, fq) = (&offs[i], &offs[j]);
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let t = fp.clone() / &(fp.clone() - fq);
            out.push(p + &(q - p).scale(&t));
        }
    }
    dedup_cycle(out)
}

fn dedup_cycle<F: Field>(mut pts: Vec<Point<F>>) -> Vec<Point<F>> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    pts
}

/// Drops vertices collinear with their neighbours.
fn strip_collinear<F: Field>(pts: Vec<Point<F>>) -> Vec<Point<F>> {
    let mut pts = pts;
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let pos = (0..n).find(|&i| {
            let (p, q, r) = (&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
            (q - p).cross(&(r - q)).is_zero()
        });
        match pos {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

fn reduce<F: Field>(mut constraints: Vec<HalfPlane<F>>) -> ConvexRegion<F> {
    constraints.sort();
    constraints.dedup();
    if constraints.is_empty() {
        return ConvexRegion::plane();
    }
    // Every vertex of the arrangement, and a point of every line, fits well
    // inside a box of this half-width.
    let mut m = F::one();
    let lines: Vec<_> = constraints.iter().map(HalfPlane::line).collect();
    let mut bump = |p: &Point<F>| {
        for c in [p.x.abs(), p.y.abs()] {
            if c > m {
                m = c;
            }
        }
    };
    for (i, l) in lines.iter().enumerate() {
        bump(&l.foot_from_origin());
        for l2 in &lines[i + 1..] {
            if let Some(p) = l.intersection(l2) {
                bump(&p);
            }
        }
    }
    let m = m + F::one();
    let neg = -m.clone();
    let mut poly = vec![
        Point::new(neg.clone(), neg.clone()),
        Point::new(neg.clone(), m.clone()),
        Point::new(m.clone(), m.clone()),
        Point::new(m.clone(), neg.clone()),
    ];
    for h in &constraints {
        poly = clip(&poly, &h.closure());
        if poly.is_empty() {
            return ConvexRegion::empty();
        }
    }
    let poly = strip_collinear(poly);
    let on_box = |p: &Point<F>| p.x.abs() == m || p.y.abs() == m;
    let bounded = !poly.iter().any(on_box);

    if poly.len() >= 3 {
        // Full-dimensional: keep the constraints whose line carries an edge.
        let n = poly.len();
        let mut kept: Vec<HalfPlane<F>> = Vec::new();
        for i in 0..n {
            let (p, q) = (&poly[i], &poly[(i + 1) % n]);
            let box_side = (p.x == q.x && p.x.abs() == m) || (p.y == q.y && p.y.abs() == m);
            if box_side {
                continue;
            }
            let on_edge: Vec<&HalfPlane<F>> = constraints
                .iter()
                .filter(|h| h.offset(p).is_zero() && h.offset(q).is_zero())
                .collect();
            if let Some(best) = on_edge.iter().find(|h| h.is_strict()).or(on_edge.first()) {
                kept.push((*best).clone());
            }
        }
        kept.sort();
        kept.dedup();
        return ConvexRegion {
            constraints: kept,
            empty: false,
            bounded,
            full: true,
            vertices: bounded.then_some(poly),
        };
    }

    // Lower-dimensional closure: a segment or a point.
    let (a, b) = match poly.as_slice() {
        [p] => (p.clone(), p.clone()),
        [p, q] => (p.clone(), q.clone()),
        _ => unreachable!("collinear reduction leaves at most two points"),
    };
    // A strict constraint only removes the whole closure when its line
    // contains both ends.
    if constraints.iter().any(|h| h.is_strict() && h.offset(&a).is_zero() && h.offset(&b).is_zero()) {
        return ConvexRegion::empty();
    }
    ConvexRegion { constraints, empty: false, bounded, full: false, vertices: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int_rational, Rational};
    use crate::geom::{Line, Sense};

    type R = ConvexRegion<Rational>;
    type P = Point<Rational>;

    fn hp(a: i64, b: i64, c: i64, s: Sense) -> HalfPlane<Rational> {
        HalfPlane::new(Line::new(int_rational(a), int_rational(b), int_rational(c)), s)
    }

    fn slab_y() -> R {
        R::new(vec![hp(0, 1, 0, Sense::Ge), hp(0, 1, 6, Sense::Le)])
    }

    fn unit_square() -> R {
        R::closed_box(int_rational(0), int_rational(0), int_rational(1), int_rational(1))
    }

    #[test]
    fn intersect_is_idempotent_on_slabs() {
        let s = slab_y();
        assert_eq!(s.intersect(&s), s);
        assert!(!s.is_bounded());
        assert!(s.is_full_dimensional());
    }

    #[test]
    fn disjoint_open_half_planes() {
        let r = R::new(vec![hp(0, 1, 0, Sense::Gt)]).intersect(&R::new(vec![hp(0, 1, 0, Sense::Lt)]));
        assert!(r.is_empty());
        let line = R::new(vec![hp(0, 1, 0, Sense::Ge), hp(0, 1, 0, Sense::Le)]);
        assert!(!line.is_empty());
        assert!(!line.is_full_dimensional());
    }

    #[test]
    fn parallelogram_of_two_slabs() {
        let other = R::new(vec![hp(3, -1, 0, Sense::Ge), hp(3, -1, 24, Sense::Le)]);
        let r = slab_y().intersect(&other);
        assert!(r.is_bounded());
        let mut vs = r.vertices().unwrap().to_vec();
        assert!(shoelace(&vs).is_negative(), "clockwise");
        vs.sort();
        let mut want = vec![P::from_ints(0, 0), P::from_ints(2, 6), P::from_ints(10, 6), P::from_ints(8, 0)];
        want.sort();
        assert_eq!(vs, want);
        assert_eq!(r.area().unwrap(), int_rational(48));
        assert_eq!(r.constraints().len(), 4);
    }

    #[test]
    fn areas() {
        assert_eq!(unit_square().area().unwrap(), int_rational(1));
        assert_eq!(R::empty().area().unwrap(), int_rational(0));
        assert_eq!(slab_y().area(), Err(Error::UnboundedRegion));
    }

    #[test]
    fn redundant_constraints_are_removed() {
        let r = unit_square().with(hp(1, 1, -5, Sense::Ge)).with(hp(1, 0, 3, Sense::Lt));
        assert_eq!(r, unit_square());
    }

    #[test]
    fn locate_square() {
        let sq = unit_square();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(sq.locate(&P::new(half.clone(), half.clone())), Location::Interior);
        assert_eq!(sq.locate(&P::new(int_rational(0), half)), Location::Boundary);
        assert_eq!(sq.locate(&P::from_ints(2, 0)), Location::Outside);
    }

    #[test]
    fn sampling() {
        assert_eq!(R::empty().sample_points(3, 7, None), Err(Error::EmptyRegion));
        let pts = unit_square().sample_points(3, 7, None).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| unit_square().locate(p) == Location::Interior));
        assert_eq!(pts, unit_square().sample_points(3, 7, None).unwrap());

        let upper = R::new(vec![hp(0, 1, 0, Sense::Gt)]);
        let clip = R::closed_box(int_rational(-10), int_rational(-10), int_rational(10), int_rational(10));
        let pts = upper.sample_points(50, 1, Some(&clip)).unwrap();
        assert!(pts.iter().all(|p| p.y.is_positive() && p.y <= int_rational(10)));
    }

    #[test]
    fn translation_matches_rebuild() {
        let r = slab_y().intersect(&R::new(vec![hp(3, -1, 0, Sense::Gt), hp(3, -1, 24, Sense::Lt)]));
        let t = Vector2::from_ints(5, -2);
        let moved = r.translate(&t);
        let rebuilt = R::new(r.constraints().iter().map(|h| h.translate(&t)).collect());
        assert_eq!(moved, rebuilt);
        assert_eq!(moved.area().unwrap(), r.area().unwrap());
    }
}
