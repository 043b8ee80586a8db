//! Pinwheel strips, their translation vectors, spokes and strip maps.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{HalfPlane, Line, Point, Sense, Vector2};
use crate::polygon::NicePolygon;
use crate::region::{ConvexRegion, Location};

/// A strip `Σ` and its vector `V`.
///
/// `Σ` is the closed slab between the line `L` through an edge and the
/// parallel line `L'` chosen so that the vertex `w` farthest from `L` sits
/// on the centerline. With `v` the head of the edge, `V = 2(w − v)`, and
/// translation by `V` carries `L` onto `L'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinwheelPair<F: Field> {
    /// Position in the slope order (0-based).
    pub index: usize,
    /// Edge of the polygon lying on `L`.
    pub edge: usize,
    pub line: Line<F>,
    pub line_prime: Line<F>,
    pub vector: Vector2<F>,
    /// Offset of `L'` measured with the coefficients of `L`.
    pub width_offset: F,
    /// Head vertex `v` of the edge.
    pub head: usize,
    /// Farthest vertex `w`.
    pub far: usize,
}

impl<F: Field> PinwheelPair<F> {
    pub fn offset(&self, p: &Point<F>) -> F {
        self.line.offset(p)
    }

    /// Position relative to the closed slab.
    pub fn locate(&self, p: &Point<F>) -> Location {
        let s = self.offset(p);
        let t = self.width_offset.clone() - &s;
        match (s.sign(), t.sign(), self.width_offset.sign()) {
            (Ordering::Equal, _, _) | (_, Ordering::Equal, _) => Location::Boundary,
            (a, b, w) if a == w && b == w => Location::Interior,
            _ => Location::Outside,
        }
    }

    fn half_planes(&self, strict: bool) -> [HalfPlane<F>; 2] {
        let (lo, hi) = if strict { (Sense::Gt, Sense::Lt) } else { (Sense::Ge, Sense::Le) };
        let (near, far) = if self.width_offset.is_positive() { (lo, hi) } else { (hi, lo) };
        [HalfPlane::new(self.line.clone(), near), HalfPlane::new(self.line_prime.clone(), far)]
    }

    pub fn closed_strip(&self) -> ConvexRegion<F> {
        ConvexRegion::new(self.half_planes(false).to_vec())
    }

    pub fn open_strip(&self) -> ConvexRegion<F> {
        ConvexRegion::new(self.half_planes(true).to_vec())
    }

    /// Identity inside `Σ`; otherwise one step of `±V` toward it.
    pub fn strip_map(&self, p: &Point<F>) -> Result<Point<F>> {
        let s = self.offset(p);
        let w = &self.width_offset;
        if s.is_zero() || &s == w {
            return Err(Error::OnStripBoundary { strip: self.index });
        }
        if s.sign() != w.sign() {
            // On the side of L away from the slab: move toward L'.
            return Ok(p + &self.vector);
        }
        if (s.clone() - w).sign() == w.sign() {
            return Ok(p - &self.vector);
        }
        Ok(p.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index + 1,
            "edge": self.edge + 1,
            "L": self.line.to_json(),
            "L_prime": self.line_prime.to_json(),
            "V": self.vector.to_json(),
            "width_offset": self.width_offset.to_json(),
            "v": self.head + 1,
            "w": self.far + 1,
        })
    }
}

/// The segment from `v` to `w` for one pinwheel pair, oriented by `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spoke<F: Field> {
    pub index: usize,
    /// Vertex index of `v`.
    pub tail: usize,
    /// Vertex index of `w`.
    pub head: usize,
    pub tail_point: Point<F>,
    pub head_point: Point<F>,
    /// Shares one vertex with both cyclic neighbours.
    pub special: bool,
}

impl<F: Field> Spoke<F> {
    /// `head − tail`, which is `V / 2`.
    pub fn oriented(&self) -> Vector2<F> {
        &self.head_point - &self.tail_point
    }

    pub fn has_vertex(&self, i: usize) -> bool {
        self.tail == i || self.head == i
    }

    pub fn other_end(&self, i: usize) -> usize {
        if self.tail == i {
            self.head
        } else {
            self.tail
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index + 1,
            "tail": self.tail + 1,
            "head": self.head + 1,
            "special": self.special,
        })
    }
}

/// Pinwheel pairs and spokes of a nice polygon in slope order.
///
/// Index 0 belongs to the edge whose direction angle in `[0, π)` is
/// smallest; indices increase counter-clockwise. Reports print indices
/// 1-based.
#[derive(Clone, Debug)]
pub struct PinwheelSystem<F: Field> {
    polygon: NicePolygon<F>,
    pairs: Vec<PinwheelPair<F>>,
    spokes: Vec<Spoke<F>>,
    strip_of_edge: Vec<usize>,
}

fn upper_direction<F: Field>(d: Vector2<F>) -> Vector2<F> {
    if d.y.is_negative() || (d.y.is_zero() && d.x.is_negative()) {
        -d
    } else {
        d
    }
}

impl<F: Field> PinwheelSystem<F> {
    pub fn new(polygon: NicePolygon<F>) -> Self {
        let n = polygon.n();
        let dirs: Vec<Vector2<F>> = (0..n).map(|e| upper_direction(polygon.edge_vector(e))).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            if i == j {
                Ordering::Equal
            } else {
                // Smaller angle first: d_i before d_j when d_j is counter-clockwise of d_i.
                dirs[j].cross(&dirs[i]).sign()
            }
        });
        let mut strip_of_edge = vec![0; n];
        let mut pairs = Vec::with_capacity(n);
        for (index, &edge) in order.iter().enumerate() {
            strip_of_edge[edge] = index;
            let (_, head) = polygon.edge(edge);
            let line = polygon.edge_line(edge);
            let far = (0..n)
                .max_by(|&a, &b| line.offset(polygon.vertex(a)).abs().cmp(&line.offset(polygon.vertex(b)).abs()))
                .unwrap();
            let half = line.offset(polygon.vertex(far));
            let width_offset = half.twice();
            let line_prime = Line::new(line.a.clone(), line.b.clone(), line.c.clone() + &width_offset);
            let vector = (polygon.vertex(far) - polygon.vertex(head)).twice();
            pairs.push(PinwheelPair { index, edge, line, line_prime, vector, width_offset, head, far });
        }
        let mut spokes: Vec<Spoke<F>> = pairs
            .iter()
            .map(|p| Spoke {
                index: p.index,
                tail: p.head,
                head: p.far,
                tail_point: polygon.vertex(p.head).clone(),
                head_point: polygon.vertex(p.far).clone(),
                special: false,
            })
            .collect();
        for j in 0..n {
            let (a, b, c) = (&spokes[(j + n - 1) % n], &spokes[j], &spokes[(j + 1) % n]);
            let special = [b.tail, b.head].iter().any(|&x| a.has_vertex(x) && c.has_vertex(x));
            spokes[j].special = special;
        }
        PinwheelSystem { polygon, pairs, spokes, strip_of_edge }
    }

    pub fn polygon(&self) -> &NicePolygon<F> {
        &self.polygon
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub(crate) fn pairs_mut(&mut self) -> &mut [PinwheelPair<F>] {
        &mut self.pairs
    }

    pub(crate) fn spokes_mut(&mut self) -> &mut [Spoke<F>] {
        &mut self.spokes
    }

    /// Pair `j mod n`.
    pub fn pair(&self, j: usize) -> &PinwheelPair<F> {
        &self.pairs[j % self.n()]
    }

    pub fn pairs(&self) -> &[PinwheelPair<F>] {
        &self.pairs
    }

    pub fn spoke(&self, j: usize) -> &Spoke<F> {
        &self.spokes[j % self.n()]
    }

    pub fn spokes(&self) -> &[Spoke<F>] {
        &self.spokes
    }

    pub fn strip_of_edge(&self, edge: usize) -> usize {
        self.strip_of_edge[edge]
    }

    /// Vertex shared by spokes `j` and `j + 1`.
    pub fn shared_vertex(&self, j: usize) -> Option<usize> {
        let (s, t) = (self.spoke(j), self.spoke(j + 1));
        [s.tail, s.head].into_iter().find(|&x| t.has_vertex(x))
    }

    pub fn strip_map(&self, j: usize, p: &Point<F>) -> Result<Point<F>> {
        self.pair(j).strip_map(p)
    }

    /// The last index `b' ≥ a` with `b' ≡ b (mod n)`.
    pub fn lift(&self, a: usize, b: usize) -> usize {
        let n = self.n();
        a + (b + n - a % n) % n
    }

    /// `μ_{b'} ∘ … ∘ μ_a`, one map per stage.
    pub fn compose_strip_maps(&self, a: usize, b: usize, p: &Point<F>) -> Result<Point<F>> {
        let mut q = p.clone();
        for j in a..=self.lift(a, b) {
            q = self.strip_map(j, &q)?;
        }
        Ok(q)
    }

    /// `Σ_a ∩ … ∩ Σ_{b'−1}`, the whole plane when `a ≡ b`.
    pub fn sigma_range(&self, a: usize, b: usize) -> ConvexRegion<F> {
        let mut r = ConvexRegion::plane();
        for j in a..self.lift(a, b) {
            r = r.intersect(&self.pair(j).closed_strip());
        }
        r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "pairs": self.pairs.iter().map(PinwheelPair::to_json).collect::<Vec<_>>(),
            "spokes": self.spokes.iter().map(Spoke::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Pinwheel pairs and spokes of `P`; see [`PinwheelSystem`].
pub fn build_pinwheel_system<F: Field>(polygon: &NicePolygon<F>) -> (Vec<PinwheelPair<F>>, Vec<Spoke<F>>) {
    let s = PinwheelSystem::new(polygon.clone());
    (s.pairs, s.spokes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int_rational, Rational};

    type P = Point<Rational>;

    fn triangle() -> PinwheelSystem<Rational> {
        PinwheelSystem::new(NicePolygon::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap())
    }

    #[test]
    fn triangle_bottom_strip() {
        let s = triangle();
        let p = s.pair(0);
        assert_eq!(s.polygon().vertex(p.head), &P::from_ints(0, 0));
        assert_eq!(s.polygon().vertex(p.far), &P::from_ints(1, 3));
        assert_eq!(p.vector, Vector2::from_ints(2, 6));
        let want = ConvexRegion::closed_box(int_rational(-100), int_rational(0), int_rational(100), int_rational(6));
        let clip = ConvexRegion::closed_box(int_rational(-100), int_rational(-100), int_rational(100), int_rational(100));
        assert_eq!(p.closed_strip().intersect(&clip), want);
    }

    #[test]
    fn strip_map_examples() {
        let s = triangle();
        let p = s.pair(0);
        assert_eq!(p.strip_map(&P::from_ints(1, 3)).unwrap(), P::from_ints(1, 3));
        assert_eq!(p.strip_map(&P::from_ints(0, -1)).unwrap(), P::from_ints(2, 5));
        assert_eq!(p.strip_map(&P::from_ints(0, 13)).unwrap(), P::from_ints(-2, 7));
        assert_eq!(p.strip_map(&P::from_ints(5, 0)), Err(Error::OnStripBoundary { strip: 0 }));
        assert_eq!(p.strip_map(&P::from_ints(5, 6)), Err(Error::OnStripBoundary { strip: 0 }));
    }

    #[test]
    fn slope_order_and_second_strip() {
        let s = triangle();
        let p = s.pair(1);
        // The edge from (0,0) to (1,3); the strip is {0 <= 3x - y <= 24}.
        assert_eq!(p.line, Line::new(int_rational(3), int_rational(-1), int_rational(0)));
        assert_eq!(s.polygon().vertex(p.far), &P::from_ints(4, 0));
        assert_eq!(p.locate(&P::from_ints(8, 0)), Location::Boundary);
        assert_eq!(p.locate(&P::from_ints(4, 0)), Location::Interior);
        assert_eq!(p.locate(&P::from_ints(9, 0)), Location::Outside);
    }

    #[test]
    fn sigma_ranges() {
        let s = triangle();
        assert_eq!(s.sigma_range(1, 1), ConvexRegion::plane());
        assert_eq!(s.sigma_range(0, 1), s.pair(0).closed_strip());
        assert_eq!(s.sigma_range(0, 2).area().unwrap(), int_rational(48));
        assert_eq!(s.lift(2, 0), 3);
        assert_eq!(s.lift(2, 2), 2);
    }

    #[test]
    fn compose_matches_stepwise() {
        let s = triangle();
        let p = P::from_ints(17, -9);
        let mut q = p.clone();
        for j in 0..3 {
            q = s.strip_map(j, &q).unwrap();
        }
        assert_eq!(s.compose_strip_maps(0, 2, &p).unwrap(), q);
        assert_eq!(s.compose_strip_maps(1, 1, &p).unwrap(), s.strip_map(1, &p).unwrap());
    }

    #[test]
    fn triangle_spokes_are_ordinary() {
        let s = triangle();
        assert!(s.spokes().iter().all(|sp| !sp.special));
        for j in 0..3 {
            assert!(s.shared_vertex(j).is_some());
        }
    }
}
