//! Nice polygons: strictly convex, clockwise, no two sides parallel.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{Line, Point, Vector2};
use crate::region::{shoelace, ConvexRegion, Location};

/// A validated nice polygon with vertices in clockwise order
/// (negative signed area, y axis up). Edge `i` runs from vertex `i` to
/// vertex `i + 1`, so the polygon lies to its right.
///
/// Equality and hashing look at the vertex cycle only.
#[derive(Clone, Debug)]
pub struct NicePolygon<F: Field> {
    vertices: Vec<Point<F>>,
    reoriented: bool,
}

impl<F: Field> PartialEq for NicePolygon<F> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl<F: Field> Eq for NicePolygon<F> {}

impl<F: Field> std::hash::Hash for NicePolygon<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl<F: Field> NicePolygon<F> {
    /// Validates the vertex cycle. Counter-clockwise input is reversed and
    /// flagged; error indices refer to the input order.
    pub fn new(vertices: Vec<Point<F>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegenerateVertices { indices: (0..n).collect() });
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(Error::DegenerateVertices { indices: vec![i, j] });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let o = crate::geom::orientation(&vertices[i], &vertices[j], &vertices[k]);
                    if o == Ordering::Equal {
                        return Err(Error::DegenerateVertices { indices: vec![i, j, k] });
                    }
                }
            }
        }
        let turn = shoelace(&vertices).sign();
        for i in 0..n {
            let (u, v) = (&vertices[i], &vertices[(i + 1) % n]);
            let e = v - u;
            let bad = (0..n)
                .filter(|&k| k != i && k != (i + 1) % n)
                .any(|k| e.cross(&(&vertices[k] - u)).sign() != turn);
            if bad {
                return Err(Error::NotConvex { edge: i });
            }
        }
        for i in 0..n {
            let ei = &vertices[(i + 1) % n] - &vertices[i];
            for j in i + 1..n {
                let ej = &vertices[(j + 1) % n] - &vertices[j];
                if ei.cross(&ej).is_zero() {
                    return Err(Error::ParallelEdges { first: i, second: j });
                }
            }
        }
        let mut vertices = vertices;
        let reoriented = turn == Ordering::Greater;
        if reoriented {
            vertices.reverse();
        }
        Ok(NicePolygon { vertices, reoriented })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point<F>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point<F> {
        &self.vertices[i % self.n()]
    }

    /// Whether the input was counter-clockwise and got reversed.
    pub fn was_reoriented(&self) -> bool {
        self.reoriented
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    /// `(tail, head)` vertex indices of edge `i`.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        (i % self.n(), self.next(i))
    }

    pub fn edge_vector(&self, i: usize) -> Vector2<F> {
        let (t, h) = self.edge(i);
        &self.vertices[h] - &self.vertices[t]
    }

    pub fn edge_line(&self, i: usize) -> Line<F> {
        let (t, h) = self.edge(i);
        Line::through(&self.vertices[t], &self.vertices[h])
    }

    pub fn area(&self) -> F {
        shoelace(&self.vertices).abs().half()
    }

    /// Closed region bounded by the polygon.
    pub fn region(&self) -> ConvexRegion<F> {
        ConvexRegion::from_clockwise_polygon(&self.vertices)
    }

    pub fn locate(&self, p: &Point<F>) -> Location {
        let n = self.n();
        let mut boundary = false;
        for i in 0..n {
            let (u, v) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            match (v - u).cross(&(p - u)).sign() {
                Ordering::Greater => return Location::Outside,
                Ordering::Equal => boundary = true,
                Ordering::Less => {}
            }
        }
        if boundary {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Largest absolute coordinate over the vertices.
    pub fn coordinate_bound(&self) -> F {
        let mut m = F::zero();
        for p in &self.vertices {
            for c in [p.x.abs(), p.y.abs()] {
                if c > m {
                    m = c;
                }
            }
        }
        m
    }

    /// Upper bound for the diameter: the L1 extent of the bounding box.
    pub fn diameter_bound(&self) -> F {
        let xs: Vec<&F> = self.vertices.iter().map(|p| &p.x).collect();
        let ys: Vec<&F> = self.vertices.iter().map(|p| &p.y).collect();
        let span = |v: &[&F]| v.iter().copied().max().unwrap().clone() - v.iter().copied().min().unwrap();
        span(&xs) + span(&ys)
    }

    /// Mirror image in the x axis, re-listed clockwise.
    pub fn reflect_x(&self) -> NicePolygon<F> {
        let mut vs: Vec<Point<F>> = self.vertices.iter().map(|p| Point::new(p.x.clone(), -p.y.clone())).collect();
        vs.reverse();
        NicePolygon { vertices: vs, reoriented: false }
    }

    /// The radicand used by any coordinate, if any.
    pub fn radicand(&self) -> Option<u64> {
        self.vertices.iter().flat_map(|p| [p.x.radicand(), p.y.radicand()]).flatten().next()
    }

    pub fn to_json(&self) -> Value {
        let field = match self.radicand() {
            Some(d) => json!({ "quad": d }),
            None => json!("rational"),
        };
        json!({
            "field": field,
            "vertices": self.vertices.iter().map(Point::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let declared = declared_radicand(doc)?;
        if let Some(d) = declared {
            if !F::admits_radicand(d) {
                return Err(Error::FieldMismatch(format!(
                    "polygon declares coordinates in Q(√{d}) but this computation runs over the rationals"
                )));
            }
        }
        let list = doc
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"vertices\" array".into()))?;
        let mut vertices = Vec::with_capacity(list.len());
        for (i, item) in list.iter().enumerate() {
            let p = Point::<F>::from_json(item).map_err(|e| Error::Parse(format!("vertex {}: {e}", i + 1)))?;
            for r in [p.x.radicand(), p.y.radicand()].into_iter().flatten() {
                if Some(r) != declared {
                    return Err(Error::FieldMismatch(format!(
                        "vertex {} uses √{r}, which the declared field does not contain",
                        i + 1
                    )));
                }
            }
            vertices.push(p);
        }
        Self::new(vertices)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }
}

/// Radicand declared by a polygon document: `None` for `"rational"` (or no
/// `"field"` entry), `Some(d)` for `{"quad": d}`.
pub fn declared_radicand(doc: &Value) -> Result<Option<u64>> {
    match doc.get("field") {
        None => Ok(None),
        Some(Value::String(s)) if s == "rational" => Ok(None),
        Some(Value::Object(m)) => match m.get("quad").and_then(Value::as_u64) {
            Some(d) if d >= 2 && crate::quad::is_square_free(d) => Ok(Some(d)),
            _ => Err(Error::Parse(format!("bad quadratic field specification {}", Value::Object(m.clone())))),
        },
        Some(other) => Err(Error::Parse(format!("unknown field {other}"))),
    }
}

/// Free-function form of [`NicePolygon::parse`].
pub fn parse_polygon<F: Field>(text: &str) -> Result<NicePolygon<F>> {
    NicePolygon::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::quad::QuadExt;

    type Poly = NicePolygon<Rational>;

    #[test]
    fn square_has_parallel_edges() {
        assert!(matches!(Poly::from_ints(&[(0, 0), (0, 1), (1, 1), (1, 0)]), Err(Error::ParallelEdges { .. })));
    }

    #[test]
    fn triangle_is_nice() {
        let t = Poly::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap();
        assert_eq!(t.n(), 3);
        assert!(!t.was_reoriented());
        let ccw = Poly::from_ints(&[(4, 0), (1, 3), (0, 0)]).unwrap();
        assert!(ccw.was_reoriented());
        assert_eq!(ccw.vertices(), &[Point::from_ints(0, 0), Point::from_ints(1, 3), Point::from_ints(4, 0)]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(Poly::from_ints(&[(0, 0), (1, 0), (2, 0), (0, 1)]), Err(Error::DegenerateVertices { .. })));
        assert!(matches!(Poly::from_ints(&[(0, 0), (1, 3)]), Err(Error::DegenerateVertices { .. })));
        assert!(matches!(Poly::from_ints(&[(0, 0), (1, 3), (1, 3), (4, 0)]), Err(Error::DegenerateVertices { .. })));
        assert!(matches!(
            Poly::from_ints(&[(0, 0), (3, 1), (1, 2), (6, 5), (0, 6)]),
            Err(Error::NotConvex { .. })
        ));
    }

    #[test]
    fn point_location() {
        let t = Poly::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap();
        assert_eq!(t.locate(&Point::from_ints(1, 1)), Location::Interior);
        assert_eq!(t.locate(&Point::from_ints(2, 0)), Location::Boundary);
        assert_eq!(t.locate(&Point::from_ints(8, -2)), Location::Outside);
    }

    #[test]
    fn file_round_trip() {
        let text = r#"{"field": "rational", "vertices": [[0, 0], ["1", "3"], ["4", "0"]]}"#;
        let t = Poly::parse(text).unwrap();
        let again = Poly::from_json(&t.to_json()).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn quad_files_need_a_quad_build() {
        let text = r#"{"field": {"quad": 5}, "vertices": [["-1", "0"], ["0", "1"], [{"a": "0", "b": "1", "d": 5}, "0"], ["0", "-1"]]}"#;
        assert!(matches!(Poly::parse(text), Err(Error::FieldMismatch(_))));
        let k = NicePolygon::<QuadExt>::parse(text).unwrap();
        assert_eq!(k.radicand(), Some(5));
        let wrong = text.replace("\"d\": 5", "\"d\": 7");
        assert!(matches!(NicePolygon::<QuadExt>::parse(&wrong), Err(Error::FieldMismatch(_))));
    }
}
