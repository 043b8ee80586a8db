//! Points, vectors, lines and half-planes over an exact field.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<F: Field> {
    pub x: F,
    pub y: F,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector2<F: Field> {
    pub x: F,
    pub y: F,
}

impl<F: Field> Point<F> {
    pub fn new(x: F, y: F) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(F::from_int(x), F::from_int(y))
    }

    pub fn origin() -> Self {
        Self::new(F::zero(), F::zero())
    }

    /// Point reflection through `c`, i.e. `2c − self`.
    pub fn reflect_through(&self, c: &Point<F>) -> Point<F> {
        Point::new(c.x.twice() - &self.x, c.y.twice() - &self.y)
    }

    pub fn to_vector(&self) -> Vector2<F> {
        Vector2::new(self.x.clone(), self.y.clone())
    }

    pub fn midpoint(&self, other: &Point<F>) -> Point<F> {
        Point::new((self.x.clone() + &other.x).half(), (self.y.clone() + &other.y).half())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn to_json(&self) -> Value {
        json!([self.x.to_json(), self.y.to_json()])
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        match value.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(Point::new(F::from_json(x)?, F::from_json(y)?)),
            _ => Err(Error::Parse(format!("expected a coordinate pair [x, y], found {value}"))),
        }
    }
}

impl<F: Field> Vector2<F> {
    pub fn new(x: F, y: F) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(F::from_int(x), F::from_int(y))
    }

    pub fn zero() -> Self {
        Self::new(F::zero(), F::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, other: &Vector2<F>) -> F {
        self.x.clone() * &other.y - self.y.clone() * &other.x
    }

    pub fn dot(&self, other: &Vector2<F>) -> F {
        self.x.clone() * &other.x + self.y.clone() * &other.y
    }

    pub fn scale(&self, k: &F) -> Vector2<F> {
        Vector2::new(self.x.clone() * k, self.y.clone() * k)
    }

    pub fn half(&self) -> Vector2<F> {
        Vector2::new(self.x.half(), self.y.half())
    }

    pub fn twice(&self) -> Vector2<F> {
        Vector2::new(self.x.twice(), self.y.twice())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn to_json(&self) -> Value {
        json!([self.x.to_json(), self.y.to_json()])
    }
}

impl<F: Field> fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<F: Field> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<F: Field> fmt::Debug for Vector2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

impl<F: Field> fmt::Display for Vector2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

impl<F: Field> Sub for &Point<F> {
    type Output = Vector2<F>;
    fn sub(self, rhs: &Point<F>) -> Vector2<F> {
        Vector2::new(self.x.clone() - &rhs.x, self.y.clone() - &rhs.y)
    }
}

impl<F: Field> Sub for Point<F> {
    type Output = Vector2<F>;
    fn sub(self, rhs: Point<F>) -> Vector2<F> {
        &self - &rhs
    }
}

impl<F: Field> Add<&Vector2<F>> for &Point<F> {
    type Output = Point<F>;
    fn add(self, rhs: &Vector2<F>) -> Point<F> {
        Point::new(self.x.clone() + &rhs.x, self.y.clone() + &rhs.y)
    }
}

impl<F: Field> Add<Vector2<F>> for Point<F> {
    type Output = Point<F>;
    fn add(self, rhs: Vector2<F>) -> Point<F> {
        Point::new(self.x + &rhs.x, self.y + &rhs.y)
    }
}

impl<F: Field> Sub<&Vector2<F>> for &Point<F> {
    type Output = Point<F>;
    fn sub(self, rhs: &Vector2<F>) -> Point<F> {
        Point::new(self.x.clone() - &rhs.x, self.y.clone() - &rhs.y)
    }
}

impl<F: Field> Sub<Vector2<F>> for Point<F> {
    type Output = Point<F>;
    fn sub(self, rhs: Vector2<F>) -> Point<F> {
        Point::new(self.x - &rhs.x, self.y - &rhs.y)
    }
}

impl<F: Field> Add for &Vector2<F> {
    type Output = Vector2<F>;
    fn add(self, rhs: &Vector2<F>) -> Vector2<F> {
        Vector2::new(self.x.clone() + &rhs.x, self.y.clone() + &rhs.y)
    }
}

impl<F: Field> Add for Vector2<F> {
    type Output = Vector2<F>;
    fn add(self, rhs: Vector2<F>) -> Vector2<F> {
        Vector2::new(self.x + &rhs.x, self.y + &rhs.y)
    }
}

impl<F: Field> Sub for &Vector2<F> {
    type Output = Vector2<F>;
    fn sub(self, rhs: &Vector2<F>) -> Vector2<F> {
        Vector2::new(self.x.clone() - &rhs.x, self.y.clone() - &rhs.y)
    }
}

impl<F: Field> Sub for Vector2<F> {
    type Output = Vector2<F>;
    fn sub(self, rhs: Vector2<F>) -> Vector2<F> {
        Vector2::new(self.x - &rhs.x, self.y - &rhs.y)
    }
}

impl<F: Field> Neg for Vector2<F> {
    type Output = Vector2<F>;
    fn neg(self) -> Vector2<F> {
        Vector2::new(-self.x, -self.y)
    }
}

impl<F: Field> Mul<&F> for &Vector2<F> {
    type Output = Vector2<F>;
    fn mul(self, k: &F) -> Vector2<F> {
        self.scale(k)
    }
}

/// Orientation of the triple `(p, q, r)`: the sign of `(q − p) × (r − p)`.
/// `Less` means clockwise (a right turn).
pub fn orientation<F: Field>(p: &Point<F>, q: &Point<F>, r: &Point<F>) -> Ordering {
    (q - p).cross(&(r - p)).sign()
}

/// The line `a·x + b·y = c`.
///
/// Coefficients are kept as given, so [`Line::offset`] reports the raw value
/// `a·x + b·y − c`. Equality and hashing use the normalized form whose leading
/// nonzero coefficient among `(a, b)` is 1, so every representation of the
/// same line compares equal.
#[derive(Clone)]
pub struct Line<F: Field> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Field> Line<F> {
    pub fn new(a: F, b: F, c: F) -> Self {
        assert!(!(a.is_zero() && b.is_zero()), "line needs a nonzero normal");
        Self { a, b, c }
    }

    /// The normalized line through `p` and `q` (which must differ).
    pub fn through(p: &Point<F>, q: &Point<F>) -> Self {
        let d = q - p;
        let a = -d.y.clone();
        let b = d.x.clone();
        let c = a.clone() * &p.x + b.clone() * &p.y;
        Line::new(a, b, c).normalized()
    }

    /// Divides through by the leading nonzero normal coefficient.
    pub fn normalized(&self) -> Self {
        let lead = if self.a.is_zero() { &self.b } else { &self.a };
        Line {
            a: self.a.clone() / lead,
            b: self.b.clone() / lead,
            c: self.c.clone() / lead,
        }
    }

    /// `a·x + b·y − c`; zero exactly on the line.
    pub fn offset(&self, p: &Point<F>) -> F {
        self.a.clone() * &p.x + self.b.clone() * &p.y - &self.c
    }

    /// Rate of change of [`Line::offset`] along `v`.
    pub fn rate(&self, v: &Vector2<F>) -> F {
        self.a.clone() * &v.x + self.b.clone() * &v.y
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        self.offset(p).is_zero()
    }

    pub fn normal(&self) -> Vector2<F> {
        Vector2::new(self.a.clone(), self.b.clone())
    }

    /// Direction vector `(b, −a)`.
    pub fn direction(&self) -> Vector2<F> {
        Vector2::new(self.b.clone(), -self.a.clone())
    }

    pub fn is_parallel(&self, other: &Line<F>) -> bool {
        self.normal().cross(&other.normal()).is_zero()
    }

    pub fn intersection(&self, other: &Line<F>) -> Option<Point<F>> {
        let det = self.normal().cross(&other.normal());
        if det.is_zero() {
            return None;
        }
        let x = (self.c.clone() * &other.b - self.b.clone() * &other.c) / &det;
        let y = (self.a.clone() * &other.c - self.c.clone() * &other.a) / &det;
        Some(Point::new(x, y))
    }

    /// Foot of the perpendicular from the origin.
    pub fn foot_from_origin(&self) -> Point<F> {
        let n2 = self.normal().dot(&self.normal());
        let k = self.c.clone() / &n2;
        Point::new(self.a.clone() * &k, self.b.clone() * &k)
    }

    /// The parallel line through `p`, with the same normal.
    pub fn parallel_through(&self, p: &Point<F>) -> Self {
        Line::new(self.a.clone(), self.b.clone(), self.a.clone() * &p.x + self.b.clone() * &p.y)
    }

    pub fn translate(&self, t: &Vector2<F>) -> Self {
        Line::new(self.a.clone(), self.b.clone(), self.c.clone() + self.rate(t))
    }

    pub fn to_json(&self) -> Value {
        json!({ "a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json() })
    }
}

impl<F: Field> PartialEq for Line<F> {
    fn eq(&self, other: &Self) -> bool {
        let (x, y) = (self.normalized(), other.normalized());
        x.a == y.a && x.b == y.b && x.c == y.c
    }
}

impl<F: Field> Eq for Line<F> {}

impl<F: Field> Hash for Line<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let n = self.normalized();
        n.a.hash(state);
        n.b.hash(state);
        n.c.hash(state);
    }
}

impl<F: Field> fmt::Debug for Line<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x + {}·y = {}", self.a, self.b, self.c)
    }
}

/// Offset of `p` from the line; the free-function form of [`Line::offset`].
pub fn signed_offset<F: Field>(l: &Line<F>, p: &Point<F>) -> F {
    l.offset(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Ge,
    Gt,
    Le,
    Lt,
}

impl Sense {
    pub fn is_strict(self) -> bool {
        matches!(self, Sense::Gt | Sense::Lt)
    }

    fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Gt => ">",
            Sense::Le => "<=",
            Sense::Lt => "<",
        }
    }
}

/// `{p : offset(p) sense 0}`.
///
/// Always stored in a canonical form: sense `Ge` or `Gt`, with the
/// coefficients scaled by a positive factor so that the leading nonzero
/// normal coefficient has absolute value 1. Structural equality is set
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HalfPlane<F: Field> {
    a: F,
    b: F,
    c: F,
    strict: bool,
}

impl<F: Field> HalfPlane<F> {
    pub fn new(line: Line<F>, sense: Sense) -> Self {
        let flip = matches!(sense, Sense::Le | Sense::Lt);
        let lead = if line.a.is_zero() { line.b.clone() } else { line.a.clone() };
        let mut scale = lead.abs();
        if flip {
            scale = -scale;
        }
        HalfPlane {
            a: line.a / &scale,
            b: line.b / &scale,
            c: line.c / &scale,
            strict: sense.is_strict(),
        }
    }

    /// `{p : cross(u − p, q − p) sense 0}`. With `Lt`, the points from which
    /// `q` lies strictly to the right of the ray toward `u`.
    pub fn from_cross(u: &Point<F>, q: &Point<F>, sense: Sense) -> Self {
        // cross(u − p, q − p) = p.x (u.y − q.y) + p.y (q.x − u.x) + u × q
        let a = u.y.clone() - &q.y;
        let b = q.x.clone() - &u.x;
        let uxq = u.x.clone() * &q.y - u.y.clone() * &q.x;
        HalfPlane::new(Line::new(a, b, -uxq), sense)
    }

    pub fn line(&self) -> Line<F> {
        Line { a: self.a.clone(), b: self.b.clone(), c: self.c.clone() }
    }

    pub fn sense(&self) -> Sense {
        if self.strict {
            Sense::Gt
        } else {
            Sense::Ge
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn offset(&self, p: &Point<F>) -> F {
        self.a.clone() * &p.x + self.b.clone() * &p.y - &self.c
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match self.offset(p).sign() {
            Ordering::Greater => true,
            Ordering::Equal => !self.strict,
            Ordering::Less => false,
        }
    }

    pub fn closure(&self) -> Self {
        HalfPlane { strict: false, ..self.clone() }
    }

    pub fn interior(&self) -> Self {
        HalfPlane { strict: true, ..self.clone() }
    }

    /// The closure of the complement.
    pub fn flipped(&self) -> Self {
        HalfPlane {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            strict: !self.strict,
        }
    }

    pub fn translate(&self, t: &Vector2<F>) -> Self {
        let c = self.c.clone() + self.a.clone() * &t.x + self.b.clone() * &t.y;
        HalfPlane { c, ..self.clone() }
    }

    /// Image under `p ↦ 2c − p`.
    pub fn point_reflect(&self, center: &Point<F>) -> Self {
        let shift = (self.a.clone() * &center.x + self.b.clone() * &center.y).twice();
        HalfPlane::new(
            Line::new(-self.a.clone(), -self.b.clone(), self.c.clone() - shift),
            self.sense(),
        )
    }

    /// Image under `(x, y) ↦ (x, −y)`.
    pub fn reflect_x(&self) -> Self {
        HalfPlane::new(Line::new(self.a.clone(), -self.b.clone(), self.c.clone()), self.sense())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "c": self.c.to_json(),
            "sense": self.sense().symbol(),
        })
    }

    fn key(&self) -> (&F, &F, &F, bool) {
        (&self.a, &self.b, &self.c, self.strict)
    }
}

impl<F: Field> PartialOrd for HalfPlane<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for HalfPlane<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl<F: Field> fmt::Debug for HalfPlane<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x + {}·y {} {}", self.a, self.b, self.sense().symbol(), self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int_rational, Rational};

    type P = Point<Rational>;

    fn line(a: i64, b: i64, c: i64) -> Line<Rational> {
        Line::new(int_rational(a), int_rational(b), int_rational(c))
    }

    #[test]
    fn offsets() {
        assert_eq!(signed_offset(&line(0, 1, 0), &P::from_ints(3, 5)), int_rational(5));
        assert_eq!(signed_offset(&line(0, 1, 0), &P::from_ints(3, 0)), int_rational(0));
        assert_eq!(signed_offset(&line(3, -1, 0), &P::from_ints(4, 0)), int_rational(12));
    }

    #[test]
    fn equal_lines_compare_equal() {
        assert_eq!(line(3, -1, 0), line(-6, 2, 0));
        assert_eq!(Line::through(&P::from_ints(0, 0), &P::from_ints(1, 3)), line(3, -1, 0));
        assert_ne!(line(3, -1, 0), line(3, -1, 1));
    }

    #[test]
    fn intersections() {
        let p = line(0, 1, 6).intersection(&line(3, -1, 0)).unwrap();
        assert_eq!(p, P::from_ints(2, 6));
        assert!(line(1, 1, 0).intersection(&line(2, 2, 5)).is_none());
    }

    #[test]
    fn half_plane_canonical_forms() {
        let h1 = HalfPlane::new(line(0, 2, 4), Sense::Le);
        let h2 = HalfPlane::new(line(0, -1, -2), Sense::Ge);
        assert_eq!(h1, h2);
        assert!(h1.contains(&P::from_ints(0, 2)));
        assert!(!h1.interior().contains(&P::from_ints(0, 2)));
        assert!(h1.contains(&P::from_ints(7, -3)));
    }

    #[test]
    fn cross_half_plane_matches_direct_cross() {
        let u = P::from_ints(0, 0);
        let q = P::from_ints(4, 0);
        let h = HalfPlane::from_cross(&u, &q, Sense::Lt);
        for (x, y) in [(8, -2), (-3, 5), (1, 1), (-2, -7)] {
            let p = P::from_ints(x, y);
            let c = (&u - &p).cross(&(&q - &p));
            assert_eq!(h.contains(&p), c.is_negative(), "{p}");
        }
    }

    #[test]
    fn reflections_map_membership() {
        let h = HalfPlane::new(line(1, 2, 3), Sense::Gt);
        let c = P::from_ints(1, -1);
        let r = h.point_reflect(&c);
        let x = h.reflect_x();
        for (px, py) in [(5, 0), (-1, 2), (0, 0), (3, 0)] {
            let p = P::from_ints(px, py);
            assert_eq!(h.contains(&p), r.contains(&p.reflect_through(&c)));
            assert_eq!(h.contains(&p), x.contains(&P::new(p.x.clone(), -p.y.clone())));
        }
    }
}
