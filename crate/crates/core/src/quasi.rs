//! Quasirational polygons, necklace orbits and the boundedness certificate.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{rational_lcm, Field, Rational};
use crate::geom::{Line, Point, Vector2};
use crate::region::{ConvexRegion, Location};
use crate::strips::PinwheelSystem;

/// Parallelogram areas `A_j = area(Σ_j ∩ Σ_{j+1})` and the integers `D_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiData<F: Field> {
    pub areas: Vec<F>,
    pub quasirational: bool,
    /// Least positive `D` with every `D / A_j` an integer.
    pub d: Option<F>,
    pub d_j: Vec<BigInt>,
}

impl<F: Field> QuasiData<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "areas": self.areas.iter().map(Field::to_json).collect::<Vec<_>>(),
            "quasirational": self.quasirational,
            "D": self.d.as_ref().map(Field::to_json),
            "D_j": self.d_j.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// `A_j` from the determinant of the two strip normals.
pub fn parallelogram_area<F: Field>(system: &PinwheelSystem<F>, j: usize) -> F {
    let (s, t) = (system.pair(j), system.pair(j + 1));
    let det = s.line.normal().cross(&t.line.normal());
    (s.width_offset.clone() * &t.width_offset / &det).abs()
}

pub fn quasi_analyze<F: Field>(system: &PinwheelSystem<F>) -> QuasiData<F> {
    let n = system.n();
    let areas: Vec<F> = (0..n).map(|j| parallelogram_area(system, j)).collect();
    let ratios: Option<Vec<Rational>> = areas.iter().map(|a| (a.clone() / &areas[0]).to_rational()).collect();
    let Some(ratios) = ratios else {
        return QuasiData { areas, quasirational: false, d: None, d_j: Vec::new() };
    };
    let l = rational_lcm(&ratios).expect("areas are positive");
    let d = areas[0].clone() * &F::from_rational(l.clone());
    let d_j = ratios
        .iter()
        .map(|r| {
            let q = &l / r;
            debug_assert!(q.is_integer());
            q.to_integer()
        })
        .collect();
    QuasiData { areas, quasirational: true, d: Some(d), d_j }
}

/// The polygons `P_j^m = P + m N_j` and `Q_j^m = (2v_j − P) + m N_j`.
///
/// `N_j` runs along `e_j` in the clockwise sense and spans `Σ_{j+1}`;
/// `v_j` is the vertex of `P` on the centerline of `Σ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceSpec<F: Field> {
    pub j: usize,
    pub m: BigInt,
    pub shift: Vector2<F>,
    pub center: Point<F>,
    /// Clockwise vertices, like those of `P`.
    pub p: Vec<Point<F>>,
    pub q: Vec<Point<F>>,
}

impl<F: Field> NecklaceSpec<F> {
    pub fn regions(&self) -> [ConvexRegion<F>; 2] {
        [ConvexRegion::from_clockwise_polygon(&self.p), ConvexRegion::from_clockwise_polygon(&self.q)]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point<F>> {
        self.p.iter().chain(self.q.iter())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "j": self.j + 1,
            "m": self.m.to_string(),
            "N": self.shift.to_json(),
            "center": self.center.to_json(),
            "P": self.p.iter().map(Point::to_json).collect::<Vec<_>>(),
            "Q": self.q.iter().map(Point::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `N_j`.
pub fn necklace_shift<F: Field>(system: &PinwheelSystem<F>, j: usize) -> Vector2<F> {
    let pair = system.pair(j);
    let next = system.pair(j + 1);
    let cw = system.polygon().edge_vector(pair.edge);
    let rate = next.line.rate(&cw).abs();
    cw.scale(&(next.width_offset.abs() / &rate))
}

pub fn necklace<F: Field>(system: &PinwheelSystem<F>, j: usize, m: &BigInt) -> NecklaceSpec<F> {
    let j = j % system.n();
    let pair = system.pair(j);
    let shift = necklace_shift(system, j);
    let t = shift.scale(&F::from_bigint(m.clone()));
    let center = system.polygon().vertex(pair.far).clone();
    let p = system.polygon().vertices().iter().map(|x| x + &t).collect();
    let q = system.polygon().vertices().iter().map(|x| &x.reflect_through(&center) + &t).collect();
    NecklaceSpec { j, m: m.clone(), shift, center, p, q }
}

/// Strip coordinates in `Σ_j`: the offset across the strip and the
/// position along it, normalized so that `N_j` advances it by one.
#[derive(Clone, Debug)]
pub struct StripFrame<F: Field> {
    across: Line<F>,
    along: Line<F>,
    scale: F,
    width: F,
}

impl<F: Field> StripFrame<F> {
    pub fn new(system: &PinwheelSystem<F>, j: usize) -> Self {
        let pair = system.pair(j);
        let along = system.pair(j + 1).line.clone();
        let scale = along.rate(&necklace_shift(system, j));
        StripFrame { across: pair.line.clone(), along, scale, width: pair.width_offset.clone() }
    }

    /// Offset across the strip, scaled to `[0, 1]` on the closed strip.
    pub fn s(&self, p: &Point<F>) -> F {
        self.across.offset(p) / &self.width
    }

    pub fn t(&self, p: &Point<F>) -> F {
        self.along.offset(p) / &self.scale
    }

    /// Range of `t` over a convex polygon on the level `s`, if it meets it.
    pub fn section(&self, vertices: &[Point<F>], s: &F) -> Option<(F, F)> {
        let n = vertices.len();
        let mut ts: Vec<F> = Vec::new();
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            let (sa, sb) = (self.s(a) - s, self.s(b) - s);
            if sa.is_zero() {
                ts.push(self.t(a));
            }
            if sa.sign() != sb.sign() && !sa.is_zero() && !sb.is_zero() {
                let u = sa.clone() / &(sa - &sb);
                let x = a + &(b - a).scale(&u);
                ts.push(self.t(&x));
            }
        }
        let lo = ts.iter().min()?.clone();
        let hi = ts.iter().max()?.clone();
        Some((lo, hi))
    }

    /// Range of `t` over `R = P ∪ Q` on the level `s`.
    pub fn necklace_section(&self, spec: &NecklaceSpec<F>, s: &F) -> Option<(F, F)> {
        let a = self.section(&spec.p, s);
        let b = self.section(&spec.q, s);
        match (a, b) {
            (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
            (x, None) | (None, x) => x,
        }
    }
}

/// The two-sided bead `R_j^{M} ∪ R_j^{−M}`.
///
/// `ψ̂` carries `R_j^{M}` to `R_{j+1}^{±M A_j / A_{j+1}}`, with a sign that
/// depends on the local configuration; over a full cycle of strips the
/// signs multiply to `−1`, since the slopes only sweep a half turn. The
/// union over both signs is what is permuted around `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bead<F: Field> {
    pub plus: NecklaceSpec<F>,
    pub minus: NecklaceSpec<F>,
}

impl<F: Field> Bead<F> {
    pub fn new(system: &PinwheelSystem<F>, j: usize, m: &BigInt) -> Self {
        Bead { plus: necklace(system, j, m), minus: necklace(system, j, &-m) }
    }

    pub fn regions(&self) -> Vec<ConvexRegion<F>> {
        self.plus.regions().into_iter().chain(self.minus.regions()).collect()
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point<F>) -> bool {
        self.regions().iter().any(|r| r.locate(p) != Location::Outside)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point<F>> {
        self.plus.vertices().chain(self.minus.vertices())
    }

    pub fn to_json(&self) -> Value {
        json!({ "plus": self.plus.to_json(), "minus": self.minus.to_json() })
    }
}

/// Where a point of `Σ_j` sits relative to `R_j` and a bead.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NecklacePlace {
    /// Strictly between `R_j` and the bead, in the open strip.
    Between,
    /// In the closure of `R_j` or of the bead.
    OnBead,
    Elsewhere,
}

/// Places `p` against `R_j = R_j^0` and a bead: between means inside the
/// open strip with `t` strictly in the gap separating the section of `R_j`
/// from the section of the bead on the same side, on the level of `p`.
pub fn necklace_place<F: Field>(frame: &StripFrame<F>, inner: &NecklaceSpec<F>, bead: &Bead<F>, p: &Point<F>) -> NecklacePlace {
    let s = frame.s(p);
    if !s.is_positive() || s >= F::one() {
        return NecklacePlace::Elsewhere;
    }
    let Some((i0, i1)) = frame.necklace_section(inner, &s) else {
        return NecklacePlace::Elsewhere;
    };
    let t = frame.t(p);
    if t >= i0 && t <= i1 {
        return NecklacePlace::OnBead;
    }
    for side in [&bead.plus, &bead.minus] {
        let Some((o0, o1)) = frame.necklace_section(side, &s) else { continue };
        if t >= o0 && t <= o1 {
            return NecklacePlace::OnBead;
        }
        if (t > i1 && t < o0) || (t > o1 && t < i0) {
            return NecklacePlace::Between;
        }
    }
    NecklacePlace::Elsewhere
}

/// Result of [`boundedness_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<F: Field> {
    pub bounded: bool,
    /// L∞ radius containing the whole forward `ψ`-orbit.
    pub radius: F,
    pub m: BigInt,
    /// Strip and point where the pinwheel orbit is first trapped.
    pub strip: usize,
    pub entry: Point<F>,
}

impl<F: Field> Certificate<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "bounded": self.bounded,
            "radius": self.radius.to_json(),
            "radius_approx": self.radius.to_f64(),
            "m": self.m.to_string(),
            "strip": self.strip + 1,
            "entry": self.entry.to_json(),
        })
    }
}

fn linf<F: Field>(p: &Point<F>) -> F {
    p.x.abs().max(p.y.abs())
}

/// The beads `R_j^{±m D_j}` for every `j`.
pub fn necklace_ring<F: Field>(system: &PinwheelSystem<F>, data: &QuasiData<F>, m: &BigInt) -> Vec<Bead<F>> {
    (0..system.n()).map(|j| Bead::new(system, j, &(m * &data.d_j[j]))).collect()
}

/// Certifies that the forward `ψ`-orbit of `p` is bounded.
///
/// Follows the pinwheel orbit of `p` to its first visit of a strip
/// `Σ_j × {j}`, and requires that visit to land between `R_j` and
/// `R_j^{±mD_j}` or on a bead. The invariance of the necklace then
/// traps the orbit; the radius is the L∞ bound of all beads and of `p`.
pub fn boundedness_certificate<F: Field>(system: &PinwheelSystem<F>, p: &Point<F>, m: &BigInt, section_index: usize) -> Result<Certificate<F>> {
    let data = quasi_analyze(system);
    if !data.quasirational {
        return Err(Error::NotQuasirational);
    }
    let m_u64 = m.to_u64().unwrap_or(u64::MAX);
    if !m.is_positive() {
        return Err(Error::AnnulusNotFound { m: m_u64 });
    }
    let n = system.n();
    // Reach the strip system; everything before lies on a segment from `p`.
    let start = crate::dynamics::IndexedPoint::new(p.clone(), section_index % n);
    let entry = if system.pair(start.k).locate(&start.p) == Location::Interior {
        start
    } else {
        system.land_in_next_strip(&start, usize::MAX)?.0
    };
    let j = entry.k;
    let frame = StripFrame::new(system, j);
    let inner = necklace(system, j, &BigInt::from(0));
    let ring = necklace_ring(system, &data, m);
    if necklace_place(&frame, &inner, &ring[j], &entry.p) == NecklacePlace::Elsewhere {
        return Err(Error::AnnulusNotFound { m: m_u64 });
    }
    let mut radius = linf(p);
    for spec in &ring {
        for v in spec.vertices() {
            radius = radius.max(linf(v));
        }
    }
    for v in inner.vertices() {
        radius = radius.max(linf(v));
    }
    Ok(Certificate { bounded: true, radius, m: m.clone(), strip: j, entry: entry.p })
}

/// Smallest `m ≥ 1` (up to `max_m`) for which `p` is certified.
///
/// Certification is monotone in `m`, so this doubles and then bisects.
pub fn certify_smallest<F: Field>(system: &PinwheelSystem<F>, p: &Point<F>, section_index: usize, max_m: u64) -> Result<Certificate<F>> {
    let attempt = |m: u64| boundedness_certificate(system, p, &BigInt::from(m), section_index);
    let mut hi = 1u64;
    let found = loop {
        match attempt(hi) {
            Ok(c) => break c,
            Err(Error::AnnulusNotFound { .. }) if hi < max_m => hi = hi.saturating_mul(2).min(max_m),
            Err(e) => return Err(e),
        }
    };
    let (mut lo, mut best) = (hi / 2, found);
    let mut hi = hi;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match attempt(mid) {
            Ok(c) => {
                best = c;
                hi = mid;
            }
            Err(_) => lo = mid,
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::NicePolygon;
    use crate::quad::QuadExt;

    fn tri() -> PinwheelSystem<Rational> {
        PinwheelSystem::new(NicePolygon::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap())
    }

    #[test]
    fn triangle_areas_two_ways() {
        let s = tri();
        let q = quasi_analyze(&s);
        assert!(q.quasirational);
        for j in 0..3 {
            let direct = s.sigma_range(j, j + 2).area().unwrap();
            assert_eq!(q.areas[j], direct);
            assert_eq!(q.areas[j], Rational::from_int(48));
        }
        assert_eq!(q.d_j, vec![BigInt::from(1); 3]);
    }

    #[test]
    fn kite_over_root_five_is_not_quasirational() {
        let r5 = QuadExt::sqrt(5).unwrap();
        let z = QuadExt::zero();
        let one = QuadExt::one();
        let kite = NicePolygon::new(vec![
            Point::new(-one.clone(), z.clone()),
            Point::new(z.clone(), one.clone()),
            Point::new(r5, z.clone()),
            Point::new(z, -one),
        ])
        .unwrap();
        let s = PinwheelSystem::new(kite);
        let q = quasi_analyze(&s);
        assert!(!q.quasirational);
        let o = Point::new(QuadExt::from_int(5), QuadExt::from_int(7));
        assert_eq!(boundedness_certificate(&s, &o, &BigInt::from(1), 0), Err(Error::NotQuasirational));
    }

    #[test]
    fn necklace_basics() {
        let s = tri();
        let zero = necklace(&s, 1, &BigInt::from(0));
        assert_eq!(zero.p, s.polygon().vertices().to_vec());
        for (q, p) in zero.q.iter().zip(s.polygon().vertices()) {
            assert_eq!(q, &p.reflect_through(&zero.center));
        }
        let two = necklace(&s, 1, &BigInt::from(2));
        let [a, b] = two.regions();
        assert_eq!(a.area().unwrap(), s.polygon().area());
        assert_eq!(b.area().unwrap(), s.polygon().area());
        // N_j spans the next strip.
        let next = s.pair(2);
        assert_eq!(Field::abs(&next.line.rate(&two.shift)), Field::abs(&next.width_offset));
        assert_eq!(s.pair(1).line.rate(&two.shift), Rational::from_int(0));
    }
}
