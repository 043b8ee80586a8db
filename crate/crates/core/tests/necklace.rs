//! Necklace polygons and the integers D_j on random rational polygons.

use num_bigint::BigInt;
use pinwheel::quasi::{boundedness_certificate, necklace, quasi_analyze};
use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::{Analysis, Field, Point, Rational};

fn analyses() -> Vec<Analysis<Rational>> {
    (3..=7).map(|n| Analysis::new(random_nice_polygon(n, 40 + n as u64, default_bound(n)).unwrap())).collect()
}

#[test]
fn areas_two_ways_and_integer_ratios() {
    for a in analyses() {
        let data = quasi_analyze(&a.system);
        assert!(data.quasirational);
        let d = data.d.clone().unwrap();
        for j in 0..a.n() {
            // Oracle: clip one strip by the next and measure the parallelogram.
            let region = a.system.pair(j).closed_strip().intersect(&a.system.pair(j + 1).closed_strip());
            assert_eq!(region.area().unwrap(), data.areas[j]);
            let ratio = d.clone() / &data.areas[j];
            assert_eq!(ratio, Rational::from_bigint(data.d_j[j].clone()));
            assert!(data.d_j[j] > BigInt::from(0));
        }
    }
}

#[test]
fn necklace_polygons_are_congruent_copies() {
    for a in analyses() {
        let area = a.polygon().area();
        for j in 0..a.n() {
            let zero = necklace(&a.system, j, &BigInt::from(0));
            assert_eq!(zero.p, a.polygon().vertices());
            let twice_center = zero.center.to_vector().twice();
            for (q, p) in zero.q.iter().zip(a.polygon().vertices()) {
                assert_eq!(q.to_vector(), twice_center.clone() - p.to_vector());
            }
            // The center is the far vertex of edge e_j.
            assert_eq!(&zero.center, a.polygon().vertex(a.system.pair(j).far));
            let spec = necklace(&a.system, j, &BigInt::from(3));
            for vs in [&spec.p, &spec.q] {
                let poly = pinwheel::NicePolygon::new(vs.clone()).unwrap();
                assert_eq!(poly.area(), area);
            }
        }
    }
}

#[test]
fn certified_radius_grows_with_m() {
    let a = &analyses()[2];
    let data = quasi_analyze(&a.system);
    let p = Point::new(a.core_radius() + Rational::new(1.into(), 3.into()), Rational::new(1.into(), 5.into()));
    let k = a.section(&p).unwrap().k;
    let mut last: Option<Rational> = None;
    let mut certified = 0;
    for m in [1, 2, 4, 8, 16] {
        if let Ok(c) = boundedness_certificate(&a.system, &p, &BigInt::from(m), k) {
            certified += 1;
            if let Some(r) = &last {
                assert!(&c.radius >= r);
            }
            last = Some(c.radius);
        }
    }
    assert!(certified >= 2, "{:?}", data.d_j);
}
