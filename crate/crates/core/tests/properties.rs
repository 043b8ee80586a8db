//! Invariants over random polygons and scalars.

use num_bigint::BigInt;
use proptest::prelude::*;

use pinwheel::field::{format_rational, parse_rational};
use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::render::Scene;
use pinwheel::{Analysis, Field, IndexedPoint, Location, NicePolygon, Point, QuadExt, Rational};

fn polygon() -> impl Strategy<Value = NicePolygon<Rational>> {
    (3usize..=7, any::<u64>()).prop_map(|(n, seed)| random_nice_polygon(n, seed, default_bound(n)).unwrap())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

fn quad() -> impl Strategy<Value = QuadExt> {
    (rational(), rational(), prop::sample::select(vec![2u64, 3, 5, 7])).prop_map(|(a, b, d)| QuadExt::new(a, b, d).unwrap())
}

fn big_point() -> impl Strategy<Value = Point<Rational>> {
    (rational(), rational()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn square_map_is_inverted(poly in polygon(), p in big_point()) {
        prop_assume!(poly.locate(&p) == Location::Outside);
        let Ok((q, Some(label))) = poly.square_map(&p) else { return Ok(()) };
        prop_assert_eq!(&q - &p, label.translation(&poly));
        let (back, rev) = poly.inverse_square_map(&q).unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(rev, Some(label.reversed()));
    }

    #[test]
    fn partition_agrees_with_direct_map(poly in polygon(), p in big_point()) {
        let a = Analysis::new(poly);
        let direct = a.polygon().square_map(&p);
        match (a.classify(&p), direct) {
            (Ok(tile), Ok((q, Some(label)))) => {
                prop_assert_eq!(tile.label, label);
                prop_assert_eq!(&p + &tile.translation, q);
                prop_assert_eq!(tile.region.locate(&p), Location::Interior);
            }
            (Err(_), Err(_)) | (Err(_), Ok((_, None))) => {}
            (t, d) => prop_assert!(false, "classify {:?} but direct {:?}", t.map(|t| t.label), d),
        }
    }

    #[test]
    fn pinwheel_step_hits_psi(poly in polygon(), p in big_point()) {
        let a = Analysis::new(poly);
        let Ok(psi) = a.polygon().psi(&p) else { return Ok(()) };
        match a.pinwheel_theorem_step(&p) {
            Ok(s) => {
                prop_assert_eq!(s.image, psi.0);
                prop_assert!(s.steps <= 3 * a.n());
            }
            Err(e) => prop_assert!(matches!(e, pinwheel::Error::UndefinedOnWall { .. } | pinwheel::Error::OnStripBoundary { .. }), "{e}"),
        }
    }

    #[test]
    fn strip_return_matches_stepwise(poly in polygon(), p in big_point(), k in 0usize..7) {
        let a = Analysis::new(poly);
        let k = k % a.n();
        prop_assume!(a.system.pair(k).locate(&p) == Location::Interior);
        let x = IndexedPoint::new(p, k);
        let fast = a.system.strip_system_return(&x, 1 << 16);
        let slow = a.system.strip_system_return_stepwise(&x, 1 << 16);
        match (fast, slow) {
            (Ok(f), Ok(s)) => prop_assert_eq!(f, s),
            (Err(_), Err(_)) => {}
            (f, s) => prop_assert!(false, "{:?} vs {:?}", f, s),
        }
    }

    #[test]
    fn strip_map_moves_one_width(poly in polygon(), p in big_point(), j in 0usize..7) {
        let a = Analysis::new(poly);
        let pair = a.system.pair(j % a.n());
        let Ok(q) = pair.strip_map(&p) else { return Ok(()) };
        let r = |x: &Point<Rational>| pair.offset(x) / &pair.width_offset;
        match pair.locate(&p) {
            Location::Interior => prop_assert_eq!(q, p),
            _ => {
                // One width closer, and never past the strip.
                let (rp, rq) = (r(&p), r(&q));
                prop_assert_eq!((rp.clone() - &rq).abs(), Rational::from_int(1));
                prop_assert!(rq.abs() < rp.abs() || (rq.clone() - Rational::from_int(1)).abs() < (rp - Rational::from_int(1)).abs());
            }
        }
    }

    #[test]
    fn reflection_preserves_niceness(poly in polygon()) {
        let bar = poly.reflect_x();
        prop_assert_eq!(bar.area(), poly.area());
        let again = NicePolygon::new(bar.vertices().to_vec()).unwrap();
        prop_assert!(!again.was_reoriented());
        prop_assert_eq!(bar.reflect_x(), poly);
    }

    #[test]
    fn polygon_json_round_trip(poly in polygon()) {
        prop_assert_eq!(NicePolygon::<Rational>::from_json(&poly.to_json()).unwrap(), poly);
    }

    #[test]
    fn tile_translation_keeps_area(poly in polygon()) {
        let a = Analysis::new(poly);
        for t in a.forward.tiles().iter().filter(|t| t.bounded) {
            prop_assert_eq!(t.region.translate(&t.translation).area().unwrap(), t.region.area().unwrap());
            prop_assert_eq!(t.region.intersect(&t.region), t.region.clone());
        }
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn quad_field_laws(a in quad(), b in quad()) {
        prop_assume!(a.radicand().is_none() || b.radicand().is_none() || a.radicand() == b.radicand());
        prop_assert_eq!((a.clone() + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!((a.clone() * &b) / &b, a.clone());
        }
        prop_assert_eq!(-(-a.clone()), a.clone());
    }

    #[test]
    fn quad_sign_and_floor_match_floats(a in quad()) {
        let f = a.to_f64();
        if f.abs() > 1e-6 {
            prop_assert_eq!(a.sign(), f.partial_cmp(&0.0).unwrap());
        }
        let fl = a.floor();
        prop_assert!(QuadExt::from_bigint(fl.clone()) <= a);
        prop_assert!(a < QuadExt::from_bigint(fl + BigInt::from(1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn partition_svg_is_stable(poly in polygon()) {
        let a = Analysis::new(poly);
        let one = Scene::partition(&a.system, &a.forward, Some(&a.paths)).to_svg().unwrap();
        let two = Scene::partition(&a.system, &a.forward, Some(&a.paths)).to_svg().unwrap();
        prop_assert_eq!(one, two);
    }

    #[test]
    fn verifier_is_deterministic(poly in polygon(), seed in any::<u64>()) {
        use pinwheel::verify::Verifier;
        let run = || {
            let v = Verifier::new(poly.clone(), 30, seed);
            [v.check_structure3(), v.check_apex()].iter().map(|r| r.to_json()).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }
}
