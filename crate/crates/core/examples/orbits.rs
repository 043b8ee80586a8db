//! Orbits of ψ, ψ* and the strip-system return map from one start point.

use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::{Analysis, Field, IndexedPoint, MapKind, Point, Rational};

fn main() {
    let a = Analysis::new(random_nice_polygon(4, 2, default_bound(4)).unwrap());
    let p = Point::new(a.core_radius(), a.core_radius().half());
    let p = Point::new(p.x + Rational::new(1.into(), 7.into()), p.y);
    let section = a.section(&p).unwrap();

    for (map, steps) in [(MapKind::Psi, 12), (MapKind::PsiStar, 12), (MapKind::StripReturn, 8)] {
        let start = if map == MapKind::Psi { IndexedPoint::new(p.clone(), 0) } else { section.clone() };
        let record = a.orbit(&start, map, steps, None);
        println!("{}:", map.name());
        for e in &record.entries {
            println!("  step {:>3}  index {:?}  {:<12} {}", e.step, e.index.map(|k| k + 1), e.event.name(), e.point.to_json());
        }
    }
}
