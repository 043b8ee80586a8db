//! The triangle (0,0), (1,3), (4,0): outer billiards, strips, strip maps
//! and the square map on a few hand-checkable points.

use pinwheel::{NicePolygon, PinwheelSystem, Point, Rational};

fn main() {
    let tri = NicePolygon::<Rational>::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap();
    let p = Point::from_ints(8, -2);

    let once = tri.outer_step(&p).unwrap();
    let (twice, label) = tri.square_map(&p).unwrap();
    println!("outer billiards: {} -> {} -> {}", p.to_json(), once.to_json(), twice.to_json());
    println!("tile label {}", label.unwrap());

    let sys = PinwheelSystem::new(tri);
    for pair in sys.pairs() {
        println!("strip {}: edge {}, V = {}", pair.index + 1, pair.edge + 1, pair.vector.to_json());
    }

    // μ moves a point one step closer to its strip, or fixes it.
    let j = sys.strip_of_edge(2);
    let q = Point::from_ints(0, 13);
    println!("mu_{}{} = {}", j + 1, q.to_json(), sys.strip_map(j, &q).unwrap().to_json());
}
