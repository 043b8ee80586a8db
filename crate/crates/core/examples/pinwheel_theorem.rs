//! The pinwheel map ψ* reproduces ψ: starting from the section ι(p), a
//! bounded number of ψ* steps reaches ψ(p).

use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::{Analysis, ConvexRegion, Field, Rational};

fn main() {
    let a = Analysis::new(random_nice_polygon(6, 11, default_bound(6)).unwrap());
    let r = a.core_radius() * Rational::from_int(2);
    let window = ConvexRegion::closed_box(-r.clone(), -r.clone(), r.clone(), r);
    let mut worst = 0;
    for (i, tile) in a.forward.tiles().iter().enumerate() {
        for p in tile.region.sample_points(4, i as u64, Some(&window)).unwrap() {
            let step = a.pinwheel_theorem_step(&p).unwrap();
            assert_eq!(step.image, a.polygon().psi(&p).unwrap().0);
            worst = worst.max(step.steps);
        }
    }
    println!("{} tiles sampled; at most {} psi* steps (bound 3n = {})", a.forward.tiles().len(), worst, 3 * a.n());

    let p = a.forward.tiles()[0].region.sample_points(1, 0, Some(&window)).unwrap().remove(0);
    let s = a.pinwheel_theorem_step(&p).unwrap();
    println!("p = {}: iota index {}, {} steps to psi(p) = {}", p.to_json(), s.start_index + 1, s.steps, s.image.to_json());
}
