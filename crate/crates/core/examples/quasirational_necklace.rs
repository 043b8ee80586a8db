//! Areas A_j, the integers D_j, a necklace ring and a boundedness
//! certificate checked against a long ψ-orbit.
//!
//! `cargo run --example quasirational_necklace -- necklace.svg`

use num_bigint::BigInt;
use pinwheel::dynamics::linf;
use pinwheel::quasi::{certify_smallest, necklace_ring, quasi_analyze};
use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::render::Scene;
use pinwheel::{Analysis, Field, Point, Rational};

fn main() {
    let a = Analysis::new(random_nice_polygon(5, 4, default_bound(5)).unwrap());
    let data = quasi_analyze(&a.system);
    println!("A_j = {:?}", data.areas.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("D_j = {:?}", data.d_j.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    let ring = necklace_ring(&a.system, &data, &BigInt::from(1));
    if let Some(out) = std::env::args().nth(1) {
        std::fs::write(&out, Scene::necklace(&a.system, &ring).to_svg().unwrap()).unwrap();
        println!("wrote {out}");
    }

    let p = Point::new(a.core_radius() + Rational::new(1.into(), 3.into()), Rational::new(2.into(), 9.into()));
    let k = a.section(&p).unwrap().k;
    let cert = certify_smallest(&a.system, &p, k, 1 << 24).unwrap();
    println!("certificate: m = {}, radius {}", cert.m, cert.radius);

    let mut q = p.clone();
    let mut far = Rational::zero();
    for _ in 0..20_000 {
        q = a.polygon().psi(&q).unwrap().0;
        far = far.max(linf(&q));
    }
    assert!(far <= cert.radius);
    println!("20000 psi steps, max |psi^k(p)| = {far}");
}
