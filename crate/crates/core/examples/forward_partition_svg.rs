//! Forward partition of a random pentagon, with path names, written as SVG.
//!
//! `cargo run --example forward_partition_svg -- out.svg`

use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::render::Scene;
use pinwheel::Analysis;

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "partition.svg".into());
    let poly = random_nice_polygon(5, 3, default_bound(5)).unwrap();
    let a = Analysis::new(poly);
    let n = a.n();
    for t in a.forward.tiles() {
        let path = a.path_of(t.label).unwrap();
        println!("{}  path {:<5} {}", t.label, path.display_name(n), if t.bounded { "bounded" } else { "unbounded" });
    }
    let svg = Scene::partition(&a.system, &a.forward, Some(&a.paths)).to_svg().unwrap();
    std::fs::write(&out, svg).unwrap();
    println!("wrote {out}");
}
