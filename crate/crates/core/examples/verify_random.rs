//! The verification suite on a few random polygons, plus one corrupted
//! run that must fail.

use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::verify::{failures, Corruption, Profile, Verifier};

fn main() {
    for n in 3..=6 {
        let poly = random_nice_polygon(n, 100 + n as u64, default_bound(n)).unwrap();
        let reports = Verifier::new(poly, Profile::Quick.samples(), 1).run_all(Profile::Quick);
        println!("n = {n}: {} checks, {} failed", reports.len(), failures(&reports));
        for r in &reports {
            println!("  {}", r.summary_line());
        }
    }
    let poly = random_nice_polygon(5, 105, default_bound(5)).unwrap();
    let bad = Verifier::new(poly, 60, 1).corrupt(Corruption::HalveStripWidth);
    let r = bad.check_pinwheel_theorem();
    println!("corrupted strip: {}", r.summary_line());
}
