//! A kite with a vertex at √5: everything runs in Q(√5), and the polygon is
//! not quasirational.

use pinwheel::quasi::quasi_analyze;
use pinwheel::verify::{Profile, Verifier};
use pinwheel::{Field, NicePolygon, QuadExt};

fn main() {
    let text = r#"{"field": {"quad": 5}, "vertices": [["-1", "0"], ["0", "1"], [{"a": "0", "b": "1", "d": 5}, "0"], ["0", "-1"]]}"#;
    let kite = NicePolygon::<QuadExt>::parse(text).unwrap();
    let v = Verifier::new(kite, 60, 0);
    let data = quasi_analyze(&v.analysis.system);
    for (j, a) in data.areas.iter().enumerate() {
        println!("A_{} = {}  (~{:.4})", j + 1, a, a.to_f64());
    }
    println!("quasirational: {}", data.quasirational);
    for r in v.run_all(Profile::Quick) {
        println!("{}", r.summary_line());
    }
}
