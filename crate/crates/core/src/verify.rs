//! Sampled and exact checks of the structural statements, with reports.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::billiards::Tile;
use crate::dynamics::{linf, Analysis, IndexedPoint};
use crate::error::Error;
use crate::field::Field;
use crate::geom::Point;
use crate::paths::{tile_translate, PathSet};
use crate::polygon::NicePolygon;
use crate::quasi::{self, necklace, NecklacePlace, StripFrame};
use crate::region::{ConvexRegion, Location};
use crate::strips::PinwheelSystem;

/// One counterexample. `index` is the sample's position in the check's
/// deterministic sample order, so `(seed, index)` replays it.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub input: Value,
    pub expected: Value,
    pub actual: Value,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({ "index": self.index, "input": self.input, "expected": self.expected, "actual": self.actual })
    }
}

/// Outcome of one check on one polygon.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub polygon: Value,
    pub attempted: usize,
    pub valid: usize,
    pub wall_skipped: usize,
    pub violations: Vec<Violation>,
    pub seed: u64,
    /// Check-specific counts.
    pub details: Value,
    /// Wall clock; left out of the serialized report so reruns compare equal.
    pub runtime: Duration,
}

/// Fraction of samples that may land on walls before a check fails.
pub const MAX_WALL_SKIP_RATE: f64 = 0.01;

impl CheckReport {
    fn new(name: &str, polygon: Value, seed: u64) -> Self {
        CheckReport {
            name: name.to_string(),
            polygon,
            attempted: 0,
            valid: 0,
            wall_skipped: 0,
            violations: Vec::new(),
            seed,
            details: Value::Null,
            runtime: Duration::ZERO,
        }
    }

    pub fn wall_skip_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.wall_skipped as f64 / self.attempted as f64
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.wall_skip_rate() <= MAX_WALL_SKIP_RATE
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.name,
            "polygon": self.polygon,
            "attempted": self.attempted,
            "valid": self.valid,
            "wall_skipped": self.wall_skipped,
            "passed": self.passed(),
            "seed": self.seed,
            "details": self.details,
            "violations": self.violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
        })
    }

    /// One line: name, verdict and counts.
    pub fn summary_line(&self) -> String {
        format!(
            "{:<24} {}  attempted={} valid={} wall_skipped={} violations={}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.attempted,
            self.valid,
            self.wall_skipped,
            self.violations.len()
        )
    }
}

/// Per-sample outcome, merged in index order.
enum Outcome {
    Valid,
    Skipped,
    Violated { input: Value, expected: Value, actual: Value },
}

fn violated(input: Value, expected: impl Into<Value>, actual: impl Into<Value>) -> Outcome {
    Outcome::Violated { input, expected: expected.into(), actual: actual.into() }
}

fn is_wall(e: &Error) -> bool {
    matches!(e, Error::UndefinedOnWall { .. } | Error::OnStripBoundary { .. } | Error::OnPrimaryWall)
}

fn tally(report: &mut CheckReport, outcomes: Vec<Outcome>) {
    for (index, o) in outcomes.into_iter().enumerate() {
        report.attempted += 1;
        match o {
            Outcome::Valid => report.valid += 1,
            Outcome::Skipped => report.wall_skipped += 1,
            Outcome::Violated { input, expected, actual } => {
                report.valid += 1;
                report.violations.push(Violation { index, input, expected, actual });
            }
        }
    }
}

fn mix(seed: u64, a: usize, b: usize) -> u64 {
    seed ^ (a as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (b as u64 + 1).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

/// A deliberate defect used to show that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Halve the width of the first strip, leaving its vector alone.
    HalveStripWidth,
    /// Negate the last vector `W_b` of every path.
    FlipFinalW,
    /// Use `m·D_j + 1` in place of `m·D_j` for the necklace exponent.
    WrongNecklaceExponent,
    /// Swap the special and ordinary spokes.
    FlipSpecialFlags,
}

impl Corruption {
    pub fn name(self) -> &'static str {
        match self {
            Corruption::HalveStripWidth => "halve-strip-width",
            Corruption::FlipFinalW => "flip-final-w",
            Corruption::WrongNecklaceExponent => "wrong-necklace-exponent",
            Corruption::FlipSpecialFlags => "flip-special-flags",
        }
    }
}

/// How much work [`Verifier::run_all`] does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn samples(self) -> usize {
        match self {
            Profile::Quick => 60,
            Profile::Full => 240,
        }
    }

    pub fn necklace_exponents(self) -> &'static [i64] {
        match self {
            Profile::Quick => &[1],
            Profile::Full => &[1, 2, 3],
        }
    }

    pub fn orbit_steps(self) -> usize {
        match self {
            Profile::Quick => 2_000,
            Profile::Full => 100_000,
        }
    }
}

/// The check suite for one polygon.
#[derive(Clone, Debug)]
pub struct Verifier<F: Field> {
    pub analysis: Analysis<F>,
    /// Total sample target per sampled check.
    pub samples: usize,
    pub seed: u64,
    corruption: Option<Corruption>,
    polygon_json: Value,
}

impl<F: Field> Verifier<F> {
    pub fn new(polygon: NicePolygon<F>, samples: usize, seed: u64) -> Self {
        let polygon_json = polygon.to_json();
        Verifier { analysis: Analysis::new(polygon), samples, seed, corruption: None, polygon_json }
    }

    /// Applies a defect to the stored pinwheel data.
    pub fn corrupt(mut self, c: Corruption) -> Self {
        let a = &mut self.analysis;
        match c {
            Corruption::HalveStripWidth => {
                let pair = &mut a.system.pairs_mut()[0];
                pair.width_offset = pair.width_offset.half();
                let l = &pair.line;
                pair.line_prime = crate::geom::Line::new(l.a.clone(), l.b.clone(), l.c.clone() + &pair.width_offset);
            }
            Corruption::FlipFinalW => a.paths.map_paths(|p| {
                if let Some(w) = p.w.last_mut() {
                    *w = -w.clone();
                }
            }),
            Corruption::WrongNecklaceExponent => {}
            Corruption::FlipSpecialFlags => {
                for s in a.system.spokes_mut() {
                    s.special = !s.special;
                }
                a.paths = PathSet::new(&a.system);
            }
        }
        self.corruption = Some(c);
        self
    }

    pub fn corruption(&self) -> Option<Corruption> {
        self.corruption
    }

    fn report(&self, name: &str) -> CheckReport {
        CheckReport::new(name, self.polygon_json.clone(), self.seed)
    }

    fn system(&self) -> &PinwheelSystem<F> {
        &self.analysis.system
    }

    fn polygon(&self) -> &NicePolygon<F> {
        self.analysis.polygon()
    }

    fn core_box(&self, scale: i64) -> ConvexRegion<F> {
        let r = self.analysis.core_radius() * F::from_int(scale);
        ConvexRegion::closed_box(-r.clone(), -r.clone(), r.clone(), r)
    }

    /// Points of an unbounded tile pushed out along its recession
    /// direction to L∞ radius at least `radius`.
    fn far_points(&self, tile: &Tile<F>, count: usize, seed: u64, radius: &F) -> Vec<Point<F>> {
        let Some(d) = tile.region.recession_direction() else { return Vec::new() };
        let mut scale = 2;
        let base = loop {
            match tile.region.sample_points(count, seed, Some(&self.core_box(scale))) {
                Ok(pts) => break pts,
                Err(_) if scale < 1 << 20 => scale *= 2,
                Err(_) => return Vec::new(),
            }
        };
        let dn = linf(&Point::new(d.x.clone(), d.y.clone()));
        base.into_iter()
            .map(|p| {
                let t = (radius.clone() + &linf(&p)) / &dn;
                &p + &d.scale(&t)
            })
            .collect()
    }

    /// Samples spanning every tile: lattice points of bounded tiles and
    /// points of unbounded tiles at three radii `r, 4r, 16r` with `r` the
    /// core radius.
    pub fn tile_samples(&self) -> Vec<(usize, Point<F>)> {
        let tiles = self.analysis.forward.tiles();
        let per_tile = self.samples.div_ceil(tiles.len().max(1)).max(3);
        let core = self.analysis.core_radius();
        tiles
            .par_iter()
            .enumerate()
            .map(|(ti, tile)| {
                if tile.bounded {
                    let pts = tile.region.sample_points(per_tile, mix(self.seed, ti, 0), None).unwrap_or_default();
                    pts.into_iter().map(|p| (ti, p)).collect::<Vec<_>>()
                } else {
                    let per_radius = per_tile.div_ceil(3);
                    (0..3)
                        .flat_map(|i| {
                            let r = core.clone() * F::from_int(1 << (2 * i));
                            self.far_points(tile, per_radius, mix(self.seed, ti, i + 1), &r)
                        })
                        .map(|p| (ti, p))
                        .collect()
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn check_pinwheel_theorem(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("pinwheel_theorem");
        let n = self.analysis.n();
        let samples = self.tile_samples();
        let outcomes: Vec<(Outcome, usize)> = samples
            .par_iter()
            .map(|(_, p)| match self.analysis.pinwheel_theorem_step(p) {
                Ok(s) if s.steps <= 3 * n => (Outcome::Valid, s.steps),
                Ok(s) => (violated(p.to_json(), format!("k <= {}", 3 * n), s.steps), s.steps),
                Err(e) if is_wall(&e) => (Outcome::Skipped, 0),
                Err(e) => (violated(p.to_json(), "psi(p) reached within 3n steps", e.to_string()), 0),
            })
            .collect();
        let max_k = outcomes.iter().map(|o| o.1).max().unwrap_or(0);
        tally(&mut r, outcomes.into_iter().map(|o| o.0).collect());
        r.details = json!({ "max_k": max_k, "bound": 3 * n });
        r.runtime = t0.elapsed();
        r
    }

    /// Beyond `R_far`: `k(p) = 1` unless `ψ(p)` lies in a strip, then 2.
    pub fn check_far_field(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("far_field");
        let a = &self.analysis;
        let core = a.core_radius();
        let far = a.far_radius();
        let unbounded: Vec<(usize, &Tile<F>)> = a.forward.tiles().iter().enumerate().filter(|(_, t)| !t.bounded).collect();
        let per_tile = self.samples.div_ceil(unbounded.len().max(1));
        let mut samples: Vec<Point<F>> = unbounded
            .iter()
            .flat_map(|(ti, t)| self.far_points(t, per_tile, mix(self.seed, *ti, 7), &far))
            .collect();
        // Points whose image lies far out in a strip, so that k = 2 is exercised.
        let per_strip = per_tile.div_ceil(2);
        for (j, pair) in a.system.pairs().iter().enumerate() {
            let d = pair.line.direction();
            let dn = linf(&Point::new(d.x.clone(), d.y.clone()));
            let half = Field::abs(&pair.vector.x).max(Field::abs(&pair.vector.y));
            for (side, sign) in [(0, 1), (1, -1)] {
                let t = far.twice() * F::from_int(sign) / &dn;
                let c = &Point::origin() + &d.scale(&t);
                let window = ConvexRegion::closed_box(c.x.clone() - &half, c.y.clone() - &half, c.x.clone() + &half, c.y.clone() + &half);
                let pts = pair.open_strip().sample_points(per_strip, mix(self.seed, j, 50 + side), Some(&window)).unwrap_or_default();
                samples.extend(pts.iter().filter_map(|q| self.polygon().inverse_square_map(q).ok().map(|(p, _)| p)));
            }
        }
        let outcomes: Vec<(Outcome, usize)> = samples
            .par_iter()
            .map(|p| {
                if linf(p) < far {
                    return (violated(p.to_json(), "premise |p| >= R_far", linf(p).to_json()), 0);
                }
                let step = match a.pinwheel_theorem_step(p) {
                    Ok(s) => s,
                    Err(e) if is_wall(&e) => return (Outcome::Skipped, 0),
                    Err(e) => return (violated(p.to_json(), "k in {1, 2}", e.to_string()), 0),
                };
                if linf(&step.image) <= core {
                    return (violated(p.to_json(), "premise |psi(p)| beyond the core", step.image.to_json()), 0);
                }
                let places: Vec<Location> = a.system.pairs().iter().map(|s| s.locate(&step.image)).collect();
                if places.contains(&Location::Boundary) {
                    return (Outcome::Skipped, 0);
                }
                let in_strip = places.contains(&Location::Interior);
                let want = if in_strip { 2 } else { 1 };
                if step.steps == want {
                    (Outcome::Valid, step.steps)
                } else {
                    (violated(p.to_json(), want, step.steps), step.steps)
                }
            })
            .collect();
        let ones = outcomes.iter().filter(|o| o.1 == 1).count();
        let twos = outcomes.iter().filter(|o| o.1 == 2).count();
        tally(&mut r, outcomes.into_iter().map(|o| o.0).collect());
        r.details = json!({ "radius": far.to_f64(), "k1": ones, "k2": twos });
        r.runtime = t0.elapsed();
        r
    }

    /// Exact: paths and nonempty tiles carry the same labels.
    pub fn check_structure1(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("structure1");
        let a = &self.analysis;
        let (no_path, no_tile) = a.paths.mismatches(&a.forward);
        let dups = a.paths.duplicate_labels();
        let mut outcomes = Vec::new();
        for l in &no_path {
            outcomes.push(violated(l.to_json(), "an admissible path", "none"));
        }
        for l in &no_tile {
            outcomes.push(violated(l.to_json(), "a nonempty tile", "none"));
        }
        for l in &dups {
            outcomes.push(violated(l.to_json(), "one path", "several"));
        }
        let checked = a.paths.labels().len().max(a.forward.tiles().len());
        let bad = outcomes.len();
        outcomes.extend((bad..checked).map(|_| Outcome::Valid));
        tally(&mut r, outcomes);
        r.details = json!({
            "paths": a.paths.paths().len(),
            "tiles": a.forward.tiles().len(),
            "bounded": a.forward.bounded_count(),
            "unbounded": a.forward.unbounded_count(),
        });
        r.runtime = t0.elapsed();
        r
    }

    fn bounded_samples(&self) -> Vec<(usize, Point<F>)> {
        self.tile_samples().into_iter().filter(|(ti, _)| self.analysis.forward.tiles()[*ti].bounded).collect()
    }

    /// On bounded `T(a→b)`: `(ψ*)^k(p, a−1) = (ψ(p), b−1)` within `2n`
    /// steps, through exactly the points `p_k = p + Σ_{i≤k} 2W_i`.
    pub fn check_structure2(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("structure2");
        let a = &self.analysis;
        let n = a.n();
        let samples = self.bounded_samples();
        let outcomes: Vec<Outcome> = samples
            .par_iter()
            .map(|(ti, p)| {
                let tile = &a.forward.tiles()[*ti];
                let path = match a.path_of(tile.label) {
                    Ok(x) => x,
                    Err(e) => return violated(p.to_json(), "an admissible path", e.to_string()),
                };
                let q = p + &tile.translation;
                let target = IndexedPoint::new(q, (path.b + n - 1) % n);
                let mut x = IndexedPoint::new(p.clone(), (path.a + n - 1) % n);
                let mut visited = vec![p.clone()];
                let mut reached = false;
                for _ in 0..2 * n {
                    x = match a.system.pinwheel_step(&x) {
                        Ok(y) => y,
                        Err(e) if is_wall(&e) => return Outcome::Skipped,
                        Err(e) => return violated(p.to_json(), "defined", e.to_string()),
                    };
                    if visited.last() != Some(&x.p) {
                        visited.push(x.p.clone());
                    }
                    if x == target {
                        reached = true;
                        break;
                    }
                }
                if !reached {
                    return violated(p.to_json(), "(psi(p), b-1) within 2n steps", "not reached");
                }
                let mut expected = vec![p.clone()];
                for k in path.a..=path.b {
                    let pk = p + &path.partial_displacement(k);
                    if expected.last() != Some(&pk) {
                        expected.push(pk);
                    }
                }
                if visited == expected {
                    Outcome::Valid
                } else {
                    violated(p.to_json(), expected.len(), visited.len())
                }
            })
            .collect();
        tally(&mut r, outcomes);
        r.runtime = t0.elapsed();
        r
    }

    /// For `p ∈ T(a→b)` with `q = ψ(p) ∈ T(c→d)`: `q ∈ Σ_j` for
    /// `j = b, …, c−1`, and `ψ*` carries `(q, b−1)` to `(q, c−1)` in place.
    pub fn check_structure3(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("structure3");
        let a = &self.analysis;
        let n = a.n();
        let samples = self.tile_samples();
        let outcomes: Vec<Outcome> = samples
            .par_iter()
            .map(|(ti, p)| {
                let tile = &a.forward.tiles()[*ti];
                let q = p + &tile.translation;
                let (pa, qc) = match (a.path_of(tile.label), a.classify(&q)) {
                    (Ok(x), Ok(t)) => match a.path_of(t.label) {
                        Ok(y) => (x, y),
                        Err(e) => return violated(q.to_json(), "an admissible path", e.to_string()),
                    },
                    (Err(e), _) => return violated(p.to_json(), "an admissible path", e.to_string()),
                    (_, Err(e)) if is_wall(&e) => return Outcome::Skipped,
                    (_, Err(e)) => return violated(q.to_json(), "classified", e.to_string()),
                };
                let b = pa.b % n;
                let c = a.system.lift(b, qc.a % n);
                for j in b..c {
                    if a.system.pair(j).locate(&q) == Location::Outside {
                        return violated(q.to_json(), format!("in closed strip {}", j % n + 1), "outside");
                    }
                }
                let mut x = IndexedPoint::new(q.clone(), (b + n - 1) % n);
                for _ in b..c {
                    x = match a.system.pinwheel_step(&x) {
                        Ok(y) => y,
                        Err(e) if is_wall(&e) => return Outcome::Skipped,
                        Err(e) => return violated(q.to_json(), "defined", e.to_string()),
                    };
                }
                let want = IndexedPoint::new(q.clone(), (c + n - 1) % n);
                if x == want {
                    Outcome::Valid
                } else {
                    violated(q.to_json(), want.to_json(), x.to_json())
                }
            })
            .collect();
        tally(&mut r, outcomes);
        r.runtime = t0.elapsed();
        r
    }

    /// pin1 on vertices and samples, pin2 exactly on samples, and move as
    /// a vector identity per tile and on samples.
    pub fn check_pin1_pin2_move(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("pin1_pin2_move");
        let a = &self.analysis;
        let per_tile = self.samples.div_ceil(a.forward.tiles().len().max(1)).max(20);
        let outcomes: Vec<(Vec<Outcome>, Option<usize>)> = a
            .forward
            .tiles()
            .par_iter()
            .enumerate()
            .map(|(ti, tile)| {
                let mut out = Vec::new();
                let path = match a.path_of(tile.label) {
                    Ok(x) => x,
                    Err(e) => return (vec![violated(tile.label.to_json(), "an admissible path", e.to_string())], None),
                };
                // move, exact.
                let moved_by = path.displacement_for(tile.label);
                if moved_by == tile.translation {
                    out.push(Outcome::Valid);
                } else {
                    out.push(violated(tile.label.to_json(), tile.translation.to_json(), moved_by.to_json()));
                }
                if !tile.bounded {
                    return (out, None);
                }
                let pts = tile.region.sample_points(per_tile, mix(self.seed, ti, 11), None).unwrap_or_default();
                for p in &pts {
                    match self.polygon().psi(p) {
                        Ok((q, _)) if &q - p == path.displacement() => out.push(Outcome::Valid),
                        Ok((q, _)) => out.push(violated(p.to_json(), path.displacement().to_json(), (&q - p).to_json())),
                        Err(_) => out.push(Outcome::Skipped),
                    }
                }
                for k in path.a..path.b {
                    let moved = tile_translate(path, &tile.region, k).expect("k in range");
                    let strip = a.system.pair(k).closed_strip();
                    match moved.closure_within(&strip) {
                        Ok(true) => out.push(Outcome::Valid),
                        _ => out.push(violated(json!({"tile": tile.label.to_json(), "k": k + 1}), "T(a->b;k) in closed strip k", "not contained")),
                    }
                    let shift = path.partial_displacement(k);
                    for p in &pts {
                        let x = p + &shift;
                        if a.system.pair(k).locate(&x) == Location::Outside {
                            out.push(violated(x.to_json(), format!("in closed strip {}", k % a.n() + 1), "outside"));
                        } else {
                            out.push(Outcome::Valid);
                        }
                    }
                }
                let mut pin2 = None;
                if path.b > path.a {
                    pin2 = Some(pts.len());
                    let shift = path.partial_displacement(path.b - 1);
                    let wb = path.w_at(path.b).twice();
                    for p in &pts {
                        let x = p + &shift;
                        match a.system.strip_map(path.b, &x) {
                            Ok(y) if y == &x + &wb => out.push(Outcome::Valid),
                            Ok(y) => out.push(violated(x.to_json(), (&x + &wb).to_json(), y.to_json())),
                            Err(e) if is_wall(&e) => out.push(Outcome::Skipped),
                            Err(e) => out.push(violated(x.to_json(), "defined", e.to_string())),
                        }
                    }
                }
                (out, pin2)
            })
            .collect();
        let pin2_min = outcomes.iter().filter_map(|o| o.1).min();
        tally(&mut r, outcomes.into_iter().flat_map(|o| o.0).collect());
        r.details = json!({ "pin2_min_samples_per_tile": pin2_min });
        r.runtime = t0.elapsed();
        r
    }

    /// `p_k ∈ Σ_k` (closed) along the maximal path from each start spoke.
    pub fn check_apex(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("apex");
        let a = &self.analysis;
        let mut outcomes = Vec::new();
        for path in a.paths.maximal_paths() {
            let seq = path.apex_sequence(&a.system);
            for (i, p) in seq.iter().enumerate().skip(1) {
                let k = path.a + i - 1;
                if a.system.pair(k).locate(p) == Location::Outside {
                    outcomes.push(violated(
                        json!({"path": path.display_name(a.n()), "k": k % a.n() + 1}),
                        "in closed strip",
                        p.to_json(),
                    ));
                } else {
                    outcomes.push(Outcome::Valid);
                }
            }
        }
        tally(&mut r, outcomes);
        r.runtime = t0.elapsed();
        r
    }

    /// Exit lemma (exact for bounded tiles, witnessed for unbounded ones),
    /// reversal into the backward partition, and the reflected-polygon
    /// index relations.
    pub fn check_exit_reversal_conjugate(&self) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("exit_reversal_conjugate");
        let a = &self.analysis;
        let core = a.core_radius();
        let mut outcomes: Vec<Outcome> = a
            .forward
            .tiles()
            .par_iter()
            .enumerate()
            .map(|(ti, tile)| {
                if tile.bounded {
                    let moved = tile.region.translate(&tile.translation);
                    if tile.region.intersect(&moved).is_full_dimensional() {
                        violated(tile.label.to_json(), "psi(T) and T disjoint", "overlap")
                    } else {
                        Outcome::Valid
                    }
                } else {
                    for i in 0..12 {
                        let radius = core.clone() * F::from_int(1 << i);
                        for p in self.far_points(tile, 2, mix(self.seed, ti, 20 + i), &radius) {
                            let q = &p + &tile.translation;
                            if tile.region.locate(&q) == Location::Interior {
                                return Outcome::Valid;
                            }
                        }
                    }
                    violated(tile.label.to_json(), "a sample with psi(p) in T", "none found")
                }
            })
            .collect();
        let samples = self.tile_samples();
        outcomes.extend(samples.par_iter().map(|(ti, p)| {
            let tile = &a.forward.tiles()[*ti];
            let q = p + &tile.translation;
            match self.polygon().inverse_square_map(&q) {
                Ok((back, Some(l))) => {
                    let want = tile.label.reversed();
                    let inside = a.backward.get(l).is_some_and(|t| t.region.locate(&q) == Location::Interior);
                    if back == *p && l == want && inside {
                        Outcome::Valid
                    } else {
                        violated(p.to_json(), want.to_json(), l.to_json())
                    }
                }
                Ok((_, None)) => violated(p.to_json(), "exterior image", "inside"),
                Err(e) if is_wall(&e) => Outcome::Skipped,
                Err(e) => violated(p.to_json(), "defined", e.to_string()),
            }
        }).collect::<Vec<_>>());
        let (conj, shifts) = conjugate_outcomes(&a.system);
        let parts = [("exit", a.forward.tiles().len()), ("reversal", samples.len()), ("conjugate", conj.len())];
        outcomes.extend(conj);
        tally(&mut r, outcomes);
        let mut breakdown = serde_json::Map::new();
        let mut start = 0;
        for (name, len) in parts {
            let bad = r.violations.iter().filter(|v| (start..start + len).contains(&v.index)).count();
            breakdown.insert(name.into(), json!({ "attempted": len, "violations": bad }));
            start += len;
        }
        r.details = json!({ "parts": breakdown, "strip_shift": shifts.0, "spoke_shift": shifts.1 });
        r.runtime = t0.elapsed();
        r
    }

    /// `ψ̂(R_j^{mD_j}) ⊂ R_{j+1}^{±mD_{j+1}}` and the annulus statement,
    /// sampled for every `j`.
    pub fn check_necklace_invariance(&self, m: i64) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report(&format!("necklace_m{m}"));
        let sys = self.system();
        let n = sys.n();
        let data = quasi::quasi_analyze(sys);
        if !data.quasirational {
            r.details = json!({ "quasirational": false });
            return r;
        }
        let bump = i64::from(self.corruption == Some(Corruption::WrongNecklaceExponent));
        let ring: Vec<quasi::Bead<F>> = (0..n)
            .map(|j| quasi::Bead::new(sys, j, &(BigInt::from(m) * &data.d_j[j] + bump)))
            .collect();
        let per_j = self.samples.div_ceil(n).max(100);
        let outcomes: Vec<Vec<Outcome>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let nj = (j + 1) % n;
                let mut out = Vec::new();
                let regions = ring[j].regions();
                let per_region = per_j.div_ceil(regions.len());
                for (ri, reg) in regions.iter().enumerate() {
                    for p in reg.sample_points(per_region, mix(self.seed, j, 30 + ri), None).unwrap_or_default() {
                        match sys.strip_system_return(&IndexedPoint::new(p.clone(), j), usize::MAX) {
                            Ok((y, _)) if ring[nj].contains(&y.p) => out.push(Outcome::Valid),
                            Ok((y, _)) => out.push(violated(p.to_json(), format!("in bead {}", nj + 1), y.p.to_json())),
                            Err(e) if is_wall(&e) => out.push(Outcome::Skipped),
                            Err(e) => out.push(violated(p.to_json(), "defined", e.to_string())),
                        }
                    }
                }
                // Points between R_j and the bead.
                let frame = StripFrame::new(sys, j);
                let frame_n = StripFrame::new(sys, nj);
                let inner = necklace(sys, j, &BigInt::from(0));
                let inner_n = necklace(sys, nj, &BigInt::from(0));
                let hull = bounding_box(inner.vertices().chain(ring[j].vertices())).intersect(&sys.pair(j).open_strip());
                let candidates = hull.sample_points(per_j * 4, mix(self.seed, j, 40), None).unwrap_or_default();
                let mut taken = 0;
                for p in candidates {
                    if taken >= per_j / 2 {
                        break;
                    }
                    if quasi::necklace_place(&frame, &inner, &ring[j], &p) != NecklacePlace::Between {
                        continue;
                    }
                    taken += 1;
                    match sys.strip_system_return(&IndexedPoint::new(p.clone(), j), usize::MAX) {
                        Ok((y, _)) => match quasi::necklace_place(&frame_n, &inner_n, &ring[nj], &y.p) {
                            NecklacePlace::Between => out.push(Outcome::Valid),
                            other => out.push(violated(p.to_json(), "between", format!("{other:?}"))),
                        },
                        Err(e) if is_wall(&e) => out.push(Outcome::Skipped),
                        Err(e) => out.push(violated(p.to_json(), "defined", e.to_string())),
                    }
                }
                out
            })
            .collect();
        tally(&mut r, outcomes.into_iter().flatten().collect());
        r.details = json!({
            "quasirational": true,
            "D_j": data.d_j.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        });
        r.runtime = t0.elapsed();
        r
    }

    /// Certifies a generic start point and runs its `ψ`-orbit for `steps`,
    /// which must never leave the certified radius.
    pub fn check_certificate(&self, steps: usize) -> CheckReport {
        let t0 = Instant::now();
        let mut r = self.report("boundedness_certificate");
        let a = &self.analysis;
        if !quasi::quasi_analyze(&a.system).quasirational {
            r.details = json!({ "quasirational": false });
            return r;
        }
        let core = a.core_radius();
        let start = (1..=8)
            .map(|i| Point::new(core.clone() * F::from_int(i) + F::from_rational(crate::field::Rational::new(1.into(), 7.into())), F::from_rational(crate::field::Rational::new(1.into(), 3.into()))))
            .find(|p| a.section(p).is_ok());
        let Some(p) = start else {
            tally(&mut r, vec![Outcome::Skipped]);
            return r;
        };
        let index = a.section(&p).expect("checked above").k;
        let cert = match quasi::certify_smallest(&a.system, &p, index, 1 << 24) {
            Ok(c) => c,
            Err(e) => {
                tally(&mut r, vec![violated(p.to_json(), "certificate", e.to_string())]);
                r.runtime = t0.elapsed();
                return r;
            }
        };
        let mut q = p.clone();
        let mut outcome = Outcome::Valid;
        let mut taken = 0;
        for i in 0..steps {
            q = match self.polygon().psi(&q) {
                Ok((x, _)) => x,
                Err(_) => {
                    outcome = Outcome::Skipped;
                    break;
                }
            };
            taken = i + 1;
            if linf(&q) > cert.radius {
                outcome = violated(p.to_json(), format!("|psi^k(p)| <= {}", cert.radius), json!({"k": i + 1, "point": q.to_json()}));
                break;
            }
        }
        tally(&mut r, vec![outcome]);
        r.details = json!({ "certificate": cert.to_json(), "steps": taken });
        r.runtime = t0.elapsed();
        r
    }

    /// Every check, in a fixed order.
    pub fn run_all(&self, profile: Profile) -> Vec<CheckReport> {
        let mut jobs: Vec<Box<dyn Fn() -> CheckReport + Sync + '_>> = vec![
            Box::new(|| self.check_structure1()),
            Box::new(|| self.check_pinwheel_theorem()),
            Box::new(|| self.check_far_field()),
            Box::new(|| self.check_structure2()),
            Box::new(|| self.check_structure3()),
            Box::new(|| self.check_pin1_pin2_move()),
            Box::new(|| self.check_apex()),
            Box::new(|| self.check_exit_reversal_conjugate()),
        ];
        if quasi::quasi_analyze(self.system()).quasirational {
            for &m in profile.necklace_exponents() {
                jobs.push(Box::new(move || self.check_necklace_invariance(m)));
            }
            jobs.push(Box::new(move || self.check_certificate(profile.orbit_steps())));
        }
        jobs.par_iter().map(|job| job()).collect()
    }
}

fn bounding_box<'a, F: Field>(points: impl Iterator<Item = &'a Point<F>>) -> ConvexRegion<F> {
    let pts: Vec<&Point<F>> = points.collect();
    let min = |f: fn(&Point<F>) -> &F| pts.iter().map(|p| f(p).clone()).min().expect("nonempty");
    let max = |f: fn(&Point<F>) -> &F| pts.iter().map(|p| f(p).clone()).max().expect("nonempty");
    ConvexRegion::closed_box(min(|p| &p.x), min(|p| &p.y), max(|p| &p.x), max(|p| &p.y))
}

/// Reflecting in the x-axis reverses the strip order and the spoke order:
/// `Σ_k ↦ Σ_{s−k}` and `S_k ↦ S_{s'−k}` for fixed shifts `s`, `s'`.
fn conjugate_outcomes<F: Field>(system: &PinwheelSystem<F>) -> (Vec<Outcome>, (Option<usize>, Option<usize>)) {
    let n = system.n();
    let bar = PinwheelSystem::new(system.polygon().reflect_x());
    let strips: Vec<ConvexRegion<F>> = system.pairs().iter().map(|p| p.closed_strip().reflect_x()).collect();
    let bar_strips: Vec<ConvexRegion<F>> = bar.pairs().iter().map(|p| p.closed_strip()).collect();
    let reflect = |p: &Point<F>| Point::new(p.x.clone(), -p.y.clone());
    let spoke_ends = |s: &crate::strips::Spoke<F>| {
        let mut e = [s.tail_point.clone(), s.head_point.clone()];
        e.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        e
    };
    let spokes: Vec<[Point<F>; 2]> = system
        .spokes()
        .iter()
        .map(|s| {
            let mut e = [reflect(&s.tail_point), reflect(&s.head_point)];
            e.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
            e
        })
        .collect();
    let bar_spokes: Vec<[Point<F>; 2]> = bar.spokes().iter().map(spoke_ends).collect();
    let strip_shift = (0..n).find(|&s| bar_strips[s % n] == strips[0]);
    let spoke_shift = (0..n).find(|&s| bar_spokes[s % n] == spokes[0]);
    let mut out = Vec::new();
    for k in 0..n {
        match strip_shift {
            Some(s) if bar_strips[(s + n - k) % n] == strips[k] => out.push(Outcome::Valid),
            _ => out.push(violated(json!({"strip": k + 1}), "reflected strip in the conjugate family", "no match")),
        }
        match spoke_shift {
            Some(s) if bar_spokes[(s + n - k) % n] == spokes[k] => out.push(Outcome::Valid),
            _ => out.push(violated(json!({"spoke": k + 1}), "reflected spoke in the conjugate family", "no match")),
        }
    }
    (out, (strip_shift, spoke_shift))
}

/// Number of reports that failed.
pub fn failures(reports: &[CheckReport]) -> usize {
    reports.iter().filter(|r| !r.passed()).count()
}

pub fn reports_to_json(reports: &[CheckReport]) -> Value {
    json!({
        "schema": "pinwheel.verify/1",
        "passed": failures(reports) == 0,
        "reports": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{default_bound, random_nice_polygon};
    use crate::Rational;

    fn pentagon() -> NicePolygon<Rational> {
        random_nice_polygon(5, 2024 + 500, default_bound(5)).unwrap()
    }

    #[test]
    fn clean_polygon_passes_quick_profile() {
        let reports = Verifier::new(pentagon(), 40, 1).run_all(Profile::Quick);
        for r in &reports {
            assert!(r.passed(), "{}", r.summary_line());
        }
        assert_eq!(reports_to_json(&reports)["passed"], true);
    }

    #[test]
    fn every_corruption_is_caught_on_a_pentagon() {
        for c in [
            Corruption::HalveStripWidth,
            Corruption::FlipFinalW,
            Corruption::WrongNecklaceExponent,
            Corruption::FlipSpecialFlags,
        ] {
            let v = Verifier::new(pentagon(), 40, 1).corrupt(c);
            assert_eq!(v.corruption(), Some(c));
            assert!(failures(&v.run_all(Profile::Quick)) > 0, "{} went unnoticed", c.name());
        }
    }
}
