//! Seeded random nice polygons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::geom::Point;
use crate::polygon::NicePolygon;

const MAX_ATTEMPTS: usize = 10_000;

/// A nice polygon with integer vertices of absolute value at most `bound`.
///
/// Vertices are lattice points drawn from an annulus and taken in angular
/// order; candidates that fail validation are redrawn. The result depends only on `(n, seed, bound)`.
pub fn random_nice_polygon(n: usize, seed: u64, bound: i64) -> Result<NicePolygon<Rational>> {
    if !(3..=12).contains(&n) {
        return Err(Error::IndexOutOfRange { index: n, lo: 3, hi: 12 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer = bound * bound;
    let inner = outer / 2;
    for attempt in 0..MAX_ATTEMPTS {
        rng.set_stream(attempt as u64);
        // Lattice points in the annulus inner < r² <= outer, sorted by angle
        // with exact integer comparisons.
        let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
        while pts.len() < n {
            let x = rng.random_range(-bound..=bound);
            let y = rng.random_range(-bound..=bound);
            let r2 = x * x + y * y;
            if r2 > inner && r2 <= outer && !pts.contains(&(x, y)) {
                pts.push((x, y));
            }
        }
        pts.sort_by(|&(ax, ay), &(bx, by)| {
            let half = |x: i64, y: i64| (y < 0 || (y == 0 && x < 0)) as u8;
            half(ax, ay).cmp(&half(bx, by)).then_with(|| (bx * ay).cmp(&(ax * by)))
        });
        let vertices: Vec<Point<Rational>> = pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect();
        if let Ok(p) = NicePolygon::new(vertices) {
            return Ok(p);
        }
    }
    Err(Error::GenerationFailed { attempts: MAX_ATTEMPTS })
}

/// Default coordinate bound for `n` vertices, loose enough that convex
/// position is common.
pub fn default_bound(n: usize) -> i64 {
    4 * n as i64 + 6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        for n in 3..=8 {
            let a = random_nice_polygon(n, 11, default_bound(n)).unwrap();
            let b = random_nice_polygon(n, 11, default_bound(n)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.n(), n);
            assert!(NicePolygon::new(a.vertices().to_vec()).is_ok());
        }
        assert!(random_nice_polygon(2, 0, 10).is_err());
    }
}
