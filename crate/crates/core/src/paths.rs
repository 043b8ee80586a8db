//! Admissible paths of spokes and their link to the forward partition.

use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::billiards::{Partition, TileLabel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{Point, Vector2};
use crate::strips::PinwheelSystem;
use crate::region::ConvexRegion;

/// A path `a → b` through an odd number of spokes.
///
/// Indices are lifted so that `a ≤ b < a + n`; reduce mod `n` for display.
/// `w[k − a]` is the vector `W_k` from the first to the last endpoint of
/// spoke `k` as the path traverses it, or zero when the path skips `k`.
/// Each `W_k` is `±V_k / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePath<F: Field> {
    pub a: usize,
    pub b: usize,
    pub involved: Vec<usize>,
    pub w: Vec<Vector2<F>>,
    /// First vertex of the path.
    pub first: usize,
    /// Last vertex of the path.
    pub last: usize,
    /// Whether the final spoke was traversed against its orientation.
    pub final_reversed: bool,
}

impl<F: Field> AdmissiblePath<F> {
    pub fn len(&self) -> usize {
        self.involved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.involved.is_empty()
    }

    /// Tile label `(v, w)` of the tile this path names.
    pub fn label(&self) -> TileLabel {
        TileLabel::new(self.first, self.last)
    }

    /// Labels of every tile filed under this path: for `a → a` both
    /// unbounded tiles of the spoke.
    pub fn labels(&self) -> Vec<TileLabel> {
        if self.a == self.b {
            vec![self.label(), self.label().reversed()]
        } else {
            vec![self.label()]
        }
    }

    /// `W_k`, zero outside `a..=b`.
    pub fn w_at(&self, k: usize) -> Vector2<F> {
        if k < self.a || k > self.b {
            return Vector2::zero();
        }
        self.w[k - self.a].clone()
    }

    /// `Σ_{i=a}^{k} 2W_i`.
    pub fn partial_displacement(&self, k: usize) -> Vector2<F> {
        let mut s = Vector2::zero();
        for i in self.a..=k.min(self.b) {
            s = s + self.w[i - self.a].twice();
        }
        s
    }

    /// `Σ 2W_i = ψ(p) − p` on the tile.
    pub fn displacement(&self) -> Vector2<F> {
        self.partial_displacement(self.b)
    }

    /// Translation of the tile `label` filed under this path; the second
    /// tile of an `a → a` path moves the opposite way.
    pub fn displacement_for(&self, label: TileLabel) -> Vector2<F> {
        if label == self.label() {
            self.displacement()
        } else {
            -self.displacement()
        }
    }

    /// `p_{a−1} = v, p_a, …, p_b` with `p_k = v + Σ_{i=a}^{k} 2W_i`.
    pub fn apex_sequence(&self, system: &PinwheelSystem<F>) -> Vec<Point<F>> {
        let mut p = system.polygon().vertex(self.first).clone();
        let mut out = vec![p.clone()];
        for wk in &self.w {
            p = &p + &wk.twice();
            out.push(p.clone());
        }
        out
    }

    pub fn display_name(&self, n: usize) -> String {
        format!("{}→{}", self.a % n + 1, self.b % n + 1)
    }

    pub fn to_json(&self, system: &PinwheelSystem<F>) -> Value {
        let n = system.n();
        json!({
            "path": self.display_name(n),
            "involved": self.involved.iter().map(|k| k % n + 1).collect::<Vec<_>>(),
            "special": self.involved.iter().map(|&k| system.spoke(k).special).collect::<Vec<_>>(),
            "W": (self.a..=self.b).map(|k| json!({"spoke": k % n + 1, "W": self.w_at(k).to_json()})).collect::<Vec<_>>(),
            "endpoints": [self.first + 1, self.last + 1],
        })
    }
}

/// Walks forward from spoke `a`, emitting every odd, non-wrapping prefix.
fn walk<F: Field>(system: &PinwheelSystem<F>, a: usize) -> Vec<AdmissiblePath<F>> {
    let n = system.n();
    let start = system.spoke(a);
    let origin = start.tail;
    let mut x = start.head;
    let mut involved = vec![a];
    let mut w = vec![start.oriented()];
    let mut out = vec![AdmissiblePath {
        a,
        b: a,
        involved: involved.clone(),
        w: w.clone(),
        first: origin,
        last: x,
        final_reversed: false,
    }];
    for j in a + 1..a + n {
        let s = system.spoke(j);
        if s.special {
            // A special spoke can only end a path, and is crossed against
            // its orientation when it does.
            if s.has_vertex(x) && involved.len() % 2 == 0 {
                let other = s.other_end(x);
                if other != origin {
                    let mut ws = w.clone();
                    ws.push(system.polygon().vertex(other) - system.polygon().vertex(x));
                    let mut inv = involved.clone();
                    inv.push(j);
                    out.push(AdmissiblePath {
                        a,
                        b: j,
                        involved: inv,
                        w: ws,
                        first: origin,
                        last: other,
                        final_reversed: s.head == x,
                    });
                }
            }
            w.push(Vector2::zero());
            continue;
        }
        if s.tail != x {
            break;
        }
        x = s.head;
        involved.push(j);
        w.push(s.oriented());
        if x == origin {
            break;
        }
        if involved.len() % 2 == 1 {
            out.push(AdmissiblePath {
                a,
                b: j,
                involved: involved.clone(),
                w: w.clone(),
                first: origin,
                last: x,
                final_reversed: false,
            });
        }
    }
    out
}

/// All admissible paths, grouped by start spoke.
pub fn enumerate_paths<F: Field>(system: &PinwheelSystem<F>) -> Vec<AdmissiblePath<F>> {
    (0..system.n()).flat_map(|a| walk(system, a)).collect()
}

/// Admissible paths indexed by tile label.
#[derive(Clone, Debug)]
pub struct PathSet<F: Field> {
    paths: Vec<AdmissiblePath<F>>,
    by_label: HashMap<TileLabel, usize>,
}

impl<F: Field> PathSet<F> {
    pub fn new(system: &PinwheelSystem<F>) -> Self {
        let paths = enumerate_paths(system);
        let mut by_label = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            for l in p.labels() {
                by_label.entry(l).or_insert(i);
            }
        }
        PathSet { paths, by_label }
    }

    pub fn paths(&self) -> &[AdmissiblePath<F>] {
        &self.paths
    }

    /// The longest path from each start spoke.
    pub fn maximal_paths(&self) -> Vec<&AdmissiblePath<F>> {
        let mut best: HashMap<usize, &AdmissiblePath<F>> = HashMap::new();
        for p in &self.paths {
            let e = best.entry(p.a).or_insert(p);
            if p.b > e.b {
                *e = p;
            }
        }
        let mut out: Vec<_> = best.into_values().collect();
        out.sort_by_key(|p| p.a);
        out
    }

    pub(crate) fn map_paths(&mut self, f: impl FnMut(&mut AdmissiblePath<F>)) {
        self.paths.iter_mut().for_each(f);
    }

    pub fn path_for_label(&self, label: TileLabel) -> Result<&AdmissiblePath<F>> {
        self.by_label
            .get(&label)
            .map(|&i| &self.paths[i])
            .ok_or(Error::NotAdmissiblePair { v: label.v, w: label.w })
    }

    pub fn labels(&self) -> BTreeSet<TileLabel> {
        self.by_label.keys().copied().collect()
    }

    /// Labels claimed by more than one path.
    pub fn duplicate_labels(&self) -> Vec<TileLabel> {
        let mut seen = BTreeSet::new();
        let mut dup = Vec::new();
        for p in &self.paths {
            for l in p.labels() {
                if !seen.insert(l) {
                    dup.push(l);
                }
            }
        }
        dup
    }

    /// Labels of tiles without a path, and path labels without a tile.
    pub fn mismatches(&self, partition: &Partition<F>) -> (Vec<TileLabel>, Vec<TileLabel>) {
        let tiles: BTreeSet<TileLabel> = partition.tiles().iter().map(|t| t.label).collect();
        let paths = self.labels();
        (tiles.difference(&paths).copied().collect(), paths.difference(&tiles).copied().collect())
    }
}

/// `T(a→b; k) = T(a→b) + Σ_{i=a}^{k} 2W_i` for `a ≤ k ≤ b`.
pub fn tile_translate<F: Field>(path: &AdmissiblePath<F>, tile: &ConvexRegion<F>, k: usize) -> Result<ConvexRegion<F>> {
    if k < path.a || k > path.b {
        return Err(Error::IndexOutOfRange { index: k, lo: path.a, hi: path.b });
    }
    Ok(tile.translate(&path.partial_displacement(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::polygon::NicePolygon;

    fn system(coords: &[(i64, i64)]) -> PinwheelSystem<Rational> {
        PinwheelSystem::new(NicePolygon::from_ints(coords).unwrap())
    }

    #[test]
    fn triangle_has_three_single_spoke_paths() {
        let s = system(&[(0, 0), (1, 3), (4, 0)]);
        let ps = PathSet::new(&s);
        assert_eq!(ps.paths().len(), 3);
        assert!(ps.paths().iter().all(|p| p.len() == 1 && p.a == p.b));
        let bottom = &ps.paths()[0];
        assert_eq!(bottom.displacement(), Vector2::from_ints(2, 6));
        let part = Partition::forward(s.polygon());
        let (a, b) = ps.mismatches(&part);
        assert!(a.is_empty() && b.is_empty());
    }

    #[test]
    fn displacement_telescopes() {
        let s = system(&[(0, 0), (1, 5), (4, 7), (9, 4), (7, -1)]);
        for p in enumerate_paths(&s) {
            let v = s.polygon().vertex(p.first);
            let w = s.polygon().vertex(p.last);
            assert_eq!(p.displacement(), (w - v).twice());
            assert_eq!(p.len() % 2, 1);
            let apex = p.apex_sequence(&s);
            assert_eq!(apex.last().unwrap(), &(v + &p.displacement()));
        }
    }

    #[test]
    fn unknown_pairs_are_rejected() {
        let s = system(&[(0, 0), (1, 3), (4, 0)]);
        let ps = PathSet::new(&s);
        assert!(matches!(ps.path_for_label(TileLabel::new(0, 0)), Err(Error::NotAdmissiblePair { .. })));
        let p = &ps.paths()[0];
        assert!(tile_translate(p, &ConvexRegion::plane(), p.a + 1).is_err());
    }
}
