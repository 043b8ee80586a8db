//! The pinwheel map `ψ*` on `R² × {1..n}` and the maps built from it.

use serde_json::{json, Value};

use crate::billiards::{Partition, Tile, TileLabel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::Point;
use crate::paths::{AdmissiblePath, PathSet};
use crate::polygon::NicePolygon;
use crate::region::Location;
use crate::strips::PinwheelSystem;

/// A point of `R²_n`. The index is 0-based and always reduced mod `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexedPoint<F: Field> {
    pub p: Point<F>,
    pub k: usize,
}

impl<F: Field> IndexedPoint<F> {
    pub fn new(p: Point<F>, k: usize) -> Self {
        IndexedPoint { p, k }
    }

    pub fn to_json(&self) -> Value {
        json!({ "point": self.p.to_json(), "index": self.k + 1 })
    }
}

impl<F: Field> PinwheelSystem<F> {
    /// `ψ*(p, k)`: apply `μ_{k+1}`; bump the index exactly when `p` is fixed.
    pub fn pinwheel_step(&self, x: &IndexedPoint<F>) -> Result<IndexedPoint<F>> {
        let n = self.n();
        let j = (x.k + 1) % n;
        let q = self.strip_map(j, &x.p)?;
        if q == x.p {
            Ok(IndexedPoint::new(q, j))
        } else {
            Ok(IndexedPoint::new(q, x.k % n))
        }
    }

    /// First return of `ψ*` to `X̂ = ⋃ Σ_j × {j}`, in closed form.
    ///
    /// From `(p, k)` with `p` inside `Σ_k`, the orbit translates by
    /// `±V_{k+1}` until it lands in `Σ_{k+1}`; each such step moves the
    /// `Σ_k` offset by a full width, so it never re-enters `Σ_k` first.
    /// Returns the landing point and the number of `ψ*` steps.
    pub fn strip_system_return(&self, x: &IndexedPoint<F>, budget: usize) -> Result<(IndexedPoint<F>, usize)> {
        if self.pair(x.k).locate(&x.p) != Location::Interior {
            return Err(Error::OnStripBoundary { strip: x.k % self.n() });
        }
        self.land_in_next_strip(x, budget)
    }

    /// Iterates `ψ*` from `(p, k)` until the index first changes, landing in
    /// `Σ_{k+1}`; closed form, no membership requirement on `p`.
    pub fn land_in_next_strip(&self, x: &IndexedPoint<F>, budget: usize) -> Result<(IndexedPoint<F>, usize)> {
        let j = (x.k + 1) % self.n();
        let pair = self.pair(j);
        let r = pair.offset(&x.p) / &pair.width_offset;
        let f = r.floor();
        if F::from_bigint(f.clone()) == r {
            return Err(Error::OnStripBoundary { strip: j });
        }
        let moves = f.magnitude().clone();
        let steps = moves.clone() + 1u32;
        let steps: usize = match steps.try_into() {
            Ok(s) if s <= budget => s,
            _ => return Err(Error::BudgetExceeded { budget }),
        };
        let shift = pair.vector.scale(&F::from_bigint(-f));
        Ok((IndexedPoint::new(&x.p + &shift, j), steps))
    }

    /// Step-by-step version of [`PinwheelSystem::strip_system_return`].
    pub fn strip_system_return_stepwise(&self, x: &IndexedPoint<F>, budget: usize) -> Result<(IndexedPoint<F>, usize)> {
        let mut y = x.clone();
        for step in 1..=budget {
            y = self.pinwheel_step(&y)?;
            if self.pair(y.k).locate(&y.p) == Location::Interior {
                return Ok((y, step));
            }
        }
        Err(Error::BudgetExceeded { budget })
    }

    /// `Ψ̂ = (ψ̂)^n` from a point of `Σ_k`; returns to `Σ_k`.
    pub fn pinwheel_return(&self, x: &IndexedPoint<F>, budget: usize) -> Result<(IndexedPoint<F>, usize)> {
        let mut y = x.clone();
        let mut total = 0usize;
        for _ in 0..self.n() {
            let (z, s) = self.strip_system_return(&y, budget - total.min(budget))?;
            total += s;
            y = z;
        }
        Ok((y, total))
    }
}

/// Polygon, pinwheel system, both partitions and the admissible paths.
#[derive(Clone, Debug)]
pub struct Analysis<F: Field> {
    pub system: PinwheelSystem<F>,
    pub forward: Partition<F>,
    pub backward: Partition<F>,
    pub paths: PathSet<F>,
}

/// Outcome of iterating `ψ*` to realize one application of `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremStep<F: Field> {
    pub image: Point<F>,
    pub steps: usize,
    pub start_index: usize,
    pub landing_index: usize,
}

impl<F: Field> Analysis<F> {
    pub fn new(polygon: NicePolygon<F>) -> Self {
        let forward = Partition::forward(&polygon);
        let backward = Partition::backward(&polygon);
        let system = PinwheelSystem::new(polygon);
        let paths = PathSet::new(&system);
        Analysis { system, forward, backward, paths }
    }

    pub fn polygon(&self) -> &NicePolygon<F> {
        self.system.polygon()
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    /// Tile of `p`; errors on walls and inside the polygon.
    pub fn classify(&self, p: &Point<F>) -> Result<&Tile<F>> {
        self.forward.classify(self.polygon(), p)
    }

    pub fn path_of(&self, label: TileLabel) -> Result<&AdmissiblePath<F>> {
        self.paths.path_for_label(label)
    }

    /// Start spoke (reduced) of the path naming the tile of `p`.
    pub fn start_spoke(&self, p: &Point<F>) -> Result<usize> {
        let tile = self.classify(p)?;
        Ok(self.path_of(tile.label)?.a % self.n())
    }

    /// `ι(p) = (p, a − 1)` for `p` in `T(a→b)`.
    pub fn section(&self, p: &Point<F>) -> Result<IndexedPoint<F>> {
        let a = self.start_spoke(p)?;
        let n = self.n();
        Ok(IndexedPoint::new(p.clone(), (a + n - 1) % n))
    }

    /// Iterates `ψ*` from `ι(p)` until it reaches `(ψ(p), c − 1)`, where
    /// `ψ(p)` lies in `T(c→d)`. Gives up after `3n` steps.
    pub fn pinwheel_theorem_step(&self, p: &Point<F>) -> Result<TheoremStep<F>> {
        let n = self.n();
        let start = self.section(p)?;
        let (q, _) = self.polygon().psi(p)?;
        let c = self.start_spoke(&q)?;
        let target = IndexedPoint::new(q.clone(), (c + n - 1) % n);
        let mut x = start.clone();
        for k in 1..=3 * n {
            x = self.system.pinwheel_step(&x)?;
            if x == target {
                return Ok(TheoremStep { image: q, steps: k, start_index: start.k, landing_index: target.k });
            }
        }
        Err(Error::BudgetExceeded { budget: 3 * n })
    }

    /// `ψ̂(p) = ψ^k(p)` for the least `k` with `ψ^k(p)` in a different tile.
    pub fn exit_map(&self, p: &Point<F>, budget: usize) -> Result<(Point<F>, usize)> {
        let poly = self.polygon();
        let (_, label) = poly.psi(p)?;
        let mut q = p.clone();
        for k in 1..=budget {
            q = &q + &label.translation(poly);
            let (_, l) = poly.psi(&q).map_err(|_| Error::UndefinedOnWall { stage: k })?;
            if l != label {
                return Ok((q, k));
            }
        }
        Err(Error::BudgetExceeded { budget })
    }

    /// First return of `ψ` to the interior of `Σ_1`.
    pub fn first_return_psi(&self, p: &Point<F>, budget: usize) -> Result<(Point<F>, usize)> {
        let sigma = self.system.pair(0);
        let mut q = p.clone();
        for k in 1..=budget {
            q = self.polygon().psi(&q)?.0;
            if sigma.locate(&q) == Location::Interior {
                return Ok((q, k));
            }
        }
        Err(Error::BudgetExceeded { budget })
    }

    /// Radius beyond which far-field statements are tested: the larger of
    /// `8 · (diameter + max |V_j|) · n` and twice the core radius, with L∞
    /// norms.
    pub fn far_radius(&self) -> F {
        let mut widest = F::zero();
        for pair in self.system.pairs() {
            for c in [pair.vector.x.abs(), pair.vector.y.abs()] {
                if c > widest {
                    widest = c;
                }
            }
        }
        let r = (self.polygon().diameter_bound() + widest) * F::from_int(8 * self.n() as i64);
        r.max(self.core_radius().twice())
    }

    /// L∞ radius of the compact core: every bounded tile and every
    /// parallelogram `Σ_j ∩ Σ_{j+1}`.
    pub fn core_radius(&self) -> F {
        let mut r = self.polygon().coordinate_bound();
        let mut bump = |p: &Point<F>| {
            for c in [p.x.abs(), p.y.abs()] {
                if c > r {
                    r = c;
                }
            }
        };
        for t in self.forward.tiles().iter().filter(|t| t.bounded) {
            t.region.vertices().unwrap_or(&[]).iter().for_each(&mut bump);
        }
        for j in 0..self.n() {
            let par = self.system.sigma_range(j, j + 2);
            par.vertices().unwrap_or(&[]).iter().for_each(&mut bump);
        }
        r
    }
}

pub fn linf<F: Field>(p: &Point<F>) -> F {
    let (x, y) = (p.x.abs(), p.y.abs());
    if x > y {
        x
    } else {
        y
    }
}

/// Which map an orbit iterates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Psi,
    PsiStar,
    Exit,
    StripReturn,
    FirstReturn,
}

impl MapKind {
    pub fn name(self) -> &'static str {
        match self {
            MapKind::Psi => "psi",
            MapKind::PsiStar => "psistar",
            MapKind::Exit => "exit",
            MapKind::StripReturn => "return",
            MapKind::FirstReturn => "first_return",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitEvent {
    Start,
    Translated,
    IndexShifted,
    Returned,
    Undefined,
    BudgetExhausted,
    Escaped,
}

impl OrbitEvent {
    pub fn name(self) -> &'static str {
        match self {
            OrbitEvent::Start => "start",
            OrbitEvent::Translated => "translated",
            OrbitEvent::IndexShifted => "index-shifted",
            OrbitEvent::Returned => "returned",
            OrbitEvent::Undefined => "undefined",
            OrbitEvent::BudgetExhausted => "budget-exhausted",
            OrbitEvent::Escaped => "escaped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry<F: Field> {
    /// Map applications so far; for accelerated maps, underlying steps.
    pub step: usize,
    pub point: Point<F>,
    pub index: Option<usize>,
    pub label: Option<TileLabel>,
    pub event: OrbitEvent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord<F: Field> {
    pub map: MapKind,
    pub entries: Vec<OrbitEntry<F>>,
}

impl<F: Field> OrbitRecord<F> {
    pub fn points(&self) -> Vec<Point<F>> {
        self.entries.iter().map(|e| e.point.clone()).collect()
    }

    pub fn last(&self) -> &OrbitEntry<F> {
        self.entries.last().expect("an orbit record always has its start")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "map": self.map.name(),
            "entries": self.entries.iter().map(|e| json!({
                "step": e.step,
                "point": e.point.to_json(),
                "index": e.index.map(|k| k + 1),
                "label": e.label.map(|l| l.to_json()),
                "event": e.event.name(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl<F: Field> Analysis<F> {
    /// Iterates the selected map from `start` (index 0-based, used by the
    /// indexed maps) until `budget` applications, a wall, or an L∞ radius
    /// beyond `escape`.
    pub fn orbit(&self, start: &IndexedPoint<F>, map: MapKind, budget: usize, escape: Option<&F>) -> OrbitRecord<F> {
        let n = self.n();
        let poly = self.polygon();
        let label_of = |p: &Point<F>| poly.square_map(p).ok().and_then(|s| s.1);
        let mut entries = vec![OrbitEntry {
            step: 0,
            point: start.p.clone(),
            index: Some(start.k % n),
            label: label_of(&start.p),
            event: OrbitEvent::Start,
        }];
        let mut x = IndexedPoint::new(start.p.clone(), start.k % n);
        let mut total = 0usize;
        for _ in 0..budget {
            let result: Result<(IndexedPoint<F>, usize, OrbitEvent)> = match map {
                MapKind::Psi => poly.psi(&x.p).map(|(q, _)| (IndexedPoint::new(q, x.k), 1, OrbitEvent::Translated)),
                MapKind::PsiStar => self.system.pinwheel_step(&x).map(|y| {
                    let ev = if y.k != x.k { OrbitEvent::IndexShifted } else { OrbitEvent::Translated };
                    (y, 1, ev)
                }),
                MapKind::Exit => self.exit_map(&x.p, 1 << 20).map(|(q, k)| (IndexedPoint::new(q, x.k), k, OrbitEvent::Translated)),
                // A start outside its strip first enters the strip system.
                MapKind::StripReturn if self.system.pair(x.k).locate(&x.p) == Location::Outside => self
                    .system
                    .land_in_next_strip(&x, usize::MAX)
                    .map(|(y, k)| (y, k, OrbitEvent::Returned)),
                MapKind::StripReturn => self
                    .system
                    .strip_system_return(&x, usize::MAX)
                    .map(|(y, k)| (y, k, OrbitEvent::Returned)),
                MapKind::FirstReturn => self
                    .first_return_psi(&x.p, 1 << 20)
                    .map(|(q, k)| (IndexedPoint::new(q, x.k), k, OrbitEvent::Returned)),
            };
            match result {
                Ok((y, k, ev)) => {
                    total += k;
                    let escaped = escape.is_some_and(|r| &linf(&y.p) > r);
                    entries.push(OrbitEntry {
                        step: total,
                        point: y.p.clone(),
                        index: Some(y.k),
                        label: if map == MapKind::Psi || map == MapKind::Exit { label_of(&y.p) } else { None },
                        event: if escaped { OrbitEvent::Escaped } else { ev },
                    });
                    x = y;
                    if escaped {
                        return OrbitRecord { map, entries };
                    }
                }
                Err(e) => {
                    let event = if matches!(e, Error::BudgetExceeded { .. }) { OrbitEvent::BudgetExhausted } else { OrbitEvent::Undefined };
                    entries.push(OrbitEntry { step: total, point: x.p.clone(), index: Some(x.k), label: None, event });
                    return OrbitRecord { map, entries };
                }
            }
        }
        OrbitRecord { map, entries }
    }
}
