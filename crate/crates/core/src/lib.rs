//! Exact outer billiards and the pinwheel map for nice polygons.
//!
//! A nice polygon is a convex polygon with no two parallel sides. The crate
//! computes the square of the outer billiards map as a piecewise
//! translation, its forward partition into convex tiles, the admissible
//! paths of spokes that label those tiles, and the pinwheel map built from
//! strip maps. Everything runs in exact arithmetic over [`Rational`] or a
//! real quadratic field ([`QuadExt`]).
//!
//! ```
//! use pinwheel::{NicePolygon, Point, Rational};
//!
//! let tri = NicePolygon::<Rational>::from_ints(&[(0, 0), (1, 3), (4, 0)]).unwrap();
//! let (q, label) = tri.square_map(&Point::from_ints(8, -2)).unwrap();
//! assert_eq!(q, Point::from_ints(10, 4));
//! assert_eq!(label.map(|l| (l.v, l.w)), Some((0, 1)));
//! ```

pub mod billiards;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod geom;
pub mod strips;
pub mod paths;
pub mod polygon;
pub mod quad;
pub mod quasi;
pub mod random;
pub mod region;
pub mod render;
pub mod verify;

pub use billiards::{Partition, Tile, TileLabel};
pub use dynamics::{Analysis, IndexedPoint, MapKind, OrbitEntry, OrbitEvent, OrbitRecord, TheoremStep};
pub use error::{Error, Result};
pub use field::{Field, Rational};
pub use geom::{HalfPlane, Line, Point, Sense, Vector2};
pub use strips::{PinwheelPair, PinwheelSystem, Spoke};
pub use paths::{AdmissiblePath, PathSet};
pub use polygon::NicePolygon;
pub use quad::QuadExt;
pub use region::{ConvexRegion, Location};
