//! Exact planar convex geometry: Minkowski sums, linear images, areas, and
//! the check `area(K + MK) ≥ H(M)·area(K)`.

mod bound;
mod polygon;

pub use bound::{equality_body, sqrt_approx, verify_bound, BoundReport};
pub use polygon::{apply_linear, minkowski_sum, ConvexPolygon, Point2};
