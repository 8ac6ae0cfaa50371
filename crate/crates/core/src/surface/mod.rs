//! Aircraft point-cloud ingestion, sectioning and interpolation onto the
//! per-section 5 cm surface lattice.

pub mod cloud;
pub mod grid;
pub mod section;

pub use cloud::{load_point_cloud, CloudFormat, PointCloud};
pub use grid::{grid_cell, interpolate_section, lattice, SurfaceGrid, GRID_RESOLUTION};
pub use section::{section_points, Aabb, AircraftHalf, InterpolatedAxis, SectionKind, SectionSpec};
