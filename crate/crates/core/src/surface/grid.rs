use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, FloatTriangulation, HasPosition, Point2, Triangulation};

use super::cloud::PointCloud;
use super::section::{InterpolatedAxis, SectionKind, SectionSpec};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Lattice spacing of interpolated sections, metres.
pub const GRID_RESOLUTION: f64 = 0.05;

/// Per-section lattice of interpolated surface points.
///
/// Cell `(i, j)` sits at row coordinate `row_coords[i]` (x, or z for the
/// tail) and column coordinate `col_coords[j]` (always y). Cells outside the
/// convex hull of the section's samples are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    name: String,
    kind: SectionKind,
    resolution: f64,
    row_coords: Vec<f64>,
    col_coords: Vec<f64>,
    cells: Vec<Option<Vec3>>,
}

impl SurfaceGrid {
    /// Build a grid from explicit cells (row-major).
    pub fn new(
        name: impl Into<String>,
        kind: SectionKind,
        resolution: f64,
        row_coords: Vec<f64>,
        col_coords: Vec<f64>,
        cells: Vec<Option<Vec3>>,
    ) -> Result<Self> {
        if cells.len() != row_coords.len() * col_coords.len() {
            return Err(Error::InvalidArgument(format!(
                "{} cells for a {}x{} grid",
                cells.len(),
                row_coords.len(),
                col_coords.len()
            )));
        }
        let grid = Self {
            name: name.into(),
            kind,
            resolution,
            row_coords,
            col_coords,
            cells,
        };
        let axis = kind.interpolated_axis();
        for (i, j, p) in grid.present() {
            let (r, c, _) = axis.project(p);
            if r != grid.row_coords[i] || c != grid.col_coords[j] {
                return Err(Error::InvalidArgument(format!(
                    "cell ({i}, {j}) = {p:?} is off its row/column coordinate"
                )));
            }
        }
        Ok(grid)
    }

    /// Grid over a regular lattice with the interpolated coordinate given by `f`.
    pub fn from_fn(
        name: impl Into<String>,
        kind: SectionKind,
        resolution: f64,
        row_coords: Vec<f64>,
        col_coords: Vec<f64>,
        f: impl Fn(f64, f64) -> Option<f64>,
    ) -> Self {
        let axis = kind.interpolated_axis();
        let mut cells = Vec::with_capacity(row_coords.len() * col_coords.len());
        for &r in &row_coords {
            for &c in &col_coords {
                cells.push(f(r, c).map(|v| axis.unproject(r, c, v)));
            }
        }
        Self {
            name: name.into(),
            kind,
            resolution,
            row_coords,
            col_coords,
            cells,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SectionKind {
        self.kind
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn rows(&self) -> usize {
        self.row_coords.len()
    }

    pub fn cols(&self) -> usize {
        self.col_coords.len()
    }

    pub fn row_coords(&self) -> &[f64] {
        &self.row_coords
    }

    pub fn col_coords(&self) -> &[f64] {
        &self.col_coords
    }

    pub fn interpolated_axis(&self) -> InterpolatedAxis {
        self.kind.interpolated_axis()
    }

    pub fn cell(&self, i: usize, j: usize) -> Result<Option<Vec3>> {
        if i >= self.rows() || j >= self.cols() {
            return Err(Error::InvalidArgument(format!(
                "cell ({i}, {j}) outside {}x{} grid",
                self.rows(),
                self.cols()
            )));
        }
        Ok(self.cells[i * self.cols() + j])
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> Option<Vec3> {
        self.cells[i * self.cols() + j]
    }

    /// Present cells in row-major order.
    pub fn present(&self) -> impl Iterator<Item = (usize, usize, Vec3)> + '_ {
        let cols = self.cols();
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(k, c)| c.map(|p| (k / cols, k % cols, p)))
    }

    pub fn present_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_grids_csv(out, std::slice::from_ref(self))
    }
}

/// Grid-to-grid lookup of the interpolated coordinate; `None` outside the
/// lattice or where any of the four surrounding cells is absent.
impl SurfaceGrid {
    pub fn bilinear(&self, row: f64, col: f64) -> Option<f64> {
        let fr = locate(&self.row_coords, row)?;
        let fc = locate(&self.col_coords, col)?;
        let axis = self.interpolated_axis();
        let val = |i: usize, j: usize| self.get(i, j).map(|p| axis.project(p).2);
        let (i0, i1, tr) = fr;
        let (j0, j1, tc) = fc;
        let v00 = val(i0, j0)?;
        let v01 = val(i0, j1)?;
        let v10 = val(i1, j0)?;
        let v11 = val(i1, j1)?;
        Some(
            v00 * (1.0 - tr) * (1.0 - tc)
                + v01 * (1.0 - tr) * tc
                + v10 * tr * (1.0 - tc)
                + v11 * tr * tc,
        )
    }
}

fn locate(coords: &[f64], v: f64) -> Option<(usize, usize, f64)> {
    let n = coords.len();
    if n == 0 || v < coords[0] || v > coords[n - 1] {
        return None;
    }
    if n == 1 {
        return Some((0, 0, 0.0));
    }
    let k = coords.partition_point(|&c| c <= v).clamp(1, n - 1);
    let (a, b) = (coords[k - 1], coords[k]);
    Some((k - 1, k, (v - a) / (b - a)))
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    at: Point2<f64>,
    value: f64,
}

impl HasPosition for Sample {
    type Scalar = f64;
    fn position(&self) -> Point2<f64> {
        self.at
    }
}

/// Evenly spaced coordinates from `min` with spacing `res`, not exceeding `max`.
pub fn lattice(min: f64, max: f64, res: f64) -> Vec<f64> {
    let n = ((max - min) / res + 1e-9).floor() as usize + 1;
    (0..n).map(|k| (min + k as f64 * res).min(max)).collect()
}

/// Piecewise-linear interpolation of a section onto the 5 cm lattice.
///
/// Samples are projected according to the section kind, sorted
/// lexicographically (duplicates averaged) and Delaunay-triangulated; each
/// lattice node inside the convex hull takes the barycentric blend of its
/// enclosing triangle. The lattice is anchored at the projected bounding
/// rectangle's minimum corner.
pub fn interpolate_section(sub: &PointCloud, spec: &SectionSpec) -> Result<SurfaceGrid> {
    interpolate_with_resolution(sub, spec, GRID_RESOLUTION)
}

pub fn interpolate_with_resolution(
    sub: &PointCloud,
    spec: &SectionSpec,
    resolution: f64,
) -> Result<SurfaceGrid> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad resolution {resolution}")));
    }
    let axis = spec.interpolated_axis();
    let mut proj: Vec<(f64, f64, f64)> = sub.points.iter().map(|p| axis.project(*p)).collect();
    proj.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut samples: Vec<Sample> = Vec::with_capacity(proj.len());
    let mut k = 0;
    while k < proj.len() {
        let (r, c, _) = proj[k];
        let mut end = k;
        let mut sum = 0.0;
        while end < proj.len() && proj[end].0 == r && proj[end].1 == c {
            sum += proj[end].2;
            end += 1;
        }
        samples.push(Sample {
            at: Point2::new(r, c),
            value: sum / (end - k) as f64,
        });
        k = end;
    }
    if samples.len() < 3 {
        return Err(Error::Degenerate(format!(
            "section {:?} has {} distinct projected points, need 3",
            spec.name,
            samples.len()
        )));
    }

    let (mut rmin, mut rmax, mut cmin, mut cmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for s in &samples {
        rmin = rmin.min(s.at.x);
        rmax = rmax.max(s.at.x);
        cmin = cmin.min(s.at.y);
        cmax = cmax.max(s.at.y);
    }

    let tri = DelaunayTriangulation::<Sample>::bulk_load_stable(samples)
        .map_err(|e| Error::Degenerate(format!("triangulation failed: {e:?}")))?;
    if tri.num_inner_faces() == 0 {
        return Err(Error::Degenerate(format!(
            "section {:?} projects onto a line",
            spec.name
        )));
    }

    let row_coords = lattice(rmin, rmax, resolution);
    let col_coords = lattice(cmin, cmax, resolution);
    let interp = tri.barycentric();
    let mut cells = Vec::with_capacity(row_coords.len() * col_coords.len());
    for &r in &row_coords {
        for &c in &col_coords {
            let v = interp.interpolate(|h| h.data().value, Point2::new(r, c));
            cells.push(v.map(|v| axis.unproject(r, c, v)));
        }
    }
    Ok(SurfaceGrid {
        name: spec.name.clone(),
        kind: spec.kind,
        resolution,
        row_coords,
        col_coords,
        cells,
    })
}

pub fn grid_cell(grid: &SurfaceGrid, i: usize, j: usize) -> Result<Option<Vec3>> {
    grid.cell(i, j)
}

#[derive(Debug, Serialize, Deserialize)]
struct GridRow {
    section: String,
    kind: String,
    i: usize,
    j: usize,
    x: Option<f64>,
    y: Option<f64>,
    z: Option<f64>,
    valid: u8,
}

/// CSV with `section,kind,i,j,x,y,z,valid`. Absent cells keep their lattice
/// coordinates and leave the interpolated coordinate empty.
pub fn write_grids_csv<W: Write>(out: W, grids: &[SurfaceGrid]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for g in grids {
        let axis = g.interpolated_axis();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let (r, c) = (g.row_coords[i], g.col_coords[j]);
                let (x, y, z) = match (g.get(i, j), axis) {
                    (Some(p), _) => (Some(p.x), Some(p.y), Some(p.z)),
                    (None, InterpolatedAxis::ZOverXy) => (Some(r), Some(c), None),
                    (None, InterpolatedAxis::XOverYz) => (None, Some(c), Some(r)),
                };
                w.serialize(GridRow {
                    section: g.name.clone(),
                    kind: g.kind.as_str().into(),
                    i,
                    j,
                    x,
                    y,
                    z,
                    valid: g.get(i, j).is_some() as u8,
                })
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("<grid output>", e))
}

/// Read grids written by [`write_grids_csv`], in order of first appearance.
pub fn read_grids_csv<R: Read>(input: R, origin: &str) -> Result<Vec<SurfaceGrid>> {
    struct Partial {
        kind: SectionKind,
        cells: BTreeMap<(usize, usize), (f64, f64, Option<Vec3>)>,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut order: Vec<String> = Vec::new();
    let mut parts: BTreeMap<String, Partial> = BTreeMap::new();
    for rec in rdr.deserialize::<GridRow>() {
        let row = rec.map_err(|e| {
            Error::parse(origin, e.position().map(|p| p.line()).unwrap_or(0), e.to_string())
        })?;
        let kind = SectionKind::parse(&row.kind).ok_or_else(|| {
            Error::parse(origin, 0, format!("unknown section kind {:?}", row.kind))
        })?;
        let axis = kind.interpolated_axis();
        let part = parts.entry(row.section.clone()).or_insert_with(|| {
            order.push(row.section.clone());
            Partial {
                kind,
                cells: BTreeMap::new(),
            }
        });
        let missing = || Error::parse(origin, 0, format!("cell ({}, {}) lacks coordinates", row.i, row.j));
        let (r, c) = match axis {
            InterpolatedAxis::ZOverXy => (row.x.ok_or_else(missing)?, row.y.ok_or_else(missing)?),
            InterpolatedAxis::XOverYz => (row.z.ok_or_else(missing)?, row.y.ok_or_else(missing)?),
        };
        let p = if row.valid != 0 {
            match (row.x, row.y, row.z) {
                (Some(x), Some(y), Some(z)) => Some(Vec3::new(x, y, z)),
                _ => return Err(missing()),
            }
        } else {
            None
        };
        part.cells.insert((row.i, row.j), (r, c, p));
    }
    let mut out = Vec::with_capacity(order.len());
    for name in order {
        let part = &parts[&name];
        let rows = part.cells.keys().map(|k| k.0).max().map_or(0, |m| m + 1);
        let cols = part.cells.keys().map(|k| k.1).max().map_or(0, |m| m + 1);
        if part.cells.len() != rows * cols {
            return Err(Error::parse(origin, 0, format!("section {name:?} is not a full lattice")));
        }
        let row_coords: Vec<f64> = (0..rows).map(|i| part.cells[&(i, 0)].0).collect();
        let col_coords: Vec<f64> = (0..cols).map(|j| part.cells[&(0, j)].1).collect();
        let cells = part.cells.values().map(|v| v.2).collect();
        let resolution = if rows > 1 {
            row_coords[1] - row_coords[0]
        } else if cols > 1 {
            col_coords[1] - col_coords[0]
        } else {
            GRID_RESOLUTION
        };
        out.push(SurfaceGrid::new(
            name.clone(),
            part.kind,
            resolution,
            row_coords,
            col_coords,
            cells,
        )?);
    }
    Ok(out)
}
