//! Conversion of surface points into PTZ pan/tilt commands relative to an
//! estimated camera pose.
//!
//! Pan is measured counter-clockwise about `+z` from the camera base's home
//! direction; tilt is the signed elevation above the horizontal plane
//! (negative looks down). The camera base is assumed level.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_deg, Vec3};
use crate::surface::{AircraftHalf, SurfaceGrid};

/// Yaw errors beyond this trigger a warning in [`compute_alpha`].
pub const ALPHA_WARN_DEG: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanTilt {
    pub pan_deg: f64,
    pub tilt_deg: f64,
}

impl PanTilt {
    pub fn new(pan_deg: f64, tilt_deg: f64) -> Self {
        Self { pan_deg, tilt_deg }
    }
}

/// One of the four aircraft quadrants.
///
/// Quadrants 3 and 4 lie on the `-x` side and face the fuselage at heading
/// 0 deg; quadrants 1 and 2 mirror them on the `+x` side at heading 180 deg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Quadrant(u8);

impl Quadrant {
    pub fn new(q: u8) -> Result<Self> {
        if (1..=4).contains(&q) {
            Ok(Self(q))
        } else {
            Err(Error::InvalidArgument(format!("quadrant must be 1..=4, got {q}")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Initialisation pan toward the tail or nose.
    pub fn beta_deg(self) -> f64 {
        match self.0 {
            1 => 10.0,
            2 => -20.0,
            3 => 20.0,
            _ => -10.0,
        }
    }

    /// Scene azimuth of a camera facing the fuselage perpendicularly.
    pub fn perpendicular_heading_deg(self) -> f64 {
        match self.0 {
            1 | 2 => 180.0,
            _ => 0.0,
        }
    }

    pub fn half(self) -> AircraftHalf {
        AircraftHalf::of_quadrant(self.0).expect("validated quadrant")
    }
}

impl TryFrom<u8> for Quadrant {
    type Error = Error;
    fn try_from(q: u8) -> Result<Self> {
        Quadrant::new(q)
    }
}

impl From<Quadrant> for u8 {
    fn from(q: Quadrant) -> u8 {
        q.0
    }
}

/// Camera deployment as estimated at initialisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantSetup {
    pub quadrant: Quadrant,
    /// Yaw of the camera's optical axis at initialisation (scene frame, degrees).
    pub estimated_yaw_deg: f64,
    pub camera_position: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alpha {
    pub alpha_deg: f64,
    pub warning: Option<String>,
}

/// Yaw error of the camera base: `alpha = gamma - beta_q`, with `gamma`
/// measured from the quadrant's perpendicular heading.
pub fn compute_alpha(setup: &QuadrantSetup) -> Alpha {
    let gamma = wrap_deg(setup.estimated_yaw_deg - setup.quadrant.perpendicular_heading_deg());
    let alpha_deg = wrap_deg(gamma - setup.quadrant.beta_deg());
    let warning = (alpha_deg.abs() > ALPHA_WARN_DEG).then(|| {
        format!(
            "base yaw error {alpha_deg:.2} deg exceeds the +-{ALPHA_WARN_DEG} deg deployment tolerance"
        )
    });
    Alpha { alpha_deg, warning }
}

/// Scene azimuth of the camera base's pan-zero direction.
pub fn home_azimuth_deg(setup: &QuadrantSetup) -> f64 {
    wrap_deg(setup.quadrant.perpendicular_heading_deg() + compute_alpha(setup).alpha_deg)
}

/// Pan/tilt that aims the optical axis from `camera_position` at `point`.
///
/// `alpha_deg` is the azimuth of the base's pan-zero direction.
pub fn point_to_pantilt(point: Vec3, camera_position: Vec3, alpha_deg: f64) -> Result<PanTilt> {
    let d = point - camera_position;
    if d == Vec3::ZERO {
        return Err(Error::InvalidArgument(
            "point coincides with the camera position".into(),
        ));
    }
    let horiz = d.x.hypot(d.y);
    Ok(PanTilt {
        pan_deg: wrap_deg(d.y.atan2(d.x).to_degrees() - alpha_deg),
        tilt_deg: d.z.atan2(horiz).to_degrees(),
    })
}

/// Unit optical-axis direction for `pt` on a base whose pan-zero azimuth is
/// `home_azimuth_deg`.
pub fn pantilt_direction(pt: PanTilt, home_azimuth_deg: f64) -> Vec3 {
    let a = (pt.pan_deg + home_azimuth_deg).to_radians();
    let t = pt.tilt_deg.to_radians();
    Vec3::new(t.cos() * a.cos(), t.cos() * a.sin(), t.sin())
}

/// Pan/tilt array index-aligned with a [`SurfaceGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PanTiltGrid {
    rows: usize,
    cols: usize,
    cells: Vec<Option<PanTilt>>,
}

impl PanTiltGrid {
    pub fn new(rows: usize, cols: usize, cells: Vec<Option<PanTilt>>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} cells for a {rows}x{cols} pan-tilt grid",
                cells.len()
            )));
        }
        Ok(Self { rows, cols, cells })
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Option<PanTilt>>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged pan-tilt rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<PanTilt> {
        if i < self.rows && j < self.cols {
            self.cells[i * self.cols + j]
        } else {
            None
        }
    }

    pub fn present(&self) -> impl Iterator<Item = (usize, usize, PanTilt)> + '_ {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(k, c)| c.map(|p| (k / cols, k % cols, p)))
    }

    pub fn present_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Same lattice with pan and tilt exchanged in every cell.
    pub fn swapped(&self) -> PanTiltGrid {
        PanTiltGrid {
            rows: self.rows,
            cols: self.cols,
            cells: self
                .cells
                .iter()
                .map(|c| c.map(|p| PanTilt::new(p.tilt_deg, p.pan_deg)))
                .collect(),
        }
    }

    /// CSV `i,j,pan_deg,tilt_deg,valid`, row-major, aligned with the grid export.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            i: usize,
            j: usize,
            pan_deg: Option<f64>,
            tilt_deg: Option<f64>,
            valid: u8,
        }
        let mut w = csv::Writer::from_writer(out);
        for (k, c) in self.cells.iter().enumerate() {
            w.serialize(Row {
                i: k / self.cols,
                j: k % self.cols,
                pan_deg: c.map(|p| p.pan_deg),
                tilt_deg: c.map(|p| p.tilt_deg),
                valid: c.is_some() as u8,
            })
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::io("<pan-tilt output>", e))
    }
}

/// Convert every present surface point to pan/tilt for the given setup.
pub fn grid_to_pantilt(grid: &SurfaceGrid, setup: &QuadrantSetup) -> Result<PanTiltGrid> {
    let home = home_azimuth_deg(setup);
    let mut cells = vec![None; grid.rows() * grid.cols()];
    for (i, j, p) in grid.present() {
        cells[i * grid.cols() + j] = Some(point_to_pantilt(p, setup.camera_position, home)?);
    }
    PanTiltGrid::new(grid.rows(), grid.cols(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{lattice, SectionKind};

    fn setup(q: u8, yaw: f64) -> QuadrantSetup {
        QuadrantSetup {
            quadrant: Quadrant::new(q).unwrap(),
            estimated_yaw_deg: yaw,
            camera_position: Vec3::new(-10.0, 10.0, 6.75),
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(compute_alpha(&setup(3, 20.0)).alpha_deg, 0.0);
        assert_eq!(compute_alpha(&setup(3, 25.0)).alpha_deg, 5.0);
        assert_eq!(compute_alpha(&setup(4, -10.0)).alpha_deg, 0.0);
        assert!(compute_alpha(&setup(3, 25.0)).warning.is_none());
        assert!(compute_alpha(&setup(3, 31.0)).warning.is_some());
    }

    #[test]
    fn mirrored_quadrants() {
        // quadrant 2 faces -x and pans 20 deg toward the tail (+y), i.e. clockwise
        assert_eq!(compute_alpha(&setup(2, 160.0)).alpha_deg, 0.0);
        assert!((compute_alpha(&setup(1, -170.0)).alpha_deg).abs() < 1e-12);
        assert!(Quadrant::new(0).is_err());
        assert!(Quadrant::new(5).is_err());
    }

    #[test]
    fn pantilt_examples() {
        let c = Vec3::ZERO;
        let pt = point_to_pantilt(Vec3::new(10.0, 0.0, 0.0), c, 0.0).unwrap();
        assert_eq!((pt.pan_deg, pt.tilt_deg), (0.0, 0.0));
        let pt = point_to_pantilt(Vec3::new(10.0, 10.0, 0.0), c, 5.0).unwrap();
        assert!((pt.pan_deg - 40.0).abs() < 1e-12);
        assert_eq!(pt.tilt_deg, 0.0);
        let pt = point_to_pantilt(Vec3::new(10.0, 0.0, -10.0), c, 0.0).unwrap();
        assert!((pt.tilt_deg + 45.0).abs() < 1e-12);
        assert!(point_to_pantilt(c, c, 0.0).is_err());
    }

    #[test]
    fn single_cell_and_empty_grids() {
        let one = SurfaceGrid::from_fn("f", SectionKind::Fuselage, 0.05, vec![0.0], vec![1.0], |_, _| Some(3.0));
        let u = grid_to_pantilt(&one, &setup(3, 20.0)).unwrap();
        assert_eq!(u.present_count(), 1);
        assert!(u.get(0, 0).is_some());

        let none = SurfaceGrid::from_fn("f", SectionKind::Fuselage, 0.05, lattice(0.0, 1.0, 0.5), lattice(0.0, 1.0, 0.5), |_, _| None);
        let u = grid_to_pantilt(&none, &setup(3, 20.0)).unwrap();
        assert_eq!(u.present_count(), 0);
        assert_eq!((u.rows(), u.cols()), (3, 3));
    }

    #[test]
    fn fuselage_seen_from_above() {
        let (h0, r0) = (2.0, 2.0);
        let g = SurfaceGrid::from_fn(
            "fuselage",
            SectionKind::Fuselage,
            0.05,
            lattice(-2.0, 0.4, 0.05),
            lattice(0.0, 20.0, 0.05),
            |x, _| Some(h0 + (r0 * r0 - x * x).max(0.0).sqrt()),
        );
        let u = grid_to_pantilt(&g, &setup(3, 20.0)).unwrap();
        assert_eq!(u.present_count(), g.present_count());
        assert!(u.present().all(|(_, _, p)| p.tilt_deg < 0.0));
        // straight ahead at mid-height the camera looks down by roughly 18 deg
        let (_, _, p) = u
            .present()
            .min_by(|a, b| a.2.pan_deg.abs().total_cmp(&b.2.pan_deg.abs()))
            .unwrap();
        assert!(p.tilt_deg < -10.0 && p.tilt_deg > -35.0);
    }

    #[test]
    fn direction_round_trip() {
        let cam = Vec3::new(-9.0, 4.0, 7.0);
        let p = Vec3::new(-1.2, 8.3, 3.1);
        let pt = point_to_pantilt(p, cam, 7.5).unwrap();
        let d = pantilt_direction(pt, 7.5);
        let t = (p - cam).dot(d);
        assert!((cam + d * t).distance(p) < 1e-9);
    }

    #[test]
    fn swapped_exchanges_components() {
        let u = PanTiltGrid::from_rows(vec![vec![Some(PanTilt::new(1.0, 2.0)), None]]).unwrap();
        assert_eq!(u.swapped().get(0, 0), Some(PanTilt::new(2.0, 1.0)));
        assert!(PanTiltGrid::from_rows(vec![vec![None], vec![]]).is_err());
    }
}
