//! Overlap-aware scan-point selection over a pan/tilt array and labelling of
//! each selected shot with its surface coordinate.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::pantilt::{PanTilt, PanTiltGrid, Quadrant};
use crate::pose_eval::median;
use crate::surface::{AircraftHalf, SectionKind, SurfaceGrid};

/// Slack on the `>=` spacing test so that the initial offset of exactly
/// `lambda * FOV` always admits the first row and column.
const SPACING_EPS_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub hfov_deg: f64,
    pub vfov_deg: f64,
    pub mu: f64,
}

impl Default for ScanConfig {
    /// 13x zoom on the reference camera with 15 % overlap.
    fn default() -> Self {
        Self {
            hfov_deg: 6.15,
            vfov_deg: 3.46,
            mu: 0.15,
        }
    }
}

impl ScanConfig {
    pub fn new(hfov_deg: f64, vfov_deg: f64, mu: f64) -> Result<Self> {
        let cfg = Self {
            hfov_deg,
            vfov_deg,
            mu,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hfov_deg > 0.0 && self.hfov_deg.is_finite()) {
            return Err(Error::InvalidArgument(format!("hfov must be positive, got {}", self.hfov_deg)));
        }
        if !(self.vfov_deg > 0.0 && self.vfov_deg.is_finite()) {
            return Err(Error::InvalidArgument(format!("vfov must be positive, got {}", self.vfov_deg)));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return Err(Error::InvalidArgument(format!("mu must lie in [0, 1), got {}", self.mu)));
        }
        Ok(())
    }

    /// Selection spacing in FOV units.
    pub fn lambda(&self) -> f64 {
        1.0 - self.mu
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub section: String,
    pub i: usize,
    pub j: usize,
    pub pan_deg: f64,
    pub tilt_deg: f64,
    /// Surface coordinate expected at the image centre.
    pub label: Vec3,
}

impl ScanPoint {
    pub fn pantilt(&self) -> PanTilt {
        PanTilt::new(self.pan_deg, self.tilt_deg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionPlan {
    pub name: String,
    pub kind: SectionKind,
    pub points: Vec<ScanPoint>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanPlan {
    pub sections: Vec<SectionPlan>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ScanPlan {
    pub fn len(&self) -> usize {
        self.sections.iter().map(|s| s.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All shots in execution order.
    pub fn points(&self) -> impl Iterator<Item = &ScanPoint> {
        self.sections.iter().flat_map(|s| s.points.iter())
    }

    pub fn section(&self, name: &str) -> Option<&SectionPlan> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// CSV `seq,section,i,j,pan_deg,tilt_deg,x,y,z` with a plan-wide sequence number.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            seq: usize,
            section: &'a str,
            i: usize,
            j: usize,
            pan_deg: f64,
            tilt_deg: f64,
            x: f64,
            y: f64,
            z: f64,
        }
        let mut w = csv::Writer::from_writer(out);
        for (seq, p) in self.points().enumerate() {
            w.serialize(Row {
                seq,
                section: &p.section,
                i: p.i,
                j: p.j,
                pan_deg: p.pan_deg,
                tilt_deg: p.tilt_deg,
                x: p.label.x,
                y: p.label.y,
                z: p.label.z,
            })
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::io("<plan output>", e))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Inconsistent(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("<plan>", e.line() as u64, e.to_string()))
    }
}

/// Indices selected by the row/column spacing rule.
///
/// With `transposed` the roles of pan and tilt (and of HFOV and VFOV) are
/// exchanged, which is how wing-like sections are planned. Rows and columns
/// that hold no present cell are skipped; the first present row and column
/// stand in wherever the rule refers to the first one.
pub fn select_cells(u: &PanTiltGrid, cfg: &ScanConfig, transposed: bool) -> Vec<(usize, usize)> {
    let lambda = cfg.lambda();
    let (row_fov, col_fov) = if transposed {
        (cfg.hfov_deg, cfg.vfov_deg)
    } else {
        (cfg.vfov_deg, cfg.hfov_deg)
    };
    let row_value = |p: PanTilt| if transposed { p.pan_deg } else { p.tilt_deg };
    let col_value = |p: PanTilt| if transposed { p.tilt_deg } else { p.pan_deg };

    let rows: Vec<Vec<(usize, PanTilt)>> = (0..u.rows())
        .map(|i| (0..u.cols()).filter_map(|j| u.get(i, j).map(|p| (j, p))).collect())
        .collect();
    let present_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let Some(&last_row) = present_rows.last() else {
        return Vec::new();
    };
    let row_median = |i: usize| {
        let v: Vec<f64> = rows[i].iter().map(|&(_, p)| row_value(p)).collect();
        median(&v).expect("row has present cells")
    };

    let mut selected = Vec::new();
    let mut m_last = row_median(present_rows[0]) + lambda * row_fov;
    for &i in &present_rows {
        let m_next = row_median(i);
        let gap = (m_last - m_next).abs();
        let take_row = gap >= lambda * row_fov - SPACING_EPS_DEG || (i == last_row && gap > row_fov / 2.0);
        if !take_row {
            continue;
        }
        m_last = m_next;
        let cells = &rows[i];
        let last_col = cells.last().expect("non-empty row").0;
        let mut n_last = col_value(cells[0].1) + lambda * col_fov;
        for &(j, p) in cells {
            let n_next = col_value(p);
            let gap = (n_last - n_next).abs();
            if gap >= lambda * col_fov - SPACING_EPS_DEG || (j == last_col && gap > col_fov / 2.0) {
                selected.push((i, j));
                n_last = n_next;
            }
        }
    }
    selected
}

/// Select and label the shots for one section. An all-absent array yields
/// an empty list.
pub fn plan_section(u: &PanTiltGrid, grid: &SurfaceGrid, cfg: &ScanConfig) -> Result<Vec<ScanPoint>> {
    cfg.validate()?;
    if (u.rows(), u.cols()) != (grid.rows(), grid.cols()) {
        return Err(Error::InvalidArgument(format!(
            "pan-tilt array is {}x{} but section '{}' is {}x{}",
            u.rows(),
            u.cols(),
            grid.name(),
            grid.rows(),
            grid.cols()
        )));
    }
    let points = select_cells(u, cfg, grid.kind().is_transposed())
        .into_iter()
        .map(|(i, j)| {
            let pt = u.get(i, j).expect("selected cells are present");
            ScanPoint {
                section: grid.name().to_string(),
                i,
                j,
                pan_deg: pt.pan_deg,
                tilt_deg: pt.tilt_deg,
                label: Vec3::ZERO,
            }
        })
        .collect();
    attach_labels(points, grid)
}

/// Set every point's label to the surface cell it was planned from.
pub fn attach_labels(mut points: Vec<ScanPoint>, grid: &SurfaceGrid) -> Result<Vec<ScanPoint>> {
    for p in &mut points {
        p.label = grid.cell(p.i, p.j)?.ok_or_else(|| {
            Error::Inconsistent(format!(
                "scan point ({}, {}) refers to an absent cell of section '{}'",
                p.i,
                p.j,
                grid.name()
            ))
        })?;
    }
    Ok(points)
}

/// A section ready for planning.
#[derive(Debug, Clone, Copy)]
pub struct SectionInput<'a> {
    pub grid: &'a SurfaceGrid,
    pub pantilt: &'a PanTiltGrid,
    pub half: AircraftHalf,
}

/// Plan every section and concatenate in the fixed order fuselage, tail,
/// stabiliser, wing (input order breaks ties). Sections belonging to the
/// other half of the aircraft are still planned but raise a warning.
pub fn plan_full(sections: &[SectionInput<'_>], cfg: &ScanConfig, quadrant: Quadrant) -> Result<ScanPlan> {
    let mut order: Vec<&SectionInput<'_>> = sections.iter().collect();
    order.sort_by_key(|s| s.grid.kind());
    let mut plan = ScanPlan::default();
    for s in order {
        if s.half != quadrant.half() {
            plan.warnings.push(format!(
                "section '{}' belongs to the {:?} half but quadrant {} scans the {:?} half",
                s.grid.name(),
                s.half,
                quadrant.number(),
                quadrant.half()
            ));
        }
        plan.sections.push(SectionPlan {
            name: s.grid.name().to_string(),
            kind: s.grid.kind(),
            points: plan_section(s.pantilt, s.grid, cfg)?,
        });
    }
    Ok(plan)
}
