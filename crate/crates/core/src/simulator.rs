//! Virtual PTZ execution of a scan plan against ground truth.
//!
//! A plan is computed under an *estimated* camera pose. The simulator
//! commands the same pan/tilt values on a camera standing at the *true* pose,
//! casts each optical axis onto the true surface and compares the hit with
//! the plan's label. Footprints use the pan/tilt array recomputed from the
//! true pose, so coverage and overlap describe what was really imaged.

use std::collections::HashSet;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CameraPose, CylinderModel, Ray, Vec3};
use crate::pantilt::{grid_to_pantilt, home_azimuth_deg, pantilt_direction, PanTilt, PanTiltGrid, Quadrant, QuadrantSetup};
use crate::planner::{plan_full, ScanConfig, ScanPlan, SectionInput};
use crate::pose_eval::{median, noisy_oracle_with, rmse};
use crate::surface::{AircraftHalf, SectionKind, SurfaceGrid};

/// Zoom level to field-of-view lookup, linear between entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoomTable {
    /// `(zoom, hfov_deg, vfov_deg)` sorted by zoom.
    entries: Vec<(f64, f64, f64)>,
}

impl ZoomTable {
    pub fn new(mut entries: Vec<(f64, f64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("zoom table is empty".into()));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 || w[1].1 > w[0].1 || w[1].2 > w[0].2 {
                return Err(Error::InvalidArgument(
                    "zoom levels must be distinct with FOVs non-increasing in zoom".into(),
                ));
            }
        }
        if entries.iter().any(|e| !(e.0 > 0.0 && e.1 > 0.0 && e.2 > 0.0)) {
            return Err(Error::InvalidArgument("zoom and FOVs must be positive".into()));
        }
        Ok(Self { entries })
    }

    /// A single zoom level with the given FOVs.
    pub fn fixed(hfov_deg: f64, vfov_deg: f64) -> Result<Self> {
        Self::new(vec![(1.0, hfov_deg, vfov_deg)])
    }

    /// `(hfov, vfov)` at `zoom`, clamped to the table's range.
    pub fn fov(&self, zoom: f64) -> (f64, f64) {
        let e = &self.entries;
        if zoom <= e[0].0 {
            return (e[0].1, e[0].2);
        }
        let last = e[e.len() - 1];
        if zoom >= last.0 {
            return (last.1, last.2);
        }
        let k = e.partition_point(|x| x.0 <= zoom);
        let (a, b) = (e[k - 1], e[k]);
        let t = (zoom - a.0) / (b.0 - a.0);
        (a.1 + t * (b.1 - a.1), a.2 + t * (b.2 - a.2))
    }
}

impl Default for ZoomTable {
    /// Reference camera: 72.5 deg HFOV (16:9) at 1x, 6.15/3.46 deg at 13x.
    fn default() -> Self {
        Self::new(vec![(1.0, 72.5, 44.83), (13.0, 6.15, 3.46)]).expect("valid table")
    }
}

/// A PTZ head standing at a fixed pose with a levelled base.
#[derive(Debug, Clone)]
pub struct VirtualPtz {
    position: Vec3,
    home_azimuth_deg: f64,
    zoom_table: ZoomTable,
    zoom: f64,
    current: PanTilt,
}

impl VirtualPtz {
    pub fn new(position: Vec3, home_azimuth_deg: f64, zoom_table: ZoomTable) -> Self {
        Self {
            position,
            home_azimuth_deg,
            zoom_table,
            zoom: 1.0,
            current: PanTilt::new(0.0, 0.0),
        }
    }

    /// Camera whose initialisation pose in `quadrant` was `pose`.
    pub fn at_pose(pose: &CameraPose, quadrant: Quadrant, zoom_table: ZoomTable) -> Self {
        let setup = QuadrantSetup {
            quadrant,
            estimated_yaw_deg: pose.yaw_deg(),
            camera_position: pose.position,
        };
        Self::new(pose.position, home_azimuth_deg(&setup), zoom_table)
    }

    pub fn command(&mut self, pt: PanTilt) {
        self.current = pt;
    }

    pub fn set_zoom(&mut self, zoom: f64) {
        self.zoom = zoom;
    }

    pub fn fov(&self) -> (f64, f64) {
        self.zoom_table.fov(self.zoom)
    }

    pub fn current(&self) -> PanTilt {
        self.current
    }

    pub fn home_azimuth_deg(&self) -> f64 {
        self.home_azimuth_deg
    }

    pub fn optical_ray(&self) -> Ray {
        Ray::new(self.position, pantilt_direction(self.current, self.home_azimuth_deg)).expect("unit direction")
    }
}

/// Cells of `u_true` whose pan and tilt both lie within half a FOV of the
/// shot (closed bounds).
pub fn footprint(u_true: &PanTiltGrid, shot: PanTilt, cfg: &ScanConfig) -> Vec<(usize, usize)> {
    u_true
        .present()
        .filter(|&(_, _, p)| in_view(p, shot, cfg.hfov_deg, cfg.vfov_deg))
        .map(|(i, j, _)| (i, j))
        .collect()
}

fn in_view(p: PanTilt, shot: PanTilt, hfov: f64, vfov: f64) -> bool {
    crate::geometry::wrap_deg(p.pan_deg - shot.pan_deg).abs() <= hfov / 2.0
        && (p.tilt_deg - shot.tilt_deg).abs() <= vfov / 2.0
}

/// Present cells sorted by pan for fast footprint queries.
struct FootprintIndex {
    cells: Vec<(f64, f64, usize)>,
}

impl FootprintIndex {
    fn new(u: &PanTiltGrid) -> Self {
        let mut cells: Vec<(f64, f64, usize)> = u
            .present()
            .map(|(i, j, p)| (p.pan_deg, p.tilt_deg, i * u.cols() + j))
            .collect();
        cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        Self { cells }
    }

    fn query(&self, shot: PanTilt, hfov: f64, vfov: f64) -> Vec<usize> {
        let half = hfov / 2.0;
        let mut out = Vec::new();
        let mut band = |lo: f64, hi: f64| {
            let start = self.cells.partition_point(|c| c.0 < lo);
            for &(pan, tilt, k) in &self.cells[start..] {
                if pan > hi {
                    break;
                }
                if in_view(PanTilt::new(pan, tilt), shot, hfov, vfov) {
                    out.push(k);
                }
            }
        };
        let (lo, hi) = (shot.pan_deg - half, shot.pan_deg + half);
        if half >= 180.0 {
            band(-180.0, 180.0);
        } else {
            band(lo.max(-180.0), hi.min(180.0));
            if lo < -180.0 {
                band(lo + 360.0, 180.0);
            }
            if hi > 180.0 {
                band(-180.0, hi - 360.0);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Surface a shot is cast onto.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Cylinder(CylinderModel),
    Grid(&'a SurfaceGrid),
}

/// First surface point hit by the optical axis of a camera at `position`
/// whose base has pan-zero azimuth `home_azimuth_deg`.
pub fn cast_to_surface(position: Vec3, shot: PanTilt, home_azimuth_deg: f64, target: Target<'_>) -> Result<Vec3> {
    let ray = Ray::new(position, pantilt_direction(shot, home_azimuth_deg))?;
    match target {
        Target::Cylinder(cyl) => cyl.intersect(&ray),
        Target::Grid(grid) => cast_to_grid(&ray, grid),
    }
}

/// March at half the grid spacing until the signed offset from the
/// interpolated surface changes sign, then bisect.
fn cast_to_grid(ray: &Ray, grid: &SurfaceGrid) -> Result<Vec3> {
    let (lo, hi) = grid_bounds(grid).ok_or(Error::NoIntersection)?;
    let (t0, t1) = slab(ray, lo, hi).ok_or(Error::NoIntersection)?;
    let axis = grid.interpolated_axis();
    let offset = |t: f64| {
        let p = ray.at(t);
        let (r, c, v) = axis.project(p);
        grid.bilinear(r, c).map(|s| v - s)
    };
    let step = grid.resolution() / 2.0;
    let n = ((t1 - t0) / step).ceil() as usize + 1;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=n {
        let t = (t0 + k as f64 * step).min(t1);
        let cur = offset(t).map(|f| (t, f));
        if let (Some((ta, fa)), Some((tb, fb))) = (prev, cur) {
            if fa == 0.0 {
                return Ok(ray.at(ta));
            }
            if fa.signum() != fb.signum() {
                return Ok(ray.at(bisect(&offset, ta, fa, tb)));
            }
        }
        prev = cur;
    }
    Err(Error::NoIntersection)
}

fn bisect(f: &impl Fn(f64) -> Option<f64>, mut a: f64, fa: f64, mut b: f64) -> f64 {
    let sa = fa.signum();
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        match f(m) {
            Some(0.0) => return m,
            Some(v) if v.signum() == sa => a = m,
            _ => b = m,
        }
    }
    0.5 * (a + b)
}

fn grid_bounds(grid: &SurfaceGrid) -> Option<(Vec3, Vec3)> {
    let mut it = grid.present().map(|(_, _, p)| p);
    let first = it.next()?;
    let (mut lo, mut hi) = (first, first);
    for p in it {
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    let pad = Vec3::new(1.0, 1.0, 1.0) * grid.resolution();
    Some((lo - pad, hi + pad))
}

/// Parameter interval where the ray is inside the box, clipped to `t >= 0`.
fn slab(ray: &Ray, lo: Vec3, hi: Vec3) -> Option<(f64, f64)> {
    let (o, d) = (ray.origin().to_array(), ray.direction().to_array());
    let (lo, hi) = (lo.to_array(), hi.to_array());
    let (mut t0, mut t1) = (0.0f64, f64::INFINITY);
    for k in 0..3 {
        if d[k] == 0.0 {
            if o[k] < lo[k] || o[k] > hi[k] {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo[k] - o[k]) / d[k], (hi[k] - o[k]) / d[k]);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t0 <= t1).then_some((t0, t1))
}

/// A section as the simulator sees it.
#[derive(Debug, Clone)]
pub struct SceneSection {
    pub grid: SurfaceGrid,
    pub half: AircraftHalf,
    /// Exact surface for ground truth; the grid itself is used when absent.
    pub analytic: Option<CylinderModel>,
}

impl SceneSection {
    pub fn target(&self) -> Target<'_> {
        match self.analytic {
            Some(c) => Target::Cylinder(c),
            None => Target::Grid(&self.grid),
        }
    }
}

/// Everything needed to plan and simulate a scan from one quadrant.
#[derive(Debug, Clone)]
pub struct ScanScene {
    pub quadrant: Quadrant,
    pub sections: Vec<SceneSection>,
    pub cfg: ScanConfig,
}

impl ScanScene {
    fn setup(&self, pose: &CameraPose) -> QuadrantSetup {
        QuadrantSetup {
            quadrant: self.quadrant,
            estimated_yaw_deg: pose.yaw_deg(),
            camera_position: pose.position,
        }
    }

    pub fn pantilt_arrays(&self, pose: &CameraPose) -> Result<Vec<PanTiltGrid>> {
        let setup = self.setup(pose);
        self.sections.iter().map(|s| grid_to_pantilt(&s.grid, &setup)).collect()
    }

    /// Scan plan computed under `estimated` pose.
    pub fn plan(&self, estimated: &CameraPose) -> Result<ScanPlan> {
        let arrays = self.pantilt_arrays(estimated)?;
        let inputs: Vec<SectionInput<'_>> = self
            .sections
            .iter()
            .zip(&arrays)
            .map(|(s, u)| SectionInput {
                grid: &s.grid,
                pantilt: u,
                half: s.half,
            })
            .collect();
        plan_full(&inputs, &self.cfg, self.quadrant)
    }

    /// Execute `plan` on a camera standing at `true_pose`.
    pub fn execute(&self, plan: &ScanPlan, true_pose: &CameraPose, estimated: &CameraPose) -> Result<SimulationReport> {
        execute_plan(plan, true_pose, estimated, self.quadrant, &self.sections, &self.cfg)
    }

    /// Plan under `estimated`, execute at `true_pose`.
    pub fn run(&self, true_pose: &CameraPose, estimated: &CameraPose) -> Result<SimulationReport> {
        let plan = self.plan(estimated)?;
        self.execute(&plan, true_pose, estimated)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub rmse: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        Some(Self {
            n,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            median: median(values)?,
            mean: values.iter().sum::<f64>() / n as f64,
            rmse: rmse(values)?,
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageRecord {
    pub seq: usize,
    pub section: String,
    pub pan_deg: f64,
    pub tilt_deg: f64,
    pub label: Vec3,
    /// Where the optical axis really met the surface; `None` for a miss.
    pub true_hit: Option<Vec3>,
    pub error_m: Option<f64>,
    pub footprint_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionReport {
    pub name: String,
    pub kind: SectionKind,
    pub image_count: usize,
    pub present_cells: usize,
    pub covered_cells: usize,
    pub coverage: f64,
    pub missed_shots: usize,
    /// Shared-footprint ratio `|A & B| / min(|A|, |B|)` of consecutive shots.
    pub overlap: Option<Summary>,
    pub labelling_error_m: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub image_count: usize,
    pub missed_shots: usize,
    pub coverage: f64,
    pub position_error_m: f64,
    pub orientation_error_deg: f64,
    pub labelling_error_m: Option<Summary>,
    pub sections: Vec<SectionReport>,
    #[serde(skip)]
    pub images: Vec<ImageRecord>,
}

impl SimulationReport {
    pub fn errors(&self) -> Vec<f64> {
        self.images.iter().filter_map(|r| r.error_m).collect()
    }

    pub fn section(&self, name: &str) -> Option<&SectionReport> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Inconsistent(e.to_string()))
    }

    /// Per-image CSV `seq,section,pan_deg,tilt_deg,label_*,hit_*,error_m`.
    pub fn write_images_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            seq: usize,
            section: &'a str,
            pan_deg: f64,
            tilt_deg: f64,
            label_x: f64,
            label_y: f64,
            label_z: f64,
            hit_x: Option<f64>,
            hit_y: Option<f64>,
            hit_z: Option<f64>,
            error_m: Option<f64>,
        }
        let mut w = csv::Writer::from_writer(out);
        for r in &self.images {
            w.serialize(Row {
                seq: r.seq,
                section: &r.section,
                pan_deg: r.pan_deg,
                tilt_deg: r.tilt_deg,
                label_x: r.label.x,
                label_y: r.label.y,
                label_z: r.label.z,
                hit_x: r.true_hit.map(|p| p.x),
                hit_y: r.true_hit.map(|p| p.y),
                hit_z: r.true_hit.map(|p| p.z),
                error_m: r.error_m,
            })
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::io("<image table>", e))
    }
}

/// Run every shot of `plan` from the true pose.
///
/// Shots whose optical axis misses the surface are counted, not fatal.
pub fn execute_plan(
    plan: &ScanPlan,
    true_pose: &CameraPose,
    estimated_pose: &CameraPose,
    quadrant: Quadrant,
    sections: &[SceneSection],
    cfg: &ScanConfig,
) -> Result<SimulationReport> {
    cfg.validate()?;
    let mut ptz = VirtualPtz::at_pose(true_pose, quadrant, ZoomTable::fixed(cfg.hfov_deg, cfg.vfov_deg)?);
    let true_setup = QuadrantSetup {
        quadrant,
        estimated_yaw_deg: true_pose.yaw_deg(),
        camera_position: true_pose.position,
    };
    let (hfov, vfov) = ptz.fov();

    let mut images = Vec::with_capacity(plan.len());
    let mut section_reports = Vec::with_capacity(plan.sections.len());
    let mut total_present = 0usize;
    let mut total_covered = 0usize;
    let mut seq = 0usize;

    for sp in &plan.sections {
        let section = sections
            .iter()
            .find(|s| s.grid.name() == sp.name)
            .ok_or_else(|| Error::InvalidArgument(format!("plan refers to unknown section '{}'", sp.name)))?;
        let u_true = grid_to_pantilt(&section.grid, &true_setup)?;
        let index = FootprintIndex::new(&u_true);

        let mut covered: HashSet<usize> = HashSet::new();
        let mut prev: Option<HashSet<usize>> = None;
        let mut overlaps = Vec::new();
        let mut errors = Vec::new();
        let mut missed = 0usize;

        for p in &sp.points {
            ptz.command(p.pantilt());
            let fp: HashSet<usize> = index.query(ptz.current(), hfov, vfov).into_iter().collect();
            let hit = match cast_to_surface(true_pose.position, ptz.current(), ptz.home_azimuth_deg(), section.target()) {
                Ok(h) => Some(h),
                Err(Error::NoIntersection | Error::BehindCamera | Error::AxisParallelDegenerate) => None,
                Err(e) => return Err(e),
            };
            let error_m = hit.map(|h| h.distance(p.label));
            match error_m {
                Some(e) => errors.push(e),
                None => missed += 1,
            }
            if let Some(pf) = &prev {
                let small = pf.len().min(fp.len());
                overlaps.push(if small == 0 {
                    0.0
                } else {
                    pf.intersection(&fp).count() as f64 / small as f64
                });
            }
            images.push(ImageRecord {
                seq,
                section: sp.name.clone(),
                pan_deg: p.pan_deg,
                tilt_deg: p.tilt_deg,
                label: p.label,
                true_hit: hit,
                error_m,
                footprint_cells: fp.len(),
            });
            seq += 1;
            covered.extend(fp.iter().copied());
            prev = Some(fp);
        }

        let present = u_true.present_count();
        total_present += present;
        total_covered += covered.len();
        section_reports.push(SectionReport {
            name: sp.name.clone(),
            kind: sp.kind,
            image_count: sp.points.len(),
            present_cells: present,
            covered_cells: covered.len(),
            coverage: ratio(covered.len(), present),
            missed_shots: missed,
            overlap: Summary::of(&overlaps),
            labelling_error_m: Summary::of(&errors),
        });
    }

    let all_errors: Vec<f64> = images.iter().filter_map(|r| r.error_m).collect();
    Ok(SimulationReport {
        image_count: images.len(),
        missed_shots: images.len() - all_errors.len(),
        coverage: ratio(total_covered, total_present),
        position_error_m: estimated_pose.position.distance(true_pose.position),
        orientation_error_deg: estimated_pose.orientation.angular_distance_deg(true_pose.orientation),
        labelling_error_m: Summary::of(&all_errors),
        sections: section_reports,
        images,
    })
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrawSummary {
    pub draw: usize,
    pub position_error_m: f64,
    pub orientation_error_deg: f64,
    pub image_count: usize,
    pub missed_shots: usize,
    pub coverage: f64,
    pub labelling_error_m: Option<Summary>,
}

/// Labelling error under noisy pose estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorPropagation {
    pub seed: u64,
    pub draws: usize,
    pub sigma_position_m: f64,
    pub sigma_yaw_deg: f64,
    /// All per-image labelling errors pooled over every draw.
    pub pooled_labelling_error_m: Option<Summary>,
    pub per_draw: Vec<DrawSummary>,
}

impl ErrorPropagation {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Inconsistent(e.to_string()))
    }
}

/// Monte-Carlo over `draws` noisy estimates of `true_pose`, all drawn from
/// one ChaCha8 stream seeded with `seed`. Each draw replans under its
/// estimate and executes at the true pose.
pub fn propagate_pose_error(
    scene: &ScanScene,
    true_pose: &CameraPose,
    sigma_position_m: f64,
    sigma_yaw_deg: f64,
    draws: usize,
    seed: u64,
) -> Result<ErrorPropagation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pooled = Vec::new();
    let mut per_draw = Vec::with_capacity(draws);
    for draw in 0..draws {
        let est = noisy_oracle_with(true_pose, sigma_position_m, sigma_yaw_deg, &mut rng)?;
        let report = scene.run(true_pose, &est.pose)?;
        pooled.extend(report.errors());
        per_draw.push(DrawSummary {
            draw,
            position_error_m: report.position_error_m,
            orientation_error_deg: report.orientation_error_deg,
            image_count: report.image_count,
            missed_shots: report.missed_shots,
            coverage: report.coverage,
            labelling_error_m: report.labelling_error_m,
        });
    }
    Ok(ErrorPropagation {
        seed,
        draws,
        sigma_position_m,
        sigma_yaw_deg,
        pooled_labelling_error_m: Summary::of(&pooled),
        per_draw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pantilt::point_to_pantilt;
    use crate::surface::lattice;

    fn u_line(pans: &[f64]) -> PanTiltGrid {
        PanTiltGrid::from_rows(vec![pans.iter().map(|&p| Some(PanTilt::new(p, -10.0))).collect()]).unwrap()
    }

    #[test]
    fn footprint_rules() {
        let u = u_line(&[-5.0, -1.0, 0.0, 1.0, 3.075, 5.0]);
        let cfg = ScanConfig::default();
        let fp = footprint(&u, PanTilt::new(0.0, -10.0), &cfg);
        assert_eq!(fp, vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
        let wide = ScanConfig::new(179.0, 90.0, 0.1).unwrap();
        assert_eq!(footprint(&u, PanTilt::new(0.0, -10.0), &wide).len(), 6);
    }

    #[test]
    fn index_matches_linear_scan() {
        let rows: Vec<Vec<Option<PanTilt>>> = (0..20)
            .map(|i| (0..30).map(|j| Some(PanTilt::new(-179.0 + j as f64 * 12.3, -30.0 + i as f64))).collect())
            .collect();
        let u = PanTiltGrid::from_rows(rows).unwrap();
        let idx = FootprintIndex::new(&u);
        let cfg = ScanConfig::new(20.0, 6.0, 0.1).unwrap();
        for shot in [PanTilt::new(175.0, -20.0), PanTilt::new(-178.0, -25.0), PanTilt::new(3.0, -11.0)] {
            let fast: Vec<(usize, usize)> = idx
                .query(shot, cfg.hfov_deg, cfg.vfov_deg)
                .into_iter()
                .map(|k| (k / u.cols(), k % u.cols()))
                .collect();
            let mut slow = footprint(&u, shot, &cfg);
            slow.sort();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn grid_cast_agrees_with_cylinder() {
        let cyl = CylinderModel::new(2.0, 2.0).unwrap();
        let grid = SurfaceGrid::from_fn(
            "fuselage",
            SectionKind::Fuselage,
            0.05,
            lattice(-2.0, 0.4, 0.05),
            lattice(0.0, 20.0, 0.05),
            |x, _| Some(2.0 + (4.0 - x * x).max(0.0).sqrt()),
        );
        let cam = Vec3::new(-10.0, 10.0, 6.75);
        for target in [Vec3::new(-1.0, 8.0, 2.0 + 3f64.sqrt()), Vec3::new(0.2, 13.3, 2.0 + (4.0f64 - 0.04).sqrt())] {
            let pt = point_to_pantilt(target, cam, 0.0).unwrap();
            let exact = cast_to_surface(cam, pt, 0.0, Target::Cylinder(cyl)).unwrap();
            let marched = cast_to_surface(cam, pt, 0.0, Target::Grid(&grid)).unwrap();
            assert!(exact.distance(target) < 1e-9);
            assert!(marched.distance(exact) < 5e-3, "{marched:?} vs {exact:?}");
        }
        let up = PanTilt::new(0.0, 60.0);
        assert!(cast_to_surface(cam, up, 0.0, Target::Grid(&grid)).is_err());
    }

    #[test]
    fn tail_grid_cast() {
        // vertical plate x = 0.1 y over y in [10, 12], z in [5, 8]
        let grid = SurfaceGrid::from_fn(
            "tail",
            SectionKind::Tail,
            0.05,
            lattice(5.0, 8.0, 0.05),
            lattice(10.0, 12.0, 0.05),
            |_, y| Some(0.1 * y),
        );
        let cam = Vec3::new(-10.0, 9.0, 6.5);
        let target = Vec3::new(1.1, 11.0, 6.0);
        let pt = point_to_pantilt(target, cam, 0.0).unwrap();
        let hit = cast_to_surface(cam, pt, 0.0, Target::Grid(&grid)).unwrap();
        assert!(hit.distance(target) < 1e-6);
    }

    #[test]
    fn zoom_table() {
        let z = ZoomTable::default();
        assert_eq!(z.fov(13.0), (6.15, 3.46));
        assert_eq!(z.fov(0.5), (72.5, 44.83));
        let (h, v) = z.fov(7.0);
        assert!(h < 72.5 && h > 6.15 && v < 44.83 && v > 3.46);
        assert!(ZoomTable::new(vec![(1.0, 5.0, 3.0), (2.0, 6.0, 3.0)]).is_err());
        assert!(ZoomTable::new(vec![]).is_err());
    }

    #[test]
    fn empty_plan_report() {
        let pose = CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0, 10.0, 6.75), 20.0, -18.0);
        let r = execute_plan(&ScanPlan::default(), &pose, &pose, Quadrant::new(3).unwrap(), &[], &ScanConfig::default()).unwrap();
        assert_eq!(r.image_count, 0);
        assert_eq!(r.coverage, 0.0);
        assert!(r.labelling_error_m.is_none());
    }
}
