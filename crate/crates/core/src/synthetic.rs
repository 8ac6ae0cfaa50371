//! Analytic fixtures: a cylindrical fuselage sampled as a point cloud and a
//! ready-made scan scene around it.

use crate::error::Result;
use crate::geometry::{CameraPose, CylinderModel, Vec3};
use crate::pantilt::Quadrant;
use crate::planner::ScanConfig;
use crate::randomizer::{DeploymentBoundary, Range};
use crate::simulator::{ScanScene, SceneSection};
use crate::surface::{interpolate_section, section_points, Aabb, AircraftHalf, PointCloud, SectionKind, SectionSpec};

/// Points on the cylinder surface for `y` in `[0, length]` and the arc from
/// the lateral extreme at `x = -r0` over the crown to `x = x_max`, spaced
/// about `spacing` along both the arc and the axis.
pub fn cylinder_cloud(cyl: &CylinderModel, length: f64, x_max: f64, spacing: f64) -> PointCloud {
    let r0 = cyl.r0;
    // polar angle measured from +x; the arc runs from pi down to acos(x_max / r0)
    let end = (x_max / r0).clamp(-1.0, 1.0).acos();
    let arc = (std::f64::consts::PI - end) * r0;
    let n_arc = (arc / spacing).ceil().max(1.0) as usize;
    let n_len = (length / spacing).ceil().max(1.0) as usize;
    let mut points = Vec::with_capacity((n_arc + 1) * (n_len + 1));
    for a in 0..=n_arc {
        let theta = std::f64::consts::PI - (std::f64::consts::PI - end) * a as f64 / n_arc as f64;
        let (x, z) = (r0 * theta.cos(), cyl.h0 + r0 * theta.sin());
        for k in 0..=n_len {
            points.push(Vec3::new(x, length * k as f64 / n_len as f64, z));
        }
    }
    PointCloud::new(points)
}

/// Parameters of the synthetic quadrant-3 fuselage scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderFixture {
    pub cylinder: CylinderModel,
    pub length: f64,
    /// Lateral end of the scanned arc beyond the crown.
    pub x_max: f64,
    pub cloud_spacing: f64,
    pub camera: CameraPose,
}

impl Default for CylinderFixture {
    /// 2 m radius, 20 m long, axis 2 m above ground; camera 11 m from the
    /// axis at mid-length, 6.75 m high, initialised at yaw 20 and tilt -18.
    fn default() -> Self {
        Self {
            cylinder: CylinderModel { h0: 2.0, r0: 2.0 },
            length: 20.0,
            x_max: 0.4,
            cloud_spacing: 0.02,
            camera: CameraPose::from_yaw_tilt_deg(Vec3::new(-11.0, 10.0, 6.75), 20.0, -18.0),
        }
    }
}

impl CylinderFixture {
    pub fn quadrant(&self) -> Quadrant {
        Quadrant::new(3).expect("valid quadrant")
    }

    /// A 3 m x 3 m quadrant-3 box 8.5 to 11.5 m from the axis, centred on mid-length.
    pub fn boundary(&self) -> DeploymentBoundary {
        let mut b = DeploymentBoundary::default_for(self.quadrant());
        b.x = Range::new(-11.5, -8.5).expect("valid");
        b.y = Range::new(self.length / 2.0 - 1.5, self.length / 2.0 + 1.5).expect("valid");
        b
    }

    pub fn cloud(&self) -> PointCloud {
        cylinder_cloud(&self.cylinder, self.length, self.x_max, self.cloud_spacing)
    }

    /// Upper fuselage section box: lateral extreme to `x_max`, above the axis.
    pub fn section_spec(&self) -> SectionSpec {
        let c = &self.cylinder;
        let eps = 1e-9;
        let bounds = Aabb::new(
            Vec3::new(-c.r0 - eps, -eps, c.h0 - eps),
            Vec3::new(self.x_max + eps, self.length + eps, c.h0 + c.r0 + eps),
        )
        .expect("valid box");
        SectionSpec::new("fuselage", SectionKind::Fuselage, bounds, AircraftHalf::Back)
    }

    /// Interpolated fuselage with the analytic cylinder as ground truth.
    pub fn scene(&self, cfg: ScanConfig) -> Result<ScanScene> {
        let spec = self.section_spec();
        let grid = interpolate_section(&section_points(&self.cloud(), &spec), &spec)?;
        Ok(ScanScene {
            quadrant: self.quadrant(),
            sections: vec![SceneSection {
                grid,
                half: spec.half,
                analytic: Some(self.cylinder),
            }],
            cfg,
        })
    }
}
