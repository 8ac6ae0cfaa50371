//! Domain-randomisation manifests for synthetic training scenes and
//! validation of camera deployments against the quadrant boundaries.
//!
//! Every randomised field is an independent uniform draw. Uniforms are built
//! from a ChaCha8 stream as `lo + (hi - lo) * ((next_u64 >> 11) / 2^53)`, so a
//! manifest is reproducible from its seed by any ChaCha8 implementation. The
//! stream is seeded with `ChaCha8Rng::seed_from_u64(seed)`.

use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::toml_error;
use crate::error::{Error, Result};
use crate::geometry::{wrap_deg, CameraPose, UnitQuaternion, Vec3};
use crate::pantilt::Quadrant;

pub const GENERATOR: &str = "ChaCha8Rng/seed_from_u64";

/// Objects whose appearance is randomised, in draw order.
pub const OBJECTS: [&str; 3] = ["aircraft", "ground", "background"];

/// Texture scale factors are drawn from this range on both axes.
pub const TEXTURE_SCALE: [f64; 2] = [0.5, 2.0];

/// Closed interval `[lo, hi]`; `lo == hi` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidArgument(format!("invalid range [{lo}, {hi}]")))
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }

    /// Distance outside the interval, zero inside.
    pub fn excess(&self, v: f64) -> f64 {
        (self.lo - v).max(v - self.hi).max(0.0)
    }

    fn draw(&self, rng: &mut impl RngCore) -> f64 {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        self.lo + (self.hi - self.lo) * u
    }
}

impl TryFrom<[f64; 2]> for Range {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Range::new(v[0], v[1])
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.lo, r.hi]
    }
}

/// Permissible camera deployment for one quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeploymentBoundary {
    pub quadrant: Quadrant,
    pub x: Range,
    pub y: Range,
    /// Mast height.
    pub z: Range,
    /// Allowed deviation of the base from facing the fuselage perpendicularly.
    pub yaw_tolerance_deg: f64,
    /// Initialisation tilt.
    pub tilt_deg: Range,
}

impl DeploymentBoundary {
    /// Quadrant defaults: a 3 m x 3 m box 8.5 to 11.5 m from the fuselage
    /// axis, 4 to 7 m from the reference station, mast 6.25 to 7.25 m, yaw
    /// tolerance 10 deg and tilt -18 +- 0.5 deg.
    pub fn default_for(quadrant: Quadrant) -> Self {
        let (x, y) = match quadrant.number() {
            1 => ([8.5, 11.5], [-7.0, -4.0]),
            2 => ([8.5, 11.5], [4.0, 7.0]),
            3 => ([-11.5, -8.5], [4.0, 7.0]),
            _ => ([-11.5, -8.5], [-7.0, -4.0]),
        };
        Self {
            quadrant,
            x: Range { lo: x[0], hi: x[1] },
            y: Range { lo: y[0], hi: y[1] },
            z: Range { lo: 6.25, hi: 7.25 },
            yaw_tolerance_deg: 10.0,
            tilt_deg: Range { lo: -18.5, hi: -17.5 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        for r in [self.x, self.y, self.z, self.tilt_deg] {
            Range::new(r.lo, r.hi)?;
        }
        if !(self.yaw_tolerance_deg >= 0.0 && self.yaw_tolerance_deg < 180.0) {
            return Err(Error::InvalidArgument(format!(
                "yaw tolerance must lie in [0, 180), got {}",
                self.yaw_tolerance_deg
            )));
        }
        Ok(())
    }

    /// Initialisation pan window relative to the perpendicular heading.
    pub fn pan_window(&self) -> Range {
        let b = self.quadrant.beta_deg();
        Range {
            lo: b - self.yaw_tolerance_deg,
            hi: b + self.yaw_tolerance_deg,
        }
    }

    pub fn center(&self) -> Vec3 {
        Vec3::new(self.x.mid(), self.y.mid(), self.z.mid())
    }

    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let b: Self = toml::from_str(text).map_err(|e| toml_error(text, origin, &e))?;
        b.validate()?;
        Ok(b)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("boundary serialises")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectAppearance {
    pub object: String,
    pub ambient_rgb: [f64; 3],
    pub specular_rgb: [f64; 3],
    /// Texture offset in texture units, each in `[0, 1]`.
    pub texture_offset: [f64; 2],
    pub texture_rotation_deg: f64,
    pub texture_scale: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomizationSample {
    pub position: Vec3,
    /// Optical-axis yaw in the scene frame.
    pub yaw_deg: f64,
    /// Pan relative to the quadrant's perpendicular heading.
    pub pan_deg: f64,
    pub tilt_deg: f64,
    /// Camera orientation quaternion `[w, x, y, z]`.
    pub orientation: [f64; 4],
    pub appearance: Vec<ObjectAppearance>,
}

impl RandomizationSample {
    pub fn pose(&self) -> CameraPose {
        CameraPose::from_yaw_tilt_deg(self.position, self.yaw_deg, self.tilt_deg)
    }
}

/// One independent uniform draw per field, in declaration order.
pub fn sample_setup(boundary: &DeploymentBoundary, rng: &mut impl RngCore) -> RandomizationSample {
    let position = Vec3::new(boundary.x.draw(rng), boundary.y.draw(rng), boundary.z.draw(rng));
    let pan_deg = boundary.pan_window().draw(rng);
    let tilt_deg = boundary.tilt_deg.draw(rng);
    let unit = Range { lo: 0.0, hi: 1.0 };
    let turn = Range { lo: 0.0, hi: 360.0 };
    let scale = Range {
        lo: TEXTURE_SCALE[0],
        hi: TEXTURE_SCALE[1],
    };
    let appearance = OBJECTS
        .iter()
        .map(|name| ObjectAppearance {
            object: (*name).to_string(),
            ambient_rgb: [unit.draw(rng), unit.draw(rng), unit.draw(rng)],
            specular_rgb: [unit.draw(rng), unit.draw(rng), unit.draw(rng)],
            texture_offset: [unit.draw(rng), unit.draw(rng)],
            texture_rotation_deg: turn.draw(rng),
            texture_scale: [scale.draw(rng), scale.draw(rng)],
        })
        .collect();
    let yaw_deg = wrap_deg(boundary.quadrant.perpendicular_heading_deg() + pan_deg);
    RandomizationSample {
        position,
        yaw_deg,
        pan_deg,
        tilt_deg,
        orientation: UnitQuaternion::from_yaw_tilt_deg(yaw_deg, tilt_deg).to_array(),
        appearance,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        Self {
            train: 4000,
            val: 700,
            test: 300,
        }
    }
}

impl SplitSizes {
    pub fn total(&self) -> usize {
        self.train + self.val + self.test
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub split: Split,
    #[serde(flatten)]
    pub sample: RandomizationSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub generator: String,
    pub seed: u64,
    pub sizes: SplitSizes,
    pub boundary: DeploymentBoundary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hfov_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub header: ManifestHeader,
    pub samples: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn count(&self, split: Split) -> usize {
        self.samples.iter().filter(|s| s.split == split).count()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Inconsistent(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("<manifest>", e.line() as u64, e.to_string()))
    }
}

/// Draw `sizes.total()` samples from one stream. The first `train` indices
/// form the training split, then validation, then test.
pub fn generate_manifest(
    boundary: &DeploymentBoundary,
    sizes: SplitSizes,
    seed: u64,
    hfov_deg: Option<f64>,
) -> Result<DatasetManifest> {
    boundary.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..sizes.total())
        .map(|index| {
            let split = if index < sizes.train {
                Split::Train
            } else if index < sizes.train + sizes.val {
                Split::Val
            } else {
                Split::Test
            };
            ManifestEntry {
                index,
                split,
                sample: sample_setup(boundary, &mut rng),
            }
        })
        .collect();
    Ok(DatasetManifest {
        header: ManifestHeader {
            generator: GENERATOR.to_string(),
            seed,
            sizes,
            boundary: *boundary,
            hfov_deg,
        },
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    X,
    Y,
    Height,
    Yaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    /// How far the pose lies outside the allowed range (metres or degrees).
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeploymentReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Check position box, mast height and optical-axis yaw window.
pub fn validate_deployment(pose: &CameraPose, boundary: &DeploymentBoundary) -> DeploymentReport {
    let p = pose.position;
    let yaw_offset = wrap_deg(pose.yaw_deg() - boundary.quadrant.perpendicular_heading_deg() - boundary.quadrant.beta_deg());
    let checks = [
        (Constraint::X, boundary.x.excess(p.x)),
        (Constraint::Y, boundary.y.excess(p.y)),
        (Constraint::Height, boundary.z.excess(p.z)),
        (Constraint::Yaw, (yaw_offset.abs() - boundary.yaw_tolerance_deg).max(0.0)),
    ];
    let violations: Vec<Violation> = checks
        .into_iter()
        .filter(|&(_, m)| m > 0.0)
        .map(|(constraint, margin)| Violation { constraint, margin })
        .collect();
    DeploymentReport {
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> DeploymentBoundary {
        DeploymentBoundary::default_for(Quadrant::new(3).unwrap())
    }

    #[test]
    fn centre_pose_passes() {
        let b = q3();
        let pose = CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0, 5.5, 6.75), 20.0, -18.0);
        assert!(validate_deployment(&pose, &b).pass);
    }

    #[test]
    fn height_violation() {
        let pose = CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0, 5.5, 8.0), 20.0, -18.0);
        let r = validate_deployment(&pose, &q3());
        assert!(!r.pass);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].constraint, Constraint::Height);
        assert!((r.violations[0].margin - 0.75).abs() < 1e-12);
    }

    #[test]
    fn yaw_violation() {
        let pose = CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0, 5.5, 6.75), 31.0, -18.0);
        let r = validate_deployment(&pose, &q3());
        assert_eq!(r.violations[0].constraint, Constraint::Yaw);
        assert!((r.violations[0].margin - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quadrant_windows() {
        assert_eq!(q3().pan_window(), Range::new(10.0, 30.0).unwrap());
        let q4 = DeploymentBoundary::default_for(Quadrant::new(4).unwrap());
        assert_eq!(q4.pan_window(), Range::new(-20.0, 0.0).unwrap());
    }

    #[test]
    fn degenerate_boundary_single_sample() {
        let mut b = q3();
        b.x = Range::new(-10.0, -10.0).unwrap();
        b.y = Range::new(5.0, 5.0).unwrap();
        b.z = Range::new(7.0, 7.0).unwrap();
        b.yaw_tolerance_deg = 0.0;
        b.tilt_deg = Range::new(-18.0, -18.0).unwrap();
        let s = sample_setup(&b, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(s.position, Vec3::new(-10.0, 5.0, 7.0));
        assert_eq!((s.yaw_deg, s.pan_deg, s.tilt_deg), (20.0, 20.0, -18.0));
    }

    #[test]
    fn fresh_rng_repeats() {
        let a = sample_setup(&q3(), &mut ChaCha8Rng::seed_from_u64(5));
        let b = sample_setup(&q3(), &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn mirrored_quadrant_samples_pass() {
        for q in 1..=4 {
            let b = DeploymentBoundary::default_for(Quadrant::new(q).unwrap());
            let m = generate_manifest(&b, SplitSizes { train: 50, val: 0, test: 0 }, 3, None).unwrap();
            assert!(m.samples.iter().all(|s| validate_deployment(&s.sample.pose(), &b).pass));
        }
    }

    #[test]
    fn boundary_toml_round_trip() {
        let b = q3();
        assert_eq!(DeploymentBoundary::from_toml(&b.to_toml(), "t").unwrap(), b);
        assert!(DeploymentBoundary::from_toml("quadrant = 7", "t").is_err());
        let bad = b.to_toml().replace("6.25", "9.0");
        assert!(DeploymentBoundary::from_toml(&bad, "t").is_err());
    }

    #[test]
    fn manifest_json_round_trip() {
        let m = generate_manifest(&q3(), SplitSizes { train: 2, val: 1, test: 1 }, 9, Some(72.5)).unwrap();
        assert_eq!(DatasetManifest::from_json(&m.to_json().unwrap()).unwrap(), m);
        assert_eq!((m.count(Split::Train), m.count(Split::Val), m.count(Split::Test)), (2, 1, 1));
    }
}
