use serde::{Deserialize, Serialize};

use super::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Fuselage,
    Tail,
    Stabiliser,
    Wing,
}

impl SectionKind {
    /// Which coordinate is interpolated over the other two.
    pub fn interpolated_axis(self) -> InterpolatedAxis {
        match self {
            SectionKind::Tail => InterpolatedAxis::XOverYz,
            _ => InterpolatedAxis::ZOverXy,
        }
    }

    /// Wing-like sections are planned with pan and tilt roles exchanged.
    pub fn is_transposed(self) -> bool {
        matches!(self, SectionKind::Wing | SectionKind::Stabiliser)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SectionKind::Fuselage => "fuselage",
            SectionKind::Tail => "tail",
            SectionKind::Stabiliser => "stabiliser",
            SectionKind::Wing => "wing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "fuselage" => SectionKind::Fuselage,
            "tail" => SectionKind::Tail,
            "stabiliser" | "stabilizer" => SectionKind::Stabiliser,
            "wing" => SectionKind::Wing,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterpolatedAxis {
    /// Rows share `x`, columns share `y`, `z` is interpolated.
    #[serde(rename = "z-over-xy")]
    ZOverXy,
    /// Rows share `z`, columns share `y`, `x` is interpolated.
    #[serde(rename = "x-over-yz")]
    XOverYz,
}

impl InterpolatedAxis {
    /// Split a point into (row coordinate, column coordinate, interpolated value).
    pub fn project(self, p: Vec3) -> (f64, f64, f64) {
        match self {
            InterpolatedAxis::ZOverXy => (p.x, p.y, p.z),
            InterpolatedAxis::XOverYz => (p.z, p.y, p.x),
        }
    }

    pub fn unproject(self, row: f64, col: f64, value: f64) -> Vec3 {
        match self {
            InterpolatedAxis::ZOverXy => Vec3::new(row, col, value),
            InterpolatedAxis::XOverYz => Vec3::new(value, col, row),
        }
    }
}

/// Which half of the aircraft a section is scanned from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AircraftHalf {
    Front,
    Back,
}

impl AircraftHalf {
    /// Quadrants 1 and 4 are in the front half, 2 and 3 in the back.
    pub fn of_quadrant(quadrant: u8) -> Option<Self> {
        match quadrant {
            1 | 4 => Some(AircraftHalf::Front),
            2 | 3 => Some(AircraftHalf::Back),
            _ => None,
        }
    }
}

/// Closed axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Result<Self> {
        let ok = min.is_finite()
            && max.is_finite()
            && min.x < max.x
            && min.y < max.y
            && min.z < max.z;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "box needs min < max on every axis (min {min:?}, max {max:?})"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, p: Vec3) -> bool {
        (self.min.x..=self.max.x).contains(&p.x)
            && (self.min.y..=self.max.y).contains(&p.y)
            && (self.min.z..=self.max.z).contains(&p.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSpec {
    pub name: String,
    pub kind: SectionKind,
    pub bounds: Aabb,
    pub half: AircraftHalf,
}

impl SectionSpec {
    pub fn new(name: impl Into<String>, kind: SectionKind, bounds: Aabb, half: AircraftHalf) -> Self {
        Self {
            name: name.into(),
            kind,
            bounds,
            half,
        }
    }

    pub fn interpolated_axis(&self) -> InterpolatedAxis {
        self.kind.interpolated_axis()
    }
}

/// Points of `cloud` inside the section box (boundary inclusive).
///
/// An empty result means the section is unusable; [`PointCloud::is_empty`]
/// is the flag.
pub fn section_points(cloud: &PointCloud, spec: &SectionSpec) -> PointCloud {
    let keep: Vec<usize> = cloud
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| spec.bounds.contains(**p))
        .map(|(k, _)| k)
        .collect();
    PointCloud {
        points: keep.iter().map(|&k| cloud.points[k]).collect(),
        tags: cloud
            .tags
            .as_ref()
            .map(|t| keep.iter().map(|&k| t[k].clone()).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(min: [f64; 3], max: [f64; 3]) -> SectionSpec {
        SectionSpec::new(
            "s",
            SectionKind::Fuselage,
            Aabb::new(Vec3::new(min[0], min[1], min[2]), Vec3::new(max[0], max[1], max[2])).unwrap(),
            AircraftHalf::Back,
        )
    }

    #[test]
    fn box_with_everything() {
        let c = PointCloud::new(vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 1.0)]);
        let s = section_points(&c, &spec([0.0; 3], [1.0; 3]));
        assert_eq!(s, c);
    }

    #[test]
    fn disjoint_box_is_empty() {
        let c = PointCloud::new(vec![Vec3::new(0.0, 0.0, 0.0)]);
        assert!(section_points(&c, &spec([5.0; 3], [6.0; 3])).is_empty());
    }

    #[test]
    fn fin_box_keeps_only_fin() {
        // fuselage half-ring plus a vertical fin plate above it
        let mut pts = Vec::new();
        let mut fin = Vec::new();
        for j in 0..=20 {
            let y = j as f64 * 0.5;
            for k in 0..=18 {
                let a = (k as f64 * 10.0).to_radians();
                pts.push(Vec3::new(2.0 * a.cos(), y, 3.0 + 2.0 * a.sin()));
            }
        }
        for j in 0..=10 {
            for k in 1..=10 {
                let p = Vec3::new(0.0, 7.0 + j as f64 * 0.3, 5.0 + k as f64 * 0.4);
                pts.push(p);
                fin.push(p);
            }
        }
        let c = PointCloud::new(pts);
        let s = section_points(&c, &spec([-0.2, 6.5, 5.2], [0.2, 11.0, 9.5]));
        assert_eq!(s.points, fin);
    }

    #[test]
    fn tags_follow_points() {
        let c = PointCloud {
            points: vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(9.0, 9.0, 9.0)],
            tags: Some(vec!["a".into(), "b".into()]),
        };
        let s = section_points(&c, &spec([8.0; 3], [10.0; 3]));
        assert_eq!(s.tags.unwrap(), vec!["b".to_string()]);
    }

    #[test]
    fn invalid_box() {
        assert!(Aabb::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn tail_interpolates_x() {
        assert_eq!(SectionKind::Tail.interpolated_axis(), InterpolatedAxis::XOverYz);
        assert_eq!(SectionKind::Wing.interpolated_axis(), InterpolatedAxis::ZOverXy);
        let p = Vec3::new(1.0, 2.0, 3.0);
        let (r, c, v) = InterpolatedAxis::XOverYz.project(p);
        assert_eq!(InterpolatedAxis::XOverYz.unproject(r, c, v), p);
    }
}
