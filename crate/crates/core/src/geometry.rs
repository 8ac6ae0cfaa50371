//! Scene-frame geometry: vectors, unit quaternions, camera poses and the
//! cylindrical fuselage model.
//!
//! Frame conventions are listed in `docs/conventions.md`. In short: `y` runs
//! along the fuselage axis toward the tail, `z` is up, and `x` is lateral with
//! the quadrant 3/4 camera side at negative `x`. The origin sits on the ground
//! directly below the fuselage axis. A camera with identity orientation looks
//! along [`FORWARD`] (`+x`).
//!
//! Angles are radians internally. Functions that take or return degrees say so
//! in their name (`_deg`).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default optical axis of the camera before its orientation is applied.
pub const FORWARD: Vec3 = Vec3::new(1.0, 0.0, 0.0);

/// Intersections closer than this along the ray are treated as behind the camera.
pub const T_MIN: f64 = 1e-6;

/// Wrap an angle in degrees into `(-180, 180]`.
pub fn wrap_deg(angle: f64) -> f64 {
    let mut a = angle % 360.0;
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn normalized(self) -> Result<Vec3> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cannot normalise vector {self:?}"
            )));
        }
        Ok(self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation stored as a unit quaternion `w + xi + yj + zk`.
///
/// `q` and `-q` describe the same rotation; nothing here canonicalises the
/// sign, so the raw components are preserved for losses that compare them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

/// Intrinsic z-y'-x'' Euler angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerZyx {
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
    /// Pitch is at +-90 deg; roll was fixed to zero and yaw absorbs the
    /// remaining rotation about the vertical.
    pub gimbal_locked: bool,
}

/// Yaw about the scene z-axis, in degrees, with the gimbal-lock flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Yaw {
    pub degrees: f64,
    pub gimbal_locked: bool,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Normalises `(w, x, y, z)`. Fails on zero or non-finite input.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quaternion ({w}, {x}, {y}, {z}) cannot be normalised"
            )));
        }
        Ok(Self {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn from_array(c: [f64; 4]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let a = axis.normalized()?;
        let (s, c) = (0.5 * angle).sin_cos();
        Self::new(c, a.x * s, a.y * s, a.z * s)
    }

    pub fn from_euler_zyx(yaw: f64, pitch: f64, roll: f64) -> Self {
        let (sy, cy) = (0.5 * yaw).sin_cos();
        let (sp, cp) = (0.5 * pitch).sin_cos();
        let (sr, cr) = (0.5 * roll).sin_cos();
        Self {
            w: cy * cp * cr + sy * sp * sr,
            x: cy * cp * sr - sy * sp * cr,
            y: cy * sp * cr + sy * cp * sr,
            z: sy * cp * cr - cy * sp * sr,
        }
    }

    pub fn from_euler_zyx_deg(yaw: f64, pitch: f64, roll: f64) -> Self {
        Self::from_euler_zyx(yaw.to_radians(), pitch.to_radians(), roll.to_radians())
    }

    /// Orientation of a levelled PTZ camera whose optical axis points at
    /// azimuth `yaw_deg` (counter-clockwise from `+x`) and elevation
    /// `tilt_deg` (negative looks down).
    pub fn from_yaw_tilt_deg(yaw_deg: f64, tilt_deg: f64) -> Self {
        Self::from_euler_zyx_deg(yaw_deg, -tilt_deg, 0.0)
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conjugate(self) -> Self {
        Self {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Rotate `v` by this quaternion (`q v q*`).
    pub fn rotate(self, v: Vec3) -> Vec3 {
        let u = Vec3::new(self.x, self.y, self.z);
        let t = u.cross(v) * 2.0;
        v + t * self.w + u.cross(t)
    }

    pub fn to_euler_zyx(self) -> EulerZyx {
        let Self { w, x, y, z } = self;
        // rotation-matrix entries needed for the extraction
        let r00 = 1.0 - 2.0 * (y * y + z * z);
        let r10 = 2.0 * (x * y + w * z);
        let r20 = 2.0 * (x * z - w * y);
        let r21 = 2.0 * (y * z + w * x);
        let r22 = 1.0 - 2.0 * (x * x + y * y);
        let r01 = 2.0 * (x * y - w * z);
        let r11 = 1.0 - 2.0 * (x * x + z * z);

        if r20.abs() >= 1.0 - 1e-12 {
            let pitch = if r20 < 0.0 {
                std::f64::consts::FRAC_PI_2
            } else {
                -std::f64::consts::FRAC_PI_2
            };
            return EulerZyx {
                yaw: (-r01).atan2(r11),
                pitch,
                roll: 0.0,
                gimbal_locked: true,
            };
        }
        EulerZyx {
            yaw: r10.atan2(r00),
            pitch: (-r20).asin(),
            roll: r21.atan2(r22),
            gimbal_locked: false,
        }
    }

    /// Yaw about the scene z-axis in `(-180, 180]` degrees.
    pub fn yaw(self) -> Yaw {
        let e = self.to_euler_zyx();
        Yaw {
            degrees: wrap_deg(e.yaw.to_degrees()),
            gimbal_locked: e.gimbal_locked,
        }
    }

    /// Rotation angle between two orientations, in degrees within `[0, 180]`.
    pub fn angular_distance_deg(self, other: Self) -> f64 {
        if self == other || self == -other {
            return 0.0;
        }
        // 2 acos|<q1,q2>| evaluated through atan2 for accuracy near zero
        let rel = self.conjugate() * other;
        let v = (rel.x * rel.x + rel.y * rel.y + rel.z * rel.z).sqrt();
        (2.0 * v.atan2(rel.w.abs())).to_degrees()
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

/// Rotate `v` by `q`, rejecting non-finite input.
pub fn rotate_vector(q: UnitQuaternion, v: Vec3) -> Result<Vec3> {
    if !v.is_finite() || !q.to_array().iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidArgument(
            "rotate_vector needs finite inputs".into(),
        ));
    }
    Ok(q.rotate(v))
}

/// Yaw about the vertical extracted with the z-y'-x'' convention.
pub fn yaw_from_quaternion(q: UnitQuaternion) -> Yaw {
    q.yaw()
}

pub fn angular_distance(q1: UnitQuaternion, q2: UnitQuaternion) -> f64 {
    q1.angular_distance_deg(q2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraPose {
    pub position: Vec3,
    pub orientation: UnitQuaternion,
}

impl CameraPose {
    pub fn new(position: Vec3, orientation: UnitQuaternion) -> Self {
        Self {
            position,
            orientation,
        }
    }

    /// Levelled camera at `position` looking at azimuth `yaw_deg`, elevation `tilt_deg`.
    pub fn from_yaw_tilt_deg(position: Vec3, yaw_deg: f64, tilt_deg: f64) -> Self {
        Self::new(position, UnitQuaternion::from_yaw_tilt_deg(yaw_deg, tilt_deg))
    }

    pub fn yaw_deg(&self) -> f64 {
        self.orientation.yaw().degrees
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    origin: Vec3,
    direction: Vec3,
}

impl Ray {
    /// Build a ray; `direction` is normalised.
    pub fn new(origin: Vec3, direction: Vec3) -> Result<Self> {
        if !origin.is_finite() {
            return Err(Error::InvalidArgument("ray origin must be finite".into()));
        }
        Ok(Self {
            origin,
            direction: direction.normalized()?,
        })
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.direction * t
    }
}

/// Optical axis of a camera at `pose`.
pub fn view_ray(pose: &CameraPose) -> Ray {
    Ray {
        origin: pose.position,
        direction: pose.orientation.rotate(FORWARD),
    }
}

/// Fuselage surrogate: infinite cylinder of radius `r0` whose axis is parallel
/// to the scene y-axis at height `h0`, directly above the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderModel {
    pub h0: f64,
    pub r0: f64,
}

impl CylinderModel {
    pub fn new(h0: f64, r0: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite() && h0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cylinder needs finite h0 and r0 > 0 (got h0={h0}, r0={r0})"
            )));
        }
        Ok(Self { h0, r0 })
    }

    /// `c_x^2 + (c_z - h0)^2 - r0^2`, zero on the surface.
    pub fn residual(&self, p: Vec3) -> f64 {
        let dz = p.z - self.h0;
        p.x * p.x + dz * dz - self.r0 * self.r0
    }

    /// Both ray parameters where the ray meets the surface, ascending.
    pub fn roots(&self, ray: &Ray) -> Result<(f64, f64)> {
        let o = ray.origin;
        let v = ray.direction;
        let oz = o.z - self.h0;
        let a = v.x * v.x + v.z * v.z;
        let half_b = o.x * v.x + oz * v.z;
        let c = o.x * o.x + oz * oz - self.r0 * self.r0;
        if a == 0.0 {
            return Err(Error::AxisParallelDegenerate);
        }
        let disc = half_b * half_b - a * c;
        if disc < 0.0 {
            return Err(Error::NoIntersection);
        }
        let sq = disc.sqrt();
        // numerically stable pair
        let q = -(half_b + half_b.signum() * sq);
        let (t1, t2) = if q == 0.0 {
            (0.0, 0.0)
        } else {
            (q / a, c / q)
        };
        Ok(if t1 <= t2 { (t1, t2) } else { (t2, t1) })
    }

    /// First intersection of `ray` with the surface beyond [`T_MIN`].
    pub fn intersect(&self, ray: &Ray) -> Result<Vec3> {
        let (near, far) = self.roots(ray)?;
        let t = if near > T_MIN {
            near
        } else if far > T_MIN {
            far
        } else {
            return Err(Error::BehindCamera);
        };
        Ok(ray.at(t))
    }
}

pub fn intersect_cylinder(ray: &Ray, cyl: &CylinderModel) -> Result<Vec3> {
    cyl.intersect(ray)
}
