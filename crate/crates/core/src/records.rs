//! CSV pose files shared by the loss check and the pose evaluator.
//!
//! A pose file has the header `x_m,y_m,z_m,yaw_deg,pitch_deg,roll_deg`, one
//! pose per row, orientations given as intrinsic z-y'-x'' Euler angles. Lines
//! starting with `#` are ignored.
//!
//! A sample batch file pairs a ground-truth pose (`true_` prefix) with a
//! prediction (`pred_` prefix). The prediction's orientation is either Euler
//! angles or the raw, possibly unnormalised network quaternion
//! (`pred_qw,pred_qx,pred_qy,pred_qz`). Optional `s_x,s_q,s_c` columns carry
//! per-sample log-variances.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CameraPose, UnitQuaternion, Vec3};
use crate::loss::{LossWeights, PoseSample};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PoseRow {
    x_m: f64,
    y_m: f64,
    z_m: f64,
    yaw_deg: f64,
    pitch_deg: f64,
    roll_deg: f64,
}

impl PoseRow {
    fn from_pose(p: &CameraPose) -> Self {
        let e = p.orientation.to_euler_zyx();
        Self {
            x_m: p.position.x,
            y_m: p.position.y,
            z_m: p.position.z,
            yaw_deg: e.yaw.to_degrees(),
            pitch_deg: e.pitch.to_degrees(),
            roll_deg: e.roll.to_degrees(),
        }
    }

    fn to_pose(self) -> CameraPose {
        CameraPose::new(
            Vec3::new(self.x_m, self.y_m, self.z_m),
            UnitQuaternion::from_euler_zyx_deg(self.yaw_deg, self.pitch_deg, self.roll_deg),
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
struct SampleRow {
    true_x_m: f64,
    true_y_m: f64,
    true_z_m: f64,
    true_yaw_deg: f64,
    true_pitch_deg: f64,
    true_roll_deg: f64,
    pred_x_m: f64,
    pred_y_m: f64,
    pred_z_m: f64,
    #[serde(default)]
    pred_yaw_deg: Option<f64>,
    #[serde(default)]
    pred_pitch_deg: Option<f64>,
    #[serde(default)]
    pred_roll_deg: Option<f64>,
    #[serde(default)]
    pred_qw: Option<f64>,
    #[serde(default)]
    pred_qx: Option<f64>,
    #[serde(default)]
    pred_qy: Option<f64>,
    #[serde(default)]
    pred_qz: Option<f64>,
    #[serde(default)]
    s_x: Option<f64>,
    #[serde(default)]
    s_q: Option<f64>,
    #[serde(default)]
    s_c: Option<f64>,
}

/// A parsed batch record.
#[derive(Debug, Clone, Copy)]
pub struct SampleRecord {
    pub sample: PoseSample,
    /// Per-sample log-variances, when the file provides them.
    pub weights: Option<LossWeights>,
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn csv_error(origin: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::parse(origin, line, e.to_string())
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

pub fn parse_poses<R: Read>(input: R, origin: &str) -> Result<Vec<CameraPose>> {
    let mut rdr = reader(input);
    let mut out = Vec::new();
    for rec in rdr.deserialize::<PoseRow>() {
        let row = rec.map_err(|e| csv_error(origin, e))?;
        out.push(row.to_pose());
    }
    Ok(out)
}

pub fn read_poses(path: &Path) -> Result<Vec<CameraPose>> {
    parse_poses(open(path)?, &path.display().to_string())
}

pub fn write_poses<W: Write>(out: W, poses: &[CameraPose]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in poses {
        w.serialize(PoseRow::from_pose(p))
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io("<pose output>", e))
}

pub fn parse_samples<R: Read>(input: R, origin: &str) -> Result<Vec<SampleRecord>> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(origin, e))?.clone();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(origin, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let row: SampleRow = rec
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(origin, line, e.to_string()))?;
        out.push(sample_from_row(&row).map_err(|m| Error::parse(origin, line, m))?);
    }
    Ok(out)
}

pub fn read_samples(path: &Path) -> Result<Vec<SampleRecord>> {
    parse_samples(open(path)?, &path.display().to_string())
}

fn sample_from_row(r: &SampleRow) -> std::result::Result<SampleRecord, String> {
    let true_pose = PoseRow {
        x_m: r.true_x_m,
        y_m: r.true_y_m,
        z_m: r.true_z_m,
        yaw_deg: r.true_yaw_deg,
        pitch_deg: r.true_pitch_deg,
        roll_deg: r.true_roll_deg,
    }
    .to_pose();
    let raw = match (
        (r.pred_qw, r.pred_qx, r.pred_qy, r.pred_qz),
        (r.pred_yaw_deg, r.pred_pitch_deg, r.pred_roll_deg),
    ) {
        ((Some(w), Some(x), Some(y), Some(z)), _) => [w, x, y, z],
        (_, (Some(yaw), Some(pitch), Some(roll))) => {
            UnitQuaternion::from_euler_zyx_deg(yaw, pitch, roll).to_array()
        }
        _ => {
            return Err(
                "prediction needs either pred_qw..pred_qz or pred_yaw/pitch/roll_deg".into(),
            )
        }
    };
    let sample = PoseSample::new(
        true_pose,
        Vec3::new(r.pred_x_m, r.pred_y_m, r.pred_z_m),
        raw,
    )
    .map_err(|e| e.to_string())?;
    let weights = match (r.s_x, r.s_q, r.s_c) {
        (None, None, None) => None,
        (Some(s_x), Some(s_q), Some(s_c)) => {
            Some(LossWeights::new(s_x, s_q, s_c).map_err(|e| e.to_string())?)
        }
        _ => return Err("s_x, s_q and s_c must be given together".into()),
    };
    Ok(SampleRecord { sample, weights })
}
