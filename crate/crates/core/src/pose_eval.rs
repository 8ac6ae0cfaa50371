//! Pose-estimate sources and localisation error statistics (median and RMSE
//! of position and orientation error).

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CameraPose, UnitQuaternion, Vec3};
use crate::records;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateSource {
    Oracle,
    NoisyOracle,
    ExternalFile,
}

/// A camera pose produced by some estimator (the CNN in deployment).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseEstimate {
    pub pose: CameraPose,
    pub source: EstimateSource,
}

impl PoseEstimate {
    pub fn oracle(gt: CameraPose) -> Self {
        Self {
            pose: gt,
            source: EstimateSource::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorStats {
    pub n: usize,
    pub median_position_m: f64,
    pub rmse_position_m: f64,
    pub median_orientation_deg: f64,
    pub rmse_orientation_deg: f64,
}

/// Median with the even-count convention of averaging the two central values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

pub fn rmse(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    Some((values.iter().map(|e| e * e).sum::<f64>() / values.len() as f64).sqrt())
}

pub fn evaluate(predictions: &[PoseEstimate], ground_truths: &[CameraPose]) -> Result<ErrorStats> {
    if predictions.len() != ground_truths.len() {
        return Err(Error::InvalidArgument(format!(
            "{} predictions but {} ground truths",
            predictions.len(),
            ground_truths.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::InvalidArgument("nothing to evaluate".into()));
    }
    let (pos, ori): (Vec<f64>, Vec<f64>) = predictions
        .iter()
        .zip(ground_truths)
        .map(|(p, g)| {
            (
                p.pose.position.distance(g.position),
                p.pose.orientation.angular_distance_deg(g.orientation),
            )
        })
        .unzip();
    Ok(ErrorStats {
        n: pos.len(),
        median_position_m: median(&pos).unwrap_or_default(),
        rmse_position_m: rmse(&pos).unwrap_or_default(),
        median_orientation_deg: median(&ori).unwrap_or_default(),
        rmse_orientation_deg: rmse(&ori).unwrap_or_default(),
    })
}

/// Ground truth perturbed by isotropic Gaussian position noise and Gaussian
/// yaw noise about the scene z-axis.
///
/// `sigma_pos` is the target RMS of the *total* position error, so each axis
/// gets `sigma_pos / sqrt(3)`.
pub fn noisy_oracle(gt: &CameraPose, sigma_pos: f64, sigma_yaw_deg: f64, seed: u64) -> Result<PoseEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    noisy_oracle_with(gt, sigma_pos, sigma_yaw_deg, &mut rng)
}

/// [`noisy_oracle`] drawing from a caller-owned generator.
pub fn noisy_oracle_with<R: rand::Rng + ?Sized>(
    gt: &CameraPose,
    sigma_pos: f64,
    sigma_yaw_deg: f64,
    rng: &mut R,
) -> Result<PoseEstimate> {
    if !(sigma_pos >= 0.0 && sigma_yaw_deg >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise sigmas must be non-negative (got {sigma_pos}, {sigma_yaw_deg})"
        )));
    }
    let axis = Normal::new(0.0, sigma_pos / 3f64.sqrt())
        .map_err(|e| Error::InvalidArgument(format!("sigma_pos: {e}")))?;
    let yaw = Normal::new(0.0, sigma_yaw_deg)
        .map_err(|e| Error::InvalidArgument(format!("sigma_yaw: {e}")))?;
    let d = Vec3::new(axis.sample(rng), axis.sample(rng), axis.sample(rng));
    let dyaw = yaw.sample(rng).to_radians();
    let rz = UnitQuaternion::from_euler_zyx(dyaw, 0.0, 0.0);
    Ok(PoseEstimate {
        pose: CameraPose::new(gt.position + d, rz * gt.orientation),
        source: EstimateSource::NoisyOracle,
    })
}

pub fn load_external_predictions(path: &Path) -> Result<Vec<PoseEstimate>> {
    Ok(records::read_poses(path)?
        .into_iter()
        .map(|pose| PoseEstimate {
            pose,
            source: EstimateSource::ExternalFile,
        })
        .collect())
}
