//! Pose-regression losses: the homoscedastic position/orientation loss and its
//! extension with the image-centre scene coordinate (ICSC) term.
//!
//! The ICSC term compares where the true and predicted optical axes meet the
//! cylindrical fuselage model. Each component `L` is weighted by a learnt
//! log-variance `s` as `L * exp(-s) + s`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{view_ray, CameraPose, CylinderModel, UnitQuaternion, Vec3};

/// One training/evaluation sample: ground truth plus the raw network output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSample {
    pub true_pose: CameraPose,
    pub predicted_position: Vec3,
    predicted_orientation_raw: [f64; 4],
    predicted_orientation: UnitQuaternion,
}

impl PoseSample {
    /// `predicted_orientation_raw` is `(w, x, y, z)` and need not be unit length.
    pub fn new(
        true_pose: CameraPose,
        predicted_position: Vec3,
        predicted_orientation_raw: [f64; 4],
    ) -> Result<Self> {
        let predicted_orientation = UnitQuaternion::from_array(predicted_orientation_raw)
            .map_err(|_| {
                Error::InvalidArgument("predicted orientation has zero or non-finite norm".into())
            })?;
        Ok(Self {
            true_pose,
            predicted_position,
            predicted_orientation_raw,
            predicted_orientation,
        })
    }

    pub fn from_poses(true_pose: CameraPose, predicted: CameraPose) -> Self {
        Self {
            true_pose,
            predicted_position: predicted.position,
            predicted_orientation_raw: predicted.orientation.to_array(),
            predicted_orientation: predicted.orientation,
        }
    }

    pub fn predicted_orientation_raw(&self) -> [f64; 4] {
        self.predicted_orientation_raw
    }

    pub fn predicted_orientation(&self) -> UnitQuaternion {
        self.predicted_orientation
    }

    pub fn predicted_pose(&self) -> CameraPose {
        CameraPose::new(self.predicted_position, self.predicted_orientation())
    }

    pub fn with_predicted_position(mut self, p: Vec3) -> Self {
        self.predicted_position = p;
        self
    }
}

/// Log-variances `s = log(sigma^2)` for the position, orientation and ICSC terms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LossWeights {
    pub s_x: f64,
    pub s_q: f64,
    pub s_c: f64,
}

impl LossWeights {
    pub fn new(s_x: f64, s_q: f64, s_c: f64) -> Result<Self> {
        if !(s_x.is_finite() && s_q.is_finite() && s_c.is_finite()) {
            return Err(Error::InvalidArgument("loss weights must be finite".into()));
        }
        Ok(Self { s_x, s_q, s_c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IcscStatus {
    Hit,
    FallbackSkipped,
}

/// What to do when the predicted optical axis misses the cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IcscFallback {
    /// Drop the ICSC contribution for this sample.
    #[default]
    Skip,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBreakdown {
    pub l_x: f64,
    pub l_q: f64,
    pub l_c: Option<f64>,
    pub total: f64,
    /// `None` when the ICSC term was not requested.
    pub icsc_status: Option<IcscStatus>,
}

/// `L * exp(-s) + s`.
pub fn weighted_term(loss: f64, s: f64) -> f64 {
    loss * (-s).exp() + s
}

/// The same term written with the variance itself: `L / sigma^2 + log(sigma^2)`.
pub fn weighted_term_sigma(loss: f64, sigma2: f64) -> f64 {
    loss / sigma2 + sigma2.ln()
}

pub fn position_loss(sample: &PoseSample) -> f64 {
    sample.true_pose.position.distance(sample.predicted_position)
}

/// `|| q - q_hat / ||q_hat|| ||`, with no hemisphere alignment.
pub fn orientation_loss(sample: &PoseSample) -> f64 {
    let raw = sample.predicted_orientation_raw;
    let n = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
    sample
        .true_pose
        .orientation
        .to_array()
        .iter()
        .zip(raw)
        .map(|(t, p)| {
            let d = t - p / n;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Distance between true and predicted optical-axis hits on the cylinder.
///
/// Returns `(None, FallbackSkipped)` when the predicted axis misses and the
/// policy is [`IcscFallback::Skip`].
pub fn icsc_loss(
    sample: &PoseSample,
    cyl: &CylinderModel,
    fallback: IcscFallback,
) -> Result<(Option<f64>, IcscStatus)> {
    let truth = cyl
        .intersect(&view_ray(&sample.true_pose))
        .map_err(|e| Error::InvalidSetup(format!("true optical axis misses the fuselage: {e}")))?;
    match cyl.intersect(&view_ray(&sample.predicted_pose())) {
        Ok(pred) => Ok((Some(truth.distance(pred)), IcscStatus::Hit)),
        Err(e) => match fallback {
            IcscFallback::Skip => Ok((None, IcscStatus::FallbackSkipped)),
            IcscFallback::Error => Err(e),
        },
    }
}

pub fn combined_loss(
    sample: &PoseSample,
    weights: &LossWeights,
    cyl: &CylinderModel,
    include_icsc: bool,
    fallback: IcscFallback,
) -> Result<LossBreakdown> {
    let l_x = position_loss(sample);
    let l_q = orientation_loss(sample);
    let mut total = weighted_term(l_x, weights.s_x) + weighted_term(l_q, weights.s_q);
    let (l_c, icsc_status) = if include_icsc {
        let (l_c, status) = icsc_loss(sample, cyl, fallback)?;
        if let Some(l) = l_c {
            total += weighted_term(l, weights.s_c);
        }
        (l_c, Some(status))
    } else {
        (None, None)
    };
    Ok(LossBreakdown {
        l_x,
        l_q,
        l_c,
        total,
        icsc_status,
    })
}

/// Minimiser of `mean_loss * exp(-s) + s`, i.e. `ln(mean_loss)`.
pub fn optimal_log_variance(mean_component_loss: f64) -> Result<f64> {
    if !(mean_component_loss > 0.0 && mean_component_loss.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "mean component loss must be positive and finite, got {mean_component_loss}"
        )));
    }
    Ok(mean_component_loss.ln())
}

/// Central-difference gradient of `f` at `at`.
pub fn finite_difference_grad<F>(f: F, at: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step {h} outside [1e-7, 1e-3]"
        )));
    }
    let mut x = at.to_vec();
    let mut grad = Vec::with_capacity(at.len());
    for k in 0..at.len() {
        x[k] = at[k] + h;
        let plus = f(&x)?;
        x[k] = at[k] - h;
        let minus = f(&x)?;
        x[k] = at[k];
        grad.push((plus - minus) / (2.0 * h));
    }
    Ok(grad)
}

/// Gradient of [`combined_loss`]'s total w.r.t. the log-variances and the
/// predicted position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossGradient {
    pub d_s_x: f64,
    pub d_s_q: f64,
    pub d_s_c: f64,
    pub d_predicted_position: [f64; 3],
}

pub fn combined_loss_gradient(
    sample: &PoseSample,
    weights: &LossWeights,
    cyl: &CylinderModel,
    include_icsc: bool,
    fallback: IcscFallback,
    h: f64,
) -> Result<LossGradient> {
    let p = sample.predicted_position;
    let at = [weights.s_x, weights.s_q, weights.s_c, p.x, p.y, p.z];
    let g = finite_difference_grad(
        |v| {
            let w = LossWeights {
                s_x: v[0],
                s_q: v[1],
                s_c: v[2],
            };
            let s = sample.with_predicted_position(Vec3::new(v[3], v[4], v[5]));
            Ok(combined_loss(&s, &w, cyl, include_icsc, fallback)?.total)
        },
        &at,
        h,
    )?;
    Ok(LossGradient {
        d_s_x: g[0],
        d_s_q: g[1],
        d_s_c: g[2],
        d_predicted_position: [g[3], g[4], g[5]],
    })
}

/// Aggregate over a batch, summed in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchLoss {
    pub n: usize,
    pub mean_total: f64,
    pub mean_l_x: f64,
    pub mean_l_q: f64,
    /// Mean over samples where the ICSC term was evaluated.
    pub mean_l_c: Option<f64>,
    pub icsc_skipped: usize,
    pub per_sample: Vec<LossBreakdown>,
}

pub fn batch_loss(
    samples: &[PoseSample],
    weights: &[LossWeights],
    cyl: &CylinderModel,
    include_icsc: bool,
    fallback: IcscFallback,
) -> Result<BatchLoss> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample batch".into()));
    }
    if weights.len() != samples.len() {
        return Err(Error::InvalidArgument(format!(
            "{} samples but {} weight records",
            samples.len(),
            weights.len()
        )));
    }
    let per_sample = samples
        .iter()
        .zip(weights)
        .map(|(s, w)| combined_loss(s, w, cyl, include_icsc, fallback))
        .collect::<Result<Vec<_>>>()?;
    let n = per_sample.len();
    let mean = |f: &dyn Fn(&LossBreakdown) -> f64| per_sample.iter().map(f).sum::<f64>() / n as f64;
    let hits: Vec<f64> = per_sample.iter().filter_map(|b| b.l_c).collect();
    let icsc_skipped = per_sample
        .iter()
        .filter(|b| b.icsc_status == Some(IcscStatus::FallbackSkipped))
        .count();
    Ok(BatchLoss {
        n,
        mean_total: mean(&|b| b.total),
        mean_l_x: mean(&|b| b.l_x),
        mean_l_q: mean(&|b| b.l_q),
        mean_l_c: (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64),
        icsc_skipped,
        per_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose_at(x: f64, y: f64, z: f64) -> CameraPose {
        CameraPose::new(Vec3::new(x, y, z), UnitQuaternion::IDENTITY)
    }

    fn sample_with_offset(d: Vec3) -> PoseSample {
        let t = CameraPose::from_yaw_tilt_deg(Vec3::new(-9.0, 3.0, 6.8), 20.0, -18.0);
        PoseSample::new(t, t.position + d, t.orientation.to_array()).unwrap()
    }

    #[test]
    fn position_loss_examples() {
        assert_eq!(position_loss(&sample_with_offset(Vec3::ZERO)), 0.0);
        let l = position_loss(&sample_with_offset(Vec3::new(0.3, 0.0, 0.0)));
        assert!((l - 0.3).abs() < 1e-12);
        let l = position_loss(&sample_with_offset(Vec3::new(0.1, 0.2, 0.2)));
        assert!((l - 0.3).abs() < 1e-12);
    }

    #[test]
    fn orientation_loss_examples() {
        let t = CameraPose::from_yaw_tilt_deg(Vec3::ZERO, 12.0, -18.0);
        let q = t.orientation.to_array();
        let s = PoseSample::new(t, Vec3::ZERO, q.map(|c| 2.0 * c)).unwrap();
        assert!(orientation_loss(&s) < 1e-15);

        let s = PoseSample::new(pose_at(0.0, 0.0, 0.0), Vec3::ZERO, [0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((orientation_loss(&s) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn orientation_loss_sees_double_cover() {
        let t = pose_at(0.0, 0.0, 0.0);
        let s = PoseSample::new(t, Vec3::ZERO, [-1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((orientation_loss(&s) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_norm_prediction_rejected() {
        let err = PoseSample::new(pose_at(0.0, 0.0, 0.0), Vec3::ZERO, [0.0; 4]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn icsc_zero_for_perfect_prediction() {
        let cyl = CylinderModel::new(3.0, 2.0).unwrap();
        let t = CameraPose::from_yaw_tilt_deg(Vec3::new(-9.0, 3.0, 6.8), 20.0, -18.0);
        let s = PoseSample::from_poses(t, t);
        let (l, status) = icsc_loss(&s, &cyl, IcscFallback::Skip).unwrap();
        assert_eq!(l, Some(0.0));
        assert_eq!(status, IcscStatus::Hit);
    }

    #[test]
    fn icsc_axial_shift() {
        let h0 = 3.0;
        let cyl = CylinderModel::new(h0, 2.0).unwrap();
        let t = pose_at(-10.0, 0.0, h0);
        let s = PoseSample::new(t, Vec3::new(-10.0, 0.5, h0), [1.0, 0.0, 0.0, 0.0]).unwrap();
        let (l, _) = icsc_loss(&s, &cyl, IcscFallback::Error).unwrap();
        // both rays hit x = -2 at the same height; only y differs
        assert!((l.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn icsc_fallback_policies() {
        let cyl = CylinderModel::new(3.0, 2.0).unwrap();
        let t = pose_at(-10.0, 0.0, 3.0);
        // predicted axis passes just above the top of the cylinder
        let s = PoseSample::new(t, Vec3::new(-10.0, 0.0, 5.0 + 1e-6), [1.0, 0.0, 0.0, 0.0]).unwrap();
        let (l, status) = icsc_loss(&s, &cyl, IcscFallback::Skip).unwrap();
        assert_eq!((l, status), (None, IcscStatus::FallbackSkipped));
        assert!(matches!(
            icsc_loss(&s, &cyl, IcscFallback::Error),
            Err(Error::NoIntersection)
        ));

        let b = combined_loss(&s, &LossWeights::default(), &cyl, true, IcscFallback::Skip).unwrap();
        assert_eq!(b.l_c, None);
        assert!((b.total - (b.l_x + b.l_q)).abs() < 1e-15);
    }

    #[test]
    fn icsc_true_miss_is_setup_error() {
        let cyl = CylinderModel::new(3.0, 2.0).unwrap();
        let t = pose_at(-10.0, 0.0, 9.0);
        let s = PoseSample::from_poses(t, t);
        assert!(matches!(
            icsc_loss(&s, &cyl, IcscFallback::Skip),
            Err(Error::InvalidSetup(_))
        ));
    }

    #[test]
    fn zero_log_variances_sum_components() {
        let cyl = CylinderModel::new(3.0, 2.0).unwrap();
        let s = sample_with_offset(Vec3::new(0.2, -0.1, 0.05));
        let b = combined_loss(&s, &LossWeights::default(), &cyl, true, IcscFallback::Error).unwrap();
        assert_eq!(b.total, b.l_x + b.l_q + b.l_c.unwrap());
        assert_eq!(b.icsc_status, Some(IcscStatus::Hit));
    }

    #[test]
    fn stationary_position_term() {
        let e = std::f64::consts::E;
        assert!((weighted_term(e, 1.0) - 2.0).abs() < 1e-15);
        // coarse grid search agrees that s = 1 is the minimiser for L = e
        let best = (0..=20_000)
            .map(|k| -10.0 + k as f64 * 1e-3)
            .min_by(|a, b| weighted_term(e, *a).total_cmp(&weighted_term(e, *b)))
            .unwrap();
        assert!((best - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn optimal_log_variance_examples() {
        assert_eq!(optimal_log_variance(1.0).unwrap(), 0.0);
        assert!((optimal_log_variance(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!(optimal_log_variance(0.0).is_err());
        assert!(optimal_log_variance(-1.0).is_err());
    }

    #[test]
    fn gradient_examples() {
        let cyl = CylinderModel::new(3.0, 2.0).unwrap();
        let s = sample_with_offset(Vec3::new(2.0, 0.0, 0.0));
        let g = combined_loss_gradient(&s, &LossWeights::default(), &cyl, false, IcscFallback::Skip, 1e-5)
            .unwrap();
        assert!((g.d_s_x + 1.0).abs() < 1e-5);
        // unit derivative of the norm along the residual
        assert!((g.d_predicted_position[0] - 1.0).abs() < 1e-5);

        let w = LossWeights::new(2f64.ln(), 0.0, 0.0).unwrap();
        let g = combined_loss_gradient(&s, &w, &cyl, false, IcscFallback::Skip, 1e-5).unwrap();
        assert!(g.d_s_x.abs() < 1e-5);
    }

    #[test]
    fn step_outside_range_rejected() {
        assert!(finite_difference_grad(|v| Ok(v[0]), &[0.0], 1e-2).is_err());
        assert!(finite_difference_grad(|v| Ok(v[0]), &[0.0], 1e-8).is_err());
    }

    #[test]
    fn batch_means() {
        let cyl = CylinderModel::new(3.0, 2.0).unwrap();
        let samples = [
            sample_with_offset(Vec3::new(0.1, 0.0, 0.0)),
            sample_with_offset(Vec3::new(0.3, 0.0, 0.0)),
        ];
        let w = [LossWeights::default(); 2];
        let b = batch_loss(&samples, &w, &cyl, true, IcscFallback::Skip).unwrap();
        assert_eq!(b.n, 2);
        assert!((b.mean_l_x - 0.2).abs() < 1e-12);
        assert!(b.mean_l_c.is_some());
        assert!(batch_loss(&samples, &w[..1], &cyl, true, IcscFallback::Skip).is_err());
    }
}
