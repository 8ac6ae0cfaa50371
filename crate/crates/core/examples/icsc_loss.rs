//! Pose losses on a small batch: the three components, their learnt
//! weighting and the closed-form optimum of each log-variance.

use ptz_inspect::geometry::{CameraPose, CylinderModel, Vec3};
use ptz_inspect::loss::{
    batch_loss, combined_loss_gradient, optimal_log_variance, IcscFallback, LossWeights, PoseSample,
};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cyl = CylinderModel::new(2.0, 2.0)?;
    let truth = CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0, 10.0, 6.75), 0.0, -18.0);
    let offsets = [(0.10, -0.05, 0.02, 0.5), (-0.20, 0.15, 0.0, -1.5), (0.05, 0.05, -0.1, 2.0)];
    let samples: Vec<PoseSample> = offsets
        .iter()
        .map(|&(dx, dy, dz, dyaw)| {
            let pred = CameraPose::from_yaw_tilt_deg(truth.position + Vec3::new(dx, dy, dz), dyaw, -18.0);
            PoseSample::from_poses(truth, pred)
        })
        .collect();

    let zero = vec![LossWeights::default(); samples.len()];
    let b = batch_loss(&samples, &zero, &cyl, true, IcscFallback::Skip)?;
    println!("s = 0: mean L_x {:.4}  L_q {:.4}  L_c {:.4}  total {:.4}", b.mean_l_x, b.mean_l_q, b.mean_l_c.unwrap_or(0.0), b.mean_total);

    let best = LossWeights::new(
        optimal_log_variance(b.mean_l_x)?,
        optimal_log_variance(b.mean_l_q)?,
        optimal_log_variance(b.mean_l_c.unwrap_or(1.0))?,
    )?;
    let tuned = batch_loss(&samples, &vec![best; samples.len()], &cyl, true, IcscFallback::Skip)?;
    println!("optimal s = ({:.3}, {:.3}, {:.3})  total {:.4}", best.s_x, best.s_q, best.s_c, tuned.mean_total);

    let g = combined_loss_gradient(&samples[0], &LossWeights::default(), &cyl, true, IcscFallback::Skip, 1e-5)?;
    println!("gradient at s = 0, first sample: {g:?}");
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn runs() {
        super::run().unwrap();
    }
}
