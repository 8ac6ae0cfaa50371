//! Scoring pose estimates: median and RMS position and orientation error of
//! a noisy oracle against ground truth.

use ptz_inspect::geometry::{CameraPose, Vec3};
use ptz_inspect::pose_eval::{evaluate, noisy_oracle};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let truths: Vec<CameraPose> = (0..200)
        .map(|k| {
            let t = k as f64 / 200.0;
            CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0 + t, 5.0 + 2.0 * t, 6.5 + 0.5 * t), 10.0 * t - 5.0, -18.0)
        })
        .collect();
    let estimates = truths
        .iter()
        .enumerate()
        .map(|(k, gt)| noisy_oracle(gt, 0.24, 2.0, k as u64))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = evaluate(&estimates, &truths)?;
    println!("{} poses", stats.n);
    println!("position    median {:.3} m   rmse {:.3} m", stats.median_position_m, stats.rmse_position_m);
    println!("orientation median {:.3} deg rmse {:.3} deg", stats.median_orientation_deg, stats.rmse_orientation_deg);
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
