//! Monte Carlo propagation of pose-estimation error into image labels.

use ptz_inspect::planner::ScanConfig;
use ptz_inspect::simulator::propagate_pose_error;
use ptz_inspect::synthetic::CylinderFixture;

fn run(draws: usize) -> Result<(), Box<dyn std::error::Error>> {
    let fixture = CylinderFixture::default();
    let scene = fixture.scene(ScanConfig::default())?;
    for (sp, sy) in [(0.0, 0.0), (0.1, 1.0), (0.24, 2.0)] {
        let r = propagate_pose_error(&scene, &fixture.camera, sp, sy, draws, 42)?;
        match &r.pooled_labelling_error_m {
            Some(s) => println!(
                "sigma {sp:.2} m / {sy:.1} deg: {} labels, median {:.3} m, rmse {:.3} m, max {:.3} m",
                s.n, s.median, s.rmse, s.max
            ),
            None => println!("sigma {sp:.2} m / {sy:.1} deg: no labels"),
        }
    }
    Ok(())
}

fn main() {
    let draws = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    if let Err(e) = run(draws) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
