//! End-to-end virtual scan: plan from the estimated pose, execute with the
//! true pose, and score every image label against the surface actually hit.

use std::path::PathBuf;

use ptz_inspect::geometry::{CameraPose, Vec3};
use ptz_inspect::planner::ScanConfig;
use ptz_inspect::synthetic::CylinderFixture;

fn run(out: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    let fixture = CylinderFixture::default();
    let scene = fixture.scene(ScanConfig::default())?;
    let truth = fixture.camera;

    let exact = scene.run(&truth, &truth)?;
    print_report("exact pose", &exact);

    // the estimate is 0.2 m off along the fuselage and 1.5 deg off in yaw
    let estimate = CameraPose::from_yaw_tilt_deg(truth.position + Vec3::new(0.0, 0.2, 0.0), truth.yaw_deg() + 1.5, -18.0);
    let noisy = scene.run(&truth, &estimate)?;
    print_report("perturbed pose", &noisy);

    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("report.json"), noisy.to_json()?)?;
        noisy.write_images_csv(std::fs::File::create(dir.join("images.csv"))?)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn print_report(title: &str, r: &ptz_inspect::simulator::SimulationReport) {
    println!("{title}:");
    println!("  images {}  missed {}  coverage {:.2}%", r.image_count, r.missed_shots, 100.0 * r.coverage);
    if let Some(s) = &r.labelling_error_m {
        println!("  labelling error median {:.4} m  max {:.4} m", s.median, s.max);
    }
}

fn main() {
    if let Err(e) = run(std::env::args_os().nth(1).map(PathBuf::from)) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn runs() {
        let dir = tempfile::tempdir().unwrap();
        super::run(Some(dir.path().to_path_buf())).unwrap();
        assert!(dir.path().join("images.csv").exists());
    }
}
