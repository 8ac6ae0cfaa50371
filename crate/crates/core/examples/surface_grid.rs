//! Point cloud to per-section surface grid: sample a half cylinder, cut the
//! fuselage box out of it and interpolate onto the 5 cm lattice.

use std::path::PathBuf;

use ptz_inspect::synthetic::CylinderFixture;
use ptz_inspect::surface::{interpolate_section, section_points};

fn run(out: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    let fixture = CylinderFixture {
        cloud_spacing: 0.05,
        ..Default::default()
    };
    let cloud = fixture.cloud();
    let spec = fixture.section_spec();
    let sub = section_points(&cloud, &spec);
    let grid = interpolate_section(&sub, &spec)?;
    let worst = grid
        .present()
        .map(|(_, _, p)| fixture.cylinder.residual(p).abs() / (2.0 * fixture.cylinder.r0))
        .fold(0.0, f64::max);
    println!("{} points, {} in section '{}'", cloud.len(), sub.len(), spec.name);
    println!(
        "grid {} x {} at {} m, {} cells present, worst radial error {:.2e} m",
        grid.rows(),
        grid.cols(),
        grid.resolution(),
        grid.present_count(),
        worst
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        let path = dir.join("grid.csv");
        let file = std::fs::File::create(&path)?;
        grid.write_csv(file)?;
        println!("wrote {}", path.display());
    }
    Ok(())
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
        assert!(dir.path().join("grid.csv").exists());
    }
}
