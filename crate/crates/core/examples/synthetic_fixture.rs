//! Write the synthetic fuselage scene as the files the command line reads:
//! a point cloud, a sections file, a deployment boundary and a pose.

use std::path::{Path, PathBuf};

use ptz_inspect::config::SectionsConfig;
use ptz_inspect::records::write_poses;
use ptz_inspect::surface::CloudFormat;
use ptz_inspect::synthetic::CylinderFixture;

fn run(dir: &Path, spacing: f64) -> Result<(), Box<dyn std::error::Error>> {
    let fixture = CylinderFixture {
        cloud_spacing: spacing,
        ..Default::default()
    };
    std::fs::create_dir_all(dir)?;
    let cloud = fixture.cloud();
    cloud.write(&dir.join("cloud.xyz"), CloudFormat::XyzAscii)?;
    let sections = SectionsConfig {
        cylinder: Some(fixture.cylinder),
        sections: vec![fixture.section_spec()],
    };
    std::fs::write(dir.join("sections.toml"), sections.to_toml())?;
    std::fs::write(dir.join("boundary.toml"), fixture.boundary().to_toml())?;
    write_poses(std::fs::File::create(dir.join("pose.csv"))?, &[fixture.camera])?;
    println!("{} points and scene files written to {}", cloud.len(), dir.display());
    Ok(())
}

fn main() {
    let mut args = std::env::args_os().skip(1);
    let dir = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("synthetic_cylinder"));
    let spacing = args.next().and_then(|s| s.to_str()?.parse().ok()).unwrap_or(0.1);
    if let Err(e) = run(&dir, spacing) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn written_files_load_back() {
        let dir = tempfile::tempdir().unwrap();
        super::run(dir.path(), 0.2).unwrap();
        let cfg = ptz_inspect::config::SectionsConfig::load(&dir.path().join("sections.toml")).unwrap();
        assert!(cfg.cylinder.is_some());
        let poses = ptz_inspect::records::read_poses(&dir.path().join("pose.csv")).unwrap();
        assert_eq!(poses.len(), 1);
        ptz_inspect::randomizer::DeploymentBoundary::load(&dir.path().join("boundary.toml")).unwrap();
    }
}
