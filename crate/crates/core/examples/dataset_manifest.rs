//! Domain-randomisation manifest: seeded camera setups and scene appearance
//! for every image of a train/val/test split.

use std::path::PathBuf;

use ptz_inspect::pantilt::Quadrant;
use ptz_inspect::randomizer::{generate_manifest, validate_deployment, DeploymentBoundary, Split, SplitSizes};

fn run(out: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    let boundary = DeploymentBoundary::default_for(Quadrant::new(3)?);
    let sizes = SplitSizes { train: 40, val: 7, test: 3 };
    let manifest = generate_manifest(&boundary, sizes, 7, Some(6.15))?;
    let again = generate_manifest(&boundary, sizes, 7, Some(6.15))?;
    assert_eq!(manifest.to_json()?, again.to_json()?);

    println!(
        "{} train, {} val, {} test",
        manifest.count(Split::Train),
        manifest.count(Split::Val),
        manifest.count(Split::Test)
    );
    let inside = manifest
        .samples
        .iter()
        .filter(|e| validate_deployment(&e.sample.pose(), &boundary).pass)
        .count();
    println!("{inside}/{} poses inside the deployment boundary", manifest.samples.len());
    let s = &manifest.samples[0].sample;
    println!(
        "first: ({:.3}, {:.3}, {:.3}) yaw {:.2} pan {:.2} tilt {:.2}",
        s.position.x, s.position.y, s.position.z, s.yaw_deg, s.pan_deg, s.tilt_deg
    );
    for a in &s.appearance {
        println!("  {:<10} ambient {:.2?} scale {:.2?}", a.object, a.ambient_rgb, a.texture_scale);
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("manifest.json"), manifest.to_json()?)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(std::env::args_os().nth(1).map(PathBuf::from)) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
