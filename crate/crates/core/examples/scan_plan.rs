//! Scan planning: select the shots that tile a section at the requested
//! overlap, then show how the shot count responds to the overlap factor.

use std::path::PathBuf;

use ptz_inspect::planner::ScanConfig;
use ptz_inspect::synthetic::CylinderFixture;

fn run(out: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    let fixture = CylinderFixture::default();
    let scene = fixture.scene(ScanConfig::default())?;
    let plan = scene.plan(&fixture.camera)?;
    println!("{} shots at mu = {}", plan.len(), scene.cfg.mu);
    for p in plan.points().take(5) {
        println!(
            "  ({:>3},{:>3}) pan {:+8.3} tilt {:+8.3} -> ({:.3}, {:.3}, {:.3})",
            p.i, p.j, p.pan_deg, p.tilt_deg, p.label.x, p.label.y, p.label.z
        );
    }
    println!("  ...");
    for w in &plan.warnings {
        println!("warning: {w}");
    }
    for mu in [0.0, 0.15, 0.3, 0.5] {
        let s = ptz_inspect::simulator::ScanScene {
            cfg: ScanConfig::new(6.15, 3.46, mu)?,
            ..scene.clone()
        };
        println!("mu {mu:.2}: {} shots", s.plan(&fixture.camera)?.len());
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        plan.write_csv(std::fs::File::create(dir.join("plan.csv"))?)?;
        std::fs::write(dir.join("plan.json"), plan.to_json()?)?;
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
