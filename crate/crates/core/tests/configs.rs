//! Every bundled configuration file loads.

use std::path::{Path, PathBuf};

use ptz_inspect::config::SectionsConfig;
use ptz_inspect::pantilt::Quadrant;
use ptz_inspect::randomizer::DeploymentBoundary;
use ptz_inspect::records::read_poses;
use ptz_inspect::surface::{load_point_cloud, CloudFormat, SectionKind};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

#[test]
fn quadrant_boundaries_match_the_built_in_defaults() {
    for q in 1..=4u8 {
        let b = DeploymentBoundary::load(&configs().join(format!("boundaries/quadrant{q}.toml"))).unwrap();
        assert_eq!(b, DeploymentBoundary::default_for(Quadrant::new(q).unwrap()));
    }
}

#[test]
fn surrogate_sections_cover_every_kind() {
    let cfg = SectionsConfig::load(&configs().join("a320_surrogate/sections.toml")).unwrap();
    assert!(cfg.cylinder.is_none());
    for kind in [SectionKind::Fuselage, SectionKind::Tail, SectionKind::Stabiliser, SectionKind::Wing] {
        assert!(cfg.sections.iter().any(|s| s.kind == kind), "{kind:?} missing");
    }
}

#[test]
fn synthetic_scene_files_are_consistent() {
    let dir = configs().join("synthetic_cylinder");
    let cfg = SectionsConfig::load(&dir.join("sections.toml")).unwrap();
    let cyl = cfg.cylinder.expect("analytic fuselage");
    let cloud = load_point_cloud(&dir.join("cloud.xyz"), CloudFormat::XyzAscii).unwrap();
    assert!(cloud.points.iter().all(|p| cyl.residual(*p).abs() < 1e-6));
    assert!(cloud.points.iter().all(|p| cfg.sections[0].bounds.contains(*p)));
    let pose = read_poses(&dir.join("pose.csv")).unwrap()[0];
    let boundary = DeploymentBoundary::load(&dir.join("boundary.toml")).unwrap();
    assert!(ptz_inspect::randomizer::validate_deployment(&pose, &boundary).pass);
}
