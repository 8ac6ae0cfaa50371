//! Surface grid to pan-tilt array for a quadrant-3 camera, and back again.

use ptz_inspect::geometry::wrap_deg;
use ptz_inspect::pantilt::{compute_alpha, grid_to_pantilt, home_azimuth_deg, pantilt_direction, QuadrantSetup};
use ptz_inspect::planner::ScanConfig;
use ptz_inspect::synthetic::CylinderFixture;

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let fixture = CylinderFixture::default();
    let scene = fixture.scene(ScanConfig::default())?;
    let grid = &scene.sections[0].grid;
    let setup = QuadrantSetup {
        quadrant: fixture.quadrant(),
        estimated_yaw_deg: fixture.camera.yaw_deg(),
        camera_position: fixture.camera.position,
    };
    let alpha = compute_alpha(&setup);
    let home = home_azimuth_deg(&setup);
    println!(
        "quadrant {} beta {:+} alpha {:+.3} home azimuth {:.3}",
        setup.quadrant.number(),
        setup.quadrant.beta_deg(),
        alpha.alpha_deg,
        home
    );
    if let Some(w) = &alpha.warning {
        println!("warning: {w}");
    }

    let u = grid_to_pantilt(grid, &setup)?;
    let (mut pmin, mut pmax, mut tmin, mut tmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    let mut worst = 0.0f64;
    for (i, j, pt) in u.present() {
        pmin = pmin.min(pt.pan_deg);
        pmax = pmax.max(pt.pan_deg);
        tmin = tmin.min(pt.tilt_deg);
        tmax = tmax.max(pt.tilt_deg);
        // distance from the cell to the ray rebuilt from its pan and tilt
        let p = grid.cell(i, j)?.expect("present");
        let d = p - setup.camera_position;
        let dir = pantilt_direction(pt, home);
        worst = worst.max((d - dir * d.dot(dir)).norm());
    }
    println!("{} x {} array, {} cells", u.rows(), u.cols(), u.present_count());
    println!("pan  {:+.2} .. {:+.2} deg", wrap_deg(pmin), wrap_deg(pmax));
    println!("tilt {:+.2} .. {:+.2} deg", tmin, tmax);
    println!("worst round-trip miss {worst:.2e} m");
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
