//! Optical axis of a camera meeting the cylindrical fuselage model.

use ptz_inspect::geometry::{intersect_cylinder, view_ray, CameraPose, CylinderModel, Ray, Vec3};

fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cyl = CylinderModel::new(2.0, 2.0)?;
    let pose = CameraPose::from_yaw_tilt_deg(Vec3::new(-10.0, 10.0, 6.75), 0.0, -18.0);
    let ray = view_ray(&pose);
    let hit = intersect_cylinder(&ray, &cyl)?;
    println!("camera {:?}", pose.position);
    println!("axis   {:?}", ray.direction());
    println!("hit    ({:.4}, {:.4}, {:.4})  residual {:.2e}", hit.x, hit.y, hit.z, cyl.residual(hit));

    // a ray passing above the fuselage has no intersection
    let miss = Ray::new(Vec3::new(-10.0, 0.0, 8.0), Vec3::new(1.0, 0.0, 0.0))?;
    match intersect_cylinder(&miss, &cyl) {
        Ok(p) => println!("unexpected hit {p:?}"),
        Err(e) => println!("miss   {e}"),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
