//! Property tests over randomly generated inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptz_inspect::geometry::{wrap_deg, CameraPose, Vec3};
use ptz_inspect::pantilt::{pantilt_direction, point_to_pantilt, PanTilt, PanTiltGrid, Quadrant};
use ptz_inspect::planner::{select_cells, ScanConfig};
use ptz_inspect::randomizer::{sample_setup, validate_deployment, DeploymentBoundary};
use ptz_inspect::synthetic::CylinderFixture;

/// Monotone grid: pans increase along each row, tilts decrease down the rows.
fn monotone_grid(pan_steps: &[f64], tilt_steps: &[f64]) -> PanTiltGrid {
    let mut tilt = 0.0;
    let mut rows = Vec::new();
    for (i, dt) in tilt_steps.iter().enumerate() {
        if i > 0 {
            tilt -= dt;
        }
        let mut pan = -30.0;
        let mut row = Vec::new();
        for (j, dp) in pan_steps.iter().enumerate() {
            if j > 0 {
                pan += dp;
            }
            row.push(Some(PanTilt::new(pan, tilt)));
        }
        rows.push(row);
    }
    PanTiltGrid::from_rows(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn selected_rows_and_columns_respect_spacing(
        pan_steps in prop::collection::vec(0.01f64..1.5, 2..60),
        tilt_steps in prop::collection::vec(0.01f64..1.0, 2..40),
        mu in 0.0f64..0.6,
    ) {
        let cfg = ScanConfig::new(6.15, 3.46, mu).unwrap();
        let u = monotone_grid(&pan_steps, &tilt_steps);
        let sel = select_cells(&u, &cfg, false);
        let lambda = cfg.lambda();
        let pan_step = pan_steps[1..].iter().cloned().fold(0.0, f64::max);
        let tilt_step = tilt_steps[1..].iter().cloned().fold(0.0, f64::max);

        let mut rows: Vec<usize> = sel.iter().map(|&(i, _)| i).collect();
        rows.dedup();
        prop_assert_eq!(rows[0], 0);
        for (k, w) in rows.windows(2).enumerate() {
            let gap = u.get(w[0], 0).unwrap().tilt_deg - u.get(w[1], 0).unwrap().tilt_deg;
            let closing = k + 2 == rows.len() && w[1] == u.rows() - 1 && gap > cfg.vfov_deg / 2.0;
            prop_assert!(closing || (gap >= lambda * cfg.vfov_deg - 1e-9 && gap <= lambda * cfg.vfov_deg + tilt_step + 1e-9));
        }
        for &i in &rows {
            let cols: Vec<usize> = sel.iter().filter(|c| c.0 == i).map(|c| c.1).collect();
            prop_assert_eq!(cols[0], 0);
            for (k, w) in cols.windows(2).enumerate() {
                let gap = u.get(i, w[1]).unwrap().pan_deg - u.get(i, w[0]).unwrap().pan_deg;
                let closing = k + 2 == cols.len() && w[1] == u.cols() - 1 && gap > cfg.hfov_deg / 2.0;
                prop_assert!(closing || (gap >= lambda * cfg.hfov_deg - 1e-9 && gap <= lambda * cfg.hfov_deg + pan_step + 1e-9));
            }
        }
    }

    #[test]
    fn transposed_planning_is_the_mirror_image(
        pan_steps in prop::collection::vec(0.01f64..1.5, 2..30),
        tilt_steps in prop::collection::vec(0.01f64..1.0, 2..30),
    ) {
        let cfg = ScanConfig::default();
        let u = monotone_grid(&pan_steps, &tilt_steps);
        let mut direct: Vec<(usize, usize)> = select_cells(&u, &cfg, false);
        let swapped_cfg = ScanConfig::new(cfg.vfov_deg, cfg.hfov_deg, cfg.mu).unwrap();
        // swapping exchanges the values in place, so indices carry over unchanged
        let mut mirrored = select_cells(&u.swapped(), &swapped_cfg, true);
        direct.sort();
        mirrored.sort();
        prop_assert_eq!(direct, mirrored);
    }

    #[test]
    fn pantilt_reaims_at_the_point(
        p in (-5.0f64..5.0, -30.0f64..30.0, 0.0f64..8.0),
        c in (-15.0f64..15.0, -30.0f64..30.0, 3.0f64..10.0),
        home in -180.0f64..180.0,
    ) {
        let p = Vec3::new(p.0, p.1, p.2);
        let c = Vec3::new(c.0, c.1, c.2);
        prop_assume!(p.distance(c) > 0.1);
        let pt = point_to_pantilt(p, c, home).unwrap();
        prop_assert!(pt.pan_deg > -180.0 && pt.pan_deg <= 180.0);
        let dir = pantilt_direction(pt, home);
        let d = p - c;
        prop_assert!((d - dir * d.dot(dir)).norm() < 1e-9);
        prop_assert!(d.dot(dir) > 0.0);
    }

    #[test]
    fn wrap_stays_in_half_open_range(a in -1e4f64..1e4) {
        let w = wrap_deg(a);
        prop_assert!(w > -180.0 && w <= 180.0);
        let turns = (a - w) / 360.0;
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn randomised_setups_stay_inside_the_boundary(seed in any::<u64>(), q in 1u8..=4) {
        let boundary = DeploymentBoundary::default_for(Quadrant::new(q).unwrap());
        let window = boundary.pan_window();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let s = sample_setup(&boundary, &mut rng);
            prop_assert!(validate_deployment(&s.pose(), &boundary).pass);
            prop_assert!(window.contains(s.pan_deg));
            prop_assert!(boundary.tilt_deg.contains(s.tilt_deg));
            prop_assert!(s.appearance.len() == 3);
        }
    }
}

fn overlap_sweep() -> Vec<(Vec3, Vec<(f64, usize, f64)>)> {
    let fixture = CylinderFixture::default();
    let base = fixture.scene(ScanConfig::default()).unwrap();
    let b = fixture.boundary();
    let mut positions = vec![fixture.camera.position];
    for (x, y) in [(b.x.lo(), b.y.lo()), (b.x.hi(), b.y.hi()), (b.x.mid(), b.y.mid())] {
        positions.push(Vec3::new(x, y, 6.75));
    }
    positions
        .into_iter()
        .map(|p| {
            let pose = CameraPose::from_yaw_tilt_deg(p, 20.0, -18.0);
            let runs = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
                .into_iter()
                .map(|mu| {
                    let scene = ptz_inspect::simulator::ScanScene {
                        cfg: ScanConfig::new(6.15, 3.46, mu).unwrap(),
                        ..base.clone()
                    };
                    let r = scene.run(&pose, &pose).unwrap();
                    (mu, r.image_count, r.coverage)
                })
                .collect();
            (p, runs)
        })
        .collect()
}

#[test]
fn more_overlap_never_means_fewer_shots() {
    for (p, runs) in overlap_sweep() {
        for w in runs.windows(2) {
            assert!(w[1].1 >= w[0].1, "at {p:?}: mu {} gives {} shots after {}", w[1].0, w[1].1, w[0].1);
        }
    }
}

// Rows are spaced by their median tilt, so which rows get picked shifts with
// mu and gaps can open toward the row ends where tilt departs from the
// median. Run with --ignored to see the counterexample.
#[test]
#[ignore = "fails: coverage is not monotone in mu under median-tilt row spacing"]
fn more_overlap_never_means_less_coverage() {
    for (p, runs) in overlap_sweep() {
        for w in runs.windows(2) {
            assert!(w[1].2 >= w[0].2, "at {p:?}: mu {} covers {:.4} after {:.4}", w[1].0, w[1].2, w[0].2);
        }
    }
}
