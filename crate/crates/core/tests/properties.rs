use std::f64::consts::TAU;

use proptest::prelude::*;
use swarmfire::firemodel::sector_parameter;
use swarmfire::vehicle::reference_velocity;
use swarmfire::{Fire, Point, ScenarioConfig, Uav};

fn fire_axes() -> impl Strategy<Value = (f64, f64)> {
    (1.0f64..2000.0, 0.05f64..=1.0).prop_map(|(a, ratio)| (a, (a * ratio).max(0.5)))
}

proptest! {
    #[test]
    fn axis_gap_is_preserved((a, b) in fire_axes(), r in 0.0f64..1.0, n in 0usize..12, steps in 1usize..200) {
        let mut fire = Fire::new(0, Point::zero(), a, b, r);
        let gap = a - b;
        for _ in 0..steps {
            fire.apply_quench(n, 150.0, 0.5);
            if !fire.is_active() {
                break;
            }
            prop_assert!((fire.a - fire.b - gap).abs() < 1e-6 * a.max(1.0));
        }
    }

    #[test]
    fn growth_keeps_gap((a, b) in fire_axes(), r in 0.0f64..1.0, steps in 1usize..100) {
        let mut fire = Fire::new(0, Point::zero(), a, b, r);
        for _ in 0..steps {
            fire.grow(0.5);
        }
        prop_assert!((fire.a - fire.b - (a - b)).abs() < 1e-9 * a);
    }

    #[test]
    fn quench_never_grows_area_with_enough_uavs((a, b) in fire_axes(), n in 1usize..8) {
        let mut fire = Fire::new(0, Point::zero(), a, b, 0.0);
        let before = fire.area();
        let removed = fire.apply_quench(n, 150.0, 0.5);
        prop_assert!(removed >= 0.0);
        prop_assert!(fire.active_area() <= before);
    }

    #[test]
    fn distance_zero_iff_inside((a, b) in fire_axes(), x in -4000.0f64..4000.0, y in -4000.0f64..4000.0) {
        let fire = Fire::new(0, Point::zero(), a, b, 0.0);
        let p = Point::new(x, y);
        let d = fire.distance_to_front(p);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d == 0.0, fire.contains(p));
    }

    #[test]
    fn nearest_point_is_on_front_and_closest((a, b) in fire_axes(), h in 0.0f64..TAU, scale in 1.01f64..5.0) {
        let fire = Fire::new(0, Point::new(10.0, -20.0), a, b, 0.0);
        let p = fire.center + Point::new(a * scale * h.cos(), b * scale * h.sin());
        let q = fire.nearest_front_point(p);
        let u = (q - fire.center).x / a;
        let v = (q - fire.center).y / b;
        prop_assert!((u * u + v * v - 1.0).abs() < 1e-8);
        // No sampled boundary point is closer.
        let d = p.distance(q);
        for k in 0..720 {
            let t = TAU * k as f64 / 720.0;
            prop_assert!(p.distance(fire.point_on_front(t)) >= d - 1e-6 * a);
        }
    }

    #[test]
    fn sector_parameter_is_monotone((a, b) in fire_axes(), g in 0.0f64..TAU, dg in 1e-6f64..1.0) {
        let hi = (g + dg).min(TAU);
        prop_assert!(sector_parameter(a, b, hi) >= sector_parameter(a, b, g));
    }

    #[test]
    fn reference_speed_bound(px in -1e4f64..1e4, py in -1e4f64..1e4, wx in -1e4f64..1e4, wy in -1e4f64..1e4, v0 in 1.0f64..50.0, tau in 0.1f64..10.0) {
        let v = reference_velocity(Point::new(px, py), Point::new(wx, wy), Point::zero(), v0, tau);
        prop_assert!(v.norm() < v0 + 1e-9);
    }

    #[test]
    fn exact_step_matches_fine_euler(vx in -30.0f64..30.0, vy in -30.0f64..30.0, rx in -30.0f64..30.0, ry in -30.0f64..30.0, pole in 0.2f64..3.0) {
        // 60 s with the reference held per 0.5 s step, against explicit Euler at dt/10.
        let reference = Point::new(rx, ry);
        let mut exact = Uav::at_rest(0, 0, Point::zero());
        exact.velocity = Point::new(vx, vy);
        let mut euler = exact.clone();
        for _ in 0..120 {
            exact.step(reference, pole, 0.5);
            for _ in 0..10 {
                let dv = (reference - euler.velocity) * pole;
                euler.position += euler.velocity * 0.05;
                euler.velocity += dv * 0.05;
            }
        }
        let travelled = exact.position.norm().max(1.0);
        prop_assert!(exact.position.distance(euler.position) / travelled < 1e-3);
        prop_assert!(exact.velocity.distance(euler.velocity) < 1e-3 * (reference.norm() + 1.0));
    }

    #[test]
    fn config_round_trip(seed in any::<u64>(), w in 1000.0f64..20000.0, r in 50.0f64..800.0, sizes in prop::collection::vec(1usize..6, 1..8)) {
        let mut cfg = ScenarioConfig::default();
        cfg.engine.base_seed = seed;
        cfg.search_area.width = w.max(9100.0);
        cfg.swarms.radius = r;
        cfg.swarms.sizes = sizes;
        cfg.swarms.total_uavs = None;
        let back = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
