mod common;

use dv2f::controller::neighbors_of;
use dv2f::{compute_scene_controls, AgentId, Direction, Scene};
use proptest::prelude::*;

use common::{params, scene};

fn forward(sc: &Scene) -> Vec<Direction> {
    vec![Direction::Forward; sc.vehicles.len()]
}

proptest! {
    #[test]
    fn commands_respect_actuator_limits(sc in scene(8, 4)) {
        let p = params();
        for c in compute_scene_controls(&sc, &forward(&sc), &p).commands {
            prop_assert!(c.pedal.abs() <= p.pedal_max);
            prop_assert!(c.steer.abs() <= p.steer_max);
        }
    }

    #[test]
    fn removing_a_non_neighbor_changes_nothing(sc in scene(8, 4), pick in any::<prop::sample::Index>()) {
        let p = params();
        prop_assume!(sc.vehicles.len() >= 2);
        let j = pick.index(sc.vehicles.len());
        let full = compute_scene_controls(&sc, &forward(&sc), &p);
        let mut reduced = sc.clone();
        reduced.vehicles.remove(j);
        let out = compute_scene_controls(&reduced, &forward(&reduced), &p);
        for (k, i) in (0..sc.vehicles.len()).filter(|&i| i != j).enumerate() {
            if !neighbors_of(&sc, i, &p).contains(&AgentId::Vehicle(j)) {
                prop_assert_eq!(out.commands[k], full.commands[i]);
            }
        }
    }

    #[test]
    fn vehicle_order_does_not_matter(sc in scene(8, 4), seed in any::<u64>()) {
        let p = params();
        let n = sc.vehicles.len();
        // Deterministic shuffle from the seed.
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed | 1;
        for i in (1..n).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            perm.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let shuffled = Scene::new(perm.iter().map(|&i| sc.vehicles[i]).collect(), sc.obstacles.clone());
        let a = compute_scene_controls(&sc, &forward(&sc), &p);
        let b = compute_scene_controls(&shuffled, &forward(&shuffled), &p);
        for (k, &i) in perm.iter().enumerate() {
            prop_assert!((a.commands[i].pedal - b.commands[k].pedal).abs() < 1e-9);
            prop_assert!((a.commands[i].steer - b.commands[k].steer).abs() < 1e-9);
            prop_assert!((a.diagnostics[i].u_hat - b.diagnostics[k].u_hat).norm() < 1e-9);
        }
    }

    #[test]
    fn reference_speeds_stay_within_limit(sc in scene(8, 4)) {
        let p = params();
        for d in compute_scene_controls(&sc, &forward(&sc), &p).diagnostics {
            prop_assert!(d.v_hat.abs() <= p.v_d);
            prop_assert!(d.v_real.abs() <= p.v_d + p.pedal_max * p.dt);
        }
    }
}
