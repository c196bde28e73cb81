mod common;

use common::{brute_force_route, random_design, small_instance};
use odmts::{is_direct_trip, route, route_batch, Design, Mode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn router_matches_enumeration(seed in 0u64..10_000, hubs in 1usize..=4, p in 0.0f64..1.0) {
        let inst = small_instance(seed, hubs, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_design(&inst, &mut rng, p);
        for t in inst.trips() {
            let r = route(&inst, t, &z).unwrap();
            let o = brute_force_route(&inst, &z, t);
            prop_assert_eq!(r.g, o.g);
            prop_assert_eq!(r.f, o.f);
            prop_assert_eq!(&r.legs, &o.legs);
        }
    }

    #[test]
    fn bus_legs_use_open_arcs_only(seed in 0u64..10_000, p in 0.0f64..1.0) {
        let inst = small_instance(seed, 3, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_design(&inst, &mut rng, p);
        for t in inst.trips() {
            let r = route(&inst, t, &z).unwrap();
            for a in r.bus_arcs(&inst) {
                prop_assert!(z.contains(a));
            }
            prop_assert_eq!(r.stops().first().copied(), Some(t.origin));
            prop_assert_eq!(r.stops().last().copied(), Some(t.destination));
        }
    }
}

#[test]
fn batch_agrees_with_single_routes() {
    let inst = small_instance(7, 3, 9);
    let z = Design::full(&inst);
    let trips: Vec<_> = inst.trips().iter().collect();
    let batch = route_batch(&inst, &trips, &z).unwrap();
    for (t, r) in trips.iter().zip(batch) {
        assert_eq!(route(&inst, t, &z).unwrap(), r);
    }
}

#[test]
fn hub_to_hub_shuttles_only_for_own_trip() {
    for seed in 0..40 {
        let inst = small_instance(seed, 3, 9);
        if inst.params().shuttle_between_hubs {
            continue;
        }
        for t in inst.trips() {
            let r = route(&inst, t, &Design::empty()).unwrap();
            for l in r.legs.iter().filter(|l| l.mode == Mode::Shuttle) {
                let both = inst.is_hub(l.from) && inst.is_hub(l.to);
                assert!(!both || (l.from, l.to) == (t.origin, t.destination));
            }
        }
    }
}

#[test]
fn empty_design_routes_are_direct() {
    for seed in 0..20 {
        let inst = small_instance(seed, 2, 7);
        for t in inst.trips() {
            let r = route(&inst, t, &Design::empty()).unwrap();
            assert!(r.is_direct_shuttle() || !is_direct_trip(t, &inst));
        }
    }
}
