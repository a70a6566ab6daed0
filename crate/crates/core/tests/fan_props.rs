use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use wporb::fan::{normalize_weights, Cone, Fan};
use wporb::ratlat::{gcd_u64, Rat};
use wporb::ringops::phase;

fn weights() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=12, 2..=5)
}

/// Weight vectors with every cone subset, as a bitmask over the rays.
fn fan_and_cone() -> impl Strategy<Value = (Vec<u64>, u32)> {
    weights().prop_flat_map(|q| {
        let n = q.len() as u32;
        (Just(q), 0..(1u32 << n) - 1)
    })
}

fn cone_of(fan: &Fan, mask: u32) -> Cone {
    let rays: Vec<usize> = (0..fan.num_rays()).filter(|i| mask >> i & 1 == 1).collect();
    fan.cone(&rays).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn normalization_is_idempotent(q in weights()) {
        let w = normalize_weights(&q).unwrap();
        prop_assert_eq!(w.q().len(), q.len());
        prop_assert_eq!(gcd_u64(w.q()), 1);
        let again = normalize_weights(w.q()).unwrap();
        prop_assert_eq!(again.q(), w.q());
    }

    #[test]
    fn weighted_rays_sum_to_zero(q in weights()) {
        let fan = Fan::from_weights(&q).unwrap();
        for c in 0..fan.n() {
            let s: BigInt = (0..fan.num_rays())
                .map(|i| BigInt::from(fan.q(i)) * &fan.rays()[i][c])
                .sum();
            prop_assert!(s.is_zero());
        }
        prop_assert_eq!(fan.c0().det().unwrap(), BigInt::from(fan.q(0)));
    }

    #[test]
    fn maximal_cone_groups_have_order_q(q in weights()) {
        let fan = Fan::from_weights(&q).unwrap();
        for k in 0..fan.num_rays() {
            let sigma = fan.maximal_cone(k);
            prop_assert_eq!(fan.local_group_order(&sigma), fan.q(k));
            let det = fan.cone_matrix(&sigma).det().unwrap();
            prop_assert_eq!(det.magnitude().clone(), BigInt::from(fan.q(k)).magnitude().clone());
            prop_assert_eq!(fan.enumerate_group_elements(&sigma).unwrap().len() as u64, fan.q(k));
        }
    }

    /// G_tau is cyclic of order d = gcd of the weights off tau, generated by
    /// the phase 1/d with a_k = frac(q_k / d).
    #[test]
    fn group_elements_match_the_phase_description((q, mask) in fan_and_cone()) {
        let fan = Fan::from_weights(&q).unwrap();
        let tau = cone_of(&fan, mask);
        let d = fan.local_group_order(&tau);
        let rest: Vec<u64> = tau.complement(fan.num_rays()).iter().map(|&i| fan.q(i)).collect();
        prop_assert_eq!(d, gcd_u64(&rest));
        let got: BTreeSet<Vec<Rat>> = fan
            .enumerate_group_elements(&tau)
            .unwrap()
            .iter()
            .map(|g| g.a_full().to_vec())
            .collect();
        let want: BTreeSet<Vec<Rat>> = (0..d)
            .map(|m| {
                (0..fan.num_rays())
                    .map(|k| Rat::frac_of((m * fan.q(k)) as i64, d as i64).fract())
                    .collect()
            })
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn local_groups_are_abelian_groups((q, mask) in fan_and_cone()) {
        let fan = Fan::from_weights(&q).unwrap();
        let tau = cone_of(&fan, mask);
        let elems = fan.enumerate_group_elements(&tau).unwrap();
        let id = fan.identity();
        let keys: BTreeSet<String> = elems.iter().map(|g| g.key()).collect();
        for g in &elems {
            prop_assert!(g.carrier().is_subset(&tau));
            prop_assert_eq!(fan.multiply(g, &id).unwrap().key(), g.key());
            let inv = fan.inverse(g);
            prop_assert!(keys.contains(&inv.key()));
            prop_assert!(fan.multiply(g, &inv).unwrap().is_identity());
            let order = fan.local_group_order(&tau);
            prop_assert!(fan.power(g, order).is_identity());
            for h in elems.iter().take(6) {
                let gh = fan.multiply(g, h).unwrap();
                prop_assert!(keys.contains(&gh.key()));
                prop_assert_eq!(&gh.key(), &fan.multiply(h, g).unwrap().key());
                for k in elems.iter().take(4) {
                    let left = fan.multiply(&gh, k).unwrap();
                    let right = fan.multiply(g, &fan.multiply(h, k).unwrap()).unwrap();
                    prop_assert_eq!(left.key(), right.key());
                }
            }
        }
    }

    #[test]
    fn phase_determines_coefficients((q, mask) in fan_and_cone()) {
        let fan = Fan::from_weights(&q).unwrap();
        let tau = cone_of(&fan, mask);
        for g in fan.enumerate_group_elements(&tau).unwrap() {
            let c = phase(&fan, &g);
            for k in 0..fan.num_rays() {
                prop_assert_eq!(&(&c * Rat::from(fan.q(k))).fract(), g.a_on(k));
            }
        }
    }

    #[test]
    fn lattice_point_matches_coefficients((q, mask) in fan_and_cone()) {
        let fan = Fan::from_weights(&q).unwrap();
        let tau = cone_of(&fan, mask);
        for g in fan.enumerate_group_elements(&tau).unwrap() {
            for c in 0..fan.n() {
                let x: Rat = (0..fan.num_rays())
                    .map(|i| g.a_on(i) * Rat::from(fan.rays()[i][c].clone()))
                    .sum();
                prop_assert_eq!(x, Rat::from(g.k()[c].clone()));
            }
            let rebuilt = fan.element_from_a(g.a_full().to_vec()).unwrap();
            prop_assert_eq!(rebuilt.key(), g.key());
        }
    }
}
