use proptest::prelude::*;
use wporb::fan::Fan;
use wporb::ratlat::Rat;
use wporb::ringops::{
    localize_at, localize_integral, obstruction_bundle, sector_integral, three_point,
    EquivariantDivisor, Integrand, ReducedSector, SectorClass,
};
use wporb::sectors::{enumerate_triples, SectorTriple};

fn weights() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=9, 2..=4)
}

fn r(n: i64, d: i64) -> Rat {
    Rat::frac_of(n, d)
}

fn divisor(coeffs: &[(i64, i64)]) -> EquivariantDivisor {
    EquivariantDivisor::from_terms(coeffs.iter().enumerate().map(|(k, &(n, d))| (k, r(n, d))))
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), 5)
}

/// Independent closed form: every D_k pulls back to q_k H on the fixed
/// locus, each obstruction summand is q_t H after the 1/d_l rescaling, and
/// the locus integral of H^dim is 1 / prod of its weights.
fn oracle(fan: &Fan, t: &SectorTriple, classes: [&SectorClass; 3]) -> Rat {
    let two = Rat::from(2i64);
    let obstruction: Vec<usize> = t
        .carrier()
        .rays()
        .iter()
        .copied()
        .filter(|&k| t.ray_sum(k) == two)
        .collect();
    let degree: usize = classes.iter().map(|c| c.degree()).sum();
    if t.iota_sum() > Rat::from(fan.n() as i64) || degree + obstruction.len() != t.dim() {
        return Rat::zero();
    }
    let mut v: Rat = classes.iter().map(|c| c.scalar.clone()).product();
    for c in classes {
        for d in &c.factors {
            v *= &d.terms().map(|(k, x)| x * Rat::from(fan.q(k))).sum::<Rat>();
        }
    }
    for k in obstruction {
        v *= &Rat::from(fan.q(k));
    }
    for &k in t.surviving() {
        v = v / Rat::from(fan.q(k));
    }
    v
}

/// At most this many triples per case keeps the suite quick.
const TRIPLES_PER_CASE: usize = 12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn localization_matches_the_closed_form(q in weights(), c in coeffs(), seed in any::<u64>()) {
        let fan = Fan::from_weights(&q).unwrap();
        let d = divisor(&c[..fan.num_rays()]);
        let triples = enumerate_triples(&fan).unwrap();
        let stride = (triples.len() / TRIPLES_PER_CASE).max(1);
        for t in triples.iter().step_by(stride) {
            let rank = obstruction_bundle(&fan, t).unwrap().rank;
            let free = t.dim().saturating_sub(rank);
            let eta = SectorClass::power(&d, free);
            let one = SectorClass::one();
            let classes = [&eta, &one, &one];
            let got = three_point(&fan, t, classes, seed).unwrap();
            prop_assert_eq!(got.value, oracle(&fan, t, classes), "{}", t.key());
        }
    }

    #[test]
    fn three_point_is_cyclically_symmetric(q in weights(), c in coeffs(), seed in any::<u64>()) {
        let fan = Fan::from_weights(&q).unwrap();
        let d = divisor(&c[..fan.num_rays()]);
        let triples = enumerate_triples(&fan).unwrap();
        let stride = (triples.len() / TRIPLES_PER_CASE).max(1);
        for t in triples.iter().step_by(stride) {
            let rank = obstruction_bundle(&fan, t).unwrap().rank;
            let free = t.dim().saturating_sub(rank);
            let a = SectorClass::power(&d, free / 2);
            let b = SectorClass::power(&d, free - free / 2);
            let one = SectorClass::one();
            let rotated = SectorTriple::new(&fan, t.g(1), t.g(2)).unwrap();
            prop_assert_eq!(rotated.g(2).key(), t.g(0).key());
            let x = three_point(&fan, t, [&a, &b, &one], seed).unwrap().value;
            let y = three_point(&fan, &rotated, [&b, &one, &a], seed ^ 1).unwrap().value;
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn integrals_do_not_depend_on_torus_weights(
        q in weights(),
        c in coeffs(),
        mus in prop::collection::vec((-300i64..=300, 1i64..=40), 10),
    ) {
        let fan = Fan::from_weights(&q).unwrap();
        let d = divisor(&c[..fan.num_rays()]);
        let triples = enumerate_triples(&fan).unwrap();
        let stride = (triples.len() / TRIPLES_PER_CASE).max(1);
        for t in triples.iter().step_by(stride) {
            if t.iota_sum() > Rat::from(fan.n() as i64) {
                continue;
            }
            let ob = obstruction_bundle(&fan, t).unwrap();
            let class = SectorClass::power(&d, t.dim() - ob.rank);
            let sector = ReducedSector::new(&fan, t.surviving()).unwrap();
            let integrand = Integrand::build(&fan, &sector, &[&class], &ob);
            let reference = localize_integral(&fan, &sector, &integrand, 3).unwrap().value;
            let mut mu: Vec<Rat> = mus.iter().take(sector.rays().len()).map(|&(n, d)| r(n, d)).collect();
            *mu.last_mut().unwrap() = Rat::zero();
            if let Some(v) = localize_at(&fan, &sector, &integrand, &mu).unwrap() {
                prop_assert_eq!(v, reference);
            }
        }
    }

    #[test]
    fn products_vanish_past_the_dimension(q in weights()) {
        let fan = Fan::from_weights(&q).unwrap();
        let n = Rat::from(fan.n() as i64);
        let one = SectorClass::one();
        for t in enumerate_triples(&fan).unwrap() {
            if t.iota_sum() > n {
                let ob = obstruction_bundle(&fan, &t).unwrap();
                prop_assert!(ob.rank > t.dim());
                let v = three_point(&fan, &t, [&one, &one, &one], 0).unwrap();
                prop_assert!(v.vanishing && v.value.is_zero());
            }
        }
    }

    #[test]
    fn top_power_of_the_anticanonical_divisor(q in weights()) {
        let fan = Fan::from_weights(&q).unwrap();
        let all: Vec<usize> = (0..fan.num_rays()).collect();
        let class = SectorClass::power(&EquivariantDivisor::sum_of(&all), fan.n());
        let got = sector_integral(&fan, &fan.identity(), &class, 0).unwrap().value;
        let w = fan.weights();
        let want = Rat::from(w.sum()).pow(fan.n() as u32) / Rat::from(w.product());
        prop_assert_eq!(got, want);
    }
}
