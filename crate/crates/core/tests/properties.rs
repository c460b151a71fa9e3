mod common;

use common::{int, prefix_values, q, track_min, Model};
use proptest::prelude::*;
use rand::SeedableRng;
use sigma_core::sigma::geometry::{norm_bound_from_chi, random_instance, NormBoundInstance};
use sigma_core::sigma::{certificate_cone, sigma1_search, verify_sigma1_certificate, Sigma1Options};
use sigma_core::track::{chi_track, raise_track};
use sigma_core::{free_reduce, Character, Letter, Rational, Word};

fn word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// `(‖P‖ − ν)² ≥ ‖T‖²`, checked as `‖P‖ ≥ ν + ‖T‖` by squaring with `√‖T‖²`
/// as the irrational term, a different route from the library's.
fn conclusion_holds(inst: &NormBoundInstance) -> bool {
    let n: Rational = inst.p.iter().map(|x| x * x).sum();
    let m: Rational = inst.t.iter().map(|x| x * x).sum();
    let lhs = &n - &inst.nu * &inst.nu - &m;
    let four = int(4);
    lhs >= int(0) && &lhs * &lhs >= four * &inst.nu * &inst.nu * m
}

proptest! {
    #[test]
    fn display_parse_round_trip(w in word(2, 12)) {
        let names = ["a", "b"];
        let text = w.display(&names).to_string();
        prop_assert_eq!(Word::parse(&text, &names).unwrap(), w);
    }

    #[test]
    fn free_reduce_matches_stack(w in word(2, 16)) {
        let r = free_reduce(&w);
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(free_reduce(&r).clone(), r.clone());
        prop_assert_eq!(Model::F2.eval(&r), Model::F2.eval(&w));
    }

    #[test]
    fn track_is_prefix_sums(w in word(2, 16), a in small_rational(), b in small_rational()) {
        let chi = Character::new(vec![a, b]);
        let profile = chi_track(&w, &chi);
        let expected = prefix_values(&w, &chi);
        prop_assert_eq!(profile.values(), &expected[..]);
        prop_assert_eq!(profile.min(), expected.iter().min().unwrap());
        prop_assert_eq!(profile.end(), expected.last().unwrap());
    }

    #[test]
    fn inverse_is_reverse_negated(w in word(2, 12)) {
        let chi = Character::from_ints(&[3, -2]);
        let fwd = prefix_values(&w, &chi);
        let back = prefix_values(&w.inverse(), &chi);
        let end = fwd.last().unwrap();
        for (i, v) in back.iter().enumerate() {
            prop_assert_eq!(v.clone(), &fwd[fwd.len() - 1 - i] - end);
        }
    }

    #[test]
    fn raise_track_bs(w in word(2, 14), k in 1i64..=3) {
        let model = Model::Bs12;
        let p = model.presentation();
        let chi = Character::new(vec![int(0), q(-1, k)]);
        let v = sigma1_search(&p, &chi, &Sigma1Options::default()).unwrap();
        let cert = v.certificate().unwrap();
        let w = if chi.value(&w) < int(0) { w.inverse() } else { w };
        let out = raise_track(&w, &cert.t, &cert.dict, &chi).unwrap();
        let floor = (track_min(&w, &chi) + chi.value(&cert.t)).min(int(0));
        prop_assert_eq!(track_min(&out, &chi), floor);
        prop_assert_eq!(model.eval(&out), model.eval(&w));
    }

    #[test]
    fn cone_is_homogeneous(a in -4i64..=4, b in -4i64..=4, n in 1i64..=5, d in 1i64..=5) {
        prop_assume!(a != 0 || b != 0);
        let p = Model::Z2.presentation();
        let chi = Character::from_ints(&[a, b]);
        let v = sigma1_search(&p, &chi, &Sigma1Options::default()).unwrap();
        let cert = v.certificate().unwrap();
        let cone = certificate_cone(cert, &p);
        prop_assert!(cone.contains(&chi));
        let scaled = chi.scale(&q(n, d));
        prop_assert!(cone.contains(&scaled));
        prop_assert!(verify_sigma1_certificate(cert, &p, &scaled));
        prop_assert!(!cone.contains(&chi.scale(&int(-1))));
    }

    #[test]
    fn norm_bound_never_fails(seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng);
        let slack = norm_bound_from_chi(&inst).unwrap();
        prop_assert!(slack.is_nonneg());
        prop_assert!(conclusion_holds(&inst));
    }
}
