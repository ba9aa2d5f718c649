mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tamed_index::config::parse_config;
use tamed_index::{support_bound, topological_index, Character, LocalIndexTables, Weight, Window};

use common::q;

fn entries(rank: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -4i64..=4), 0..6)
}

fn character(rank: usize, e: Vec<(Vec<i64>, i64)>) -> Character {
    Character::finite(rank, e.into_iter().map(|(w, m)| (Weight::new(w), BigInt::from(m)))).unwrap()
}

proptest! {
    #[test]
    fn tensor_is_commutative_and_distributes(a in entries(2), b in entries(2), c in entries(2)) {
        let (a, b, c) = (character(2, a), character(2, b), character(2, c));
        let all = Window::All;
        prop_assert_eq!(a.tensor(&b, &all).unwrap(), b.tensor(&a, &all).unwrap());
        let lhs = a.tensor(&b.add(&c).unwrap(), &all).unwrap();
        let rhs = a.tensor(&b, &all).unwrap().add(&a.tensor(&c, &all).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn negation_is_additive_inverse(a in entries(3)) {
        let a = character(3, a);
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn truncation_commutes_with_addition(a in entries(1), b in entries(1), lo in -4i64..=0, width in 0i64..=4) {
        let v = tamed_index::TamingData::from_integers(&[1]).unwrap();
        let w = Window::closed(&v, q(lo), q(lo + width)).unwrap();
        let (a, b) = (character(1, a), character(1, b));
        let lhs = a.add(&b).unwrap().truncate(&w).unwrap();
        let rhs = a.truncate(&w).unwrap().add(&b.truncate(&w).unwrap()).unwrap();
        prop_assert!(lhs.equal_on(&rhs, &w).unwrap());
    }

    #[test]
    fn opposite_grading_negates_the_index(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::problem(&mut rng, 3);
        let tables = LocalIndexTables::new();
        let flipped: Vec<_> = p.components.iter().map(|c| c.with_opposite_grading()).collect();
        let x = topological_index(&p.components, &p.v, &p.window, &tables).unwrap();
        let y = topological_index(&flipped, &p.v, &p.window, &tables).unwrap();
        prop_assert!(x.add(&y).unwrap().is_zero());
    }

    #[test]
    fn index_respects_support_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::problem(&mut rng, 4);
        let c = support_bound(&p.components, &p.v).unwrap();
        let ch = topological_index(&p.components, &p.v, &p.window, &LocalIndexTables::new()).unwrap();
        prop_assert!(ch.entries().all(|(w, _)| p.v.pair(w) <= c));
        prop_assert_eq!(ch.support_bound().map(|b| b.c.clone()), Some(c));
    }

    #[test]
    fn widening_the_window_only_adds_entries(seed in any::<u64>(), extra in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::problem(&mut rng, 3);
        let lo = p.window.lower().unwrap().clone();
        let hi = p.window.upper().unwrap().clone();
        let wide = Window::closed(&p.v, lo - q(extra), hi + q(extra)).unwrap();
        let tables = LocalIndexTables::new();
        let narrow_ch = topological_index(&p.components, &p.v, &p.window, &tables).unwrap();
        let wide_ch = topological_index(&p.components, &p.v, &wide, &tables).unwrap();
        prop_assert!(wide_ch.truncate(&p.window).unwrap().equal_on(&narrow_ch, &p.window).unwrap());
    }

    #[test]
    fn config_text_round_trips(lo in -9i64..=0, width in 0i64..=5, n in 1u32..=3, odd in any::<bool>()) {
        let text = format!(
            "rank = 1\nv = 1\nwindow = {lo} : {}\n[component pt]\ndim = 0\nnormal_weights = ({n})\n\
             summand = weight (0), parity {}, rank 1\n[analytic]\nmodel = plane_rotation\nn = {n}\nf0 = 4.5\nR = 12\nN = 300\n{}",
            lo + width,
            if odd { "-" } else { "+" },
            if odd { "module = odd\n" } else { "" },
        );
        let cfg = parse_config(&text).unwrap();
        prop_assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }
}
