use kgdf_core::diagram::BasedKnotDiagram;
use kgdf_core::gdf::{self, collapse_mixed, enumerate_arrow_diagrams, Gdf, UnsignedGdf};
use kgdf_core::poly::{rat, LaurentPoly2};
use kgdf_core::skein;
use kgdf_core::state::{self, JonesModel};
use num_traits::Zero;
use proptest::prelude::*;

/// Gauss code of the closure of a braid word (`±i` is `σ_i^{±1}`), or `None`
/// when the closure has more than one component.
fn braid_closure(strands: usize, word: &[i32]) -> Option<String> {
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    for _ in 0..strands {
        for (j, &g) in word.iter().enumerate() {
            let i = g.unsigned_abs() as usize - 1;
            if pos != i && pos != i + 1 {
                continue;
            }
            let rising = pos == i;
            let over = rising == (g > 0);
            let sign = if g > 0 { '-' } else { '+' };
            tokens.push(format!("{}{}{}", if over { 'O' } else { 'U' }, j + 1, sign));
            pos = if rising { i + 1 } else { i };
        }
        if pos == 0 {
            break;
        }
    }
    (pos == 0 && tokens.len() == 2 * word.len()).then(|| tokens.join(" "))
}

fn braid_knot(max_len: usize) -> impl Strategy<Value = BasedKnotDiagram> {
    (2usize..=3)
        .prop_flat_map(move |n| {
            let gen = (1..n as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
            (Just(n), prop::collection::vec(gen, 1..=max_len))
        })
        .prop_filter_map("closure is a link", |(n, w)| braid_closure(n, &w))
        .prop_map(|code| code.parse().expect("closure code parses"))
}

fn small_poly() -> impl Strategy<Value = LaurentPoly2> {
    prop::collection::vec((-3i64..=3, -3i32..=3, 0i32..=3), 0..5)
        .prop_map(|t| t.into_iter().map(|(c, a, z)| LaurentPoly2::monomial(c, a, z)).sum())
}

fn arrow_diagram(max_arrows: usize) -> impl Strategy<Value = BasedKnotDiagram> {
    (1..=max_arrows).prop_flat_map(|m| {
        let all = enumerate_arrow_diagrams(m);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

#[test]
fn braid_closure_reproduces_corpus_trefoil() {
    assert_eq!(braid_closure(2, &[1, 1, 1]).unwrap(), "O1- U2- O3- U1- O2- U3-");
    assert_eq!(braid_closure(2, &[1, 1]), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(x in small_poly(), y in small_poly(), w in small_poly()) {
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!((x.clone() * y.clone()) * w.clone(), x.clone() * (y.clone() * w.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + w.clone()), x.clone() * y.clone() + x.clone() * w.clone());
        prop_assert!((x.clone() - x.clone()).is_zero());
        prop_assert_eq!(x.clone() * LaurentPoly2::constant(1), x);
    }

    #[test]
    fn gauss_code_round_trip(g in braid_knot(6)) {
        let again: BasedKnotDiagram = g.to_string().parse().unwrap();
        prop_assert_eq!(&again, &g);
        let key = g.canonical_key();
        prop_assert_eq!(BasedKnotDiagram::from_key(&key.0).unwrap().canonical_key(), key);
    }

    #[test]
    fn state_sum_matches_skein_on_braids(g in braid_knot(6), turns in 0usize..12) {
        let mut h = g.clone();
        for _ in 0..turns % (2 * g.arrow_count()).max(1) {
            h = h.move_base_point();
        }
        prop_assert_eq!(state::dk_state_sum(&h), skein::dubrovnik_dk(&g));
        prop_assert_eq!(state::dk_state_sum_unpruned(&h), skein::dubrovnik_dk(&g));
        prop_assert_eq!(state::homfly_state_sum(&h), skein::homfly(&g));
    }

    #[test]
    fn skein_invariant_under_base_point(g in braid_knot(6)) {
        prop_assert_eq!(skein::dubrovnik_dk(&g.move_base_point()), skein::dubrovnik_dk(&g));
        prop_assert!(skein::is_knot_polynomial(&skein::dubrovnik_dk(&g)));
    }

    #[test]
    fn pairing_matches_skein_up_to_order_2(g in braid_knot(6)) {
        let table = gdf::cached_table(2).unwrap();
        let p = skein::p_table(&g, 2).unwrap();
        for k in 0..=2 {
            for l in 0..=2 - k {
                prop_assert_eq!(&gdf::pair(&table.a_kl(k, l), &g), &p[&(k, l)]);
            }
        }
    }

    #[test]
    fn jones_real_route_matches_symbolic(a in arrow_diagram(3)) {
        for model in [JonesModel::Kauffman, JonesModel::Homfly] {
            prop_assert_eq!(
                state::jones_weight_series(&a, model, 4).unwrap(),
                state::jones_weight_series_symbolic(&a, model, 4).unwrap()
            );
        }
    }

    #[test]
    fn weight_series_starts_at_arrow_count(a in arrow_diagram(3)) {
        let m = a.arrow_count() as u32;
        let s = state::w_series(&a, 4).unwrap();
        for ((h, z), _) in s.terms() {
            prop_assert!(h + z >= m, "term h^{} z^{} below degree {}", h, z, m);
        }
        for k in 0..m {
            for l in 0..m - k {
                prop_assert!(state::w_kl(&a, k, l).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn collapse_expand_round_trip(picks in prop::collection::vec((arrow_diagram(2), -4i64..=4), 0..6)) {
        let mut u = UnsignedGdf::new();
        for (a, c) in &picks {
            u.add_key(a.unsigned_key(), rat(*c));
        }
        let (back, rest) = collapse_mixed(&u.expand()).unwrap();
        prop_assert!(rest.is_empty());
        prop_assert_eq!(back, u);
    }

    #[test]
    fn gdf_json_round_trip(picks in prop::collection::vec((arrow_diagram(3), -9i64..=9), 0..6)) {
        let mut f = Gdf::new();
        for (a, c) in &picks {
            f.add_term(a, rat(*c));
        }
        prop_assert_eq!(Gdf::from_json(&f.to_json()).unwrap(), f);
    }
}
