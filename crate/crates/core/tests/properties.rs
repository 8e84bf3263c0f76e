//! Algebraic laws of the combination rules and the formula compiler,
//! checked against the dense subset-lattice model.

mod common;

use common::{eval_truth, frame_of, set_from_index, subset_index, Dense};
use proptest::prelude::*;
use tbm_core::{
    combine_conjunctive, combine_disjunctive, marginalize, parse_formula, vacuous_extension, Error, Formula, Frame,
    MassFunction, StateSet,
};

/// Up to three focal sets with masses bounded away from zero.
fn mass_on(n: usize) -> impl Strategy<Value = MassFunction> {
    let lattice = 1usize << (1 << n);
    prop::collection::vec((1..lattice, 0.05f64..1.0), 1..=3).prop_map(move |focal| {
        let frame = frame_of(n);
        let total: f64 = focal.iter().map(|(_, w)| w).sum();
        MassFunction::new(&frame, focal.iter().map(|&(s, w)| (set_from_index(&frame, s), w / total))).unwrap()
    })
}

fn small_mass() -> impl Strategy<Value = MassFunction> {
    (1usize..=3).prop_flat_map(mass_on)
}

fn mass_triple() -> impl Strategy<Value = (MassFunction, MassFunction, MassFunction)> {
    (1usize..=3).prop_flat_map(|n| (mass_on(n), mass_on(n), mass_on(n)))
}

fn conj(a: &MassFunction, b: &MassFunction) -> Option<Dense> {
    match combine_conjunctive(a, b, true) {
        Ok((m, _)) => Some(Dense::from_mass(&m)),
        Err(Error::TotalConflict { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

fn same(a: &Option<Dense>, b: &Option<Dense>, tol: f64) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x.max_deviation(y) <= tol,
        (None, None) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjunctive_commutes_associates_and_has_vacuous_identity((a, b, c) in mass_triple()) {
        prop_assert!(same(&conj(&a, &b), &conj(&b, &a), 1e-9));

        let left = combine_conjunctive(&a, &b, true).ok().and_then(|(ab, _)| conj(&ab, &c));
        let right = combine_conjunctive(&b, &c, true).ok().and_then(|(bc, _)| conj(&a, &bc));
        prop_assert!(same(&left, &right, 1e-9));

        let v = MassFunction::vacuous(a.frame());
        prop_assert!(same(&conj(&v, &a), &Some(Dense::from_mass(&a)), 1e-9));
    }

    #[test]
    fn disjunctive_belief_is_product_over_all_subsets((a, b, _c) in mass_triple()) {
        let m = combine_disjunctive(&a, &b).unwrap();
        let frame = a.frame();
        let lattice = 1usize << frame.size();
        for s in 0..lattice {
            let set = set_from_index(frame, s);
            let lhs = m.belief(&set).unwrap();
            let rhs = a.belief(&set).unwrap() * b.belief(&set).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12, "A={s}: {lhs} vs {rhs}");
        }
        prop_assert_eq!(m.empty_mass(), 0.0);
    }

    #[test]
    fn extension_then_marginalization_is_identity(m in small_mass(), extra in 0usize..=3, seed in any::<u64>()) {
        // scatter the small frame's variables among extra ones
        let small = m.frame().clone();
        let mut names: Vec<String> = small.variables().iter().map(|v| v.name().to_owned()).collect();
        for i in 0..extra {
            let at = (seed >> (4 * i)) as usize % (names.len() + 1);
            names.insert(at, format!("w{i}"));
        }
        let big = Frame::from_names(&names).unwrap();
        let ext = vacuous_extension(&m, &big).unwrap();
        prop_assert_eq!(marginalize(&ext, &small).unwrap(), m);
    }

    #[test]
    fn focal_list_combination_matches_dense_lattice((a, b, _c) in mass_triple()) {
        let (da, db) = (Dense::from_mass(&a), Dense::from_mass(&b));

        let (raw, report) = combine_conjunctive(&a, &b, false).unwrap();
        let dense_raw = da.conjunctive(&db);
        prop_assert!(Dense::from_mass(&raw).max_deviation(&dense_raw) <= 1e-12);
        prop_assert!((raw.empty_mass() - report.conflict_mass).abs() <= 0.0);

        match (combine_conjunctive(&a, &b, true), dense_raw.normalized()) {
            (Ok((m, _)), Some(d)) => {
                prop_assert!(Dense::from_mass(&m).max_deviation(&d) <= 1e-12);
                prop_assert_eq!(m.empty_mass(), 0.0);
                prop_assert!(m.check_normalized().is_ok());
            }
            (Err(Error::TotalConflict { .. }), None) => {}
            (x, y) => prop_assert!(false, "disagree: {:?} vs {:?}", x.is_ok(), y.is_some()),
        }

        let disj = combine_disjunctive(&a, &b).unwrap();
        prop_assert!(Dense::from_mass(&disj).max_deviation(&da.disjunctive(&db)) <= 1e-12);
    }

    #[test]
    fn belief_and_plausibility_match_brute_force(m in small_mass(), s in 0usize..256, t in 0usize..256) {
        let frame = m.frame();
        let lattice = 1usize << frame.size();
        let (s, t) = (s % lattice, t % lattice);
        let a = set_from_index(frame, s);
        let d = Dense::from_mass(&m);
        let bel = m.belief(&a).unwrap();
        let pl = m.plausibility(&a).unwrap();
        prop_assert!((bel - d.belief(s)).abs() <= 1e-12);
        // pl from the configuration-level definition
        let brute_pl: f64 = m.focal_elements().iter()
            .filter(|(x, _)| x.configs().any(|c| a.contains(c)))
            .map(|(_, w)| w).sum();
        prop_assert!((pl - brute_pl).abs() <= 1e-12);
        prop_assert!(pl + 1e-12 >= bel);
        prop_assert!((pl - (1.0 - m.belief(&a.complement()).unwrap())).abs() <= 1e-9);
        // monotone along inclusion
        let b = set_from_index(frame, s | t);
        prop_assert!(m.belief(&b).unwrap() + 1e-12 >= bel);
    }

    #[test]
    fn same_focus_supports_accumulate(w1 in 0.0f64..=1.0, w2 in 0.0f64..=1.0) {
        let f = Frame::from_names(&["S"]).unwrap();
        let focus = f.literal("S", false).unwrap();
        let a = MassFunction::simple_support(&f, focus.clone(), w1).unwrap();
        let b = MassFunction::simple_support(&f, focus.clone(), w2).unwrap();
        let (m, report) = combine_conjunctive(&a, &b, true).unwrap();
        prop_assert_eq!(report.conflict_mass, 0.0);
        let expected = 1.0 - (1.0 - w1) * (1.0 - w2);
        prop_assert!((m.belief(&focus).unwrap() - expected).abs() <= 1e-12);
    }
}

#[test]
fn penguin_and_bird_typicality_accumulate() {
    let f = Frame::from_names(&["S"]).unwrap();
    let focus = f.literal("S", false).unwrap();
    let a = MassFunction::simple_support(&f, focus.clone(), 0.9).unwrap();
    let b = MassFunction::simple_support(&f, focus.clone(), 0.95).unwrap();
    let (m, _) = combine_conjunctive(&a, &b, true).unwrap();
    assert!((m.mass_of(&focus) - 0.995).abs() < 1e-12);
}

#[test]
fn disjunctive_law_on_the_empty_set() {
    let f = frame_of(2);
    let a = MassFunction::simple_support(&f, set_from_index(&f, 0b0011), 0.4).unwrap();
    let b = MassFunction::simple_support(&f, set_from_index(&f, 0b0110), 0.7).unwrap();
    let m = combine_disjunctive(&a, &b).unwrap();
    let empty = f.empty_set();
    assert_eq!(m.belief(&empty).unwrap(), 0.0);
    assert_eq!(a.belief(&empty).unwrap() * b.belief(&empty).unwrap(), 0.0);
    assert_eq!(subset_index(&empty), 0);
}

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = (0usize..4).prop_map(|i| Formula::atom(format!("v{i}")));
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_a_fixpoint(f in formula(5)) {
        let printed = f.to_string();
        let reparsed = parse_formula(&printed).unwrap();
        prop_assert_eq!(&reparsed, &f);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn compiled_sets_follow_truth_tables(f in formula(4)) {
        let frame = frame_of(4);
        let set: StateSet = f.compile(&frame).unwrap();
        for c in 0..frame.size() {
            let value = |name: &str| {
                let k: usize = name[1..].parse().unwrap();
                (c >> k) & 1 == 1
            };
            prop_assert_eq!(set.contains(c), eval_truth(&f, &value));
        }
    }

    #[test]
    fn implication_is_material(a in formula(2), b in formula(2)) {
        let frame = frame_of(4);
        let imp = Formula::implies(a.clone(), b.clone()).compile(&frame).unwrap();
        let alt = Formula::or(Formula::not(a), b).compile(&frame).unwrap();
        prop_assert_eq!(imp, alt);
    }
}
