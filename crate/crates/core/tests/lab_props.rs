mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratindex::lab::{
    bound_value, expansive_nonterminals, fit_growth, is_linear, is_superlinear, measure_rho, verify_ultralinear,
    BoundFormula, Family, MeasureConfig, Strategy,
};
use ratindex::sample::TreeSampler;
use ratindex::{parse_grammar, to_cnf};

use common::*;

#[test]
fn superlinear_agrees_with_subset_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut positives = 0;
    for i in 0..600 {
        let g = if i % 2 == 0 {
            random_superlinear(&mut rng)
        } else {
            let nts = rng.gen_range(1..=6);
            random_grammar(&mut rng, nts, &["a", "b"], 3)
        };
        let expected = superlinear_by_subsets(&g);
        positives += expected as usize;
        assert_eq!(is_superlinear(&g), expected, "{g}");
        if is_linear(&g) && expected {
            assert!(is_superlinear(&g));
        }
    }
    assert!(positives > 100);
}

#[test]
fn expansive_agrees_with_sentential_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..400 {
        let nts = rng.gen_range(1..=5);
        let g = random_grammar(&mut rng, nts, &["a", "b"], 3);
        assert_eq!(expansive_nonterminals(&g), expansive_by_search(&g), "{g}");
    }
    let g = parse_grammar("S -> A B\nA -> a S | a\nB -> b S | b").unwrap();
    assert!(expansive_by_search(&g).contains(&0));
}

#[test]
fn superlinear_trees_have_dimension_at_most_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut trees = 0;
    while trees < 2000 {
        let g = random_superlinear(&mut rng);
        assert!(is_superlinear(&g));
        let sampler = TreeSampler::new(&g);
        for _ in 0..50 {
            let Some(t) = sampler.sample(&mut rng) else { break };
            assert!(t.dimension() <= 2, "{g}\n{t}");
            trees += 1;
        }
    }
}

#[test]
fn reduced_form_trees_stay_within_level_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for k in 1..=3 {
        let mut trees = 0;
        while trees < 500 {
            let (g, partition) = random_reduced(&mut rng, k);
            let verdict = verify_ultralinear(&g, &partition).unwrap();
            assert!(verdict.reduced && verdict.k == k, "{g}");
            let sampler = TreeSampler::new(&g);
            for _ in 0..50 {
                let Some(t) = sampler.sample(&mut rng) else { break };
                assert!(t.dimension() <= verdict.levels(), "{g}\n{t}");
                trees += 1;
            }
        }
    }
}

#[test]
fn nonexpansive_dimension_is_bounded_by_nonterminal_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut grammars = 0;
    while grammars < 40 {
        let nts = rng.gen_range(1..=5);
        let g = random_grammar(&mut rng, nts, &["a", "b"], 3);
        if !expansive_nonterminals(&g).is_empty() {
            continue;
        }
        grammars += 1;
        for height in [6, 12, 24] {
            let sampler = TreeSampler::with_params(&g, height, 0.1);
            for _ in 0..30 {
                let Some(t) = sampler.sample(&mut rng) else { break };
                assert!(t.dimension() <= nts, "{g}\n{t}");
            }
        }
    }
}

#[test]
fn exhaustive_dominates_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let cfg = MeasureConfig::default();
    for _ in 0..6 {
        let g = random_cnf(&mut rng, 3, &["a", "b"]);
        for n in 1..=2 {
            let full = measure_rho(&g, n, &Strategy::Exhaustive, &cfg).unwrap();
            let sample = measure_rho(&g, n, &Strategy::Random { count: 100, seed: rng.gen() }, &cfg).unwrap();
            assert!(full.exhaustive && !sample.exhaustive);
            assert!(full.value >= sample.value, "{g}");
        }
    }
}

#[test]
fn measured_values_respect_calibrated_bounds() {
    let cases: [(&str, BoundFormula); 3] = [
        ("S -> a S b | a b", BoundFormula::Linear { c: 1 }),
        ("S -> A B\nA -> a A | a\nB -> B b | b", BoundFormula::Superlinear { c: 1 }),
        // Two levels, so the exponent is 2·2.
        ("S -> A B\nA -> a | a A\nB -> b | b B", BoundFormula::Ultralinear { k: 2, c: 1 }),
    ];
    let cfg = MeasureConfig::default();
    for (text, formula) in cases {
        let g = to_cnf(&parse_grammar(text).unwrap()).unwrap();
        let mut points = Vec::new();
        for n in 1..=2 {
            points.push(measure_rho(&g, n, &Strategy::Exhaustive, &cfg).unwrap());
        }
        for n in 3..=8 {
            points.push(measure_rho(&g, n, &Strategy::Family(Family::TwoCycleSplits), &cfg).unwrap());
            points.push(measure_rho(&g, n, &Strategy::Random { count: 150, seed: n as u64 }, &cfg).unwrap());
        }
        let first = &points[0];
        let calibrated = formula.calibrated(first.n as u64, first.value.unwrap_or(0));
        for p in &points {
            let v = p.value.unwrap_or(0);
            assert!(bound_value(&calibrated, p.n as u64) >= v.into(), "{text}: n={} value={v}", p.n);
        }
    }
}

#[test]
fn two_cycle_sweep_grows_quadratically() {
    let g = to_cnf(&parse_grammar("S -> a S b | a b").unwrap()).unwrap();
    let cfg = MeasureConfig::default();
    let mut points = Vec::new();
    for (p, q) in [(2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)] {
        let e = measure_rho(&g, p + q, &Strategy::Family(Family::TwoCycle { p, q }), &cfg).unwrap();
        assert_eq!(e.value, Some(2 * p as u64 * q as u64));
        points.push(((p + q) as f64, e.value.unwrap() as f64));
    }
    let slope = fit_growth(&points).unwrap();
    assert!((1.7..=2.3).contains(&slope), "{slope}");
}
