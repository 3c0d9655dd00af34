//! Worked examples checked against brute-force oracles that share no code
//! with the searches under test.

use itertools::Itertools;

use helly_core::cone::{self, VectorSet};
use helly_core::gen;
use helly_core::oracle;
use helly_core::rainbow::ColoredSystem;
use helly_core::ratlin::RationalVector;
use helly_core::reay;
use helly_core::verify::{self, helly_m, Verdict, Witness};

fn set(d: usize, vs: &[&[i64]]) -> VectorSet {
    VectorSet::from_ints(d, vs).unwrap()
}

fn cross2() -> VectorSet {
    set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
}

/// Every rainbow sub-selection with at most `cap` picks, by brute force.
fn rainbow_subselections(sys: &ColoredSystem, cap: usize) -> Vec<Vec<RationalVector>> {
    let choices: Vec<Vec<Option<usize>>> = sys
        .colors()
        .iter()
        .map(|c| std::iter::once(None).chain((0..c.len()).map(Some)).collect())
        .collect();
    choices
        .into_iter()
        .multi_cartesian_product()
        .filter(|picks| picks.iter().flatten().count() <= cap)
        .map(|picks| {
            picks
                .iter()
                .enumerate()
                .filter_map(|(c, p)| p.map(|i| sys.vector(c, i).clone()))
                .collect()
        })
        .collect()
}

/// Solution dimension through the elimination oracle.
fn oracle_solution_dim(d: usize, vectors: &[RationalVector]) -> usize {
    d - oracle::lineality_oracle(d, vectors).dim()
}

#[test]
fn four_crosses_admit_no_three_element_first_block() {
    let a = cross2();
    for triple in a.vectors().iter().cloned().combinations(3) {
        assert!(cone::minimal_positive_basis_span(2, &triple).is_none(), "{triple:?}");
    }
    let sys = ColoredSystem::copies(&a, 4).unwrap();
    let dec = reay::reay_decompose(&sys, 2).unwrap();
    assert_eq!(dec.block_sizes(), vec![2, 2]);
    assert_eq!(dec.dims(), vec![1, 2]);
}

#[test]
fn strong_form_keeps_a_weak_output_that_already_qualifies() {
    for sys in [
        ColoredSystem::copies(&cross2(), 4).unwrap(),
        ColoredSystem::copies(&set(2, &[&[1, 0], &[0, 1], &[-1, -1]]), 3).unwrap(),
    ] {
        let k = sys.n_colors() - 2;
        let weak = reay::reay_decompose_weak(&sys, k).unwrap();
        assert!(reay::verify_decomposition(&weak, &sys, k, true).unwrap().passed());
        assert_eq!(reay::reay_decompose(&sys, k).unwrap(), weak);
    }
}

#[test]
fn simplex_triple_is_a_maximal_first_block() {
    let simplex = set(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
    let sys = ColoredSystem::copies(&simplex, 3).unwrap();
    let dec = reay::reay_decompose(&sys, 1).unwrap();
    assert_eq!(dec.m(), 1);
    // No rainbow minimal positive basis exceeds d + 1 = 3 vectors.
    assert_eq!(dec.block_sizes(), vec![3]);
    assert_eq!(oracle::lineality_oracle(2, &dec.blocks[0].vectors(&sys)).dim(), 2);
}

#[test]
fn extremal_system_witnesses_tightness_of_the_solution_form() {
    // d + (d - k) colors, each with fewer than k solutions, while every
    // rainbow sub-selection keeps k of them.
    for (d, k) in [(2, 1), (3, 1), (3, 2)] {
        let sys = gen::gen_extremal_colorful(d, d - k + 1).unwrap();
        assert_eq!(sys.n_colors(), 2 * d - k);
        for r in rainbow_subselections(&sys, usize::MAX) {
            assert!(r.is_empty() || oracle_solution_dim(d, &r) >= k);
        }
        let report = verify::verify_colorful_solutions(&sys, k, false).unwrap();
        assert_eq!(report.verdict, Verdict::TightnessWitness);
        let Witness::AllColorsFail { values } = report.witness else {
            panic!("expected all colors to fail");
        };
        assert!(values.iter().all(|&v| v < k));
    }
}

#[test]
fn planted_instance_matches_brute_force() {
    let (d, k) = (3, 1);
    for seed in 0..4 {
        let sys = gen::gen_random_planted(d, k, 2 * d - k + 1, 0, seed).unwrap();
        let hypothesis = rainbow_subselections(&sys, helly_m(k, d))
            .iter()
            .all(|r| r.is_empty() || oracle_solution_dim(d, r) >= k);
        let conclusion = sys.colors().iter().any(|c| oracle_solution_dim(d, c.vectors()) >= k);
        let expected = match (hypothesis, conclusion) {
            (false, _) => Verdict::HypothesisFails,
            (true, true) => Verdict::ConclusionHolds,
            (true, false) => Verdict::Counterexample,
        };
        assert_ne!(expected, Verdict::Counterexample);
        let report = verify::verify_colorful_solutions(&sys, k, true).unwrap();
        assert_eq!(report.verdict, expected, "seed {seed}");
    }
}

#[test]
fn extremal_generator_by_full_enumeration() {
    for (d, k) in [(1, 1), (2, 1), (3, 2)] {
        let sys = gen::gen_extremal_colorful(d, k).unwrap();
        assert_eq!(sys.n_colors(), d + k - 1);
        for r in rainbow_subselections(&sys, usize::MAX) {
            assert!(oracle::lineality_oracle(d, &r).dim() < k, "{r:?}");
        }
        for c in sys.colors() {
            assert!(oracle::lineality_oracle(d, c.vectors()).dim() >= k);
        }
    }
}

#[test]
fn planted_generator_is_reproducible() {
    let a = gen::gen_random_planted(3, 2, 5, 0, 7).unwrap();
    let b = gen::gen_random_planted(3, 2, 5, 0, 7).unwrap();
    assert_eq!(a, b);
    for c in a.colors() {
        assert_eq!(c.len(), 3);
        assert_eq!(oracle::lineality_oracle(3, c.vectors()).dim(), 2);
    }
    let full = gen::gen_random_planted(3, 3, 2, 0, 1).unwrap();
    for c in full.colors() {
        assert!(cone::is_minimal_positive_basis(c).is_some_and(|l| l.dim() == 3));
    }
}

#[test]
fn simplex_subsets_are_pointed() {
    for d in 1..=5 {
        let a = gen::gen_simplex_vertices(d).unwrap();
        assert_eq!(oracle::lineality_oracle(d, a.vectors()).dim(), d);
        for size in 1..=d {
            for subset in a.vectors().iter().cloned().combinations(size) {
                assert_eq!(oracle::lineality_oracle(d, &subset).dim(), 0);
            }
        }
    }
}
