use proptest::prelude::*;

use helly_core::cone::{self, VectorSet};
use helly_core::gen;
use helly_core::oracle;
use helly_core::rainbow::{self, ColoredSystem};
use helly_core::ratlin::{self, orthogonal_projector, rat, RationalMatrix, RationalVector, Subspace};
use helly_core::reay;
use helly_core::verify::{self, Verdict};

fn int_vector(d: usize) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(-3i64..=3, d).prop_map(|c| RationalVector::from_ints(&c))
}

fn nonzero_vector(d: usize) -> impl Strategy<Value = RationalVector> {
    int_vector(d).prop_filter("nonzero", |v| !v.is_zero())
}

/// A dimension and up to `max` distinct nonzero vectors in it.
fn vector_set(max: usize) -> impl Strategy<Value = VectorSet> {
    (1usize..=4).prop_flat_map(move |d| {
        prop::collection::vec(nonzero_vector(d), 1..=max).prop_map(move |mut vs| {
            let mut seen = Vec::new();
            vs.retain(|v| {
                let fresh = !seen.contains(v);
                seen.push(v.clone());
                fresh
            });
            VectorSet::new(d, vs).unwrap()
        })
    })
}

fn matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(int_vector(c), r).prop_map(move |rows| RationalMatrix::from_rows(c, rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix()) {
        prop_assert_eq!(ratlin::rank(&m), ratlin::rank(&m.transpose()));
    }

    #[test]
    fn rank_nullity(m in matrix()) {
        let kernel = ratlin::kernel_basis(&m);
        prop_assert_eq!(kernel.dim() + ratlin::rank(&m), m.n_cols());
        for b in kernel.basis() {
            prop_assert!(m.mul_vec(b).is_zero());
        }
    }

    #[test]
    fn projector_laws(a in vector_set(4), v_seed in prop::collection::vec(-5i64..=5, 4)) {
        let d = a.ambient_dim();
        let l = Subspace::span(d, a.vectors());
        let p = orthogonal_projector(&l);
        let v = RationalVector::from_ints(&v_seed[..d]);
        let pv = p.project(&v);
        prop_assert_eq!(p.project(&pv), pv.clone());
        for b in l.basis() {
            prop_assert_eq!(pv.dot(b), rat(0));
        }
        prop_assert!(l.contains(&(&v - &pv)));
    }

    #[test]
    fn lineality_duality(a in vector_set(7)) {
        let lin = cone::lineality_space(&a).subspace.dim();
        prop_assert_eq!(cone::solution_dimension(&a).unwrap(), a.ambient_dim() - lin);
    }

    #[test]
    fn lineality_matches_the_elimination_oracle(a in vector_set(8)) {
        let ours = cone::lineality_space(&a).subspace;
        prop_assert_eq!(ours, oracle::lineality_oracle(a.ambient_dim(), a.vectors()));
    }

    #[test]
    fn membership_certificates_remultiply(a in vector_set(6), v_seed in prop::collection::vec(-4i64..=4, 4)) {
        let v = RationalVector::from_ints(&v_seed[..a.ambient_dim()]);
        let cert = cone::pos_membership(&a, &v).unwrap();
        prop_assert_eq!(cert.is_some(), oracle::in_positive_hull(a.ambient_dim(), a.vectors(), &v));
        if let Some(c) = cert {
            prop_assert!(c.check(a.vectors()));
        }
    }

    #[test]
    fn direct_sum_splitting(a in vector_set(6), v_seed in prop::collection::vec(-4i64..=4, 4)) {
        let d = a.ambient_dim();
        let l = cone::lineality_space(&a).subspace;
        let p = orthogonal_projector(&l);
        let projected = a.projected_set(&p);
        prop_assert!(cone::is_pointed(&projected));
        let v = RationalVector::from_ints(&v_seed[..d]);
        let whole = cone::pos_membership(&a, &v).unwrap().is_some();
        let split = cone::pos_membership(&projected, &p.project(&v)).unwrap().is_some();
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn minimal_positive_bases_have_two_elements(a in vector_set(6)) {
        if let Ok(idx) = cone::extract_minimal_positive_basis(&a) {
            prop_assert!(idx.len() >= 2);
            prop_assert!(cone::is_minimal_positive_basis(&a.subset(&idx)).is_some());
        }
    }

    #[test]
    fn rainbow_minimal_positive_basis_is_one(d in 1usize..=3, k_off in 0usize..3, seed in any::<u64>()) {
        let k = 1 + k_off % d;
        let sys = gen::gen_random_planted(d, k, d + 1, (seed % 2) as usize, seed).unwrap();
        let (sel, span) = rainbow::rainbow_minimal_positive_basis(&sys).unwrap();
        prop_assert!(sel.len() <= d + 1);
        sel.check_against(&sys).unwrap();
        let set = VectorSet::new(d, sel.vectors(&sys)).unwrap();
        prop_assert_eq!(cone::is_minimal_positive_basis(&set), Some(span));
    }

    #[test]
    fn planted_colors_carry_their_lineality(d in 1usize..=5, k_off in 0usize..5, extra in 0usize..3, seed in any::<u64>()) {
        let k = 1 + k_off % d;
        let sys = gen::gen_random_planted(d, k, d + k, extra, seed).unwrap();
        prop_assert_eq!(sys.n_colors(), d + k);
        for c in sys.colors() {
            prop_assert!(cone::lineality_space(c).subspace.dim() >= k);
        }
    }

    #[test]
    fn planted_systems_decompose(d in 1usize..=4, k_off in 0usize..4, extra in 0usize..2, seed in any::<u64>()) {
        let k = 1 + k_off % d;
        let sys = gen::gen_random_planted(d, k, d + k, extra, seed).unwrap();
        let dec = reay::reay_decompose(&sys, k).unwrap();
        prop_assert!(dec.m() <= k);
        let report = reay::verify_decomposition(&dec, &sys, k, true).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        let weak = reay::reay_decompose_weak(&sys, k).unwrap();
        prop_assert!(reay::verify_decomposition(&weak, &sys, k, false).unwrap().passed());
    }

    #[test]
    fn random_systems_never_contradict_the_theorem(d in 2usize..=3, k_off in 0usize..2, size in 1usize..=3, seed in any::<u64>()) {
        let k = 1 + k_off % (d - 1);
        let sys = gen::gen_random_unplanted(d, 2 * d - k + 1, size, seed).unwrap();
        let sol = verify::verify_colorful_solutions(&sys, k, true).unwrap();
        prop_assert_ne!(sol.verdict, Verdict::Counterexample);
        let lifted = verify::lift_to_polyhedra(&sys);
        let poly = verify::verify_nonhomogeneous(&lifted, k, true).unwrap();
        prop_assert_eq!(poly.clone(), sol);
        let t: Vec<i64> = (0..d as i64).map(|i| (seed as i64 >> (4 * i)) % 7).collect();
        let t = RationalVector::from_ints(&t);
        let shifted: Vec<Vec<_>> = lifted.iter().map(|f| f.iter().map(|p| p.translate(&t)).collect()).collect();
        prop_assert_eq!(verify::verify_nonhomogeneous(&shifted, k, true).unwrap(), poly);
    }

    #[test]
    fn identical_colors_reduce_to_the_monochromatic_check(a in vector_set(5), k_off in 0usize..3) {
        let d = a.ambient_dim();
        prop_assume!(d >= 2);
        let k = 1 + k_off % (d - 1);
        let sys = ColoredSystem::copies(&a, 2 * d - k + 1).unwrap();
        let colorful = verify::verify_colorful_solutions(&sys, k, true).unwrap();
        let mono = verify::verify_monochromatic(&a, k).unwrap();
        prop_assert_eq!(colorful.verdict, mono.verdict);
    }

    #[test]
    fn vectors_roundtrip_through_json(v in prop::collection::vec((-50i64..=50, 1i64..=9), 0..6)) {
        let v = RationalVector::new(v.into_iter().map(|(n, d)| ratlin::ratio(n, d)).collect());
        let text = serde_json::to_string(&v).unwrap();
        let back: RationalVector = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        prop_assert_eq!(back, v);
    }
}

#[test]
fn extremal_systems_are_exact_for_small_dimensions() {
    for (d, k) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
        check_extremal(&gen::gen_extremal_colorful(d, k).unwrap(), k);
    }
}

/// Every rainbow sub-selection is thin and a full one keeps its lineality
/// inside the span of the first `k` coordinates.
fn check_extremal(sys: &ColoredSystem, k: usize) {
    let d = sys.ambient_dim();
    assert_eq!(sys.n_colors(), d + k - 1);
    for c in sys.colors() {
        assert!(cone::lineality_space(c).subspace.dim() >= k);
    }
    let ranges: Vec<Vec<Option<usize>>> = sys
        .colors()
        .iter()
        .map(|c| std::iter::once(None).chain((0..c.len()).map(Some)).collect())
        .collect();
    let base = Subspace::span(d, &(0..k).map(|i| RationalVector::unit(d, i)).collect::<Vec<_>>());
    for picks in itertools::Itertools::multi_cartesian_product(ranges.into_iter()) {
        let vs: Vec<RationalVector> = picks
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|i| sys.vector(c, i).clone()))
            .collect();
        let lin = cone::lineality_of(d, &vs).subspace;
        assert!(lin.dim() < k, "{vs:?}");
        if picks.iter().any(Option::is_none) {
            continue;
        }
        let slice: Vec<RationalVector> = vs.iter().filter(|v| base.contains(v)).cloned().collect();
        assert_eq!(lin, cone::lineality_of(d, &slice).subspace);
    }
}
