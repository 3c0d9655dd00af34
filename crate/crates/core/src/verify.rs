//! Colorful Helly verifiers for homogeneous linear systems, their lineality
//! form, the monochromatic special case, and systems of polyhedra.
//!
//! Each verifier runs two phases. Phase 1 searches every rainbow
//! sub-selection up to the Helly number for one that violates the
//! hypothesis; Phase 2 looks for a color satisfying the conclusion. The
//! theorems say Phase 2 cannot fail after Phase 1 passed with the right
//! number of colors, so such an outcome is reported as a counterexample.

use itertools::Itertools;
use num::Zero;

use crate::cone::{self, VectorSet};
use crate::error::{input, Result};
use crate::exec::Strategy;
use crate::lp;
use crate::rainbow::{first_bad_subselection, ColoredSystem, RainbowSelection, RainbowUniverse};
use crate::ratlin::{rat, Rational, RationalVector};

/// `m(k, d) = max{d + 1, 2(d - k + 1)}`.
pub fn helly_m(k: usize, d: usize) -> usize {
    (d + 1).max(2 * (d + 1 - k))
}

/// `h(k, d) = max{d + 1, 2(k + 1)}`.
pub fn helly_h(k: usize, d: usize) -> usize {
    (d + 1).max(2 * (k + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HellyParameters {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub h: usize,
}

pub fn helly_numbers(k: usize, d: usize) -> Result<HellyParameters> {
    if k < 1 || k > d {
        return input(format!("k = {k} is outside 1..={d}"));
    }
    Ok(HellyParameters {
        d,
        k,
        m: helly_m(k, d),
        h: helly_h(k, d),
    })
}

/// Checks `j k / (j - 1) + j <= h(k, d)` exactly for every
/// `1 <= j - 1 <= k <= d - 1` with `d <= d_max`. Returns the first failing
/// triple `(j, k, d)`.
pub fn lemma_inequality_failure(d_max: usize) -> Option<(usize, usize, usize)> {
    for d in 2..=d_max {
        for k in 1..d {
            let h = rat(helly_h(k, d) as i64);
            for j in 2..=k + 1 {
                let lhs = Rational::new((j * k).into(), (j - 1).into()) + rat(j as i64);
                if lhs > h {
                    return Some((j, k, d));
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    HypothesisFails,
    ConclusionHolds,
    /// Hypothesis holds and every color fails with the theorem's color
    /// count. Never produced by a correct implementation.
    Counterexample,
    /// Hypothesis holds and every color fails on an instance with fewer
    /// colors than the theorem needs.
    TightnessWitness,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::HypothesisFails => "hypothesis_fails",
            Verdict::ConclusionHolds => "conclusion_holds",
            Verdict::Counterexample => "counterexample",
            Verdict::TightnessWitness => "tightness_witness",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A rainbow sub-selection breaking the hypothesis and its measured value.
    ViolatingSelection { selection: RainbowSelection, value: usize },
    /// A subset of a single set breaking the hypothesis.
    ViolatingSubset { indices: Vec<usize>, value: usize },
    /// A color meeting the conclusion.
    SatisfyingColor { color: usize, value: usize },
    /// The measured value of every color, none meeting the conclusion.
    AllColorsFail { values: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub witness: Witness,
}

fn phase_two(values: Vec<usize>, good: impl Fn(usize) -> bool, enforce: bool) -> VerificationReport {
    match values.iter().position(|&v| good(v)) {
        Some(color) => VerificationReport {
            verdict: Verdict::ConclusionHolds,
            witness: Witness::SatisfyingColor {
                color,
                value: values[color],
            },
        },
        None => VerificationReport {
            verdict: if enforce {
                Verdict::Counterexample
            } else {
                Verdict::TightnessWitness
            },
            witness: Witness::AllColorsFail { values },
        },
    }
}

fn check_colorful_k(d: usize, k: usize) -> Result<()> {
    if k < 1 || k + 1 > d {
        return input(format!("k = {k} is outside 1..={}", d.saturating_sub(1)));
    }
    Ok(())
}

fn check_color_count(sys_colors: usize, expected: usize, enforce: bool) -> Result<()> {
    if enforce && sys_colors != expected {
        return input(format!("need exactly {expected} colors, got {sys_colors}"));
    }
    Ok(())
}

fn vector_universe(sys: &ColoredSystem) -> (RainbowUniverse, Vec<RationalVector>) {
    let keys: Vec<Vec<RationalVector>> = sys.colors().iter().map(|c| c.vectors().to_vec()).collect();
    RainbowUniverse::from_keys(&keys)
}

fn pick(items: &[RationalVector], ids: &[usize]) -> Vec<RationalVector> {
    ids.iter().map(|&i| items[i].clone()).collect()
}

fn solution_dim(d: usize, vectors: &[RationalVector]) -> usize {
    cone::solution_dimension_of(d, vectors).expect("nonzero vectors")
}

fn lineality_dim(d: usize, vectors: &[RationalVector]) -> usize {
    cone::lineality_of(d, vectors).subspace.dim()
}

/// Colorful Helly for `<a, x> <= 0`: if every rainbow sub-selection of at
/// most `m(k, d)` vectors has `k` independent solutions, some color does.
pub fn verify_colorful_solutions(sys: &ColoredSystem, k: usize, enforce_color_count: bool) -> Result<VerificationReport> {
    verify_colorful_solutions_with(sys, k, enforce_color_count, Strategy::default())
}

pub fn verify_colorful_solutions_with(
    sys: &ColoredSystem,
    k: usize,
    enforce_color_count: bool,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let d = sys.ambient_dim();
    check_colorful_k(d, k)?;
    sys.require_nonzero()?;
    check_color_count(sys.n_colors(), 2 * d - k + 1, enforce_color_count)?;
    let cap = if enforce_color_count { helly_m(k, d) } else { sys.n_colors() };
    let (universe, items) = vector_universe(sys);
    // Fewer than k solutions means a lineality space of dimension > d - k,
    // which needs at least d - k + 2 generators.
    let bad = |ids: &[usize]| solution_dim(d, &pick(&items, ids)) < k;
    if let Some(selection) = first_bad_subselection(&universe, d - k + 2, cap, &bad, strategy) {
        let value = solution_dim(d, &selection.vectors(sys));
        return Ok(VerificationReport {
            verdict: Verdict::HypothesisFails,
            witness: Witness::ViolatingSelection { selection, value },
        });
    }
    let values = sys.colors().iter().map(|c| solution_dim(d, c.vectors())).collect();
    Ok(phase_two(values, |v| v >= k, enforce_color_count))
}

/// Lineality form: if every rainbow sub-selection of at most `h(k, d)`
/// vectors has `dim lpos <= k`, some color does.
pub fn verify_colorful_lineality(sys: &ColoredSystem, k: usize, enforce_color_count: bool) -> Result<VerificationReport> {
    verify_colorful_lineality_with(sys, k, enforce_color_count, Strategy::default())
}

pub fn verify_colorful_lineality_with(
    sys: &ColoredSystem,
    k: usize,
    enforce_color_count: bool,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let d = sys.ambient_dim();
    check_colorful_k(d, k)?;
    check_color_count(sys.n_colors(), d + k + 1, enforce_color_count)?;
    let cap = if enforce_color_count { helly_h(k, d) } else { sys.n_colors() };
    let (universe, items) = vector_universe(sys);
    let bad = |ids: &[usize]| lineality_dim(d, &pick(&items, ids)) > k;
    if let Some(selection) = first_bad_subselection(&universe, k + 2, cap, &bad, strategy) {
        let value = lineality_dim(d, &selection.vectors(sys));
        return Ok(VerificationReport {
            verdict: Verdict::HypothesisFails,
            witness: Witness::ViolatingSelection { selection, value },
        });
    }
    let values = sys.colors().iter().map(|c| lineality_dim(d, c.vectors())).collect();
    Ok(phase_two(values, |v| v <= k, enforce_color_count))
}

/// Monochromatic form, checked directly over subsets: if every `B ⊆ A` with
/// `|B| <= m(k, d)` has `k` independent solutions, so does `A`.
pub fn verify_monochromatic(a: &VectorSet, k: usize) -> Result<VerificationReport> {
    let d = a.ambient_dim();
    check_colorful_k(d, k)?;
    a.require_nonzero()?;
    let cap = helly_m(k, d).min(a.len());
    for size in (d - k + 2)..=cap {
        for indices in (0..a.len()).combinations(size) {
            let value = solution_dim(d, a.subset(&indices).vectors());
            if value < k {
                return Ok(VerificationReport {
                    verdict: Verdict::HypothesisFails,
                    witness: Witness::ViolatingSubset { indices, value },
                });
            }
        }
    }
    let value = solution_dim(d, a.vectors());
    Ok(phase_two(vec![value], |v| v >= k, true))
}

/// `{x : <normals[i], x> <= offsets[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    ambient_dim: usize,
    normals: Vec<RationalVector>,
    offsets: Vec<Rational>,
}

impl Polyhedron {
    pub fn new(ambient_dim: usize, normals: Vec<RationalVector>, offsets: Vec<Rational>) -> Result<Self> {
        if normals.len() != offsets.len() {
            return input(format!(
                "{} normals but {} offsets",
                normals.len(),
                offsets.len()
            ));
        }
        if let Some(i) = normals.iter().position(|b| b.dim() != ambient_dim) {
            return input(format!("normal {i} does not live in dimension {ambient_dim}"));
        }
        Ok(Self {
            ambient_dim,
            normals,
            offsets,
        })
    }

    /// The cone `{x : <a, x> <= 0 for a in vectors}`.
    pub fn cone(ambient_dim: usize, vectors: &[RationalVector]) -> Result<Self> {
        Self::new(ambient_dim, vectors.to_vec(), vec![Rational::zero(); vectors.len()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn normals(&self) -> &[RationalVector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    /// `t + self`.
    pub fn translate(&self, t: &RationalVector) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            normals: self.normals.clone(),
            offsets: self.normals.iter().zip(&self.offsets).map(|(b, c)| c + b.dot(t)).collect(),
        }
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(b, c)| b.dot(x) <= *c)
    }
}

/// Largest `k` such that the intersection contains a translate of a
/// `k`-dimensional cone: 0 when the intersection is empty, else the number
/// of independent directions of the joint recession cone.
pub fn polyhedron_cone_dimension(polys: &[&Polyhedron]) -> Result<usize> {
    let Some(first) = polys.first() else {
        return input("no polyhedra given");
    };
    let d = first.ambient_dim;
    if polys.iter().any(|p| p.ambient_dim != d) {
        return input("polyhedra live in different dimensions");
    }
    Ok(pooled_cone_dimension(d, polys.iter().copied()))
}

fn pooled_cone_dimension<'a>(d: usize, polys: impl Iterator<Item = &'a Polyhedron> + Clone) -> usize {
    if !intersect(d, polys.clone()) {
        return 0;
    }
    recession_dimension(d, polys)
}

fn intersect<'a>(d: usize, polys: impl Iterator<Item = &'a Polyhedron> + Clone) -> bool {
    let normals: Vec<RationalVector> = polys.clone().flat_map(|p| p.normals.iter().cloned()).collect();
    let offsets: Vec<Rational> = polys.flat_map(|p| p.offsets.iter().cloned()).collect();
    lp::polyhedron_point(d, &normals, &offsets).is_some()
}

/// Independent directions of the joint recession cone.
fn recession_dimension<'a>(d: usize, polys: impl Iterator<Item = &'a Polyhedron>) -> usize {
    let nonzero: Vec<RationalVector> = polys
        .flat_map(|p| p.normals.iter().filter(|b| !b.is_zero()).cloned())
        .collect();
    solution_dim(d, &nonzero)
}

/// Families of polyhedra in a common dimension.
pub fn check_families(families: &[Vec<Polyhedron>]) -> Result<usize> {
    let Some(d) = families.iter().flatten().map(Polyhedron::ambient_dim).next() else {
        return input("no polyhedra given");
    };
    if let Some(i) = families.iter().position(Vec::is_empty) {
        return input(format!("family {i} is empty"));
    }
    if families.iter().flatten().any(|p| p.ambient_dim != d) {
        return input("polyhedra live in different dimensions");
    }
    Ok(d)
}

/// Colorful Helly for polyhedra: if every rainbow choice of at most
/// `m(k, d)` polyhedra intersects in a set containing a `k`-dimensional
/// cone, every member of some family contains a translate of one common
/// `k`-dimensional cone.
///
/// Phase 2 asks for every member of the family to be nonempty and for the
/// pooled recession cone of the family to have `k` independent directions.
pub fn verify_nonhomogeneous(families: &[Vec<Polyhedron>], k: usize, enforce_color_count: bool) -> Result<VerificationReport> {
    verify_nonhomogeneous_with(families, k, enforce_color_count, Strategy::default())
}

pub fn verify_nonhomogeneous_with(
    families: &[Vec<Polyhedron>],
    k: usize,
    enforce_color_count: bool,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let d = check_families(families)?;
    check_colorful_k(d, k)?;
    check_color_count(families.len(), 2 * d - k + 1, enforce_color_count)?;
    let cap = if enforce_color_count { helly_m(k, d) } else { families.len() };
    let (universe, items) = RainbowUniverse::from_keys(families);
    // With a common point every sub-selection intersects.
    let common = intersect(d, families.iter().flatten());
    let dim_of = |ids: &[usize]| {
        let polys = ids.iter().map(|&i| &items[i]);
        if common {
            recession_dimension(d, polys)
        } else {
            pooled_cone_dimension(d, polys)
        }
    };
    let bad = |ids: &[usize]| dim_of(ids) < k;
    let min_size = nonhomogeneous_min_size(d, k, common, families);
    if let Some(selection) = first_bad_subselection(&universe, min_size, cap, &bad, strategy) {
        let value = pooled_cone_dimension(d, selection.picks().iter().map(|&(c, i)| &families[c][i]));
        return Ok(VerificationReport {
            verdict: Verdict::HypothesisFails,
            witness: Witness::ViolatingSelection { selection, value },
        });
    }
    let values = families.iter().map(|f| family_cone_dimension(d, f)).collect();
    Ok(phase_two(values, |v| v >= k, enforce_color_count))
}

/// Smallest number of colors a bad rainbow selection can have. When all
/// polyhedra share a point, a bad selection needs `d - k + 2` nonzero
/// normals; otherwise a single empty polyhedron may already be bad.
fn nonhomogeneous_min_size(d: usize, k: usize, common: bool, families: &[Vec<Polyhedron>]) -> usize {
    if !common {
        return 1;
    }
    let widest: Vec<usize> = families
        .iter()
        .map(|f| f.iter().map(|p| p.normals.iter().filter(|b| !b.is_zero()).count()).max().unwrap_or(0))
        .sorted()
        .rev()
        .collect();
    let need = d - k + 2;
    let mut total = 0;
    for (size, w) in widest.iter().enumerate() {
        total += w;
        if total >= need {
            return size + 1;
        }
    }
    families.len() + 1
}

/// Dimension of the common cone whose translates lie in every member.
pub fn family_cone_dimension(d: usize, family: &[Polyhedron]) -> usize {
    if family
        .iter()
        .any(|p| lp::polyhedron_point(d, &p.normals, &p.offsets).is_none())
    {
        return 0;
    }
    recession_dimension(d, family.iter())
}

/// Each vector `a` of each color becomes the halfspace `<a, x> <= 0`.
pub fn lift_to_polyhedra(sys: &ColoredSystem) -> Vec<Vec<Polyhedron>> {
    let d = sys.ambient_dim();
    sys.colors()
        .iter()
        .map(|c| {
            c.vectors()
                .iter()
                .map(|a| Polyhedron::cone(d, std::slice::from_ref(a)).expect("one normal, one offset"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(d: usize, vs: &[&[i64]]) -> VectorSet {
        VectorSet::from_ints(d, vs).unwrap()
    }

    fn halfspaces(d: usize, rows: &[(&[i64], i64)]) -> Polyhedron {
        Polyhedron::new(
            d,
            rows.iter().map(|(b, _)| RationalVector::from_ints(b)).collect(),
            rows.iter().map(|&(_, c)| rat(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn helly_formulas() {
        for d in 1..=12 {
            assert_eq!(helly_numbers(d, d).unwrap().m, d + 1);
        }
        assert_eq!(helly_numbers(1, 3).unwrap().m, 6);
        let p = helly_numbers(2, 3).unwrap();
        assert_eq!(p.h, 6);
        assert_eq!(p.h, helly_m(1, 3));
        assert!(helly_numbers(0, 3).is_err());
        assert!(helly_numbers(4, 3).is_err());
        assert_eq!(lemma_inequality_failure(12), None);
    }

    #[test]
    fn identical_colors_hold() {
        // d = 2, k = 1: four copies of a halfplane's normals.
        let a = set(2, &[&[1, 0], &[1, 1]]);
        let sys = ColoredSystem::copies(&a, 4).unwrap();
        let r = verify_colorful_solutions(&sys, 1, true).unwrap();
        assert_eq!(r.verdict, Verdict::ConclusionHolds);
        assert_eq!(r.witness, Witness::SatisfyingColor { color: 0, value: 2 });
    }

    #[test]
    fn cross_copies_break_the_lineality_hypothesis() {
        // d = 3, k = 1: the square {±e_1, ±e_2} has a 2-dimensional lineality.
        let a = set(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0]]);
        let sys = ColoredSystem::copies(&a, 5).unwrap();
        let r = verify_colorful_lineality(&sys, 1, true).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFails);
        let Witness::ViolatingSelection { selection, value } = r.witness else {
            panic!("expected a selection");
        };
        assert_eq!(value, 2);
        assert_eq!(selection.picks(), &[(0, 0), (1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn both_phases_of_the_lineality_form() {
        let pointed = set(2, &[&[1, 0], &[0, 1]]);
        let full = set(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        let sys = ColoredSystem::new(2, vec![full.clone(), pointed, full.clone(), full]).unwrap();
        let r = verify_colorful_lineality(&sys, 1, true).unwrap();
        // Any rainbow triple of simplex vertices reassembles R^2.
        assert_eq!(r.verdict, Verdict::HypothesisFails);
        let loose = ColoredSystem::new(2, vec![set(2, &[&[1, 0], &[0, 1]]), set(2, &[&[1, 1]])]).unwrap();
        let r = verify_colorful_lineality(&loose, 1, false).unwrap();
        assert_eq!(r.verdict, Verdict::ConclusionHolds);
    }

    #[test]
    fn monochromatic_agrees_with_identical_colors() {
        for (a, k) in [
            (set(2, &[&[1, 0], &[0, 1], &[-1, -1]]), 1),
            (set(2, &[&[1, 0], &[-1, 0]]), 1),
            (set(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 2),
        ] {
            let d = a.ambient_dim();
            let mono = verify_monochromatic(&a, k).unwrap();
            let sys = ColoredSystem::copies(&a, 2 * d - k + 1).unwrap();
            let colorful = verify_colorful_solutions(&sys, k, true).unwrap();
            assert_eq!(mono.verdict, colorful.verdict);
        }
    }

    #[test]
    fn cone_dimension_examples() {
        let half = halfspaces(2, &[(&[1, 0], 0)]);
        assert_eq!(polyhedron_cone_dimension(&[&half]).unwrap(), 2);
        let square = halfspaces(2, &[(&[-1, 0], 0), (&[1, 0], 1), (&[0, -1], 0), (&[0, 1], 1)]);
        assert_eq!(polyhedron_cone_dimension(&[&square]).unwrap(), 0);
        let other = halfspaces(2, &[(&[-1, 0], 0)]);
        assert_eq!(polyhedron_cone_dimension(&[&half, &other]).unwrap(), 1);
        let apart = halfspaces(2, &[(&[-1, 0], -1)]);
        assert_eq!(polyhedron_cone_dimension(&[&half, &apart]).unwrap(), 0);
        let three = halfspaces(3, &[(&[1, 0, 0], 0)]);
        assert!(polyhedron_cone_dimension(&[&half, &three]).is_err());
    }

    #[test]
    fn lifted_instances_match() {
        let a = set(2, &[&[1, 0], &[1, 1]]);
        let b = set(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        let sys = ColoredSystem::new(2, vec![a.clone(), b.clone(), a, b]).unwrap();
        let homogeneous = verify_colorful_solutions(&sys, 1, true).unwrap();
        let lifted = verify_nonhomogeneous(&lift_to_polyhedra(&sys), 1, true).unwrap();
        assert_eq!(homogeneous, lifted);
    }

    #[test]
    fn bounded_member_sinks_its_family() {
        let square = halfspaces(2, &[(&[-1, 0], 0), (&[1, 0], 1), (&[0, -1], 0), (&[0, 1], 1)]);
        let half = halfspaces(2, &[(&[1, 0], 0)]);
        assert_eq!(family_cone_dimension(2, &[half.clone(), square]), 0);
        assert_eq!(family_cone_dimension(2, &[half]), 2);
    }

    #[test]
    fn zero_vectors_rejected() {
        let sys = ColoredSystem::new(2, vec![VectorSet::new(2, vec![RationalVector::zeros(2)]).unwrap(); 4]).unwrap();
        assert!(verify_colorful_solutions(&sys, 1, true).is_err());
    }
}
