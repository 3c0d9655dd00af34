//! Finitely generated convex cones: positive hull membership, lineality
//! spaces, solution dimensions of homogeneous systems and positive bases.

use itertools::Itertools;
use num::{Signed, Zero};

use crate::error::{input, Result};
use crate::lp;
use crate::ratlin::{self, kernel_basis, Projector, Rational, RationalMatrix, RationalVector, Subspace};

/// Finite ordered set of vectors in `Q^d` without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorSet {
    vectors: Vec<RationalVector>,
    ambient_dim: usize,
}

impl VectorSet {
    pub fn new(ambient_dim: usize, vectors: Vec<RationalVector>) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != ambient_dim {
                return input(format!(
                    "vector {i} has dimension {} but the ambient dimension is {ambient_dim}",
                    v.dim()
                ));
            }
        }
        for (i, j) in (0..vectors.len()).tuple_combinations() {
            if vectors[i] == vectors[j] {
                return input(format!("vectors {i} and {j} are equal ({})", vectors[i]));
            }
        }
        Ok(Self { vectors, ambient_dim })
    }

    pub fn from_ints(ambient_dim: usize, vectors: &[&[i64]]) -> Result<Self> {
        Self::new(ambient_dim, vectors.iter().map(|v| RationalVector::from_ints(v)).collect())
    }

    pub fn vectors(&self) -> &[RationalVector] {
        &self.vectors
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, i: usize) -> &RationalVector {
        &self.vectors[i]
    }

    /// Errors when any vector is zero.
    pub fn require_nonzero(&self) -> Result<()> {
        match self.vectors.iter().position(RationalVector::is_zero) {
            Some(i) => input(format!("vector {i} is zero; nonzero vectors are required")),
            None => Ok(()),
        }
    }

    pub fn subset(&self, indices: &[usize]) -> VectorSet {
        VectorSet {
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
            ambient_dim: self.ambient_dim,
        }
    }

    /// Projected images with zero images and repeated images dropped. Each
    /// returned pair carries the index of the source vector.
    pub fn project(&self, p: &Projector) -> Vec<(usize, RationalVector)> {
        let mut out: Vec<(usize, RationalVector)> = Vec::new();
        for (i, v) in self.vectors.iter().enumerate() {
            let img = p.project(v);
            if !img.is_zero() && out.iter().all(|(_, w)| *w != img) {
                out.push((i, img));
            }
        }
        out
    }

    /// The projected images as a set of their own.
    pub fn projected_set(&self, p: &Projector) -> VectorSet {
        VectorSet {
            vectors: self.project(p).into_iter().map(|(_, v)| v).collect(),
            ambient_dim: self.ambient_dim,
        }
    }
}

/// Positive coefficients on indexed vectors whose combination is `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceCertificate {
    pub coefficients: Vec<(usize, Rational)>,
    pub value: RationalVector,
}

impl DependenceCertificate {
    /// Re-multiplies the certificate against `vectors` exactly.
    pub fn check(&self, vectors: &[RationalVector]) -> bool {
        let Some(first) = vectors.first() else {
            return self.coefficients.is_empty() && self.value.is_zero();
        };
        let mut acc = RationalVector::zeros(first.dim());
        for (i, c) in &self.coefficients {
            if !c.is_positive() || *i >= vectors.len() {
                return false;
            }
            acc = acc.add_scaled(c, &vectors[*i]);
        }
        acc == self.value
    }
}

fn check_dim(ambient_dim: usize, v: &RationalVector) -> Result<()> {
    if v.dim() != ambient_dim {
        return input(format!(
            "vector has dimension {} but the set lives in dimension {ambient_dim}",
            v.dim()
        ));
    }
    Ok(())
}

/// Decides `v ∈ pos vectors`; returns the witnessing combination when it is.
pub fn pos_combination(vectors: &[RationalVector], v: &RationalVector) -> Option<DependenceCertificate> {
    let x = lp::nonnegative_combination(vectors, v)?;
    let coefficients = x
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .collect();
    Some(DependenceCertificate {
        coefficients,
        value: v.clone(),
    })
}

/// Membership in the positive hull of `a`, with a certificate on success.
pub fn pos_membership(a: &VectorSet, v: &RationalVector) -> Result<Option<DependenceCertificate>> {
    check_dim(a.ambient_dim, v)?;
    Ok(pos_combination(&a.vectors, v))
}

/// Lineality space of a positive hull and the generators lying in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lineality {
    pub subspace: Subspace,
    pub generator_indices: Vec<usize>,
}

/// Lineality space of `pos vectors`, computed through generator membership:
/// `a_i` lies in it exactly when `-a_i ∈ pos vectors`.
///
/// Repeated vectors are allowed.
pub fn lineality_of(ambient_dim: usize, vectors: &[RationalVector]) -> Lineality {
    let n = vectors.len();
    let mut inside = vec![false; n];
    let mut decided = vec![false; n];
    for i in 0..n {
        if decided[i] {
            continue;
        }
        decided[i] = true;
        if let Some(cert) = pos_combination(vectors, &-&vectors[i]) {
            // -a_i = sum c_j a_j is a positive dependence through every j in its support.
            inside[i] = true;
            for (j, _) in cert.coefficients {
                inside[j] = true;
                decided[j] = true;
            }
        }
    }
    let generator_indices: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
    let gens: Vec<RationalVector> = generator_indices.iter().map(|&i| vectors[i].clone()).collect();
    Lineality {
        subspace: Subspace::span(ambient_dim, &gens),
        generator_indices,
    }
}

pub fn lineality_space(a: &VectorSet) -> Lineality {
    lineality_of(a.ambient_dim, &a.vectors)
}

/// Maximum number of linearly independent solutions of `<a, x> <= 0`.
///
/// Computed on the primal side: the vectors `U` not yet shown strict are
/// all implicit equalities exactly when
/// `{<a, x> <= 0 for all a, <sum U, x> <= -1}` is empty; otherwise the point
/// found makes at least one of them strict. The solution cone spans the
/// orthogonal complement of the implicit equalities.
pub fn solution_dimension_of(ambient_dim: usize, vectors: &[RationalVector]) -> Result<usize> {
    if let Some(i) = vectors.iter().position(RationalVector::is_zero) {
        return input(format!("vector {i} is zero; the system needs nonzero normals"));
    }
    let n = vectors.len();
    let mut strict = vec![false; n];
    let mut normals = vectors.to_vec();
    let mut offsets = vec![Rational::zero(); n + 1];
    offsets[n] = -ratlin::rat(1);
    normals.push(RationalVector::zeros(ambient_dim));
    loop {
        let open: Vec<usize> = (0..n).filter(|&i| !strict[i]).collect();
        if open.is_empty() {
            break;
        }
        let sum = open
            .iter()
            .fold(RationalVector::zeros(ambient_dim), |acc, &i| &acc + &vectors[i]);
        // A zero sum is a positive dependence: every open vector is implicit.
        if sum.is_zero() {
            break;
        }
        normals[n] = sum;
        match lp::polyhedron_point(ambient_dim, &normals, &offsets) {
            Some(x) => {
                for (j, a) in vectors.iter().enumerate() {
                    if a.dot(&x).is_negative() {
                        strict[j] = true;
                    }
                }
            }
            None => break,
        }
    }
    let implicit: Vec<RationalVector> = (0..n).filter(|&i| !strict[i]).map(|i| vectors[i].clone()).collect();
    Ok(ambient_dim - ratlin::rank_of(&implicit))
}

pub fn solution_dimension(a: &VectorSet) -> Result<usize> {
    solution_dimension_of(a.ambient_dim, &a.vectors)
}

/// `pos B = L` and no element of `B` can be dropped.
pub fn is_positive_basis(b: &VectorSet, l: &Subspace) -> Result<bool> {
    if l.ambient_dim() != b.ambient_dim {
        return input("set and subspace live in different dimensions");
    }
    if let Some(i) = b.vectors.iter().position(|v| !l.contains(v)) {
        return input(format!("vector {i} ({}) is not in the subspace", b.vectors[i]));
    }
    Ok(is_positive_basis_of(&b.vectors, l))
}

pub fn is_positive_basis_of(vectors: &[RationalVector], l: &Subspace) -> bool {
    if lineality_of(l.ambient_dim(), vectors).subspace != *l {
        return false;
    }
    (0..vectors.len()).all(|i| {
        let rest: Vec<RationalVector> = vectors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        lp::nonnegative_combination(&rest, &vectors[i]).is_none()
    })
}

/// If `vectors` is a minimal positive basis of its span, returns that span.
///
/// Test: `|B| >= 2`, `rank B = |B| - 1` and the one-dimensional space of
/// linear dependences has a strictly positive generator.
pub fn minimal_positive_basis_span(ambient_dim: usize, vectors: &[RationalVector]) -> Option<Subspace> {
    let n = vectors.len();
    if n < 2 {
        return None;
    }
    let coordinate_rows: Vec<RationalVector> = (0..ambient_dim)
        .map(|i| RationalVector::new(vectors.iter().map(|v| v[i].clone()).collect()))
        .collect();
    let m = RationalMatrix::from_rows(n, coordinate_rows).expect("rectangular");
    let ker = kernel_basis(&m);
    if ker.dim() != 1 {
        return None;
    }
    let g = &ker.basis()[0];
    let positive = g.coords().iter().all(|c| c.is_positive());
    let negative = g.coords().iter().all(|c| c.is_negative());
    if !(positive || negative) {
        return None;
    }
    Some(Subspace::span(ambient_dim, vectors))
}

pub fn is_minimal_positive_basis(b: &VectorSet) -> Option<Subspace> {
    minimal_positive_basis_span(b.ambient_dim, &b.vectors)
}

/// First subset of a positive basis that is a minimal positive basis of its
/// own span, searching by size and then lexicographically by index.
pub fn extract_minimal_positive_basis(b: &VectorSet) -> Result<Vec<usize>> {
    let span = Subspace::span(b.ambient_dim, &b.vectors);
    if !is_positive_basis_of(&b.vectors, &span) {
        return input("the set is not a positive basis of its span");
    }
    for size in 2..=b.len() {
        for subset in (0..b.len()).combinations(size) {
            let vs: Vec<RationalVector> = subset.iter().map(|&i| b.vectors[i].clone()).collect();
            if minimal_positive_basis_span(b.ambient_dim, &vs).is_some() {
                return Ok(subset);
            }
        }
    }
    // A nonempty positive basis always contains one; the empty set is the
    // positive basis of {0} and contains none.
    input("the set is the empty positive basis of the zero space")
}

/// Indices of a subset of `a` that is a positive basis of `lpos a`.
///
/// Starts from the generators inside the lineality space and drops, in index
/// order, each one that lies in the positive hull of those still kept.
pub fn positive_basis_of_lineality_of(ambient_dim: usize, vectors: &[RationalVector]) -> Result<Vec<usize>> {
    let lin = lineality_of(ambient_dim, vectors);
    if lin.subspace.is_trivial() {
        return input("no nontrivial lineality");
    }
    let mut kept = lin.generator_indices.clone();
    for &g in &lin.generator_indices {
        let rest: Vec<RationalVector> = kept
            .iter()
            .filter(|&&j| j != g)
            .map(|&j| vectors[j].clone())
            .collect();
        if lp::nonnegative_combination(&rest, &vectors[g]).is_some() {
            kept.retain(|&j| j != g);
        }
    }
    Ok(kept)
}

pub fn positive_basis_of_lineality(a: &VectorSet) -> Result<Vec<usize>> {
    positive_basis_of_lineality_of(a.ambient_dim, &a.vectors)
}

pub fn is_pointed(a: &VectorSet) -> bool {
    lineality_space(a).subspace.is_trivial()
}

/// `0 ∈ conv vectors`, with convex weights on success.
pub fn origin_in_convex_hull(vectors: &[RationalVector]) -> Option<Vec<Rational>> {
    let d = vectors.first()?.dim();
    let lifted: Vec<RationalVector> = vectors
        .iter()
        .map(|v| {
            let mut c = v.coords().to_vec();
            c.push(ratlin::rat(1));
            RationalVector::new(c)
        })
        .collect();
    let mut target = RationalVector::zeros(d + 1).into_coords();
    target[d] = ratlin::rat(1);
    lp::nonnegative_combination(&lifted, &RationalVector::new(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{orthogonal_projector, ratio};

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    fn set(d: usize, vs: &[&[i64]]) -> VectorSet {
        VectorSet::from_ints(d, vs).unwrap()
    }

    #[test]
    fn duplicates_and_dimension_mismatch_rejected() {
        assert!(VectorSet::from_ints(2, &[&[1, 0], &[1, 0]]).is_err());
        assert!(VectorSet::from_ints(2, &[&[1, 0], &[1, 0, 0]]).is_err());
        assert!(pos_membership(&set(2, &[&[1, 0]]), &v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn membership_examples() {
        let a = set(2, &[&[1, 0], &[0, 1]]);
        let cert = pos_membership(&a, &v(&[1, 2])).unwrap().unwrap();
        assert_eq!(cert.coefficients, vec![(0, ratlin::rat(1)), (1, ratlin::rat(2))]);
        assert!(cert.check(a.vectors()));
        assert!(pos_membership(&a, &v(&[-1, 0])).unwrap().is_none());
        let a = set(2, &[&[1, 1], &[1, -1]]);
        let cert = pos_membership(&a, &v(&[1, 0])).unwrap().unwrap();
        assert_eq!(cert.coefficients, vec![(0, ratio(1, 2)), (1, ratio(1, 2))]);
    }

    #[test]
    fn lineality_examples() {
        let l = lineality_space(&set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
        assert_eq!(l.subspace, Subspace::full(2));
        assert_eq!(l.generator_indices, vec![0, 1, 2, 3]);
        let l = lineality_space(&set(2, &[&[1, 0], &[0, 1]]));
        assert!(l.subspace.is_trivial());
        assert!(l.generator_indices.is_empty());
        let l = lineality_space(&set(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0]]));
        assert_eq!(l.subspace, Subspace::span(3, &[v(&[1, 0, 0])]));
        assert_eq!(l.generator_indices, vec![0, 1]);
    }

    #[test]
    fn solution_dimension_examples() {
        assert_eq!(solution_dimension(&set(3, &[&[1, 0, 0]])).unwrap(), 3);
        assert_eq!(solution_dimension(&set(3, &[&[1, 0, 0], &[-1, 0, 0]])).unwrap(), 2);
        let simplex = set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]);
        assert_eq!(solution_dimension(&simplex).unwrap(), 0);
        assert!(solution_dimension(&set(2, &[&[0, 0], &[1, 0]])).is_err());
    }

    #[test]
    fn positive_basis_examples() {
        let r2 = Subspace::full(2);
        assert!(is_positive_basis(&set(2, &[&[1, 0], &[0, 1], &[-1, -1]]), &r2).unwrap());
        let redundant = set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 1]]);
        assert!(!is_positive_basis(&redundant, &r2).unwrap());
        assert!(!is_positive_basis(&set(2, &[&[1, 0], &[0, 1]]), &r2).unwrap());
        let line = Subspace::span(2, &[v(&[1, 0])]);
        assert!(is_positive_basis(&set(2, &[&[0, 1]]), &line).is_err());
    }

    #[test]
    fn minimal_positive_basis_examples() {
        let simplex = set(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(is_minimal_positive_basis(&simplex), Some(Subspace::full(2)));
        assert_eq!(
            is_minimal_positive_basis(&set(2, &[&[1, 0], &[-1, 0]])),
            Some(Subspace::span(2, &[v(&[1, 0])]))
        );
        let halfplane = set(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(is_minimal_positive_basis(&halfplane), None);
        let lin = lineality_space(&halfplane);
        assert_ne!(lin.subspace, Subspace::full(2));
        assert_eq!(is_minimal_positive_basis(&set(2, &[&[1, 0]])), None);
    }

    #[test]
    fn extraction_examples() {
        let cross = set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(extract_minimal_positive_basis(&cross).unwrap(), vec![0, 1]);
        let simplex = set(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(extract_minimal_positive_basis(&simplex).unwrap(), vec![0, 1, 2]);
        let redundant = set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 1]]);
        assert!(extract_minimal_positive_basis(&redundant).is_err());
    }

    #[test]
    fn lineality_basis_examples() {
        let a = set(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(positive_basis_of_lineality(&a).unwrap(), vec![0, 1]);
        let cross = set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let basis = positive_basis_of_lineality(&cross).unwrap();
        assert_eq!(basis, vec![0, 1, 2, 3]);
        assert!(is_positive_basis(&cross.subset(&basis), &Subspace::full(2)).unwrap());
        assert!(positive_basis_of_lineality(&set(2, &[&[1, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn pointedness() {
        assert!(is_pointed(&set(2, &[&[1, 0], &[0, 1]])));
        assert!(!is_pointed(&set(2, &[&[1, 0], &[-1, 0]])));
        let a = set(2, &[&[1, 0], &[-1, 0], &[1, 1]]);
        let p = orthogonal_projector(&lineality_space(&a).subspace);
        let projected = a.projected_set(&p);
        assert_eq!(projected.vectors(), &[v(&[0, 1])]);
        assert!(is_pointed(&projected));
    }

    #[test]
    fn convex_hull_origin() {
        assert!(origin_in_convex_hull(&[v(&[1, 0]), v(&[-1, 0])]).is_some());
        assert!(origin_in_convex_hull(&[v(&[1, 0]), v(&[0, 1])]).is_none());
    }
}
