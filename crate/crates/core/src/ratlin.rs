//! Exact rational linear algebra: vectors, matrices, ranks, kernels, spans
//! and orthogonal projections.
//!
//! Everything here works over arbitrary-precision rationals and keeps each
//! entry in canonical (reduced, positive denominator) form, so equality of
//! two results is plain structural equality.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Arbitrary-precision rational number in canonical form.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, or `p/q` (whitespace tolerated around the parts).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = match n.parse() {
        Ok(n) => n,
        Err(_) => return input(format!("not a rational: {s:?}")),
    };
    let d: BigInt = match d.parse() {
        Ok(d) => d,
        Err(_) => return input(format!("not a rational: {s:?}")),
    };
    if d.is_zero() {
        return input(format!("zero denominator: {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// A point or direction in `Q^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Q^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, factor: &Rational, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }

    /// Embeds the vector into a larger ambient space by zero padding.
    pub fn pad_to(&self, dim: usize) -> Self {
        let mut coords = self.0.clone();
        coords.resize(dim, Rational::zero());
        Self(coords)
    }

    /// Positive multiple with coprime integer coordinates.
    pub fn primitive(&self) -> Self {
        use num::Integer;
        let mut lcm = BigInt::one();
        for c in &self.0 {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        let mut g = BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
        }
        if g.is_zero() {
            return self.clone();
        }
        Self(ints.into_iter().map(|n| Rational::from_integer(n / &g)).collect())
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: Self) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: Self) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_seq(VectorVisitor)
    }
}

struct VectorVisitor;

impl<'de> Visitor<'de> for VectorVisitor {
    type Value = RationalVector;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of rationals given as integers or \"p/q\" strings")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
        let mut coords = Vec::new();
        while let Some(entry) = seq.next_element::<RationalEntry>()? {
            coords.push(entry.0);
        }
        Ok(RationalVector(coords))
    }
}

/// Serde adapter accepting `"p/q"` strings and bare integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalEntry(pub Rational);

impl Serialize for RationalEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntryVisitor;
        impl<'de> Visitor<'de> for EntryVisitor {
            type Value = RationalEntry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(RationalEntry(rat(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(RationalEntry(Rational::from_integer(BigInt::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse_rational(v)
                    .map(RationalEntry)
                    .map_err(|e| E::custom(e.to_string()))
            }
        }
        deserializer.deserialize_any(EntryVisitor)
    }
}

/// Rectangular matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<RationalVector>,
    cols: usize,
}

impl RationalMatrix {
    pub fn from_rows(cols: usize, rows: Vec<RationalVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.dim() != cols) {
            return input(format!(
                "row {bad} has length {} but the matrix has {cols} columns",
                rows[bad].dim()
            ));
        }
        Ok(Self { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| RationalVector::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![RationalVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn rows(&self) -> &[RationalVector] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| RationalVector::new(self.rows.iter().map(|r| r[j].clone()).collect()))
            .collect();
        Self {
            rows,
            cols: self.rows.len(),
        }
    }

    pub fn mul_vec(&self, v: &RationalVector) -> RationalVector {
        RationalVector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }
}

/// Reduced row echelon form: nonzero rows with leading 1s and the pivot
/// column of each row.
pub(crate) fn rref(cols: usize, rows: &[RationalVector]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank over the rationals. The empty matrix has rank 0.
pub fn rank(m: &RationalMatrix) -> usize {
    rref(m.cols, &m.rows).1.len()
}

/// Rank of a list of vectors sharing one dimension.
pub fn rank_of(vectors: &[RationalVector]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => rref(v.dim(), vectors).1.len(),
    }
}

/// Basis of `{x : Mx = 0}` in canonical reduced echelon form.
pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    let (red, pivots) = rref(m.cols, &m.rows);
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Rational::zero(); m.cols];
        x[free] = Rational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            x[p] = -row[free].clone();
        }
        basis.push(RationalVector::new(x));
    }
    Subspace::span(m.cols, &basis)
}

/// Linear subspace of `Q^d`, stored by its canonical reduced echelon basis.
///
/// Two `Subspace` values are equal exactly when they are the same subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Vec<RationalVector>,
    pivots: Vec<usize>,
    ambient_dim: usize,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: Vec::new(),
            pivots: Vec::new(),
            ambient_dim,
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(
            ambient_dim,
            &(0..ambient_dim)
                .map(|i| RationalVector::unit(ambient_dim, i))
                .collect::<Vec<_>>(),
        )
    }

    pub fn span(ambient_dim: usize, vectors: &[RationalVector]) -> Self {
        debug_assert!(vectors.iter().all(|v| v.dim() == ambient_dim));
        let (red, pivots) = rref(ambient_dim, vectors);
        Self {
            basis: red.into_iter().map(RationalVector::new).collect(),
            pivots,
            ambient_dim,
        }
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -r[p].clone();
                r = r.add_scaled(&f, b);
            }
        }
        r.is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Smallest subspace containing both.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &all)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// Orthogonal projection onto the orthogonal complement of a subspace `L`.
///
/// Built from a rational (unnormalised) Gram-Schmidt basis of `L`, so every
/// image stays exact.
#[derive(Clone, Debug)]
pub struct Projector {
    ambient_dim: usize,
    orthogonal: Vec<(RationalVector, Rational)>,
}

impl Projector {
    pub fn identity(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            orthogonal: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the subspace being projected away.
    pub fn kernel_dim(&self) -> usize {
        self.orthogonal.len()
    }

    pub fn project(&self, v: &RationalVector) -> RationalVector {
        let mut out = v.clone();
        for (w, norm) in &self.orthogonal {
            let c = v.dot(w);
            if !c.is_zero() {
                out = out.add_scaled(&(-(c / norm)), w);
            }
        }
        out
    }
}

/// Returns the projector onto `L^⊥`.
pub fn orthogonal_projector(l: &Subspace) -> Projector {
    let mut orthogonal: Vec<(RationalVector, Rational)> = Vec::new();
    for b in l.basis() {
        let mut w = b.clone();
        for (u, norm) in &orthogonal {
            let c = b.dot(u);
            if !c.is_zero() {
                w = w.add_scaled(&(-(c / norm)), u);
            }
        }
        let norm = w.dot(&w);
        orthogonal.push((w, norm));
    }
    Projector {
        ambient_dim: l.ambient_dim(),
        orthogonal,
    }
}

/// Solves `sum_j coeffs[j] * columns[j] = target` when the columns are
/// linearly independent. Returns `None` if `target` is outside their span.
pub fn solve_independent(
    columns: &[RationalVector],
    target: &RationalVector,
) -> Option<Vec<Rational>> {
    let d = target.dim();
    let n = columns.len();
    // Augmented system, one row per coordinate.
    let rows: Vec<RationalVector> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            RationalVector::new(row)
        })
        .collect();
    let (red, pivots) = rref(n + 1, &rows);
    if pivots.contains(&n) || pivots.len() < n {
        return None;
    }
    Some(red.iter().take(n).map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        RationalMatrix::from_rows(cols, rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::identity(3)), 3);
        assert_eq!(rank(&RationalMatrix::zero(2, 4)), 0);
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank(&RationalMatrix::from_rows(3, vec![]).unwrap()), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(RationalMatrix::from_rows(2, vec![v(&[1, 2]), v(&[1])]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&mat(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(k, Subspace::span(3, &[v(&[0, 0, 1])]));
        assert_eq!(kernel_basis(&RationalMatrix::identity(4)).dim(), 0);
        let m = mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.basis(), &[v(&[1, -1, 1])]);
        assert!(m.mul_vec(&k.basis()[0]).is_zero());
    }

    #[test]
    fn projector_examples() {
        let p = orthogonal_projector(&Subspace::span(2, &[v(&[1, 0])]));
        assert_eq!(p.project(&v(&[3, 5])), v(&[0, 5]));
        let p = orthogonal_projector(&Subspace::zero(3));
        assert_eq!(p.project(&v(&[1, -2, 7])), v(&[1, -2, 7]));
        let p = orthogonal_projector(&Subspace::span(2, &[v(&[1, 1])]));
        let img = p.project(&v(&[1, 0]));
        assert_eq!(img, RationalVector::new(vec![ratio(1, 2), ratio(-1, 2)]));
    }

    #[test]
    fn subspace_membership_and_equality() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, &[v(&[1, 0, -1]), v(&[1, 2, 1])]);
        assert_eq!(a, b);
        assert!(a.contains(&v(&[2, 3, 1])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/8").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn solve_independent_columns() {
        let cols = [v(&[1, 1]), v(&[1, -1])];
        let sol = solve_independent(&cols, &v(&[1, 0])).unwrap();
        assert_eq!(sol, vec![ratio(1, 2), ratio(1, 2)]);
        assert!(solve_independent(&[v(&[1, 0, 0])], &v(&[0, 1, 0])).is_none());
    }
}
