//! Reference oracles that share no code with the simplex routines.
//!
//! Feasibility of `{y : <r, y> <= c}` is decided by Fourier–Motzkin
//! elimination with Chernikov's history rule. Cone questions are then
//! answered through Farkas' lemma:
//!
//! - `b ∈ pos A` iff `{A y <= 0, <b, y> >= 1}` is empty;
//! - `a_i ∈ lpos A` iff `{A y <= 0, <a_i, y> <= -1}` is empty.

use std::collections::HashMap;

use num::{Signed, Zero};

use crate::ratlin::{rat, Rational, RationalVector, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Row {
    /// Positive rescaling making the first nonzero coefficient `±1`.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(Rational::abs) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

fn count(hist: &[bool]) -> usize {
    hist.iter().filter(|&&h| h).count()
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !x || *y)
}

/// Whether `{y : <rows[i], y> <= offsets[i]}` is nonempty.
pub fn fourier_motzkin_feasible(dim: usize, rows: &[RationalVector], offsets: &[Rational]) -> bool {
    assert_eq!(rows.len(), offsets.len());
    let n = rows.len();
    // Each row carries the set of original inequalities it combines.
    let mut system: Vec<(Row, Vec<bool>)> = rows
        .iter()
        .zip(offsets)
        .enumerate()
        .map(|(i, (r, c))| {
            let mut hist = vec![false; n];
            hist[i] = true;
            (
                Row {
                    coeffs: r.coords().to_vec(),
                    rhs: c.clone(),
                }
                .normalized(),
                hist,
            )
        })
        .collect();
    for (step, var) in (0..dim).enumerate() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for entry in system {
            let c = &entry.0.coeffs[var];
            if c.is_positive() {
                pos.push(entry);
            } else if c.is_negative() {
                neg.push(entry);
            } else {
                rest.push(entry);
            }
        }
        // Equal rows are kept once per history antichain: a row whose
        // history contains another copy's history is redundant.
        let mut seen: HashMap<Row, Vec<usize>> = HashMap::new();
        for (i, (r, _)) in rest.iter().enumerate() {
            seen.entry(r.clone()).or_default().push(i);
        }
        for (p, hp) in &pos {
            for (q, hq) in &neg {
                let hist: Vec<bool> = hp.iter().zip(hq).map(|(a, b)| *a || *b).collect();
                // Chernikov: after eliminating step + 1 variables a
                // nonredundant row combines at most step + 2 originals.
                if count(&hist) > step + 2 {
                    continue;
                }
                let (a, b) = (p.coeffs[var].clone(), -q.coeffs[var].clone());
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                let row = Row {
                    coeffs,
                    rhs: &p.rhs * &b + &q.rhs * &a,
                }
                .normalized();
                let copies = seen.entry(row.clone()).or_default();
                if copies.iter().any(|&i| subset(&rest[i].1, &hist)) {
                    continue;
                }
                if let Some(&i) = copies.iter().find(|&&i| subset(&hist, &rest[i].1)) {
                    rest[i].1 = hist;
                } else {
                    copies.push(rest.len());
                    rest.push((row, hist));
                }
            }
        }
        system = rest;
    }
    system.iter().all(|(r, _)| !r.rhs.is_negative())
}

fn homogeneous_plus(vectors: &[RationalVector], extra: RationalVector, extra_rhs: Rational) -> (Vec<RationalVector>, Vec<Rational>) {
    let mut rows = vectors.to_vec();
    let mut offsets = vec![Rational::zero(); rows.len()];
    rows.push(extra);
    offsets.push(extra_rhs);
    (rows, offsets)
}

/// `b ∈ pos vectors`.
pub fn in_positive_hull(dim: usize, vectors: &[RationalVector], b: &RationalVector) -> bool {
    let (rows, offsets) = homogeneous_plus(vectors, -b, rat(-1));
    !fourier_motzkin_feasible(dim, &rows, &offsets)
}

/// Lineality space of `pos vectors`, spanned by the implicit equalities of
/// `{<a, y> <= 0}`.
pub fn lineality_oracle(dim: usize, vectors: &[RationalVector]) -> Subspace {
    let inside: Vec<RationalVector> = vectors
        .iter()
        .filter(|a| {
            let (rows, offsets) = homogeneous_plus(vectors, (*a).clone(), rat(-1));
            !fourier_motzkin_feasible(dim, &rows, &offsets)
        })
        .cloned()
        .collect();
    Subspace::span(dim, &inside)
}
