//! Exact phase-one simplex.
//!
//! One routine decides every feasibility question in the crate: positive
//! hull membership, convex hull membership and emptiness of polyhedra. It
//! uses Bland's smallest-index rule, so it terminates on degenerate input.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::ratlin::{Rational, RationalVector};

/// Integer arithmetic for the fraction-free tableau. `None` signals overflow.
trait Exact: Clone + PartialEq + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn sign(&self) -> i8;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn div(&self, o: &Self) -> Self;
}

impl Exact for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Exact for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

struct Overflow;

/// Integer form of `sum_j x_j a_j = b`: each column (and `b`) is scaled by
/// the lcm of its denominators, and rows with negative right-hand side are
/// negated.
struct Scaled {
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    col_scale: Vec<BigInt>,
    rhs_scale: BigInt,
}

fn lcm_of_denominators<'a>(entries: impl Iterator<Item = &'a Rational>) -> BigInt {
    entries.fold(<BigInt as One>::one(), |acc, q| acc.lcm(q.denom()))
}

fn scale(columns: &[RationalVector], rhs: &RationalVector) -> Scaled {
    let m = rhs.dim();
    let col_scale: Vec<BigInt> = columns.iter().map(|c| lcm_of_denominators(c.coords().iter())).collect();
    let rhs_scale = lcm_of_denominators(rhs.coords().iter());
    let int = |q: &Rational, s: &BigInt| (q * Rational::from_integer(s.clone())).to_integer();
    let mut rows = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for i in 0..m {
        let flip = rhs[i].is_negative();
        let sign = |x: BigInt| if flip { -x } else { x };
        rows.push(columns.iter().zip(&col_scale).map(|(c, s)| sign(int(&c[i], s))).collect());
        b.push(sign(int(&rhs[i], &rhs_scale)));
    }
    Scaled {
        rows,
        rhs: b,
        col_scale,
        rhs_scale,
    }
}

/// Phase one on the scaled system. Returns the basic variables and their
/// numerators over the common denominator, or `None` when infeasible.
#[allow(clippy::type_complexity)]
fn phase_one<T: Exact>(sys: &Scaled) -> Result<Option<(Vec<(usize, BigInt)>, BigInt)>, Overflow> {
    let m = sys.rhs.len();
    let n = sys.col_scale.len();
    let conv = |b: &BigInt| T::from_big(b).ok_or(Overflow);

    // Rows whose own unit column can start the basis need no artificial.
    let mut basis: Vec<usize> = vec![usize::MAX; m];
    for j in 0..n {
        let mut hit = None;
        let mut unit = true;
        for i in 0..m {
            let x = &sys.rows[i][j];
            if x.is_zero() {
                continue;
            }
            if x.is_one() && hit.is_none() {
                hit = Some(i);
            } else {
                unit = false;
                break;
            }
        }
        if let (true, Some(i)) = (unit, hit) {
            if basis[i] == usize::MAX {
                basis[i] = j;
            }
        }
    }
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| basis[i] == usize::MAX).collect();
    let width = n + artificial_rows.len() + 1;
    let rhs_col = width - 1;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        for x in &sys.rows[i] {
            row.push(conv(x)?);
        }
        row.resize(width - 1, T::zero());
        row.push(conv(&sys.rhs[i])?);
        tab.push(row);
    }
    for (a, &i) in artificial_rows.iter().enumerate() {
        tab[i][n + a] = T::one();
        basis[i] = n + a;
    }
    // Reduced costs of the sum of artificials, scaled by the denominator.
    let mut cost = vec![T::zero(); width];
    for &i in &artificial_rows {
        for j in (0..n).chain([rhs_col]) {
            cost[j] = cost[j].sub(&tab[i][j]).ok_or(Overflow)?;
        }
    }
    let mut denom = T::one();

    // Artificial columns never re-enter once they have left the basis.
    while let Some(enter) = (0..n).find(|&j| cost[j].sign() < 0) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter].sign() <= 0 {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    // rhs_i / a_i versus rhs_l / a_l with positive a.
                    let lhs = tab[i][rhs_col].mul(&tab[l][enter]).ok_or(Overflow)?;
                    let rhs = tab[l][rhs_col].mul(&tab[i][enter]).ok_or(Overflow)?;
                    let d = lhs.sub(&rhs).ok_or(Overflow)?;
                    d.sign() < 0 || (d.sign() == 0 && basis[i] < basis[l])
                }
            };
            if better {
                leave = Some(i);
            }
        }
        // The phase-one objective is bounded below, so some row leaves.
        let r = leave.expect("phase-one objective is bounded");
        let p = tab[r][enter].clone();
        let pivot_row = tab[r].clone();
        let update = |row: &mut Vec<T>| -> Result<(), Overflow> {
            let f = row[enter].clone();
            for j in 0..width {
                let scaled = row[j].mul(&p).ok_or(Overflow)?;
                let v = if f.sign() == 0 || pivot_row[j].sign() == 0 {
                    scaled
                } else {
                    scaled.sub(&f.mul(&pivot_row[j]).ok_or(Overflow)?).ok_or(Overflow)?
                };
                row[j] = v.div(&denom);
            }
            Ok(())
        };
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r {
                update(row)?;
            }
        }
        update(&mut cost)?;
        denom = p;
        basis[r] = enter;
    }

    if cost[rhs_col].sign() != 0 {
        return Ok(None);
    }
    let values = basis
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b < n)
        .map(|(i, &b)| (b, tab[i][rhs_col].to_big()))
        .collect();
    Ok(Some((values, denom.to_big())))
}

/// Finds `x >= 0` with `sum_j x_j * columns[j] = rhs`, or `None` when the
/// system is infeasible.
///
/// All columns must have the length of `rhs`.
pub fn nonnegative_combination(columns: &[RationalVector], rhs: &RationalVector) -> Option<Vec<Rational>> {
    let n = columns.len();
    debug_assert!(columns.iter().all(|c| c.dim() == rhs.dim()));
    if rhs.is_zero() {
        return Some(vec![Rational::zero(); n]);
    }
    let sys = scale(columns, rhs);
    let solved = match phase_one::<i128>(&sys) {
        Ok(r) => r,
        Err(Overflow) => phase_one::<BigInt>(&sys).unwrap_or_else(|_| unreachable!("big integers do not overflow")),
    };
    let (values, denom) = solved?;
    let mut x = vec![Rational::zero(); n];
    for (j, num) in values {
        // x_j = col_scale_j * num / (denom * rhs_scale)
        x[j] = Rational::new(num * &sys.col_scale[j], &denom * &sys.rhs_scale);
    }
    Some(x)
}

/// Finds a point of `{x : <normals[i], x> <= offsets[i]}`, or `None` when the
/// polyhedron is empty.
pub fn polyhedron_point(
    dim: usize,
    normals: &[RationalVector],
    offsets: &[Rational],
) -> Option<RationalVector> {
    let m = normals.len();
    // x = x_plus - x_minus, plus one slack per inequality.
    let mut columns = Vec::with_capacity(2 * dim + m);
    for j in 0..dim {
        columns.push(RationalVector::new(normals.iter().map(|b| b[j].clone()).collect()));
    }
    for j in 0..dim {
        columns.push(RationalVector::new(normals.iter().map(|b| -b[j].clone()).collect()));
    }
    for i in 0..m {
        columns.push(RationalVector::unit(m, i));
    }
    let rhs = RationalVector::new(offsets.to_vec());
    let sol = nonnegative_combination(&columns, &rhs)?;
    Some(RationalVector::new(
        (0..dim).map(|j| &sol[j] - &sol[dim + j]).collect(),
    ))
}
