//! Exact linear algebra over `Z` and `Q`.
//!
//! Small dense problems only. Integer elimination first runs over checked
//! `i128` and repeats over [`BigInt`] when an intermediate leaves that range,
//! so every answer is exact.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

trait Exact: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    /// `None` on overflow or when the division leaves a remainder.
    fn div_exact(&self, other: &Self) -> Option<Self>;
}

impl Exact for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        (self.checked_rem(*other)? == 0).then(|| self / other)
    }
}

impl Exact for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(other);
        Zero::is_zero(&r).then_some(q)
    }
}

struct Elimination<T> {
    /// Common pivot at the end; the left block has become `delta * I`.
    delta: T,
    /// `delta * A^{-1}`.
    scaled_inverse: Vec<Vec<T>>,
    odd_swaps: bool,
}

/// Fraction-free Gauss-Jordan on `[A | I]`.
///
/// Outer `None`: overflow. Inner `None`: `A` is singular.
fn fraction_free_inverse<T: Exact>(a: &[Vec<T>]) -> Option<Option<Elimination<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::unit() } else { T::nil() }));
            r
        })
        .collect();
    let mut prev = T::unit();
    let mut odd_swaps = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_nil()) else {
            return Some(None);
        };
        if p != k {
            m.swap(p, k);
            odd_swaps = !odd_swaps;
        }
        let pivot_row = m[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = pivot.mul(x)?.sub(&f.mul(y)?)?.div_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    let scaled_inverse = m.into_iter().map(|row| row[n..].to_vec()).collect();
    Some(Some(Elimination {
        delta: prev,
        scaled_inverse,
        odd_swaps,
    }))
}

fn elimination(a: &[Vec<i64>]) -> Result<Option<Elimination<BigInt>>> {
    let small: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    if let Some(res) = fraction_free_inverse(&small) {
        return Ok(res.map(|e| Elimination {
            delta: BigInt::from(e.delta),
            scaled_inverse: e
                .scaled_inverse
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
            odd_swaps: e.odd_swaps,
        }));
    }
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    // Divisions in the fraction-free scheme are exact, so only overflow can
    // end the first pass early.
    fraction_free_inverse(&big).ok_or(Error::Overflow)
}

/// Determinant of a square integer matrix given by rows.
pub fn determinant(rows: &[Vec<i64>]) -> Result<BigInt> {
    if rows.is_empty() {
        return Ok(BigInt::one());
    }
    Ok(match elimination(rows)? {
        None => BigInt::zero(),
        Some(e) if e.odd_swaps => -e.delta,
        Some(e) => e.delta,
    })
}

/// Precomputed inverse of a simplicial cone's generator matrix.
///
/// For generators `g_1..g_d` (columns of `G`) a point `p` has cone
/// coordinates `G^{-1} p = (scaled_inverse * p) / delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFrame {
    det: i64,
    delta: i64,
    scaled_inverse: Vec<i64>,
    dim: usize,
}

impl ConeFrame {
    /// `None` when the generators are linearly dependent.
    pub fn new(generators: &[&[i64]]) -> Result<Option<Self>> {
        let dim = generators.len();
        let a: Vec<Vec<i64>> = (0..dim)
            .map(|i| generators.iter().map(|g| g[i]).collect())
            .collect();
        let Some(e) = elimination(&a)? else {
            return Ok(None);
        };
        let to_i64 = |x: &BigInt| x.to_i64().ok_or(Error::Overflow);
        let delta = to_i64(&e.delta)?;
        let det = if e.odd_swaps { -delta } else { delta };
        let scaled_inverse = e
            .scaled_inverse
            .iter()
            .flatten()
            .map(to_i64)
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Self {
            det,
            delta,
            scaled_inverse,
            dim,
        }))
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs() == 1
    }

    /// Numerators of the cone coordinates of `p` over the positive
    /// denominator `|det|`; their signs are the signs of the coordinates.
    pub fn numerators(&self, p: &[i64]) -> Result<Vec<i128>> {
        let sign: i128 = if self.delta < 0 { -1 } else { 1 };
        self.scaled_inverse
            .chunks(self.dim)
            .map(|row| {
                let mut acc: i128 = 0;
                for (&a, &x) in row.iter().zip(p) {
                    let t = (a as i128).checked_mul(x as i128).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(t).ok_or(Error::Overflow)?;
                }
                Ok(acc * sign)
            })
            .collect()
    }

    /// Whether `p` lies in the closed cone, returning coordinate numerators.
    pub fn contains(&self, p: &[i64]) -> Result<Option<Vec<i128>>> {
        let num = self.numerators(p)?;
        Ok(num.iter().all(|&c| c >= 0).then_some(num))
    }

    /// Positive common denominator of [`ConeFrame::numerators`].
    pub fn denominator(&self) -> i64 {
        self.delta.abs()
    }
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Columns holding the pivots of the reduced row echelon form.
pub fn pivot_columns(rows: &[Vec<BigRational>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    rref(&mut m, cols)
}

/// Integer entries are promoted to rationals.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| rational(x)).collect())
        .collect();
    rank(&m)
}

/// Outcome of solving `A X = B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Vec<BigRational>>),
    Inconsistent,
    Underdetermined,
}

/// Solves `A X = B` for `X` with `A` of shape `m x k` and `B` of shape `m x r`.
pub fn solve(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Solution {
    let k = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let pivots = rref(&mut m, k + b.first().map_or(0, Vec::len));
    if pivots.iter().any(|&c| c >= k) {
        return Solution::Inconsistent;
    }
    if pivots.len() < k {
        return Solution::Underdetermined;
    }
    Solution::Unique(m.into_iter().take(k).map(|row| row[k..].to_vec()).collect())
}

/// A lattice basis of the integer kernel `{v in Z^n : A v = 0}`.
///
/// Column operations reduce `A` to echelon form while recording the
/// unimodular transform; its columns past the pivots span the kernel.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    // Column operations applied to both `m` and `u`, where `u` is stored by rows.
    let col_axpy = |m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let t = &row[source] * q;
            row[target] -= t;
        }
    };
    let col_swap = |m: &mut [Vec<BigInt>], x: usize, y: usize| {
        for row in m.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut c = 0;
    for i in 0..m.len() {
        if c == n {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (c..n).filter(|&j| !m[i][j].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&j) = nonzero.first() {
                    col_swap(&mut m, c, j);
                    col_swap(&mut u, c, j);
                    c += 1;
                }
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&j| m[i][j].abs())
                .expect("nonempty");
            for &j in &nonzero {
                if j != p {
                    let q = m[i][j].div_floor(&m[i][p]);
                    col_axpy(&mut m, j, p, &q);
                    col_axpy(&mut u, j, p, &q);
                }
            }
        }
    }
    (c..n)
        .map(|j| {
            let mut v: Vec<BigInt> = u.iter().map(|row| row[j].clone()).collect();
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v.iter_mut().for_each(|x| *x = -&*x);
            }
            v.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Greatest common divisor of all maximal minors of the `n x k` matrix given
/// by columns `basis`, used to certify saturation. Only for tiny `n`.
pub fn maximal_minor_gcd(basis: &[Vec<i64>]) -> Result<BigInt> {
    let k = basis.len();
    let n = basis.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    let mut rows: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return Ok(BigInt::one());
    }
    loop {
        let sub: Vec<Vec<i64>> = rows
            .iter()
            .map(|&r| basis.iter().map(|col| col[r]).collect())
            .collect();
        g = g.gcd(&determinant(&sub)?);
        // next k-subset of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(g);
            }
            i -= 1;
            if rows[i] < n - k + i {
                break;
            }
        }
        rows[i] += 1;
        for j in i + 1..k {
            rows[j] = rows[j - 1] + 1;
        }
    }
}
