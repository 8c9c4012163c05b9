//! Exact phase-one simplex for cone membership.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Whether `target` is a nonnegative combination of `generators`.
///
/// Decides feasibility of `sum_j l_j g_j = target, l >= 0` over the
/// rationals with artificial variables and Bland's rule, so it terminates
/// on degenerate problems.
pub fn in_cone(generators: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    let m = target.len();
    let k = generators.len();
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let width = k + m;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = target[i].is_negative();
        let sign = |x: &BigInt| {
            let q = BigRational::from_integer(x.clone());
            if flip {
                -q
            } else {
                q
            }
        };
        let mut row: Vec<BigRational> = generators.iter().map(|g| sign(&g[i])).collect();
        row.extend((0..m).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))));
        rows.push(row);
        rhs.push(sign(&target[i]));
    }
    let mut basis: Vec<usize> = (k..width).collect();
    // Reduced costs of the phase-one objective `sum of artificials`.
    let mut cost: Vec<BigRational> = (0..width)
        .map(|j| {
            if j < k {
                -rows.iter().map(|r| r[j].clone()).sum::<BigRational>()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let mut value: BigRational = -rhs.iter().cloned().sum::<BigRational>();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !rows[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &rows[i][enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero.
        let (p, _) = leave.expect("bounded phase-one objective");
        let inv = rows[p][enter].recip();
        rows[p].iter_mut().for_each(|x| *x *= &inv);
        rhs[p] *= &inv;
        let pivot_row = rows[p].clone();
        let pivot_rhs = rhs[p].clone();
        for i in 0..m {
            if i == p || rows[i][enter].is_zero() {
                continue;
            }
            let f = rows[i][enter].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
            rhs[i] -= &f * &pivot_rhs;
        }
        let f = cost[enter].clone();
        for (x, y) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
        value -= &f * &pivot_rhs;
        basis[p] = enter;
    }
    value.is_zero()
}
