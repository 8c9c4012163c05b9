//! Slow, independent re-implementations used to cross-check the main paths.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{OracleError, Result};
use crate::fan::{Fan, SmoothCompleteFan};
use crate::lattice::{LatticeVector, RaySet};
use crate::linalg::{self, Solution};
use crate::mori::{is_fano, CurveClass};

/// Largest fan [`brute_minimal_nonfaces`] accepts.
pub const BRUTE_RAY_LIMIT: usize = 16;
/// Largest generator count [`extremal_oracle`] accepts.
pub const ORACLE_CLASS_LIMIT: usize = 64;

/// Minimal non-faces by scanning every subset of the rays against the
/// maximal cones. Sorted by size, then lexicographically.
pub fn brute_minimal_nonfaces(fan: &Fan) -> Result<Vec<RaySet>> {
    let n = fan.num_rays();
    if n > BRUTE_RAY_LIMIT {
        return Err(OracleError::TooManyRays {
            count: n,
            limit: BRUTE_RAY_LIMIT,
        }
        .into());
    }
    let total = 1usize << n;
    let face: Vec<bool> = (0..total)
        .map(|bits| {
            let s = RaySet::from_indices((0..n).filter(|i| bits >> i & 1 == 1));
            fan.spans_cone(s)
        })
        .collect();
    let mut out: Vec<RaySet> = (0..total)
        .filter(|&bits| {
            !face[bits] && (0..n).filter(|i| bits >> i & 1 == 1).all(|i| face[bits & !(1 << i)])
        })
        .map(|bits| RaySet::from_indices((0..n).filter(|i| bits >> i & 1 == 1)))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(*b)));
    Ok(out)
}

fn primitive_part(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{y : a_i . y >= 0}` for a full-rank system, by the
/// double description method with the combinatorial adjacency test.
fn double_description(rows: &[Vec<BigInt>], r: usize) -> core::result::Result<Vec<Vec<BigInt>>, OracleError> {
    let q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| row.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let init = linalg::pivot_columns(&transpose(&q));
    if init.len() < r {
        return Err(OracleError::NotFullDimensional);
    }
    // The simplicial start cone: columns of the inverse of the first r
    // independent rows.
    let a: Vec<Vec<BigRational>> = init.iter().map(|&i| q[i].clone()).collect();
    let id: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let Solution::Unique(inv) = linalg::solve(&a, &id) else {
        return Err(OracleError::NotFullDimensional);
    };
    let mut rays: Vec<Vec<BigInt>> = (0..r)
        .map(|j| {
            let col: Vec<BigRational> = (0..r).map(|i| inv[i][j].clone()).collect();
            let l = col.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            primitive_part(col.iter().map(|x| (x * &l).to_integer()).collect())
        })
        .collect();
    let mut done: Vec<usize> = init.clone();
    for (k, row) in rows.iter().enumerate() {
        if init.contains(&k) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|y| dot(row, y)).collect();
        let zero_set = |y: &[BigInt], done: &[usize]| -> Vec<usize> {
            done.iter().copied().filter(|&i| dot(&rows[i], y).is_zero()).collect()
        };
        let zs: Vec<Vec<usize>> = rays.iter().map(|y| zero_set(y, &done)).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (y, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(y.clone());
            }
        }
        for (p, vp) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
            for (m, vm) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                let common: Vec<usize> = zs[p].iter().copied().filter(|i| zs[m].contains(i)).collect();
                if common.len() + 2 < r {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != m)
                    .all(|o| !common.iter().all(|i| zs[o].contains(i)));
                if !adjacent {
                    continue;
                }
                let y: Vec<BigInt> = rays[m]
                    .iter()
                    .zip(&rays[p])
                    .map(|(ym, yp)| vp * ym - vm * yp)
                    .collect();
                next.push(primitive_part(y));
            }
        }
        rays = next;
        done.push(k);
    }
    Ok(rays)
}

fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Whether `target` spans an extremal ray of the cone generated by `classes`.
///
/// Classes are projected to coordinates where they are independent, the
/// facets of their cone are found as the extreme rays of the dual cone, and
/// `target` is extremal when the facets through it cut out a line.
pub fn extremal_oracle(classes: &[CurveClass], target: &CurveClass) -> Result<bool> {
    if classes.is_empty() {
        return Err(OracleError::Empty.into());
    }
    if classes.len() > ORACLE_CLASS_LIMIT {
        return Err(OracleError::TooManyRays {
            count: classes.len(),
            limit: ORACLE_CLASS_LIMIT,
        }
        .into());
    }
    let q: Vec<Vec<BigRational>> = classes
        .iter()
        .map(|c| c.coeffs().iter().map(|&x| linalg::rational(x)).collect())
        .collect();
    let pivots = linalg::pivot_columns(&q);
    let r = pivots.len();
    let project = |c: &CurveClass| -> Vec<BigInt> { pivots.iter().map(|&j| BigInt::from(c.coeffs()[j])).collect() };
    let gens: Vec<Vec<BigInt>> = classes.iter().map(project).collect();
    let t = project(target);
    if t.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    if r == 1 {
        // A half-line, or a line when both signs occur.
        let sign = |v: &[BigInt]| v.iter().find(|x| !x.is_zero()).map(|x| x.is_positive());
        let signs: Vec<_> = gens.iter().filter_map(|g| sign(g)).collect();
        if signs.iter().any(|&s| s != signs[0]) {
            return Err(OracleError::NotPointed.into());
        }
        return Ok(sign(&t) == signs.first().copied());
    }
    let facets = double_description(&gens, r)?;
    let q: Vec<Vec<BigRational>> = facets
        .iter()
        .map(|f| f.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    if linalg::rank(&q) < r {
        return Err(OracleError::NotPointed.into());
    }
    if facets.iter().any(|f| dot(f, &t).is_negative()) {
        return Ok(false);
    }
    let tight: Vec<Vec<BigRational>> = facets
        .iter()
        .zip(q)
        .filter(|(f, _)| dot(f, &t).is_zero())
        .map(|(_, row)| row)
        .collect();
    Ok(!tight.is_empty() && linalg::rank(&tight) + 1 >= r)
}

/// One equivalence class of smooth complete toric surfaces.
#[derive(Clone, Debug)]
pub struct SurfaceClass {
    /// Self-intersections `D_i^2` around the cycle, canonically rotated and reflected.
    pub invariant: Vec<i64>,
    pub fan: Fan,
    pub fano: bool,
    /// Fans in the enumeration with this invariant.
    pub occurrences: usize,
}

#[derive(Clone, Debug)]
pub struct SurfaceCensusResult {
    pub bound: i64,
    pub total_complete: usize,
    pub classes: Vec<SurfaceClass>,
}

impl SurfaceCensusResult {
    pub fn fano_classes(&self) -> usize {
        self.classes.iter().filter(|c| c.fano).count()
    }

    pub fn fano_representatives(&self) -> impl Iterator<Item = &SurfaceClass> {
        self.classes.iter().filter(|c| c.fano)
    }
}

fn half(v: (i64, i64)) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| (a.1 * b.0).cmp(&(a.0 * b.1)))
}

fn det2(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Minimum over rotations and reflections of a cyclic sequence.
pub fn canonical_cycle(seq: &[i64]) -> Vec<i64> {
    let mut doubled = Vec::new();
    let mut out = Vec::new();
    canonical_cycle_into(seq, &mut doubled, &mut out);
    out
}

fn canonical_cycle_into(seq: &[i64], doubled: &mut Vec<i64>, out: &mut Vec<i64>) {
    let n = seq.len();
    out.clear();
    if n == 0 {
        return;
    }
    doubled.clear();
    doubled.extend_from_slice(seq);
    doubled.extend_from_slice(seq);
    doubled.extend(seq.iter().rev());
    doubled.extend(seq.iter().rev());
    let mut best = 0;
    for start in [0, 2 * n] {
        for k in start..start + n {
            if doubled[k..k + n] < doubled[best..best + n] {
                best = k;
            }
        }
    }
    out.extend_from_slice(&doubled[best..best + n]);
}

/// `D_i^2 = -det(v_{i-1}, v_{i+1})` for rays in counterclockwise order.
pub fn self_intersections(rays: &[(i64, i64)]) -> Vec<i64> {
    let n = rays.len();
    (0..n)
        .map(|i| -det2(rays[(i + n - 1) % n], rays[(i + 1) % n]))
        .collect()
}

/// First fan seen and number of fans.
type Bucket = (Vec<(i64, i64)>, usize);

/// Every smooth complete fan in `Z^2` with rays of sup-norm at most `bound`,
/// grouped by the self-intersection cycle.
pub fn surface_census(bound: i64) -> Result<SurfaceCensusResult> {
    let mut vs: Vec<(i64, i64)> = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if (x, y) != (0, 0) && x.gcd(&y) == 1 {
                vs.push((x, y));
            }
        }
    }
    vs.sort_by(|a, b| angle_cmp(*a, *b));
    let next: Vec<Vec<usize>> = (0..vs.len())
        .map(|i| (i + 1..vs.len()).filter(|&j| det2(vs[i], vs[j]) == 1).collect())
        .collect();
    let mut found: BTreeMap<Vec<i64>, Bucket> = BTreeMap::new();
    let mut total = 0;
    let mut path = Vec::new();
    let (mut rays, mut seq, mut doubled, mut key) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut alive = vec![false; vs.len()];
    for start in 0..vs.len() {
        for j in (start + 1..vs.len()).rev() {
            alive[j] = det2(vs[j], vs[start]) == 1 || next[j].iter().any(|&k| alive[k]);
        }
        path.clear();
        path.push(start);
        extend_cycle(&vs, &next, &alive, &mut path, &mut |cycle| {
            total += 1;
            rays.clear();
            rays.extend(cycle.iter().map(|&i| vs[i]));
            let n = rays.len();
            seq.clear();
            seq.extend((0..n).map(|i| -det2(rays[(i + n - 1) % n], rays[(i + 1) % n])));
            canonical_cycle_into(&seq, &mut doubled, &mut key);
            match found.get_mut(&key) {
                Some(entry) => entry.1 += 1,
                None => {
                    found.insert(key.clone(), (rays.clone(), 1));
                }
            }
        });
    }
    let mut classes = Vec::with_capacity(found.len());
    for (invariant, (rays, occurrences)) in found {
        let n = rays.len();
        let fan = Fan::new(
            2,
            rays.iter().map(|&(x, y)| LatticeVector::new(vec![x, y])).collect(),
            (0..n).map(|i| vec![i, (i + 1) % n]).collect(),
            None,
        )?;
        let fano = is_fano(&SmoothCompleteFan::new(fan.clone())?)?;
        classes.push(SurfaceClass {
            invariant,
            fan,
            fano,
            occurrences,
        });
    }
    Ok(SurfaceCensusResult {
        bound,
        total_complete: total,
        classes,
    })
}

/// Extends a counterclockwise chain of unimodular steps whose first ray is
/// the smallest in angular order, reporting each chain that closes up.
/// `alive` marks rays from which the chain can still close.
fn extend_cycle(
    vs: &[(i64, i64)],
    next: &[Vec<usize>],
    alive: &[bool],
    path: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let first = vs[path[0]];
    let tail = *path.last().expect("nonempty path");
    if path.len() >= 3 && det2(vs[tail], first) == 1 {
        emit(path);
    }
    for &j in next[tail].iter().filter(|&&j| alive[j]) {
        path.push(j);
        extend_cycle(vs, next, alive, path, emit);
        path.pop();
    }
}
