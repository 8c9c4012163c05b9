//! Fans described by named rays and their primitive relations.
//!
//! A [`Presentation`] is the symbolic form the classification tables use:
//! ray names plus the complete list of primitive relations. [`realize`]
//! rebuilds coordinates from it and certifies the result.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, PresentationError, Result};
use crate::fan::{Fan, SmoothCompleteFan};
use crate::lattice::{LatticeVector, RaySet, MAX_RAYS};
use crate::linalg::{self, Solution};
use crate::primitive::primitive_relations;

/// `sum_{i in lhs} x_i = sum_j a_j y_j`, over ray indices of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: RaySet,
    /// Sorted by ray, coefficients positive; empty means `= 0`.
    pub rhs: Vec<(usize, i64)>,
}

impl Relation {
    pub fn new(lhs: RaySet, mut rhs: Vec<(usize, i64)>) -> Self {
        rhs.sort_unstable();
        Self { lhs, rhs }
    }

    pub fn degree(&self) -> i64 {
        self.lhs.len() as i64 - self.rhs.iter().map(|&(_, a)| a).sum::<i64>()
    }

    fn row(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for i in self.lhs {
            v[i] += 1;
        }
        for &(j, a) in &self.rhs {
            v[j] -= a;
        }
        v
    }

    fn mapped(&self, map: &[usize]) -> Relation {
        Relation::new(
            self.lhs.map(|i| map[i]),
            self.rhs.iter().map(|&(j, a)| (map[j], a)).collect(),
        )
    }

    fn shape(&self) -> (usize, Vec<i64>) {
        let mut c: Vec<i64> = self.rhs.iter().map(|&(_, a)| a).collect();
        c.sort_unstable();
        (self.lhs.len(), c)
    }
}

fn relation_order(a: &Relation, b: &Relation) -> core::cmp::Ordering {
    a.lhs
        .len()
        .cmp(&b.lhs.len())
        .then_with(|| a.lhs.lex_cmp(b.lhs))
        .then_with(|| a.rhs.cmp(&b.rhs))
}

/// Left-hand names and `(name, coefficient)` pairs on the right.
pub type NamedRelation<'a> = (Vec<&'a str>, Vec<(&'a str, i64)>);

type RelationKey = (Vec<usize>, Vec<(usize, i64)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    dim: usize,
    names: Vec<String>,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Relations are sorted by left-hand side size, then lexicographically.
    pub fn new(dim: usize, names: Vec<String>, mut relations: Vec<Relation>) -> Result<Self> {
        let bad = |msg: String| Error::Presentation(PresentationError::Malformed(msg));
        if names.len() > MAX_RAYS {
            return Err(Error::TooManyRays {
                count: names.len(),
                limit: MAX_RAYS,
            });
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(bad(format!("ray name {n:?} repeated")));
            }
        }
        let n = names.len();
        for r in &mut relations {
            r.rhs.sort_unstable();
            if r.lhs.len() < 2 {
                return Err(bad(format!("left-hand side {:?} has fewer than two rays", r.lhs)));
            }
            if r.lhs.max().is_some_and(|m| m >= n) || r.rhs.iter().any(|&(j, _)| j >= n) {
                return Err(bad("relation refers to an unknown ray".to_owned()));
            }
            if r.rhs.iter().any(|&(_, a)| a <= 0) {
                return Err(bad("right-hand side coefficients must be positive".to_owned()));
            }
            if r.rhs.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(bad("right-hand side repeats a ray".to_owned()));
            }
            if r.rhs.iter().any(|&(j, _)| r.lhs.contains(j)) {
                return Err(bad("a ray appears on both sides of a relation".to_owned()));
            }
        }
        relations.sort_by(relation_order);
        for (i, a) in relations.iter().enumerate() {
            for b in &relations[i + 1..] {
                if a.lhs.is_subset(b.lhs) || b.lhs.is_subset(a.lhs) {
                    return Err(bad(format!(
                        "left-hand sides {:?} and {:?} are nested",
                        a.lhs, b.lhs
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            names,
            relations,
        })
    }

    /// Builds a presentation from ray names used in the relations.
    pub fn from_names(
        dim: usize,
        names: Vec<String>,
        relations: &[NamedRelation<'_>],
    ) -> Result<Self> {
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let look = |s: &str| {
            index.get(s).copied().ok_or_else(|| {
                Error::Presentation(PresentationError::Malformed(format!("unknown ray name {s:?}")))
            })
        };
        let rels = relations
            .iter()
            .map(|(lhs, rhs)| {
                let l = lhs.iter().map(|s| look(s)).collect::<Result<Vec<_>>>()?;
                let set = RaySet::from_indices(l.iter().copied());
                if set.len() != l.len() {
                    return Err(Error::Presentation(PresentationError::Malformed(
                        "left-hand side repeats a ray".to_owned(),
                    )));
                }
                let r = rhs
                    .iter()
                    .map(|&(s, a)| Ok((look(s)?, a)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation::new(set, r))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, names, rels)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_rays(&self) -> usize {
        self.names.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `x1+x2+x3+x4 = 2 x5`, or `... = 0`.
    pub fn format_relation(&self, r: &Relation) -> String {
        format_relation_with(r, |i| self.names[i].as_str())
    }

    /// The same presentation with one relation replaced; used to build
    /// deliberately inconsistent inputs.
    pub fn with_relation_replaced(&self, index: usize, relation: Relation) -> Result<Self> {
        let mut rels = self.relations.clone();
        rels[index] = relation;
        Self::new(self.dim, self.names.clone(), rels)
    }
}

pub fn format_relation_with<'a>(r: &Relation, name: impl Fn(usize) -> &'a str) -> String {
    let mut s = String::new();
    for (k, i) in r.lhs.iter().enumerate() {
        if k > 0 {
            s.push('+');
        }
        s.push_str(name(i));
    }
    s.push_str(" = ");
    if r.rhs.is_empty() {
        s.push('0');
    }
    for (k, &(j, a)) in r.rhs.iter().enumerate() {
        if k > 0 {
            s.push_str(" + ");
        }
        if a != 1 {
            s.push_str(&format!("{a} "));
        }
        s.push_str(name(j));
    }
    s
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.relations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.format_relation(r))?;
        }
        Ok(())
    }
}

/// Sets of rays containing no left-hand side, up to size `dim`, found by
/// depth-first extension in index order. Returns the `dim`-sets.
fn candidate_cones(p: &Presentation) -> Vec<RaySet> {
    fn extend(
        p: &Presentation,
        current: RaySet,
        next: usize,
        out: &mut Vec<RaySet>,
    ) {
        if current.len() == p.dim {
            out.push(current);
            return;
        }
        let n = p.num_rays();
        let missing = p.dim - current.len();
        for j in next..n {
            if n - j < missing {
                break;
            }
            let s = current.with(j);
            if p.relations.iter().any(|r| r.lhs.is_subset(s)) {
                continue;
            }
            extend(p, s, j + 1, out);
        }
    }
    let mut out = Vec::new();
    extend(p, RaySet::EMPTY, 0, &mut out);
    out
}

pub fn realize(p: &Presentation) -> Result<Fan> {
    realize_with_seed(p, None)
}

/// Realizes `p`, assigning the standard basis to `seed` (or to the first
/// candidate cone that determines the remaining rays).
pub fn realize_with_seed(p: &Presentation, seed: Option<RaySet>) -> Result<Fan> {
    let n = p.num_rays();
    let d = p.dim;
    if n < d || d == 0 {
        return Err(PresentationError::Malformed(format!("{n} rays in dimension {d}")).into());
    }
    let rho = n - d;
    let rows: Vec<Vec<i64>> = p.relations.iter().map(|r| r.row(n)).collect();
    let rank = linalg::rank_i64(&rows);
    if rank < rho {
        return Err(PresentationError::Underdetermined {
            rank,
            expected: rho,
        }
        .into());
    }
    if rank > rho {
        return Err(PresentationError::Inconsistent(format!(
            "relations have rank {rank} but {n} rays in dimension {d} allow only {rho}"
        ))
        .into());
    }
    let cones = candidate_cones(p);
    let seeds: Vec<RaySet> = match seed {
        Some(s) if cones.contains(&s) => vec![s],
        Some(_) => return Err(PresentationError::NoSeedCone.into()),
        None => cones.clone(),
    };
    let mut solved = None;
    for s in seeds {
        match solve_coordinates(&rows, s, n, d) {
            Solution::Unique(x) => {
                solved = Some((s, x));
                break;
            }
            Solution::Inconsistent => {
                return Err(PresentationError::Inconsistent(
                    "relations are not simultaneously satisfiable".to_owned(),
                )
                .into())
            }
            Solution::Underdetermined => continue,
        }
    }
    let (seed, x) = solved.ok_or(PresentationError::NoSeedCone)?;

    let mut rays = vec![LatticeVector::zero(d); n];
    for (k, i) in seed.iter().enumerate() {
        rays[i] = LatticeVector::basis(d, k);
    }
    for (row, j) in x.into_iter().zip((0..n).filter(|&j| !seed.contains(j))) {
        let coords = row
            .iter()
            .map(|q| {
                if !q.is_integer() {
                    return Err(Error::from(PresentationError::NonIntegral));
                }
                let z = q.to_integer();
                if z.is_zero() {
                    Ok(0)
                } else {
                    z.to_i64().ok_or(Error::Overflow)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rays[j] = LatticeVector::new(coords);
    }
    let fan = Fan::new(
        d,
        rays,
        cones.iter().map(|c| c.to_vec()).collect(),
        Some(p.names.clone()),
    )
    .map_err(|e| PresentationError::Inconsistent(format!("realized rays are malformed: {e}")))?;
    let checked = match SmoothCompleteFan::new(fan) {
        Ok(f) => f,
        Err(Error::InvalidFan(report)) => {
            return Err(PresentationError::NotSmoothComplete(report).into())
        }
        Err(e) => return Err(e),
    };
    let recomputed = presentation_of(&checked)?;
    if let Some(msg) = first_difference(p, &recomputed) {
        return Err(PresentationError::Inconsistent(msg).into());
    }
    Ok(checked.into_fan())
}

fn solve_coordinates(rows: &[Vec<i64>], seed: RaySet, n: usize, d: usize) -> Solution {
    let unknown: Vec<usize> = (0..n).filter(|&j| !seed.contains(j)).collect();
    let seed_rays: Vec<usize> = seed.to_vec();
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| unknown.iter().map(|&j| linalg::rational(r[j])).collect())
        .collect();
    let b: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            (0..d)
                .map(|k| linalg::rational(-r[seed_rays[k]]))
                .collect()
        })
        .collect();
    linalg::solve(&a, &b)
}

fn first_difference(expected: &Presentation, found: &Presentation) -> Option<String> {
    for r in &expected.relations {
        if !found.relations.contains(r) {
            let actual = found
                .relations
                .iter()
                .find(|f| f.lhs == r.lhs)
                .map(|f| found.format_relation(f));
            return Some(match actual {
                Some(a) => format!(
                    "expected {} but the fan has {}",
                    expected.format_relation(r),
                    a
                ),
                None => format!(
                    "{} is not a primitive relation of the fan",
                    expected.format_relation(r)
                ),
            });
        }
    }
    found
        .relations
        .iter()
        .find(|r| !expected.relations.contains(r))
        .map(|r| format!("missing relation {}", found.format_relation(r)))
}

/// The presentation of a fan: its labels (or `r{i}`) and all primitive relations.
pub fn presentation_of(fan: &SmoothCompleteFan) -> Result<Presentation> {
    let names: Vec<String> = (0..fan.num_rays()).map(|i| fan.fan().ray_name(i)).collect();
    let relations: Vec<Relation> = primitive_relations(fan)?
        .into_iter()
        .map(|r| Relation::new(r.lhs(), r.rhs))
        .collect();
    Presentation::new(fan.dim(), names, relations)
}

/// Color refinement on the ray/relation incidence structure of both
/// presentations at once, so colors are comparable across them.
fn refine(a: &Presentation, b: &Presentation) -> (Vec<usize>, Vec<usize>) {
    type Key = Vec<i64>;
    let sides = [a, b];
    let mut ray_colors: [Vec<usize>; 2] = [vec![0; a.num_rays()], vec![0; b.num_rays()]];
    let mut classes = 1;
    for _ in 0..=a.num_rays() + 1 {
        // relation colors from current ray colors
        let mut rel_dict: BTreeMap<Key, usize> = BTreeMap::new();
        let rel_keys: [Vec<Key>; 2] = core::array::from_fn(|s| {
            sides[s]
                .relations
                .iter()
                .map(|r| {
                    let (l, c) = r.shape();
                    let mut key = vec![l as i64];
                    key.extend(c);
                    let mut lhs: Vec<i64> = r.lhs.iter().map(|i| ray_colors[s][i] as i64).collect();
                    lhs.sort_unstable();
                    let mut rhs: Vec<(i64, i64)> =
                        r.rhs.iter().map(|&(j, x)| (ray_colors[s][j] as i64, x)).collect();
                    rhs.sort_unstable();
                    key.push(-1);
                    key.extend(lhs);
                    key.push(-2);
                    key.extend(rhs.into_iter().flat_map(|(c, x)| [c, x]));
                    key
                })
                .collect()
        });
        for keys in &rel_keys {
            for k in keys {
                let next = rel_dict.len();
                rel_dict.entry(k.clone()).or_insert(next);
            }
        }
        let rel_colors: [Vec<usize>; 2] =
            core::array::from_fn(|s| rel_keys[s].iter().map(|k| rel_dict[k]).collect());
        // ray colors from incident relation colors
        let mut ray_dict: BTreeMap<Key, usize> = BTreeMap::new();
        let ray_keys: [Vec<Key>; 2] = core::array::from_fn(|s| {
            let p = sides[s];
            let mut inc: Vec<Vec<(i64, i64)>> = vec![Vec::new(); p.num_rays()];
            for (r, &c) in p.relations.iter().zip(&rel_colors[s]) {
                for i in r.lhs {
                    inc[i].push((c as i64, 0));
                }
                for &(j, x) in &r.rhs {
                    inc[j].push((c as i64, x));
                }
            }
            inc.into_iter()
                .enumerate()
                .map(|(i, mut v)| {
                    v.sort_unstable();
                    let mut key = vec![ray_colors[s][i] as i64];
                    key.extend(v.into_iter().flat_map(|(c, x)| [c, x]));
                    key
                })
                .collect()
        });
        for keys in &ray_keys {
            for k in keys {
                let next = ray_dict.len();
                ray_dict.entry(k.clone()).or_insert(next);
            }
        }
        ray_colors = core::array::from_fn(|s| ray_keys[s].iter().map(|k| ray_dict[k]).collect());
        if ray_dict.len() == classes {
            break;
        }
        classes = ray_dict.len();
    }
    let [ca, cb] = ray_colors;
    (ca, cb)
}

/// A bijection of ray indices (`map[a_index] = b_index`) carrying the
/// relations of `a` onto those of `b`, if one exists.
pub fn isomorphic(a: &Presentation, b: &Presentation) -> Option<Vec<usize>> {
    if a.dim != b.dim
        || a.num_rays() != b.num_rays()
        || a.relations.len() != b.relations.len()
    {
        return None;
    }
    let mut sa: Vec<_> = a.relations.iter().map(Relation::shape).collect();
    let mut sb: Vec<_> = b.relations.iter().map(Relation::shape).collect();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let (ca, cb) = refine(a, b);
    let mut hist_a = ca.clone();
    let mut hist_b = cb.clone();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return None;
    }
    let n = a.num_rays();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| cb[j] == ca[i]).collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut position = vec![0; n];
    for (t, &i) in order.iter().enumerate() {
        position[i] = t;
    }
    // relations of `a` checked once their last ray (in search order) is placed
    let mut completes: Vec<Vec<&Relation>> = vec![Vec::new(); n];
    for r in &a.relations {
        let last = r
            .lhs
            .iter()
            .chain(r.rhs.iter().map(|&(j, _)| j))
            .map(|i| position[i])
            .max()
            .expect("nonempty relation");
        completes[last].push(r);
    }
    let targets: BTreeSet<RelationKey> = b
        .relations
        .iter()
        .map(|r| (r.lhs.to_vec(), r.rhs.clone()))
        .collect();

    struct Search<'a> {
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        completes: Vec<Vec<&'a Relation>>,
        targets: BTreeSet<RelationKey>,
        map: Vec<usize>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn run(&mut self, t: usize) -> bool {
            if t == self.order.len() {
                return true;
            }
            let i = self.order[t];
            for k in 0..self.candidates[i].len() {
                let j = self.candidates[i][k];
                if self.used[j] {
                    continue;
                }
                self.map[i] = j;
                self.used[j] = true;
                let ok = self.completes[t].iter().all(|r| {
                    let m = r.mapped(&self.map);
                    self.targets.contains(&(m.lhs.to_vec(), m.rhs))
                });
                if ok && self.run(t + 1) {
                    return true;
                }
                self.used[j] = false;
            }
            false
        }
    }
    let mut search = Search {
        order,
        candidates,
        completes,
        targets,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    search.run(0).then_some(search.map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::tests::p2;
    use alloc::string::ToString;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p2_presentation() -> Presentation {
        Presentation::from_names(
            2,
            names(&["x1", "x2", "x3"]),
            &[(vec!["x1", "x2", "x3"], vec![])],
        )
        .unwrap()
    }

    #[test]
    fn realizes_the_projective_plane() {
        let fan = realize(&p2_presentation()).unwrap();
        assert_eq!(fan.num_rays(), 3);
        assert_eq!(fan.max_cones().len(), 3);
        assert_eq!(fan.ray(2).coords(), &[-1, -1]);
    }

    #[test]
    fn presentation_of_projective_plane() {
        let f = SmoothCompleteFan::new(p2()).unwrap();
        let p = presentation_of(&f).unwrap();
        assert_eq!(p.names(), &names(&["r0", "r1", "r2"])[..]);
        assert_eq!(p.to_string(), "r0+r1+r2 = 0");
    }

    #[test]
    fn relation_on_too_few_rays_is_inconsistent() {
        let p = Presentation::from_names(2, names(&["x1", "x2"]), &[(vec!["x1", "x2"], vec![])])
            .unwrap();
        assert!(matches!(
            realize(&p),
            Err(Error::Presentation(PresentationError::Inconsistent(_)))
        ));
    }

    #[test]
    fn missing_relations_are_underdetermined() {
        let p = Presentation::from_names(1, names(&["a", "b", "c"]), &[(vec!["a", "b"], vec![])])
            .unwrap();
        assert_eq!(
            realize(&p),
            Err(Error::Presentation(PresentationError::Underdetermined {
                rank: 1,
                expected: 2
            }))
        );
    }

    #[test]
    fn unrealizable_relations_are_rejected() {
        // Forces x4 = -x3, so the cone {x3, x4} degenerates.
        let p = Presentation::from_names(
            2,
            names(&["x1", "x2", "x3", "x4"]),
            &[
                (vec!["x1", "x3"], vec![("x2", 1)]),
                (vec!["x2", "x4"], vec![("x1", 1)]),
            ],
        )
        .unwrap();
        let err = realize(&p).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Presentation(PresentationError::NotSmoothComplete(_))
            ),
            "{err}"
        );
    }

    #[test]
    fn hirzebruch_presentations_realize() {
        for a in 0..4 {
            let rhs = if a == 0 { vec![] } else { vec![("x2", a)] };
            let p = Presentation::from_names(
                2,
                names(&["x1", "x2", "x3", "x4"]),
                &[(vec!["x1", "x3"], rhs), (vec!["x2", "x4"], vec![])],
            )
            .unwrap();
            let f = SmoothCompleteFan::new(realize(&p).unwrap()).unwrap();
            assert_eq!(presentation_of(&f).unwrap(), p);
        }
    }

    #[test]
    fn rejects_nested_left_hand_sides() {
        let r = Presentation::from_names(
            2,
            names(&["a", "b", "c"]),
            &[(vec!["a", "b"], vec![]), (vec!["a", "b", "c"], vec![])],
        );
        assert!(matches!(
            r,
            Err(Error::Presentation(PresentationError::Malformed(_)))
        ));
    }

    #[test]
    fn isomorphism_finds_relabelings() {
        let a = p2_presentation();
        assert_eq!(isomorphic(&a, &a), Some(vec![0, 1, 2]));
        let b = Presentation::from_names(
            2,
            names(&["a", "b", "c", "d"]),
            &[(vec!["a", "c"], vec![]), (vec!["b", "d"], vec![])],
        )
        .unwrap();
        let c = Presentation::from_names(
            2,
            names(&["a", "b", "c", "d"]),
            &[(vec!["a", "b"], vec![]), (vec!["c", "d"], vec![])],
        )
        .unwrap();
        let m = isomorphic(&b, &c).unwrap();
        for r in b.relations() {
            assert!(c.relations().contains(&r.mapped(&m)));
        }
        assert_eq!(isomorphic(&a, &b), None);
    }

    #[test]
    fn formats_in_table_notation() {
        let p = Presentation::from_names(
            5,
            names(&["x1", "x2", "x3", "x4", "x5", "x6", "x7"]),
            &[
                (vec!["x1", "x2", "x3", "x4"], vec![("x5", 2)]),
                (vec!["x5", "x6", "x7"], vec![]),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "x5+x6+x7 = 0; x1+x2+x3+x4 = 2 x5");
    }
}
