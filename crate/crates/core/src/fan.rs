//! Simplicial fans in `Z^d` and their structural validation.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RaySet, MAX_RAYS};
use crate::linalg::{self, ConeFrame, Solution};

/// A fan given by its ray generators and maximal cones.
///
/// Construction checks only structure (dimensions, indices, primitive and
/// distinct rays, cone sizes). Geometry is checked by [`validate`]. Cones are
/// kept in canonical order: lexicographic on their sorted index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<RaySet>,
    labels: Option<Vec<String>>,
}

impl Fan {
    pub fn new(
        dim: usize,
        rays: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if rays.len() > MAX_RAYS {
            return Err(Error::TooManyRays {
                count: rays.len(),
                limit: MAX_RAYS,
            });
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            if r.is_zero() {
                return Err(Error::ZeroRay { index: i });
            }
            if !r.is_primitive() {
                return Err(Error::NonPrimitiveRay { index: i });
            }
        }
        {
            let mut seen: HashMap<&LatticeVector, usize> = HashMap::new();
            for (i, r) in rays.iter().enumerate() {
                if let Some(&j) = seen.get(r) {
                    return Err(Error::DuplicateRay { first: j, second: i });
                }
                seen.insert(r, i);
            }
        }
        if let Some(l) = &labels {
            if l.len() != rays.len() {
                return Err(Error::LabelCount {
                    labels: l.len(),
                    rays: rays.len(),
                });
            }
        }
        let mut sets = Vec::with_capacity(cones.len());
        for cone in cones {
            if let Some(&index) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayIndexOutOfRange {
                    index,
                    rays: rays.len(),
                });
            }
            let set = RaySet::from_indices(cone.iter().copied());
            if set.len() != cone.len() {
                return Err(Error::RepeatedRayInCone { cone });
            }
            if cone.len() != dim {
                return Err(Error::ConeSize {
                    cone,
                    expected: dim,
                });
            }
            sets.push(set);
        }
        sets.sort_by(|a, b| a.lex_cmp(*b));
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCone { cone: w[0].to_vec() });
        }
        Ok(Self {
            dim,
            rays,
            cones: sets,
            labels,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    #[inline]
    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    #[inline]
    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Maximal cones in canonical order.
    #[inline]
    pub fn max_cones(&self) -> &[RaySet] {
        &self.cones
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The label of ray `i`, or `r{i}` when the fan is unlabeled.
    pub fn ray_name(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => alloc::format!("r{i}"),
        }
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.rays.len() {
                return Err(Error::LabelCount {
                    labels: l.len(),
                    rays: self.rays.len(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Whether `set` lies in some maximal cone. Linear scan; see
    /// [`SmoothCompleteFan::is_face`] for the indexed query.
    pub fn spans_cone(&self, set: RaySet) -> bool {
        self.cones.iter().any(|c| set.is_subset(*c))
    }

    fn generators(&self, cone: RaySet) -> Vec<&[i64]> {
        cone.iter().map(|i| self.rays[i].coords()).collect()
    }

    pub fn picard_number(&self) -> usize {
        self.rays.len().saturating_sub(self.dim)
    }

    /// The same fan with rays renumbered by `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.rays.len();
        let mut rays = vec![LatticeVector::zero(self.dim); n];
        let mut labels = self.labels.as_ref().map(|_| vec![String::new(); n]);
        for (old, &new) in perm.iter().enumerate() {
            rays[new] = self.rays[old].clone();
            if let (Some(dst), Some(src)) = (labels.as_mut(), self.labels.as_ref()) {
                dst[new] = src[old].clone();
            }
        }
        let cones = self
            .cones
            .iter()
            .map(|c| c.iter().map(|i| perm[i]).collect())
            .collect();
        Fan::new(self.dim, rays, cones, labels)
    }
}

/// A reason why a fan failed one of the validation flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    DegenerateCone { cone: Vec<usize> },
    Determinant { cone: Vec<usize>, det: i64 },
    WallMultiplicity { wall: Vec<usize>, cones: usize },
    Disconnected { components: usize },
    UnusedRay { ray: usize },
    Overlap { cone: Vec<usize>, other: Vec<usize> },
    ProperUndecided,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::DegenerateCone { cone } => {
                write!(f, "cone {cone:?} has linearly dependent generators")
            }
            Witness::Determinant { cone, det } => write!(f, "cone {cone:?} has determinant {det}"),
            Witness::WallMultiplicity { wall, cones } => {
                write!(f, "wall {wall:?} lies in {cones} maximal cone(s)")
            }
            Witness::Disconnected { components } => {
                write!(f, "wall adjacency graph has {components} components")
            }
            Witness::UnusedRay { ray } => write!(f, "ray {ray} lies in no maximal cone"),
            Witness::Overlap { cone, other } => {
                write!(f, "barycenter of cone {cone:?} lies in cone {other:?}")
            }
            Witness::ProperUndecided => {
                write!(f, "proper intersection undecided: degenerate cones present")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
    pub proper: bool,
    pub witnesses: Vec<Witness>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.simplicial && self.smooth && self.complete && self.proper
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simplicial={} smooth={} complete={} proper={}",
            self.simplicial, self.smooth, self.complete, self.proper
        )?;
        for w in &self.witnesses {
            write!(f, "; {w}")?;
        }
        Ok(())
    }
}

struct Checked {
    report: ValidationReport,
    frames: Vec<Option<ConeFrame>>,
}

fn check(fan: &Fan) -> Result<Checked> {
    let mut witnesses = Vec::new();
    let frames = fan
        .cones
        .iter()
        .map(|&c| ConeFrame::new(&fan.generators(c)))
        .collect::<Result<Vec<_>>>()?;

    let mut simplicial = true;
    let mut smooth = true;
    for (cone, frame) in fan.cones.iter().zip(&frames) {
        match frame {
            None => {
                simplicial = false;
                smooth = false;
                witnesses.push(Witness::DegenerateCone { cone: cone.to_vec() });
            }
            Some(f) if !f.is_unimodular() => {
                smooth = false;
                witnesses.push(Witness::Determinant {
                    cone: cone.to_vec(),
                    det: f.det(),
                });
            }
            Some(_) => {}
        }
    }

    let mut pseudomanifold = !fan.cones.is_empty();
    let mut walls: HashMap<RaySet, Vec<usize>> = HashMap::new();
    for (k, &c) in fan.cones.iter().enumerate() {
        for v in c {
            walls.entry(c.without(v)).or_default().push(k);
        }
    }
    let mut bad: Vec<(RaySet, usize)> = walls
        .iter()
        .filter(|(_, cs)| cs.len() != 2)
        .map(|(w, cs)| (*w, cs.len()))
        .collect();
    bad.sort_by(|a, b| a.0.lex_cmp(b.0));
    for (wall, cones) in bad {
        pseudomanifold = false;
        witnesses.push(Witness::WallMultiplicity {
            wall: wall.to_vec(),
            cones,
        });
    }

    let components = adjacency_components(fan.cones.len(), walls.values());
    if components > 1 {
        pseudomanifold = false;
        witnesses.push(Witness::Disconnected { components });
    }

    let used = fan.cones.iter().fold(RaySet::EMPTY, |a, &c| a.union(c));
    for ray in (0..fan.rays.len()).filter(|&i| !used.contains(i)) {
        pseudomanifold = false;
        witnesses.push(Witness::UnusedRay { ray });
    }

    let mut proper = simplicial;
    if simplicial {
        for (k, &c) in fan.cones.iter().enumerate() {
            let barycenter = LatticeVector::checked_sum(fan.dim, c.iter().map(|i| &fan.rays[i]))?;
            for (j, frame) in frames.iter().enumerate() {
                if j == k {
                    continue;
                }
                let frame = frame.as_ref().expect("simplicial");
                if frame.contains(barycenter.coords())?.is_some() {
                    proper = false;
                    witnesses.push(Witness::Overlap {
                        cone: c.to_vec(),
                        other: fan.cones[j].to_vec(),
                    });
                }
            }
        }
    } else {
        witnesses.push(Witness::ProperUndecided);
    }

    Ok(Checked {
        report: ValidationReport {
            simplicial,
            smooth,
            complete: pseudomanifold && proper,
            proper,
            witnesses,
        },
        frames,
    })
}

fn adjacency_components<'a>(n: usize, walls: impl Iterator<Item = &'a Vec<usize>>) -> usize {
    let mut adj = vec![Vec::new(); n];
    for cs in walls {
        for (i, &a) in cs.iter().enumerate() {
            for &b in &cs[i + 1..] {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    components
}

/// Computes all four flags by exact arithmetic.
///
/// Completeness is the pseudomanifold criterion: every wall in exactly two
/// maximal cones, connected wall adjacency, every ray used, and proper
/// intersection (each cone's barycenter lies in no other cone).
pub fn validate(fan: &Fan) -> Result<ValidationReport> {
    check(fan).map(|c| c.report)
}

/// The unique cone containing a point in its relative interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub cone: RaySet,
    /// Positive coefficients aligned with `cone.iter()`.
    pub coeffs: Vec<i64>,
}

/// A fan that passed [`validate`] with every flag set.
#[derive(Clone, Debug)]
pub struct SmoothCompleteFan {
    fan: Fan,
    frames: Vec<ConeFrame>,
    faces: HashSet<RaySet>,
}

impl SmoothCompleteFan {
    pub fn new(fan: Fan) -> Result<Self> {
        let Checked { report, frames } = check(&fan)?;
        if !report.is_valid() {
            return Err(Error::InvalidFan(report));
        }
        let frames: Vec<ConeFrame> = frames.into_iter().map(|f| f.expect("simplicial")).collect();
        let mut faces = HashSet::new();
        for &c in &fan.cones {
            insert_subsets(c, &mut faces);
        }
        Ok(Self { fan, frames, faces })
    }

    #[inline]
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn into_fan(self) -> Fan {
        self.fan
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.fan.dim
    }

    #[inline]
    pub fn num_rays(&self) -> usize {
        self.fan.rays.len()
    }

    #[inline]
    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.fan.rays[i]
    }

    /// Whether `set` spans a cone of the fan.
    #[inline]
    pub fn is_face(&self, set: RaySet) -> bool {
        self.faces.contains(&set)
    }

    pub(crate) fn faces(&self) -> impl Iterator<Item = &RaySet> {
        self.faces.iter()
    }

    /// Finds the cone whose relative interior contains `point`.
    pub fn locate(&self, point: &LatticeVector) -> Result<Location> {
        if point.dim() != self.fan.dim {
            return Err(Error::DimensionMismatch {
                expected: self.fan.dim,
                found: point.dim(),
            });
        }
        if point.is_zero() {
            return Err(Error::Origin);
        }
        for (&cone, frame) in self.fan.cones.iter().zip(&self.frames) {
            if let Some(num) = frame.contains(point.coords())? {
                let mut support = RaySet::EMPTY;
                let mut coeffs = Vec::new();
                for (i, c) in cone.iter().zip(num) {
                    if c > 0 {
                        support = support.with(i);
                        coeffs.push(i64::try_from(c).map_err(|_| Error::Overflow)?);
                    }
                }
                return Ok(Location {
                    cone: support,
                    coeffs,
                });
            }
        }
        Err(Error::NotLocated)
    }

    pub fn picard_number(&self) -> usize {
        self.fan.picard_number()
    }

    /// Rays `r != ray` with `{ray, r}` spanning a cone.
    pub fn link(&self, ray: usize) -> Result<RaySet> {
        if ray >= self.num_rays() {
            return Err(Error::RayIndexOutOfRange {
                index: ray,
                rays: self.num_rays(),
            });
        }
        Ok(self
            .fan
            .cones
            .iter()
            .filter(|c| c.contains(ray))
            .fold(RaySet::EMPTY, |a, &c| a.union(c))
            .without(ray))
    }

    /// Picard number of the toric prime divisor of `ray`: link size minus `d - 1`.
    pub fn divisor_picard(&self, ray: usize) -> Result<usize> {
        Ok(self.link(ray)?.len() + 1 - self.fan.dim)
    }

    /// A lattice basis of all integer relations among the rays.
    pub fn relation_lattice_basis(&self) -> Result<RelationBasis> {
        let n = self.num_rays();
        let matrix: Vec<Vec<i64>> = (0..self.fan.dim)
            .map(|k| self.fan.rays.iter().map(|r| r.coords()[k]).collect())
            .collect();
        let vectors = linalg::integer_kernel(&matrix, n)?;
        Ok(RelationBasis { vectors, n })
    }
}

fn insert_subsets(cone: RaySet, out: &mut HashSet<RaySet>) {
    let bits = cone.bits();
    // enumerate submasks of `bits`
    let mut sub = bits;
    loop {
        out.insert(RaySet::from_bits(sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & bits;
    }
}

/// Basis of the relation lattice `{c in Z^n : sum_i c_i v_i = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationBasis {
    vectors: Vec<Vec<i64>>,
    n: usize,
}

impl RelationBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// Integer coordinates of a relation in this basis; `None` if `c` is not
    /// in the lattice.
    pub fn coordinates(&self, c: &[i64]) -> Option<Vec<BigInt>> {
        if c.len() != self.n {
            return None;
        }
        if self.vectors.is_empty() {
            return c.iter().all(|&x| x == 0).then(Vec::new);
        }
        let a: Vec<_> = (0..self.n)
            .map(|i| self.vectors.iter().map(|v| linalg::rational(v[i])).collect())
            .collect();
        let b: Vec<_> = c.iter().map(|&x| vec![linalg::rational(x)]).collect();
        match linalg::solve(&a, &b) {
            Solution::Unique(x) => x
                .into_iter()
                .map(|row| row[0].is_integer().then(|| row[0].to_integer()))
                .collect(),
            _ => None,
        }
    }

    /// Coordinates as `i64`, for relations known to be in the lattice.
    pub fn coordinates_i64(&self, c: &[i64]) -> Option<Vec<i64>> {
        self.coordinates(c)?
            .iter()
            .map(|x| if x.is_zero() { Some(0) } else { x.to_i64() })
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec;

    pub fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        Fan::new(
            dim,
            rays.iter().map(|r| LatticeVector::new(r.to_vec())).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
            None,
        )
        .unwrap()
    }

    /// The degree-7 del Pezzo surface: P^2 blown up in two points.
    pub fn s7() -> Fan {
        // u1=(1,0), u2=(1,1), u3=(0,1), v1=(-1,0), v2=(-1,-1)
        fan(
            2,
            &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[0, 4]],
        )
    }

    pub fn p2() -> Fan {
        fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
    }

    #[test]
    fn projective_plane_is_valid() {
        let r = validate(&p2()).unwrap();
        assert!(r.is_valid(), "{r}");
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]);
        let r = validate(&f).unwrap();
        assert!(r.smooth && r.simplicial);
        assert!(!r.complete);
        assert!(r.witnesses.contains(&Witness::WallMultiplicity {
            wall: vec![2],
            cones: 1
        }));
    }

    #[test]
    fn determinant_two_is_not_smooth() {
        let f = fan(2, &[&[1, 0], &[1, 2], &[0, -1]], &[&[0, 1]]);
        let r = validate(&f).unwrap();
        assert!(!r.smooth);
        assert!(r.witnesses.contains(&Witness::Determinant {
            cone: vec![0, 1],
            det: 2
        }));
    }

    #[test]
    fn overlapping_copies_are_improper() {
        // P^2 and its negative laid over each other.
        let f = fan(
            2,
            &[&[1, 0], &[0, 1], &[-1, -1], &[-1, 0], &[0, -1], &[1, 1]],
            &[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]],
        );
        let r = validate(&f).unwrap();
        assert!(!r.complete);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn structural_errors() {
        let r = |v: &[i64]| LatticeVector::new(v.to_vec());
        assert_eq!(
            Fan::new(2, vec![r(&[2, 0])], vec![], None),
            Err(Error::NonPrimitiveRay { index: 0 })
        );
        assert_eq!(
            Fan::new(2, vec![r(&[1, 0, 0])], vec![], None),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        assert_eq!(
            Fan::new(2, vec![r(&[1, 0]), r(&[0, 1])], vec![vec![0, 5]], None),
            Err(Error::RayIndexOutOfRange { index: 5, rays: 2 })
        );
        assert_eq!(
            Fan::new(2, vec![r(&[1, 0]), r(&[1, 0])], vec![], None),
            Err(Error::DuplicateRay { first: 0, second: 1 })
        );
        assert_eq!(
            Fan::new(2, vec![r(&[1, 0]), r(&[0, 1])], vec![vec![0]], None),
            Err(Error::ConeSize {
                cone: vec![0],
                expected: 2
            })
        );
    }

    #[test]
    fn locate_in_projective_plane() {
        let f = SmoothCompleteFan::new(p2()).unwrap();
        let loc = f.locate(&LatticeVector::new(vec![1, 1])).unwrap();
        assert_eq!((loc.cone.to_vec(), loc.coeffs), (vec![0, 1], vec![1, 1]));
        let loc = f.locate(&LatticeVector::new(vec![2, 1])).unwrap();
        assert_eq!((loc.cone.to_vec(), loc.coeffs), (vec![0, 1], vec![2, 1]));
        let loc = f.locate(&LatticeVector::new(vec![-3, -3])).unwrap();
        assert_eq!((loc.cone.to_vec(), loc.coeffs), (vec![2], vec![3]));
        assert_eq!(f.locate(&LatticeVector::zero(2)), Err(Error::Origin));
    }

    #[test]
    fn picard_numbers_of_surfaces() {
        let f = SmoothCompleteFan::new(p2()).unwrap();
        assert_eq!(f.picard_number(), 1);
        for i in 0..3 {
            assert_eq!(f.divisor_picard(i).unwrap(), 1);
        }
        assert!(f.divisor_picard(3).is_err());
        let basis = f.relation_lattice_basis().unwrap();
        assert_eq!(basis.vectors(), &[vec![1, 1, 1]]);
        assert_eq!(basis.coordinates(&[2, 2, 2]), Some(vec![BigInt::from(2)]));
        assert_eq!(basis.coordinates(&[1, 0, 0]), None);

        let p1p1 = fan(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
        );
        let f = SmoothCompleteFan::new(p1p1).unwrap();
        assert_eq!(f.relation_lattice_basis().unwrap().rank(), 2);
    }

    #[test]
    fn faces_are_closed_under_subsets() {
        let f = SmoothCompleteFan::new(p2()).unwrap();
        assert!(f.is_face(RaySet::EMPTY));
        assert!(f.is_face(RaySet::from_indices([1, 2])));
        assert!(!f.is_face(RaySet::from_indices([0, 1, 2])));
    }
}
