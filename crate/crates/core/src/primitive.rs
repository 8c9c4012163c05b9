//! Primitive collections and primitive relations.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fan::SmoothCompleteFan;
use crate::lattice::{LatticeVector, RaySet};

/// A minimal set of rays that does not span a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimitiveCollection(RaySet);

impl PrimitiveCollection {
    /// Checks the defining property against `fan`.
    pub fn new(fan: &SmoothCompleteFan, members: RaySet) -> Result<Self> {
        let minimal = members.len() >= 2
            && !fan.is_face(members)
            && members.iter().all(|i| fan.is_face(members.without(i)));
        if minimal {
            Ok(Self(members))
        } else {
            Err(Error::NotPrimitiveCollection(members.to_vec()))
        }
    }

    #[inline]
    pub fn members(self) -> RaySet {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }
}

/// `sum_{i in P} x_i = sum_j a_j y_j` with `y_j` generating `sigma(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    /// `(ray, a_j)` with every `a_j > 0`, sorted by ray; empty for `= 0`.
    pub rhs: Vec<(usize, i64)>,
    pub degree: i64,
}

impl PrimitiveRelation {
    pub fn lhs(&self) -> RaySet {
        self.collection.members()
    }

    pub fn sigma(&self) -> RaySet {
        self.rhs.iter().map(|&(r, _)| r).collect()
    }

    /// `+1` on the collection, `-a_j` on `sigma(P)`; the class `r(P)` in `Z^n`.
    pub fn coefficient_vector(&self, n: usize) -> Vec<i64> {
        let mut v = alloc::vec![0; n];
        for i in self.lhs() {
            v[i] = 1;
        }
        for &(j, a) in &self.rhs {
            v[j] = -a;
        }
        v
    }
}

/// Sorted by cardinality, then lexicographically.
///
/// Level-wise search: a `k`-set is a candidate when all of its
/// `(k-1)`-subsets are faces, and a candidate that is not itself a face is
/// a primitive collection.
pub fn primitive_collections(fan: &SmoothCompleteFan) -> Vec<PrimitiveCollection> {
    let n = fan.num_rays();
    let mut levels: Vec<Vec<RaySet>> = alloc::vec![Vec::new(); fan.dim() + 2];
    for &f in fan.faces() {
        if f.len() <= fan.dim() {
            levels[f.len()].push(f);
        }
    }
    let mut out = Vec::new();
    for k in 2..=fan.dim() + 1 {
        let mut found: Vec<RaySet> = Vec::new();
        for &face in &levels[k - 1] {
            let start = face.max().map_or(0, |m| m + 1);
            for j in start..n {
                let cand = face.with(j);
                if fan.is_face(cand) {
                    continue;
                }
                if cand.iter().all(|i| fan.is_face(cand.without(i))) {
                    found.push(cand);
                }
            }
        }
        found.sort_by(|a, b| a.lex_cmp(*b));
        out.extend(found.into_iter().map(PrimitiveCollection));
    }
    out
}

/// Locates `sigma(P)` for the sum of the collection.
pub fn primitive_relation(
    fan: &SmoothCompleteFan,
    collection: PrimitiveCollection,
) -> Result<PrimitiveRelation> {
    let collection = PrimitiveCollection::new(fan, collection.members())?;
    let sum = LatticeVector::checked_sum(fan.dim(), collection.members().iter().map(|i| fan.ray(i)))?;
    let rhs: Vec<(usize, i64)> = match fan.locate(&sum) {
        Ok(loc) => loc.cone.iter().zip(loc.coeffs).collect(),
        Err(Error::Origin) => Vec::new(),
        Err(e) => return Err(e),
    };
    let degree = collection.len() as i64 - rhs.iter().map(|&(_, a)| a).sum::<i64>();
    Ok(PrimitiveRelation {
        collection,
        rhs,
        degree,
    })
}

/// All primitive relations, in the order of [`primitive_collections`].
pub fn primitive_relations(fan: &SmoothCompleteFan) -> Result<Vec<PrimitiveRelation>> {
    primitive_collections(fan)
        .into_iter()
        .map(|p| primitive_relation(fan, p))
        .collect()
}
