//! Curve classes, the Mori cone and the tests built on it.
//!
//! The cone of curves of a projective toric variety is generated by the
//! classes `r(P)` of its primitive relations. Projectivity itself is not
//! checked here; the classification instances are projective by
//! construction.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::{RelationBasis, SmoothCompleteFan};
use crate::primitive::{primitive_relations, PrimitiveRelation};
use crate::simplex::in_cone;

/// `r(P)` as a vector over the rays: `+1` on `P`, `-a_j` on `sigma(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass(Vec<i64>);

impl CurveClass {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// The anticanonical degree `(-K_X . r(P))`, with `-K_X = sum_i D_i`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Coordinates in a basis of the relation lattice.
    pub fn coordinates(&self, basis: &RelationBasis) -> Option<Vec<BigInt>> {
        basis.coordinates(&self.0)
    }

    pub fn negated(&self) -> CurveClass {
        CurveClass(self.0.iter().map(|x| -x).collect())
    }
}

impl From<Vec<i64>> for CurveClass {
    fn from(coeffs: Vec<i64>) -> Self {
        Self(coeffs)
    }
}

pub fn curve_class(fan: &SmoothCompleteFan, rel: &PrimitiveRelation) -> CurveClass {
    CurveClass(rel.coefficient_vector(fan.num_rays()))
}

/// The primitive relations of a fan with their classes in `A_1(X)`.
#[derive(Clone, Debug)]
pub struct MoriCone {
    relations: Vec<PrimitiveRelation>,
    classes: Vec<CurveClass>,
    coords: Vec<Vec<BigInt>>,
    basis: RelationBasis,
}

impl MoriCone {
    pub fn new(fan: &SmoothCompleteFan) -> Result<Self> {
        let relations = primitive_relations(fan)?;
        let basis = fan.relation_lattice_basis()?;
        let classes: Vec<CurveClass> = relations.iter().map(|r| curve_class(fan, r)).collect();
        let coords = classes
            .iter()
            .map(|c| c.coordinates(&basis).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            relations,
            classes,
            coords,
            basis,
        })
    }

    pub fn relations(&self) -> &[PrimitiveRelation] {
        &self.relations
    }

    pub fn classes(&self) -> &[CurveClass] {
        &self.classes
    }

    pub fn basis(&self) -> &RelationBasis {
        &self.basis
    }

    /// Coordinates of each class in [`MoriCone::basis`].
    pub fn class_coordinates(&self) -> &[Vec<BigInt>] {
        &self.coords
    }

    pub fn index_of(&self, rel: &PrimitiveRelation) -> Option<usize> {
        self.relations.iter().position(|r| r == rel)
    }

    /// `r(P_index)` is not a nonnegative combination of the other classes.
    pub fn is_extremal(&self, index: usize) -> bool {
        let others: Vec<Vec<BigInt>> = self
            .coords
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != index)
            .map(|(_, c)| c.clone())
            .collect();
        !in_cone(&others, &self.coords[index])
    }

    pub fn extremal_flags(&self) -> Vec<bool> {
        (0..self.relations.len()).map(|i| self.is_extremal(i)).collect()
    }

    /// No class has its negation in the cone.
    pub fn is_pointed(&self) -> bool {
        self.coords.iter().all(|c| {
            let neg: Vec<BigInt> = c.iter().map(|x| -x).collect();
            !in_cone(&self.coords, &neg)
        })
    }
}

pub fn is_extremal(fan: &SmoothCompleteFan, rel: &PrimitiveRelation) -> Result<bool> {
    let cone = MoriCone::new(fan)?;
    let i = cone
        .index_of(rel)
        .ok_or_else(|| Error::NotPrimitiveCollection(rel.lhs().to_vec()))?;
    Ok(cone.is_extremal(i))
}

/// Every primitive relation has positive degree.
pub fn is_fano(fan: &SmoothCompleteFan) -> Result<bool> {
    for pc in crate::primitive::primitive_collections(fan) {
        if crate::primitive::primitive_relation(fan, pc)?.degree <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primitive collections are pairwise disjoint.
pub fn is_splitting_fan(fan: &SmoothCompleteFan) -> bool {
    let pcs = crate::primitive::primitive_collections(fan);
    pcs.iter().enumerate().all(|(i, p)| {
        pcs[i + 1..]
            .iter()
            .all(|q| p.members().is_disjoint(q.members()))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    /// `x_1 + ... + x_{d-1} = alpha x`, contracting `D_x` onto a curve.
    DivisorToCurve { alpha: i64, exceptional_ray: usize },
    OtherExtremal,
    NonExtremal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    pub relation: PrimitiveRelation,
    pub kind: ContractionKind,
}

impl ContractionReport {
    pub fn is_divisor_to_curve(&self) -> bool {
        matches!(self.kind, ContractionKind::DivisorToCurve { .. })
    }
}

fn divisor_to_curve_shape(dim: usize, rel: &PrimitiveRelation) -> Option<(i64, usize)> {
    match rel.rhs.as_slice() {
        &[(x, alpha)] if rel.lhs().len() + 1 == dim && alpha >= 1 && alpha <= dim as i64 - 2 => {
            Some((alpha, x))
        }
        _ => None,
    }
}

/// One report per primitive relation, tagged by extremality and shape.
pub fn contraction_reports(fan: &SmoothCompleteFan) -> Result<Vec<ContractionReport>> {
    let cone = MoriCone::new(fan)?;
    Ok(cone
        .relations
        .iter()
        .enumerate()
        .map(|(i, rel)| {
            let kind = if !cone.is_extremal(i) {
                ContractionKind::NonExtremal
            } else if let Some((alpha, exceptional_ray)) = divisor_to_curve_shape(fan.dim(), rel) {
                ContractionKind::DivisorToCurve {
                    alpha,
                    exceptional_ray,
                }
            } else {
                ContractionKind::OtherExtremal
            };
            ContractionReport {
                relation: rel.clone(),
                kind,
            }
        })
        .collect())
}

/// Extremal relations `x_1 + ... + x_{d-1} = alpha x` with `1 <= alpha <= d-2`.
pub fn detect_divisor_to_curve(fan: &SmoothCompleteFan) -> Result<Vec<ContractionReport>> {
    let mut reports = contraction_reports(fan)?;
    reports.retain(ContractionReport::is_divisor_to_curve);
    Ok(reports)
}
