//! Star subdivision along a cone and its inverse.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::fan::{Fan, SmoothCompleteFan};
use crate::lattice::{LatticeVector, RaySet};
use crate::mori::MoriCone;
use crate::presentation::{format_relation_with, Relation};

fn fresh_label(labels: &[String]) -> String {
    if !labels.iter().any(|l| l == "u") {
        return "u".into();
    }
    (1..)
        .map(|k| format!("u{k}"))
        .find(|c| !labels.iter().any(|l| l == c))
        .expect("unbounded search")
}

/// Inserts `u = sum of tau` as a new last ray and subdivides every maximal
/// cone containing `tau`.
pub fn blow_up(fan: &SmoothCompleteFan, tau: RaySet) -> Result<SmoothCompleteFan> {
    if tau.max().is_some_and(|m| m >= fan.num_rays()) {
        return Err(Error::RayIndexOutOfRange {
            index: tau.max().unwrap_or(0),
            rays: fan.num_rays(),
        });
    }
    if tau.len() < 2 || !fan.is_face(tau) {
        return Err(Error::NotACone(tau.to_vec()));
    }
    let f = fan.fan();
    let n = f.num_rays();
    let u = LatticeVector::checked_sum(f.dim(), tau.iter().map(|i| f.ray(i)))?;
    let mut rays = f.rays().to_vec();
    rays.push(u);
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for &c in f.max_cones() {
        if tau.is_subset(c) {
            for v in tau {
                cones.push(c.without(v).with(n).to_vec());
            }
        } else {
            cones.push(c.to_vec());
        }
    }
    let labels = f.labels().map(|l| {
        let mut l = l.to_vec();
        l.push(fresh_label(&l));
        l
    });
    SmoothCompleteFan::new(Fan::new(f.dim(), rays, cones, labels)?)
}

/// Blows down the exceptional ray `u` of the unique extremal relation
/// `v_1 + ... + v_k = u`; `k = d - 1` for a curve center.
pub fn blow_down(fan: &SmoothCompleteFan, u: usize) -> Result<SmoothCompleteFan> {
    if u >= fan.num_rays() {
        return Err(Error::RayIndexOutOfRange {
            index: u,
            rays: fan.num_rays(),
        });
    }
    let cone = MoriCone::new(fan)?;
    let candidates: Vec<RaySet> = cone
        .relations()
        .iter()
        .filter(|r| r.rhs == [(u, 1)])
        .map(|r| r.lhs())
        .collect();
    match candidates.as_slice() {
        [lhs] => blow_down_relation(fan, u, *lhs),
        [] => {
            let names: Vec<String> = (0..fan.num_rays()).map(|i| fan.fan().ray_name(i)).collect();
            let shapes: Vec<String> = cone
                .relations()
                .iter()
                .filter(|r| r.sigma().contains(u))
                .map(|r| {
                    let rel = Relation::new(r.lhs(), r.rhs.clone());
                    format_relation_with(&rel, |i| names[i].as_str())
                })
                .collect();
            Err(Error::BlowDown(format!(
                "no primitive relation has right-hand side exactly {}; relations ending in it: [{}]",
                names[u],
                shapes.join("; ")
            )))
        }
        _ => Err(Error::BlowDown(format!(
            "{} primitive relations sum to {}; choose one",
            candidates.len(),
            fan.fan().ray_name(u)
        ))),
    }
}

/// Blows down `u` along the relation `sum of lhs = u`, which must be an
/// extremal primitive relation.
pub fn blow_down_relation(
    fan: &SmoothCompleteFan,
    u: usize,
    lhs: RaySet,
) -> Result<SmoothCompleteFan> {
    let d = fan.dim();
    let f = fan.fan();
    let cone = MoriCone::new(fan)?;
    let index = cone
        .relations()
        .iter()
        .position(|r| r.lhs() == lhs)
        .ok_or_else(|| Error::BlowDown(format!("{lhs:?} is not a primitive collection")))?;
    let rel = &cone.relations()[index];
    if rel.rhs != [(u, 1)] {
        let names: Vec<String> = (0..f.num_rays()).map(|i| f.ray_name(i)).collect();
        let r = Relation::new(rel.lhs(), rel.rhs.clone());
        return Err(Error::BlowDown(format!(
            "relation {} does not have right-hand side exactly {}",
            format_relation_with(&r, |i| names[i].as_str()),
            names[u]
        )));
    }
    if !cone.is_extremal(index) {
        return Err(Error::BlowDown(format!("{lhs:?} is not extremal")));
    }
    let mut merged: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &c in f.max_cones() {
        let out = if c.contains(u) {
            let missing = lhs.difference(c);
            if missing.len() != 1 {
                return Err(Error::BlowDown(format!(
                    "cone {:?} around {} misses {} rays of the relation",
                    c,
                    f.ray_name(u),
                    missing.len()
                )));
            }
            c.without(u).union(missing)
        } else {
            c
        };
        let renumbered: Vec<usize> = out.iter().map(|i| if i > u { i - 1 } else { i }).collect();
        merged.insert(renumbered);
    }
    let mut rays = f.rays().to_vec();
    rays.remove(u);
    let labels = f.labels().map(|l| {
        let mut l = l.to_vec();
        l.remove(u);
        l
    });
    SmoothCompleteFan::new(Fan::new(d, rays, merged.into_iter().collect(), labels)?)
}

/// Same rays and cones after matching rays by coordinates; labels ignored.
pub fn same_fan_up_to_ray_order(a: &Fan, b: &Fan) -> bool {
    if a.dim() != b.dim() || a.num_rays() != b.num_rays() || a.max_cones().len() != b.max_cones().len() {
        return false;
    }
    let index: HashMap<&LatticeVector, usize> = b.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let Some(map) = a.rays().iter().map(|r| index.get(r).copied()).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let cones: BTreeSet<Vec<usize>> = b.max_cones().iter().map(|c| c.to_vec()).collect();
    a.max_cones()
        .iter()
        .all(|c| cones.contains(&c.map(|i| map[i]).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::tests::p2;
    use crate::primitive::primitive_relations;
    use alloc::vec;

    #[test]
    fn one_point_blow_up_of_the_plane() {
        let p = SmoothCompleteFan::new(p2()).unwrap();
        let s8 = blow_up(&p, RaySet::from_indices([0, 1])).unwrap();
        assert_eq!(s8.num_rays(), 4);
        assert_eq!(s8.ray(3).coords(), &[1, 1]);
        assert_eq!(s8.fan().max_cones().len(), 4);
        let rels = primitive_relations(&s8).unwrap();
        let lhs: Vec<_> = rels.iter().map(|r| r.lhs().to_vec()).collect();
        assert_eq!(lhs, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(rels[0].rhs, vec![(3, 1)]);
        assert_eq!(rels[0].degree, 1);

        let back = blow_down(&s8, 3).unwrap();
        assert_eq!(back.fan(), p.fan());
    }

    #[test]
    fn blow_up_refuses_non_cones_and_blow_down_bad_shapes() {
        let p = SmoothCompleteFan::new(p2()).unwrap();
        assert!(matches!(
            blow_up(&p, RaySet::from_indices([0, 1, 2])),
            Err(Error::NotACone(_))
        ));
        assert!(matches!(blow_down(&p, 0), Err(Error::BlowDown(_))));
    }

    #[test]
    fn labelled_blow_up_names_the_new_ray() {
        let f = p2()
            .with_labels(Some(vec!["u".into(), "a".into(), "b".into()]))
            .unwrap();
        let p = SmoothCompleteFan::new(f).unwrap();
        let b = blow_up(&p, RaySet::from_indices([1, 2])).unwrap();
        assert_eq!(b.fan().ray_name(3), "u1");
    }

    #[test]
    fn ray_order_comparison() {
        let a = p2();
        let b = a.permuted(&[2, 0, 1]).unwrap();
        assert!(same_fan_up_to_ray_order(&a, &b));
        let s8 = blow_up(&SmoothCompleteFan::new(a.clone()).unwrap(), RaySet::from_indices([0, 1]))
            .unwrap();
        assert!(!same_fan_up_to_ray_order(&a, s8.fan()));
    }
}
