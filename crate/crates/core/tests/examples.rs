use toric_core::oracle::{brute_minimal_nonfaces, extremal_oracle, surface_census};
use toric_core::*;

fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::new(
        dim,
        rays.iter().map(|r| LatticeVector::new(r.to_vec())).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
        None,
    )
    .unwrap()
}

fn p2() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

fn s7() -> SmoothCompleteFan {
    let f = fan(
        2,
        &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 0]],
    )
    .with_labels(Some(["u1", "u2", "u3", "v1", "v2"].map(String::from).to_vec()))
    .unwrap();
    SmoothCompleteFan::new(f).unwrap()
}

fn family(id: &str, d: usize, alpha: Option<i64>) -> (FamilyInstance, SmoothCompleteFan) {
    let inst = instantiate(id.parse().unwrap(), d, alpha).unwrap();
    let f = SmoothCompleteFan::new(realize(&inst.presentation).unwrap()).unwrap();
    (inst, f)
}

fn ix(inst: &FamilyInstance, names: &[&str]) -> RaySet {
    RaySet::from_indices(names.iter().map(|n| inst.presentation.index_of(n).unwrap()))
}

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

fn relation_strings(p: &Presentation) -> Vec<String> {
    let mut v: Vec<String> = p.relations().iter().map(|r| p.format_relation(r)).collect();
    v.sort();
    v
}

#[test]
fn plane_and_broken_planes() {
    assert!(validate(&p2()).unwrap().is_valid());

    let open = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]);
    let r = validate(&open).unwrap();
    assert!(!r.complete);
    assert!(r.witnesses.iter().any(|w| matches!(w, Witness::WallMultiplicity { wall, cones: 1 } if wall == &[2])));

    let fat = fan(2, &[&[1, 0], &[1, 2], &[0, -1]], &[&[0, 1]]);
    let r = validate(&fat).unwrap();
    assert!(!r.smooth);
    assert!(r.witnesses.iter().any(|w| matches!(w, Witness::Determinant { det, .. } if det.abs() == 2)));
}

#[test]
fn locating_points() {
    let p = SmoothCompleteFan::new(p2()).unwrap();
    let l = p.locate(&LatticeVector::new(vec![1, 1])).unwrap();
    assert_eq!((l.cone.to_vec(), l.coeffs), (vec![0, 1], vec![1, 1]));
    let l = p.locate(&LatticeVector::new(vec![2, 1])).unwrap();
    assert_eq!((l.cone.to_vec(), l.coeffs), (vec![0, 1], vec![2, 1]));

    let (inst, f) = family("4.I", 5, Some(2));
    let sum = LatticeVector::checked_sum(5, ix(&inst, &["x1", "x2", "x3", "x4"]).iter().map(|i| f.ray(i))).unwrap();
    let l = f.locate(&sum).unwrap();
    assert_eq!(l.cone, ix(&inst, &["x5"]));
    assert_eq!(l.coeffs, vec![2]);
}

#[test]
fn relation_lattices_and_picard_numbers() {
    let p = SmoothCompleteFan::new(p2()).unwrap();
    let b = p.relation_lattice_basis().unwrap();
    assert_eq!(b.rank(), 1);
    assert!(b.vectors()[0] == [1, 1, 1] || b.vectors()[0] == [-1, -1, -1]);
    assert_eq!(p.picard_number(), 1);

    let q = SmoothCompleteFan::new(fan(
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    ))
    .unwrap();
    assert_eq!(q.relation_lattice_basis().unwrap().rank(), 2);

    let (_, iv) = family("4.IV", 5, Some(1));
    assert_eq!(iv.num_rays(), 10);
    assert_eq!(iv.relation_lattice_basis().unwrap().rank(), 5);
    for d in 5..=7 {
        for a in 1..=(d as i64 - 2) {
            assert_eq!(family("4.I", d, Some(a)).1.picard_number(), 2);
            assert_eq!(family("4.IV", d, Some(a)).1.picard_number(), 5);
        }
    }
}

#[test]
fn divisor_picard_numbers() {
    let p = SmoothCompleteFan::new(p2()).unwrap();
    for x in 0..3 {
        assert_eq!(p.divisor_picard(x).unwrap(), 1);
    }
    assert!(p.divisor_picard(3).is_err());

    let (inst, iv) = family("4.IV", 5, Some(1));
    let x5 = inst.presentation.index_of("x5").unwrap();
    assert_eq!(iv.link(x5).unwrap(), ix(&inst, &["x1", "x2", "x3", "x4", "x6", "x10"]));
    assert_eq!(iv.picard_number() - iv.divisor_picard(x5).unwrap(), 3);

    // Link recomputed from the brute-force non-faces.
    let (inst, f) = family("4.I", 5, Some(1));
    let x5 = inst.presentation.index_of("x5").unwrap();
    let nonfaces = brute_minimal_nonfaces(f.fan()).unwrap();
    let link: RaySet = (0..f.num_rays())
        .filter(|&r| r != x5 && !nonfaces.iter().any(|s| s.is_subset(RaySet::from_indices([x5, r]))))
        .collect();
    assert_eq!(link, f.link(x5).unwrap());
    assert_eq!(f.divisor_picard(x5).unwrap(), 2);
}

#[test]
fn primitive_collections_and_relations() {
    let p = SmoothCompleteFan::new(p2()).unwrap();
    let rels = primitive_relations(&p).unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0].lhs().to_vec(), vec![0, 1, 2]);
    assert!(rels[0].rhs.is_empty());
    assert_eq!(rels[0].degree, 3);

    let (inst, f) = family("4.I", 5, Some(2));
    let pcs: Vec<RaySet> = primitive_collections(&f).iter().map(|c| c.members()).collect();
    assert_eq!(pcs.len(), 2);
    assert!(pcs.contains(&ix(&inst, &["x1", "x2", "x3", "x4"])));
    assert!(pcs.contains(&ix(&inst, &["x5", "x6", "x7"])));
    let big = primitive_relations(&f)
        .unwrap()
        .into_iter()
        .find(|r| r.lhs().len() == 4)
        .unwrap();
    assert_eq!(big.rhs, vec![(inst.presentation.index_of("x5").unwrap(), 2)]);
    assert_eq!(big.degree, 2);
    assert_eq!(curve_class(&f, &big).coeffs(), &[1, 1, 1, 1, -2, 0, 0]);
    assert!(is_extremal(&f, &big).unwrap());

    let s = s7();
    let names: Vec<Vec<String>> = primitive_collections(&s)
        .iter()
        .map(|c| c.members().iter().map(|i| s.fan().ray_name(i)).collect())
        .collect();
    let want = [["u1", "u3"], ["u1", "v1"], ["u2", "v1"], ["u2", "v2"], ["u3", "v2"]];
    assert_eq!(names.len(), 5);
    for w in want {
        assert!(names.iter().any(|n| n == &w), "{w:?}");
    }
}

#[test]
fn family_four_relations() {
    let (inst, f) = family("4.IV", 5, Some(1));
    let rels = primitive_relations(&f).unwrap();
    assert_eq!(rels.len(), 10);
    assert_eq!(rels.iter().filter(|r| r.lhs().len() == 2).count(), 9);
    assert_eq!(brute_minimal_nonfaces(f.fan()).unwrap().len(), 10);
    let r = rels.iter().find(|r| r.lhs() == ix(&inst, &["x5", "x7"])).unwrap();
    assert_eq!(r.rhs, vec![(inst.presentation.index_of("x6").unwrap(), 1)]);
    assert_eq!(r.degree, 1);
    let r = rels.iter().find(|r| r.lhs() == ix(&inst, &["x5", "x8"])).unwrap();
    let c = curve_class(&f, r);
    let nonzero: Vec<(usize, i64)> = c.coeffs().iter().copied().enumerate().filter(|&(_, a)| a != 0).collect();
    assert_eq!(nonzero, vec![(4, 1), (7, 1)]);
}

#[test]
fn fano_and_extremality() {
    assert!(is_fano(&SmoothCompleteFan::new(p2()).unwrap()).unwrap());
    let f2 = SmoothCompleteFan::new(fan(
        2,
        &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    ))
    .unwrap();
    assert!(!is_fano(&f2).unwrap());
    let r = primitive_relations(&f2)
        .unwrap()
        .into_iter()
        .find(|r| r.lhs() == RaySet::from_indices([0, 2]))
        .unwrap();
    assert_eq!((r.rhs.clone(), r.degree), (vec![(1, 2)], 0));
    assert_eq!(brute_minimal_nonfaces(f2.fan()).unwrap().len(), 2);

    let s = s7();
    let cone = MoriCone::new(&s).unwrap();
    for (i, r) in cone.relations().iter().enumerate() {
        let antipodal = r.rhs.is_empty();
        assert_eq!(r.degree, if antipodal { 2 } else { 1 });
        if r.lhs() == RaySet::from_indices([0, 3]) {
            assert!(!cone.is_extremal(i));
            assert!(!extremal_oracle(cone.classes(), &cone.classes()[i]).unwrap());
        }
        if r.degree == 1 {
            assert!(cone.is_extremal(i));
        }
    }
}

#[test]
fn divisor_to_curve_detection() {
    let (inst, f) = family("4.IIa.3", 6, Some(2));
    let found = detect_divisor_to_curve(&f).unwrap();
    assert_eq!(found.len(), 1);
    assert!(matches!(found[0].kind, ContractionKind::DivisorToCurve { alpha: 2, .. }));
    let x8 = inst.presentation.index_of("x8").unwrap();
    assert_eq!(found[0].relation.lhs(), ix(&inst, &["x1", "x2", "x3", "x4", "x5"]));
    assert_eq!(found[0].relation.rhs, vec![(x8, 2)]);

    for d in 5..=7 {
        let (_, pd) = family("5.I", d, None);
        assert!(detect_divisor_to_curve(&pd).unwrap().is_empty());
    }

    let (inst, f) = family("4.IV", 5, Some(1));
    let x5 = inst.presentation.index_of("x5").unwrap();
    assert!(detect_divisor_to_curve(&f).unwrap().iter().any(|r| {
        r.relation.lhs() == ix(&inst, &["x1", "x2", "x3", "x4"]) && r.relation.rhs == [(x5, 1)]
    }));
}

#[test]
fn splitting_flags() {
    for d in 5..=6 {
        for inst in instances(Section::Four, d).unwrap() {
            let f = SmoothCompleteFan::new(realize(&inst.presentation).unwrap()).unwrap();
            match inst.id.group {
                Group::I | Group::IIa => assert!(is_splitting_fan(&f), "{}", inst.id),
                Group::IIb => assert!(!is_splitting_fan(&f), "{}", inst.id),
                _ => {}
            }
        }
    }
}

#[test]
fn realizing_presentations() {
    let p = Presentation::from_names(2, names(&["x1", "x2", "x3"]), &[(vec!["x1", "x2", "x3"], vec![])]).unwrap();
    let f = SmoothCompleteFan::new(realize(&p).unwrap()).unwrap();
    assert_eq!(presentation_of(&f).unwrap(), p);

    let inst = instantiate("4.I".parse().unwrap(), 5, Some(2)).unwrap();
    let seed = ix(&inst, &["x1", "x2", "x3", "x5", "x6"]);
    let f = realize_with_seed(&inst.presentation, Some(seed)).unwrap();
    assert_eq!(f.num_rays(), 7);
    assert_eq!(f.ray(inst.presentation.index_of("x4").unwrap()).coords(), &[-1, -1, -1, 2, 0]);
    assert_eq!(f.ray(inst.presentation.index_of("x7").unwrap()).coords(), &[0, 0, 0, -1, -1]);

    let bad = Presentation::from_names(2, names(&["x1", "x2"]), &[(vec!["x1", "x2"], vec![])]).unwrap();
    let err = realize(&bad).unwrap_err().to_string();
    assert!(err.contains("presentation inconsistent"), "{err}");

    let s = s7();
    let got = relation_strings(&presentation_of(&s).unwrap());
    let mut want = ["u1+u3 = u2", "u1+v1 = 0", "u2+v1 = u3", "u2+v2 = 0", "u3+v2 = v1"].map(String::from).to_vec();
    want.sort();
    assert_eq!(got, want);

    let (inst, f) = family("4.IIIb.4", 5, Some(1));
    let p = presentation_of(&f).unwrap();
    assert_eq!(p, inst.presentation);
    assert_eq!(p.relations().len(), 6);
    assert!(relation_strings(&p).contains(&"x6+x7 = x5".to_string()));
}

#[test]
fn presentation_isomorphism() {
    let p = Presentation::from_names(2, names(&["a", "b", "c"]), &[(vec!["a", "b", "c"], vec![])]).unwrap();
    assert_eq!(isomorphic(&p, &p), Some(vec![0, 1, 2]));
    let s = s7();
    let q = presentation_of(&s).unwrap();
    let perm = [3, 0, 4, 1, 2];
    let moved = presentation_of(&SmoothCompleteFan::new(s.fan().permuted(&perm).unwrap()).unwrap()).unwrap();
    let map = isomorphic(&q, &moved).unwrap();
    for r in q.relations() {
        let image = RaySet::from_indices(r.lhs.iter().map(|k| map[k]));
        assert!(moved.relations().iter().any(|m| m.lhs == image));
    }

    for d in 5..=6 {
        for a in 1..=(d as i64 - 2) {
            let one = instantiate("4.IIa.1".parse().unwrap(), d, Some(a)).unwrap();
            let two = instantiate("4.IIa.2".parse().unwrap(), d, Some(a)).unwrap();
            assert!(isomorphic(&one.presentation, &two.presentation).is_none());
        }
    }
}

#[test]
fn catalog_entries() {
    assert_eq!(catalog(Section::Four).len(), 22);
    assert_eq!(catalog(Section::Five).len(), 17);
    assert!(catalog(Section::Four).contains(&"4.IIIa.2".parse().unwrap()));
    for (d, n) in [(5, 58), (6, 76), (7, 94), (8, 112)] {
        assert_eq!(instances(Section::Four, d).unwrap().len(), n);
    }

    let i = instantiate("4.I".parse().unwrap(), 5, Some(2)).unwrap();
    assert_eq!(relation_strings(&i.presentation), ["x1+x2+x3+x4 = 2 x5", "x5+x6+x7 = 0"]);

    let i = instantiate("4.IIb.4.2".parse().unwrap(), 5, None).unwrap();
    let mut want = [
        "x1+x2+x3+x4 = x5",
        "x2+x3+x4+x8 = 0",
        "x5+x8 = x1",
        "x1+x6+x7 = 2 x8",
        "x5+x6+x7 = x8",
    ]
    .map(String::from)
    .to_vec();
    want.sort();
    assert_eq!(relation_strings(&i.presentation), want);

    let i = instantiate("5.IV".parse().unwrap(), 5, None).unwrap();
    assert_eq!(i.presentation.relations().len(), 9);
    assert!(relation_strings(&i.presentation).contains(&"x1+x2+x3+x4+x7 = x6".to_string()));

    assert!(instantiate("4.I".parse().unwrap(), 4, Some(1)).is_err());
    assert!(instantiate("4.I".parse().unwrap(), 5, Some(4)).is_err());
    assert!(instantiate("4.IIb.3".parse().unwrap(), 6, Some(2)).is_err());
    assert!("4.IIb.5".parse::<FamilyId>().is_err());
}

#[test]
fn surgery_examples() {
    let p = SmoothCompleteFan::new(p2()).unwrap();
    let s8 = blow_up(&p, RaySet::from_indices([0, 1])).unwrap();
    assert_eq!(s8.num_rays(), 4);
    assert_eq!(s8.ray(3).coords(), &[1, 1]);
    let pcs: Vec<Vec<usize>> = primitive_collections(&s8).iter().map(|c| c.members().to_vec()).collect();
    assert_eq!(pcs, vec![vec![0, 1], vec![2, 3]]);
    assert_eq!(blow_down(&s8, 3).unwrap().fan(), p.fan());

    for d in 5..=7 {
        let (_, pd) = family("5.I", d, None);
        let tau = RaySet::from_indices(0..d - 1);
        let b = blow_up(&pd, tau).unwrap();
        let u = b.num_rays() - 1;
        let col = PrimitiveCollection::new(&b, tau).unwrap();
        let r = primitive_relation(&b, col).unwrap();
        assert_eq!(r.rhs, vec![(u, 1)]);
        assert_eq!(r.degree, d as i64 - 2);
    }

    let (inst, f) = family("4.I", 5, Some(1));
    let x5 = inst.presentation.index_of("x5").unwrap();
    let down = blow_down(&f, x5).unwrap();
    let p = presentation_of(&down).unwrap();
    let fives = instances(Section::Five, 5).unwrap();
    assert!(fives.iter().any(|c| isomorphic(&p, &c.presentation).is_some()));
}

#[test]
fn surface_census_values() {
    let one = surface_census(1).unwrap();
    assert_eq!((one.total_complete, one.classes.len(), one.fano_classes()), (64, 11, 5));
    let two = surface_census(2).unwrap();
    assert_eq!(two.fano_classes(), 5);
    let p2 = two.classes.iter().find(|c| c.invariant == [1, 1, 1]).unwrap();
    assert!(p2.fano);
    let fano: Vec<Vec<i64>> = two.fano_representatives().map(|c| c.invariant.clone()).collect();
    let one_fano: Vec<Vec<i64>> = one.fano_representatives().map(|c| c.invariant.clone()).collect();
    assert_eq!(fano, one_fano);
}
