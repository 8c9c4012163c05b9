use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use toric_core::linalg::determinant;
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

fn sample_fans() -> Vec<SmoothCompleteFan> {
    let mut out = vec![
        SmoothCompleteFan::new(fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])).unwrap(),
        SmoothCompleteFan::new(fan(
            2,
            &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 0]],
        ))
        .unwrap(),
    ];
    for (id, d, a) in [("4.I", 5, Some(2)), ("4.IV", 5, Some(1)), ("4.IIb.4.2", 5, None), ("5.IIIb.3", 5, None)] {
        let inst = instantiate(id.parse().unwrap(), d, a).unwrap();
        out.push(SmoothCompleteFan::new(realize(&inst.presentation).unwrap()).unwrap());
    }
    out
}

/// Cramer's rule coordinates of `p` in the basis of a maximal cone.
fn cramer(f: &SmoothCompleteFan, cone: RaySet, p: &[i64]) -> Vec<BigInt> {
    let gens: Vec<Vec<i64>> = cone.iter().map(|i| f.ray(i).coords().to_vec()).collect();
    let columns = |g: &[Vec<i64>]| -> Vec<Vec<i64>> { (0..p.len()).map(|r| g.iter().map(|c| c[r]).collect()).collect() };
    let det = determinant(&columns(&gens)).unwrap();
    (0..gens.len())
        .map(|k| {
            let mut g = gens.clone();
            g[k] = p.to_vec();
            determinant(&columns(&g)).unwrap() * &det
        })
        .collect()
}

const DIMS: [usize; 6] = [2, 2, 5, 5, 5, 5];

fn point_strategy(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-25i64..=25, dim).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn locate_is_a_partition((which, p) in (0usize..6).prop_flat_map(|w| (Just(w), point_strategy(DIMS[w])))) {
        let fans = sample_fans();
        let f = &fans[which];
        let d = f.dim();
        let loc = f.locate(&LatticeVector::new(p.clone())).unwrap();
        prop_assert!(f.is_face(loc.cone));
        prop_assert!(loc.coeffs.iter().all(|&c| c > 0));
        let mut sum = vec![0i64; d];
        for (i, c) in loc.cone.iter().zip(&loc.coeffs) {
            for (s, x) in sum.iter_mut().zip(f.ray(i).coords()) {
                *s += c * x;
            }
        }
        prop_assert_eq!(&sum, &p);
        // Every maximal cone containing the point sees the same open face.
        let mut supports = BTreeSet::new();
        for &c in f.fan().max_cones() {
            let coords = cramer(f, c, &p);
            if coords.iter().all(|x| *x >= BigInt::from(0)) {
                let support: Vec<usize> = c.iter().zip(&coords).filter(|(_, x)| **x > BigInt::from(0)).map(|(i, _)| i).collect();
                supports.insert(support);
            }
        }
        prop_assert_eq!(supports.len(), 1);
        prop_assert_eq!(supports.into_iter().next().unwrap(), loc.cone.to_vec());
    }

    #[test]
    fn validation_ignores_ordering(which in 0usize..6, perm_seed in any::<u64>(), broken in any::<bool>()) {
        let fans = sample_fans();
        let f = fans[which].fan().clone();
        let n = f.num_rays();
        let mut cones: Vec<Vec<usize>> = f.max_cones().iter().map(|c| c.to_vec()).collect();
        if broken {
            cones.pop();
        }
        let base = Fan::new(f.dim(), f.rays().to_vec(), cones.clone(), None).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let shift = (perm_seed % cones.len() as u64) as usize;
        cones.rotate_left(shift);
        let reordered = Fan::new(f.dim(), f.rays().to_vec(), cones, None).unwrap().permuted(&perm).unwrap();
        let a = validate(&base).unwrap();
        let b = validate(&reordered).unwrap();
        prop_assert_eq!(
            (a.simplicial, a.smooth, a.complete, a.proper),
            (b.simplicial, b.smooth, b.complete, b.proper)
        );
        prop_assert_eq!(a.is_valid(), !broken);
        prop_assert_eq!(a.witnesses.is_empty(), a.is_valid());
    }
}

#[test]
fn realization_is_independent_of_the_seed_cone() {
    for (id, a) in [("4.IIa.1", Some(2)), ("4.IIIb.6", Some(1)), ("4.IV", Some(2)), ("5.IIb.2", None)] {
        let inst = instantiate(id.parse().unwrap(), 5, a).unwrap();
        let p = &inst.presentation;
        let reference = SmoothCompleteFan::new(realize(p).unwrap()).unwrap();
        let mut seeds = 0;
        for &c in reference.fan().max_cones() {
            let f = realize_with_seed(p, Some(c)).unwrap();
            let f = SmoothCompleteFan::new(f).unwrap();
            assert_eq!(presentation_of(&f).unwrap(), *p, "{id} seed {c:?}");
            // Any two realizations differ by a unimodular change of basis.
            let m: Vec<Vec<i64>> = c.iter().map(|i| f.ray(i).coords().to_vec()).collect();
            assert_eq!(determinant(&m).unwrap().magnitude(), &1u32.into());
            seeds += 1;
        }
        assert!(seeds > 10, "{id}");
    }
}

#[test]
fn rays_equal_dimension_plus_picard() {
    for d in [5, 7] {
        for s in [Section::Four, Section::Five] {
            for inst in instances(s, d).unwrap() {
                let f = realize(&inst.presentation).unwrap();
                assert_eq!(f.num_rays(), d + f.picard_number());
                assert_eq!(f.picard_number(), inst.id.picard_number());
            }
        }
    }
}
