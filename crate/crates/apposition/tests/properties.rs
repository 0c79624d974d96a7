//! Property tests over randomly drawn simple types and indices.

use proptest::prelude::*;

use apposition::chevalley::build_lie_algebra;
use apposition::coxeter;
use apposition::rootsys::{Family, RootSystem, SimpleType};

/// Strategy over the supported types of small rank (cheap to build).
fn small_type() -> impl Strategy<Value = SimpleType> {
    prop_oneof![
        (1usize..=5).prop_map(|r| SimpleType::new(Family::A, r).unwrap()),
        (2usize..=5).prop_map(|r| SimpleType::new(Family::B, r).unwrap()),
        (3usize..=5).prop_map(|r| SimpleType::new(Family::C, r).unwrap()),
        (4usize..=5).prop_map(|r| SimpleType::new(Family::D, r).unwrap()),
        Just(SimpleType::new(Family::F, 4).unwrap()),
        Just(SimpleType::new(Family::G, 2).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roots_closed_under_reflections(t in small_type(), seed in any::<u32>()) {
        let rs = RootSystem::build(t).unwrap();
        let idx = seed as usize % rs.roots.len();
        let root = rs.roots[idx].clone();
        for i in 0..rs.rank {
            let refl = apposition::rootsys::simple_reflection(&rs.cartan, i, &root);
            prop_assert!(rs.root_index.contains_key(&refl));
        }
        // R = -R and the height pairing
        let neg: Vec<i64> = root.iter().map(|x| -x).collect();
        prop_assert!(rs.root_index.contains_key(&neg));
        prop_assert_eq!(rs.height(&neg).unwrap(), -rs.height(&root).unwrap());
    }

    #[test]
    fn duality_twist_is_involutive(t in small_type(), seed in any::<u32>()) {
        let rs = RootSystem::build(t).unwrap();
        let col = rs.bicolor().unwrap();
        let cd = coxeter::coxeter_element(&rs, &col).unwrap();
        let i = 1 + seed as usize % rs.rank;
        let pair = coxeter::cartan_eigenpair(&rs, &cd, i).unwrap();
        let tw = coxeter::duality_twist(&rs, &col, &pair);
        // twisted eigenvalue is the palindromic partner
        prop_assert!((tw.lambda - 2.0 * (1.0 + pair.theta.cos())).abs() < 1e-12);
        let back = coxeter::duality_twist(&rs, &col, &tw);
        for j in 0..rs.rank {
            prop_assert!((back.x[j] - pair.x[j]).abs() < 1e-13);
            prop_assert!((tw.x[j].abs() - pair.x[j].abs()).abs() < 1e-13);
        }
    }

    #[test]
    fn chevalley_sign_symmetry(t in small_type(), seed in any::<u64>()) {
        let rs = RootSystem::build(t).unwrap();
        let la = build_lie_algebra(&rs).unwrap();
        let entries = &la.chevalley.n_entries;
        // rank 1 has no root pair summing to a root
        prop_assume!(!entries.is_empty());
        let pick = seed as usize % entries.len();
        let (a, b, n) = entries[pick];
        let neg = |i: usize| -> usize {
            let v: Vec<i64> = rs.roots[i].iter().map(|x| -x).collect();
            rs.root_index[&v]
        };
        let lookup = |aa: usize, bb: usize| -> i64 {
            entries
                .iter()
                .find(|&&(x, y, _)| x == aa && y == bb)
                .map(|&(_, _, nn)| nn)
                .unwrap()
        };
        prop_assert_eq!(lookup(neg(a), neg(b)), -n);
        prop_assert_eq!(lookup(b, a), -n);
    }

    #[test]
    fn jacobi_identity_random_triples(t in small_type(), seeds in prop::array::uniform3(any::<u64>())) {
        let rs = RootSystem::build(t).unwrap();
        let la = build_lie_algebra(&rs).unwrap();
        let x = seeds[0] as usize % la.dim;
        let y = seeds[1] as usize % la.dim;
        let z = seeds[2] as usize % la.dim;
        prop_assert_eq!(la.jacobi_defect_int(x, y, z), 0);
    }

    #[test]
    fn orbit_sizes(t in small_type()) {
        let rs = RootSystem::build(t).unwrap();
        let col = rs.bicolor().unwrap();
        let cd = coxeter::coxeter_element(&rs, &col).unwrap();
        let orbits = coxeter::orbit_decomposition(&rs, &cd).unwrap();
        prop_assert_eq!(orbits.len(), rs.rank);
        let h = rs.coxeter_number as usize;
        prop_assert!(orbits.iter().all(|o| o.len() == h));
    }
}
