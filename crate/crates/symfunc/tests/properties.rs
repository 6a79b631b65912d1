use num_traits::Zero;
use proptest::prelude::*;
use schurfn::{kronecker, outer, partitions, plethysm, Partition, SchurExpr};

fn arb_partition(max_weight: u32) -> impl Strategy<Value = Partition> {
    (0..=max_weight).prop_flat_map(|n| {
        let all = partitions(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn same_weight_pair(max_weight: u32) -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (1..=max_weight).prop_flat_map(|n| {
        let all = partitions(n);
        let k = all.len();
        (0..k, 0..k, 0..k).prop_map(move |(i, j, l)| (all[i].clone(), all[j].clone(), all[l].clone()))
    })
}

fn weights_of(e: &SchurExpr) -> Vec<u32> {
    e.terms().map(|(p, _)| p.weight()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outer_adds_weights_and_commutes(a in arb_partition(5), b in arb_partition(5)) {
        let ab = outer(&a.clone().into(), &b.clone().into());
        let ba = outer(&b.clone().into(), &a.clone().into());
        prop_assert_eq!(&ab, &ba);
        prop_assert!(ab.has_nonnegative_coefficients());
        prop_assert!(weights_of(&ab).iter().all(|&w| w == a.weight() + b.weight()));
    }

    #[test]
    fn kronecker_commutative_associative_with_identity((a, b, c) in same_weight_pair(6)) {
        let (ea, eb, ec): (SchurExpr, SchurExpr, SchurExpr) = (a.clone().into(), b.into(), c.into());
        let ab = kronecker(&ea, &eb).unwrap();
        prop_assert_eq!(&ab, &kronecker(&eb, &ea).unwrap());
        prop_assert!(ab.has_nonnegative_coefficients());
        let left = kronecker(&ab, &ec).unwrap();
        let right = kronecker(&ea, &kronecker(&eb, &ec).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id: SchurExpr = Partition::row(a.weight()).into();
        prop_assert_eq!(kronecker(&id, &ea).unwrap(), ea.clone());
        prop_assert_eq!(kronecker(&ea, &id).unwrap(), ea);
    }

    #[test]
    fn plethysm_identities_and_weights(a in arb_partition(4), b in arb_partition(3)) {
        prop_assume!(!a.is_empty() && !b.is_empty());
        prop_assume!(a.weight() * b.weight() <= 12);
        let (ea, eb): (SchurExpr, SchurExpr) = (a.clone().into(), b.clone().into());
        let one = SchurExpr::from_parts(&[1]);
        prop_assert_eq!(plethysm(&one, &ea).unwrap(), ea.clone());
        prop_assert_eq!(plethysm(&ea, &one).unwrap(), ea.clone());
        let p = plethysm(&ea, &eb).unwrap();
        prop_assert!(p.has_nonnegative_coefficients());
        prop_assert!(!p.total_multiplicity().is_zero());
        prop_assert!(weights_of(&p).iter().all(|&w| w == a.weight() * b.weight()));
    }
}
