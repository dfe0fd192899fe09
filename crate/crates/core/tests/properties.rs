use nilduality::partitions::{all_partitions, FamilyKind, Partition, PartitionFamily};
use nilduality::rootdata::{Coweight, RootSystem, RootType};
use proptest::prelude::*;

fn partition(max_size: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=6, 0..=max_size)
        .prop_map(Partition::from_unsorted)
        .prop_filter("bounded size", move |p| p.size() <= max_size)
}

fn f4_coweight() -> impl Strategy<Value = Coweight> {
    prop::collection::vec(-3i64..=3, 4).prop_map(|v| Coweight::integral(&v))
}

fn f4() -> RootSystem {
    RootSystem::new(RootType::F4, 4).unwrap()
}

proptest! {
    #[test]
    fn transpose_is_an_involution(p in partition(14)) {
        prop_assert_eq!(p.transpose().transpose(), p.clone());
        prop_assert_eq!(p.transpose().size(), p.size());
    }

    #[test]
    fn transpose_reverses_dominance(n in 1usize..=12, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let all = all_partitions(n);
        let p = i.get(&all);
        let q = j.get(&all);
        prop_assert_eq!(
            p.dominates(q).unwrap(),
            q.transpose().dominates(&p.transpose()).unwrap()
        );
    }

    #[test]
    fn collapse_is_valid_dominated_and_idempotent(p in partition(12), k in 0usize..3) {
        let kind = [FamilyKind::B, FamilyKind::C, FamilyKind::D][k];
        let family = match PartitionFamily::new(kind, p.size()) {
            Ok(f) => f,
            Err(_) => return Ok(()),
        };
        let c = family.collapse(&p).unwrap();
        prop_assert!(family.is_valid(&c));
        prop_assert!(p.dominates(&c).unwrap());
        prop_assert_eq!(family.collapse(&c).unwrap(), c.clone());
        if family.is_valid(&p) {
            prop_assert_eq!(c, p);
        }
    }

    #[test]
    fn dominant_rep_is_dominant_and_idempotent(w in f4_coweight()) {
        let rs = f4();
        let d = rs.dominant_rep(&w).unwrap();
        prop_assert!(rs.is_dominant(&d).unwrap());
        prop_assert_eq!(rs.dominant_rep(&d).unwrap(), d);
    }

    #[test]
    fn weyl_conjugacy_is_an_equivalence(a in f4_coweight(), b in f4_coweight(), i in 0usize..4, j in 0usize..4) {
        let rs = f4();
        prop_assert!(rs.weyl_conjugate(&a, &a).unwrap());
        let a2 = rs.reflect(&rs.reflect(&a, i).unwrap(), j).unwrap();
        prop_assert!(rs.weyl_conjugate(&a, &a2).unwrap());
        prop_assert!(rs.weyl_conjugate(&a2, &a).unwrap());
        prop_assert_eq!(rs.weyl_conjugate(&a, &b).unwrap(), rs.weyl_conjugate(&a2, &b).unwrap());
    }

    #[test]
    fn reflection_is_an_involution(w in f4_coweight(), i in 0usize..4) {
        let rs = f4();
        prop_assert_eq!(rs.reflect(&rs.reflect(&w, i).unwrap(), i).unwrap(), w);
    }
}
