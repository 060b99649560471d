use proptest::prelude::*;
use proptest::sample::subsequence;

use ufam::kset::all_ksets;
use ufam::properties::{
    has_U, is_t_intersecting, matching_number, max_union, shadow_matching_inequality,
    u_equivalences_check,
};
use ufam::shift::{fully_shift, is_shifted, shift_family};
use ufam::{precedes, Family, KSet, UnionProfile};

/// Independent `max_union`: every multiset of `s` members.
fn naive_max_union(masks: &[u64], s: u32) -> u32 {
    fn rec(m: &[u64], from: usize, left: u32, acc: u64) -> u32 {
        if left == 0 {
            return acc.count_ones();
        }
        (from..m.len()).map(|i| rec(m, i, left - 1, acc | m[i])).max().unwrap_or(0)
    }
    if masks.is_empty() {
        0
    } else {
        rec(masks, 0, s, 0)
    }
}

fn family(max_n: u32, max_k: u32) -> impl Strategy<Value = Family> {
    (2..=max_n)
        .prop_flat_map(move |n| (Just(n), 1..=max_k.min(n)))
        .prop_flat_map(|(n, k)| {
            let all = all_ksets(n, k);
            let len = all.len();
            (Just(n), Just(k), subsequence(all, 0..=len))
        })
        .prop_map(|(n, k, masks)| Family::from_masks(n, k, masks).unwrap())
}

fn triples_on_8() -> impl Strategy<Value = Family> {
    let all = all_ksets(8, 3);
    let len = all.len();
    subsequence(all, 0..=len).prop_map(|m| Family::from_masks(8, 3, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shifting_never_raises_unions(g in family(9, 3), i in 1u32..9, d in 1u32..9, s in 2u32..=3) {
        let j = i + d;
        prop_assume!(j <= g.ground());
        let h = shift_family(&g, i, j).unwrap();
        prop_assert_eq!(h.len(), g.len());
        prop_assert!(max_union(&h, s).unwrap() <= max_union(&g, s).unwrap());
    }

    #[test]
    fn full_shift_is_shifted_and_keeps_u(g in family(8, 3), s in 2u32..=3) {
        let h = fully_shift(&g);
        prop_assert!(is_shifted(&h));
        prop_assert_eq!(h.len(), g.len());
        for q in g.k()..=g.ground() {
            if has_U(&g, s, q).unwrap() {
                prop_assert!(has_U(&h, s, q).unwrap());
            }
        }
    }

    #[test]
    fn max_union_matches_naive(g in family(8, 3), s in 1u32..=4) {
        prop_assert_eq!(max_union(&g, s).unwrap(), naive_max_union(g.masks(), s));
        prop_assert!(max_union(&g, s).unwrap() <= max_union(&g, s + 1).unwrap());
    }

    #[test]
    fn profile_tracks_prefixes(g in family(8, 3), depth in 1usize..=3, seed in any::<u64>()) {
        let mut order = g.masks().to_vec();
        // Deterministic shuffle from the seed.
        let mut x = seed | 1;
        for i in (1..order.len()).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let mut exact = UnionProfile::new(depth);
        let mut scoped = UnionProfile::new(depth);
        let mark = scoped.mark();
        for (idx, &m) in order.iter().enumerate() {
            exact.insert(m);
            scoped.insert_scoped(m, |_| {});
            let prefix = &order[..=idx];
            for j in 1..=depth {
                let want = naive_max_union(prefix, j as u32);
                prop_assert_eq!(exact.max_popcount(j), want);
                prop_assert_eq!(scoped.max_popcount(j), want);
            }
        }
        scoped.rollback(&mark);
        prop_assert_eq!(scoped.members(), 0);
        prop_assert_eq!(scoped.max_popcount(depth), 0);
    }

    #[test]
    fn has_u_agrees_with_max_union(g in family(8, 3), s in 2u32..=4, q in 1u32..=8) {
        prop_assert_eq!(has_U(&g, s, q).unwrap(), max_union(&g, s).unwrap() <= q);
    }

    #[test]
    fn text_roundtrip(g in family(10, 3)) {
        prop_assert_eq!(Family::parse_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn precedence_is_compatible_with_colex(n in 2u32..=9, k in 1u32..=4, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        prop_assume!(k <= n);
        let all = all_ksets(n, k);
        let (f, g) = (all[a.index(all.len())], all[b.index(all.len())]);
        let (fs, gs) = (KSet::from_mask(f, n), KSet::from_mask(g, n));
        if precedes(&fs, &gs).unwrap() {
            prop_assert!(fs.colex_cmp(&gs).is_le());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn union_equivalences_n8_k3(g in triples_on_8(), s in 1u32..=3, t in 1u32..=3) {
        let rep = u_equivalences_check(&g, s, t).unwrap();
        prop_assert!(rep.intersecting_equivalence_holds());
        prop_assert!(rep.matching_equivalence_holds(s));
        prop_assert_eq!(rep.t_intersecting, is_t_intersecting(&g, t).unwrap());
        prop_assert_eq!(rep.matching_number, matching_number(&g));
    }

    #[test]
    fn shadow_inequality_on_shifted(g in family(8, 3), s in 1u32..=3) {
        let h = fully_shift(&g);
        if let Some(ok) = shadow_matching_inequality(&h, s).unwrap() {
            prop_assert!(ok);
        }
        if let Some(ok) = shadow_matching_inequality(&g, s).unwrap() {
            prop_assert!(ok);
        }
    }
}

#[test]
fn shifting_exhaustive_small() {
    for n in 2..=5u32 {
        for k in 1..=3u32.min(n) {
            let all = all_ksets(n, k);
            for bits in 0u64..(1 << all.len()) {
                let g = Family::from_masks(
                    n,
                    k,
                    all.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &m)| m),
                )
                .unwrap();
                for s in 2..=3 {
                    let mu = max_union(&g, s).unwrap();
                    for i in 1..n {
                        for j in i + 1..=n {
                            let h = shift_family(&g, i, j).unwrap();
                            assert!(max_union(&h, s).unwrap() <= mu);
                        }
                    }
                }
            }
        }
    }
}
