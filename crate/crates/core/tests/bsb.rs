use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use tarskikit::equideco::finite::{random_bsb_instance, shift_cert, Permutation};
use tarskikit::equideco::{bsb_combine, bsb_greatest_fixed_point, bsb_phi, EquidecompositionCert, Piece, SetView};

fn pointwise(c: &EquidecompositionCert<Permutation>, depth: u32) -> BTreeMap<usize, usize> {
    c.induced_map(depth).unwrap()
}

/// The bijection read off backward chains: `x` moves by `g` unless its
/// chain stops at a point of `B` outside `g(A)`.
fn chain_oracle(
    a: &BTreeSet<usize>,
    g: &BTreeMap<usize, usize>,
    f: &BTreeMap<usize, usize>,
) -> BTreeMap<usize, usize> {
    let g_inv: BTreeMap<usize, usize> = g.iter().map(|(&x, &y)| (y, x)).collect();
    let f_inv: BTreeMap<usize, usize> = f.iter().map(|(&x, &y)| (y, x)).collect();
    let mut out = BTreeMap::new();
    for &x in a {
        let mut cur = x;
        let mut seen = BTreeSet::new();
        let by_g = loop {
            if !seen.insert(cur) {
                break true;
            }
            let Some(&y) = f_inv.get(&cur) else { break true };
            let Some(&z) = g_inv.get(&y) else { break false };
            cur = z;
        };
        out.insert(x, if by_g { g[&x] } else { f_inv[&x] });
    }
    out
}

#[test]
fn random_instances_match_the_oracle() {
    for seed in 0..120u64 {
        let size = 1 + (seed as usize * 7) % 64;
        let inst = random_bsb_instance(size, 6, seed);
        let out = bsb_combine(&inst.g, &inst.f, 0).unwrap();
        let r = out.cert.verify(0);
        assert!(r.pass, "seed {seed}: {r:?}");
        assert!(out.cert.piece_count() <= inst.g.piece_count() + inst.f.piece_count());
        let (g, f) = (pointwise(&inst.g, 0), pointwise(&inst.f, 0));
        assert_eq!(pointwise(&out.cert, 0), chain_oracle(&inst.a, &g, &f), "seed {seed}");
    }
}

proptest! {
    #[test]
    fn phi_is_monotone_and_the_limit_is_greatest(seed in 0u64..1000, size in 1usize..20) {
        let inst = random_bsb_instance(size, 4, seed);
        let (g, f) = (pointwise(&inst.g, 0), pointwise(&inst.f, 0));
        let d1: BTreeSet<usize> = inst.a.iter().copied().filter(|x| x % 2 == 0).collect();
        let d2: BTreeSet<usize> = inst.a.iter().copied().filter(|x| x % 2 == 0 || x % 3 == 0).collect();
        let p1 = bsb_phi(&inst.a, &inst.b, &g, &f, &d1);
        let p2 = bsb_phi(&inst.a, &inst.b, &g, &f, &d2);
        prop_assert!(p1.is_subset(&p2));
        let (d, _) = bsb_greatest_fixed_point(&inst.a, &inst.b, &g, &f);
        prop_assert_eq!(&bsb_phi(&inst.a, &inst.b, &g, &f, &d), &d);
        prop_assert!(p2.is_subset(&inst.a));
    }
}

#[test]
fn colliding_pieces_are_rejected() {
    let inst = random_bsb_instance(6, 1, 3);
    let xs: Vec<usize> = inst.a.iter().copied().collect();
    let target = *inst.b.iter().next().unwrap();
    let to = |x: usize| Permutation::extending(&BTreeMap::from([(x, target)]), 12);
    let mut g = inst.g.clone();
    g.pieces = vec![
        Piece::new(SetView::finite([xs[0]]), to(xs[0])),
        Piece::new(SetView::finite(xs[1..].iter().copied()), to(xs[1])),
    ];
    assert!(bsb_combine(&g, &inst.f, 0).is_err());
}

#[test]
fn shifted_naturals_have_a_proper_fixed_point() {
    for depth in [10u32, 31, 60] {
        let out = bsb_combine(&shift_cert(1), &shift_cert(2), depth).unwrap();
        let moved_back: Vec<i64> = (0..=depth as i64).filter(|x| !out.fixed_point.contains(x)).collect();
        assert!(moved_back.iter().all(|x| x % 3 == 2));
        assert_eq!(moved_back.len(), (depth as usize + 1) / 3);
        assert!(out.cert.verify(depth).pass);
        let map = out.cert.induced_map(depth).unwrap();
        for (x, y) in map.iter().filter(|(x, _)| **x + 3 <= depth as i64) {
            assert_eq!(*y, if x % 3 == 2 { x - 2 } else { x + 1 });
        }
    }
}
