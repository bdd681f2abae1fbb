use std::collections::BTreeSet;

use proptest::prelude::*;
use tarskikit::freegroup::{ball_size, enumerate_ball, verify_group_doubling, Letter, PieceLabel, Word, DEFAULT_WORD_CAP};
use tarskikit::rotact::{certify_freeness, check_divisibility, evaluate, SphereTriple};

fn word() -> impl Strategy<Value = Word> {
    "[sStT]{0,10}".prop_map(|s| Word::parse(if s.is_empty() { "e" } else { &s }).unwrap())
}

/// All reduced strings over the four letters up to length `n`, by brute force.
fn brute_ball(n: usize) -> BTreeSet<String> {
    let mut all = BTreeSet::from([String::new()]);
    let mut layer = vec![String::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for c in ['s', 'S', 't', 'T'] {
                let cancels = w.chars().last().is_some_and(|l| l != c && l.eq_ignore_ascii_case(&c));
                if !cancels {
                    next.push(format!("{w}{c}"));
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

proptest! {
    #[test]
    fn group_laws(a in word(), b in word(), c in word()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        prop_assert!(Word::is_reduced(a.mul(&b).letters()));
    }

    #[test]
    fn display_roundtrip(a in word()) {
        prop_assert_eq!(Word::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in word(), b in word()) {
        let ab = evaluate(&a.mul(&b));
        let composed = tarskikit::rotact::evaluate_at(&a, &evaluate(&b));
        prop_assert!(ab.same_point(&composed));
    }
}

#[test]
fn balls_match_brute_force() {
    for n in 0..=6u32 {
        let ours: BTreeSet<String> = enumerate_ball(n, DEFAULT_WORD_CAP)
            .unwrap()
            .iter()
            .map(|w| if w.is_identity() { String::new() } else { w.to_string() })
            .collect();
        assert_eq!(ours, brute_ball(n as usize));
        assert_eq!(ours.len() as u128, ball_size(n));
    }
}

#[test]
fn ball_is_length_lex_sorted() {
    let ball = enumerate_ball(3, DEFAULT_WORD_CAP).unwrap();
    assert!(ball.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(ball[1], Word::letter(Letter::SIGMA));
    assert_eq!(ball[4], Word::letter(Letter::TAU_INV));
}

#[test]
fn pieces_partition_the_ball() {
    let ball = enumerate_ball(5, DEFAULT_WORD_CAP).unwrap();
    let mut counts = [0usize; 5];
    for w in &ball {
        counts[w.classify().index()] += 1;
    }
    assert_eq!(counts[PieceLabel::Identity.index()], 1);
    assert!(counts[..4].iter().all(|&c| c == (ball.len() - 1) / 4));
}

#[test]
fn first_step_of_freeness() {
    assert_eq!(evaluate(&Word::parse("s").unwrap()), SphereTriple::new(1, 2, 0, 1));
    for w in ["ss", "ts", "Ts"] {
        let t = evaluate(&Word::parse(w).unwrap());
        assert!(t.b == 2.into() || t.b == 4.into() || t.b == (-2).into() || t.b == (-4).into(), "{w}: {t}");
        assert!(check_divisibility(&Word::parse(w).unwrap()).unwrap());
    }
    let r = certify_freeness(6).unwrap();
    assert!(r.pass);
    assert_eq!(r.words_checked, 2 * 3u64.pow(6) - 2);
}

#[test]
fn group_doubling_to_depth_eight() {
    let r = verify_group_doubling(8);
    assert!(r.pass, "{r:?}");
}
