//! Permutations of `0..n` as motions, and random finite Schröder–Bernstein
//! instances built from them.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use std::sync::Arc;

use super::{EquidecompositionCert, Motion, Piece, SetView, Window};

/// A permutation of the naturals moving only finitely many points.
/// Stored without trailing fixed points, so equal permutations compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity() -> Self {
        Permutation(Vec::new())
    }

    /// `images[i]` is the image of `i`; must be a permutation of `0..len`.
    pub fn from_images(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &y in &images {
            assert!(y < images.len() && !seen[y], "not a permutation: {images:?}");
            seen[y] = true;
        }
        Self::trimmed(images)
    }

    fn trimmed(mut v: Vec<usize>) -> Self {
        while v.last().is_some_and(|&y| y == v.len() - 1) {
            v.pop();
        }
        Permutation(v)
    }

    /// Some permutation of `0..universe` agreeing with the injective `map`.
    pub fn extending(map: &BTreeMap<usize, usize>, universe: usize) -> Self {
        let mut images = vec![usize::MAX; universe];
        let used: BTreeSet<usize> = map.values().copied().collect();
        for (&x, &y) in map {
            images[x] = y;
        }
        let mut free = (0..universe).filter(|y| !used.contains(y));
        for slot in images.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = free.next().expect("map is injective");
        }
        Self::from_images(images)
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }
}

impl Motion for Permutation {
    type Point = usize;

    fn identity() -> Self {
        Permutation::identity()
    }

    fn apply(&self, p: &usize) -> usize {
        self.0.get(*p).copied().unwrap_or(*p)
    }

    fn after(&self, first: &Self) -> Self {
        let n = self.0.len().max(first.0.len());
        Self::trimmed((0..n).map(|x| self.apply(&first.apply(&x))).collect())
    }

    fn inverse(&self) -> Self {
        let mut v = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            v[y] = x;
        }
        Permutation(v)
    }

    fn describe(&self) -> Value {
        json!({ "permutation": self.0 })
    }
}

/// A random injection of `source` into `target`, cut into at most
/// `max_pieces` pieces, each moved by one permutation of `0..universe`.
pub fn random_injection_cert<R: Rng>(
    source: &BTreeSet<usize>,
    target: &BTreeSet<usize>,
    max_pieces: usize,
    universe: usize,
    rng: &mut R,
) -> EquidecompositionCert<Permutation> {
    assert!(source.len() <= target.len(), "no injection into a smaller set");
    let mut images: Vec<usize> = target.iter().copied().collect();
    images.shuffle(rng);
    let k = rng.gen_range(1..=max_pieces.max(1));
    let mut parts: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); k];
    for (&x, &y) in source.iter().zip(&images) {
        parts[rng.gen_range(0..k)].insert(x, y);
    }
    let pieces: Vec<_> = parts
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|m| Piece::new(SetView::finite(m.keys().copied()), Permutation::extending(&m, universe)))
        .collect();
    let image: BTreeSet<usize> = images[..source.len()].iter().copied().collect();
    EquidecompositionCert::new(SetView::Finite(source.clone()), SetView::Finite(image), pieces, None)
}

/// Two subsets of `0..2·size` of size `size` with random piecewise
/// injections each way.
#[derive(Clone, Debug)]
pub struct BsbInstance {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub g: EquidecompositionCert<Permutation>,
    pub f: EquidecompositionCert<Permutation>,
}

pub fn random_bsb_instance(size: usize, max_pieces: usize, seed: u64) -> BsbInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = 2 * size.max(1);
    let pick = |rng: &mut ChaCha8Rng| -> BTreeSet<usize> {
        let mut all: Vec<usize> = (0..universe).collect();
        all.shuffle(rng);
        all.into_iter().take(size).collect()
    };
    let a = pick(&mut rng);
    let b = pick(&mut rng);
    let g = random_injection_cert(&a, &b, max_pieces, universe, &mut rng);
    let f = random_injection_cert(&b, &a, max_pieces, universe, &mut rng);
    BsbInstance { a, b, g, f }
}

/// Translation of the integers by a fixed step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Shift(pub i64);

impl Motion for Shift {
    type Point = i64;

    fn identity() -> Self {
        Shift(0)
    }

    fn apply(&self, p: &i64) -> i64 {
        p + self.0
    }

    fn after(&self, first: &Self) -> Self {
        Shift(self.0 + first.0)
    }

    fn inverse(&self) -> Self {
        Shift(-self.0)
    }

    fn describe(&self) -> Value {
        json!({ "shift": self.0 })
    }
}

/// `{n ≥ from}`, enumerated as `from..=depth`.
pub fn naturals_from(from: i64) -> SetView<i64> {
    SetView::lazy(
        &format!("naturals_from({from})"),
        json!({ "from": from }),
        move |&n| n >= from,
        move |d| (from..=d as i64).collect(),
    )
}

/// `ℕ ∼ ℕ + step` by the single shift, graded by value.
pub fn shift_cert(step: i64) -> EquidecompositionCert<Shift> {
    assert!(step >= 0, "shifts into ℕ only");
    let grade = Window::new(Arc::new(|n: &i64| u32::try_from(*n).ok()), step as u32);
    EquidecompositionCert::new(
        naturals_from(0),
        naturals_from(step),
        vec![Piece::new(naturals_from(0), Shift(step))],
        Some(grade),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order() {
        let p = Permutation::from_images(vec![1, 2, 0]);
        let q = Permutation::from_images(vec![1, 0]);
        assert_eq!(q.after(&p).apply(&0), 0);
        assert_eq!(q.after(&p).apply(&2), 1);
        assert_eq!(p.after(&p.inverse()), Permutation::identity());
    }

    #[test]
    fn extension_agrees() {
        let m: BTreeMap<usize, usize> = [(0, 3), (2, 0)].into_iter().collect();
        let p = Permutation::extending(&m, 5);
        assert_eq!(p.apply(&0), 3);
        assert_eq!(p.apply(&2), 0);
        assert_eq!(p.apply(&7), 7);
    }

    #[test]
    fn random_instances_verify() {
        for seed in 0..20 {
            let inst = random_bsb_instance(10, 6, seed);
            assert!(inst.g.verify(0).pass);
            assert!(inst.f.verify(0).pass);
            assert!(inst.g.piece_count() <= 6);
        }
    }

    #[test]
    fn shifted_naturals() {
        let out = crate::equideco::bsb_combine(&shift_cert(1), &shift_cert(2), 30).unwrap();
        let rest: Vec<i64> = (0..=30).filter(|x| !out.fixed_point.contains(x)).collect();
        assert_eq!(rest, (2..=30).step_by(3).collect::<Vec<_>>());
        assert!(out.cert.verify(30).pass, "{:?}", out.cert.verify(30));
    }
}
