//! Schröder–Bernstein for equidecompositions: from `A ⪯ B` and `B ⪯ A`
//! build `A ∼ B` out of the greatest fixed point of `Φ(D) = A ∖ f(B ∖ g(D))`.

use std::collections::{BTreeMap, BTreeSet};

use super::{EquidecompositionCert, Motion, Piece, SetView, Window};
use crate::error::{Error, Result};

type Cert<M> = EquidecompositionCert<M>;

/// One application of `Φ(D) = A ∖ f(B ∖ g(D))`.
pub fn bsb_phi<P: Ord + Clone>(
    a: &BTreeSet<P>,
    b: &BTreeSet<P>,
    g: &BTreeMap<P, P>,
    f: &BTreeMap<P, P>,
    d: &BTreeSet<P>,
) -> BTreeSet<P> {
    let gd: BTreeSet<&P> = d.iter().filter_map(|x| g.get(x)).collect();
    let removed: BTreeSet<&P> = b.iter().filter(|y| !gd.contains(y)).filter_map(|y| f.get(y)).collect();
    a.iter().filter(|x| !removed.contains(x)).cloned().collect()
}

/// Iterates `Φ` downward from `A` until it stops changing. Returns the
/// fixed point and the number of applications of `Φ`.
pub fn bsb_greatest_fixed_point<P: Ord + Clone>(
    a: &BTreeSet<P>,
    b: &BTreeSet<P>,
    g: &BTreeMap<P, P>,
    f: &BTreeMap<P, P>,
) -> (BTreeSet<P>, usize) {
    let mut d = a.clone();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next = bsb_phi(a, b, g, f, &d);
        if next == d {
            return (d, iterations);
        }
        d = next;
    }
}

#[derive(Clone, Debug)]
pub struct BsbOutcome<M: Motion> {
    pub cert: Cert<M>,
    /// The fixed point `D` on the materialized source.
    pub fixed_point: BTreeSet<M::Point>,
    pub iterations: usize,
}

struct Side<P> {
    domain: BTreeSet<P>,
    map: BTreeMap<P, P>,
    piece: BTreeMap<P, usize>,
}

fn side<M: Motion>(c: &Cert<M>, codomain: &SetView<M::Point>, depth: u32, name: &str) -> Result<Side<M::Point>> {
    let domain = c.source.enumerate(depth);
    let mut map = BTreeMap::new();
    let mut piece = BTreeMap::new();
    let mut seen: BTreeMap<M::Point, M::Point> = BTreeMap::new();
    for x in &domain {
        let i = c
            .piece_of(x)
            .ok_or_else(|| Error::Precondition(format!("{name}: {x:?} is not in exactly one piece")))?;
        let y = c.pieces[i].motion.apply(x);
        if !codomain.contains(&y) {
            return Err(Error::Precondition(format!("{name}: image {y:?} of {x:?} leaves the codomain")));
        }
        if let Some(prev) = seen.insert(y.clone(), x.clone()) {
            return Err(Error::NotInjective(format!("{name} sends {prev:?} and {x:?} to {y:?}")));
        }
        map.insert(x.clone(), y);
        piece.insert(x.clone(), i);
    }
    Ok(Side { domain, map, piece })
}

fn solve<M: Motion>(
    gc: &Cert<M>,
    fc: &Cert<M>,
    depth: u32,
) -> Result<(Side<M::Point>, Side<M::Point>, BTreeSet<M::Point>, usize)> {
    let g = side(gc, &fc.source, depth, "g")?;
    let f = side(fc, &gc.source, depth, "f")?;
    let (d, it) = bsb_greatest_fixed_point(&g.domain, &f.domain, &g.map, &f.map);
    Ok((g, f, d, it))
}

/// Combines `gc: A ∼ B′ ⊆ B` and `fc: B ∼ A′ ⊆ A` into `A ∼ B`.
///
/// Points of `D` move by the pieces of `g`; the rest of `A` is
/// `f(B ∖ g(D))` and moves back by the inverse pieces of `f`. With lazy
/// sets everything is materialized at `depth`, the fixed point is
/// recomputed at `depth + 1` and must agree on the trimmed range, and the
/// result carries `depth` as its horizon.
pub fn bsb_combine<M: Motion>(gc: &Cert<M>, fc: &Cert<M>, depth: u32) -> Result<BsbOutcome<M>> {
    for c in [gc, fc] {
        let r = c.verify(depth);
        if !r.pass {
            return Err(Error::verification(r));
        }
    }
    let window = Window::chain(gc.window.as_ref(), fc.window.as_ref());
    let (g, f, d, iterations) = solve(gc, fc, depth)?;

    if let Some(w) = &window {
        let (_, _, d_next, _) = solve(gc, fc, depth + 1)?;
        let limit = depth.saturating_sub(w.margin);
        let trimmed = |s: &BTreeSet<M::Point>| -> BTreeSet<M::Point> { s.iter().filter(|x| w.within(x, limit)).cloned().collect() };
        let (now, next) = (trimmed(&d), trimmed(&d_next));
        if let Some(x) = now.symmetric_difference(&next).next() {
            return Err(Error::Unstable {
                depth,
                detail: format!("{x:?} changes membership between depth {depth} and {}", depth + 1),
            });
        }
    }

    let mut e: Vec<BTreeSet<M::Point>> = vec![BTreeSet::new(); gc.pieces.len()];
    for x in &d {
        e[g.piece[x]].insert(x.clone());
    }
    let gd: BTreeSet<&M::Point> = d.iter().map(|x| &g.map[x]).collect();
    let mut back: Vec<BTreeSet<M::Point>> = vec![BTreeSet::new(); fc.pieces.len()];
    for y in f.domain.iter().filter(|y| !gd.contains(y)) {
        let x = &f.map[y];
        if g.domain.contains(x) {
            back[f.piece[y]].insert(x.clone());
        }
    }

    let mut pieces = Vec::new();
    for (set, p) in e.into_iter().zip(&gc.pieces) {
        if !set.is_empty() {
            pieces.push(Piece::new(SetView::Finite(set), p.motion.clone()));
        }
    }
    for (set, p) in back.into_iter().zip(&fc.pieces) {
        if !set.is_empty() {
            pieces.push(Piece::new(SetView::Finite(set), p.motion.inverse()));
        }
    }
    let window = window.map(|w| w.with_horizon(depth));
    let cert = Cert::new(gc.source.clone(), fc.source.clone(), pieces, window);
    Ok(BsbOutcome { cert, fixed_point: d, iterations })
}
