//! Equidecomposition certificates over an abstract motion group, with
//! exact verification on finite or depth-bounded views of the sets involved.

mod algebra;
mod bsb;
pub mod finite;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::VerificationReport;

pub use algebra::{absorb, compose, identity_cert, inverse, paradox_partition, restrict, sandwich, transfer, Paradox};
pub use bsb::{bsb_combine, bsb_greatest_fixed_point, bsb_phi, BsbOutcome};

/// A group element acting on points.
pub trait Motion: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Point: Clone + Ord + Hash + fmt::Debug + Serialize + Send + Sync + 'static;

    fn identity() -> Self;
    fn apply(&self, p: &Self::Point) -> Self::Point;
    /// `self ∘ first`: apply `first`, then `self`.
    fn after(&self, first: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn describe(&self) -> Value;
}

pub type Grading<P> = Arc<dyn Fn(&P) -> Option<u32> + Send + Sync>;
type Membership<P> = Arc<dyn Fn(&P) -> bool + Send + Sync>;
type Enumerator<P> = Arc<dyn Fn(u32) -> BTreeSet<P> + Send + Sync>;

/// A set of points: either explicit, or a membership test plus an
/// enumerator returning the members of grade at most `d`.
#[derive(Clone)]
pub enum SetView<P> {
    Finite(BTreeSet<P>),
    Lazy(LazySet<P>),
}

#[derive(Clone)]
pub struct LazySet<P> {
    pub name: String,
    pub params: Value,
    contains: Membership<P>,
    enumerate: Enumerator<P>,
}

impl<P> fmt::Debug for SetView<P>
where
    P: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetView::Finite(s) => f.debug_set().entries(s.iter()).finish(),
            SetView::Lazy(l) => write!(f, "<{} {}>", l.name, l.params),
        }
    }
}

impl<P> SetView<P>
where
    P: Clone + Ord + fmt::Debug + Serialize + Send + Sync + 'static,
{
    pub fn finite(points: impl IntoIterator<Item = P>) -> Self {
        SetView::Finite(points.into_iter().collect())
    }

    pub fn empty() -> Self {
        SetView::Finite(BTreeSet::new())
    }

    pub fn lazy(
        name: &str,
        params: Value,
        contains: impl Fn(&P) -> bool + Send + Sync + 'static,
        enumerate: impl Fn(u32) -> BTreeSet<P> + Send + Sync + 'static,
    ) -> Self {
        SetView::Lazy(LazySet {
            name: name.to_string(),
            params,
            contains: Arc::new(contains),
            enumerate: Arc::new(enumerate),
        })
    }

    pub fn contains(&self, p: &P) -> bool {
        match self {
            SetView::Finite(s) => s.contains(p),
            SetView::Lazy(l) => (l.contains)(p),
        }
    }

    /// Members of grade at most `depth`; a finite set returns everything.
    pub fn enumerate(&self, depth: u32) -> BTreeSet<P> {
        match self {
            SetView::Finite(s) => s.clone(),
            SetView::Lazy(l) => (l.enumerate)(depth),
        }
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<P>> {
        match self {
            SetView::Finite(s) => Some(s),
            SetView::Lazy(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SetView::Finite(_))
    }

    pub fn name(&self) -> String {
        match self {
            SetView::Finite(s) => format!("finite[{}]", s.len()),
            SetView::Lazy(l) => l.name.clone(),
        }
    }

    pub fn difference(&self, other: &SetView<P>) -> SetView<P> {
        match self {
            SetView::Finite(s) => SetView::finite(s.iter().filter(|p| !other.contains(p)).cloned()),
            SetView::Lazy(_) => {
                let (a, b) = (self.clone(), other.clone());
                let (a2, b2) = (self.clone(), other.clone());
                SetView::lazy(
                    &format!("{}-{}", self.name(), other.name()),
                    json!({ "difference": [self.describe(), other.describe()] }),
                    move |p| a.contains(p) && !b.contains(p),
                    move |d| a2.enumerate(d).into_iter().filter(|p| !b2.contains(p)).collect(),
                )
            }
        }
    }

    /// Finite whenever either side is finite.
    pub fn intersection(&self, other: &SetView<P>) -> SetView<P> {
        match (self, other) {
            (SetView::Finite(s), _) => SetView::finite(s.iter().filter(|p| other.contains(p)).cloned()),
            (_, SetView::Finite(t)) => SetView::finite(t.iter().filter(|p| self.contains(p)).cloned()),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                let (a2, b2) = (self.clone(), other.clone());
                SetView::lazy(
                    &format!("{}&{}", self.name(), other.name()),
                    json!({ "intersection": [self.describe(), other.describe()] }),
                    move |p| a.contains(p) && b.contains(p),
                    move |d| a2.enumerate(d).into_iter().filter(|p| b2.contains(p)).collect(),
                )
            }
        }
    }

    pub fn union(&self, other: &SetView<P>) -> SetView<P> {
        match (self, other) {
            (SetView::Finite(s), SetView::Finite(t)) => SetView::Finite(s.union(t).cloned().collect()),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                let (a2, b2) = (self.clone(), other.clone());
                SetView::lazy(
                    &format!("{}+{}", self.name(), other.name()),
                    json!({ "union": [self.describe(), other.describe()] }),
                    move |p| a.contains(p) || b.contains(p),
                    move |d| {
                        let mut s = a2.enumerate(d);
                        s.extend(b2.enumerate(d));
                        s
                    },
                )
            }
        }
    }

    /// First member of `self` (at `depth`) that `other` lacks.
    pub fn first_outside(&self, other: &SetView<P>, depth: u32) -> Option<P> {
        self.enumerate(depth).into_iter().find(|p| !other.contains(p))
    }

    /// A witness that the two views differ at `depth`, if any.
    pub fn differs_at(&self, other: &SetView<P>, depth: u32) -> Option<P> {
        let (a, b) = (self.enumerate(depth), other.enumerate(depth));
        a.symmetric_difference(&b).next().cloned()
    }

    pub fn describe(&self) -> Value {
        match self {
            SetView::Finite(s) => json!({ "finite": s }),
            SetView::Lazy(l) => json!({ "lazy": l.name, "params": l.params }),
        }
    }
}

/// How a lazily verified certificate is trimmed: points are graded, every
/// motion moves a grade by at most `margin`, and nothing is claimed past
/// `horizon`.
pub struct Window<P> {
    pub grading: Grading<P>,
    pub margin: u32,
    pub horizon: Option<u32>,
}

impl<P> Clone for Window<P> {
    fn clone(&self) -> Self {
        Window { grading: self.grading.clone(), margin: self.margin, horizon: self.horizon }
    }
}

impl<P> Window<P> {
    pub fn new(grading: Grading<P>, margin: u32) -> Self {
        Window { grading, margin, horizon: None }
    }

    pub fn with_horizon(mut self, horizon: u32) -> Self {
        self.horizon = Some(self.horizon.map_or(horizon, |h| h.min(horizon)));
        self
    }

    pub fn with_margin(mut self, margin: u32) -> Self {
        self.margin = margin;
        self
    }

    pub fn grade(&self, p: &P) -> Option<u32> {
        (self.grading)(p)
    }

    pub fn within(&self, p: &P, limit: u32) -> bool {
        self.grade(p).is_some_and(|g| g <= limit)
    }

    /// Chaining two windows: margins add, horizons take the minimum.
    pub fn chain(a: Option<&Window<P>>, b: Option<&Window<P>>) -> Option<Window<P>> {
        match (a, b) {
            (None, None) => None,
            (Some(w), None) | (None, Some(w)) => Some(w.clone()),
            (Some(x), Some(y)) => Some(Window {
                grading: x.grading.clone(),
                margin: x.margin + y.margin,
                horizon: match (x.horizon, y.horizon) {
                    (Some(h), Some(k)) => Some(h.min(k)),
                    (h, k) => h.or(k),
                },
            }),
        }
    }
}

impl<P> fmt::Debug for Window<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window(margin {}, horizon {:?})", self.margin, self.horizon)
    }
}

#[derive(Clone, Debug)]
pub struct Piece<M: Motion> {
    pub set: SetView<M::Point>,
    pub motion: M,
}

impl<M: Motion> Piece<M> {
    pub fn new(set: SetView<M::Point>, motion: M) -> Self {
        Piece { set, motion }
    }
}

/// A witness of `source ∼ target`: the pieces partition the source and
/// their images under the motions partition the target.
///
/// Without a window the sets are compared exactly at the requested depth;
/// with one, images are only required to match the target on the trimmed
/// range `grade ≤ depth − margin`.
#[derive(Clone, Debug)]
pub struct EquidecompositionCert<M: Motion> {
    pub source: SetView<M::Point>,
    pub target: SetView<M::Point>,
    pub pieces: Vec<Piece<M>>,
    pub window: Option<Window<M::Point>>,
}

type Located<P> = std::result::Result<(usize, P), (&'static str, String)>;

impl<M: Motion> EquidecompositionCert<M> {
    pub fn new(
        source: SetView<M::Point>,
        target: SetView<M::Point>,
        pieces: Vec<Piece<M>>,
        window: Option<Window<M::Point>>,
    ) -> Self {
        EquidecompositionCert { source, target, pieces, window }
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn margin(&self) -> u32 {
        self.window.as_ref().map_or(0, |w| w.margin)
    }

    fn locate(&self, x: &M::Point) -> Located<M::Point> {
        let mut hit = None;
        for (i, pc) in self.pieces.iter().enumerate() {
            if pc.set.contains(x) {
                if let Some(j) = hit {
                    return Err(("pieces overlap", format!("{x:?} lies in pieces {j} and {i}")));
                }
                hit = Some(i);
            }
        }
        match hit {
            None => Err(("source point in no piece", format!("{x:?}"))),
            Some(i) => Ok((i, self.pieces[i].motion.apply(x))),
        }
    }

    /// Exact check of both partition invariants at `depth`.
    pub fn verify(&self, depth: u32) -> VerificationReport {
        let mut report = VerificationReport::new("equidecomposition", Some(depth));
        report.count("pieces", self.pieces.len() as u64);
        let limit = match &self.window {
            None => Some(depth),
            Some(w) => {
                if let Some(h) = w.horizon.filter(|h| depth > *h) {
                    report.fail("depth beyond certified horizon", format!("{depth} > {h}"));
                    return report;
                }
                depth.checked_sub(w.margin)
            }
        };
        let Some(limit) = limit else {
            report.fail("depth smaller than the certificate margin", depth);
            return report;
        };
        for (i, piece) in self.pieces.iter().enumerate() {
            if let SetView::Finite(s) = &piece.set {
                if let Some(x) = s.iter().find(|x| !self.source.contains(x)) {
                    report.fail(format!("piece {i} leaves the source"), format!("{x:?}"));
                    return report;
                }
            }
        }

        let src: Vec<M::Point> = self.source.enumerate(depth).into_iter().collect();
        report.count("source", src.len() as u64);
        let located: Vec<Located<M::Point>> = src.par_iter().map(|x| self.locate(x)).collect();
        let mut per_piece = vec![0u64; self.pieces.len()];
        let mut images: HashMap<M::Point, usize> = HashMap::with_capacity(src.len());
        for (idx, r) in located.into_iter().enumerate() {
            match r {
                Err((reason, witness)) => {
                    report.fail(reason, witness);
                    return report;
                }
                Ok((i, y)) => {
                    per_piece[i] += 1;
                    if let Some(prev) = images.insert(y.clone(), idx) {
                        report.fail(
                            "images overlap",
                            format!("{y:?} is the image of {:?} and {:?}", src[prev], src[idx]),
                        );
                        return report;
                    }
                }
            }
        }
        for (i, c) in per_piece.iter().enumerate() {
            report.count(format!("piece.{i}"), *c);
        }
        report.count("images", images.len() as u64);

        let in_window = |y: &M::Point| self.window.as_ref().map_or(true, |w| w.within(y, limit));
        let stray = images
            .par_iter()
            .filter(|(y, _)| in_window(y) && !self.target.contains(y))
            .map(|(y, idx)| (y, *idx))
            .min();
        if let Some((y, idx)) = stray {
            report.fail("image outside target", format!("{y:?} = image of {:?}", src[idx]));
            return report;
        }
        let tgt = self.target.enumerate(limit);
        report.count("target", tgt.len() as u64);
        if let Some(t) = tgt.par_iter().filter(|t| !images.contains_key(*t)).min() {
            report.fail("target point not covered", format!("{t:?}"));
        }
        report
    }

    /// The point map realized by the pieces on the source at `depth`.
    pub fn induced_map(&self, depth: u32) -> Result<BTreeMap<M::Point, M::Point>> {
        self.source
            .enumerate(depth)
            .into_iter()
            .map(|x| match self.locate(&x) {
                Ok((_, y)) => Ok((x, y)),
                Err((reason, w)) => Err(Error::Precondition(format!("{reason}: {w}"))),
            })
            .collect()
    }

    /// Index of the piece holding `x`, if exactly one does.
    pub fn piece_of(&self, x: &M::Point) -> Option<usize> {
        self.locate(x).ok().map(|(i, _)| i)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "source": self.source.describe(),
            "target": self.target.describe(),
            "pieces": self.pieces.iter().map(|p| json!({
                "piece": p.set.describe(),
                "motion": p.motion.describe(),
            })).collect::<Vec<_>>(),
        });
        if let Some(w) = &self.window {
            v["window"] = json!({ "margin": w.margin, "horizon": w.horizon });
        }
        v
    }
}

/// The image `m(S)` as a view. Lazy images enumerate through the window.
pub fn image_view<M: Motion>(
    set: &SetView<M::Point>,
    motion: &M,
    window: Option<&Window<M::Point>>,
) -> SetView<M::Point> {
    match set {
        SetView::Finite(s) => SetView::finite(s.iter().map(|x| motion.apply(x))),
        SetView::Lazy(_) => {
            let inv = motion.inverse();
            let (s1, s2, m) = (set.clone(), set.clone(), motion.clone());
            let window = window.cloned();
            SetView::lazy(
                &format!("image({})", set.name()),
                json!({ "image": set.describe(), "motion": motion.describe() }),
                move |y| s1.contains(&inv.apply(y)),
                move |d| match &window {
                    None => s2.enumerate(d).iter().map(|x| m.apply(x)).collect(),
                    Some(w) => s2
                        .enumerate(d + w.margin)
                        .iter()
                        .map(|x| m.apply(x))
                        .filter(|y| w.within(y, d))
                        .collect(),
                },
            )
        }
    }
}
