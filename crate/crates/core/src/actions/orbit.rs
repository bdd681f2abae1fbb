use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use crate::equideco::{EquidecompositionCert, Motion, Piece, SetView, Window};
use crate::error::{Error, Result};
use crate::exactring::{IsometryE, Vec3E};
use crate::freegroup::{enumerate_ball, Word, DEFAULT_WORD_CAP};
use crate::rotact::{evaluate_at, find_stabilizer, word_matrix, SphereTriple};

/// The orbit ball `{w·x : |w| ≤ depth}` of a base point whose stabilizer
/// is certified trivial up to length `2·depth`, so that `w ↦ w·x` is
/// injective on the ball.
#[derive(Debug)]
pub struct OrbitIndex {
    base: SphereTriple,
    depth: u32,
    words: Vec<Word>,
    triples: Vec<SphereTriple>,
    points: Vec<Vec3E>,
    by_point: HashMap<Vec3E, usize>,
}

impl OrbitIndex {
    pub fn build(base: &SphereTriple, depth: u32) -> Result<Arc<OrbitIndex>> {
        if !base.on_sphere() {
            return Err(Error::Precondition(format!("base {base} is not on the unit sphere")));
        }
        if let Some(w) = find_stabilizer(base, 2 * depth) {
            return Err(Error::Stabilizer { word: w.to_string() });
        }
        let words = enumerate_ball(depth, DEFAULT_WORD_CAP)?;
        let triples: Vec<SphereTriple> = words.iter().map(|w| evaluate_at(w, base)).collect();
        let points: Vec<Vec3E> = triples.iter().map(SphereTriple::to_vec3).collect();
        let mut by_point = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = by_point.insert(p.clone(), i) {
                let rel = words[j].inverse().mul(&words[i]);
                return Err(Error::Stabilizer { word: rel.to_string() });
            }
        }
        Ok(Arc::new(OrbitIndex { base: base.clone(), depth, words, triples, points, by_point }))
    }

    pub fn base(&self) -> &SphereTriple {
        &self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in length-lexicographic order with their points.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &SphereTriple, &Vec3E)> {
        self.words.iter().zip(&self.triples).zip(&self.points).map(|((w, t), p)| (w, t, p))
    }

    pub fn word_of(&self, p: &Vec3E) -> Option<&Word> {
        self.by_point.get(p).map(|&i| &self.words[i])
    }

    pub fn grade(&self, p: &Vec3E) -> Option<u32> {
        self.word_of(p).map(|w| w.len() as u32)
    }

    pub fn point_of(&self, w: &Word) -> Vec3E {
        evaluate_at(w, &self.base).to_vec3()
    }

    /// `{w·x : w ∈ s}`, known up to the index depth.
    pub fn star(self: &Arc<Self>, s: &SetView<Word>) -> SetView<Vec3E> {
        match s {
            SetView::Finite(words) => SetView::finite(words.iter().map(|w| self.point_of(w))),
            SetView::Lazy(_) => {
                let (i1, i2) = (self.clone(), self.clone());
                let (s1, s2) = (s.clone(), s.clone());
                SetView::lazy(
                    &format!("orbit({})", s.name()),
                    json!({ "words": s.describe(), "base": self.base, "depth": self.depth }),
                    move |p| i1.word_of(p).is_some_and(|w| s1.contains(w)),
                    move |d| s2.enumerate(d.min(i2.depth)).iter().map(|w| i2.point_of(w)).collect(),
                )
            }
        }
    }

    pub fn window(self: &Arc<Self>, margin: u32) -> Window<Vec3E> {
        let idx = self.clone();
        Window::new(Arc::new(move |p: &Vec3E| idx.grade(p)), margin).with_horizon(self.depth)
    }

    /// A word certificate carried to the orbit: pieces become their star
    /// images and left multiplication by `w` becomes the rotation of `w`.
    pub fn carry(self: &Arc<Self>, c: &EquidecompositionCert<Word>) -> Result<EquidecompositionCert<IsometryE>> {
        let pieces = c
            .pieces
            .iter()
            .map(|p| Ok(Piece::new(self.star(&p.set), IsometryE::rotation(word_matrix(&p.motion))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquidecompositionCert::new(
            self.star(&c.source),
            self.star(&c.target),
            pieces,
            Some(self.window(c.margin())),
        ))
    }
}

/// The free-group paradox moved onto the orbit of `base` through the star
/// transform, valid up to `depth`.
pub fn transfer_paradox(
    certs: &(EquidecompositionCert<Word>, EquidecompositionCert<Word>),
    base: &SphereTriple,
    depth: u32,
) -> Result<(EquidecompositionCert<IsometryE>, EquidecompositionCert<IsometryE>)> {
    let index = OrbitIndex::build(base, depth)?;
    Ok((index.carry(&certs.0)?, index.carry(&certs.1)?))
}

impl Motion for IsometryE {
    type Point = Vec3E;

    fn identity() -> Self {
        IsometryE::identity()
    }

    fn apply(&self, p: &Vec3E) -> Vec3E {
        IsometryE::apply(self, p)
    }

    fn after(&self, first: &Self) -> Self {
        self.compose(first)
    }

    fn inverse(&self) -> Self {
        self.invert()
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or_default()
    }
}
