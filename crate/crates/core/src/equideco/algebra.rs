//! Certificate combinators: identity, inverse, restriction, composition,
//! the two-piece absorption schema, transfer of paradoxes, the sandwich
//! lemma and the partition form of a paradox.

use serde_json::json;

use super::{bsb_combine, image_view, EquidecompositionCert, Motion, Piece, SetView, Window};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

type Cert<M> = EquidecompositionCert<M>;

/// `S ∼ S` by a single identity piece.
pub fn identity_cert<M: Motion>(set: SetView<M::Point>, window: Option<Window<M::Point>>) -> Cert<M> {
    Cert::new(set.clone(), set.clone(), vec![Piece::new(set, M::identity())], window.map(|w| w.with_margin(0)))
}

/// `target ∼ source`, using the moved pieces with inverse motions.
pub fn inverse<M: Motion>(c: &Cert<M>) -> Cert<M> {
    let pieces = c
        .pieces
        .iter()
        .map(|p| Piece::new(image_view(&p.set, &p.motion, c.window.as_ref()), p.motion.inverse()))
        .collect();
    Cert::new(c.target.clone(), c.source.clone(), pieces, c.window.clone())
}

/// The certificate `S ∼ c(S)` for a subset `S` of the source.
pub fn restrict<M: Motion>(c: &Cert<M>, s: &SetView<M::Point>, depth: u32) -> Result<Cert<M>> {
    if let Some(x) = s.first_outside(&c.source, depth) {
        return Err(Error::Precondition(format!("restriction leaves the source at {x:?}")));
    }
    let mut pieces = Vec::new();
    for p in &c.pieces {
        let set = p.set.intersection(s);
        if set.as_finite().is_some_and(|f| f.is_empty()) {
            continue;
        }
        pieces.push(Piece::new(set, p.motion.clone()));
    }
    let target = pieces
        .iter()
        .map(|p| image_view(&p.set, &p.motion, c.window.as_ref()))
        .reduce(|a, b| a.union(&b))
        .unwrap_or_else(SetView::empty);
    Ok(Cert::new(s.clone(), target, pieces, c.window.clone()))
}

/// `A ∼ C` from `A ∼ B` and `B ∼ C`.
///
/// Pieces are `A_k ∩ m_k⁻¹(B_j)` with motion `n_j ∘ m_k`; finite
/// intersections that come out empty are dropped.
pub fn compose<M: Motion>(c1: &Cert<M>, c2: &Cert<M>, depth: u32) -> Result<Cert<M>> {
    if let Some(x) = c1.target.differs_at(&c2.source, depth) {
        return Err(Error::Interface(format!("{x:?} is in exactly one of the middle sets")));
    }
    let mut pieces = Vec::new();
    for a in &c1.pieces {
        for b in &c2.pieces {
            let motion = b.motion.after(&a.motion);
            let set = match &a.set {
                SetView::Finite(s) => {
                    let part: Vec<_> = s.iter().filter(|x| b.set.contains(&a.motion.apply(x))).cloned().collect();
                    if part.is_empty() {
                        continue;
                    }
                    SetView::finite(part)
                }
                SetView::Lazy(_) => {
                    let (s1, s2, m1, m2, t1, t2) =
                        (a.set.clone(), a.set.clone(), a.motion.clone(), a.motion.clone(), b.set.clone(), b.set.clone());
                    SetView::lazy(
                        "pullback",
                        json!({ "piece": a.set.describe(), "motion": a.motion.describe(), "into": b.set.describe() }),
                        move |x| s1.contains(x) && t1.contains(&m1.apply(x)),
                        move |d| s2.enumerate(d).into_iter().filter(|x| t2.contains(&m2.apply(x))).collect(),
                    )
                }
            };
            pieces.push(Piece::new(set, motion));
        }
    }
    Ok(Cert::new(
        c1.source.clone(),
        c2.target.clone(),
        pieces,
        Window::chain(c1.window.as_ref(), c2.window.as_ref()),
    ))
}

/// From `P ⊆ Q ⊆ A` and `g(Q) = Q ∖ P`, the two-piece certificate
/// `A ∼ A ∖ P` with pieces `(Q, g)` and `(A ∖ Q, id)`.
pub fn absorb<M: Motion>(
    p: &SetView<M::Point>,
    q: &SetView<M::Point>,
    g: &M,
    a: &SetView<M::Point>,
    window: Option<Window<M::Point>>,
    depth: u32,
) -> Result<Cert<M>> {
    if let Some(x) = p.first_outside(q, depth) {
        return Err(Error::Precondition(format!("P is not inside Q: {x:?}")));
    }
    if let Some(x) = q.first_outside(a, depth) {
        return Err(Error::Precondition(format!("Q is not inside A: {x:?}")));
    }
    let shifted = q.difference(p);
    let shift = Cert::new(q.clone(), shifted, vec![Piece::new(q.clone(), g.clone())], window.clone());
    let r = shift.verify(depth);
    if !r.pass {
        return Err(Error::Precondition(format!("g(Q) = Q minus P fails: {}", r.summary())));
    }
    Ok(Cert::new(
        a.clone(),
        a.difference(p),
        vec![Piece::new(q.clone(), g.clone()), Piece::new(a.difference(q), M::identity())],
        window,
    ))
}

/// Disjoint `first, second ⊆ whole`, each equidecomposable with `whole`.
#[derive(Clone, Debug)]
pub struct Paradox<M: Motion> {
    pub whole: SetView<M::Point>,
    pub first: SetView<M::Point>,
    pub second: SetView<M::Point>,
    pub first_cert: Cert<M>,
    pub second_cert: Cert<M>,
}

impl<M: Motion> Paradox<M> {
    pub fn verify(&self, depth: u32) -> VerificationReport {
        let mut r = VerificationReport::new("paradox", Some(depth));
        r.absorb("first", &self.first_cert.verify(depth));
        r.absorb("second", &self.second_cert.verify(depth));
        for (name, part) in [("first", &self.first), ("second", &self.second)] {
            if let Some(x) = part.first_outside(&self.whole, depth) {
                r.fail(format!("{name} part leaves the whole set"), format!("{x:?}"));
            }
        }
        if let Some(x) = self.first.enumerate(depth).into_iter().find(|x| self.second.contains(x)) {
            r.fail("parts intersect", format!("{x:?}"));
        }
        r
    }
}

/// Moves a paradox of `A` along `A ∼ A′`: `B′` is the image of `B` under the
/// pieces of the move and `B′ ∼ B ∼ A ∼ A′`.
pub fn transfer<M: Motion>(par: &Paradox<M>, c_move: &Cert<M>, depth: u32) -> Result<Paradox<M>> {
    let r = par.verify(depth);
    if !r.pass {
        return Err(Error::verification(r));
    }
    let r = c_move.verify(depth);
    if !r.pass {
        return Err(Error::verification(r));
    }
    if let Some(x) = c_move.source.differs_at(&par.whole, depth) {
        return Err(Error::Interface(format!("move does not start at the paradoxical set: {x:?}")));
    }
    let trivial = c_move.pieces.iter().all(|p| p.motion == M::identity())
        && c_move.target.differs_at(&c_move.source, depth).is_none();
    if trivial {
        return Ok(par.clone());
    }
    let carry = |part: &SetView<M::Point>, cert: &Cert<M>| -> Result<(SetView<M::Point>, Cert<M>)> {
        let moved = restrict(c_move, part, depth)?;
        let back = inverse(&moved);
        let c = compose(&compose(&back, cert, depth)?, c_move, depth)?;
        Ok((moved.target, c))
    };
    let (first, first_cert) = carry(&par.first, &par.first_cert)?;
    let (second, second_cert) = carry(&par.second, &par.second_cert)?;
    Ok(Paradox { whole: c_move.target.clone(), first, second, first_cert, second_cert })
}

/// `Q ∼ A` from `C ⊆ Q ⊆ A` and `C ∼ A`, through Schröder–Bernstein on the
/// inclusion `Q ⪯ A` and `A ∼ C ⊆ Q`.
pub fn sandwich<M: Motion>(
    c_set: &SetView<M::Point>,
    q: &SetView<M::Point>,
    a: &SetView<M::Point>,
    c: &Cert<M>,
    depth: u32,
) -> Result<Cert<M>> {
    if let Some(x) = c_set.first_outside(q, depth) {
        return Err(Error::Precondition(format!("C is not inside Q: {x:?}")));
    }
    if let Some(x) = q.first_outside(a, depth) {
        return Err(Error::Precondition(format!("Q is not inside A: {x:?}")));
    }
    let r = c.verify(depth);
    if !r.pass {
        return Err(Error::verification(r));
    }
    if q.differs_at(a, depth).is_none() {
        let mut id = identity_cert(q.clone(), c.window.clone());
        id.target = a.clone();
        return Ok(id);
    }
    if q.differs_at(c_set, depth).is_none() {
        return Ok(c.clone());
    }
    let into = identity_cert(q.clone(), c.window.clone());
    let back = inverse(c);
    Ok(bsb_combine(&into, &back, depth)?.cert)
}

/// Enlarges the second part of a paradox to the complement of the first,
/// so the two parts partition the whole set.
pub fn paradox_partition<M: Motion>(par: &Paradox<M>, depth: u32) -> Result<Paradox<M>> {
    if let Some(x) = par.first.enumerate(depth).into_iter().find(|x| par.second.contains(x)) {
        return Err(Error::Precondition(format!("paradox parts intersect at {x:?}")));
    }
    let r = par.verify(depth);
    if !r.pass {
        return Err(Error::verification(r));
    }
    let union = par.first.union(&par.second);
    if union.differs_at(&par.whole, depth).is_none() {
        return Ok(par.clone());
    }
    let rest = par.whole.difference(&par.first);
    let second_cert = sandwich(&par.second, &rest, &par.whole, &par.second_cert, depth)?;
    Ok(Paradox {
        whole: par.whole.clone(),
        first: par.first.clone(),
        second: rest,
        first_cert: par.first_cert.clone(),
        second_cert,
    })
}
