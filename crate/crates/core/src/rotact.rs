//! The rotations φ (about z) and ρ (about x) with cos = 1/3, word
//! evaluation through the integer recurrences, and the exhaustive freeness
//! certificate.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactring::{Mat3E, RingScalar, Vec3E};
use crate::freegroup::{ball_size, check_cap, Generator, Letter, Word, DEFAULT_WORD_CAP};

/// The point `[a, b√2, c] / 3^k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SphereTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub k: u32,
}

impl SphereTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, k: u32) -> Self {
        SphereTriple { a: a.into(), b: b.into(), c: c.into(), k }
    }

    /// `[1, 0, 0]`, where word evaluation starts.
    pub fn unit_x() -> Self {
        SphereTriple::new(1, 0, 0, 0)
    }

    /// The default base point `(στ)^5 · [0, 0, 1]`, i.e.
    /// `[58520, −4370√2, 4899] / 3^10`.
    ///
    /// Every point of the form `[a, b√2, c] / 3^k` lies on the axis of some
    /// conjugate of φ or ρ, so no such point is stabilizer-free at every
    /// depth. This one is fixed by `(στ)^5 σ (στ)^-5`, of length 21, and by
    /// nothing shorter.
    pub fn default_base() -> Self {
        SphereTriple::new(58520, -4370, 4899, 10)
    }

    pub fn on_sphere(&self) -> bool {
        &self.a * &self.a + BigInt::from(2) * &self.b * &self.b + &self.c * &self.c == BigInt::from(9).pow(self.k)
    }

    pub fn apply_letter(&self, l: Letter) -> SphereTriple {
        let [a, b, c] = step_triple(l, &[self.a.clone(), self.b.clone(), self.c.clone()]);
        SphereTriple { a, b, c, k: self.k + 1 }
    }

    /// The same point with common factors of 3 removed from `a, b, c, 3^k`.
    pub fn canonical(&self) -> SphereTriple {
        let three = BigInt::from(3);
        let mut t = self.clone();
        while t.k > 0
            && (&t.a % &three).is_zero()
            && (&t.b % &three).is_zero()
            && (&t.c % &three).is_zero()
        {
            t.a /= &three;
            t.b /= &three;
            t.c /= &three;
            t.k -= 1;
        }
        t
    }

    /// Equality as points of space.
    pub fn same_point(&self, other: &SphereTriple) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn to_vec3(&self) -> Vec3E {
        Vec3E::new(
            RingScalar::new(self.a.clone(), 0, 0, self.k),
            RingScalar::new(0, self.b.clone(), 0, self.k),
            RingScalar::new(self.c.clone(), 0, 0, self.k),
        )
    }

    /// Parses `a,b,c,k`.
    pub fn parse(s: &str) -> Result<SphereTriple> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected a,b,c,k but got {s:?}")));
        }
        let int = |p: &str| p.parse::<BigInt>().map_err(|e| Error::Parse(format!("{p:?}: {e}")));
        let k = parts[3].parse::<u32>().map_err(|e| Error::Parse(format!("{:?}: {e}", parts[3])))?;
        Ok(SphereTriple::new(int(parts[0])?, int(parts[1])?, int(parts[2])?, k))
    }
}

impl fmt::Display for SphereTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}√2, {}]/3^{}", self.a, self.b, self.c, self.k)
    }
}

impl Serialize for SphereTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SphereTriple", 4)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("c", &self.c.to_string())?;
        st.serialize_field("k", &self.k)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SphereTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: String,
            b: String,
            c: String,
            k: u32,
        }
        let r = Raw::deserialize(d)?;
        let int = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        Ok(SphereTriple::new(int(&r.a)?, int(&r.b)?, int(&r.c)?, r.k))
    }
}

/// Integer types the recurrences run over. `i64` is used when the sphere
/// bound `|a|, |b|, |c| ≤ 3^k` guarantees no overflow.
pub trait Coord: Clone + PartialEq + Send + Sync + fmt::Debug {
    fn from_i64(v: i64) -> Self;
    /// `x·self + y·other`.
    fn lin(&self, x: i64, other: &Self, y: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn pow3(e: u32) -> Self;
}

impl Coord for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn lin(&self, x: i64, other: &Self, y: i64) -> Self {
        x * self + y * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow3(e: u32) -> Self {
        3i64.pow(e)
    }
}

impl Coord for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn lin(&self, x: i64, other: &Self, y: i64) -> Self {
        self * x + other * y
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow3(e: u32) -> Self {
        BigInt::from(3).pow(e)
    }
}

/// Largest `k` for which the `i64` path is safe: every intermediate is at
/// most `21·3^k`.
const FAST_EXPONENT: u32 = 32;

/// One letter applied to the numerators `(a, b, c)`; the exponent grows by one.
///
/// φ^{±1}: `a ∓ 4b, b ± 2a, 3c`; ρ^{±1}: `3a, b ∓ 2c, c ± 4b`.
pub fn step_triple<T: Coord>(l: Letter, t: &[T; 3]) -> [T; 3] {
    let s = if l.inverse { -1 } else { 1 };
    let [a, b, c] = t;
    match l.generator {
        Generator::Sigma => [a.lin(1, b, -4 * s), b.lin(1, a, 2 * s), c.lin(3, c, 0)],
        Generator::Tau => [a.lin(3, a, 0), b.lin(1, c, -2 * s), c.lin(1, b, 4 * s)],
    }
}

/// `w · [1,0,0]` with `k = |w|`.
pub fn evaluate(w: &Word) -> SphereTriple {
    evaluate_at(w, &SphereTriple::unit_x())
}

/// `w · base`, folding the letters right to left.
pub fn evaluate_at(w: &Word, base: &SphereTriple) -> SphereTriple {
    w.letters().iter().rev().fold(base.clone(), |t, &l| t.apply_letter(l))
}

/// The exact matrix of a letter, σ ↦ φ and τ ↦ ρ.
pub fn letter_matrix(l: Letter) -> Mat3E {
    let [row0, row1, row2] = scaled_letter(l);
    let entry = |(x, y): (i64, i64)| RingScalar::new(x, y, 0, 1);
    Mat3E::new([row0.map(entry), row1.map(entry), row2.map(entry)])
}

/// The exact matrix of a word: the product of its letters' matrices.
pub fn word_matrix(w: &Word) -> Mat3E {
    w.letters().iter().fold(Mat3E::identity(), |m, &l| m.mul(&letter_matrix(l)))
}

/// `3·M(l)` with entries `x + y√2` stored as `(x, y)`.
fn scaled_letter(l: Letter) -> [[(i64, i64); 3]; 3] {
    let s = if l.inverse { -1 } else { 1 };
    match l.generator {
        Generator::Sigma => [[(1, 0), (0, -2 * s), (0, 0)], [(0, 2 * s), (1, 0), (0, 0)], [(0, 0), (0, 0), (3, 0)]],
        Generator::Tau => [[(3, 0), (0, 0), (0, 0)], [(0, 0), (1, 0), (0, -2 * s)], [(0, 0), (0, 2 * s), (1, 0)]],
    }
}

/// `3^ℓ` times a word matrix, entries `p + q√2` as `(p, q)`.
#[derive(Clone, Debug, PartialEq)]
struct ScaledMat<T>([[(T, T); 3]; 3]);

impl<T: Coord> ScaledMat<T> {
    fn identity() -> Self {
        let z = || (T::from_i64(0), T::from_i64(0));
        let o = || (T::from_i64(1), T::from_i64(0));
        ScaledMat([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
    }

    /// `3·M(l) · self`.
    fn prepend(&self, l: Letter) -> Self {
        let k = scaled_letter(l);
        let entry = |i: usize, j: usize| -> (T, T) {
            let mut acc: Option<(T, T)> = None;
            for (m, &(x, y)) in k[i].iter().enumerate() {
                if (x, y) == (0, 0) {
                    continue;
                }
                let (p, q) = &self.0[m][j];
                let term = (p.lin(x, q, 2 * y), q.lin(x, p, y));
                acc = Some(match acc {
                    None => term,
                    Some((u, v)) => (u.add(&term.0), v.add(&term.1)),
                });
            }
            acc.expect("every row of a letter matrix is nonzero")
        };
        ScaledMat(std::array::from_fn(|i| std::array::from_fn(|j| entry(i, j))))
    }

    fn is_scaled_identity(&self, len: u32) -> bool {
        let d = T::pow3(len);
        let zero = T::from_i64(0);
        (0..3).all(|i| {
            (0..3).all(|j| {
                let (p, q) = &self.0[i][j];
                *q == zero && if i == j { *p == d } else { *p == zero }
            })
        })
    }
}

/// `b(w·[1,0,0])` is prime to 3 for a nonempty word ending in σ.
pub fn check_divisibility(w: &Word) -> Result<bool> {
    if w.last() != Some(Letter::SIGMA) {
        return Err(Error::Precondition(format!("word {w} does not end in sigma")));
    }
    let b = evaluate(w).b;
    Ok(!(b % 3i32).is_zero())
}

/// A nonidentity word ending in σ that is conjugate to `w` or to `w⁻¹`.
///
/// Cyclically reduce, then rotate so the word ends at a σ (inverting first
/// if it only has σ⁻¹); a pure τ-power `w` becomes `σ⁻¹wσ`.
pub fn phi_ending_conjugate(w: &Word) -> Result<Word> {
    if w.is_identity() {
        return Err(Error::Precondition("the identity has no sigma-ending conjugate".into()));
    }
    let l = w.letters();
    let (mut i, mut j) = (0, l.len());
    while j - i > 1 && l[i] == l[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    let core = Word::from_letters(l[i..j].iter().copied());
    let core = if core.letters().contains(&Letter::SIGMA) {
        core
    } else if core.letters().contains(&Letter::SIGMA_INV) {
        core.inverse()
    } else {
        return Ok(Word::from_letters(
            std::iter::once(Letter::SIGMA_INV).chain(core.letters().iter().copied()).chain([Letter::SIGMA]),
        ));
    };
    let pos = core.letters().iter().position(|&x| x == Letter::SIGMA).expect("contains sigma");
    Ok(core.rotate(pos + 1))
}

/// Exhaustive freeness check up to a given length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub depth: u32,
    pub words_checked: u64,
    pub violations: Vec<Word>,
    pub collisions: Vec<(Word, Word)>,
    pub pass: bool,
}

/// Reduced words of length `len`, as letter stacks (last letter of the
/// word first), each with its state.
fn level<S: Clone>(len: u32, root: &S, step: &(impl Fn(Letter, &S) -> S + Sync)) -> Vec<(Vec<Letter>, S)> {
    let mut cur = vec![(Vec::new(), root.clone())];
    for _ in 0..len {
        let mut next = Vec::with_capacity(cur.len() * 3);
        for (stack, s) in &cur {
            for l in Letter::ALL {
                if stack.last() == Some(&l.inv()) {
                    continue;
                }
                let mut st = stack.clone();
                st.push(l);
                next.push((st, step(l, s)));
            }
        }
        cur = next;
    }
    cur
}

fn dfs<S, A>(
    stack: &mut Vec<Letter>,
    state: &S,
    remaining: u32,
    step: &(impl Fn(Letter, &S) -> S + Sync),
    visit: &(impl Fn(&mut A, &[Letter], &S) + Sync),
    acc: &mut A,
) {
    visit(acc, stack, state);
    if remaining == 0 {
        return;
    }
    let first = stack.last().copied();
    for l in Letter::ALL {
        if first == Some(l.inv()) {
            continue;
        }
        let next = step(l, state);
        stack.push(l);
        dfs(stack, &next, remaining - 1, step, visit, acc);
        stack.pop();
    }
}

/// Visits every reduced word of length ≤ `depth` once, building words by
/// prepending letters so that `step(l, s)` turns the state of `w` into the
/// state of `l·w`. The visitor sees the letters in reverse word order; use
/// [`stack_word`] to recover the word. Subtrees are processed in parallel.
pub fn par_visit_ball<S, A>(
    depth: u32,
    root: S,
    step: impl Fn(Letter, &S) -> S + Sync,
    init: impl Fn() -> A + Sync + Send,
    visit: impl Fn(&mut A, &[Letter], &S) + Sync,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> A
where
    S: Clone + Send + Sync,
    A: Send,
{
    let split = depth.min(3);
    let mut acc = init();
    for len in 0..split {
        for (stack, s) in level(len, &root, &step) {
            visit(&mut acc, &stack, &s);
        }
    }
    let frontier = level(split, &root, &step);
    let rest = frontier
        .into_par_iter()
        .map(|(mut stack, s)| {
            let mut a = init();
            dfs(&mut stack, &s, depth - split, &step, &visit, &mut a);
            a
        })
        .reduce(&init, &merge);
    merge(acc, rest)
}

/// The word whose letters, last to first, are `stack`.
pub fn stack_word(stack: &[Letter]) -> Word {
    Word::from_reduced(stack.iter().rev().copied().collect())
}

#[derive(Default)]
struct FreenessAcc {
    words: u64,
    violations: Vec<Word>,
    collisions: Vec<(Word, Word)>,
}

impl FreenessAcc {
    fn merge(mut self, o: FreenessAcc) -> FreenessAcc {
        self.words += o.words;
        self.violations.extend(o.violations);
        self.collisions.extend(o.collisions);
        self
    }
}

/// [`certify_freeness_with`] with the default cap and no injected relations.
pub fn certify_freeness(depth: u32) -> Result<FreenessReport> {
    certify_freeness_with(depth, DEFAULT_WORD_CAP, &[])
}

/// Checks every nonempty reduced word of length ≤ `depth`: its σ-ending
/// conjugate has `b` prime to 3, and its exact matrix is not the identity.
///
/// `fake_identities` are words whose matrix is deliberately replaced by
/// the identity, to exercise the collision path.
pub fn certify_freeness_with(depth: u32, cap: u128, fake_identities: &[Word]) -> Result<FreenessReport> {
    if depth == 0 {
        return Err(Error::Precondition("freeness depth must be at least 1".into()));
    }
    check_cap(&format!("freeness ball of radius {depth}"), ball_size(depth) - 1, cap)?;
    let acc = if depth <= FAST_EXPONENT {
        freeness_pass::<i64>(depth, fake_identities)
    } else {
        freeness_pass::<BigInt>(depth, fake_identities)
    };
    let mut violations = acc.violations;
    let mut collisions = acc.collisions;
    violations.sort();
    collisions.sort();
    let pass = violations.is_empty() && collisions.is_empty();
    Ok(FreenessReport { depth, words_checked: acc.words, violations, collisions, pass })
}

fn freeness_pass<T: Coord>(depth: u32, fake: &[Word]) -> FreenessAcc {
    par_visit_ball(
        depth,
        ScaledMat::<T>::identity(),
        |l, m| m.prepend(l),
        FreenessAcc::default,
        |acc, stack, m| {
            if stack.is_empty() {
                return;
            }
            acc.words += 1;
            let w = stack_word(stack);
            let conj = phi_ending_conjugate(&w).expect("nonempty");
            if !check_divisibility(&conj).expect("ends in sigma") {
                acc.violations.push(w.clone());
            }
            if m.is_scaled_identity(stack.len() as u32) || fake.contains(&w) {
                acc.collisions.push((w, Word::identity()));
            }
        },
        FreenessAcc::merge,
    )
}

/// Shortest (then least) nonempty word of length ≤ `depth` fixing `base`.
pub fn find_stabilizer(base: &SphereTriple, depth: u32) -> Option<Word> {
    let fits = base.k + depth <= FAST_EXPONENT
        && [&base.a, &base.b, &base.c].iter().all(|v| v.abs() <= BigInt::from(3).pow(base.k));
    if fits {
        let t = [&base.a, &base.b, &base.c].map(|v| v.to_i64().expect("bounded by 3^k"));
        stabilizer_pass(depth, t)
    } else {
        stabilizer_pass(depth, [base.a.clone(), base.b.clone(), base.c.clone()])
    }
}

fn stabilizer_pass<T: Coord>(depth: u32, base: [T; 3]) -> Option<Word> {
    let target = base.clone();
    par_visit_ball(
        depth,
        base,
        |l, t| step_triple(l, t),
        || None,
        |acc: &mut Option<Word>, stack, t| {
            if stack.is_empty() {
                return;
            }
            let scale = T::pow3(stack.len() as u32);
            let fixed = (0..3).all(|i| t[i] == target[i].mul(&scale));
            if fixed {
                let w = stack_word(stack);
                if acc.as_ref().map_or(true, |o| w < *o) {
                    *acc = Some(w);
                }
            }
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
    )
}

/// True iff no nonempty reduced word of length ≤ `depth` fixes `base`.
pub fn stabilizer_certify(base: &SphereTriple, depth: u32) -> bool {
    find_stabilizer(base, depth).is_none()
}

/// Checks `a² + 2b² + c² = 9^k` for `w·[1,0,0]` over every word of length
/// ≤ `depth`; returns the number of words and the first failure.
pub fn check_on_sphere(depth: u32) -> (u64, Option<Word>) {
    par_visit_ball(
        depth,
        [BigInt::one(), BigInt::zero(), BigInt::zero()],
        |l, t| step_triple(l, t),
        || (0u64, None),
        |acc: &mut (u64, Option<Word>), stack, t| {
            acc.0 += 1;
            let s = SphereTriple { a: t[0].clone(), b: t[1].clone(), c: t[2].clone(), k: stack.len() as u32 };
            if !s.on_sphere() && acc.1.is_none() {
                acc.1 = Some(stack_word(stack));
            }
        },
        |a, b| (a.0 + b.0, a.1.or(b.1)),
    )
}
