//! Absorbing a finite set by a rotation: find a rotation whose powers move
//! the set off itself, build the truncated absorber `Q_N = ∪ ωⁿ(P)`, and
//! the origin-absorbing isometry of the ball.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::equideco::{absorb, identity_cert, EquidecompositionCert, Motion, SetView, Window};
use crate::error::{Error, Result};
use crate::exactring::{IsometryE, Mat3E, RingScalar, Vec3E};
use crate::report::VerificationReport;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn parse_rat(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// A point of the unit circle with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CirclePoint {
    x: BigRational,
    y: BigRational,
}

impl CirclePoint {
    pub fn new(x: BigRational, y: BigRational) -> Result<Self> {
        if &x * &x + &y * &y != BigRational::one() {
            return Err(Error::Precondition(format!("({x}, {y}) is not on the unit circle")));
        }
        Ok(CirclePoint { x, y })
    }

    pub fn parse(x: &str, y: &str) -> Result<Self> {
        CirclePoint::new(parse_rat(x)?, parse_rat(y)?)
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        CirclePoint::parse(&x, &y).map_err(serde::de::Error::custom)
    }
}

/// The rotation `[[c, −s], [s, c]]` with rational `c² + s² = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlaneRotation {
    c: BigRational,
    s: BigRational,
}

impl PlaneRotation {
    pub fn new(c: BigRational, s: BigRational) -> Result<Self> {
        if &c * &c + &s * &s != BigRational::one() {
            return Err(Error::Precondition(format!("({c}, {s}) is not a rotation")));
        }
        Ok(PlaneRotation { c, s })
    }

    pub fn cos(&self) -> &BigRational {
        &self.c
    }

    pub fn sin(&self) -> &BigRational {
        &self.s
    }

    pub fn apply(&self, p: &CirclePoint) -> CirclePoint {
        CirclePoint {
            x: &self.c * &p.x - &self.s * &p.y,
            y: &self.s * &p.x + &self.c * &p.y,
        }
    }

    pub fn compose(&self, o: &PlaneRotation) -> PlaneRotation {
        PlaneRotation {
            c: &self.c * &o.c - &self.s * &o.s,
            s: &self.s * &o.c + &self.c * &o.s,
        }
    }

    pub fn pow(&self, mut e: u64) -> PlaneRotation {
        let mut acc = <PlaneRotation as Motion>::identity();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for PlaneRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c, self.s)
    }
}

impl Motion for PlaneRotation {
    type Point = CirclePoint;

    fn identity() -> Self {
        PlaneRotation { c: BigRational::one(), s: BigRational::zero() }
    }

    fn apply(&self, p: &CirclePoint) -> CirclePoint {
        PlaneRotation::apply(self, p)
    }

    fn after(&self, first: &Self) -> Self {
        self.compose(first)
    }

    fn inverse(&self) -> Self {
        PlaneRotation { c: self.c.clone(), s: -&self.s }
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "cos": self.c.to_string(), "sin": self.s.to_string() })
    }
}

/// Rotations from primitive Pythagorean triples `(a, b, h)` with `a < b`,
/// as `(a/h, b/h)`, ordered by hypotenuse then by `a`.
pub fn pythagorean_pool(count: usize) -> Vec<PlaneRotation> {
    let mut triples: Vec<(i64, i64, i64)> = Vec::new();
    let mut bound = 8;
    while triples.len() < count {
        triples.clear();
        for m in 2..bound {
            for n in 1..m {
                if (m - n) % 2 == 1 && m.gcd(&n) == 1 {
                    let (a, b) = (m * m - n * n, 2 * m * n);
                    triples.push((a.min(b), a.max(b), m * m + n * n));
                }
            }
        }
        // hypotenuses up to bound² are complete only below (bound - 1)² + 1
        let complete = (bound - 1) * (bound - 1);
        triples.retain(|t| t.2 <= complete);
        triples.sort_by_key(|t| (t.2, t.0));
        bound *= 2;
    }
    triples.truncate(count);
    triples.into_iter().map(|(a, b, h)| PlaneRotation { c: rat(a, h), s: rat(b, h) }).collect()
}

const MODULUS: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn residue(r: &BigRational) -> Option<u64> {
    let m = BigInt::from(MODULUS);
    let den = r.denom().mod_floor(&m).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = r.numer().mod_floor(&m).to_u64()?;
    let inv = BigInt::from(den).modpow(&BigInt::from(MODULUS - 2), &m).to_u64()?;
    Some(mulmod(num, inv))
}

/// Outcome of a candidate that failed: the first power that hits `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub candidate: String,
    pub power: u64,
}

/// The first `k ∈ 1..=n` with `τ^k(P) ∩ P ≠ ∅`, if any.
///
/// `τ^k p = q` iff `z^k = q·p̄` for the unit complex numbers involved. Powers
/// are tracked modulo the prime `2^61 − 1` and every residue match is
/// confirmed or refuted by an exact computation.
pub fn first_collision(tau: &PlaneRotation, points: &[CirclePoint], n: u64) -> Option<u64> {
    if points.is_empty() {
        return None;
    }
    let mut ratios: HashMap<(u64, u64), Vec<(BigRational, BigRational)>> = HashMap::new();
    let mut unreduced: Vec<(BigRational, BigRational)> = Vec::new();
    for p in points {
        for q in points {
            let re = &q.x * &p.x + &q.y * &p.y;
            let im = &q.y * &p.x - &q.x * &p.y;
            match (residue(&re), residue(&im)) {
                (Some(a), Some(b)) => ratios.entry((a, b)).or_default().push((re, im)),
                _ => unreduced.push((re, im)),
            }
        }
    }
    let hits = |k: u64, targets: &[(BigRational, BigRational)]| {
        let t = tau.pow(k);
        targets.iter().any(|(re, im)| t.c == *re && t.s == *im)
    };
    let (zc, zs) = match (residue(&tau.c), residue(&tau.s)) {
        (Some(a), Some(b)) => (a, b),
        _ => return (1..=n).find(|&k| hits(k, &ratios.values().flatten().cloned().chain(unreduced.clone()).collect::<Vec<_>>())),
    };
    let (mut x, mut y) = (1u64, 0u64);
    for k in 1..=n {
        let nx = (mulmod(x, zc) + MODULUS - mulmod(y, zs)) % MODULUS;
        let ny = (mulmod(x, zs) + mulmod(y, zc)) % MODULUS;
        (x, y) = (nx, ny);
        if let Some(targets) = ratios.get(&(x, y)) {
            if hits(k, targets) {
                return Some(k);
            }
        }
        if !unreduced.is_empty() && hits(k, &unreduced) {
            return Some(k);
        }
    }
    None
}

/// The first rotation in the pool with `τⁿ(P) ∩ P = ∅` for `1 ≤ n ≤ horizon`,
/// together with the rejected candidates before it.
pub fn find_avoiding_rotation(
    points: &[CirclePoint],
    horizon: u64,
    pool: usize,
) -> Result<(PlaneRotation, Vec<Rejection>)> {
    let mut rejected = Vec::new();
    for tau in pythagorean_pool(pool) {
        match first_collision(&tau, points, horizon) {
            None => return Ok((tau, rejected)),
            Some(k) => rejected.push(Rejection { candidate: tau.to_string(), power: k }),
        }
    }
    let detail = rejected.iter().map(|r| format!("{} at n={}", r.candidate, r.power)).collect::<Vec<_>>().join("; ");
    Err(Error::AvoidanceExhausted { tried: rejected.len(), detail })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn unit(self) -> Vec3E {
        match self {
            Axis::X => Vec3E::from_ints(1, 0, 0),
            Axis::Y => Vec3E::from_ints(0, 1, 0),
            Axis::Z => Vec3E::from_ints(0, 0, 1),
        }
    }

    /// The rotation about this axis with cosine `c` and sine `s`.
    pub fn rotation(self, c: &RingScalar, s: &RingScalar) -> Mat3E {
        let (o, z) = (RingScalar::one(), RingScalar::zero());
        let ms = -s;
        Mat3E::new(match self {
            Axis::X => [[o, z.clone(), z.clone()], [z.clone(), c.clone(), ms], [z, s.clone(), c.clone()]],
            Axis::Y => [[c.clone(), z.clone(), s.clone()], [z.clone(), o, z.clone()], [ms, z, c.clone()]],
            Axis::Z => [[c.clone(), ms, z.clone()], [s.clone(), c.clone(), z.clone()], [z.clone(), z, o]],
        })
    }
}

/// Candidate angles for sphere rotations: multiples `m·θ` with `cos θ = 1/3`,
/// `sin θ = 2√2/3`, so every matrix entry stays in the exact ring.
pub fn ring_angle_pool(count: usize) -> Vec<(RingScalar, RingScalar)> {
    let c = RingScalar::new(1, 0, 0, 1);
    let s = RingScalar::new(0, 2, 0, 1);
    let mut out = Vec::with_capacity(count);
    let (mut cm, mut sm) = (c.clone(), s.clone());
    for _ in 0..count {
        out.push((cm.clone(), sm.clone()));
        let next_c = &(&cm * &c) - &(&sm * &s);
        let next_s = &(&sm * &c) + &(&cm * &s);
        (cm, sm) = (next_c, next_s);
    }
    out
}

/// A rotation of the sphere about a coordinate axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxisRotation {
    pub axis: Axis,
    /// Which multiple of the base angle.
    pub multiple: usize,
    pub matrix: Mat3E,
}

fn first_sphere_collision(m: &Mat3E, points: &[Vec3E], horizon: u64) -> Option<u64> {
    let set: HashSet<&Vec3E> = points.iter().collect();
    let mut cur: Vec<Vec3E> = points.to_vec();
    for k in 1..=horizon {
        cur = cur.iter().map(|p| m.apply(p)).collect();
        if cur.iter().any(|p| set.contains(p)) {
            return Some(k);
        }
    }
    None
}

/// An axis among x, y, z whose poles avoid `P`, and a rotation about it
/// with `ωⁿ(P) ∩ P = ∅` for `1 ≤ n ≤ horizon`, checked by exact iteration.
pub fn find_avoiding_axis_rotation(points: &[Vec3E], horizon: u64, pool: usize) -> Result<AxisRotation> {
    let set: HashSet<&Vec3E> = points.iter().collect();
    let axis = Axis::ALL
        .into_iter()
        .find(|a| !set.contains(&a.unit()) && !set.contains(&a.unit().neg()))
        .ok_or(Error::AxisSelection)?;
    let mut rejected = Vec::new();
    for (m, (c, s)) in ring_angle_pool(pool).into_iter().enumerate() {
        let matrix = axis.rotation(&c, &s);
        match first_sphere_collision(&matrix, points, horizon) {
            None => return Ok(AxisRotation { axis, multiple: m + 1, matrix }),
            Some(k) => rejected.push(format!("{}θ at n={k}", m + 1)),
        }
    }
    Err(Error::AvoidanceExhausted { tried: rejected.len(), detail: rejected.join("; ") })
}

/// `Q_N = P ∪ ω(P) ∪ … ∪ ω^N(P)`, kept as its disjoint generations.
#[derive(Clone, Debug)]
pub struct AbsorberTrunc<M: Motion> {
    pub motion: M,
    generations: Vec<BTreeSet<M::Point>>,
    generation_of: BTreeMap<M::Point, u32>,
}

/// Materializes the generations `ωⁿ(P)`, `n ≤ horizon`, failing if two of
/// them meet.
pub fn build_absorber<M: Motion>(p: &BTreeSet<M::Point>, motion: M, horizon: u32) -> Result<AbsorberTrunc<M>> {
    let mut generations = vec![p.clone()];
    let mut generation_of: BTreeMap<M::Point, u32> = p.iter().map(|x| (x.clone(), 0)).collect();
    for n in 1..=horizon {
        let next: BTreeSet<M::Point> = generations[n as usize - 1].iter().map(|x| motion.apply(x)).collect();
        for x in &next {
            if let Some(prev) = generation_of.insert(x.clone(), n) {
                return Err(Error::Precondition(format!("avoidance fails: {x:?} is in generations {prev} and {n}")));
            }
        }
        generations.push(next);
    }
    Ok(AbsorberTrunc { motion, generations, generation_of })
}

impl<M: Motion> AbsorberTrunc<M> {
    pub fn horizon(&self) -> u32 {
        self.generations.len() as u32 - 1
    }

    pub fn base(&self) -> &BTreeSet<M::Point> {
        &self.generations[0]
    }

    pub fn generation(&self, n: u32) -> &BTreeSet<M::Point> {
        &self.generations[n as usize]
    }

    pub fn generation_of(&self, x: &M::Point) -> Option<u32> {
        self.generation_of.get(x).copied()
    }

    /// `Q_n` for `n ≤ horizon`.
    pub fn truncation(&self, n: u32) -> BTreeSet<M::Point> {
        self.generations[..=n as usize].iter().flatten().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.generation_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generation_of.is_empty()
    }

    /// `ω(Q_{N−1}) = Q_N ∖ P`, compared as sets.
    pub fn shift_identity(&self) -> VerificationReport {
        let n = self.horizon();
        let mut r = VerificationReport::new("absorber-shift", Some(n));
        r.count("base", self.base().len() as u64);
        r.count("absorber", self.len() as u64);
        if n == 0 {
            return r;
        }
        let moved: BTreeSet<M::Point> = self.truncation(n - 1).iter().map(|x| self.motion.apply(x)).collect();
        let expected: BTreeSet<M::Point> = self.truncation(n).into_iter().filter(|x| !self.base().contains(x)).collect();
        if let Some(x) = moved.symmetric_difference(&expected).next() {
            r.fail("shift identity fails", format!("{x:?}"));
        }
        r
    }

    /// Grades by generation. `ω^{N+1}(P)` gets grade `N + 1`; anything
    /// else outside `Q_N` has grade 0.
    pub fn window(self: &Arc<Self>) -> Window<M::Point> {
        let a = self.clone();
        let back = self.motion.inverse();
        let top = self.horizon();
        Window::new(
            Arc::new(move |x: &M::Point| {
                Some(match a.generation_of(x) {
                    Some(n) => n,
                    None if a.generation_of(&back.apply(x)) == Some(top) => top + 1,
                    None => 0,
                })
            }),
            1,
        )
        .with_horizon(top)
    }
}

fn on_unit_sphere(p: &Vec3E) -> bool {
    p.norm_sq().is_one()
}

/// Points of the sphere used to probe the complement of an absorber.
fn sphere_probes() -> Vec<Vec3E> {
    let mut out = Vec::new();
    for a in Axis::ALL {
        out.push(a.unit());
        out.push(a.unit().neg());
    }
    let t = RingScalar::new(1, 0, 0, 1);
    let u = RingScalar::new(0, 2, 0, 1);
    out.push(Vec3E::new(t.clone(), u.clone(), RingScalar::zero()));
    out.push(Vec3E::new(RingScalar::zero(), u, t));
    out
}

/// The truncated certificate `S² ∼ S² ∖ P` with pieces `(Q_N, ω)` and the
/// rest of the sphere fixed.
pub fn sphere_minus_countable_cert(points: &[Vec3E], horizon: u32, pool: usize) -> Result<EquidecompositionCert<IsometryE>> {
    if let Some(p) = points.iter().find(|p| !on_unit_sphere(p)) {
        return Err(Error::Precondition(format!("{p} is not on the unit sphere")));
    }
    let base: BTreeSet<Vec3E> = points.iter().cloned().collect();
    if base.is_empty() {
        let sphere = sphere_view(None);
        return Ok(identity_cert(sphere, None));
    }
    let rot = find_avoiding_axis_rotation(points, horizon as u64, pool)?;
    let omega = IsometryE::rotation(rot.matrix)?;
    let absorber = Arc::new(build_absorber(&base, omega.clone(), horizon)?);
    let sphere = sphere_view(Some(absorber.clone()));
    let q = absorber_view(&absorber);
    absorb(&SetView::Finite(base), &q, &omega, &sphere, Some(absorber.window()), horizon)
}

/// `Q_N` as a view enumerating `Q_d` at depth `d`.
pub fn absorber_view<M: Motion>(a: &Arc<AbsorberTrunc<M>>) -> SetView<M::Point> {
    let (a1, a2) = (a.clone(), a.clone());
    SetView::lazy(
        "absorber",
        json!({ "horizon": a.horizon(), "base": a.base() }),
        move |x| a1.generation_of(x).is_some(),
        move |d| a2.truncation(d.min(a2.horizon())),
    )
}

/// The unit sphere, enumerated as `Q_d` plus fixed probe points.
fn sphere_view(absorber: Option<Arc<AbsorberTrunc<IsometryE>>>) -> SetView<Vec3E> {
    let probes: Vec<Vec3E> = sphere_probes();
    SetView::lazy(
        "sphere",
        json!({ "probes": probes }),
        on_unit_sphere,
        move |d| {
            let mut s: BTreeSet<Vec3E> = match &absorber {
                Some(a) => a.truncation(d.min(a.horizon())),
                None => BTreeSet::new(),
            };
            for p in &probes {
                if absorber.as_ref().map_or(true, |a| a.generation_of(p).is_none()) {
                    s.insert(p.clone());
                }
            }
            s
        },
    )
}

/// The isometry `r(x) = ρ(x + ½u) − ½u` and the truncated set
/// `N = ½Q − ½u`, with `0 ∈ N` coming from `u ∈ P`.
#[derive(Clone, Debug)]
pub struct OriginAbsorber {
    pub u: Vec3E,
    pub rho: Mat3E,
    pub r: IsometryE,
    /// `N` rebuilt as `{rⁿ(0)}`.
    pub trunc: Arc<AbsorberTrunc<IsometryE>>,
    scaled: Vec<BTreeSet<Vec3E>>,
}

/// Builds the origin absorber from a sphere absorber with `P = {u}`.
pub fn ball_absorb_origin(q: &AbsorberTrunc<IsometryE>) -> Result<OriginAbsorber> {
    let base = q.base();
    if base.len() != 1 {
        return Err(Error::Precondition("origin absorption needs P = {u}".into()));
    }
    let u = base.iter().next().expect("one point").clone();
    if !on_unit_sphere(&u) || !q.motion.offset().is_zero() {
        return Err(Error::Precondition("u must be a unit vector and the motion a rotation".into()));
    }
    let r0 = q.shift_identity();
    if !r0.pass {
        return Err(Error::verification(r0));
    }
    let rho = q.motion.linear().clone();
    let half = RingScalar::half();
    let shift = u.scale(&half);
    let r = IsometryE::conjugate_by_translation(&rho, &shift)?;
    let scaled = (0..=q.horizon())
        .map(|n| q.generation(n).iter().map(|x| x.scale(&half).sub(&shift)).collect())
        .collect();
    let trunc = Arc::new(build_absorber(&BTreeSet::from([Vec3E::zero()]), r.clone(), q.horizon())?);
    Ok(OriginAbsorber { u, rho, r, trunc, scaled })
}

impl OriginAbsorber {
    pub fn horizon(&self) -> u32 {
        self.trunc.horizon()
    }

    /// `N_n = ½Q_n − ½u`.
    pub fn truncation(&self, n: u32) -> BTreeSet<Vec3E> {
        self.scaled[..=n as usize].iter().flatten().cloned().collect()
    }

    /// `r(N_{N−1}) = N_N ∖ {0}`, `0 ∈ N`, `N = {rⁿ(0)}`, and `r` equals the
    /// composite of translations and `ρ`.
    pub fn verify(&self) -> VerificationReport {
        let n = self.horizon();
        let mut rep = VerificationReport::new("origin-absorption", Some(n));
        let all = self.truncation(n);
        rep.count("points", all.len() as u64);
        if !all.contains(&Vec3E::zero()) {
            rep.fail("origin is not in N", "0");
        }
        let shift = self.u.scale(&RingScalar::half());
        let composite = IsometryE::translation(shift.neg())
            .compose(&IsometryE::rotation(self.rho.clone()).expect("rotation"))
            .compose(&IsometryE::translation(shift));
        if composite != self.r {
            rep.fail("r differs from its translation-rotation composite", format!("{:?}", self.r));
        }
        if n > 0 {
            let moved: BTreeSet<Vec3E> = self.truncation(n - 1).iter().map(|x| self.r.apply(x)).collect();
            let mut expected = all.clone();
            expected.remove(&Vec3E::zero());
            if let Some(x) = moved.symmetric_difference(&expected).next() {
                rep.fail("r(N) = N minus the origin fails", x);
            }
        }
        for k in 0..=n {
            if self.trunc.generation(k) != &self.scaled[k as usize] {
                rep.fail("orbit of the origin differs from the scaled absorber", k);
            }
        }
        rep
    }

    /// The truncated certificate `B³ ∼ B³ ∖ {0}`: `r` on `N`, identity
    /// elsewhere.
    pub fn ball_cert(&self) -> Result<EquidecompositionCert<IsometryE>> {
        let n = self.horizon();
        let ball = ball_view(self.trunc.clone());
        absorb(
            &SetView::finite([Vec3E::zero()]),
            &absorber_view(&self.trunc),
            &self.r,
            &ball,
            Some(self.trunc.window()),
            n,
        )
    }
}

/// The closed unit ball, enumerated as `N_d` plus fixed interior probes.
pub fn ball_view(n: Arc<AbsorberTrunc<IsometryE>>) -> SetView<Vec3E> {
    let h = RingScalar::half();
    let z = RingScalar::zero();
    let probes = vec![
        Vec3E::new(z.clone(), z.clone(), h.clone()),
        Vec3E::new(z.clone(), h.clone(), z.clone()),
        Vec3E::new(-&h, z.clone(), z),
    ];
    SetView::lazy(
        "ball",
        json!({ "probes": probes }),
        |x: &Vec3E| x.norm_sq().cmp_value(&RingScalar::one()).is_le(),
        move |d| {
            let mut s = n.truncation(d.min(n.horizon()));
            s.extend(probes.iter().filter(|p| n.generation_of(p).is_none()).cloned());
            s
        },
    )
}

/// The sphere absorber for `P = {e_x}` and its origin absorber.
pub fn standard_origin_absorber(horizon: u32, pool: usize) -> Result<OriginAbsorber> {
    let u = Axis::X.unit();
    let rot = find_avoiding_axis_rotation(std::slice::from_ref(&u), horizon as u64, pool)?;
    let q = build_absorber(&BTreeSet::from([u]), IsometryE::rotation(rot.matrix)?, horizon)?;
    ball_absorb_origin(&q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(x: &str, y: &str) -> CirclePoint {
        CirclePoint::parse(x, y).unwrap()
    }

    #[test]
    fn pool_order() {
        let p = pythagorean_pool(5);
        let s: Vec<String> = p.iter().map(|r| r.to_string()).collect();
        assert_eq!(s, ["(3/5, 4/5)", "(5/13, 12/13)", "(8/17, 15/17)", "(7/25, 24/25)", "(20/29, 21/29)"]);
    }

    #[test]
    fn empty_set_takes_first_candidate() {
        let (r, rej) = find_avoiding_rotation(&[], 10, 4).unwrap();
        assert_eq!(r.to_string(), "(3/5, 4/5)");
        assert!(rej.is_empty());
    }

    #[test]
    fn single_point() {
        let (r, _) = find_avoiding_rotation(&[cp("1", "0")], 10_000, 4).unwrap();
        assert_eq!(r.to_string(), "(3/5, 4/5)");
    }

    #[test]
    fn adversarial_pair_skips_first() {
        let (r, rej) = find_avoiding_rotation(&[cp("1", "0"), cp("3/5", "4/5")], 100, 4).unwrap();
        assert_eq!(r.to_string(), "(5/13, 12/13)");
        assert_eq!(rej, vec![Rejection { candidate: "(3/5, 4/5)".into(), power: 1 }]);
    }

    #[test]
    fn collision_at_higher_power() {
        let tau = &pythagorean_pool(1)[0];
        let p = cp("1", "0");
        let q = tau.pow(7).apply(&p);
        assert_eq!(first_collision(tau, &[p, q], 100), Some(7));
    }

    #[test]
    fn exhaustion_is_reported() {
        let tau = &pythagorean_pool(1)[0];
        let p = cp("1", "0");
        let err = find_avoiding_rotation(&[p.clone(), tau.apply(&p)], 10, 1).unwrap_err();
        assert!(matches!(err, Error::AvoidanceExhausted { tried: 1, .. }));
    }

    #[test]
    fn axis_choice() {
        let r = find_avoiding_axis_rotation(&[Axis::X.unit()], 100, 4).unwrap();
        assert_eq!(r.axis, Axis::Y);
        assert!(r.matrix.is_rotation());
        let poles: Vec<Vec3E> = Axis::ALL.iter().flat_map(|a| [a.unit(), a.unit().neg()]).collect();
        assert!(matches!(find_avoiding_axis_rotation(&poles, 10, 4), Err(Error::AxisSelection)));
    }

    #[test]
    fn absorber_counts() {
        let tau = pythagorean_pool(1)[0].clone();
        let a = build_absorber(&BTreeSet::from([cp("1", "0")]), tau.clone(), 5).unwrap();
        assert_eq!(a.len(), 6);
        assert!(a.shift_identity().pass);
        let empty = build_absorber(&BTreeSet::new(), tau, 5).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn origin_absorption() {
        let o = standard_origin_absorber(10, 4).unwrap();
        assert!(o.truncation(0).contains(&Vec3E::zero()));
        assert_ne!(o.r.apply(&Vec3E::zero()), Vec3E::zero());
        assert!(o.verify().pass, "{:?}", o.verify());
        let c = o.ball_cert().unwrap();
        assert!(c.verify(10).pass, "{:?}", c.verify(10));
        assert!(!c.target.contains(&Vec3E::zero()));
    }

    #[test]
    fn sphere_cert() {
        let c = sphere_minus_countable_cert(&[Axis::X.unit()], 20, 4).unwrap();
        assert_eq!(c.piece_count(), 2);
        for d in [1, 5, 20] {
            assert!(c.verify(d).pass, "{:?}", c.verify(d));
        }
        let trivial = sphere_minus_countable_cert(&[], 20, 4).unwrap();
        assert!(trivial.verify(3).pass);
    }

    #[test]
    fn wrong_motion_is_caught() {
        let mut c = sphere_minus_countable_cert(&[Axis::X.unit()], 10, 4).unwrap();
        let (cs, sn) = ring_angle_pool(2)[1].clone();
        c.pieces[0].motion = IsometryE::rotation(Axis::Y.rotation(&cs, &sn)).unwrap();
        assert!(!c.verify(10).pass);
    }
}
