//! End-to-end doubling: the orbit cloud of a base point and its two copies,
//! the truncated ball paradox built from radial cones, the piece-count
//! calculus for the strong form, and cloud exports.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::absorption::{standard_origin_absorber, OriginAbsorber};
use crate::actions::OrbitIndex;
use crate::equideco::{EquidecompositionCert, Piece, SetView, Window};
use crate::error::{Error, Result};
use crate::exactring::{IsometryE, RingScalar, Vec3E};
use crate::freegroup::{group_doubling_certs, Letter, PieceLabel, Word};
use crate::report::VerificationReport;
use crate::rotact::{word_matrix, SphereTriple};

pub use crate::rotact::stabilizer_certify;

/// Labeled orbit points `w·x`, keyed by word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCloud {
    pub base: SphereTriple,
    pub depth: u32,
    pub points: BTreeMap<Word, SphereTriple>,
    pub labels: BTreeMap<Word, PieceLabel>,
}

impl OrbitCloud {
    pub fn from_index(index: &OrbitIndex) -> OrbitCloud {
        let mut points = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for (w, t, _) in index.iter() {
            points.insert(w.clone(), t.canonical());
            labels.insert(w.clone(), w.classify());
        }
        OrbitCloud { base: index.base().clone(), depth: index.depth(), points, labels }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Canonical points whose word has length at most `depth`.
    pub fn trimmed(&self, depth: u32) -> BTreeSet<SphereTriple> {
        self.points.iter().filter(|(w, _)| w.len() as u32 <= depth).map(|(_, t)| t.canonical()).collect()
    }

    pub fn piece_sizes(&self) -> [usize; 5] {
        let mut out = [0; 5];
        for l in self.labels.values() {
            out[l.index()] += 1;
        }
        out
    }
}

/// The orbit ball and its two copies `W(σ) ∪ σW(σ⁻¹)` and `W(τ) ∪ τW(τ⁻¹)`.
#[derive(Clone, Debug)]
pub struct OrbitDoubling {
    pub cloud: OrbitCloud,
    pub first: OrbitCloud,
    pub second: OrbitCloud,
    pub report: VerificationReport,
}

fn copy_of(cloud: &OrbitCloud, keep: PieceLabel, moved: PieceLabel, by: Letter) -> OrbitCloud {
    let mut points = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (w, t) in &cloud.points {
        let l = cloud.labels[w];
        if l == keep {
            points.insert(w.clone(), t.clone());
            labels.insert(w.clone(), l);
        } else if l == moved {
            let v = Word::letter(by).mul(w);
            points.insert(v.clone(), t.apply_letter(by).canonical());
            labels.insert(v, l);
        }
    }
    OrbitCloud { base: cloud.base.clone(), depth: cloud.depth, points, labels }
}

fn check_copy(r: &mut VerificationReport, name: &str, copy: &OrbitCloud, cloud: &OrbitCloud) {
    let d = cloud.depth.saturating_sub(1);
    for (w, t) in &copy.points {
        if let Some(orig) = cloud.points.get(w) {
            if !orig.same_point(t) {
                r.fail(&format!("{name}: moved point differs from the orbit point"), w);
            }
        }
    }
    let have = copy.trimmed(d);
    let want = cloud.trimmed(d);
    r.count(&format!("{name}.trimmed"), have.len() as u64);
    if have != want {
        let missing = cloud.points.iter().find(|(w, t)| w.len() as u32 <= d && !have.contains(&t.canonical()));
        match missing {
            Some((w, _)) => {
                r.fail(&format!("{name}: trimmed copy misses an orbit point"), w);
            }
            None => {
                r.fail(&format!("{name}: trimmed copy has an extra point"), d);
            }
        }
    }
}

/// Builds the orbit ball of `base`, splits it into the five labeled
/// pieces, applies the doubling motions and checks both copies against
/// the orbit trimmed to `depth − 1`.
pub fn orbit_double(base: &SphereTriple, depth: u32) -> Result<OrbitDoubling> {
    let index = OrbitIndex::build(base, depth)?;
    let cloud = OrbitCloud::from_index(&index);
    let first = copy_of(&cloud, PieceLabel::WSigma, PieceLabel::WSigmaInv, Letter::SIGMA);
    let second = copy_of(&cloud, PieceLabel::WTau, PieceLabel::WTauInv, Letter::TAU);
    let mut r = VerificationReport::new("orbit-doubling", Some(depth));
    let distinct: BTreeSet<&SphereTriple> = cloud.points.values().collect();
    r.count("points", cloud.len() as u64);
    r.count("distinct", distinct.len() as u64);
    if distinct.len() != cloud.len() {
        r.fail("orbit points are not distinct", depth);
    }
    for (l, n) in PieceLabel::ALL.iter().zip(cloud.piece_sizes()) {
        r.count(&format!("piece.{}", l.name()), n as u64);
    }
    check_copy(&mut r, "first", &first, &cloud);
    check_copy(&mut r, "second", &second, &cloud);
    if !r.pass {
        return Err(Error::verification(r));
    }
    Ok(OrbitDoubling { cloud, first, second, report: r })
}

/// An element `r + s√2` of the field `Q(√2)`.
type QSqrt2 = (BigRational, BigRational);

fn ratio(x: &RingScalar, y: &RingScalar) -> QSqrt2 {
    let (px, qx, _, _) = x.parts();
    let (py, qy, _, _) = y.parts();
    let two = BigInt::from(2);
    let scale = BigRational::new(y.denominator(), x.denominator());
    let den = py * py - &two * qy * qy;
    let r = BigRational::new(px * py - &two * qx * qy, den.clone()) * &scale;
    let s = BigRational::new(qx * py - px * qy, den) * &scale;
    (r, s)
}

type DirectionKey = (usize, i32, QSqrt2, QSqrt2);

/// The ray through `v ≠ 0`: the first nonzero coordinate, its sign, and the
/// ratios of the other two to it.
fn direction(v: &Vec3E) -> Option<DirectionKey> {
    let c = v.coords();
    let i = (0..3).find(|&i| !c[i].is_zero())?;
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    Some((i, c[i].signum(), ratio(c[j], c[i]), ratio(c[k], c[i])))
}

/// Radial cones `{t·p : 0 < t ≤ 1}` over points of an orbit ball.
#[derive(Debug)]
pub struct ConeIndex {
    orbit: Arc<OrbitIndex>,
    by_direction: HashMap<DirectionKey, (Word, Vec3E)>,
}

/// Radii used to enumerate cones.
const CONE_RADII: [(i64, i64); 3] = [(1, 1), (1, 2), (1, 3)];

impl ConeIndex {
    pub fn new(orbit: Arc<OrbitIndex>) -> Arc<ConeIndex> {
        let by_direction = orbit
            .iter()
            .map(|(w, _, p)| (direction(p).expect("unit vector"), (w.clone(), p.clone())))
            .collect();
        Arc::new(ConeIndex { orbit, by_direction })
    }

    pub fn orbit(&self) -> &Arc<OrbitIndex> {
        &self.orbit
    }

    /// The word whose orbit point spans the ray of `x`, if `0 < |x| ≤ 1`.
    pub fn word_of(&self, x: &Vec3E) -> Option<&Word> {
        let (w, _) = self.by_direction.get(&direction(x)?)?;
        x.norm_sq().cmp_value(&RingScalar::one()).is_le().then_some(w)
    }

    /// The cone over `{w·x : w ∈ s}`.
    pub fn cone(self: &Arc<Self>, s: &SetView<Word>) -> SetView<Vec3E> {
        let (c1, c2) = (self.clone(), self.clone());
        let (s1, s2) = (s.clone(), s.clone());
        SetView::lazy(
            &format!("cone({})", s.name()),
            json!({ "words": s.describe(), "radii": CONE_RADII }),
            move |x| c1.word_of(x).is_some_and(|w| s1.contains(w)),
            move |d| {
                let radii: Vec<RingScalar> =
                    CONE_RADII.iter().map(|&(n, m)| RingScalar::from_ratio(n, m).expect("ring radius")).collect();
                let mut out = BTreeSet::new();
                for w in s2.enumerate(d.min(c2.orbit.depth())) {
                    let p = c2.orbit.point_of(&w);
                    out.extend(radii.iter().map(|t| p.scale(t)));
                }
                out
            },
        )
    }

    pub fn window(self: &Arc<Self>, margin: u32) -> Window<Vec3E> {
        let c = self.clone();
        Window::new(Arc::new(move |x: &Vec3E| c.word_of(x).map(|w| w.len() as u32)), margin)
            .with_horizon(self.orbit.depth())
    }

    /// A word certificate carried to cones; rotations commute with radial
    /// scaling, so the motions are the rotations of the words.
    pub fn carry(self: &Arc<Self>, c: &EquidecompositionCert<Word>) -> Result<EquidecompositionCert<IsometryE>> {
        let pieces = c
            .pieces
            .iter()
            .map(|p| Ok(Piece::new(self.cone(&p.set), IsometryE::rotation(word_matrix(&p.motion))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquidecompositionCert::new(
            self.cone(&c.source),
            self.cone(&c.target),
            pieces,
            Some(self.window(c.margin())),
        ))
    }
}

/// Orbit depth used for the cones of the ball paradox.
pub const BALL_ORBIT_DEPTH: u32 = 4;

/// The truncated ball paradox: cones over the orbit carry both halves of
/// the group doubling, and the origin absorber gives `B³ ∼ B³ ∖ {0}`.
#[derive(Clone, Debug)]
pub struct BallParadox {
    pub cones: Arc<ConeIndex>,
    pub first: EquidecompositionCert<IsometryE>,
    pub second: EquidecompositionCert<IsometryE>,
    pub origin: OriginAbsorber,
    pub origin_cert: EquidecompositionCert<IsometryE>,
}

/// Builds the ball paradox with the origin absorber truncated at `depth`
/// and cones over the default orbit to `min(depth, BALL_ORBIT_DEPTH)`.
pub fn ball_paradox_cert(depth: u32) -> Result<BallParadox> {
    let orbit = OrbitIndex::build(&SphereTriple::default_base(), depth.min(BALL_ORBIT_DEPTH))?;
    let cones = ConeIndex::new(orbit);
    let (c1, c2) = group_doubling_certs();
    let origin = standard_origin_absorber(depth, 8)?;
    let origin_cert = origin.ball_cert()?;
    Ok(BallParadox { first: cones.carry(&c1)?, second: cones.carry(&c2)?, cones, origin, origin_cert })
}

impl BallParadox {
    pub fn verify(&self, depth: u32) -> VerificationReport {
        let mut r = VerificationReport::new("ball-paradox", Some(depth));
        let d_cone = depth.min(self.cones.orbit.depth());
        r.absorb("first", &self.first.verify(d_cone));
        r.absorb("second", &self.second.verify(d_cone));
        let t1 = self.first.target.enumerate(d_cone);
        if let Some(x) = self.second.target.enumerate(d_cone).iter().find(|x| t1.contains(x)) {
            r.fail("cone targets overlap", x);
        }
        let zero = Vec3E::zero();
        if self.first.source.contains(&zero) || self.first.target.contains(&zero) || self.second.target.contains(&zero) {
            r.fail("origin lies in a cone", "0");
        }
        let one = RingScalar::one();
        if let Some(x) = self.first.source.enumerate(d_cone).iter().find(|x| x.norm_sq().cmp_value(&one).is_gt()) {
            r.fail("cone point outside the ball", x);
        }
        r.absorb("origin", &self.origin.verify());
        r.absorb("origin-cert", &self.origin_cert.verify(depth.min(self.origin.horizon())));
        r
    }
}

/// Kinds of derivation steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NodeKind {
    /// A ball is equidecomposable with each half of a partition of itself.
    WeakFormAxiom,
    /// A subset embeds in a superset by the identity.
    Inclusion,
    /// A set is equidecomposable with its translate.
    Translation,
    Compose,
    Bsb,
    /// Equidecompositions of disjoint sources onto disjoint targets.
    Union,
    NFold,
    DisjointDouble,
}

/// Pieces needed for each half of the weak form: the group doubling on the
/// sphere, absorbing the countable bad set, and absorbing the origin each
/// contribute a factor of two.
pub const WEAK_FORM_BOUND: u32 = 8;

impl NodeKind {
    fn leaf_bound(self) -> Option<BigUint> {
        match self {
            NodeKind::WeakFormAxiom => Some(BigUint::from(WEAK_FORM_BOUND)),
            NodeKind::Inclusion | NodeKind::Translation => Some(BigUint::one()),
            _ => None,
        }
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            NodeKind::WeakFormAxiom | NodeKind::Inclusion | NodeKind::Translation => n == 0,
            NodeKind::Bsb | NodeKind::DisjointDouble => n == 2,
            NodeKind::NFold => n == 1,
            NodeKind::Compose | NodeKind::Union => n >= 2,
        }
    }

    fn combine(self, bounds: &[&BigUint]) -> BigUint {
        match self {
            NodeKind::Compose => bounds.iter().fold(BigUint::one(), |acc, b| acc * *b),
            NodeKind::NFold => bounds[0].clone(),
            _ => bounds.iter().fold(BigUint::zero(), |acc, b| acc + *b),
        }
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationNode {
    pub id: usize,
    pub kind: NodeKind,
    pub claim: String,
    #[serde(with = "decimal")]
    pub bound: BigUint,
    pub children: Vec<usize>,
}

/// A derivation DAG; children always precede their parents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationCert {
    pub nodes: Vec<DerivationNode>,
    pub root: usize,
    pub params: BTreeMap<String, String>,
}

impl DerivationCert {
    pub fn bound(&self) -> &BigUint {
        &self.nodes[self.root].bound
    }

    pub fn root_node(&self) -> &DerivationNode {
        &self.nodes[self.root]
    }

    /// Checks node ids, arities, child order and every bound rule.
    pub fn validate(&self) -> VerificationReport {
        let mut r = VerificationReport::new("derivation", None);
        r.count("nodes", self.nodes.len() as u64);
        if self.root >= self.nodes.len() {
            r.fail("root out of range", self.root);
            return r;
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                r.fail("node id out of place", i);
                continue;
            }
            if !n.kind.arity_ok(n.children.len()) {
                r.fail("wrong number of children", format!("{i} ({:?})", n.kind));
                continue;
            }
            if let Some(&c) = n.children.iter().find(|&&c| c >= i) {
                r.fail("child does not precede its parent", format!("{i} -> {c}"));
                continue;
            }
            let expected = match n.kind.leaf_bound() {
                Some(b) => b,
                None => n.kind.combine(&n.children.iter().map(|&c| &self.nodes[c].bound).collect::<Vec<_>>()),
            };
            if expected != n.bound {
                r.fail("bound does not follow its rule", format!("{i} ({:?}): {} != {expected}", n.kind, n.bound));
            }
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derivation serializes")
    }
}

#[derive(Default)]
struct Builder {
    nodes: Vec<DerivationNode>,
    disjoint_double: Option<usize>,
}

impl Builder {
    fn leaf(&mut self, kind: NodeKind, claim: impl Into<String>) -> usize {
        let bound = kind.leaf_bound().expect("leaf kind");
        self.push(kind, claim.into(), bound, Vec::new())
    }

    fn node(&mut self, kind: NodeKind, claim: impl Into<String>, children: Vec<usize>) -> usize {
        let bound = kind.combine(&children.iter().map(|&c| &self.nodes[c].bound).collect::<Vec<_>>());
        self.push(kind, claim.into(), bound, children)
    }

    fn push(&mut self, kind: NodeKind, claim: String, bound: BigUint, children: Vec<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(DerivationNode { id, kind, claim, bound, children });
        id
    }

    fn finish(self, root: usize, params: BTreeMap<String, String>) -> DerivationCert {
        DerivationCert { nodes: self.nodes, root, params }
    }

    /// `A ∼ A ∪ A'` for a disjoint translate `A'`, shared across the DAG.
    fn disjoint_double(&mut self) -> usize {
        if let Some(id) = self.disjoint_double {
            return id;
        }
        let incl = self.leaf(NodeKind::Inclusion, "B ⪯ A");
        let weak_b = self.leaf(NodeKind::WeakFormAxiom, "A ⪯ B");
        let b = self.node(NodeKind::Bsb, "B ∼ A", vec![incl, weak_b]);
        let weak_c = self.leaf(NodeKind::WeakFormAxiom, "C ∼ A");
        let shift = self.leaf(NodeKind::Translation, "A ∼ A'");
        let c = self.node(NodeKind::Compose, "C ∼ A'", vec![weak_c, shift]);
        let id = self.node(NodeKind::DisjointDouble, "A = B ∪ C ∼ A ∪ A'", vec![b, c]);
        self.disjoint_double = Some(id);
        id
    }

    fn n_fold(&mut self, n: u64) -> usize {
        let mut prev = self.leaf(NodeKind::Inclusion, "A ∼ A_1");
        for k in 2..=n {
            let dd = self.disjoint_double();
            let rest = self.leaf(NodeKind::Translation, format!("A_{k} ∖ (A_1 ∪ … ∪ A_{}) ⪯ B", k - 1));
            let union = self.node(NodeKind::Union, format!("A_1 ∪ … ∪ A_{k} ⪯ A ∪ B"), vec![prev, rest]);
            let down = self.node(NodeKind::Compose, format!("A_1 ∪ … ∪ A_{k} ⪯ A"), vec![union, dd]);
            let up = self.leaf(NodeKind::Inclusion, format!("A ⪯ A_1 ∪ … ∪ A_{k}"));
            let both = self.node(NodeKind::Bsb, format!("A ∼ A_1 ∪ … ∪ A_{k}"), vec![down, up]);
            prev = self.node(NodeKind::NFold, format!("A ∼ A_1 ∪ … ∪ A_{k}"), vec![both]);
        }
        prev
    }

    /// `A ∼ body` for a body covered by `n` translates of `A`.
    fn body(&mut self, ball: &str, body: &str, n: u64) -> usize {
        let fold = self.n_fold(n);
        let cover = self.leaf(NodeKind::Inclusion, format!("{body} ⪯ {ball}_1 ∪ … ∪ {ball}_{n}"));
        let down = self.node(NodeKind::Compose, format!("{body} ⪯ {ball}"), vec![cover, fold]);
        let up = self.leaf(NodeKind::Inclusion, format!("{ball} ⪯ {body}"));
        self.node(NodeKind::Bsb, format!("{ball} ∼ {body}"), vec![up, down])
    }
}

/// `A ∼ A ∪ A'` for a ball `A` and a disjoint translate `A'`.
pub fn disjoint_double_plan() -> DerivationCert {
    let mut b = Builder::default();
    let root = b.disjoint_double();
    b.finish(root, BTreeMap::new())
}

/// `A ∼ A_1 ∪ … ∪ A_n` for translates `A_j` of a ball `A`.
pub fn n_fold_plan(n: u64) -> Result<DerivationCert> {
    if n == 0 {
        return Err(Error::Precondition("n-fold needs n ≥ 1".into()));
    }
    let mut b = Builder::default();
    let root = b.n_fold(n);
    Ok(b.finish(root, BTreeMap::from([("n".to_string(), n.to_string())])))
}

/// Closed-form bound of [`n_fold_plan`]: `b(1) = 1`,
/// `b(n) = 1 + d·(b(n−1) + 1)` with `d` the disjoint-double bound.
pub fn n_fold_bound(n: u64) -> BigUint {
    let d = disjoint_double_plan().bound().clone();
    (2..=n).fold(BigUint::one(), |b, _| BigUint::one() + &d * (b + BigUint::one()))
}

/// Side count `m` of a grid of cubes of side `r/√3` covering the cube
/// around a ball of radius `big`: the least `m` with `m²r² ≥ 12·big²`.
pub fn grid_side(r: &BigRational, big: &BigRational) -> u64 {
    let need = BigRational::from_integer(12.into()) * big * big / (r * r);
    let mut m: u64 = 1;
    while BigRational::from_integer((m * m).into()) < need {
        m += 1;
    }
    m
}

/// Plan for `Q ∼ T`, where `Q` contains a ball of radius `r_q` and lies in
/// one of radius `big_q`, and likewise for `T`.
pub fn strong_form_plan(
    r_q: &BigRational,
    big_q: &BigRational,
    r_t: &BigRational,
    big_t: &BigRational,
) -> Result<DerivationCert> {
    for (name, v) in [("r_Q", r_q), ("R_Q", big_q), ("r_T", r_t), ("R_T", big_t)] {
        if !v.is_positive() {
            return Err(Error::Precondition(format!("{name} must be positive, got {v}")));
        }
    }
    if r_q > big_q || r_t > big_t {
        return Err(Error::Precondition("inner radius exceeds outer radius".into()));
    }
    let mut params = BTreeMap::from([
        ("r_Q".to_string(), r_q.to_string()),
        ("R_Q".to_string(), big_q.to_string()),
        ("r_T".to_string(), r_t.to_string()),
        ("R_T".to_string(), big_t.to_string()),
    ]);
    let mut b = Builder::default();
    if r_q == big_q && r_t == big_t && r_q == r_t {
        let root = b.leaf(NodeKind::Translation, "Q ∼ T");
        return Ok(b.finish(root, params));
    }
    let r = r_q.min(r_t).clone();
    let (m_q, m_t) = (grid_side(&r, big_q), grid_side(&r, big_t));
    let (n_q, n_t) = (m_q.pow(3), m_t.pow(3));
    params.insert("ball_radius".into(), r.to_string());
    params.insert("cover_Q".into(), n_q.to_string());
    params.insert("cover_T".into(), n_t.to_string());
    let q = b.body("A", "Q", n_q);
    let shift = b.leaf(NodeKind::Translation, "A ∼ B");
    let t = b.body("B", "T", n_t);
    let root = b.node(NodeKind::Compose, "Q ∼ A ∼ B ∼ T", vec![q, shift, t]);
    Ok(b.finish(root, params))
}

/// Export formats for orbit clouds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudFormat {
    Csv,
    Json,
    Ply,
}

impl FromStr for CloudFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(CloudFormat::Csv),
            "json" => Ok(CloudFormat::Json),
            "ply" => Ok(CloudFormat::Ply),
            other => Err(Error::Format(format!("unsupported format {other:?}"))),
        }
    }
}

/// Digits after the decimal point in exported coordinates.
pub const EXPORT_DIGITS: u32 = 12;

fn decimals(t: &SphereTriple) -> [String; 3] {
    let v = t.to_vec3();
    let c = v.coords();
    [c[0].to_decimal(EXPORT_DIGITS), c[1].to_decimal(EXPORT_DIGITS), c[2].to_decimal(EXPORT_DIGITS)]
}

pub fn export_cloud(c: &OrbitCloud, format: CloudFormat) -> String {
    let mut out = String::new();
    match format {
        CloudFormat::Csv => {
            out.push_str("word,label,a,b,c,k,x,y,z\n");
            for (w, t) in &c.points {
                let [x, y, z] = decimals(t);
                let _ = writeln!(out, "{w},{},{},{},{},{},{x},{y},{z}", c.labels[w], t.a, t.b, t.c, t.k);
            }
        }
        CloudFormat::Json => {
            out = serde_json::to_string_pretty(c).expect("cloud serializes");
            out.push('\n');
        }
        CloudFormat::Ply => {
            let _ = write!(
                out,
                "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nproperty uchar label\nend_header\n",
                c.len()
            );
            for (w, t) in &c.points {
                let [x, y, z] = decimals(t);
                let _ = writeln!(out, "{x} {y} {z} {}", c.labels[w].index());
            }
        }
    }
    out
}

pub fn import_cloud_json(s: &str) -> Result<OrbitCloud> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
