//! The free group on σ, τ as reduced words, the five-way piece
//! classification, and the word-level doubling certificates.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::equideco::{EquidecompositionCert, Motion, Piece, SetView, Window};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Default ceiling on the number of words any single enumeration may produce.
pub const DEFAULT_WORD_CAP: u128 = 30_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Generator {
    Sigma,
    Tau,
}

/// One of σ, σ⁻¹, τ, τ⁻¹. The derived order is σ < σ⁻¹ < τ < τ⁻¹.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const SIGMA: Letter = Letter { generator: Generator::Sigma, inverse: false };
    pub const SIGMA_INV: Letter = Letter { generator: Generator::Sigma, inverse: true };
    pub const TAU: Letter = Letter { generator: Generator::Tau, inverse: false };
    pub const TAU_INV: Letter = Letter { generator: Generator::Tau, inverse: true };

    /// All four letters in canonical order.
    pub const ALL: [Letter; 4] = [Self::SIGMA, Self::SIGMA_INV, Self::TAU, Self::TAU_INV];

    pub fn inv(self) -> Letter {
        Letter { inverse: !self.inverse, ..self }
    }

    pub fn to_char(self) -> char {
        match (self.generator, self.inverse) {
            (Generator::Sigma, false) => 's',
            (Generator::Sigma, true) => 'S',
            (Generator::Tau, false) => 't',
            (Generator::Tau, true) => 'T',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            's' => Self::SIGMA,
            'S' => Self::SIGMA_INV,
            't' => Self::TAU,
            'T' => Self::TAU_INV,
            _ => return None,
        })
    }

    pub fn label(self) -> PieceLabel {
        match (self.generator, self.inverse) {
            (Generator::Sigma, false) => PieceLabel::WSigma,
            (Generator::Sigma, true) => PieceLabel::WSigmaInv,
            (Generator::Tau, false) => PieceLabel::WTau,
            (Generator::Tau, true) => PieceLabel::WTauInv,
        }
    }
}

/// A reduced word; the empty word is the identity.
///
/// Ordered length-lexicographically with σ < σ⁻¹ < τ < τ⁻¹.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Parses `e` or a string over `s S t T`. Non-reduced input is reduced.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::identity());
        }
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in word {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_letters(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// `self · other`, reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let mut i = 0;
        let n = self.0.len().min(other.0.len());
        while i < n && self.0[self.0.len() - 1 - i] == other.0[i].inv() {
            i += 1;
        }
        let mut v = Vec::with_capacity(self.0.len() + other.0.len() - 2 * i);
        v.extend_from_slice(&self.0[..self.0.len() - i]);
        v.extend_from_slice(&other.0[i..]);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    pub fn classify(&self) -> PieceLabel {
        self.first().map_or(PieceLabel::Identity, Letter::label)
    }

    pub fn is_reduced(letters: &[Letter]) -> bool {
        letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Cyclic rotation: the word `letters[k..] letters[..k]`, not reduced.
    pub(crate) fn rotate(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub(crate) fn from_reduced(v: Vec<Letter>) -> Word {
        debug_assert!(Word::is_reduced(&v));
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Left multiplication.
impl Motion for Word {
    type Point = Word;

    fn identity() -> Self {
        Word::identity()
    }

    fn apply(&self, p: &Word) -> Word {
        self.mul(p)
    }

    fn after(&self, first: &Self) -> Self {
        self.mul(first)
    }

    fn inverse(&self) -> Self {
        Word::inverse(self)
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "word": self.to_string() })
    }
}

/// Which of the five classes `W(σ), W(σ⁻¹), W(τ), W(τ⁻¹), {e}` a word is in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PieceLabel {
    WSigma,
    WSigmaInv,
    WTau,
    WTauInv,
    Identity,
}

impl PieceLabel {
    pub const ALL: [PieceLabel; 5] = [
        PieceLabel::WSigma,
        PieceLabel::WSigmaInv,
        PieceLabel::WTau,
        PieceLabel::WTauInv,
        PieceLabel::Identity,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PieceLabel::WSigma => "W_SIGMA",
            PieceLabel::WSigmaInv => "W_SIGMA_INV",
            PieceLabel::WTau => "W_TAU",
            PieceLabel::WTauInv => "W_TAU_INV",
            PieceLabel::Identity => "IDENTITY",
        }
    }

    pub fn parse(s: &str) -> Result<PieceLabel> {
        PieceLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown piece label {s:?}")))
    }
}

impl fmt::Display for PieceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `2·3ⁿ − 1`, the number of reduced words of length at most `n`.
pub fn ball_size(n: u32) -> u128 {
    2 * 3u128.saturating_pow(n) - 1
}

pub(crate) fn check_cap(what: &str, requested: u128, cap: u128) -> Result<()> {
    if requested > cap {
        return Err(Error::Resource {
            what: what.to_string(),
            requested,
            cap,
        });
    }
    Ok(())
}

/// All reduced words of length ≤ `n`, each once, in length-lexicographic
/// order.
pub fn enumerate_ball(n: u32, cap: u128) -> Result<Vec<Word>> {
    check_cap(&format!("ball of radius {n}"), ball_size(n), cap)?;
    Ok(ball_unchecked(n))
}

pub(crate) fn ball_unchecked(n: u32) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut level_start = 0;
    for _ in 0..n {
        let level_end = out.len();
        for i in level_start..level_end {
            let last = out[i].last();
            for l in Letter::ALL {
                if last == Some(l.inv()) {
                    continue;
                }
                let mut v = out[i].0.clone();
                v.push(l);
                out.push(Word(v));
            }
        }
        level_start = level_end;
    }
    out
}

fn ball_set(n: u32) -> BTreeSet<Word> {
    ball_unchecked(n).into_iter().collect()
}

/// A lazily enumerated set of words given by a classification predicate.
pub fn word_set(name: &str, labels: &[PieceLabel]) -> SetView<Word> {
    let labels: Vec<PieceLabel> = labels.to_vec();
    let params = serde_json::json!(labels.iter().map(|l| l.name()).collect::<Vec<_>>());
    let member = labels.clone();
    let member2 = labels;
    SetView::lazy(
        name,
        params,
        move |w: &Word| member.contains(&w.classify()),
        move |d| ball_set(d).into_iter().filter(|w| member2.contains(&w.classify())).collect(),
    )
}

/// The whole group, as a lazy set.
pub fn whole_group() -> SetView<Word> {
    word_set("F2", &PieceLabel::ALL)
}

/// Word length as the grading; one letter moves a word by at most one.
pub fn length_window() -> Window<Word> {
    Window::new(Arc::new(|w: &Word| Some(w.len() as u32)), 1)
}

/// The two doubling certificates `G ∼ W(σ)∪W(σ⁻¹)` and `G ∼ W(τ)∪W(τ⁻¹)`.
///
/// For the first, `Q = W(σ)∪W(τ)∪W(τ⁻¹)∪{e}` is moved by left
/// multiplication with σ onto `W(σ)` and `W(σ⁻¹)` stays put; the second
/// swaps the roles of σ and τ.
pub fn group_doubling_certs() -> (EquidecompositionCert<Word>, EquidecompositionCert<Word>) {
    use PieceLabel::*;
    let sigma = EquidecompositionCert::new(
        whole_group(),
        word_set("W(s)+W(S)", &[WSigma, WSigmaInv]),
        vec![
            Piece::new(word_set("Q_s", &[WSigma, WTau, WTauInv, Identity]), Word::letter(Letter::SIGMA)),
            Piece::new(word_set("W(S)", &[WSigmaInv]), Word::identity()),
        ],
        Some(length_window()),
    );
    let tau = EquidecompositionCert::new(
        whole_group(),
        word_set("W(t)+W(T)", &[WTau, WTauInv]),
        vec![
            Piece::new(word_set("Q_t", &[WTau, WSigma, WSigmaInv, Identity]), Word::letter(Letter::TAU)),
            Piece::new(word_set("W(T)", &[WTauInv]), Word::identity()),
        ],
        Some(length_window()),
    );
    (sigma, tau)
}

/// Checks a pair of doubling certificates on `ball(n)` with images trimmed
/// to `ball(n-1)`, plus disjointness of the two targets.
pub fn verify_doubling_pair(
    first: &EquidecompositionCert<Word>,
    second: &EquidecompositionCert<Word>,
    n: u32,
) -> VerificationReport {
    let mut report = VerificationReport::new("group-doubling", Some(n));
    if n < 2 {
        report.fail("depth must be at least 2", n);
        return report;
    }
    report.count("ball", ball_size(n) as u64);
    report.absorb("sigma", &first.verify(n));
    report.absorb("tau", &second.verify(n));
    let t1 = first.target.enumerate(n);
    if let Some(w) = second.target.enumerate(n).iter().find(|w| t1.contains(*w)) {
        report.fail("doubling targets intersect", w);
    }
    report
}

/// [`verify_doubling_pair`] on [`group_doubling_certs`].
pub fn verify_group_doubling(n: u32) -> VerificationReport {
    let (s, t) = group_doubling_certs();
    verify_doubling_pair(&s, &t, n)
}
