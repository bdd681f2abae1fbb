//! Finite group actions: orbits, representatives, the star transform and
//! partition lifting, plus the transfer of the free-group paradox onto an
//! orbit of the rotation group.

pub mod corpus;
mod orbit;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::VerificationReport;

pub use orbit::{transfer_paradox, OrbitIndex};

/// JSON form of a finite action; group elements and points are referred
/// to by index into `elements` and `points`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDocument {
    pub elements: Vec<String>,
    pub identity: usize,
    pub mul_table: Vec<Vec<usize>>,
    pub points: Vec<String>,
    pub act_table: Vec<Vec<usize>>,
}

/// A finite group acting on a finite set, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAction {
    doc: ActionDocument,
    inverses: Vec<usize>,
}

fn invalid(reason: &str, witness: String) -> Error {
    Error::InvalidAction { reason: reason.to_string(), witness }
}

impl FiniteAction {
    /// Checks the group axioms, `1̂ = id`, `ĝh = ĝ∘ĥ` and bijectivity of
    /// every `ĝ`, reporting the first failing triple.
    pub fn new(doc: ActionDocument) -> Result<FiniteAction> {
        let n = doc.elements.len();
        let m = doc.points.len();
        if n == 0 || doc.identity >= n {
            return Err(invalid("identity is not an element", format!("{}", doc.identity)));
        }
        if doc.mul_table.len() != n || doc.mul_table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(invalid("multiplication table is not n x n over the elements", format!("n = {n}")));
        }
        if doc.act_table.len() != n || doc.act_table.iter().any(|r| r.len() != m || r.iter().any(|&v| v >= m)) {
            return Err(invalid("action table is not n x m over the points", format!("n = {n}, m = {m}")));
        }
        let e = doc.identity;
        let mul = &doc.mul_table;
        for g in 0..n {
            if mul[e][g] != g || mul[g][e] != g {
                return Err(invalid("identity law fails", doc.elements[g].clone()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if mul[mul[g][h]][k] != mul[g][mul[h][k]] {
                        let w = format!("({}, {}, {})", doc.elements[g], doc.elements[h], doc.elements[k]);
                        return Err(invalid("multiplication is not associative", w));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| mul[g][h] == e && mul[h][g] == e) {
                Some(h) => inverses.push(h),
                None => return Err(invalid("element has no inverse", doc.elements[g].clone())),
            }
        }
        let act = &doc.act_table;
        for x in 0..m {
            if act[e][x] != x {
                return Err(invalid("identity moves a point", doc.points[x].clone()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for x in 0..m {
                    if act[mul[g][h]][x] != act[g][act[h][x]] {
                        let w = format!("({}, {}, {})", doc.elements[g], doc.elements[h], doc.points[x]);
                        return Err(invalid("action is not compatible with multiplication", w));
                    }
                }
            }
        }
        for g in 0..n {
            let image: BTreeSet<usize> = act[g].iter().copied().collect();
            if image.len() != m {
                return Err(invalid("element does not act bijectively", doc.elements[g].clone()));
            }
        }
        Ok(FiniteAction { doc, inverses })
    }

    pub fn from_json(s: &str) -> Result<FiniteAction> {
        let doc: ActionDocument = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        FiniteAction::new(doc)
    }

    pub fn document(&self) -> &ActionDocument {
        &self.doc
    }

    pub fn order(&self) -> usize {
        self.doc.elements.len()
    }

    pub fn carrier_size(&self) -> usize {
        self.doc.points.len()
    }

    pub fn identity(&self) -> usize {
        self.doc.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.doc.mul_table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.doc.act_table[g][x]
    }

    pub fn element_name(&self, g: usize) -> &str {
        &self.doc.elements[g]
    }

    pub fn point_name(&self, x: usize) -> &str {
        &self.doc.points[x]
    }

    pub fn act_set(&self, g: usize, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        s.iter().map(|&x| self.act(g, x)).collect()
    }

    /// The orbit partition, blocks ordered by their least point.
    pub fn orbits(&self) -> OrbitPartition {
        let m = self.carrier_size();
        let mut index = vec![usize::MAX; m];
        let mut blocks = Vec::new();
        for x in 0..m {
            if index[x] != usize::MAX {
                continue;
            }
            let block: BTreeSet<usize> = (0..self.order()).map(|g| self.act(g, x)).collect();
            for &y in &block {
                index[y] = blocks.len();
            }
            blocks.push(block);
        }
        OrbitPartition { blocks, index }
    }

    /// No element other than the identity fixes a point.
    pub fn is_free(&self) -> bool {
        self.fixed_point().is_none()
    }

    /// Some `(g, x)` with `g ≠ 1` and `ĝ(x) = x`.
    pub fn fixed_point(&self) -> Option<(usize, usize)> {
        (0..self.order())
            .filter(|&g| g != self.identity())
            .find_map(|g| (0..self.carrier_size()).find(|&x| self.act(g, x) == x).map(|x| (g, x)))
    }

    /// Whether the translates `ĝ(M)` are nonempty, pairwise disjoint and
    /// cover the carrier.
    pub fn translates_partition(&self, m: &RepresentativeSet) -> VerificationReport {
        let mut r = VerificationReport::new("translates-partition", None);
        let translates: Vec<BTreeSet<usize>> = (0..self.order()).map(|g| self.act_set(g, &m.points)).collect();
        r.count("translates", translates.len() as u64);
        if m.points.is_empty() && self.carrier_size() > 0 {
            r.fail("representative set is empty", "M = {}");
            return r;
        }
        let mut owner = vec![None; self.carrier_size()];
        for (g, t) in translates.iter().enumerate() {
            for &x in t {
                if let Some(h) = owner[x] {
                    r.fail(
                        "translates overlap",
                        format!("{} and {} both reach {}", self.element_name(h), self.element_name(g), self.point_name(x)),
                    );
                    return r;
                }
                owner[x] = Some(g);
            }
        }
        if let Some(x) = owner.iter().position(Option::is_none) {
            r.fail("translates miss a point", self.point_name(x));
        }
        r
    }

    /// `B* = ∪_{g∈B} ĝ(M)`.
    pub fn star(&self, b: &BTreeSet<usize>, m: &RepresentativeSet) -> BTreeSet<usize> {
        b.iter().flat_map(|&g| self.act_set(g, &m.points)).collect()
    }

    /// `gB` as a set of elements.
    pub fn left_translate(&self, g: usize, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        b.iter().map(|&h| self.mul(g, h)).collect()
    }

    /// Lifts a partition of the group to the partition `{B_i*}` of the
    /// carrier; needs a free action.
    pub fn lift_partition(&self, blocks: &[BTreeSet<usize>], m: &RepresentativeSet) -> Result<Vec<BTreeSet<usize>>> {
        let mut seen = vec![false; self.order()];
        for b in blocks {
            if b.is_empty() {
                return Err(Error::Precondition("partition has an empty block".into()));
            }
            for &g in b {
                if g >= self.order() || seen[g] {
                    return Err(Error::Precondition(format!("element index {g} is repeated or unknown")));
                }
                seen[g] = true;
            }
        }
        if let Some(g) = seen.iter().position(|s| !s) {
            return Err(Error::Precondition(format!("element {} is in no block", self.element_name(g))));
        }
        if let Some((g, x)) = self.fixed_point() {
            return Err(Error::Precondition(format!(
                "action is not free: {} fixes {}",
                self.element_name(g),
                self.point_name(x)
            )));
        }
        Ok(blocks.iter().map(|b| self.star(b, m)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub blocks: Vec<BTreeSet<usize>>,
    /// Block number of each point.
    pub index: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeSet {
    pub points: BTreeSet<usize>,
}

/// One point per block: the least in the canonical (index) order.
pub fn choose_representatives(p: &OrbitPartition) -> RepresentativeSet {
    RepresentativeSet {
        points: p.blocks.iter().filter_map(|b| b.iter().next().copied()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn z2_on(act: Vec<usize>) -> FiniteAction {
        let m = act.len();
        FiniteAction::new(ActionDocument {
            elements: names("g", 2),
            identity: 0,
            mul_table: vec![vec![0, 1], vec![1, 0]],
            points: names("p", m),
            act_table: vec![(0..m).collect(), act],
        })
        .unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn double_swap() {
        let a = z2_on(vec![1, 0, 3, 2]);
        let p = a.orbits();
        assert_eq!(p.blocks, vec![set(&[0, 1]), set(&[2, 3])]);
        assert!(a.is_free());
        let m = choose_representatives(&p);
        assert_eq!(m.points, set(&[0, 2]));
        assert!(a.translates_partition(&m).pass);
        let lifted = a.lift_partition(&[set(&[0]), set(&[1])], &m).unwrap();
        assert_eq!(lifted, vec![set(&[0, 2]), set(&[1, 3])]);
    }

    #[test]
    fn trivial_action() {
        let a = z2_on(vec![0, 1]);
        assert_eq!(a.orbits().blocks.len(), 2);
        assert!(!a.is_free());
        let m = choose_representatives(&a.orbits());
        let r = a.translates_partition(&m);
        assert!(!r.pass);
        assert_eq!(r.failure.unwrap().reason, "translates overlap");
        assert!(a.lift_partition(&[set(&[0, 1])], &m).is_err());
    }

    #[test]
    fn rejects_broken_tables() {
        let doc = ActionDocument {
            elements: names("g", 2),
            identity: 0,
            mul_table: vec![vec![0, 1], vec![1, 0]],
            points: names("p", 2),
            act_table: vec![vec![0, 1], vec![0, 0]],
        };
        let err = FiniteAction::new(doc).unwrap_err();
        assert!(matches!(err, Error::InvalidAction { .. }), "{err}");
    }

    #[test]
    fn non_partition_rejected() {
        let a = z2_on(vec![1, 0]);
        let m = choose_representatives(&a.orbits());
        assert!(a.lift_partition(&[set(&[0])], &m).is_err());
        assert!(a.lift_partition(&[set(&[0, 1]), set(&[1])], &m).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let a = z2_on(vec![1, 0, 3, 2]);
        let s = serde_json::to_string(a.document()).unwrap();
        assert_eq!(FiniteAction::from_json(&s).unwrap(), a);
    }
}
