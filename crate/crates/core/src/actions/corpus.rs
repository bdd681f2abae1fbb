//! The groups of order at most 8 and all of their actions on at most 8
//! points, up to isomorphism: disjoint unions of coset actions `G/H`, one
//! `H` per conjugacy class of subgroups.

use std::collections::{BTreeSet, VecDeque};

use super::{ActionDocument, FiniteAction};

/// A finite group by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    pub name: String,
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
}

impl SmallGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn cyclic(n: usize) -> SmallGroup {
        SmallGroup {
            name: format!("Z{n}"),
            elements: (0..n).map(|i| i.to_string()).collect(),
            mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    pub fn product(a: &SmallGroup, b: &SmallGroup) -> SmallGroup {
        let (n, m) = (a.order(), b.order());
        let idx = |i: usize, j: usize| i * m + j;
        let mut mul = vec![vec![0; n * m]; n * m];
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        mul[idx(i, j)][idx(k, l)] = idx(a.mul[i][k], b.mul[j][l]);
                    }
                }
            }
        }
        let mut elements = Vec::new();
        for x in &a.elements {
            for y in &b.elements {
                elements.push(format!("({x},{y})"));
            }
        }
        SmallGroup { name: format!("{}x{}", a.name, b.name), elements, mul }
    }

    /// The permutation group generated by `gens` on `0..degree`.
    pub fn permutations(name: &str, gens: &[Vec<usize>], degree: usize) -> SmallGroup {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
                if !elems.contains(&q) {
                    elems.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        let pos = |p: &Vec<usize>| elems.iter().position(|e| e == p).expect("closed");
        let mul = elems
            .iter()
            .map(|p| elems.iter().map(|q| pos(&q.iter().map(|&x| p[x]).collect())).collect())
            .collect();
        let elements = elems.iter().map(|p| format!("{p:?}")).collect();
        SmallGroup { name: name.to_string(), elements, mul }
    }

    pub fn symmetric3() -> SmallGroup {
        Self::permutations("S3", &[vec![1, 2, 0], vec![1, 0, 2]], 3)
    }

    pub fn dihedral4() -> SmallGroup {
        Self::permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], 4)
    }

    /// `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> SmallGroup {
        // unit products: (result unit, sign flip) for units 1, i, j, k
        const T: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let enc = |neg: bool, u: usize| u + 4 * neg as usize;
        let mul = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, flip) = T[x % 4][y % 4];
                        enc((x >= 4) ^ (y >= 4) ^ flip, u)
                    })
                    .collect()
            })
            .collect();
        let elements = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].map(String::from).to_vec();
        SmallGroup { name: "Q8".into(), elements, mul }
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.mul[g][h] == 0).expect("group")
    }

    /// All subgroups, as subsets closed under multiplication.
    pub fn subgroups(&self) -> Vec<BTreeSet<usize>> {
        let n = self.order();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let s: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.mul[a][b]))) {
                out.push(s);
            }
        }
        out
    }

    /// One subgroup per conjugacy class.
    pub fn subgroup_classes(&self) -> Vec<BTreeSet<usize>> {
        let mut seen: Vec<BTreeSet<usize>> = Vec::new();
        let mut reps = Vec::new();
        for h in self.subgroups() {
            if seen.contains(&h) {
                continue;
            }
            for g in 0..self.order() {
                let gi = self.inverse(g);
                let c: BTreeSet<usize> = h.iter().map(|&x| self.mul[self.mul[g][x]][gi]).collect();
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
            reps.push(h);
        }
        reps
    }

    /// Left cosets of `h`, each as a set of elements, in order of least element.
    pub fn cosets(&self, h: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for g in 0..self.order() {
            let c: BTreeSet<usize> = h.iter().map(|&x| self.mul[g][x]).collect();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// The disjoint union of the coset actions `G/H` for `H` in `parts`.
    pub fn coset_action(&self, parts: &[BTreeSet<usize>]) -> FiniteAction {
        let mut points = Vec::new();
        let mut cosets: Vec<(usize, BTreeSet<usize>)> = Vec::new();
        for (i, h) in parts.iter().enumerate() {
            for c in self.cosets(h) {
                points.push(format!("{i}:{}", c.iter().next().expect("nonempty")));
                cosets.push((i, c));
            }
        }
        let act_table = (0..self.order())
            .map(|g| {
                cosets
                    .iter()
                    .map(|(i, c)| {
                        let moved: BTreeSet<usize> = c.iter().map(|&x| self.mul[g][x]).collect();
                        cosets.iter().position(|(j, d)| j == i && *d == moved).expect("cosets are permuted")
                    })
                    .collect()
            })
            .collect();
        FiniteAction::new(ActionDocument {
            elements: self.elements.clone(),
            identity: 0,
            mul_table: self.mul.clone(),
            points,
            act_table,
        })
        .expect("coset actions satisfy the axioms")
    }

    /// Left multiplication on the group itself.
    pub fn regular_action(&self) -> FiniteAction {
        self.coset_action(&[BTreeSet::from([0])])
    }

    /// Every action on at most `max_points` points, up to isomorphism.
    pub fn actions(&self, max_points: usize) -> Vec<FiniteAction> {
        let classes: Vec<(BTreeSet<usize>, usize)> = self
            .subgroup_classes()
            .into_iter()
            .map(|h| {
                let index = self.order() / h.len();
                (h, index)
            })
            .collect();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        fn rec(
            g: &SmallGroup,
            classes: &[(BTreeSet<usize>, usize)],
            start: usize,
            room: usize,
            chosen: &mut Vec<usize>,
            out: &mut Vec<FiniteAction>,
        ) {
            if !chosen.is_empty() {
                let parts: Vec<BTreeSet<usize>> = chosen.iter().map(|&i| classes[i].0.clone()).collect();
                out.push(g.coset_action(&parts));
            }
            for i in start..classes.len() {
                if classes[i].1 <= room {
                    chosen.push(i);
                    rec(g, classes, i, room - classes[i].1, chosen, out);
                    chosen.pop();
                }
            }
        }
        rec(self, &classes, 0, max_points, &mut chosen, &mut out);
        out
    }
}

/// The fourteen groups of order at most 8.
pub fn small_groups() -> Vec<SmallGroup> {
    let z = SmallGroup::cyclic;
    vec![
        z(1),
        z(2),
        z(3),
        z(4),
        z(5),
        z(6),
        z(7),
        z(8),
        SmallGroup::product(&z(2), &z(2)),
        SmallGroup::product(&z(2), &z(4)),
        SmallGroup::product(&SmallGroup::product(&z(2), &z(2)), &z(2)),
        SmallGroup::symmetric3(),
        SmallGroup::dihedral4(),
        SmallGroup::quaternion(),
    ]
}

/// All actions of all small groups on at most `max_points` points.
pub fn corpus(max_points: usize) -> Vec<(String, FiniteAction)> {
    small_groups()
        .into_iter()
        .flat_map(|g| {
            let name = g.name.clone();
            g.actions(max_points).into_iter().map(move |a| (name.clone(), a))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_subgroups() {
        let groups = small_groups();
        assert_eq!(groups.len(), 14);
        let orders: Vec<usize> = groups.iter().map(SmallGroup::order).collect();
        assert_eq!(orders, [1, 2, 3, 4, 5, 6, 7, 8, 4, 8, 8, 6, 8, 8]);
        let count = |name: &str| groups.iter().find(|g| g.name == name).unwrap().subgroups().len();
        assert_eq!(count("S3"), 6);
        assert_eq!(count("D4"), 10);
        assert_eq!(count("Q8"), 6);
        assert_eq!(count("Z2xZ2xZ2"), 16);
        let classes = |name: &str| groups.iter().find(|g| g.name == name).unwrap().subgroup_classes().len();
        assert_eq!(classes("S3"), 4);
        assert_eq!(classes("D4"), 8);
    }

    #[test]
    fn regular_actions_are_free() {
        for g in small_groups() {
            let a = g.regular_action();
            assert!(a.is_free(), "{}", g.name);
            assert_eq!(a.orbits().blocks.len(), 1);
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = SmallGroup::quaternion();
        let (i, j, k, m1) = (1, 2, 3, 4);
        assert_eq!(q.mul[i][j], k);
        assert_eq!(q.mul[j][i], k + 4);
        assert_eq!(q.mul[i][i], m1);
        assert_eq!(q.mul[q.mul[i][j]][k], m1);
    }
}
