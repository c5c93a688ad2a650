//! The ball tree of a finite ultrametric space, built from a distance
//! function alone, with canonical signatures for isomorphism tests.

use std::collections::BTreeMap;

use crate::value::NormValue;

#[derive(Debug, Clone)]
pub struct Node {
    /// Diameter of the ball; 0 for a single point.
    pub level: NormValue,
    pub members: Vec<usize>,
    pub children: Vec<usize>,
    pub signature: String,
}

#[derive(Debug, Clone)]
pub struct Dendrogram {
    pub nodes: Vec<Node>,
    pub root: usize,
}

impl Dendrogram {
    /// `dist` must be an ultrametric on `0..n`, with `n ≥ 1`.
    pub fn build(n: usize, dist: impl Fn(usize, usize) -> NormValue) -> Self {
        assert!(n > 0, "empty metric space");
        let mut nodes = Vec::new();
        let root = Self::grow(&mut nodes, (0..n).collect(), &dist);
        Dendrogram { nodes, root }
    }

    fn grow(nodes: &mut Vec<Node>, members: Vec<usize>, dist: &impl Fn(usize, usize) -> NormValue) -> usize {
        if members.len() == 1 {
            nodes.push(Node { level: NormValue::ZERO, members, children: vec![], signature: "()".into() });
            return nodes.len() - 1;
        }
        let level =
            members.iter().flat_map(|a| members.iter().map(move |b| (*a, *b))).map(|(a, b)| dist(a, b)).max().unwrap();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &m in &members {
            match groups.iter_mut().find(|g| dist(g[0], m) < level) {
                Some(g) => g.push(m),
                None => groups.push(vec![m]),
            }
        }
        let children: Vec<usize> = groups.into_iter().map(|g| Self::grow(nodes, g, dist)).collect();
        let mut sigs: Vec<&str> = children.iter().map(|c| nodes[*c].signature.as_str()).collect();
        sigs.sort_unstable();
        let signature = format!("({}:{})", level, sigs.join(","));
        nodes.push(Node { level, members, children, signature });
        nodes.len() - 1
    }

    pub fn signature(&self) -> &str {
        &self.nodes[self.root].signature
    }

    /// The leaf node holding point `x`, and the path from the root to it.
    pub fn path_to(&self, x: usize) -> Vec<usize> {
        let mut path = vec![self.root];
        let mut cur = self.root;
        while !self.nodes[cur].children.is_empty() {
            cur = *self.nodes[cur]
                .children
                .iter()
                .find(|c| self.nodes[**c].members.contains(&x))
                .expect("point belongs to some child");
            path.push(cur);
        }
        path
    }

    /// Children of `node` grouped by signature, in signature order.
    pub fn child_groups(&self, node: usize) -> BTreeMap<&str, Vec<usize>> {
        let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for c in &self.nodes[node].children {
            groups.entry(self.nodes[*c].signature.as_str()).or_default().push(*c);
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_space() {
        // 0 and 1 at distance 1, both at distance 2 from 2.
        let d = |a: usize, b: usize| {
            if a == b {
                NormValue::ZERO
            } else if a + b == 1 {
                NormValue::ONE
            } else {
                NormValue::integer(2)
            }
        };
        let t = Dendrogram::build(3, d);
        assert_eq!(t.nodes[t.root].level, NormValue::integer(2));
        assert_eq!(t.nodes[t.root].children.len(), 2);
        assert_eq!(t.signature(), "(2:(),(1:(),()))");
        assert_eq!(t.path_to(1).len(), 3);
    }

    #[test]
    fn isometric_spaces_share_signatures() {
        let a = Dendrogram::build(4, |x, y| {
            if x == y {
                NormValue::ZERO
            } else if x / 2 == y / 2 {
                NormValue::ONE
            } else {
                NormValue::integer(3)
            }
        });
        let b = Dendrogram::build(4, |x, y| {
            if x == y {
                NormValue::ZERO
            } else if x % 2 == y % 2 {
                NormValue::ONE
            } else {
                NormValue::integer(3)
            }
        });
        assert_eq!(a.signature(), b.signature());
    }
}
