//! Finite simple undirected graphs over named nodes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate node name `{0}`")]
    DuplicateNode(String),
    #[error("edge endpoint `{0}` is not a node")]
    UnknownEndpoint(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("{n} nodes exceeds the enumeration limit of {max}")]
    TooManyNodes { n: usize, max: usize },
}

/// A simple undirected graph. Node order is preserved for display; equality
/// compares node-name sets and edge sets only.
#[derive(Clone)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    /// Builds a graph from node names and name pairs. Repeated edges collapse.
    pub fn from_edges<S, P, Q>(names: &[S], edges: &[(P, Q)]) -> Result<Graph, GraphError>
    where
        S: AsRef<str>,
        P: AsRef<str>,
        Q: AsRef<str>,
    {
        let mut g = Graph::empty(names)?;
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let i = g.index_of(u).ok_or_else(|| GraphError::UnknownEndpoint(u.to_string()))?;
            let j = g.index_of(v).ok_or_else(|| GraphError::UnknownEndpoint(v.to_string()))?;
            if i == j {
                return Err(GraphError::SelfLoop(u.to_string()));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    /// Edgeless graph on `names`.
    pub fn empty<S: AsRef<str>>(names: &[S]) -> Result<Graph, GraphError> {
        let mut index = HashMap::with_capacity(names.len());
        let mut owned = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref().to_string();
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateNode(name));
            }
            owned.push(name);
        }
        let n = owned.len();
        Ok(Graph {
            names: owned,
            index,
            adj: vec![vec![false; n]; n],
        })
    }

    pub fn complete<S: AsRef<str>>(names: &[S]) -> Result<Graph, GraphError> {
        Ok(Graph::empty(names)?.complement())
    }

    /// Graph on nodes named `1..=n` with index-pair edges.
    pub fn numbered(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut g = Graph::empty(&names).expect("numbered names are distinct");
        for (i, j) in edges {
            assert!(i != j && i < n && j < n, "bad index edge ({i}, {j})");
            g.set_edge(i, j, true);
        }
        g
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        self.adj[i][j] = present;
        self.adj[j][i] = present;
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Adjacency by index.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    /// Adjacency by name; unknown names are never adjacent.
    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj[i][j],
            _ => false,
        }
    }

    /// Index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.names.len();
        (0..n).flat_map(move |i| ((i + 1)..n).filter(move |&j| self.adj[i][j]).map(move |j| (i, j)))
    }

    /// Index pairs `(i, j)`, `i < j`, that are not edges.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.names.len();
        (0..n).flat_map(move |i| ((i + 1)..n).filter(move |&j| !self.adj[i][j]).map(move |j| (i, j)))
    }

    /// Edges as name pairs with the lexicographically smaller name first.
    pub fn edge_names(&self) -> BTreeSet<(String, String)> {
        self.edges()
            .map(|(i, j)| {
                let (a, b) = (&self.names[i], &self.names[j]);
                if a <= b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                }
            })
            .collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&a| a).count()
    }

    /// Degrees sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.node_count()).map(|i| self.degree(i)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn is_complete(&self) -> bool {
        self.non_edges().next().is_none()
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges().next().is_none()
    }

    /// Same nodes, complementary edge set.
    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        let n = self.node_count();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    g.adj[i][j] = !self.adj[i][j];
                }
            }
        }
        g
    }

    /// Renames nodes through `rename`, keeping the structure.
    pub fn relabeled(&self, rename: impl Fn(&str) -> String) -> Result<Graph, GraphError> {
        let names: Vec<String> = self.names.iter().map(|n| rename(n)).collect();
        let mut g = Graph::empty(&names)?;
        g.adj = self.adj.clone();
        Ok(g)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count()
            && self.names.iter().all(|n| other.index.contains_key(n))
            && self.edge_names() == other.edge_names()
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.names)
            .field("edges", &self.edge_names())
            .finish()
    }
}

/// The 8-node graph H: nodes `1..=8`, complete bipartite between {1,2,7,8} and
/// {3,4,5,6}, plus the matching 1-2, 3-4, 5-6, 7-8. Every node has degree 5.
pub fn graph_h() -> Graph {
    let left = [1, 2, 7, 8];
    let right = [3, 4, 5, 6];
    let mut edges = vec![(1, 2), (3, 4), (5, 6), (7, 8)];
    for &a in &left {
        for &b in &right {
            edges.push((a, b));
        }
    }
    Graph::numbered(8, edges.into_iter().map(|(a, b)| (a - 1, b - 1)))
}

struct Matcher<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    order: Vec<usize>,
    sig1: Vec<(usize, Vec<usize>)>,
    sig2: Vec<(usize, Vec<usize>)>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNMAPPED: usize = usize::MAX;

fn signatures(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.node_count())
        .map(|v| {
            let mut nd: Vec<usize> = (0..g.node_count())
                .filter(|&u| g.adjacent(v, u))
                .map(|u| g.degree(u))
                .collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

impl<'a> Matcher<'a> {
    fn new(g1: &'a Graph, g2: &'a Graph) -> Self {
        let n = g1.node_count();
        // high-degree nodes first, then nodes adjacent to already placed ones
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = order.iter().filter(|&&u| g1.adjacent(u, v)).count();
                    (links, g1.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced node exists");
            placed[next] = true;
            order.push(next);
        }
        Matcher {
            g1,
            g2,
            order,
            sig1: signatures(g1),
            sig2: signatures(g2),
            map: vec![UNMAPPED; n],
            used: vec![false; n],
        }
    }

    fn consistent(&self, v: usize, w: usize, depth: usize) -> bool {
        self.sig1[v] == self.sig2[w]
            && self.order[..depth]
                .iter()
                .all(|&u| self.g1.adjacent(u, v) == self.g2.adjacent(self.map[u], w))
    }

    fn search(&mut self, depth: usize, on_found: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return on_found(&self.map);
        }
        let v = self.order[depth];
        for w in 0..self.g2.node_count() {
            if self.used[w] || !self.consistent(v, w, depth) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            let stop = self.search(depth + 1, on_found);
            self.used[w] = false;
            self.map[v] = UNMAPPED;
            if stop {
                return true;
            }
        }
        false
    }
}

fn quick_reject(g1: &Graph, g2: &Graph) -> bool {
    g1.node_count() != g2.node_count()
        || g1.edge_count() != g2.edge_count()
        || g1.degree_sequence() != g2.degree_sequence()
}

/// Index form of [`are_isomorphic`]: `map[i]` is the image in `g2` of node `i` of `g1`.
pub fn isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    if quick_reject(g1, g2) {
        return None;
    }
    let mut found = None;
    Matcher::new(g1, g2).search(0, &mut |m| {
        found = Some(m.to_vec());
        true
    });
    found
}

/// A node bijection `g1 → g2` preserving adjacency and non-adjacency, if any.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Option<BTreeMap<String, String>> {
    isomorphism(g1, g2).map(|m| {
        m.iter()
            .enumerate()
            .map(|(i, &j)| (g1.name(i).to_string(), g2.name(j).to_string()))
            .collect()
    })
}

/// True iff `map` (by index) sends the edges of `g1` exactly onto those of `g2`.
pub fn is_isomorphism(g1: &Graph, g2: &Graph, map: &[usize]) -> bool {
    let n = g1.node_count();
    if n != g2.node_count() || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in map {
        if w >= n || std::mem::replace(&mut seen[w], true) {
            return false;
        }
    }
    (0..n).all(|i| (0..n).all(|j| i == j || g1.adjacent(i, j) == g2.adjacent(map[i], map[j])))
}

/// Every automorphism of `g` as an index permutation, identity first.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    Matcher::new(g, g).search(0, &mut |m| {
        all.push(m.to_vec());
        false
    });
    all.sort();
    let id: Vec<usize> = (0..g.node_count()).collect();
    if let Some(p) = all.iter().position(|m| *m == id) {
        all.swap(0, p);
    }
    all
}

/// Default upper bound on `n` for [`enumerate_graphs`].
pub const MAX_ENUMERATION_NODES: usize = 7;

/// Yields one representative per isomorphism class of simple graphs on
/// `n` nodes named `1..=n`.
pub fn enumerate_graphs(n: usize) -> Result<GraphClasses, GraphError> {
    enumerate_graphs_up_to(n, MAX_ENUMERATION_NODES)
}

pub fn enumerate_graphs_up_to(n: usize, max: usize) -> Result<GraphClasses, GraphError> {
    if n > max {
        return Err(GraphError::TooManyNodes { n, max });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    Ok(GraphClasses {
        n,
        total: 1u64 << pairs.len(),
        pairs,
        next_mask: 0,
        seen: HashMap::new(),
    })
}

/// Streaming enumerator returned by [`enumerate_graphs`]. Labeled graphs are
/// generated by edge mask and deduplicated against earlier representatives
/// with the same edge count and degree sequence.
pub struct GraphClasses {
    n: usize,
    pairs: Vec<(usize, usize)>,
    total: u64,
    next_mask: u64,
    seen: HashMap<(usize, Vec<usize>), Vec<Graph>>,
}

impl Iterator for GraphClasses {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next_mask < self.total {
            let mask = self.next_mask;
            self.next_mask += 1;
            let g = Graph::numbered(
                self.n,
                self.pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &p)| p),
            );
            let key = (mask.count_ones() as usize, g.degree_sequence());
            let bucket = self.seen.entry(key).or_default();
            if bucket.iter().any(|r| isomorphism(r, &g).is_some()) {
                continue;
            }
            bucket.push(g.clone());
            return Some(g);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3(names: [&str; 3]) -> Graph {
        Graph::complete(&names).unwrap()
    }

    #[test]
    fn builds_from_edge_list() {
        let g = Graph::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "a")]).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
        let single = Graph::from_edges::<_, &str, &str>(&["a"], &[]).unwrap();
        assert_eq!((single.node_count(), single.edge_count()), (1, 0));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::from_edges(&["a", "b"], &[("a", "z")]).unwrap_err(),
            GraphError::UnknownEndpoint("z".into())
        );
        assert_eq!(
            Graph::from_edges(&["a", "b"], &[("a", "a")]).unwrap_err(),
            GraphError::SelfLoop("a".into())
        );
        assert_eq!(
            Graph::from_edges::<_, &str, &str>(&["a", "a"], &[]).unwrap_err(),
            GraphError::DuplicateNode("a".into())
        );
    }

    #[test]
    fn canonical_edge_names() {
        let g = Graph::from_edges(&["b", "a"], &[("b", "a")]).unwrap();
        let e: Vec<_> = g.edge_names().into_iter().collect();
        assert_eq!(e, vec![("a".to_string(), "b".to_string())]);
    }

    #[test]
    fn h_matches_its_description() {
        let h = graph_h();
        assert!(h.has_edge("3", "1"));
        assert!(!h.has_edge("1", "7"));
        assert_eq!(h.edge_count(), 20);
        assert_eq!(h.degree_sequence(), vec![5; 8]);
        assert_eq!(h.complement().edge_count(), 8);
        // the complement of H is two disjoint 4-cycles
        let two_c4 = Graph::numbered(8, [(0, 6), (6, 1), (1, 7), (7, 0), (2, 4), (4, 3), (3, 5), (5, 2)]);
        assert_eq!(h.complement(), two_c4);
    }

    #[test]
    fn from_edges_reproduces_h() {
        let h = graph_h();
        let names: Vec<String> = (1..=8).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> = h.edge_names().into_iter().collect();
        assert_eq!(Graph::from_edges(&names, &edges).unwrap(), h);
    }

    #[test]
    fn complement_examples() {
        let k4 = Graph::complete(&["a", "b", "c", "d"]).unwrap();
        assert!(k4.complement().is_edgeless());
        let e3 = Graph::empty(&["a", "b", "c"]).unwrap();
        assert_eq!(e3.complement(), k3(["a", "b", "c"]));
    }

    #[test]
    fn isomorphism_examples() {
        let a = k3(["a", "b", "c"]);
        let b = k3(["x", "y", "z"]);
        let m = are_isomorphic(&a, &b).expect("K3 ≅ K3");
        assert_eq!(m.len(), 3);
        let p3 = Graph::from_edges(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        assert!(are_isomorphic(&p3, &b).is_none());

        let h = graph_h();
        let swapped = h
            .relabeled(|n| match n {
                "1" => "2".into(),
                "2" => "1".into(),
                other => other.into(),
            })
            .unwrap();
        let map = isomorphism(&h, &swapped).expect("1 and 2 are twins");
        assert!(is_isomorphism(&h, &swapped, &map));
    }

    #[test]
    fn rejects_same_degree_sequence_non_isomorphic() {
        // C6 versus two triangles: both 2-regular on 6 nodes
        let c6 = Graph::numbered(6, (0..6).map(|i| (i, (i + 1) % 6)));
        let two_k3 = Graph::numbered(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert!(isomorphism(&c6, &two_k3).is_none());
    }

    #[test]
    fn h_has_128_automorphisms() {
        let auts = automorphisms(&graph_h());
        assert_eq!(auts.len(), 128);
        assert_eq!(auts[0], (0..8).collect::<Vec<_>>());
        assert!(auts.iter().all(|m| is_isomorphism(&graph_h(), &graph_h(), m)));
    }

    /// Burnside: classes = (1/n!) * sum over node permutations of
    /// 2^(number of cycles the permutation induces on unordered pairs).
    fn burnside_class_count(n: usize) -> u64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        let all = perms(n);
        let total: u64 = all
            .iter()
            .map(|p| {
                let mut seen = vec![false; pairs.len()];
                let mut cycles = 0;
                for start in 0..pairs.len() {
                    if seen[start] {
                        continue;
                    }
                    cycles += 1;
                    let mut k = start;
                    while !seen[k] {
                        seen[k] = true;
                        let (a, b) = pairs[k];
                        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                        k = pairs.iter().position(|&q| q == (x, y)).unwrap();
                    }
                }
                1u64 << cycles
            })
            .sum();
        total / all.len() as u64
    }

    #[test]
    fn class_counts_match_burnside() {
        for n in 1..=5 {
            let streamed = enumerate_graphs(n).unwrap().count() as u64;
            assert_eq!(streamed, burnside_class_count(n), "n = {n}");
        }
        assert_eq!(enumerate_graphs(3).unwrap().count(), 4);
        assert_eq!(enumerate_graphs(4).unwrap().count(), 11);
    }

    #[test]
    fn enumeration_guard() {
        assert_eq!(
            enumerate_graphs(8).err(),
            Some(GraphError::TooManyNodes { n: 8, max: 7 })
        );
    }
}
