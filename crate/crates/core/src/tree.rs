//! Edge-weighted trees with labeled leaves, leaf distances, and the PCG and
//! mLPG readings of a tree as a graph.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::graph::Graph;
use crate::num::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate tree node `{0}`")]
    DuplicateNode(String),
    #[error("unknown tree node `{0}`")]
    UnknownNode(String),
    #[error("edge {0}-{1} has negative weight")]
    NegativeWeight(String, String),
    #[error("self-loop at tree node `{0}`")]
    SelfLoop(String),
    #[error("edges do not form a tree: {0}")]
    NotATree(String),
    #[error("leaf `{0}` must have tree-degree 1")]
    LeafDegree(String),
    #[error("graph node `{0}` labels more than one leaf")]
    DuplicateLeafLabel(String),
    #[error("tree node `{0}` carries more than one label")]
    DoubleLabel(String),
    #[error("need at least {needed} labeled leaves, found {found}")]
    TooFewLeaves { needed: usize, found: usize },
    #[error("negative distance bound")]
    NegativeBound,
}

/// A tree with nonnegative edge weights whose degree-1 nodes may carry graph
/// node names.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree<T> {
    nodes: Vec<String>,
    edges: Vec<(usize, usize, T)>,
    /// `(tree node, graph node name)` in declaration order.
    leaves: Vec<(usize, String)>,
    adj: Adjacency,
}

/// Neighbour lists in one buffer: `(neighbour, edge index)` pairs of node `v`
/// live at `list[start[v]..start[v + 1]]`.
#[derive(Debug, Clone, PartialEq)]
struct Adjacency {
    start: Vec<usize>,
    list: Vec<(usize, usize)>,
}

impl Adjacency {
    fn new(n: usize, edges: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut start = vec![0; n + 1];
        for (i, j) in edges.clone() {
            start[i + 1] += 1;
            start[j + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut list = vec![(0, 0); start[n]];
        for (k, (i, j)) in edges.enumerate() {
            list[fill[i]] = (j, k);
            fill[i] += 1;
            list[fill[j]] = (i, k);
            fill[j] += 1;
        }
        Adjacency { start, list }
    }

    fn of(&self, v: usize) -> &[(usize, usize)] {
        &self.list[self.start[v]..self.start[v + 1]]
    }
}

impl<T: Scalar> WeightedTree<T> {
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(String, String, T)>,
        leaves: Vec<(String, String)>,
    ) -> Result<Self, TreeError> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(TreeError::DuplicateNode(n.clone()));
            }
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| TreeError::UnknownNode(n.to_string()));
        let mut by_index = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            let (i, j) = (lookup(&u)?, lookup(&v)?);
            if i == j {
                return Err(TreeError::SelfLoop(u));
            }
            if w.is_negative() {
                return Err(TreeError::NegativeWeight(u, v));
            }
            by_index.push((i, j, w));
        }
        let mut by_leaf = Vec::with_capacity(leaves.len());
        for (node, label) in leaves {
            by_leaf.push((lookup(&node)?, label));
        }
        Self::from_parts(nodes, by_index, by_leaf)
    }

    pub(crate) fn from_parts(
        nodes: Vec<String>,
        edges: Vec<(usize, usize, T)>,
        leaves: Vec<(usize, String)>,
    ) -> Result<Self, TreeError> {
        let n = nodes.len();
        if n == 0 {
            return Err(TreeError::NotATree("no nodes".into()));
        }
        if edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!("{} nodes but {} edges", n, edges.len())));
        }
        for (i, j, w) in &edges {
            if w.is_negative() {
                return Err(TreeError::NegativeWeight(nodes[*i].clone(), nodes[*j].clone()));
            }
        }
        let adj = Adjacency::new(n, edges.iter().map(|(i, j, _)| (*i, *j)));
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in adj.of(v) {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        if reached != n {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        let mut labels = HashSet::new();
        let mut labeled_nodes = HashSet::new();
        for (node, label) in &leaves {
            if adj.of(*node).len() != 1 {
                return Err(TreeError::LeafDegree(nodes[*node].clone()));
            }
            if !labels.insert(label.as_str()) {
                return Err(TreeError::DuplicateLeafLabel(label.clone()));
            }
            if !labeled_nodes.insert(*node) {
                return Err(TreeError::DoubleLabel(nodes[*node].clone()));
            }
        }
        Ok(WeightedTree {
            nodes,
            edges,
            leaves,
            adj,
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Edges as `(node index, node index, weight)`.
    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    /// Labeled leaves as `(tree node index, graph node name)`.
    pub fn leaves(&self) -> &[(usize, String)] {
        &self.leaves
    }

    pub fn leaf_names(&self) -> Vec<String> {
        self.leaves.iter().map(|(_, l)| l.clone()).collect()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj.of(node).len()
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.adj.of(node).iter().map(move |&(u, k)| (u, &self.edges[k].2))
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &T) -> Self {
        let mut t = self.clone();
        for e in &mut t.edges {
            e.2 = e.2.clone() * factor.clone();
        }
        t
    }

    /// True iff every node that is not a labeled leaf has degree exactly 3
    /// and every degree-1 node is labeled.
    pub fn is_binary(&self) -> bool {
        let labeled: HashSet<usize> = self.leaves.iter().map(|(v, _)| *v).collect();
        (0..self.nodes.len()).all(|v| {
            if labeled.contains(&v) {
                true
            } else {
                self.degree(v) == 3
            }
        })
    }

    /// Adjacency of the tree with every unlabeled degree-2 node contracted
    /// away (weights summed), plus the map from tree node to contracted node.
    fn contracted(&self) -> (Vec<usize>, Vec<Vec<(usize, T)>>) {
        let n = self.nodes.len();
        let mut keep = vec![false; n];
        for v in 0..n {
            keep[v] = self.adj.of(v).len() != 2;
        }
        for (v, _) in &self.leaves {
            keep[*v] = true;
        }
        if !keep.iter().any(|&k| k) {
            keep[0] = true;
        }
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if keep[v] {
                id[v] = count;
                count += 1;
            }
        }
        let mut adj = vec![Vec::new(); count];
        for v in 0..n {
            if !keep[v] {
                continue;
            }
            for &(first, k) in self.adj.of(v) {
                let (mut prev, mut cur) = (v, first);
                // long chains are mostly runs of one weight, summed as w * run
                let mut total = T::zero();
                let mut run = (&self.edges[k].2, 1usize);
                while !keep[cur] {
                    let &(next, k2) = self
                        .adj
                        .of(cur)
                        .iter()
                        .find(|(u, _)| *u != prev)
                        .expect("unkept nodes have degree 2");
                    let w = &self.edges[k2].2;
                    if w == run.0 {
                        run.1 += 1;
                    } else {
                        total = total + times(run.0, run.1);
                        run = (w, 1);
                    }
                    prev = cur;
                    cur = next;
                }
                adj[id[v]].push((id[cur], total + times(run.0, run.1)));
            }
        }
        (id, adj)
    }
}

/// `w` added to itself `n` times, by doubling.
fn times<T: Scalar>(w: &T, n: usize) -> T {
    let mut out = T::zero();
    for bit in (0..usize::BITS - n.leading_zeros()).rev() {
        out = out.clone() + out;
        if n >> bit & 1 == 1 {
            out = out + w.clone();
        }
    }
    out
}

fn distances_from<T: Scalar>(adj: &[Vec<(usize, T)>], source: usize) -> Vec<T> {
    let mut dist = vec![T::zero(); adj.len()];
    let mut stack = vec![(source, usize::MAX)];
    while let Some((v, parent)) = stack.pop() {
        for (u, w) in &adj[v] {
            if *u != parent {
                dist[*u] = dist[v].clone() + w.clone();
                stack.push((*u, v));
            }
        }
    }
    dist
}

/// Builder that declares nodes on first mention.
#[derive(Debug, Clone)]
pub struct TreeBuilder<T> {
    nodes: Vec<String>,
    edges: Vec<(String, String, T)>,
    leaves: Vec<(String, String)>,
}

impl<T: Scalar> Default for TreeBuilder<T> {
    fn default() -> Self {
        TreeBuilder {
            nodes: Vec::new(),
            edges: Vec::new(),
            leaves: Vec::new(),
        }
    }
}

impl<T: Scalar> TreeBuilder<T> {
    pub fn new() -> Self {
        Self::default()
    }

    fn declare(&mut self, name: &str) {
        if !self.nodes.iter().any(|n| n == name) {
            self.nodes.push(name.to_string());
        }
    }

    pub fn node(mut self, name: &str) -> Self {
        self.declare(name);
        self
    }

    pub fn edge(mut self, u: &str, v: &str, weight: T) -> Self {
        self.declare(u);
        self.declare(v);
        self.edges.push((u.to_string(), v.to_string(), weight));
        self
    }

    /// Labels tree node `node` with graph node `label`.
    pub fn leaf(mut self, node: &str, label: &str) -> Self {
        self.declare(node);
        self.leaves.push((node.to_string(), label.to_string()));
        self
    }

    /// A pendant edge `center — name` whose leaf is labeled `name`.
    pub fn pendant(self, center: &str, name: &str, weight: T) -> Self {
        self.edge(center, name, weight).leaf(name, name)
    }

    pub fn build(self) -> Result<WeightedTree<T>, TreeError> {
        WeightedTree::new(self.nodes, self.edges, self.leaves)
    }
}

/// Star with one labeled pendant leaf per `(name, weight)`. The center is
/// named `c` unless a leaf already uses that name.
pub fn star<T: Scalar>(leaves: &[(&str, T)]) -> WeightedTree<T> {
    let mut center = String::from("c");
    while leaves.iter().any(|(n, _)| *n == center) {
        center.push('\'');
    }
    leaves
        .iter()
        .fold(TreeBuilder::new().node(&center), |b, (name, w)| b.pendant(&center, name, w.clone()))
        .build()
        .expect("a star is a tree")
}

/// Symmetric matrix of leaf-to-leaf path lengths, indexed by leaf label.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    names: Vec<String>,
    values: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.values[i * self.names.len() + j]
    }

    pub fn get(&self, u: &str, v: &str) -> Option<&T> {
        let i = self.names.iter().position(|n| n == u)?;
        let j = self.names.iter().position(|n| n == v)?;
        Some(self.at(i, j))
    }

    /// Largest entry (zero for fewer than two leaves).
    pub fn max(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |m, v| if *v > m { v.clone() } else { m })
    }

    /// Entries keyed by label pair, for comparisons independent of leaf order.
    pub fn by_label(&self) -> BTreeMap<(String, String), T> {
        let n = self.names.len();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                out.insert((self.names[i].clone(), self.names[j].clone()), self.at(i, j).clone());
            }
        }
        out
    }
}

pub fn leaf_distance_matrix<T: Scalar>(tree: &WeightedTree<T>) -> DistanceMatrix<T> {
    let n = tree.leaves.len();
    let mut values = vec![T::zero(); n * n];
    let (id, adj) = tree.contracted();
    for (i, (src, _)) in tree.leaves.iter().enumerate() {
        let dist = distances_from(&adj, id[*src]);
        for (j, (dst, _)) in tree.leaves.iter().enumerate() {
            values[i * n + j] = dist[id[*dst]].clone();
        }
    }
    DistanceMatrix {
        names: tree.leaf_names(),
        values,
    }
}

/// A tree with inclusive distance bounds `[dmin, dmax]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PcgWitness<T> {
    pub tree: WeightedTree<T>,
    pub dmin: T,
    pub dmax: T,
}

impl<T: Scalar> PcgWitness<T> {
    pub fn new(tree: WeightedTree<T>, dmin: T, dmax: T) -> Result<Self, TreeError> {
        if dmin.is_negative() || dmax.is_negative() {
            return Err(TreeError::NegativeBound);
        }
        Ok(PcgWitness { tree, dmin, dmax })
    }

    pub fn scaled(&self, factor: &T) -> Self {
        PcgWitness {
            tree: self.tree.scaled(factor),
            dmin: self.dmin.clone() * factor.clone(),
            dmax: self.dmax.clone() * factor.clone(),
        }
    }
}

fn graph_from_matrix<T: Scalar>(m: &DistanceMatrix<T>, edge: impl Fn(&T) -> bool) -> Graph {
    let mut g = Graph::empty(m.names()).expect("leaf labels are distinct");
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            if edge(m.at(i, j)) {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

/// Graph on the leaf labels with `{u, v}` an edge iff `dmin ≤ d(u, v) ≤ dmax`.
pub fn pcg_eval<T: Scalar>(witness: &PcgWitness<T>) -> Graph {
    let m = leaf_distance_matrix(&witness.tree);
    graph_from_matrix(&m, |d| witness.dmin <= *d && *d <= witness.dmax)
}

/// Graph on the leaf labels with `{u, v}` an edge iff `d(u, v) ≥ dmin`.
pub fn mlpg_eval<T: Scalar>(tree: &WeightedTree<T>, dmin: &T) -> Graph {
    let m = leaf_distance_matrix(tree);
    graph_from_matrix(&m, |d| d >= dmin)
}

/// True iff removing every degree-1 node leaves a path (or nothing).
pub fn is_caterpillar<T: Scalar>(tree: &WeightedTree<T>) -> bool {
    let n = tree.nodes.len();
    let keep: Vec<bool> = (0..n).map(|v| n == 1 || tree.degree(v) > 1).collect();
    let spine: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    // a subtree of a tree obtained by deleting leaves is connected; it is a
    // path iff no node keeps more than two spine neighbours
    spine
        .iter()
        .all(|&v| tree.adj.of(v).iter().filter(|(u, _)| keep[*u]).count() <= 2)
}

/// Rewrites `tree` into a tree with the same labeled leaves and identical leaf
/// distances in which every unlabeled node has degree 3: unlabeled pendant
/// nodes are pruned, degree-2 nodes are contracted (weights summed) and
/// high-degree nodes are split with zero-weight edges.
pub fn normalize_tree<T: Scalar>(tree: &WeightedTree<T>) -> Result<WeightedTree<T>, TreeError> {
    if tree.leaves.len() < 2 {
        return Err(TreeError::TooFewLeaves {
            needed: 2,
            found: tree.leaves.len(),
        });
    }
    let labeled: HashSet<usize> = tree.leaves.iter().map(|(v, _)| *v).collect();
    let mut names = tree.nodes.clone();
    let mut adj: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); names.len()];
    for (i, j, w) in &tree.edges {
        adj[*i].insert(*j, w.clone());
        adj[*j].insert(*i, w.clone());
    }
    let mut alive = vec![true; names.len()];

    let mut pending: Vec<usize> = (0..names.len()).collect();
    while let Some(v) = pending.pop() {
        if !alive[v] || labeled.contains(&v) {
            continue;
        }
        match adj[v].len() {
            0 | 1 => {
                alive[v] = false;
                let nbrs: Vec<usize> = adj[v].keys().copied().collect();
                for u in nbrs {
                    adj[u].remove(&v);
                    pending.push(u);
                }
                adj[v].clear();
            }
            2 => {
                let mut it = std::mem::take(&mut adj[v]).into_iter();
                let (a, wa) = it.next().expect("degree 2");
                let (b, wb) = it.next().expect("degree 2");
                alive[v] = false;
                adj[a].remove(&v);
                adj[b].remove(&v);
                let w = wa + wb;
                adj[a].insert(b, w.clone());
                adj[b].insert(a, w);
            }
            _ => {}
        }
    }

    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let fresh = |base: &str, taken: &mut HashSet<String>| {
        let mut k = 1;
        loop {
            let candidate = format!("{base}.{k}");
            if taken.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    };
    let mut v = 0;
    while v < names.len() {
        if alive[v] && !labeled.contains(&v) && adj[v].len() > 3 {
            let split = names.len();
            names.push(fresh(&names[v], &mut taken));
            alive.push(true);
            adj.push(BTreeMap::new());
            let moved: Vec<(usize, T)> = adj[v].iter().skip(2).map(|(u, w)| (*u, w.clone())).collect();
            for (u, w) in moved {
                adj[v].remove(&u);
                adj[u].remove(&v);
                adj[u].insert(split, w.clone());
                adj[split].insert(u, w);
            }
            adj[v].insert(split, T::zero());
            adj[split].insert(v, T::zero());
        }
        v += 1;
    }

    let remap: Vec<Option<usize>> = {
        let mut next = 0;
        alive
            .iter()
            .map(|&a| {
                a.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let out_names: Vec<String> = names
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(n, _)| n.clone())
        .collect();
    let mut edges = Vec::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for (u, w) in nbrs {
            if v < *u {
                edges.push((remap[v].expect("alive"), remap[*u].expect("alive"), w.clone()));
            }
        }
    }
    let leaves = tree
        .leaves
        .iter()
        .map(|(v, l)| (remap[*v].expect("labeled leaves survive"), l.clone()))
        .collect();
    WeightedTree::from_parts(out_names, edges, leaves)
}
