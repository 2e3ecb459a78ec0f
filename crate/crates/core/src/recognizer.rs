//! Exhaustive PCG recognition for small graphs.
//!
//! A graph on `n` nodes is a PCG iff some unrooted binary tree with the nodes
//! as leaves admits nonnegative weights and bounds realizing it (degree-2
//! nodes contract and high-degree nodes split with zero-weight edges, see
//! [`normalize_tree`](crate::tree::normalize_tree)). For one topology the
//! disjunction "non-edge distance is below dmin or above dmax" is split into
//! LOW/HIGH labelings, each of which is a linear system with strict
//! inequalities decided exactly by slack maximization under `dmax = 1`.
//!
//! `dmax = 0` witnesses are not lost: they realize disjoint unions of cliques,
//! which also have witnesses with positive bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{automorphisms, Graph};
use crate::lp::{Constraint, LinearForm, LpError, Relation, StrictConstraint, StrictOutcome, StrictSystem};
use crate::tree::{pcg_eval, PcgWitness, WeightedTree};
use crate::Rational;

/// Default largest graph the recognizer accepts.
pub const MAX_RECOGNITION_NODES: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizeError {
    #[error("recognition needs between {min} and {max} nodes, got {n}")]
    Guard { n: usize, min: usize, max: usize },
    #[error("topology has {leaves} leaves but the graph has {nodes} nodes")]
    LabelMismatch { leaves: usize, nodes: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// An unrooted tree on leaves `0..n` whose internal nodes `n..2n-2` all have
/// degree 3. Leaf `i` stands for graph node `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    leaves: usize,
    edges: Vec<(usize, usize)>,
}

/// `(2n-5)!!`, the number of unrooted binary topologies on `n ≥ 3` labeled leaves.
pub fn topology_count(n: usize) -> u64 {
    (3..n).map(|k| (2 * k - 3) as u64).product()
}

impl Topology {
    /// The topology with mixed-radix index `index`: leaf `k ≥ 3` is inserted
    /// into edge `digit_k` of the tree built from leaves `0..k`.
    pub fn from_index(n: usize, mut index: u64) -> Topology {
        assert!(n >= 3, "topologies need at least three leaves");
        let mut edges = vec![(0, n), (1, n), (2, n)];
        for k in 3..n {
            let radix = (2 * k - 3) as u64;
            let e = (index % radix) as usize;
            index /= radix;
            let internal = n + k - 2;
            let (a, b) = edges[e];
            edges[e] = (a, internal);
            edges.push((internal, b));
            edges.push((internal, k));
        }
        Topology { leaves: n, edges }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn node_count(&self) -> usize {
        2 * self.leaves - 2
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// For every node, the set of edges on its path to leaf 0, as a bitmask.
    fn root_paths(&self) -> Vec<u64> {
        let nodes = self.node_count();
        let mut adj = vec![Vec::new(); nodes];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        let mut mask = vec![0u64; nodes];
        let mut stack = vec![(0usize, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            for &(u, k) in &adj[v] {
                if u != parent {
                    mask[u] = mask[v] | 1 << k;
                    stack.push((u, v));
                }
            }
        }
        mask
    }

    /// Edge masks of the leaf-to-leaf paths, row-major `n × n`.
    pub fn path_masks(&self) -> Vec<u64> {
        let root = self.root_paths();
        let n = self.leaves;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = root[i] ^ root[j];
            }
        }
        out
    }

    /// Leaf bipartitions induced by the edges, each as the side avoiding leaf 0,
    /// sorted. Two topologies are equal iff their split lists are.
    pub fn splits(&self) -> Vec<u32> {
        let root = self.root_paths();
        let mut s: Vec<u32> = (0..self.edges.len())
            .map(|k| {
                (0..self.leaves)
                    .filter(|&i| root[i] >> k & 1 == 1)
                    .fold(0u32, |m, i| m | 1 << i)
            })
            .collect();
        s.sort_unstable();
        s
    }

    /// Splits of the topology obtained by renaming leaf `i` to `perm[i]`.
    fn permuted_splits(&self, splits: &[u32], perm: &[usize]) -> Vec<u32> {
        let full = (1u32 << self.leaves) - 1;
        let mut out: Vec<u32> = splits
            .iter()
            .map(|&s| {
                let img = (0..self.leaves)
                    .filter(|&i| s >> i & 1 == 1)
                    .fold(0u32, |m, i| m | 1 << perm[i]);
                if img & 1 == 1 {
                    full & !img
                } else {
                    img
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Streams every binary topology on `n` labeled leaves once, in index order.
pub struct Topologies {
    n: usize,
    next: u64,
    total: u64,
}

impl Iterator for Topologies {
    type Item = Topology;

    fn next(&mut self) -> Option<Topology> {
        (self.next < self.total).then(|| {
            self.next += 1;
            Topology::from_index(self.n, self.next - 1)
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Topologies {}

pub fn enumerate_topologies(n: usize) -> Result<Topologies, RecognizeError> {
    enumerate_topologies_up_to(n, MAX_RECOGNITION_NODES)
}

pub fn enumerate_topologies_up_to(n: usize, max: usize) -> Result<Topologies, RecognizeError> {
    if !(3..=max).contains(&n) {
        return Err(RecognizeError::Guard { n, min: 3, max });
    }
    Ok(Topologies {
        n,
        next: 0,
        total: topology_count(n),
    })
}

/// Progress callback: `(topologies done, topologies total)`.
pub type ProgressFn = Arc<dyn Fn(u64, u64) + Send + Sync>;

#[derive(Clone)]
pub struct RecognizeOptions {
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
    /// Examine one topology per orbit of the graph's automorphism group.
    pub symmetry: bool,
    /// Skip labelings that agree with an earlier infeasible core.
    pub prune_labelings: bool,
    pub max_nodes: usize,
    pub progress: Option<ProgressFn>,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions {
            jobs: 1,
            symmetry: false,
            prune_labelings: false,
            max_nodes: MAX_RECOGNITION_NODES,
            progress: None,
        }
    }
}

impl fmt::Debug for RecognizeOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecognizeOptions")
            .field("jobs", &self.jobs)
            .field("symmetry", &self.symmetry)
            .field("prune_labelings", &self.prune_labelings)
            .field("max_nodes", &self.max_nodes)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

/// Auditable record that no topology and no labeling admits a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub nodes: usize,
    /// Topologies whose labelings were decided.
    pub topologies: u64,
    /// Labelings decided by an LP solve.
    pub labelings: u64,
    /// Labelings skipped because a recorded infeasible core covered them.
    pub pruned: u64,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not-pcg nodes={} topologies={} labelings={}",
            self.nodes, self.topologies, self.labelings
        )?;
        if self.pruned > 0 {
            write!(f, " pruned={}", self.pruned)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Recognition {
    Witness {
        witness: PcgWitness<Rational>,
        /// Index of the topology that produced it; `None` for the
        /// complete/edgeless shortcuts.
        topology: Option<u64>,
    },
    NotPcg(Certificate),
}

impl Recognition {
    pub fn is_pcg(&self) -> bool {
        matches!(self, Recognition::Witness { .. })
    }

    pub fn witness(&self) -> Option<&PcgWitness<Rational>> {
        match self {
            Recognition::Witness { witness, .. } => Some(witness),
            Recognition::NotPcg(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Recognition::NotPcg(c) => Some(c),
            Recognition::Witness { .. } => None,
        }
    }
}

/// Outcome of deciding one topology.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyVerdict {
    pub witness: Option<PcgWitness<Rational>>,
    pub labelings: u64,
    pub pruned: u64,
}

fn int(v: i64) -> Ratio<i64> {
    Ratio::from_integer(v)
}

/// Reusable per-graph data for building labeling systems.
struct Problem<'g> {
    graph: &'g Graph,
    edges: Vec<(usize, usize)>,
    non_edges: Vec<(usize, usize)>,
}

impl<'g> Problem<'g> {
    fn new(graph: &'g Graph) -> Self {
        Problem {
            graph,
            edges: graph.edges().collect(),
            non_edges: graph.non_edges().collect(),
        }
    }

    /// Variables: one weight per topology edge, then dmin, then dmax.
    fn system(&self, topology: &Topology, masks: &[u64], labeling: u64) -> StrictSystem<i64> {
        let n = topology.leaf_count();
        let ne = topology.edges().len();
        let mut sys = StrictSystem::new();
        for k in 0..ne {
            sys.add_var(format!("w{k}"), true);
        }
        let dmin = sys.add_var("dmin", true);
        let dmax = sys.add_var("dmax", true);
        let path = |i: usize, j: usize, extra: (usize, i64)| -> LinearForm<Ratio<i64>> {
            let mask = masks[i * n + j];
            (0..ne)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| (k, int(1)))
                .chain(std::iter::once((extra.0, int(extra.1))))
                .collect()
        };
        for (k, &(i, j)) in self.non_edges.iter().enumerate() {
            sys.push(if labeling >> k & 1 == 1 {
                StrictConstraint::strict(path(i, j, (dmax, -1)), Relation::Ge, int(0))
            } else {
                StrictConstraint::strict(path(i, j, (dmin, -1)), Relation::Le, int(0))
            });
        }
        for &(i, j) in &self.edges {
            sys.push(StrictConstraint::weak(path(i, j, (dmin, -1)), Relation::Ge, int(0)));
            sys.push(StrictConstraint::weak(path(i, j, (dmax, -1)), Relation::Le, int(0)));
        }
        sys.normalization = Some(Constraint::new(LinearForm::new().term(dmax, int(1)), Relation::Eq, int(1)));
        sys
    }

    fn witness(&self, topology: &Topology, values: &[Rational]) -> PcgWitness<Rational> {
        let n = topology.leaf_count();
        let names = self.graph.names();
        let mut prefix = String::from("x");
        while names.iter().any(|g| g.starts_with(&prefix)) {
            prefix.insert(0, '_');
        }
        let node_name = |v: usize| {
            if v < n {
                names[v].clone()
            } else {
                format!("{prefix}{}", v - n)
            }
        };
        let nodes: Vec<String> = (0..topology.node_count()).map(node_name).collect();
        let edges: Vec<(usize, usize, Rational)> = topology
            .edges()
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| (a, b, values[k].clone()))
            .collect();
        let leaves = (0..n).map(|v| (v, names[v].clone())).collect();
        let tree = WeightedTree::from_parts(nodes, edges, leaves).expect("topologies are trees");
        let ne = topology.edges().len();
        PcgWitness::new(tree, values[ne].clone(), values[ne + 1].clone()).expect("bounds are nonnegative")
    }

    fn decide(&self, topology: &Topology, prune: bool) -> Result<TopologyVerdict, RecognizeError> {
        let masks = topology.path_masks();
        let m = self.non_edges.len();
        let mut cores: Vec<(u64, u64)> = Vec::new();
        let mut verdict = TopologyVerdict {
            witness: None,
            labelings: 0,
            pruned: 0,
        };
        for step in 0..(1u64 << m) {
            let labeling = step ^ (step >> 1);
            if prune && cores.iter().any(|&(mask, value)| labeling & mask == value) {
                verdict.pruned += 1;
                continue;
            }
            verdict.labelings += 1;
            match self.system(topology, &masks, labeling).solve()? {
                StrictOutcome::Feasible(values) => {
                    verdict.witness = Some(self.witness(topology, &values));
                    return Ok(verdict);
                }
                StrictOutcome::Infeasible { core } => {
                    if prune {
                        let mask = core
                            .iter()
                            .filter(|&&c| c < m)
                            .fold(0u64, |acc, &c| acc | 1 << c);
                        cores.push((mask, labeling & mask));
                    }
                }
            }
        }
        Ok(verdict)
    }
}

/// Decides whether `graph` has a witness on `topology` (leaf `i` is graph node `i`).
pub fn topology_feasible(graph: &Graph, topology: &Topology) -> Result<Option<PcgWitness<Rational>>, RecognizeError> {
    Ok(topology_verdict(graph, topology, false)?.witness)
}

/// [`topology_feasible`] with labeling counts and optional core pruning.
pub fn topology_verdict(graph: &Graph, topology: &Topology, prune: bool) -> Result<TopologyVerdict, RecognizeError> {
    if topology.leaf_count() != graph.node_count() {
        return Err(RecognizeError::LabelMismatch {
            leaves: topology.leaf_count(),
            nodes: graph.node_count(),
        });
    }
    let verdict = Problem::new(graph).decide(topology, prune)?;
    if let Some(w) = &verdict.witness {
        assert_eq!(&pcg_eval(w), graph, "witness does not realize the graph");
    }
    Ok(verdict)
}

fn unit_star_witness(graph: &Graph, bound: i64) -> PcgWitness<Rational> {
    let one = Rational::one();
    let mut center = String::from("c");
    while graph.names().iter().any(|n| *n == center) {
        center.push('\'');
    }
    let mut nodes = vec![center];
    nodes.extend(graph.names().iter().cloned());
    let edges = (1..nodes.len()).map(|v| (0, v, one.clone())).collect();
    let leaves = (1..nodes.len()).map(|v| (v, nodes[v].clone())).collect();
    let tree = WeightedTree::from_parts(nodes, edges, leaves).expect("a star is a tree");
    let b = Rational::from_integer(bound.into());
    PcgWitness::new(tree, b.clone(), b).expect("positive bounds")
}

/// Indices of the topologies to examine: all of them, or with `symmetry` the
/// smallest index of every orbit under the automorphisms of `graph`.
fn topology_schedule(graph: &Graph, symmetry: bool) -> Vec<u64> {
    let n = graph.node_count();
    let total = topology_count(n);
    if !symmetry {
        return (0..total).collect();
    }
    let auts = automorphisms(graph);
    if auts.len() == 1 {
        return (0..total).collect();
    }
    let splits: Vec<Vec<u32>> = (0..total).map(|i| Topology::from_index(n, i).splits()).collect();
    let index: HashMap<&[u32], u64> = splits.iter().enumerate().map(|(i, s)| (s.as_slice(), i as u64)).collect();
    let probe = Topology::from_index(n, 0);
    (0..total)
        .filter(|&i| {
            auts.iter().skip(1).all(|perm| {
                let image = probe.permuted_splits(&splits[i as usize], perm);
                index[image.as_slice()] >= i
            })
        })
        .collect()
}

/// Decides PCG membership of `graph` by exhausting binary topologies.
///
/// The answer (including which witness is returned) is independent of
/// `jobs`, `symmetry` and `prune_labelings`.
pub fn recognize_pcg(graph: &Graph, options: &RecognizeOptions) -> Result<Recognition, RecognizeError> {
    let n = graph.node_count();
    if !(3..=options.max_nodes).contains(&n) {
        return Err(RecognizeError::Guard {
            n,
            min: 3,
            max: options.max_nodes,
        });
    }
    if graph.is_complete() {
        return Ok(Recognition::Witness {
            witness: unit_star_witness(graph, 2),
            topology: None,
        });
    }
    if graph.is_edgeless() {
        return Ok(Recognition::Witness {
            witness: unit_star_witness(graph, 1),
            topology: None,
        });
    }

    let schedule = topology_schedule(graph, options.symmetry);
    let total = schedule.len() as u64;
    let problem = Problem::new(graph);
    let done = AtomicU64::new(0);
    let run_one = |i: u64| -> Result<TopologyVerdict, RecognizeError> {
        let v = problem.decide(&Topology::from_index(n, i), options.prune_labelings)?;
        let d = done.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(p) = &options.progress {
            p(d, total);
        }
        Ok(v)
    };

    let mut labelings = 0;
    let mut pruned = 0;
    let mut absorb = |i: u64, v: TopologyVerdict| -> Option<Recognition> {
        labelings += v.labelings;
        pruned += v.pruned;
        v.witness.map(|witness| {
            assert_eq!(&pcg_eval(&witness), graph, "witness does not realize the graph");
            Recognition::Witness {
                witness,
                topology: Some(i),
            }
        })
    };

    if options.jobs == 1 {
        for &i in &schedule {
            if let Some(found) = absorb(i, run_one(i)?) {
                return Ok(found);
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| RecognizeError::Pool(e.to_string()))?;
        let chunk = 64 * pool.current_num_threads();
        for block in schedule.chunks(chunk) {
            let verdicts: Vec<Result<TopologyVerdict, RecognizeError>> =
                pool.install(|| block.par_iter().map(|&i| run_one(i)).collect());
            for (&i, v) in block.iter().zip(verdicts) {
                if let Some(found) = absorb(i, v?) {
                    return Ok(found);
                }
            }
        }
    }
    Ok(Recognition::NotPcg(Certificate {
        nodes: n,
        topologies: total,
        labelings,
        pruned,
    }))
}
