//! Threshold tolerance graphs and their caterpillar witnesses.

use std::collections::HashSet;

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::Graph;
use crate::num::{lcm_of_denominators, ExactInt, Scalar};
use crate::tree::{PcgWitness, WeightedTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TtError {
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("node {0:?} has a non-positive weight")]
    NonPositiveWeight(String),
    #[error("node {0:?} has a non-positive tolerance")]
    NonPositiveTolerance(String),
    #[error("{names} names but {g} weights and {t} tolerances")]
    LengthMismatch { names: usize, g: usize, t: usize },
}

/// Nodes with positive weights `g` and positive tolerances `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TtInstance<T> {
    names: Vec<String>,
    g: Vec<T>,
    t: Vec<T>,
}

impl<T: Scalar> TtInstance<T> {
    pub fn new<S: AsRef<str>>(names: &[S], g: Vec<T>, t: Vec<T>) -> Result<Self, TtError> {
        if names.len() != g.len() || names.len() != t.len() {
            return Err(TtError::LengthMismatch {
                names: names.len(),
                g: g.len(),
                t: t.len(),
            });
        }
        let mut seen = HashSet::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !seen.insert(n) {
                return Err(TtError::DuplicateNode(n.to_string()));
            }
            if !g[i].is_positive() {
                return Err(TtError::NonPositiveWeight(n.to_string()));
            }
            if !t[i].is_positive() {
                return Err(TtError::NonPositiveTolerance(n.to_string()));
            }
        }
        Ok(TtInstance {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            g,
            t,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn g(&self) -> &[T] {
        &self.g
    }

    pub fn t(&self) -> &[T] {
        &self.t
    }

    /// Every weight and tolerance multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &T) -> Self {
        assert!(factor.is_positive(), "scale factor must be positive");
        TtInstance {
            names: self.names.clone(),
            g: self.g.iter().map(|v| v.clone() * factor.clone()).collect(),
            t: self.t.iter().map(|v| v.clone() * factor.clone()).collect(),
        }
    }
}

fn min<T: Scalar>(a: &T, b: &T) -> T {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Edge `{x, y}` iff `g(x) + g(y) ≥ min(t(x), t(y))`.
pub fn tt_realize<T: Scalar>(inst: &TtInstance<T>) -> Graph {
    let n = inst.len();
    let mut graph = Graph::empty(&inst.names).expect("instance names are distinct");
    for i in 0..n {
        for j in (i + 1)..n {
            if inst.g[i].clone() + inst.g[j].clone() >= min(&inst.t[i], &inst.t[j]) {
                graph.set_edge(i, j, true);
            }
        }
    }
    graph
}

/// An instance scaled to integer values, with the multiplier used.
#[derive(Debug, Clone, PartialEq)]
pub struct Integerized<I: ExactInt> {
    pub multiplier: I,
    pub instance: TtInstance<Ratio<I>>,
}

/// Multiplies every value by the lcm of all denominators.
pub fn integerize<I: ExactInt>(inst: &TtInstance<Ratio<I>>) -> Integerized<I> {
    let m = lcm_of_denominators(inst.g.iter().chain(&inst.t));
    let instance = inst.scaled(&Ratio::from_integer(m.clone()));
    debug_assert!(instance.g.iter().chain(&instance.t).all(|v| v.is_integer()));
    Integerized {
        multiplier: m,
        instance,
    }
}

/// A caterpillar witness together with the integerized data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TtWitness<I: ExactInt> {
    pub witness: PcgWitness<Ratio<I>>,
    pub integerized: Integerized<I>,
    /// Spine length, the largest integerized tolerance.
    pub k: I,
}

/// Caterpillar with spine `x1..xK`, spine edges `1/2`, and leaf `l_v` hanging
/// from `x_{t(v)}` with weight `g(v) + (K - t(v))/2`, after integerization.
/// Leaf distances are `g(u) + g(v) + K - min(t(u), t(v))`, so the bounds
/// `dmin = K`, `dmax = 2 max g + K` realize the instance.
pub fn tt_witness<I: ExactInt>(inst: &TtInstance<Ratio<I>>) -> TtWitness<I> {
    let integerized = integerize(inst);
    let int = &integerized.instance;
    let k = int
        .t
        .iter()
        .map(|v| v.to_integer())
        .max()
        .unwrap_or_else(I::one);
    let spine = k.to_usize().expect("spine length fits in memory");
    let half = Ratio::new(I::one(), I::one() + I::one());
    let kr = Ratio::from_integer(k.clone());

    let mut nodes: Vec<String> = (1..=spine).map(|i| format!("x{i}")).collect();
    let mut edges: Vec<(usize, usize, Ratio<I>)> = (1..spine).map(|i| (i - 1, i, half.clone())).collect();
    let mut leaves = Vec::with_capacity(int.len());
    for (v, name) in int.names.iter().enumerate() {
        let at = int.t[v].to_integer().to_usize().expect("tolerance at most K") - 1;
        let w = int.g[v].clone() + (kr.clone() - int.t[v].clone()) * half.clone();
        nodes.push(format!("l_{name}"));
        edges.push((at, nodes.len() - 1, w));
        leaves.push((nodes.len() - 1, name.clone()));
    }
    let tree = WeightedTree::from_parts(nodes, edges, leaves).expect("a caterpillar is a tree");
    let gmax = int.g.iter().fold(Ratio::zero(), |m, v| if *v > m { v.clone() } else { m });
    let dmax = gmax * Ratio::from_integer(I::one() + I::one()) + kr.clone();
    TtWitness {
        witness: PcgWitness::new(tree, kr, dmax).expect("positive bounds"),
        integerized,
        k,
    }
}

/// The threshold instance `a` with constant `tconst` as a TT instance: every
/// weight is shifted by `c` and the tolerance by `2c`, with `c` large enough
/// to make all values positive.
pub fn threshold_instance<T: Scalar, S: AsRef<str>>(names: &[S], a: &[T], tconst: &T) -> Result<TtInstance<T>, TtError> {
    let two = T::one() + T::one();
    let mut c = T::zero();
    for v in a {
        if -v.clone() > c {
            c = -v.clone();
        }
    }
    if -tconst.clone() / two.clone() > c {
        c = -tconst.clone() / two.clone();
    }
    c = c + T::one();
    let g = a.iter().map(|v| v.clone() + c.clone()).collect();
    let t = vec![tconst.clone() + two * c; a.len()];
    TtInstance::new(names, g, t)
}

/// Edge `{v, w}` iff `a_v + a_w ≥ tconst`.
pub fn threshold_realize<T: Scalar, S: AsRef<str>>(names: &[S], a: &[T], tconst: &T) -> Result<Graph, TtError> {
    Ok(tt_realize(&threshold_instance(names, a, tconst)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{is_caterpillar, leaf_distance_matrix, pcg_eval};

    type Q = Ratio<i64>;

    fn q(p: i64, d: i64) -> Q {
        Q::new(p, d)
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_integer(x)).collect()
    }

    fn edges(g: &Graph) -> Vec<(String, String)> {
        g.edge_names().into_iter().collect()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn realize_examples() {
        let i = TtInstance::new(&["a", "b"], ints(&[1, 1]), ints(&[2, 2])).unwrap();
        assert_eq!(edges(&tt_realize(&i)), vec![pair("a", "b")]);
        let i = TtInstance::new(&["a", "b", "c"], ints(&[1, 1, 3]), ints(&[2, 5, 5])).unwrap();
        assert_eq!(edges(&tt_realize(&i)), vec![pair("a", "b"), pair("a", "c")]);
        let i = TtInstance::new(&["a", "b", "c"], ints(&[1, 2, 3]), ints(&[7, 7, 7])).unwrap();
        assert!(tt_realize(&i).is_edgeless());
    }

    #[test]
    fn invalid_instances() {
        assert_eq!(
            TtInstance::new(&["a"], ints(&[0]), ints(&[1])).unwrap_err(),
            TtError::NonPositiveWeight("a".into())
        );
        assert_eq!(
            TtInstance::new(&["a"], ints(&[1]), vec![q(-1, 2)]).unwrap_err(),
            TtError::NonPositiveTolerance("a".into())
        );
        assert_eq!(
            TtInstance::new(&["a", "a"], ints(&[1, 1]), ints(&[1, 1])).unwrap_err(),
            TtError::DuplicateNode("a".into())
        );
    }

    #[test]
    fn integerize_examples() {
        let i = TtInstance::new(&["a", "b"], vec![q(1, 2), q(2, 3)], vec![q(3, 4), q(1, 1)]).unwrap();
        let z = integerize(&i);
        assert_eq!(z.multiplier, 12);
        assert_eq!(z.instance.g(), &ints(&[6, 8])[..]);
        assert_eq!(z.instance.t(), &ints(&[9, 12])[..]);
        assert_eq!(tt_realize(&z.instance), tt_realize(&i));

        let i = TtInstance::new(&["a", "b"], ints(&[3, 4]), ints(&[5, 6])).unwrap();
        let z = integerize(&i);
        assert_eq!(z.multiplier, 1);
        assert_eq!(z.instance, i);

        let i = TtInstance::new(&["a"], vec![q(1, 3)], vec![q(1, 3)]).unwrap();
        let z = integerize(&i);
        assert_eq!((z.instance.g()[0], z.instance.t()[0]), (q(1, 1), q(1, 1)));
    }

    #[test]
    fn witness_example() {
        let i = TtInstance::new(&["a", "b", "c"], ints(&[1, 1, 3]), ints(&[2, 5, 5])).unwrap();
        let w = tt_witness(&i);
        assert_eq!(w.k, 5);
        assert_eq!((w.witness.dmin, w.witness.dmax), (q(5, 1), q(11, 1)));
        let tree = &w.witness.tree;
        let la = tree.nodes().iter().position(|n| n == "l_a").unwrap();
        let (_, &(x, _, wa)) = tree.edges().iter().enumerate().find(|(_, e)| e.1 == la).unwrap();
        assert_eq!(tree.nodes()[x], "x2");
        assert_eq!(wa, q(5, 2));
        let m = leaf_distance_matrix(tree);
        assert_eq!(m.get("a", "b"), Some(&q(5, 1)));
        assert_eq!(m.get("a", "c"), Some(&q(7, 1)));
        assert_eq!(m.get("b", "c"), Some(&q(4, 1)));
        assert_eq!(pcg_eval(&w.witness), tt_realize(&i));
        assert!(is_caterpillar(tree));
        assert_eq!(tree.nodes().len(), 5 + 3);
    }

    #[test]
    fn witness_small_cases() {
        let i = TtInstance::new(&["a", "b"], ints(&[1, 1]), ints(&[2, 2])).unwrap();
        let w = tt_witness(&i);
        assert_eq!(leaf_distance_matrix(&w.witness.tree).get("a", "b"), Some(&q(2, 1)));
        assert!(pcg_eval(&w.witness).has_edge("a", "b"));

        let single = TtInstance::new(&["a"], ints(&[4]), ints(&[3])).unwrap();
        let w = tt_witness(&single);
        assert_eq!(w.witness.tree.nodes().len(), 4);
        assert!(pcg_eval(&w.witness).is_edgeless());

        let ones = TtInstance::new(&["a", "b", "c"], ints(&[1, 2, 3]), ints(&[1, 1, 1])).unwrap();
        let w = tt_witness(&ones);
        assert_eq!(w.k, 1);
        assert_eq!(w.witness.tree.nodes().len(), 4);
        assert!(is_caterpillar(&w.witness.tree));
        assert_eq!(pcg_eval(&w.witness), tt_realize(&ones));
    }

    #[test]
    fn empty_groups_keep_spine_nodes() {
        let i = TtInstance::new(&["a", "b"], ints(&[1, 1]), ints(&[1, 6])).unwrap();
        let w = tt_witness(&i);
        let names = w.witness.tree.nodes();
        for s in 1..=6 {
            assert!(names.contains(&format!("x{s}")));
        }
    }

    #[test]
    fn threshold_examples() {
        let g = threshold_realize(&["n1", "n2", "n3"], &ints(&[1, 1, 0]), &q(2, 1)).unwrap();
        assert_eq!(edges(&g), vec![pair("n1", "n2")]);
        let g = threshold_realize(&["n1", "n2", "n3"], &ints(&[5, 5, 5]), &q(1, 1)).unwrap();
        assert!(g.is_complete());
        let g = threshold_realize(&["n1", "n2", "n3", "n4"], &ints(&[3, 2, 1, 0]), &q(4, 1)).unwrap();
        assert_eq!(edges(&g), vec![pair("n1", "n2"), pair("n1", "n3")]);
        let g = threshold_realize(&["p", "q", "r"], &[q(-3, 2), q(-1, 1), q(5, 1)], &q(-5, 2)).unwrap();
        assert_eq!(edges(&g), vec![pair("p", "q"), pair("p", "r"), pair("q", "r")]);
    }

    #[test]
    fn float_realization() {
        let i = TtInstance::new(&["a", "b", "c"], vec![1.0, 1.0, 3.0], vec![2.0, 5.0, 5.0]).unwrap();
        assert_eq!(edges(&tt_realize(&i)), vec![pair("a", "b"), pair("a", "c")]);
    }
}
