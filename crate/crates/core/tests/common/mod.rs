//! Random generators and property checks shared by the property suite and
//! the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::Ratio;
use pcg_core::threshold::TtInstance;
use pcg_core::tree::{leaf_distance_matrix, mlpg_eval, normalize_tree, pcg_eval, PcgWitness, WeightedTree};
use pcg_core::{tt_realize, Rational};
use rand::Rng;

pub type Q = Ratio<i64>;

pub fn big(v: &Q) -> Rational {
    Rational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

/// Random tree whose nodes have degree at most `max_degree`; every degree-1
/// node is a labeled leaf. Weights are `p/q` with `q ≤ 6`, zero allowed.
pub fn random_tree<R: Rng>(rng: &mut R, nodes: usize, max_degree: usize) -> WeightedTree<Rational> {
    assert!(nodes >= 2 && max_degree >= 2);
    let mut degree = vec![0usize; nodes];
    let mut edges = Vec::with_capacity(nodes - 1);
    for v in 1..nodes {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < max_degree).collect();
        let u = open[rng.gen_range(0..open.len())];
        degree[u] += 1;
        degree[v] += 1;
        let q = rng.gen_range(1..=6i64);
        let p = rng.gen_range(0..=10 * q);
        edges.push((format!("v{u}"), format!("v{v}"), big(&Q::new(p, q))));
    }
    let names: Vec<String> = (0..nodes).map(|v| format!("v{v}")).collect();
    let leaves = (0..nodes)
        .filter(|&v| degree[v] == 1)
        .map(|v| (format!("v{v}"), format!("g{v}")))
        .collect();
    WeightedTree::new(names, edges, leaves).expect("random construction is a tree")
}

/// A random witness whose bounds are drawn from the tree's own distances, so
/// boundary cases occur often.
pub fn random_witness<R: Rng>(rng: &mut R, nodes: usize, max_degree: usize) -> PcgWitness<Rational> {
    let tree = random_tree(rng, nodes, max_degree);
    let m = leaf_distance_matrix(&tree);
    let n = m.len();
    let mut pick = || m.at(rng.gen_range(0..n), rng.gen_range(0..n)).clone();
    let (a, b) = (pick(), pick());
    let (dmin, dmax) = if a <= b { (a, b) } else { (b, a) };
    PcgWitness::new(tree, dmin, dmax).expect("distances are nonnegative")
}

pub fn random_int_tt<R: Rng>(rng: &mut R) -> TtInstance<Q> {
    let n = rng.gen_range(3..=12usize);
    let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
    let g = (0..n).map(|_| Q::from_integer(rng.gen_range(1..=20))).collect();
    let t = (0..n).map(|_| Q::from_integer(rng.gen_range(1..=20))).collect();
    TtInstance::new(&names, g, t).expect("positive values")
}

/// Values `p/q` in `(0, 20]` with denominators `q ≤ 12`.
pub fn random_rational_tt<R: Rng>(rng: &mut R) -> TtInstance<Q> {
    let n = rng.gen_range(3..=12usize);
    let names: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
    let mut value = || {
        let q = rng.gen_range(1..=12i64);
        Q::new(rng.gen_range(1..=20 * q), q)
    };
    let g = (0..n).map(|_| value()).collect();
    let t = (0..n).map(|_| value()).collect();
    TtInstance::new(&names, g, t).expect("positive values")
}

/// For every quadruple of leaves, the two largest of the three pair sums agree.
pub fn four_point_holds(tree: &WeightedTree<Rational>) -> Result<(), String> {
    let m = leaf_distance_matrix(tree);
    let n = m.len();
    let d = |i: usize, j: usize| m.at(i, j).clone();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for e in (c + 1)..n {
                    let mut s = [
                        d(a, b) + d(c, e),
                        d(a, c) + d(b, e),
                        d(a, e) + d(b, c),
                    ];
                    s.sort();
                    if s[1] != s[2] {
                        return Err(format!("four-point condition fails on leaves {a},{b},{c},{e}: {s:?}"));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn scale_invariant(w: &PcgWitness<Rational>, lambda: &Rational) -> Result<(), String> {
    if pcg_eval(&w.scaled(lambda)) == pcg_eval(w) {
        Ok(())
    } else {
        Err(format!("scaling by {lambda} changes the realized graph"))
    }
}

pub fn normalize_preserves(tree: &WeightedTree<Rational>) -> Result<(), String> {
    let norm = normalize_tree(tree).map_err(|e| e.to_string())?;
    if !norm.is_binary() {
        return Err("normalized tree is not binary".into());
    }
    if leaf_distance_matrix(&norm).by_label() != leaf_distance_matrix(tree).by_label() {
        return Err("normalization changed a leaf distance".into());
    }
    Ok(())
}

/// `mlpg(T, dmin) = pcg(T, dmin, dmax)` for a witness whose `dmax` bounds
/// every leaf distance.
pub fn mlpg_agrees<T: pcg_core::Scalar>(w: &PcgWitness<T>) -> Result<(), String> {
    let max = leaf_distance_matrix(&w.tree).max();
    if max > w.dmax {
        return Err("dmax is below the largest leaf distance".into());
    }
    if mlpg_eval(&w.tree, &w.dmin) != pcg_eval(w) {
        return Err("mlpg and pcg readings differ".into());
    }
    Ok(())
}

/// `tt_realize` recomputed from the definition on exact rationals.
pub fn realize_oracle(inst: &TtInstance<Q>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..inst.len() {
        for j in (i + 1)..inst.len() {
            let lhs = inst.g()[i] + inst.g()[j];
            let rhs = inst.t()[i].min(inst.t()[j]);
            if lhs >= rhs {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn realize_matches_oracle(inst: &TtInstance<Q>) -> bool {
    let g = tt_realize(inst);
    let expected = realize_oracle(inst);
    g.edge_count() == expected.len() && expected.iter().all(|&(i, j)| g.adjacent(i, j))
}
