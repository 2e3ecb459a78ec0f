//! Line-oriented text formats for graphs, trees and witnesses, threshold
//! tolerance instances and geometric models, plus DOT output.
//!
//! Every format ignores blank lines and text after `#`. Parse errors carry the
//! 1-based line and column of the offending token.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::Ratio;
use thiserror::Error;

use crate::geometry::{Dimension, GeometricModel, Shape};
use crate::graph::Graph;
use crate::num::{format_rational, parse_rational, ExactInt};
use crate::threshold::{threshold_instance, TtInstance};
use crate::tree::{PcgWitness, TreeError, WeightedTree};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

impl<'a> Token<'a> {
    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col, msg)
    }

    fn rational(&self) -> Result<Rational, ParseError> {
        parse_rational::<BigInt>(self.text).or_else(|e| self.fail(e.to_string()))
    }

    /// The value of a `key=value` token, checking the key.
    fn keyed(&self, key: &str) -> Result<Token<'a>, ParseError> {
        match self.text.split_once('=') {
            Some((k, v)) if k == key => Ok(Token {
                line: self.line,
                col: self.col + k.len() + 1,
                text: v,
            }),
            _ => self.fail(format!("expected `{key}=<value>`, found `{}`", self.text)),
        }
    }
}

struct Line<'a> {
    no: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    /// The arguments after the keyword, requiring exactly `n` of them.
    fn args(&self, n: usize, usage: &str) -> Result<&[Token<'a>], ParseError> {
        let args = &self.tokens[1..];
        if args.len() < n {
            let end = self.tokens.last().map_or(1, |t| t.col + t.text.chars().count());
            return err(self.no, end, format!("missing arguments; expected `{usage}`"));
        }
        if let Some(extra) = args.get(n) {
            return extra.fail(format!("unexpected token `{}`; expected `{usage}`", extra.text));
        }
        Ok(args)
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (col, (byte, ch)) in content.char_indices().enumerate() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some((col, byte)),
                (true, Some((c, b))) => {
                    tokens.push(Token {
                        line: i + 1,
                        col: c + 1,
                        text: &content[b..byte],
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((c, b)) = start {
            tokens.push(Token {
                line: i + 1,
                col: c + 1,
                text: &content[b..],
            });
        }
        if !tokens.is_empty() {
            out.push(Line { no: i + 1, tokens });
        }
    }
    out
}

/// Splits off the header line, which must start with `keyword`.
fn header<'t, 'a>(all: &'t [Line<'a>], keywords: &[&str]) -> Result<(&'t Line<'a>, &'t [Line<'a>]), ParseError> {
    match all.split_first() {
        Some((first, rest)) if keywords.contains(&first.keyword()) => Ok((first, rest)),
        Some((first, _)) => first.tokens[0].fail(format!(
            "expected header `{}`, found `{}`",
            keywords.join("` or `"),
            first.keyword()
        )),
        None => err(1, 1, format!("empty input; expected header `{}`", keywords[0])),
    }
}

fn unknown<T>(line: &Line<'_>, allowed: &str) -> Result<T, ParseError> {
    line.tokens[0].fail(format!("unknown directive `{}`; expected {allowed}", line.keyword()))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let all = lines(text);
    let (head, body) = header(&all, &["graph"])?;
    let count_tok = head.args(1, "graph <n>")?[0];
    let count: usize = count_tok
        .text
        .parse()
        .or_else(|_| count_tok.fail(format!("node count must be a nonnegative integer, found `{}`", count_tok.text)))?;
    let mut names: Vec<&str> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut edges: Vec<(Token<'_>, Token<'_>)> = Vec::new();
    for line in body {
        match line.keyword() {
            "node" => {
                let t = line.args(1, "node <name>")?[0];
                if index.insert(t.text, names.len()).is_some() {
                    return t.fail(format!("duplicate node `{}`", t.text));
                }
                names.push(t.text);
            }
            "edge" => {
                let a = line.args(2, "edge <u> <v>")?;
                edges.push((a[0], a[1]));
            }
            _ => return unknown(line, "`node` or `edge`"),
        }
    }
    if names.len() != count {
        return count_tok.fail(format!("header declares {count} nodes but {} are listed", names.len()));
    }
    let mut g = Graph::empty(&names).expect("names checked distinct");
    for (u, v) in edges {
        let lookup = |t: Token<'_>| index.get(t.text).copied().map_or_else(|| t.fail(format!("unknown node `{}`", t.text)), Ok);
        let (i, j) = (lookup(u)?, lookup(v)?);
        if i == j {
            return v.fail(format!("self-loop at `{}`", v.text));
        }
        g.set_edge(i, j, true);
    }
    Ok(g)
}

/// Nodes in order, then edges with the lexicographically smaller endpoint
/// first, sorted.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.node_count());
    for n in g.names() {
        let _ = writeln!(out, "node {n}");
    }
    for (u, v) in g.edge_names() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    out
}

pub fn write_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for n in g.names() {
        let _ = writeln!(out, "  \"{n}\";");
    }
    for (u, v) in g.edge_names() {
        let _ = writeln!(out, "  \"{u}\" -- \"{v}\";");
    }
    out.push_str("}\n");
    out
}

/// A tree file with its optional distance bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeFile {
    pub tree: WeightedTree<Rational>,
    pub dmin: Option<Rational>,
    pub dmax: Option<Rational>,
}

pub fn parse_tree_file(text: &str) -> Result<TreeFile, ParseError> {
    let all = lines(text);
    let (head, body) = header(&all, &["tree"])?;
    head.args(0, "tree")?;
    let mut nodes: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut edge_toks = Vec::new();
    let mut leaf_toks = Vec::new();
    let (mut dmin, mut dmax) = (None, None);
    for line in body {
        match line.keyword() {
            "tnode" => {
                let t = line.args(1, "tnode <name>")?[0];
                if index.insert(t.text, nodes.len()).is_some() {
                    return t.fail(format!("duplicate tree node `{}`", t.text));
                }
                nodes.push(t.text.to_string());
            }
            "tedge" => {
                let a = line.args(3, "tedge <u> <v> <p>/<q>")?;
                let w = a[2].rational()?;
                if w < Rational::from_integer(0.into()) {
                    return a[2].fail("edge weight must be nonnegative");
                }
                edge_toks.push((a[0], a[1], w));
            }
            "leaf" => {
                let a = line.args(2, "leaf <tree-node> <graph-node>")?;
                leaf_toks.push((line.no, a[0], a[1]));
            }
            kw @ ("dmin" | "dmax") => {
                let t = line.args(1, "dmin|dmax <p>/<q>")?[0];
                let slot = if kw == "dmin" { &mut dmin } else { &mut dmax };
                if slot.is_some() {
                    return line.tokens[0].fail(format!("`{kw}` given twice"));
                }
                let v = t.rational()?;
                if v < Rational::from_integer(0.into()) {
                    return t.fail(format!("{kw} must be nonnegative"));
                }
                *slot = Some(v);
            }
            _ => return unknown(line, "`tnode`, `tedge`, `leaf`, `dmin` or `dmax`"),
        }
    }
    let lookup = |t: &Token<'_>| index.get(t.text).copied().map_or_else(|| t.fail(format!("unknown tree node `{}`", t.text)), Ok);
    let mut edges = Vec::with_capacity(edge_toks.len());
    for (u, v, w) in edge_toks {
        let (i, j) = (lookup(&u)?, lookup(&v)?);
        if i == j {
            return v.fail(format!("self-loop at `{}`", v.text));
        }
        edges.push((i, j, w));
    }
    let mut leaves = Vec::with_capacity(leaf_toks.len());
    for (_, node, label) in &leaf_toks {
        leaves.push((lookup(node)?, label.text.to_string()));
    }
    let tree = WeightedTree::from_parts(nodes, edges, leaves).or_else(|e| {
        let leaf_line = |pick: &dyn Fn(&Token<'_>, &Token<'_>) -> bool, last: bool| {
            let mut it = leaf_toks.iter().filter(|(_, n, l)| pick(n, l));
            let found = if last { it.last() } else { it.next() };
            found.map_or((head.no, 1), |(no, n, _)| (*no, n.col))
        };
        let (line, col) = match &e {
            TreeError::LeafDegree(n) => leaf_line(&|t, _| t.text == n, false),
            TreeError::DuplicateLeafLabel(l) => leaf_line(&|_, t| t.text == l, true),
            TreeError::DoubleLabel(n) => leaf_line(&|t, _| t.text == n, true),
            _ => (head.no, 1),
        };
        err(line, col, e.to_string())
    })?;
    Ok(TreeFile { tree, dmin, dmax })
}

pub fn parse_tree(text: &str) -> Result<WeightedTree<Rational>, ParseError> {
    Ok(parse_tree_file(text)?.tree)
}

/// A tree file that must carry both bounds.
pub fn parse_witness(text: &str) -> Result<PcgWitness<Rational>, ParseError> {
    let f = parse_tree_file(text)?;
    match (f.dmin, f.dmax) {
        (Some(dmin), Some(dmax)) => Ok(PcgWitness::new(f.tree, dmin, dmax).expect("bounds checked nonnegative")),
        (None, _) => err(1, 1, "witness file needs a `dmin` line"),
        (Some(_), None) => err(1, 1, "witness file needs a `dmax` line"),
    }
}

pub fn write_tree<I: ExactInt>(tree: &WeightedTree<Ratio<I>>) -> String {
    let mut out = String::from("tree\n");
    for n in tree.nodes() {
        let _ = writeln!(out, "tnode {n}");
    }
    for (node, label) in tree.leaves() {
        let _ = writeln!(out, "leaf {} {label}", tree.nodes()[*node]);
    }
    for (u, v, w) in tree.edges() {
        let _ = writeln!(out, "tedge {} {} {}", tree.nodes()[*u], tree.nodes()[*v], format_rational(w));
    }
    out
}

pub fn write_witness<I: ExactInt>(w: &PcgWitness<Ratio<I>>) -> String {
    let mut out = write_tree(&w.tree);
    let _ = writeln!(out, "dmin {}", format_rational(&w.dmin));
    let _ = writeln!(out, "dmax {}", format_rational(&w.dmax));
    out
}

/// A threshold graph: weights `a` and one global threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdInstance {
    pub names: Vec<String>,
    pub a: Vec<Rational>,
    pub threshold: Rational,
}

impl ThresholdInstance {
    /// The equivalent threshold tolerance instance.
    pub fn to_tt(&self) -> TtInstance<Rational> {
        threshold_instance(&self.names, &self.a, &self.threshold).expect("shifted values are positive")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TtFile {
    Tolerance(TtInstance<Rational>),
    Threshold(ThresholdInstance),
}

impl TtFile {
    pub fn to_tt(&self) -> TtInstance<Rational> {
        match self {
            TtFile::Tolerance(i) => i.clone(),
            TtFile::Threshold(t) => t.to_tt(),
        }
    }
}

/// Parses either a `ttgraph` or a `threshold <t>` file.
pub fn parse_tt(text: &str) -> Result<TtFile, ParseError> {
    let all = lines(text);
    let (head, body) = header(&all, &["ttgraph", "threshold"])?;
    let threshold = if head.keyword() == "threshold" {
        Some(head.args(1, "threshold <t>")?[0].rational()?)
    } else {
        head.args(0, "ttgraph")?;
        None
    };
    let mut names: Vec<String> = Vec::new();
    let mut g = Vec::new();
    let mut t = Vec::new();
    let zero = Rational::from_integer(0.into());
    for line in body {
        if line.keyword() != "node" {
            return unknown(line, "`node`");
        }
        let usage = if threshold.is_some() {
            "node <name> a=<p>/<q>"
        } else {
            "node <name> g=<p>/<q> t=<p>/<q>"
        };
        let args = line.args(if threshold.is_some() { 2 } else { 3 }, usage)?;
        let name = args[0];
        if names.iter().any(|n| n == name.text) {
            return name.fail(format!("duplicate node `{}`", name.text));
        }
        names.push(name.text.to_string());
        if threshold.is_some() {
            g.push(args[1].keyed("a")?.rational()?);
        } else {
            let (gt, tt) = (args[1].keyed("g")?, args[2].keyed("t")?);
            let (gv, tv) = (gt.rational()?, tt.rational()?);
            if gv <= zero {
                return gt.fail("weight g must be positive");
            }
            if tv <= zero {
                return tt.fail("tolerance t must be positive");
            }
            g.push(gv);
            t.push(tv);
        }
    }
    Ok(match threshold {
        Some(threshold) => TtFile::Threshold(ThresholdInstance { names, a: g, threshold }),
        None => TtFile::Tolerance(TtInstance::new(&names, g, t).expect("values and names checked")),
    })
}

pub fn write_tt<I: ExactInt>(inst: &TtInstance<Ratio<I>>) -> String {
    let mut out = String::from("ttgraph\n");
    for (i, n) in inst.names().iter().enumerate() {
        let _ = writeln!(
            out,
            "node {n} g={} t={}",
            format_rational(&inst.g()[i]),
            format_rational(&inst.t()[i])
        );
    }
    out
}

pub fn write_threshold(inst: &ThresholdInstance) -> String {
    let mut out = format!("threshold {}\n", format_rational(&inst.threshold));
    for (n, a) in inst.names.iter().zip(&inst.a) {
        let _ = writeln!(out, "node {n} a={}", format_rational(a));
    }
    out
}

pub fn parse_model(text: &str) -> Result<GeometricModel<Rational>, ParseError> {
    let all = lines(text);
    let (head, body) = header(&all, &["model"])?;
    let dim_tok = head.args(1, "model <2d|3d>")?[0];
    let dim = match dim_tok.text {
        "2d" => Dimension::Two,
        "3d" => Dimension::Three,
        other => return dim_tok.fail(format!("expected `2d` or `3d`, found `{other}`")),
    };
    let mut model = GeometricModel::new(dim);
    for line in body {
        let (arity, usage) = match line.keyword() {
            "disk" => (3, "disk <label> <x> <y> <r>"),
            "hseg" => (3, "hseg <label> <y> <x1> <x2>"),
            "vseg" => (3, "vseg <label> <x> <y1> <y2>"),
            "arc" => (2, "arc <label> <start> <end>"),
            "rect" => (4, "rect <label> <x1> <y1> <x2> <y2>"),
            "box" => (6, "box <label> <x1> <y1> <z1> <x2> <y2> <z2>"),
            "spp" => (5, "spp <label> <a> <b> <c> <d> <z>"),
            "sppseg" => (3, "sppseg <label> <a> <b> <z>"),
            _ => return unknown(line, "a shape (`disk`, `hseg`, `vseg`, `arc`, `rect`, `box`, `spp`, `sppseg`)"),
        };
        let args = line.args(arity + 1, usage)?;
        let label = args[0];
        let v = args[1..].iter().map(Token::rational).collect::<Result<Vec<_>, _>>()?;
        let mut v = v.into_iter();
        let mut next = || v.next().expect("arity checked");
        let shape = match line.keyword() {
            "disk" => Shape::Disk { x: next(), y: next(), r: next() },
            "hseg" => Shape::HSeg { y: next(), x1: next(), x2: next() },
            "vseg" => Shape::VSeg { x: next(), y1: next(), y2: next() },
            "arc" => Shape::Arc { start: next(), end: next() },
            "rect" => Shape::Rect { x1: next(), y1: next(), x2: next(), y2: next() },
            "box" => Shape::Box {
                x1: next(),
                y1: next(),
                z1: next(),
                x2: next(),
                y2: next(),
                z2: next(),
            },
            "spp" => Shape::Spp { a: next(), b: next(), c: next(), d: next(), z: next() },
            _ => Shape::SppSeg { a: next(), b: next(), z: next() },
        };
        model.push(label.text, shape).or_else(|e| line.tokens[0].fail(e.to_string()))?;
    }
    Ok(model)
}

struct Row<'a, I: ExactInt>(&'a [&'a Ratio<I>]);

impl<I: ExactInt> fmt::Display for Row<'_, I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.0 {
            write!(f, " {}", format_rational(v))?;
        }
        Ok(())
    }
}

pub fn write_model<I: ExactInt>(m: &GeometricModel<Ratio<I>>) -> String {
    let mut out = format!("model {}\n", m.dimension());
    for (label, shape) in m.iter() {
        let values: Vec<&Ratio<I>> = match shape {
            Shape::Disk { x, y, r } => vec![x, y, r],
            Shape::HSeg { y, x1, x2 } => vec![y, x1, x2],
            Shape::VSeg { x, y1, y2 } => vec![x, y1, y2],
            Shape::Arc { start, end } => vec![start, end],
            Shape::Rect { x1, y1, x2, y2 } => vec![x1, y1, x2, y2],
            Shape::Box { x1, y1, z1, x2, y2, z2 } => vec![x1, y1, z1, x2, y2, z2],
            Shape::Spp { a, b, c, d, z } => vec![a, b, c, d, z],
            Shape::SppSeg { a, b, z } => vec![a, b, z],
        };
        let _ = writeln!(out, "{} {label}{}", shape.kind(), Row(&values));
    }
    out
}
