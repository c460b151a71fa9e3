//! Finite windows of the Cayley graph `Γ(G,X)`, its sublevel subgraphs
//! `Γ(G,X)_s` and Cayley complex windows.

use std::collections::HashMap;
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;

use crate::budget::Budgets;
use crate::character::{char_value, Character};
use crate::error::{Error, Result};
use crate::presentation::{GroupElement, Presentation};
use crate::track::FiniteSubset;
use crate::word::{Letter, Word};
use crate::Rational;

/// A level `s ∈ ℚ ∪ {−∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Level {
    NegInfinity,
    At(Rational),
}

impl Level {
    pub fn zero() -> Self {
        Level::At(Rational::from_integer(0.into()))
    }

    pub fn int(s: i64) -> Self {
        Level::At(Rational::from_integer(s.into()))
    }

    pub fn admits(&self, value: &Rational) -> bool {
        match self {
            Level::NegInfinity => true,
            Level::At(s) => value >= s,
        }
    }

    /// `self ≥ other` as levels.
    pub fn at_least(&self, other: &Level) -> bool {
        match (self, other) {
            (_, Level::NegInfinity) => true,
            (Level::NegInfinity, Level::At(_)) => false,
            (Level::At(a), Level::At(b)) => a >= b,
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::NegInfinity => f.write_str("-inf"),
            Level::At(s) => write!(f, "{s}"),
        }
    }
}

/// The ball of radius `R` about `1` in the word metric of `Ẋ`.
#[derive(Debug, Clone)]
pub struct Window {
    radius: usize,
    /// Sorted shortlex.
    vertices: Vec<GroupElement>,
    distance: Vec<usize>,
    index: HashMap<GroupElement, usize>,
}

impl Window {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn distance(&self, i: usize) -> usize {
        self.distance[i]
    }
}

pub fn build_window(p: &Presentation, x: &FiniteSubset, radius: usize, budgets: &Budgets) -> Result<Window> {
    let steps: Vec<GroupElement> = x.centered(p)?.elements().iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut dist: HashMap<GroupElement, usize> = HashMap::new();
    dist.insert(GroupElement::identity(), 0);
    let mut frontier = vec![GroupElement::identity()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &steps {
                let h = p.multiply(g, s)?;
                if !dist.contains_key(&h) {
                    dist.insert(h.clone(), d);
                    next.push(h);
                }
            }
        }
        if dist.len() > budgets.max_nodes {
            return Err(Error::BudgetExceeded(format!("window exceeded {} vertices", budgets.max_nodes)));
        }
        frontier = next;
    }
    let mut vertices: Vec<GroupElement> = dist.keys().cloned().collect();
    vertices.sort();
    let distance = vertices.iter().map(|g| dist[g]).collect();
    let index = vertices.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    Ok(Window { radius, vertices, distance, index })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Index into the graph's label list.
    pub label: usize,
}

/// `Γ(G,X)_s ∩ window`. Vertex indices refer to this graph's own list.
#[derive(Debug, Clone)]
pub struct FilteredGraph {
    pub level: Level,
    pub radius: usize,
    vertices: Vec<GroupElement>,
    values: Vec<Rational>,
    labels: Vec<GroupElement>,
    edges: Vec<Edge>,
}

impl FilteredGraph {
    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn labels(&self) -> &[GroupElement] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.vertices.binary_search(g).ok()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    /// An empty graph, mostly for exports.
    pub fn empty(level: Level) -> Self {
        FilteredGraph { level, radius: 0, vertices: vec![], values: vec![], labels: vec![], edges: vec![] }
    }
}

/// Vertices of the window with `χ ≥ s`, and the edges `(g, gx)` for `x ∈ X`
/// with both endpoints present. Identity labels are skipped.
pub fn sublevel_graph(
    w: &Window,
    x: &FiniteSubset,
    chi: &Character,
    level: &Level,
    p: &Presentation,
) -> Result<FilteredGraph> {
    let mut vertices = Vec::new();
    let mut values = Vec::new();
    for g in w.vertices() {
        let v = char_value(chi, g.word());
        if level.admits(&v) {
            vertices.push(g.clone());
            values.push(v);
        }
    }
    let labels: Vec<GroupElement> = x.elements().iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut edges = Vec::new();
    for (from, g) in vertices.iter().enumerate() {
        for (label, l) in labels.iter().enumerate() {
            let h = p.multiply(g, l)?;
            if let Ok(to) = vertices.binary_search(&h) {
                edges.push(Edge { from, to, label });
            }
        }
    }
    Ok(FilteredGraph { level: level.clone(), radius: w.radius(), vertices, values, labels, edges })
}

/// Connected components, each sorted, ordered by their shortlex-least vertex
/// (which is the representative).
pub fn components(graph: &FilteredGraph) -> Vec<Vec<GroupElement>> {
    let n = graph.vertices.len();
    let mut uf = UnionFind::<usize>::new(n);
    for e in &graph.edges {
        uf.union(e.from, e.to);
    }
    group_by_root(&mut uf, &graph.vertices)
}

pub(crate) fn group_by_root(uf: &mut UnionFind<usize>, vertices: &[GroupElement]) -> Vec<Vec<GroupElement>> {
    let mut classes: Vec<Vec<GroupElement>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    // vertices are sorted, so each class is built in order and the first
    // vertex seen is the shortlex-least one
    for (i, g) in vertices.iter().enumerate() {
        let root = uf.find_mut(i);
        let k = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(g.clone());
    }
    classes
}

/// The edge path starting at `start` reading `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<GroupElement>,
    pub letters: Vec<Letter>,
}

impl Path {
    pub fn word(&self) -> Word {
        Word::from_letters(self.letters.clone())
    }

    pub fn end(&self) -> &GroupElement {
        self.vertices.last().expect("paths have a start")
    }
}

pub fn path_reading(p: &Presentation, start: &GroupElement, w: &Word) -> Result<Path> {
    let mut vertices = vec![start.clone()];
    let mut current = start.word().clone();
    for &l in w.letters() {
        current.push(l);
        let g = p.normal_form(&current)?;
        current = g.word().clone();
        vertices.push(g);
    }
    Ok(Path { vertices, letters: w.letters().to_vec() })
}

/// A 2-cell based at `base` whose boundary reads relator `relator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub base: GroupElement,
    pub relator: usize,
}

#[derive(Debug, Clone)]
pub struct CayleyComplexWindow {
    pub graph: FilteredGraph,
    pub cells: Vec<Cell>,
}

pub fn attach_2cells(graph: &FilteredGraph, relators: &[Word], p: &Presentation) -> Result<CayleyComplexWindow> {
    let mut cells = Vec::new();
    for base in graph.vertices() {
        for (i, r) in relators.iter().enumerate() {
            let path = path_reading(p, base, r)?;
            if path.vertices.iter().all(|v| graph.contains(v)) {
                cells.push(Cell { base: base.clone(), relator: i });
            }
        }
    }
    Ok(CayleyComplexWindow { graph: graph.clone(), cells })
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic DOT text. Nodes are listed shortlex with their χ-value.
pub fn dot_export(graph: &FilteredGraph, cells: &[Cell], p: &Presentation) -> String {
    let mut out = String::from("digraph cayley {\n");
    for (i, g) in graph.vertices.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\\nchi={}\"];", escape(&p.show(g.word())), graph.values[i]);
    }
    for e in &graph.edges {
        let _ =
            writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, escape(&p.show(graph.labels[e.label].word())));
    }
    for (k, cell) in cells.iter().enumerate() {
        if let Some(i) = graph.index_of(&cell.base) {
            let _ = writeln!(out, "  c{k} [shape=box,label=\"r{}\"];", cell.relator);
            let _ = writeln!(out, "  c{k} -> n{i} [style=dotted];");
        }
    }
    out.push_str("}\n");
    out
}
