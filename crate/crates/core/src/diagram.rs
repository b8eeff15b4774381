//! Decorated trees with arrowheads: validation, linking numbers,
//! multiplicities and per-edge splice data.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// `(N, nu)`: multiplicity of `f` and of `omega` plus one.
pub type Mult = (u64, i64);

/// Node id to cached or computed multiplicities.
pub type MultTable = BTreeMap<String, Mult>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub dec_a: u64,
    pub dec_b: u64,
}

impl Edge {
    /// Decoration at the end sitting on `node`.
    pub fn dec_at(&self, node: &str) -> Option<u64> {
        if self.a == node {
            Some(self.dec_a)
        } else if self.b == node {
            Some(self.dec_b)
        } else {
            None
        }
    }

    pub fn other(&self, node: &str) -> &str {
        if self.a == node {
            &self.b
        } else {
            &self.a
        }
    }
}

/// A boundary half-edge. A pure `f`-branch is `(N, 1)`, a pure `omega`-branch
/// is `(0, nu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub node: String,
    pub dec: u64,
    pub n: u64,
    pub nu: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valency {
    /// Node-edges only.
    Plain,
    /// Node-edges plus arrowheads with `N >= 1`.
    WithFArrows,
    /// Node-edges plus all arrowheads.
    Full,
}

/// Where a path ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Node(String),
    Arrow(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    DuplicateNode(String),
    UnknownEndpoint(String),
    SelfLoop(String),
    Disconnected,
    Cycle,
    ZeroDecoration(String),
    NotCoprime { node: String, d1: u64, d2: u64 },
    NonPositiveDeterminant { a: String, b: String, q: i128 },
    DegenerateArrow { node: String, index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "diagram has no nodes"),
            Violation::DuplicateNode(id) => write!(f, "node {id} declared twice"),
            Violation::UnknownEndpoint(id) => write!(f, "reference to undeclared node {id}"),
            Violation::SelfLoop(id) => write!(f, "edge from {id} to itself"),
            Violation::Disconnected => write!(f, "node-edge graph is not connected"),
            Violation::Cycle => write!(f, "node-edge graph has a cycle"),
            Violation::ZeroDecoration(at) => write!(f, "zero decoration at {at}"),
            Violation::NotCoprime { node, d1, d2 } => {
                write!(
                    f,
                    "decorations {d1} and {d2} at node {node} are not coprime"
                )
            }
            Violation::NonPositiveDeterminant { a, b, q } => {
                write!(f, "edge {a}-{b} has determinant {q} < 1")
            }
            Violation::DegenerateArrow { node, index } => {
                write!(f, "arrowhead #{index} at {node} has (N, nu) = (0, 0)")
            }
        }
    }
}

/// A decorated tree with arrowheads and optional per-node caches.
///
/// Nodes are kept sorted by id. Edges and arrowheads keep insertion order;
/// [`Diagram::canonical`] sorts them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    nodes: BTreeMap<String, Option<Mult>>,
    edges: Vec<Edge>,
    arrows: Vec<Arrow>,
    duplicates: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
enum IncKind {
    Edge {
        edge: usize,
        other: usize,
        far_dec: u64,
    },
    Arrow(usize),
}

#[derive(Clone, Copy, Debug)]
struct Inc {
    dec: u64,
    kind: IncKind,
}

/// Index-based adjacency built on demand.
pub(crate) struct Adj {
    ids: Vec<String>,
    pos: HashMap<String, usize>,
    inc: Vec<Vec<Inc>>,
    prod: Vec<u64>,
}

/// Linking numbers from one start, `None` where not reached.
pub(crate) struct Row {
    pub node: Vec<Option<u64>>,
    pub arrow: Vec<Option<u64>>,
}

fn mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("linking number"))
}

impl Diagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>, cache: Option<Mult>) {
        match self.nodes.entry(id.into()) {
            std::collections::btree_map::Entry::Occupied(e) => {
                self.duplicates.push(e.key().clone())
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(cache);
            }
        }
    }

    pub fn add_edge(&mut self, a: impl Into<String>, b: impl Into<String>, dec_a: u64, dec_b: u64) {
        self.edges.push(Edge {
            a: a.into(),
            b: b.into(),
            dec_a,
            dec_b,
        });
    }

    pub fn add_arrow(&mut self, node: impl Into<String>, dec: u64, n: u64, nu: i64) {
        self.arrows.push(Arrow {
            node: node.into(),
            dec,
            n,
            nu,
        });
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &String> {
        self.nodes.keys()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn has_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn cache(&self, id: &str) -> Option<Mult> {
        self.nodes.get(id).copied().flatten()
    }

    pub fn set_cache(&mut self, id: &str, cache: Option<Mult>) {
        if let Some(slot) = self.nodes.get_mut(id) {
            *slot = cache;
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub(crate) fn arrows_mut(&mut self) -> &mut Vec<Arrow> {
        &mut self.arrows
    }

    pub(crate) fn edges_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges
    }

    pub(crate) fn remove_node(&mut self, id: &str) {
        self.nodes.remove(id);
    }

    /// All arrowhead decorations are 1.
    pub fn is_standard(&self) -> bool {
        self.arrows.iter().all(|a| a.dec == 1)
    }

    pub fn without_caches(&self) -> Self {
        let mut out = self.clone();
        for c in out.nodes.values_mut() {
            *c = None;
        }
        out
    }

    /// Edges oriented smaller id first, then edges and arrowheads sorted.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        for e in out.edges.iter_mut() {
            if e.b < e.a {
                std::mem::swap(&mut e.a, &mut e.b);
                std::mem::swap(&mut e.dec_a, &mut e.dec_b);
            }
        }
        out.edges.sort();
        out.arrows.sort();
        out
    }

    /// An unused id starting with `base`.
    pub fn fresh_id(&self, base: &str) -> String {
        (1..)
            .map(|k| format!("{base}.{k}"))
            .find(|id| !self.nodes.contains_key(id))
            .unwrap()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            out.push(Violation::Empty);
        }
        for d in &self.duplicates {
            out.push(Violation::DuplicateNode(d.clone()));
        }
        let mut structural = false;
        for e in &self.edges {
            for id in [&e.a, &e.b] {
                if !self.nodes.contains_key(id) {
                    out.push(Violation::UnknownEndpoint(id.clone()));
                    structural = true;
                }
            }
            if e.a == e.b {
                out.push(Violation::SelfLoop(e.a.clone()));
                structural = true;
            }
            if e.dec_a == 0 {
                out.push(Violation::ZeroDecoration(format!(
                    "{} on edge {}-{}",
                    e.a, e.a, e.b
                )));
                structural = true;
            }
            if e.dec_b == 0 {
                out.push(Violation::ZeroDecoration(format!(
                    "{} on edge {}-{}",
                    e.b, e.a, e.b
                )));
                structural = true;
            }
        }
        for (k, a) in self.arrows.iter().enumerate() {
            if !self.nodes.contains_key(&a.node) {
                out.push(Violation::UnknownEndpoint(a.node.clone()));
                structural = true;
            }
            if a.dec == 0 {
                out.push(Violation::ZeroDecoration(format!(
                    "arrowhead #{k} at {}",
                    a.node
                )));
                structural = true;
            }
            if a.n == 0 && a.nu == 0 {
                out.push(Violation::DegenerateArrow {
                    node: a.node.clone(),
                    index: k,
                });
            }
        }
        if structural || self.nodes.is_empty() {
            return out;
        }

        // tree: connected with |E| = |V| - 1
        let adj = self.adj();
        let n = adj.ids.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for inc in &adj.inc[u] {
                if let IncKind::Edge { other, .. } = inc.kind {
                    if !seen[other] {
                        seen[other] = true;
                        stack.push(other);
                    }
                }
            }
        }
        let connected = seen.iter().all(|s| *s);
        if !connected {
            out.push(Violation::Disconnected);
        }
        if self.edges.len() + 1 != n && (connected || self.edges.len() + 1 > n) {
            out.push(Violation::Cycle);
        }

        for (v, incs) in adj.inc.iter().enumerate() {
            for i in 0..incs.len() {
                for j in i + 1..incs.len() {
                    if incs[i].dec.gcd(&incs[j].dec) != 1 {
                        out.push(Violation::NotCoprime {
                            node: adj.ids[v].clone(),
                            d1: incs[i].dec,
                            d2: incs[j].dec,
                        });
                    }
                }
            }
        }
        for e in &self.edges {
            let q = self.edge_determinant_unchecked(&adj, e);
            if q < 1 {
                out.push(Violation::NonPositiveDeterminant {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    q,
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `Ok(self)` if valid, otherwise all violations.
    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Non-fatal remarks, currently arrowheads with `nu <= 0`.
    pub fn warnings(&self) -> Vec<String> {
        self.arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| a.nu <= 0 && !(a.n == 0 && a.nu == 0))
            .map(|(k, a)| format!("arrowhead #{k} at {} has nu = {} <= 0", a.node, a.nu))
            .collect()
    }

    pub(crate) fn adj(&self) -> Adj {
        let ids: Vec<String> = self.nodes.keys().cloned().collect();
        let pos: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(k, id)| (id.clone(), k))
            .collect();
        let mut inc = vec![Vec::new(); ids.len()];
        for (k, e) in self.edges.iter().enumerate() {
            let (Some(&a), Some(&b)) = (pos.get(&e.a), pos.get(&e.b)) else {
                continue;
            };
            inc[a].push(Inc {
                dec: e.dec_a,
                kind: IncKind::Edge {
                    edge: k,
                    other: b,
                    far_dec: e.dec_b,
                },
            });
            inc[b].push(Inc {
                dec: e.dec_b,
                kind: IncKind::Edge {
                    edge: k,
                    other: a,
                    far_dec: e.dec_a,
                },
            });
        }
        for (k, a) in self.arrows.iter().enumerate() {
            if let Some(&v) = pos.get(&a.node) {
                inc[v].push(Inc {
                    dec: a.dec,
                    kind: IncKind::Arrow(k),
                });
            }
        }
        let prod = inc
            .iter()
            .map(|l| l.iter().fold(1u64, |acc, i| acc.saturating_mul(i.dec)))
            .collect();
        Adj {
            ids,
            pos,
            inc,
            prod,
        }
    }

    fn pos(&self, adj: &Adj, id: &str) -> Result<usize> {
        adj.pos
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// Index of the edge joining `u` and `v`.
    pub fn edge_between(&self, u: &str, v: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| (e.a == u && e.b == v) || (e.a == v && e.b == u))
            .ok_or_else(|| Error::NotAnEdge(u.to_string(), v.to_string()))
    }

    pub fn valency(&self, v: &str, kind: Valency) -> Result<usize> {
        if !self.has_node(v) {
            return Err(Error::UnknownNode(v.to_string()));
        }
        let edges = self.edges.iter().filter(|e| e.a == v || e.b == v).count();
        let arrows = self.arrows.iter().filter(|a| a.node == v);
        Ok(match kind {
            Valency::Plain => edges,
            Valency::WithFArrows => edges + arrows.filter(|a| a.n >= 1).count(),
            Valency::Full => edges + arrows.count(),
        })
    }

    /// Product of all decorations at `v`.
    pub fn decoration_product(&self, v: &str) -> Result<u64> {
        let adj = self.adj();
        let p = self.pos(&adj, v)?;
        adj.inc[p].iter().try_fold(1u64, |acc, i| mul(acc, i.dec))
    }

    fn edge_determinant_unchecked(&self, adj: &Adj, e: &Edge) -> i128 {
        let (a, b) = (adj.pos[&e.a], adj.pos[&e.b]);
        let outer_a = (adj.prod[a] / e.dec_a) as i128;
        let outer_b = (adj.prod[b] / e.dec_b) as i128;
        e.dec_a as i128 * e.dec_b as i128 - outer_a * outer_b
    }

    /// `q_e = d_u d_v - D_u D_v`.
    pub fn edge_determinant(&self, u: &str, v: &str) -> Result<i64> {
        let e = &self.edges[self.edge_between(u, v)?];
        let q = self.edge_determinant_unchecked(&self.adj(), e);
        i64::try_from(q).map_err(|_| Error::Overflow("edge determinant"))
    }

    /// Cone vectors `(w_u, w_v)` of the edge `u`-`v`, oriented so that
    /// `det(w_u, w_v) = q_e`: `w_u = (d_u, D_u)`, `w_v = (D_v, d_v)`.
    pub fn cone_vectors(&self, u: &str, v: &str) -> Result<((i64, i64), (i64, i64))> {
        let e = &self.edges[self.edge_between(u, v)?];
        let du = e.dec_at(u).unwrap();
        let dv = e.dec_at(v).unwrap();
        let outer_u = self.decoration_product(u)? / du;
        let outer_v = self.decoration_product(v)? / dv;
        let c = |x: u64| i64::try_from(x).map_err(|_| Error::Overflow("cone vector"));
        Ok(((c(du)?, c(outer_u)?), (c(outer_v)?, c(dv)?)))
    }

    /// Cone of an arrowhead: from `(delta, D_v)` to `(0, 1)`; determinant
    /// `delta`.
    pub fn arrow_cone(&self, a: usize) -> Result<((i64, i64), (i64, i64))> {
        let arrow = self.arrows.get(a).ok_or(Error::UnknownArrow(a))?;
        let outer = self.decoration_product(&arrow.node)? / arrow.dec;
        let c = |x: u64| i64::try_from(x).map_err(|_| Error::Overflow("cone vector"));
        Ok(((c(arrow.dec)?, c(outer)?), (0, 1)))
    }

    /// DFS computing linking numbers from `start`. With `skip_edge`, that
    /// edge counts as part of every path and is not traversed.
    pub(crate) fn walk(&self, adj: &Adj, start: usize, skip_edge: Option<usize>) -> Result<Row> {
        let mut row = Row {
            node: vec![None; adj.ids.len()],
            arrow: vec![None; self.arrows.len()],
        };
        let init = match skip_edge {
            None => adj.prod[start],
            Some(e) => {
                let d = adj.inc[start]
                    .iter()
                    .find(|i| matches!(i.kind, IncKind::Edge { edge, .. } if edge == e))
                    .expect("skipped edge is incident to the start")
                    .dec;
                adj.prod[start] / d
            }
        };
        row.node[start] = Some(init);
        let mut stack = vec![(start, skip_edge)];
        while let Some((u, via)) = stack.pop() {
            let w_u = row.node[u].unwrap();
            for inc in &adj.inc[u] {
                match inc.kind {
                    IncKind::Edge {
                        edge,
                        other,
                        far_dec,
                    } => {
                        if Some(edge) == via || row.node[other].is_some() {
                            continue;
                        }
                        let w = mul(w_u / inc.dec, adj.prod[other] / far_dec)?;
                        row.node[other] = Some(w);
                        stack.push((other, Some(edge)));
                    }
                    IncKind::Arrow(a) => {
                        row.arrow[a] = Some(w_u / inc.dec);
                    }
                }
            }
        }
        Ok(row)
    }

    /// Product of the decorations adjacent to, but not on, the path from
    /// `source` to `target`. `linking(v, v)` is the product of all
    /// decorations at `v`.
    pub fn linking(&self, source: &str, target: &Target) -> Result<u64> {
        let adj = self.adj();
        let s = self.pos(&adj, source)?;
        let row = self.walk(&adj, s, None)?;
        self.pick(&adj, &row, target)
    }

    /// Like [`Diagram::linking`], with the path starting on the edge `u`-`v`
    /// (whose own decorations are not used). The target must lie on the
    /// `v` side.
    pub fn linking_from_edge(&self, u: &str, v: &str, target: &Target) -> Result<u64> {
        let e = self.edge_between(u, v)?;
        let adj = self.adj();
        let start = self.pos(&adj, v)?;
        let row = self.walk(&adj, start, Some(e))?;
        self.pick(&adj, &row, target)
    }

    fn pick(&self, adj: &Adj, row: &Row, target: &Target) -> Result<u64> {
        let v = match target {
            Target::Node(id) => row.node[self.pos(adj, id)?],
            Target::Arrow(a) => *row.arrow.get(*a).ok_or(Error::UnknownArrow(*a))?,
        };
        v.ok_or_else(|| Error::UnknownNode(format!("{target:?} (not on this side)")))
    }

    /// `sum_a N_a l_a` and `sum_w (2 - delta_w) l_w + sum_a (nu_a - 1) l_a`
    /// over everything reached in `row`.
    fn weighted_sums(&self, adj: &Adj, row: &Row) -> Result<(u64, i64)> {
        let mut n: u128 = 0;
        let mut nu: i128 = 0;
        for (w, l) in row.node.iter().enumerate() {
            if let Some(l) = l {
                let plain = adj.inc[w]
                    .iter()
                    .filter(|i| matches!(i.kind, IncKind::Edge { .. }))
                    .count() as i128;
                nu += (2 - plain) * *l as i128;
            }
        }
        for (a, l) in row.arrow.iter().enumerate() {
            if let Some(l) = l {
                let arrow = &self.arrows[a];
                n += arrow.n as u128 * *l as u128;
                nu += (arrow.nu as i128 - 1) * *l as i128;
            }
        }
        Ok((
            u64::try_from(n).map_err(|_| Error::Overflow("N multiplicity"))?,
            i64::try_from(nu).map_err(|_| Error::Overflow("nu multiplicity"))?,
        ))
    }

    /// `N_v` and `nu_v` from the linking-number formulas. Only valid for
    /// standard diagrams. Existing caches are checked, not trusted.
    pub fn multiplicities(&self) -> Result<MultTable> {
        if !self.is_standard() {
            return Err(Error::DecoratedArrowPresent);
        }
        let adj = self.adj();
        let mut out = MultTable::new();
        for (v, id) in adj.ids.iter().enumerate() {
            let row = self.walk(&adj, v, None)?;
            let (n, nu) = self.weighted_sums(&adj, &row)?;
            if let Some((cn, cnu)) = self.cache(id) {
                if (cn, cnu) != (n, nu) {
                    return Err(Error::CacheMismatch {
                        node: id.clone(),
                        cached_n: cn,
                        cached_nu: cnu,
                        n,
                        nu,
                    });
                }
            }
            out.insert(id.clone(), (n, nu));
        }
        Ok(out)
    }

    /// Copy with every cache written from [`Diagram::multiplicities`].
    pub fn with_multiplicities(&self) -> Result<Self> {
        let table = self.multiplicities()?;
        let mut out = self.clone();
        for (id, m) in table {
            out.set_cache(&id, Some(m));
        }
        Ok(out)
    }

    /// Cached multiplicities of every node, or `MissingCache`.
    pub fn cached_table(&self) -> Result<MultTable> {
        self.nodes
            .iter()
            .map(|(id, c)| {
                c.map(|m| (id.clone(), m))
                    .ok_or_else(|| Error::MissingCache(id.clone()))
            })
            .collect()
    }

    /// Splice data of the edge `u`-`v`: `left` collects the `u` side,
    /// `right` the `v` side.
    pub fn splice_data(&self, u: &str, v: &str) -> Result<SpliceData> {
        if !self.is_standard() {
            return Err(Error::DecoratedArrowPresent);
        }
        let e = self.edge_between(u, v)?;
        let adj = self.adj();
        let left = self.walk(&adj, self.pos(&adj, u)?, Some(e))?;
        let right = self.walk(&adj, self.pos(&adj, v)?, Some(e))?;
        Ok(SpliceData {
            left: self.weighted_sums(&adj, &left)?,
            right: self.weighted_sums(&adj, &right)?,
        })
    }

    /// Ids of the nodes on the `v` side of the edge `u`-`v`.
    pub fn side(&self, u: &str, v: &str) -> Result<Vec<String>> {
        let e = self.edge_between(u, v)?;
        let adj = self.adj();
        let row = self.walk(&adj, self.pos(&adj, v)?, Some(e))?;
        Ok(row
            .node
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_some())
            .map(|(k, _)| adj.ids[k].clone())
            .collect())
    }
}

/// `(M, i)` weights of the two sides of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpliceData {
    pub left: (u64, i64),
    pub right: (u64, i64),
}

impl SpliceData {
    /// As `(M, M', i, i')` with the primed pair on the left.
    pub fn as_tuple(&self) -> (u64, u64, i64, i64) {
        (self.right.0, self.left.0, self.right.1, self.left.1)
    }
}
