//! Simple undirected graphs, the edge-list file format, incidence matrices,
//! and component/bipartiteness analysis under edge deletion.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FMatrix, FieldSpec};

/// A simple undirected graph on vertices `0..s`. Edge `j` is column `j` of
/// the incidence matrix and coordinate `j` of every derived code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    s: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates simplicity and vertex ranges. Endpoints are stored with the
    /// smaller index first; edge order is kept as given.
    pub fn new(s: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (j, (u, v)) in edges.into_iter().enumerate() {
            if u >= s || v >= s {
                return Err(Error::InvalidGraph(format!(
                    "edge {j} = ({u}, {v}) has a vertex outside 0..{s}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!(
                    "edge {j} is a loop at vertex {u}"
                )));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "edge {j} = ({u}, {v}) is a duplicate"
                )));
            }
            out.push(e);
        }
        Ok(Self { s, edges: out })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, j: usize) -> (usize, usize) {
        self.edges[j]
    }

    pub fn is_connected(&self) -> bool {
        self.s <= 1 || self.analyze(&[]).components == 1
    }

    pub fn is_bipartite(&self) -> bool {
        self.analyze(&[]).non_bipartite == 0
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// The `s x m` 0/1 incidence matrix over `field`.
    pub fn incidence_matrix(&self, field: FieldSpec) -> FMatrix {
        let mut a = FMatrix::zeros(field, self.s, self.edges.len());
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            a.set(u, j, 1);
            a.set(v, j, 1);
        }
        a
    }

    /// Connected components of the graph with `removed` deleted; each sorted,
    /// listed by least vertex.
    pub fn components(&self, removed: &EdgeSet) -> Vec<Vec<usize>> {
        let keep = self.kept_flags(removed);
        let adj = self.adjacency(&keep);
        let mut seen = vec![false; self.s];
        let mut out = Vec::new();
        for start in 0..self.s {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// 2-colours `component` in the graph with `removed` deleted. The side
    /// containing the least vertex is `left`. Returns `None` for an odd cycle.
    pub fn bipartition(
        &self,
        component: &[usize],
        removed: &EdgeSet,
    ) -> Result<Option<Bipartition>> {
        let Some(&anchor) = component.iter().min() else {
            return Err(Error::InvalidArgument("empty component".into()));
        };
        let mut member = vec![false; self.s];
        for &v in component {
            if v >= self.s {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
            }
            member[v] = true;
        }
        let keep = self.kept_flags(removed);
        let adj = self.adjacency(&keep);
        let mut colour: Vec<Option<bool>> = vec![None; self.s];
        colour[anchor] = Some(false);
        let mut queue = VecDeque::from([anchor]);
        let mut odd = false;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &w in &adj[u] {
                if !member[w] {
                    return Err(Error::InvalidArgument(format!(
                        "component is not closed: edge ({u}, {w}) leaves it"
                    )));
                }
                match colour[w] {
                    None => {
                        colour[w] = Some(!cu);
                        reached += 1;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => odd = true,
                    Some(_) => {}
                }
            }
        }
        let distinct = member.iter().filter(|&&b| b).count();
        if reached != distinct {
            return Err(Error::InvalidArgument("component is not connected".into()));
        }
        if odd {
            return Ok(None);
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        for v in 0..self.s {
            match colour[v] {
                Some(false) => left.push(v),
                Some(true) => right.push(v),
                None => {}
            }
        }
        Ok(Some(Bipartition { left, right }))
    }

    fn kept_flags(&self, removed: &EdgeSet) -> Vec<bool> {
        let mut keep = vec![true; self.edges.len()];
        for &j in removed.indices() {
            if j < keep.len() {
                keep[j] = false;
            }
        }
        keep
    }

    fn adjacency(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.s];
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if keep[j] {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        adj
    }

    /// Component counts after deleting the edges whose indices are listed.
    pub(crate) fn analyze(&self, removed: &[usize]) -> ComponentCounts {
        let mut dsu = ParityDsu::new(self.s);
        let mut skip = removed.iter().peekable();
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if skip.peek() == Some(&&j) {
                skip.next();
                continue;
            }
            dsu.union_odd(u, v);
        }
        dsu.counts()
    }

    /// Same as [`Graph::analyze`] for a bit mask of deleted edges (`m <= 64`).
    pub(crate) fn analyze_mask(&self, removed: u64, dsu: &mut ParityDsu) -> ComponentCounts {
        dsu.reset(self.s);
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if removed >> j & 1 == 0 {
                dsu.union_odd(u, v);
            }
        }
        dsu.counts()
    }

    /// Parses the `p`/`e` edge-list format (1-based vertices).
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("p") => {
                    if header.is_some() {
                        return Err(err("second `p` header".into()));
                    }
                    let s = parse_count(tok.next(), "vertex count").map_err(err)?;
                    let m = parse_count(tok.next(), "edge count").map_err(err)?;
                    if tok.next().is_some() {
                        return Err(err("trailing tokens after `p <s> <m>`".into()));
                    }
                    header = Some((s, m));
                }
                Some("e") => {
                    let Some((s, _)) = header else {
                        return Err(err("edge line before `p` header".into()));
                    };
                    let u = parse_count(tok.next(), "endpoint").map_err(err)?;
                    let v = parse_count(tok.next(), "endpoint").map_err(err)?;
                    if tok.next().is_some() {
                        return Err(err("trailing tokens after `e <u> <v>`".into()));
                    }
                    for w in [u, v] {
                        if w == 0 || w > s {
                            return Err(err(format!("vertex {w} out of range 1..={s}")));
                        }
                    }
                    if u == v {
                        return Err(err(format!("loop at vertex {u}")));
                    }
                    edges.push((u - 1, v - 1, line_no));
                }
                Some(other) => return Err(err(format!("unknown line type `{other}`"))),
                None => unreachable!(),
            }
        }
        let Some((s, m)) = header else {
            return Err(Error::Parse {
                line: 0,
                msg: "missing `p <s> <m>` header".into(),
            });
        };
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let mut seen = HashSet::new();
        for &(u, v, line) in &edges {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate edge ({}, {})", u + 1, v + 1),
                });
            }
        }
        Graph::new(s, edges.into_iter().map(|(u, v, _)| (u, v)))
    }

    /// Parses `{"s": int, "edges": [[u, v], ...]}` with 1-based vertices.
    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (j, [u, v]) in doc.edges.into_iter().enumerate() {
            if u == 0 || v == 0 || u > doc.s || v > doc.s {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("edge {j}: vertex out of range 1..={}", doc.s),
                });
            }
            edges.push((u - 1, v - 1));
        }
        Graph::new(doc.s, edges).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    /// Dispatches on the file name: `.json` selects the JSON form.
    pub fn parse_named(name: &str, text: &str) -> Result<Self> {
        if name.ends_with(".json") {
            Self::parse_json(text)
        } else {
            Self::parse_edge_list(text)
        }
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {} {}\n", self.s, self.edges.len());
        for &(u, v) in &self.edges {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            s: self.s,
            edges: self.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        })
        .expect("graph serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    s: usize,
    edges: Vec<[usize; 2]>,
}

fn parse_count(tok: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let t = tok.ok_or_else(|| format!("missing {what}"))?;
    t.parse().map_err(|_| format!("bad {what} `{t}`"))
}

/// A set of edge indices in strictly increasing order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(Vec<usize>);

impl EdgeSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Sorts and validates indices against an edge count `m`.
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("repeated edge index".into()));
        }
        if let Some(&j) = indices.last() {
            if j >= m {
                return Err(Error::InvalidArgument(format!("edge index {j} >= {m}")));
            }
        }
        Ok(Self(indices))
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|j| mask >> j & 1 == 1).collect())
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

/// Two colour classes of a bipartite component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ComponentCounts {
    pub components: usize,
    pub non_bipartite: usize,
}

impl ComponentCounts {
    pub fn bipartite(&self) -> usize {
        self.components - self.non_bipartite
    }
}

/// Union-find that tracks the parity of each vertex relative to its root, so
/// odd cycles are detected during union.
#[derive(Debug, Clone, Default)]
pub(crate) struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<u8>,
    odd: Vec<bool>,
    rank: Vec<u8>,
}

impl ParityDsu {
    pub fn new(n: usize) -> Self {
        let mut d = Self::default();
        d.reset(n);
        d
    }

    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n);
        self.parity.clear();
        self.parity.resize(n, 0);
        self.odd.clear();
        self.odd.resize(n, false);
        self.rank.clear();
        self.rank.resize(n, 0);
    }

    fn find(&mut self, mut v: usize) -> (usize, u8) {
        let mut par = 0;
        let mut path = Vec::new();
        while self.parent[v] != v {
            path.push(v);
            par ^= self.parity[v];
            v = self.parent[v];
        }
        let root = v;
        // compress: parity of each node relative to root
        let mut acc = par;
        for &u in &path {
            let next = acc ^ self.parity[u];
            self.parity[u] = acc;
            self.parent[u] = root;
            acc = next;
        }
        (root, par)
    }

    /// Adds an edge requiring `u` and `v` to receive different colours.
    pub fn union_odd(&mut self, u: usize, v: usize) {
        let (ru, pu) = self.find(u);
        let (rv, pv) = self.find(v);
        if ru == rv {
            if pu == pv {
                self.odd[ru] = true;
            }
            return;
        }
        let (big, small) = if self.rank[ru] >= self.rank[rv] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.parent[small] = big;
        self.parity[small] = pu ^ pv ^ 1;
        self.odd[big] |= self.odd[small];
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
    }

    pub fn counts(&mut self) -> ComponentCounts {
        let mut components = 0;
        let mut non_bipartite = 0;
        for v in 0..self.parent.len() {
            if self.parent[v] == v {
                components += 1;
                if self.odd[v] {
                    non_bipartite += 1;
                }
            }
        }
        ComponentCounts {
            components,
            non_bipartite,
        }
    }
}
