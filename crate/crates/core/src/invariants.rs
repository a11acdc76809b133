//! Exact edge-deletion invariants: the r-th edge connectivity, the r-th weak
//! edge biparticity and the edge biparticity, each with a minimizing witness.
//!
//! Minima are found by scanning edge subsets in order of cardinality and then
//! lexicographically, so the witness is the lexicographically least subset of
//! minimum size. Subtrees are pruned when even deleting every remaining edge
//! of the budget cannot reach the target.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ComponentCounts, EdgeSet, Graph, ParityDsu};

/// Largest edge count accepted by the exhaustive searches.
pub const MAX_SEARCH_EDGES: usize = 30;
/// Largest vertex count accepted by the sign and vertex-cut enumerations.
pub const MAX_SIGN_VERTICES: usize = 31;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub size: usize,
    pub bipartite: bool,
}

/// A minimum value together with the lexicographically least witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub value: usize,
    pub witness: EdgeSet,
    pub components: Vec<ComponentSummary>,
}

impl InvariantResult {
    fn build(g: &Graph, witness: EdgeSet) -> Self {
        let components = g
            .components(&witness)
            .iter()
            .map(|c| ComponentSummary {
                size: c.len(),
                bipartite: g
                    .bipartition(c, &witness)
                    .expect("component of G minus witness")
                    .is_some(),
            })
            .collect();
        Self {
            value: witness.len(),
            witness,
            components,
        }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn bipartite_count(&self) -> usize {
        self.components.iter().filter(|c| c.bipartite).count()
    }
}

#[derive(Debug, Clone, Copy)]
enum Target {
    /// at least this many connected components
    Components(usize),
    /// at least this many bipartite components
    Bipartite(usize),
    /// every component bipartite
    AllBipartite,
}

impl Target {
    fn met(self, c: ComponentCounts) -> bool {
        match self {
            Target::Components(k) => c.components >= k,
            Target::Bipartite(r) => c.bipartite() >= r,
            Target::AllBipartite => c.non_bipartite == 0,
        }
    }

    // Each further deletion changes every tracked count by at most one.
    fn reachable(self, c: ComponentCounts, deletions_left: usize) -> bool {
        match self {
            Target::Components(k) => c.components + deletions_left >= k,
            Target::Bipartite(r) => c.bipartite() + deletions_left >= r,
            Target::AllBipartite => c.non_bipartite <= deletions_left,
        }
    }

    fn lower_bound(self, c: ComponentCounts) -> usize {
        match self {
            Target::Components(k) => k.saturating_sub(c.components),
            Target::Bipartite(r) => r.saturating_sub(c.bipartite()),
            Target::AllBipartite => usize::from(c.non_bipartite > 0),
        }
    }
}

fn check_search_size(g: &Graph) -> Result<()> {
    let m = g.edge_count();
    if m > MAX_SEARCH_EDGES {
        return Err(Error::BudgetExceeded {
            what: "edge subsets",
            count: format!("2^{m}"),
            budget: 1 << MAX_SEARCH_EDGES,
        });
    }
    Ok(())
}

/// Smallest deletion set meeting `target`, least in lexicographic order.
fn min_deletion(g: &Graph, target: Target) -> Result<EdgeSet> {
    check_search_size(g)?;
    let m = g.edge_count();
    let mut dsu = ParityDsu::new(g.vertex_count());
    let base = g.analyze_mask(0, &mut dsu);
    for size in target.lower_bound(base)..=m {
        if size == 0 {
            if target.met(base) {
                return Ok(EdgeSet::empty());
            }
            continue;
        }
        let hit = (0..=m - size).into_par_iter().find_map_first(|first| {
            let mut dsu = ParityDsu::new(g.vertex_count());
            descend(g, target, &mut dsu, 1 << first, first + 1, size - 1)
        });
        if let Some(mask) = hit {
            return Ok(EdgeSet::from_mask(mask));
        }
    }
    unreachable!("deleting every edge meets every valid target")
}

fn descend(
    g: &Graph,
    target: Target,
    dsu: &mut ParityDsu,
    mask: u64,
    next: usize,
    left: usize,
) -> Option<u64> {
    let counts = g.analyze_mask(mask, dsu);
    if left == 0 {
        return target.met(counts).then_some(mask);
    }
    if !target.reachable(counts, left) {
        return None;
    }
    let m = g.edge_count();
    (next..=m - left).find_map(|e| descend(g, target, dsu, mask | 1 << e, e + 1, left - 1))
}

fn check_r(r: usize, hi: usize) -> Result<()> {
    if r < 1 || r > hi {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            lo: 1,
            hi,
        });
    }
    Ok(())
}

/// Minimum number of edges whose removal leaves `r + 1` connected components.
pub fn lambda_r(g: &Graph, r: usize) -> Result<InvariantResult> {
    g.require_connected()?;
    check_r(r, g.vertex_count().saturating_sub(1))?;
    let witness = min_deletion(g, Target::Components(r + 1))?;
    let res = InvariantResult::build(g, witness);
    debug_assert_eq!(res.component_count(), r + 1);
    Ok(res)
}

/// Minimum number of edges whose removal leaves `r` bipartite components
/// (other, non-bipartite components may remain).
pub fn upsilon_r(g: &Graph, r: usize) -> Result<InvariantResult> {
    g.require_connected()?;
    check_r(r, g.vertex_count())?;
    let witness = min_deletion(g, Target::Bipartite(r))?;
    let res = InvariantResult::build(g, witness);
    debug_assert_eq!(res.bipartite_count(), r);
    Ok(res)
}

/// Minimum number of edges whose removal makes every component bipartite.
pub fn edge_biparticity_subsets(g: &Graph) -> Result<InvariantResult> {
    let witness = min_deletion(g, Target::AllBipartite)?;
    Ok(InvariantResult::build(g, witness))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// A sign for every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignAssignment(pub Vec<Sign>);

impl SignAssignment {
    fn from_minus_mask(s: usize, minus: u64) -> Self {
        Self(
            (0..s)
                .map(|v| {
                    if minus >> v & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect(),
        )
    }

    pub fn is_surjective(&self) -> bool {
        self.0.contains(&Sign::Plus) && self.0.contains(&Sign::Minus)
    }

    /// Edges whose two endpoints carry the same sign.
    pub fn same_sign_edges(&self, g: &Graph) -> EdgeSet {
        EdgeSet::from_sorted(
            g.edges()
                .iter()
                .enumerate()
                .filter(|(_, &(u, v))| self.0[u] == self.0[v])
                .map(|(j, _)| j)
                .collect(),
        )
    }
}

/// Edge biparticity as the least number of same-sign edges over surjective
/// vertex signings. Vertex 0 is fixed to `+` since a global flip changes
/// nothing; the constant assignment is excluded.
pub fn edge_biparticity_signs(g: &Graph) -> Result<(usize, SignAssignment)> {
    let s = g.vertex_count();
    if s < 2 {
        return Err(Error::OutOfRange {
            name: "vertex count",
            value: s,
            lo: 2,
            hi: MAX_SIGN_VERTICES,
        });
    }
    if s > MAX_SIGN_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "sign assignments",
            count: format!("2^{}", s - 1),
            budget: 1 << (MAX_SIGN_VERTICES - 1),
        });
    }
    let edges = g.edges();
    let (count, minus) = (1u64..1 << (s - 1))
        .into_par_iter()
        .map(|mask| {
            let minus = mask << 1;
            let same = edges
                .iter()
                .filter(|&&(u, v)| (minus >> u ^ minus >> v) & 1 == 0)
                .count();
            (same, minus)
        })
        .min()
        .expect("at least one surjective assignment");
    Ok((count, SignAssignment::from_minus_mask(s, minus)))
}

/// Signs a graph by the colour classes of `g` minus `witness`, when that graph
/// is bipartite. For a minimum bipartizing set the same-sign edges are exactly
/// the witness.
pub fn signs_for_bipartizer(g: &Graph, witness: &EdgeSet) -> Result<Option<SignAssignment>> {
    let mut signs = vec![Sign::Plus; g.vertex_count()];
    for comp in g.components(witness) {
        match g.bipartition(&comp, witness)? {
            Some(b) => {
                for v in b.right {
                    signs[v] = Sign::Minus;
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(SignAssignment(signs)))
}

/// Global minimum edge cut as the least boundary over nonempty proper vertex
/// subsets. Independent of the deletion search.
pub fn min_cut_oracle(g: &Graph) -> Result<usize> {
    g.require_connected()?;
    let s = g.vertex_count();
    if s < 2 {
        return Err(Error::OutOfRange {
            name: "vertex count",
            value: s,
            lo: 2,
            hi: MAX_SIGN_VERTICES,
        });
    }
    if s > MAX_SIGN_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "vertex subsets",
            count: format!("2^{}", s - 1),
            budget: 1 << (MAX_SIGN_VERTICES - 1),
        });
    }
    let edges = g.edges();
    // subsets containing vertex 0, excluding the full vertex set
    let cut = (0u64..(1 << (s - 1)) - 1)
        .into_par_iter()
        .map(|mask| {
            let side = mask << 1 | 1;
            edges
                .iter()
                .filter(|&&(u, v)| (side >> u ^ side >> v) & 1 == 1)
                .count()
        })
        .min()
        .expect("s >= 2");
    Ok(cut)
}
