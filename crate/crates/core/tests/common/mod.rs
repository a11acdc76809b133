#![allow(dead_code)]

use ghwlab::{FMatrix, FieldSpec, Graph, LinearCode};
use proptest::prelude::*;

/// Connected graphs on `s_lo..=s_hi` vertices: a random spanning tree plus
/// random extra edges, capped at `max_edges`.
pub fn connected_graph(s_lo: usize, s_hi: usize, max_edges: usize) -> impl Strategy<Value = Graph> {
    (s_lo..=s_hi)
        .prop_flat_map(|s| {
            let parents: Vec<_> = (1..s).map(|i| 0..i).collect();
            let pairs = s * (s - 1) / 2;
            (
                Just(s),
                parents,
                proptest::collection::vec(any::<bool>(), pairs),
            )
        })
        .prop_map(move |(s, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, i + 1))
                .collect();
            let mut idx = 0;
            for u in 0..s {
                for v in u + 1..s {
                    if extra[idx] && edges.len() < max_edges && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                    idx += 1;
                }
            }
            Graph::new(s, edges).unwrap()
        })
}

/// Random code over `F_p`: a `k x n` matrix of arbitrary residues.
pub fn random_code(p: u32, n_hi: usize, k_hi: usize) -> impl Strategy<Value = LinearCode> {
    (1..=n_hi)
        .prop_flat_map(move |n| (Just(n), 1..=k_hi.min(n)))
        .prop_flat_map(move |(n, k)| {
            (
                Just(n),
                Just(k),
                proptest::collection::vec(0..p as u16, n * k),
            )
        })
        .prop_map(move |(n, k, data)| {
            let f = FieldSpec::new(p as u64).unwrap();
            LinearCode::from_generator(&FMatrix::from_residues(f, k, n, data).unwrap())
        })
}

/// Components of `g` minus the edges in `removed`, each with a 2-colourability flag.
pub fn components_bfs(g: &Graph, removed: u64) -> Vec<(Vec<usize>, bool)> {
    let s = g.vertex_count();
    let mut adj = vec![Vec::new(); s];
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        if removed >> j & 1 == 0 {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut colour = vec![None; s];
    let mut out = Vec::new();
    for start in 0..s {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        let mut members = vec![start];
        let mut bipartite = true;
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        members.push(v);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => bipartite = false,
                    _ => {}
                }
            }
        }
        members.sort();
        out.push((members, bipartite));
    }
    out
}

/// Least deletion size over all `2^m` edge subsets satisfying `pred`.
pub fn exhaustive_min(g: &Graph, pred: impl Fn(&[(Vec<usize>, bool)]) -> bool) -> usize {
    let m = g.edge_count();
    (0u64..1 << m)
        .filter(|&mask| pred(&components_bfs(g, mask)))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .expect("deleting all edges satisfies every predicate used here")
}

pub fn lambda_oracle(g: &Graph, r: usize) -> usize {
    exhaustive_min(g, |c| c.len() > r)
}

pub fn upsilon_oracle(g: &Graph, r: usize) -> usize {
    exhaustive_min(g, |c| c.iter().filter(|(_, b)| *b).count() >= r)
}

pub fn phi_oracle(g: &Graph) -> usize {
    exhaustive_min(g, |c| c.iter().all(|(_, b)| *b))
}

/// `delta_r` as the least `|I|` with `k - rank(G restricted off I) >= r`.
pub fn ghw_oracle(code: &LinearCode, r: usize) -> usize {
    let g = code.generator();
    let n = code.length();
    let k = code.dimension();
    (0u32..1 << n)
        .filter(|&mask| {
            let keep: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 0).collect();
            k - g.select_columns(&keep).rank() >= r
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

/// Every codeword, by enumerating messages.
pub fn codewords(code: &LinearCode) -> Vec<Vec<u16>> {
    let f = code.field();
    let p = f.p() as u64;
    let k = code.dimension();
    let g = code.generator();
    (0..p.pow(k as u32))
        .map(|mut idx| {
            let mut word = vec![0u16; code.length()];
            for i in 0..k {
                let c = (idx % p) as u16;
                idx /= p;
                for (j, w) in word.iter_mut().enumerate() {
                    *w = f.add(*w, f.mul(c, g.get(i, j)));
                }
            }
            word
        })
        .collect()
}
