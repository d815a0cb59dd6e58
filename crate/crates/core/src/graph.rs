//! Deterministic adjacency structures on dense integer ids, the invariants
//! used by every verification target (order, valency, diameter, girth), block
//! partitions, quotient graphs, and the multicover classification of the
//! cross-block bipartite structure.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("blocks must have equal sizes")]
    UnequalBlocks,
    #[error("partition does not cover the vertex set exactly once")]
    BadPartition,
    #[error("graph order {0} exceeds the supported bound {1}")]
    TooLarge(usize, usize),
    #[error("edge endpoints out of range or loop")]
    BadEdge,
}

/// Undirected simple graph as per-vertex sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    pub labels: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v || u as usize >= n || v as usize >= n {
                return Err(GraphError::BadEdge);
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
            nb.dedup();
        }
        Ok(Graph { adj, labels: None })
    }

    /// Neighbour lists must already be symmetric; sorted and deduped here.
    pub fn from_neighbor_lists(adj: Vec<Vec<u32>>) -> Graph {
        let mut g = Graph { adj, labels: None };
        for nb in &mut g.adj {
            nb.sort_unstable();
            nb.dedup();
        }
        debug_assert!(g.is_symmetric());
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn is_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|nb| nb.len()).sum::<usize>() / 2
    }

    /// Edges with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    /// Ordered pairs of adjacent vertices.
    pub fn arcs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(2 * self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                out.push((u as u32, v));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, nb)| {
            nb.iter()
                .all(|&v| v as usize != u && self.adj[v as usize].binary_search(&(u as u32)).is_ok())
        })
    }

    /// Relabel by a bijection: vertex v becomes perm[v].
    pub fn relabel(&self, perm: &[u32]) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (u, nb) in self.adj.iter().enumerate() {
            let mut row: Vec<u32> = nb.iter().map(|&v| perm[v as usize]).collect();
            row.sort_unstable();
            adj[perm[u] as usize] = row;
        }
        Graph { adj, labels: None }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Invariants {
    pub order: usize,
    pub regular: bool,
    pub valency: Option<usize>,
    pub connected: bool,
    /// None when disconnected.
    pub diameter: Option<u32>,
    /// None when there is no cycle.
    pub girth: Option<u32>,
}

fn bfs_ecc_and_girth(g: &Graph, src: u32) -> (Option<u32>, u32, Option<u32>) {
    let n = g.n();
    let mut dist = vec![u32::MAX; n];
    let mut q = VecDeque::new();
    dist[src as usize] = 0;
    q.push_back(src);
    let mut seen = 1usize;
    let mut ecc = 0;
    let mut girth: Option<u32> = None;
    while let Some(u) = q.pop_front() {
        let du = dist[u as usize];
        for &v in g.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = du + 1;
                ecc = du + 1;
                seen += 1;
                q.push_back(v);
            } else if dist[v as usize] >= du {
                // non-tree edge: closed walk through the source, never
                // shorter than the girth, exact from sources on a shortest cycle
                let c = du + dist[v as usize] + 1;
                if girth.is_none_or(|b| c < b) {
                    girth = Some(c);
                }
            }
        }
    }
    let connected_ecc = if seen == n { Some(ecc) } else { None };
    (connected_ecc, seen as u32, girth)
}

pub fn invariants(g: &Graph) -> Invariants {
    let n = g.n();
    if n == 0 {
        return Invariants {
            order: 0,
            regular: true,
            valency: Some(0),
            connected: true,
            diameter: Some(0),
            girth: None,
        };
    }
    let d0 = g.degree(0);
    let regular = (0..n).all(|v| g.degree(v as u32) == d0);
    let results: Vec<(Option<u32>, u32, Option<u32>)> = (0..n as u32)
        .into_par_iter()
        .map(|s| bfs_ecc_and_girth(g, s))
        .collect();
    let connected = results.iter().all(|r| r.0.is_some());
    let diameter = if connected {
        results.iter().map(|r| r.0.unwrap()).max()
    } else {
        None
    };
    let girth = results.iter().filter_map(|r| r.2).min();
    Invariants {
        order: n,
        regular,
        valency: if regular { Some(d0) } else { None },
        connected,
        diameter,
        girth,
    }
}

/// Disjoint blocks covering the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<Vec<u32>>,
    pub block_of: Vec<u32>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<u32>>) -> Result<Partition, GraphError> {
        let mut block_of = vec![u32::MAX; n];
        for (bi, blk) in blocks.iter().enumerate() {
            for &v in blk {
                if v as usize >= n || block_of[v as usize] != u32::MAX {
                    return Err(GraphError::BadPartition);
                }
                block_of[v as usize] = bi as u32;
            }
        }
        if block_of.iter().any(|&b| b == u32::MAX) {
            return Err(GraphError::BadPartition);
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Partition { blocks, block_of })
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            blocks: (0..n as u32).map(|v| vec![v]).collect(),
            block_of: (0..n as u32).collect(),
        }
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn equal_block_sizes(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Nontrivial when some block has 1 < |B| < n.
    pub fn is_nontrivial(&self, n: usize) -> bool {
        self.blocks.iter().any(|b| b.len() > 1 && b.len() < n)
    }
}

/// Blocks adjacent iff at least one cross edge exists.
pub fn quotient(g: &Graph, part: &Partition) -> Graph {
    let nb = part.n_blocks();
    let mut edges = Vec::new();
    for (u, adj) in g.adj.iter().enumerate() {
        let bu = part.block_of[u];
        for &v in adj {
            let bv = part.block_of[v as usize];
            if bu < bv {
                edges.push((bu, bv));
            }
        }
    }
    Graph::from_edges(nb, &edges).expect("quotient edges are valid")
}

pub fn neighbor_block_count(g: &Graph, part: &Partition, v: u32) -> usize {
    let mut bs: Vec<u32> = g
        .neighbors(v)
        .iter()
        .map(|&w| part.block_of[w as usize])
        .collect();
    bs.sort_unstable();
    bs.dedup();
    bs.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverClass {
    Multicover,
    AlmostMulticover,
    Cover,
    AlmostCover,
    Other,
}

/// Cross-block structure of a graph with respect to an equal-block-size
/// partition, computed exhaustively over adjacent block pairs.
#[derive(Debug, Clone, Serialize)]
pub struct CoverProfile {
    pub block_size: usize,
    pub classification: CoverClass,
    /// Vertices of B with a neighbour in C, for adjacent (B, C); None when
    /// the count varies over pairs.
    pub non_isolated: Option<usize>,
    /// Uniform valency of the bipartite graphs induced between adjacent
    /// blocks, isolated vertices excluded; None when not uniform.
    pub bipartite_valency: Option<usize>,
    /// Cross edges form a matching between the non-isolated parts.
    pub matching: bool,
    /// Number of blocks D with G(D) cap B = G(C) cap B, at a representative
    /// adjacent pair (B, C).
    pub multiplicity: usize,
    /// All adjacent pairs produced identical statistics.
    pub consistent: bool,
}

pub fn cover_profile(g: &Graph, part: &Partition) -> Result<CoverProfile, GraphError> {
    if !part.equal_block_sizes() {
        return Err(GraphError::UnequalBlocks);
    }
    let nb = part.n_blocks();
    let bsize = part.blocks[0].len();
    let q = quotient(g, part);
    let mut non_isolated_counts: Vec<usize> = Vec::new();
    let mut bip_valencies: Vec<usize> = Vec::new();
    let mut matching = true;
    for b in 0..nb as u32 {
        for &c in q.neighbors(b) {
            // directed pair (B, C): degrees of B-vertices into C
            let cset = &part.blocks[c as usize];
            let mut degs = Vec::with_capacity(bsize);
            for &u in &part.blocks[b as usize] {
                let d = g
                    .neighbors(u)
                    .iter()
                    .filter(|&&v| cset.binary_search(&v).is_ok())
                    .count();
                degs.push(d);
            }
            let non_iso: Vec<usize> = degs.iter().copied().filter(|&d| d > 0).collect();
            non_isolated_counts.push(non_iso.len());
            let mut uniq = non_iso.clone();
            uniq.sort_unstable();
            uniq.dedup();
            if uniq.len() == 1 {
                bip_valencies.push(uniq[0]);
                if uniq[0] != 1 {
                    matching = false;
                }
            } else {
                bip_valencies.push(usize::MAX); // non-uniform marker
                matching = false;
            }
        }
    }
    non_isolated_counts.sort_unstable();
    non_isolated_counts.dedup();
    bip_valencies.sort_unstable();
    bip_valencies.dedup();
    let non_isolated = (non_isolated_counts.len() == 1).then(|| non_isolated_counts[0]);
    let bipartite_valency =
        (bip_valencies.len() == 1 && bip_valencies[0] != usize::MAX).then(|| bip_valencies[0]);
    let consistent = non_isolated.is_some() && bipartite_valency.is_some();

    let classification = match non_isolated {
        Some(k) if k == bsize => {
            if matching && consistent {
                CoverClass::Cover
            } else {
                CoverClass::Multicover
            }
        }
        Some(k) if k + 1 == bsize => {
            if matching && consistent {
                CoverClass::AlmostCover
            } else {
                CoverClass::AlmostMulticover
            }
        }
        _ => CoverClass::Other,
    };

    // multiplicity at a representative adjacent pair
    let multiplicity = if q.edge_count() > 0 {
        let b = (0..nb as u32).find(|&b| q.degree(b) > 0).unwrap();
        let c0 = q.neighbors(b)[0];
        let trace = |c: u32| -> Vec<u32> {
            let cset = &part.blocks[c as usize];
            part.blocks[b as usize]
                .iter()
                .copied()
                .filter(|&u| {
                    g.neighbors(u)
                        .iter()
                        .any(|&v| cset.binary_search(&v).is_ok())
                })
                .collect()
        };
        let t0 = trace(c0);
        q.neighbors(b).iter().filter(|&&d| trace(d) == t0).count()
    } else {
        0
    };

    Ok(CoverProfile {
        block_size: bsize,
        classification,
        non_isolated,
        bipartite_valency,
        matching,
        multiplicity,
        consistent,
    })
}

/// With independent equal-size blocks this is exactly the lexicographic
/// product structure over the quotient: adjacency between any two blocks is
/// all-or-nothing.
pub fn is_lex_product(g: &Graph, part: &Partition) -> Result<bool, GraphError> {
    if !part.equal_block_sizes() {
        return Err(GraphError::UnequalBlocks);
    }
    let bsize = part.blocks[0].len();
    // intra-block edges rule it out (the second factor must be empty here)
    for blk in &part.blocks {
        for &u in blk {
            if g.neighbors(u)
                .iter()
                .any(|&v| part.block_of[v as usize] == part.block_of[u as usize])
            {
                return Ok(false);
            }
        }
    }
    let q = quotient(g, part);
    for b in 0..part.n_blocks() as u32 {
        for &c in q.neighbors(b) {
            let cset = &part.blocks[c as usize];
            for &u in &part.blocks[b as usize] {
                let d = g
                    .neighbors(u)
                    .iter()
                    .filter(|&&v| cset.binary_search(&v).is_ok())
                    .count();
                if d != bsize {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn invariants_k4() {
        let inv = invariants(&k4());
        assert_eq!(
            inv,
            Invariants {
                order: 4,
                regular: true,
                valency: Some(3),
                connected: true,
                diameter: Some(1),
                girth: Some(3),
            }
        );
    }

    #[test]
    fn invariants_cycles_and_paths() {
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let inv = invariants(&c6);
        assert_eq!(inv.diameter, Some(3));
        assert_eq!(inv.girth, Some(6));
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let inv = invariants(&p4);
        assert_eq!(inv.girth, None);
        assert_eq!(inv.diameter, Some(3));
        assert!(!inv.regular);
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        )
        .unwrap();
        let inv = invariants(&petersen);
        assert_eq!(
            (inv.valency, inv.diameter, inv.girth),
            (Some(3), Some(2), Some(5))
        );
    }

    #[test]
    fn invariants_disconnected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let inv = invariants(&g);
        assert!(!inv.connected);
        assert_eq!(inv.diameter, None);
    }

    #[test]
    fn quotient_by_singletons_is_identity() {
        let g = k4();
        let q = quotient(&g, &Partition::singletons(4));
        assert_eq!(q.edges(), g.edges());
    }

    #[test]
    fn lex_product_detection() {
        // C4 blown up by the empty 2-vertex graph
        let mut edges = Vec::new();
        for (b, c) in [(0u32, 1u32), (1, 2), (2, 3), (3, 0)] {
            for i in 0..2 {
                for j in 0..2 {
                    edges.push((2 * b + i, 2 * c + j));
                }
            }
        }
        let g = Graph::from_edges(8, &edges).unwrap();
        let part =
            Partition::new(8, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]).unwrap();
        assert!(is_lex_product(&g, &part).unwrap());
        // removing one cross edge breaks it
        let g2 = Graph::from_edges(8, &edges[1..]).unwrap();
        assert!(!is_lex_product(&g2, &part).unwrap());
        // singleton blocks: trivially a lex product over itself
        assert!(is_lex_product(&g, &Partition::singletons(8)).unwrap());
    }

    #[test]
    fn cover_profile_classifications() {
        // C6 over C3 with antipodal blocks is a cover
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let part = Partition::new(6, vec![vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        let p = cover_profile(&c6, &part).unwrap();
        assert_eq!(p.classification, CoverClass::Cover);
        assert_eq!(p.bipartite_valency, Some(1));

        let bad = Partition::new(6, vec![vec![0], vec![1, 4], vec![2, 3, 5]]).unwrap();
        assert!(bad.equal_block_sizes() == false);
        assert_eq!(
            cover_profile(&c6, &bad).unwrap_err(),
            GraphError::UnequalBlocks
        );
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![2]]).is_ok());
    }
}
