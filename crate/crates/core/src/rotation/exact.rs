//! Exponential-time oracles over vertex subsets.

use serde::Serialize;

use super::Path;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `n` accepted by the subset dynamic programs.
pub const EXACT_LIMIT: usize = 20;

fn check_size(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge { what, n, limit });
    }
    Ok(())
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect()
}

/// Held–Karp: `reach[S]` is the set of endpoints `v` such that some path
/// starting at vertex 0 visits exactly `S` and ends at `v`.
pub fn brute_force_hamiltonian(g: &Graph) -> Result<bool> {
    let n = g.n();
    check_size("brute_force_hamiltonian", n, EXACT_LIMIT)?;
    if n < 3 {
        return Ok(false);
    }
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    let mut reach = vec![0u32; 1 << n];
    reach[1] = 1;
    for s in (1..=full).step_by(2) {
        let ends = reach[s as usize];
        if ends == 0 {
            continue;
        }
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = adj[v] & !s;
            while next != 0 {
                let w = next.trailing_zeros();
                next &= next - 1;
                reach[(s | 1 << w) as usize] |= 1 << w;
            }
        }
    }
    Ok(reach[full as usize] & adj[0] != 0)
}

/// `ends[S]`: the vertices at which some path with vertex set exactly `S` ends.
fn path_ends(adj: &[u32]) -> Vec<u32> {
    let n = adj.len();
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for s in 1..(1u32 << n) {
        let mut e = ends[s as usize];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = adj[v] & !s;
            while next != 0 {
                let w = next.trailing_zeros();
                next &= next - 1;
                ends[(s | 1 << w) as usize] |= 1 << w;
            }
        }
    }
    ends
}

/// A longest path of `g` (by vertex count), found by subset dynamic
/// programming. Among longest paths, the one with the smallest vertex mask is
/// reconstructed, starting from its lowest possible end vertex.
pub fn longest_path(g: &Graph) -> Result<Path> {
    let n = g.n();
    check_size("longest_path", n, EXACT_LIMIT)?;
    if n == 0 {
        return Err(Error::InvalidPath("graph has no vertices".into()));
    }
    let adj = adjacency_masks(g);
    let ends = path_ends(&adj);
    let best = (1u32..(1 << n))
        .filter(|&s| ends[s as usize] != 0)
        .max_by_key(|&s| (s.count_ones(), std::cmp::Reverse(s)))
        .expect("single vertices are paths");
    let mut s = best;
    let mut v = ends[s as usize].trailing_zeros();
    let mut out = vec![v as usize];
    while s.count_ones() > 1 {
        let rest = s & !(1 << v);
        let prev = ends[rest as usize] & adj[v as usize];
        let u = prev.trailing_zeros();
        out.push(u as usize);
        s = rest;
        v = u;
    }
    Ok(Path::from_vec_unchecked(out))
}

/// Evidence that a path is longest in its working graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LongestPathCertificate {
    /// Verified by exhaustive dynamic programming.
    BruteForce,
    /// Only known to admit no extension found by the solver.
    Heuristic,
}

/// `Some(BruteForce)` iff `path` is a path of `working` with the maximum
/// number of vertices.
pub fn certify_longest(working: &Graph, path: &Path) -> Result<Option<LongestPathCertificate>> {
    if !path.is_path_in(working) {
        return Err(Error::InvalidPath("not a path of the working graph".into()));
    }
    let best = longest_path(working)?;
    Ok((best.len() == path.len()).then_some(LongestPathCertificate::BruteForce))
}

/// For the induced subgraph on `vertices` (at most [`EXACT_LIMIT`] of them),
/// `pairs[i]` is the bitmask of indices `j` such that a Hamilton path of the
/// induced subgraph runs from `vertices[i]` to `vertices[j]`.
pub fn hamilton_path_pairs(g: &Graph, vertices: &[usize]) -> Result<Vec<u32>> {
    check_size("hamilton_path_pairs", vertices.len(), EXACT_LIMIT)?;
    let adj: Vec<u32> = vertices
        .iter()
        .map(|&v| vertices.iter().enumerate().filter(|&(_, &w)| g.has_edge(v, w)).fold(0u32, |m, (j, _)| m | 1 << j))
        .collect();
    Ok(hamilton_pairs_local(&adj))
}

/// [`hamilton_path_pairs`] on a graph given by adjacency bitmasks over `0..k`.
pub(crate) fn hamilton_pairs_local(adj: &[u32]) -> Vec<u32> {
    let k = adj.len();
    if k == 0 {
        return Vec::new();
    }
    // starts[S * k + v]: starting indices of paths covering S and ending at v.
    let mut starts = vec![0u32; (1 << k) * k];
    for v in 0..k {
        starts[(1 << v) * k + v] = 1 << v;
    }
    for s in 1usize..(1 << k) {
        for v in 0..k {
            let from = starts[s * k + v];
            if from == 0 {
                continue;
            }
            let mut next = adj[v] & !(s as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                starts[(s | 1 << w) * k + w] |= from;
            }
        }
    }
    let full = (1usize << k) - 1;
    let mut pairs = vec![0u32; k];
    for w in 0..k {
        let mut from = starts[full * k + w];
        while from != 0 {
            let v = from.trailing_zeros() as usize;
            from &= from - 1;
            pairs[v] |= 1 << w;
        }
    }
    pairs
}

/// Vertex count of a longest path in the graph given by adjacency bitmasks.
pub(crate) fn longest_len_local(adj: &[u32]) -> usize {
    path_ends(adj).iter().enumerate().filter(|&(_, &e)| e != 0).map(|(s, _)| s.count_ones() as usize).max().unwrap_or(0)
}

pub(crate) fn masks(g: &Graph) -> Vec<u32> {
    adjacency_masks(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{cycle, path, petersen, star};
    use crate::random::{gnp, GraphModelParams};
    use proptest::prelude::*;

    #[test]
    fn hamiltonian_examples() {
        assert!(brute_force_hamiltonian(&Graph::complete(4)).unwrap());
        assert!(!brute_force_hamiltonian(&star(3)).unwrap());
        assert!(brute_force_hamiltonian(&cycle(7)).unwrap());
        assert!(!brute_force_hamiltonian(&path(5)).unwrap());
        assert!(!brute_force_hamiltonian(&Graph::complete(2)).unwrap());
        assert!(matches!(brute_force_hamiltonian(&Graph::empty(21)), Err(Error::TooLarge { limit: 20, .. })));
    }

    #[test]
    fn petersen_is_not_hamiltonian() {
        // Frozen from this oracle; matches the classical fact.
        assert!(!brute_force_hamiltonian(&petersen()).unwrap());
        let p = longest_path(&petersen()).unwrap();
        assert_eq!(p.len(), 10);
    }

    #[test]
    fn longest_path_examples() {
        let p = longest_path(&star(3)).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_path_in(&star(3)));
        assert_eq!(longest_path(&Graph::empty(3)).unwrap().len(), 1);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(longest_path(&two).unwrap().vertices(), &[0, 1, 2]);
    }

    #[test]
    fn pairs_on_a_path_graph() {
        let g = path(4);
        let pairs = hamilton_path_pairs(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(pairs, vec![0b1000, 0, 0, 0b0001]);
        let k4 = Graph::complete(4);
        let pairs = hamilton_path_pairs(&k4, &[0, 1, 2, 3]).unwrap();
        assert!(pairs.iter().enumerate().all(|(i, &m)| m == 0b1111 & !(1 << i)));
    }

    fn dfs_hamiltonian(g: &Graph) -> bool {
        fn go(g: &Graph, path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if path.len() == g.n() {
                return g.has_edge(path[0], *path.last().unwrap());
            }
            let last = *path.last().unwrap();
            for &w in g.neighbors(last) {
                let w = w as usize;
                if !used[w] {
                    used[w] = true;
                    path.push(w);
                    if go(g, path, used) {
                        return true;
                    }
                    path.pop();
                    used[w] = false;
                }
            }
            false
        }
        if g.n() < 3 {
            return false;
        }
        let mut used = vec![false; g.n()];
        used[0] = true;
        go(g, &mut vec![0], &mut used)
    }

    proptest! {
        #[test]
        fn held_karp_matches_dfs(n in 1usize..9, p in 0.0f64..1.0, seed: u64) {
            let g = gnp(GraphModelParams::new(n, p).unwrap(), seed);
            prop_assert_eq!(brute_force_hamiltonian(&g).unwrap(), dfs_hamiltonian(&g));
        }

        #[test]
        fn longest_path_is_valid(n in 1usize..10, p in 0.0f64..1.0, seed: u64) {
            let g = gnp(GraphModelParams::new(n, p).unwrap(), seed);
            let lp = longest_path(&g).unwrap();
            prop_assert!(lp.is_path_in(&g));
            prop_assert_eq!(certify_longest(&g, &lp).unwrap(), Some(LongestPathCertificate::BruteForce));
            if brute_force_hamiltonian(&g).unwrap() {
                prop_assert_eq!(lp.len(), n);
            }
        }
    }
}
