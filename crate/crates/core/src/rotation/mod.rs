//! Pósa rotation–extension: paths, single rotations, endpoint closures,
//! a Hamilton cycle solver, exact oracles and the RE / complement checks.

mod closure;
mod exact;
mod re;
mod solver;

pub use closure::{endpoint_expand, rotation_closure, RotationRecord, RotationState};
pub use exact::{
    brute_force_hamiltonian, certify_longest, hamilton_path_pairs, longest_path, LongestPathCertificate, EXACT_LIMIT,
};
pub use re::{check_complements, check_re, re_witness, CheckMode, ReOutcome, ReReport, ReWitness, RE_EXHAUSTIVE_LIMIT};
pub use solver::{
    default_level_cap, default_rotation_budget, find_hamilton_cycle, verify_hamilton_cycle, Budget, FailureKind,
    HamiltonReport,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A sequence of distinct vertices `v_1 ... v_ℓ`. Consecutive vertices need
/// not be adjacent in any particular graph: a path "on V(G)" only has its
/// vertices in `V(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(n: usize, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("path has no vertices".into()));
        }
        let mut seen = vec![false; n];
        for &v in &vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPath(format!("vertex {v} repeats")));
            }
        }
        Ok(Self(vertices))
    }

    pub(crate) fn from_vec_unchecked(vertices: Vec<usize>) -> Self {
        Self(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    /// The path's own edges as a graph on `n` vertices.
    pub fn as_graph(&self, n: usize) -> Graph {
        Graph::from_edges(n, self.edges()).expect("distinct path vertices")
    }

    /// True iff every consecutive pair is an edge of `g`.
    pub fn is_path_in(&self, g: &Graph) -> bool {
        self.edges().all(|(a, b)| g.has_edge(a, b))
    }

    pub(crate) fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }
}

/// One-vertex extension in `G ∪ P`: the lowest-id `G`-neighbour outside
/// `V(P)` of the last vertex, appended; failing that, of the first vertex,
/// prepended. `None` when neither endpoint has such a neighbour.
pub fn extend(g: &Graph, path: &Path) -> Option<Path> {
    let inside = path.mask(g.n());
    let outside = |v: usize| g.neighbors(v).iter().map(|&w| w as usize).find(|&w| !inside[w]);
    if let Some(w) = outside(path.last()) {
        let mut v = path.0.clone();
        v.push(w);
        return Some(Path(v));
    }
    outside(path.first()).map(|w| {
        let mut v = Vec::with_capacity(path.len() + 1);
        v.push(w);
        v.extend_from_slice(&path.0);
        Path(v)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rotation {
    pub path: Path,
    pub broken: (usize, usize),
    /// The pivot was the successor of the moving endpoint, so the path is unchanged.
    pub no_op: bool,
}

/// Rotates `path` with fixed endpoint `u` about `pivot`, which must be a
/// `G`-neighbour of the other endpoint `v_1`. Produces
/// `v_{i-1} ... v_1 v_i v_{i+1} ... u` and the broken edge `{v_{i-1}, v_i}`.
pub fn rotate(g: &Graph, path: &Path, u: usize, pivot: usize) -> Result<Rotation> {
    let oriented = if path.last() == u {
        path.clone()
    } else if path.first() == u {
        path.reversed()
    } else {
        return Err(Error::InvalidRotation(format!("{u} is not an endpoint of the path")));
    };
    if pivot == u {
        return Err(Error::InvalidRotation("the pivot cannot be the fixed endpoint".into()));
    }
    let v1 = oriented.first();
    let i = oriented
        .0
        .iter()
        .position(|&x| x == pivot)
        .ok_or_else(|| Error::InvalidRotation(format!("pivot {pivot} is not on the path")))?;
    if !g.has_edge(v1, pivot) {
        return Err(Error::InvalidRotation(format!("pivot {pivot} is not adjacent to the moving endpoint {v1}")));
    }
    let mut v = oriented.0;
    let broken = (v[i - 1], v[i]);
    v[..i].reverse();
    Ok(Rotation { path: Path(v), broken, no_op: i == 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn path_validation() {
        assert!(Path::new(5, vec![0, 1, 0]).is_err());
        assert!(Path::new(5, vec![0, 5]).is_err());
        assert!(Path::new(5, vec![]).is_err());
        let p = Path::new(5, vec![3, 1, 4]).unwrap();
        assert_eq!((p.first(), p.last(), p.len()), (3, 4, 3));
        assert_eq!(p.reversed().vertices(), &[4, 1, 3]);
    }

    #[test]
    fn extend_examples() {
        let k4 = Graph::complete(4);
        let spanning = Path::new(4, vec![0, 1, 2, 3]).unwrap();
        assert!(extend(&k4, &spanning).is_none());

        let mut p = Path::new(4, vec![0, 1]).unwrap();
        for expected in [3, 4] {
            p = extend(&k4, &p).unwrap();
            assert_eq!(p.len(), expected);
        }
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);

        let triangles = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(extend(&triangles, &Path::new(6, vec![0, 1, 2]).unwrap()).is_none());

        // Only the tail can grow.
        let g = fixtures::path(4);
        let grown = extend(&g, &Path::new(4, vec![1, 2, 3]).unwrap()).unwrap();
        assert_eq!(grown.vertices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn rotate_examples() {
        // Vertices 1..=5 of the example live on 0..=5 here.
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 3)]).unwrap();
        let p = Path::new(6, vec![1, 2, 3, 4, 5]).unwrap();
        let r = rotate(&g, &p, 5, 3).unwrap();
        assert_eq!(r.path.vertices(), &[2, 1, 3, 4, 5]);
        assert_eq!(r.broken, (2, 3));
        assert!(!r.no_op);

        let r = rotate(&g, &p, 5, 2).unwrap();
        assert_eq!(r.path, p);
        assert!(r.no_op);

        assert!(matches!(rotate(&g, &p, 5, 5), Err(Error::InvalidRotation(_))));
        assert!(matches!(rotate(&g, &p, 5, 4), Err(Error::InvalidRotation(_))));
        assert!(matches!(rotate(&g, &p, 3, 2), Err(Error::InvalidRotation(_))));
        assert!(matches!(rotate(&g, &p, 5, 0), Err(Error::InvalidRotation(_))));
    }
}
