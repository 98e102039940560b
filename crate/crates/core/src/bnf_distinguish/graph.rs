use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::DistinguishError;

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    /// Normalized `(u, v)` with `u < v`.
    edges: BTreeSet<(usize, usize)>,
    /// Sorted neighbor lists.
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = DistinguishError;

    fn try_from(json: GraphJson) -> Result<Self, Self::Error> {
        Graph::new(json.n, json.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl Graph {
    /// Rejects self-loops, out-of-range endpoints and repeated edges.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, DistinguishError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(DistinguishError::InvalidGraph(format!(
                    "edge ({u}, {v}) leaves the vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(DistinguishError::InvalidGraph(format!("self-loop at {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(DistinguishError::InvalidGraph(format!(
                    "duplicate edge ({u}, {v})"
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        Ok(Graph {
            n,
            edges: set,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, []).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// Path on `n` vertices (`n - 1` edges).
    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Parse the edge-list format: an `n m` header, then `m` lines of `u v`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, DistinguishError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let pair = |line: usize, l: &str| -> Result<(usize, usize), DistinguishError> {
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| DistinguishError::Parse {
                    line,
                    message: format!("{e}"),
                })?;
            match nums[..] {
                [a, b] => Ok((a, b)),
                _ => Err(DistinguishError::Parse {
                    line,
                    message: format!("expected two numbers, found {}", nums.len()),
                }),
            }
        };
        let (line, header) = lines.next().ok_or(DistinguishError::Parse {
            line: 1,
            message: "missing 'n m' header".into(),
        })?;
        let (n, m) = pair(line, header)?;
        let edges: Vec<(usize, usize)> = lines
            .map(|(line, l)| pair(line, l))
            .collect::<Result<_, _>>()?;
        if edges.len() != m {
            return Err(DistinguishError::Parse {
                line,
                message: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Accepts either JSON (`{"n": .., "edges": [[u, v], ..]}`) or the edge-list format.
    pub fn parse_any(text: &str) -> Result<Self, DistinguishError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| DistinguishError::Parse {
                line: e.line(),
                message: e.to_string(),
            })
        } else {
            Graph::parse_edge_list(text)
        }
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        Graph::new(self.n, self.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
    }

    /// Upper-triangle adjacency bits, pair `(i, j)` at a fixed position.
    fn adjacency_code(&self, perm: &[usize]) -> u64 {
        let mut code = 0u64;
        for (u, v) in self.edges() {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            code |= 1 << (b * (b - 1) / 2 + a);
        }
        code
    }

    /// Isomorphism-invariant code: the largest adjacency code over all
    /// relabelings. Exponential in `n`; only meant for catalogs of tiny graphs.
    pub fn canonical_code(&self) -> u64 {
        assert!(self.n <= 11, "canonical codes are limited to 11 vertices");
        let mut best = 0;
        for_each_permutation(self.n, |perm| best = best.max(self.adjacency_code(perm)));
        best
    }
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(perm: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if perm.len() == used.len() {
            f(perm);
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                rec(perm, used, f);
                perm.pop();
                used[v] = false;
            }
        }
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut f);
}

/// One representative of every isomorphism class of graphs with at most
/// `max_vertices` vertices, ordered by vertex count then canonical code.
pub fn graph_catalog(max_vertices: usize) -> Vec<Graph> {
    let mut levels: Vec<Vec<Graph>> = vec![vec![Graph::empty(0)]];
    for n in 1..=max_vertices {
        let mut seen: BTreeMap<u64, Graph> = BTreeMap::new();
        for g in &levels[n - 1] {
            // every graph on n vertices is a graph on n-1 plus a vertex with some neighborhood
            for mask in 0u32..(1 << (n - 1)) {
                let extra = (0..n - 1)
                    .filter(|&u| mask & (1 << u) != 0)
                    .map(|u| (u, n - 1));
                let h = Graph::new(n, g.edges().chain(extra)).unwrap();
                seen.entry(h.canonical_code()).or_insert(h);
            }
        }
        levels.push(seen.into_values().collect());
    }
    levels.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(Graph::complete(4).edge_count(), 6);
        assert_eq!(Graph::cycle(4).edge_count(), 4);
        assert_eq!(Graph::path(3).edge_count(), 2);
        assert_eq!(Graph::complete(4).neighbors(2), &[0, 1, 3]);
    }

    #[test]
    fn invalid_graphs() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::cycle(5);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        let parsed = Graph::parse_edge_list("# triangle\n3 3\n0 1\n1 2\n\n2 0\n").unwrap();
        assert_eq!(parsed, Graph::complete(3));
        assert!(matches!(
            Graph::parse_edge_list("3 2\n0 1\n"),
            Err(DistinguishError::Parse { .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("3 1\n0 x\n"),
            Err(DistinguishError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::path(4);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":4,"edges":[[0,1],[1,2],[2,3]]}"#);
        assert_eq!(Graph::parse_any(&text).unwrap(), g);
        assert!(Graph::parse_any(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn catalog_sizes_match_known_counts() {
        // number of unlabeled graphs on 0..=6 vertices
        let counts = [1, 1, 2, 4, 11, 34, 156];
        let catalog = graph_catalog(6);
        for (n, &want) in counts.iter().enumerate() {
            assert_eq!(
                catalog.iter().filter(|g| g.vertex_count() == n).count(),
                want,
                "n = {n}"
            );
        }
    }

    #[test]
    fn canonical_code_is_invariant() {
        let g = Graph::path(4);
        assert_eq!(
            g.canonical_code(),
            g.permuted(&[2, 0, 3, 1]).canonical_code()
        );
        assert_ne!(g.canonical_code(), Graph::cycle(4).canonical_code());
    }
}
