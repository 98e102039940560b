use serde::{Deserialize, Serialize};

use super::{DistinguishError, Graph};

/// Injective vertex map: `embedding[u]` is the host vertex of pattern vertex `u`.
pub type Embedding = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_pattern_vertices: usize,
    pub max_host_vertices: usize,
    /// Backtracking nodes visited per search.
    pub nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_pattern_vertices: 6,
            max_host_vertices: 10,
            nodes: 10_000_000,
        }
    }
}

impl SearchBudget {
    fn check_sizes(&self, pattern: &Graph, host: &Graph) -> Result<(), DistinguishError> {
        if pattern.vertex_count() > self.max_pattern_vertices {
            return Err(DistinguishError::BudgetExceeded(format!(
                "pattern has {} vertices, limit {}",
                pattern.vertex_count(),
                self.max_pattern_vertices
            )));
        }
        if host.vertex_count() > self.max_host_vertices {
            return Err(DistinguishError::BudgetExceeded(format!(
                "host has {} vertices, limit {}",
                host.vertex_count(),
                self.max_host_vertices
            )));
        }
        Ok(())
    }
}

/// Depth-first search over partial embeddings, assigning pattern vertices in
/// index order and host candidates in ascending order. Calls `found` on every
/// complete embedding until it returns `false`.
fn search(
    pattern: &Graph,
    host: &Graph,
    budget: &SearchBudget,
    found: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<(), DistinguishError> {
    budget.check_sizes(pattern, host)?;
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(());
    }
    struct State<'a> {
        pattern: &'a Graph,
        host: &'a Graph,
        map: Vec<usize>,
        used: Vec<bool>,
        visited: u64,
        limit: u64,
    }

    fn extend(
        s: &mut State,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<bool, DistinguishError> {
        s.visited += 1;
        if s.visited > s.limit {
            return Err(DistinguishError::BudgetExceeded(format!(
                "subgraph search visited more than {} nodes",
                s.limit
            )));
        }
        let u = s.map.len();
        if u == s.pattern.vertex_count() {
            return Ok(found(&s.map));
        }
        for x in 0..s.host.vertex_count() {
            if s.used[x] || s.host.degree(x) < s.pattern.degree(u) {
                continue;
            }
            let consistent = s
                .pattern
                .neighbors(u)
                .iter()
                .filter(|&&w| w < u)
                .all(|&w| s.host.has_edge(x, s.map[w]));
            if !consistent {
                continue;
            }
            s.used[x] = true;
            s.map.push(x);
            let keep_going = extend(s, found)?;
            s.map.pop();
            s.used[x] = false;
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }

    let mut state = State {
        pattern,
        host,
        map: Vec::with_capacity(pattern.vertex_count()),
        used: vec![false; host.vertex_count()],
        visited: 0,
        limit: budget.nodes,
    };
    extend(&mut state, found).map(|_| ())
}

/// First embedding of `pattern` into `host` in lexicographic order, if any.
pub fn subgraph_iso_bruteforce(
    pattern: &Graph,
    host: &Graph,
    budget: &SearchBudget,
) -> Result<Option<Embedding>, DistinguishError> {
    let mut first = None;
    search(pattern, host, budget, &mut |m| {
        first = Some(m.to_vec());
        false
    })?;
    Ok(first)
}

/// Every embedding of `pattern` into `host`, in lexicographic order.
pub fn enumerate_embeddings(
    pattern: &Graph,
    host: &Graph,
    budget: &SearchBudget,
) -> Result<Vec<Embedding>, DistinguishError> {
    let mut all = Vec::new();
    search(pattern, host, budget, &mut |m| {
        all.push(m.to_vec());
        true
    })?;
    Ok(all)
}
