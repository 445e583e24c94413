//! Plain-graph diagnostics: triangle detection, exact clique number, and
//! exact (budgeted) chromatic number.
//!
//! Everything here is deterministic: search orders are fixed functions of
//! the input, so identical inputs give identical results, node counts
//! included. The chromatic search is exact branch-and-bound — clique number
//! below, greedy coloring above, then one k-colorability search per
//! candidate k — and degrades to an honest `Bracket` when the node budget
//! runs out.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors for graph and triple construction.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("loop on `{0}` is not allowed")]
    LoopArc(String),
}

/// A finite simple undirected graph with string-labeled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Graph, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            let ui = *index
                .get(&u)
                .ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let vi = *index
                .get(&v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            if ui == vi {
                return Err(GraphError::LoopArc(u));
            }
            set.insert((ui.min(vi), ui.max(vi)));
        }
        let mut neighbors = vec![Vec::new(); vertices.len()];
        for &(u, v) in &set {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        Ok(Graph {
            vertices,
            index,
            edges: set,
            neighbors,
        })
    }

    /// A cycle graph on `n ≥ 3` vertices `c0 … c{n-1}`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let vertices: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let edges = (0..n)
            .map(|i| (format!("c{i}"), format!("c{}", (i + 1) % n)))
            .collect();
        Graph::new(vertices, edges).expect("cycle is simple")
    }

    /// The complete graph on `n` vertices `k0 … k{n-1}`.
    pub fn complete(n: usize) -> Graph {
        let vertices: Vec<String> = (0..n).map(|i| format!("k{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((format!("k{i}"), format!("k{j}")));
            }
        }
        Graph::new(vertices, edges).expect("complete graph is simple")
    }

    /// The complete bipartite graph `K_{a,b}` on vertices `l0…, r0…`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut vertices: Vec<String> = (0..a).map(|i| format!("l{i}")).collect();
        vertices.extend((0..b).map(|i| format!("r{i}")));
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((format!("l{i}"), format!("r{j}")));
            }
        }
        Graph::new(vertices, edges).expect("bipartite graph is simple")
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id_of(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_ids(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.vertices[u].clone(), self.vertices[v].clone()))
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// The subgraph induced by the given vertex ids, in the given order.
    pub fn induced_subgraph(&self, ids: &[String]) -> Result<Graph, GraphError> {
        for id in ids {
            if !self.index.contains_key(id) {
                return Err(GraphError::UnknownVertex(id.clone()));
            }
        }
        let keep: HashMap<&str, ()> = ids.iter().map(|s| (s.as_str(), ())).collect();
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (self.vertices[u].as_str(), self.vertices[v].as_str()))
            .filter(|(u, v)| keep.contains_key(u) && keep.contains_key(v))
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect();
        Graph::new(ids.to_vec(), edges)
    }

    /// Some triangle, as vertex ids, if one exists (exact edge scan).
    pub fn find_triangle(&self) -> Option<[String; 3]> {
        for &(u, v) in &self.edges {
            let (nu, nv) = (&self.neighbors[u], &self.neighbors[v]);
            // Sorted-list intersection.
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = nu[i];
                        return Some([
                            self.vertices[u].clone(),
                            self.vertices[v].clone(),
                            self.vertices[w].clone(),
                        ]);
                    }
                }
            }
        }
        None
    }

    pub fn triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// Exact clique number by branch and bound.
    pub fn clique_number(&self) -> usize {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut best = 0;
        self.expand_clique(&order, 0, &mut best);
        best
    }

    fn expand_clique(&self, cands: &[usize], size: usize, best: &mut usize) {
        for (i, &v) in cands.iter().enumerate() {
            if size + (cands.len() - i) <= *best {
                return;
            }
            if size + 1 > *best {
                *best = size + 1;
            }
            let rest: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&u| self.has_edge(u, v))
                .collect();
            if !rest.is_empty() {
                self.expand_clique(&rest, size + 1, best);
            }
        }
    }

    /// Greedy coloring in (degree desc, index asc) order; returns the number
    /// of colors used — an upper bound for χ.
    pub fn greedy_coloring_bound(&self) -> u32 {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut colors = vec![0u32; self.n()];
        let mut used = 0u32;
        for &v in &order {
            let mut taken: BTreeSet<u32> = BTreeSet::new();
            for &u in &self.neighbors[v] {
                if colors[u] != 0 {
                    taken.insert(colors[u]);
                }
            }
            let c = (1..).find(|c| !taken.contains(c)).expect("some color free");
            colors[v] = c;
            used = used.max(c);
        }
        used
    }

    /// Exact 2-colorability (bipartiteness) by BFS.
    fn bipartite(&self) -> bool {
        let mut side = vec![0i8; self.n()];
        for s in 0..self.n() {
            if side[s] != 0 {
                continue;
            }
            side[s] = 1;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if side[v] == 0 {
                        side[v] = -side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Is the graph `k`-colorable? `None` when the node budget ran out.
    ///
    /// DSATUR branch and bound: always color a vertex of maximum saturation
    /// (distinct neighbor colors), breaking ties by degree then index, and
    /// never open a color more than one past the highest color in use.
    fn k_colorable(&self, k: u32, budget: &mut u64) -> Option<bool> {
        if k >= 120 {
            // Color masks are u128; desk-scale graphs never get here.
            return Some(true);
        }
        let mut colors = vec![0u32; self.n()];
        self.k_color_rec(k, &mut colors, 0, self.n(), budget)
    }

    fn k_color_rec(
        &self,
        k: u32,
        colors: &mut [u32],
        used_max: u32,
        uncolored: usize,
        budget: &mut u64,
    ) -> Option<bool> {
        if uncolored == 0 {
            return Some(true);
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        // Most saturated vertex, ties by degree then index.
        let mut pick = None;
        let mut pick_key = (0usize, 0usize);
        for v in 0..self.n() {
            if colors[v] != 0 {
                continue;
            }
            let mut mask: u128 = 0;
            for &u in &self.neighbors[v] {
                if colors[u] != 0 {
                    mask |= 1u128 << colors[u];
                }
            }
            let key = (mask.count_ones() as usize, self.degree(v));
            if pick.is_none() || key > pick_key {
                pick = Some((v, mask));
                pick_key = key;
            }
        }
        let (v, mask) = pick.expect("some vertex is uncolored");
        let limit = k.min(used_max + 1);
        for c in 1..=limit {
            if mask & (1u128 << c) != 0 {
                continue;
            }
            colors[v] = c;
            match self.k_color_rec(k, colors, used_max.max(c), uncolored - 1, budget) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => {
                    colors[v] = 0;
                    return None;
                }
            }
            colors[v] = 0;
        }
        Some(false)
    }

    /// Exact chromatic number within a node budget, or an honest bracket.
    pub fn chromatic_number(&self, budget: u64) -> ChromaticResult {
        let mut remaining = budget;
        let result = self.chromatic_inner(&mut remaining);
        ChromaticResult {
            outcome: result,
            nodes: budget - remaining,
            budget,
        }
    }

    fn chromatic_inner(&self, remaining: &mut u64) -> ChromaticOutcome {
        if self.n() == 0 {
            return ChromaticOutcome::Exact { chi: 0 };
        }
        let mut lower = self.clique_number() as u32;
        let upper = self.greedy_coloring_bound();
        debug_assert!(lower >= 1 && lower <= upper);
        let mut k = lower;
        while k < upper {
            // k = 1 and k = 2 are decided exactly without search.
            let verdict = if k == 1 {
                Some(self.edges.is_empty())
            } else if k == 2 {
                Some(self.bipartite())
            } else {
                self.k_colorable(k, remaining)
            };
            match verdict {
                Some(true) => return ChromaticOutcome::Exact { chi: k },
                Some(false) => {
                    lower = k + 1;
                    k += 1;
                }
                None => return ChromaticOutcome::Bracket { lower, upper },
            }
        }
        ChromaticOutcome::Exact { chi: upper }
    }
}

/// Result of the chromatic computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChromaticOutcome {
    Exact { chi: u32 },
    /// All values below `lower` are refuted; a coloring with `upper` colors
    /// exists; the gap is unresolved within the budget.
    Bracket { lower: u32, upper: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub outcome: ChromaticOutcome,
    /// Search nodes consumed.
    pub nodes: u64,
    pub budget: u64,
}

impl ChromaticOutcome {
    /// The proven lower bound in either outcome.
    pub fn lower(&self) -> u32 {
        match *self {
            ChromaticOutcome::Exact { chi } => chi,
            ChromaticOutcome::Bracket { lower, .. } => lower,
        }
    }

    /// The proven upper bound in either outcome.
    pub fn upper(&self) -> u32 {
        match *self {
            ChromaticOutcome::Exact { chi } => chi,
            ChromaticOutcome::Bracket { upper, .. } => upper,
        }
    }
}
