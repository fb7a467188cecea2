//! Undirected graph helpers over bus indices: connectivity and fundamental cycles.

use std::collections::VecDeque;

/// Sorted adjacency lists; each entry is `(neighbour, edge index)`.
#[derive(Debug, Clone)]
pub struct Adjacency {
    neighbours: Vec<Vec<(usize, usize)>>,
}

impl Adjacency {
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut neighbours = vec![Vec::new(); nodes];
        for (k, (u, v)) in edges.into_iter().enumerate() {
            neighbours[u].push((v, k));
            neighbours[v].push((u, k));
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        Adjacency { neighbours }
    }

    pub fn nodes(&self) -> usize {
        self.neighbours.len()
    }

    pub fn neighbours(&self, u: usize) -> &[(usize, usize)] {
        &self.neighbours[u]
    }

    /// Number of connected components (isolated nodes count as components).
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.nodes()];
        let mut count = 0;
        for start in 0..self.nodes() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in self.neighbours(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        count
    }

    /// Breadth-first spanning tree rooted at node 0, visiting neighbours in
    /// increasing id order. Returns `(parent, parent edge, depth)` per node.
    fn spanning_tree(&self) -> Vec<Option<(usize, usize, usize)>> {
        let n = self.nodes();
        let mut tree = vec![None; n];
        if n == 0 {
            return tree;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut depth = vec![0usize; n];
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in self.neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    depth[v] = depth[u] + 1;
                    tree[v] = Some((u, e, depth[v]));
                    queue.push_back(v);
                }
            }
        }
        tree
    }

    /// Fundamental cycle basis of a connected graph. Each cycle is a closed
    /// walk of node ids (first node not repeated at the end), one per
    /// non-tree edge in edge order.
    pub fn fundamental_cycles(&self, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let tree = self.spanning_tree();
        let mut in_tree = vec![false; edges.len()];
        for &(_, e, _) in tree.iter().flatten() {
            in_tree[e] = true;
        }
        let depth = |v: usize| tree[v].map_or(0, |t| t.2);
        let parent = |v: usize| tree[v].map(|t| t.0);
        let mut cycles = Vec::new();
        for (e, &(u, v)) in edges.iter().enumerate() {
            if in_tree[e] {
                continue;
            }
            // Walk both endpoints up to their lowest common ancestor.
            let (mut a, mut b) = (u, v);
            let mut up_from_u = vec![a];
            let mut up_from_v = vec![b];
            while a != b {
                if depth(a) >= depth(b) {
                    a = parent(a).expect("connected graph");
                    up_from_u.push(a);
                } else {
                    b = parent(b).expect("connected graph");
                    up_from_v.push(b);
                }
            }
            up_from_v.pop();
            up_from_u.extend(up_from_v.into_iter().rev());
            cycles.push(up_from_u);
        }
        cycles
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_one_cycle() {
        let edges = [(0, 1), (1, 2), (0, 2)];
        let adj = Adjacency::new(3, edges);
        assert_eq!(adj.components(), 1);
        let cycles = adj.fundamental_cycles(&edges);
        assert_eq!(cycles, vec![vec![1, 0, 2]]);
    }

    #[test]
    fn tree_has_no_cycles() {
        let edges = [(0, 1), (1, 2), (1, 3)];
        let adj = Adjacency::new(4, edges);
        assert!(adj.fundamental_cycles(&edges).is_empty());
    }

    #[test]
    fn counts_components() {
        let adj = Adjacency::new(5, [(0, 1), (2, 3)]);
        assert_eq!(adj.components(), 3);
    }

    #[test]
    fn cycle_rank_matches_edges_minus_nodes_plus_one() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (3, 4), (4, 1)];
        let adj = Adjacency::new(5, edges);
        let cycles = adj.fundamental_cycles(&edges);
        assert_eq!(cycles.len(), edges.len() - 5 + 1);
        for cycle in cycles {
            // consecutive nodes (cyclically) must be adjacent
            for k in 0..cycle.len() {
                let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                assert!(adj.neighbours(a).iter().any(|&(v, _)| v == b), "{a}-{b}");
            }
        }
    }
}
