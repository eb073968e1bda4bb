//! Balanced separators for small weighted planar graphs.
//!
//! Candidates are BFS levels and fundamental cycles from every root, plus
//! single vertices. The remaining components are packed into two sides
//! greedily; a candidate is valid when both sides weigh at most two thirds of
//! the total. The smallest valid separator wins, then the best balance.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{invalid, Result};

/// Undirected graph with non-negative node weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    pub weights: Vec<f64>,
    pub adjacency: Vec<Vec<usize>>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<f64>, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); weights.len()];
        for &(u, v) in edges {
            if u != v && !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        WeightedGraph { weights, adjacency }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Connected components of the nodes not in `removed`, each sorted.
    pub fn components(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn bfs(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut depth = vec![usize::MAX; self.len()];
        let mut parent = vec![usize::MAX; self.len()];
        depth[root] = 0;
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        (depth, parent)
    }
}

/// Partition of the nodes into separator `r` and sides `left`, `right` with
/// no edge between the sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Separator {
    pub r: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Separator {
    pub fn side_weights(&self, g: &WeightedGraph) -> (f64, f64) {
        let w = |s: &[usize]| s.iter().map(|&v| g.weights[v]).sum::<f64>();
        (w(&self.left), w(&self.right))
    }

    /// Both sides weigh at most `2/3` of the total.
    pub fn is_balanced(&self, g: &WeightedGraph) -> bool {
        let limit = 2.0 * g.total_weight() / 3.0 + 1e-9;
        let (a, b) = self.side_weights(g);
        a <= limit && b <= limit
    }

    /// The node sets partition the graph and no edge joins the two sides.
    pub fn is_separating(&self, g: &WeightedGraph) -> bool {
        let mut side = vec![0u8; g.len()];
        for (tag, set) in [(1u8, &self.r), (2, &self.left), (3, &self.right)] {
            for &v in set.iter() {
                if v >= g.len() || side[v] != 0 {
                    return false;
                }
                side[v] = tag;
            }
        }
        if side.contains(&0) {
            return false;
        }
        (0..g.len()).all(|u| {
            g.adjacency[u]
                .iter()
                .all(|&v| !(side[u] == 2 && side[v] == 3 || side[u] == 3 && side[v] == 2))
        })
    }
}

/// Packs the components left after removing `r` into two sides, heaviest
/// first into the currently lighter side.
fn split_rest(g: &WeightedGraph, r: &[usize]) -> Separator {
    let mut removed = vec![false; g.len()];
    for &v in r {
        removed[v] = true;
    }
    let mut comps: Vec<(f64, Vec<usize>)> = g
        .components(&removed)
        .into_iter()
        .map(|c| (c.iter().map(|&v| g.weights[v]).sum(), c))
        .collect();
    comps.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let (mut wl, mut wr) = (0.0, 0.0);
    for (w, c) in comps {
        if wl <= wr {
            wl += w;
            left.extend(c);
        } else {
            wr += w;
            right.extend(c);
        }
    }
    left.sort_unstable();
    right.sort_unstable();
    let mut r = r.to_vec();
    r.sort_unstable();
    Separator { r, left, right }
}

fn candidates(g: &WeightedGraph) -> BTreeSet<Vec<usize>> {
    let n = g.len();
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    for v in 0..n {
        out.insert(vec![v]);
    }
    for root in 0..n {
        let (depth, parent) = g.bfs(root);
        let max_depth = depth
            .iter()
            .filter(|&&d| d != usize::MAX)
            .max()
            .copied()
            .unwrap_or(0);
        for level in 1..=max_depth {
            out.insert((0..n).filter(|&v| depth[v] == level).collect());
        }
        let path_to_root = |mut v: usize| {
            let mut p = vec![v];
            while parent[v] != v {
                v = parent[v];
                p.push(v);
            }
            p
        };
        for u in 0..n {
            for &v in &g.adjacency[u] {
                if v <= u || depth[u] == usize::MAX || parent[u] == v || parent[v] == u {
                    continue;
                }
                let mut cycle: BTreeSet<usize> = path_to_root(u).into_iter().collect();
                let pv = path_to_root(v);
                // trim the shared tail above the lowest common ancestor
                let lca = pv.iter().find(|x| cycle.contains(x)).copied();
                for &x in &pv {
                    cycle.insert(x);
                    if Some(x) == lca {
                        break;
                    }
                }
                if let Some(a) = lca {
                    let above: Vec<usize> = path_to_root(a).into_iter().skip(1).collect();
                    for x in above {
                        cycle.remove(&x);
                    }
                }
                out.insert(cycle.into_iter().collect());
            }
        }
    }
    out
}

/// Smallest balanced separator among the candidates. Falls back to taking
/// every node when no candidate balances, which is always valid.
pub fn planar_separator(g: &WeightedGraph) -> Result<Separator> {
    if g.is_empty() {
        return invalid("separator of an empty graph");
    }
    if g.weights.iter().any(|w| !(*w >= 0.0)) {
        return invalid("node weights must be non-negative");
    }
    let mut best: Option<(usize, f64, Separator)> = None;
    for r in candidates(g) {
        let sep = split_rest(g, &r);
        if !sep.is_balanced(g) {
            continue;
        }
        let (a, b) = sep.side_weights(g);
        let key = (sep.r.len(), a.max(b));
        let better = match &best {
            None => true,
            Some((size, bal, _)) => key.0 < *size || (key.0 == *size && key.1 < *bal - 1e-12),
        };
        if better {
            best = Some((key.0, key.1, sep));
        }
    }
    Ok(best.map(|b| b.2).unwrap_or_else(|| Separator {
        r: (0..g.len()).collect(),
        left: Vec::new(),
        right: Vec::new(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> WeightedGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        WeightedGraph::new(vec![1.0; n], &edges)
    }

    /// Smallest balanced separator size by trying every node subset.
    fn brute_force_min(g: &WeightedGraph) -> usize {
        let n = g.len();
        (0u32..1 << n)
            .filter_map(|mask| {
                let r: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let mut removed = vec![false; n];
                for &v in &r {
                    removed[v] = true;
                }
                // any packing of components into two sides counts
                let comps: Vec<f64> = g
                    .components(&removed)
                    .iter()
                    .map(|c| c.iter().map(|&v| g.weights[v]).sum())
                    .collect();
                let limit = 2.0 * g.total_weight() / 3.0 + 1e-9;
                let ok = (0u32..1 << comps.len()).any(|side| {
                    let a: f64 = (0..comps.len())
                        .filter(|&i| side >> i & 1 == 1)
                        .map(|i| comps[i])
                        .sum();
                    let b: f64 = comps.iter().sum::<f64>() - a;
                    a <= limit && b <= limit
                });
                ok.then_some(r.len())
            })
            .min()
            .unwrap()
    }

    #[test]
    fn two_nodes() {
        let g = WeightedGraph::new(vec![1.0, 1.0], &[(0, 1)]);
        let s = planar_separator(&g).unwrap();
        assert!(s.is_balanced(&g) && s.is_separating(&g));
        assert_eq!(s.r.len(), 1);
    }

    #[test]
    fn four_cycle_matches_exhaustive_search() {
        let g = cycle(4);
        let s = planar_separator(&g).unwrap();
        assert!(s.is_balanced(&g) && s.is_separating(&g));
        assert_eq!(s.r.len(), brute_force_min(&g));
        assert_eq!(s.r.len(), 2);
    }

    #[test]
    fn path_is_cut_in_the_middle() {
        let edges: Vec<(usize, usize)> = (0..8).map(|i| (i, i + 1)).collect();
        let g = WeightedGraph::new(vec![1.0; 9], &edges);
        let s = planar_separator(&g).unwrap();
        assert_eq!(s.r, vec![4]);
        assert_eq!(s.side_weights(&g), (4.0, 4.0));
    }

    #[test]
    fn grid_separator_is_small() {
        let side = 5;
        let mut edges = Vec::new();
        for r in 0..side {
            for c in 0..side {
                let v = r * side + c;
                if c + 1 < side {
                    edges.push((v, v + 1));
                }
                if r + 1 < side {
                    edges.push((v, v + side));
                }
            }
        }
        let g = WeightedGraph::new(vec![1.0; side * side], &edges);
        let s = planar_separator(&g).unwrap();
        assert!(s.is_balanced(&g) && s.is_separating(&g));
        assert!(s.r.len() as f64 <= 4.0 * (g.len() as f64).sqrt());
    }

    #[test]
    fn heavy_node_goes_into_the_separator() {
        let g = WeightedGraph::new(vec![1.0, 10.0, 1.0], &[(0, 1), (1, 2)]);
        let s = planar_separator(&g).unwrap();
        assert_eq!(s.r, vec![1]);
    }

    #[test]
    fn small_cycles_agree_with_brute_force() {
        for n in 3..9 {
            let g = cycle(n);
            let s = planar_separator(&g).unwrap();
            assert!(s.is_balanced(&g) && s.is_separating(&g));
            assert_eq!(s.r.len(), brute_force_min(&g), "cycle of {n}");
        }
    }
}
