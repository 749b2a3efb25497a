//! Bipartite matching and bipartite multigraph edge coloring.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Maximum matching of a bipartite graph by augmenting paths.
///
/// `adj[u]` lists the right vertices adjacent to left vertex `u`. Left
/// vertices are processed in index order and neighbours are tried in the
/// order given, so the result is deterministic. Returns `mate[u]` for each
/// left vertex.
pub fn max_bipartite_matching(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let mut left_mate = vec![None; adj.len()];
    let mut right_mate: Vec<Option<usize>> = vec![None; n_right];
    for u in 0..adj.len() {
        let mut seen = vec![false; n_right];
        augment(u, adj, &mut seen, &mut left_mate, &mut right_mate);
    }
    left_mate
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    seen: &mut [bool],
    left_mate: &mut [Option<usize>],
    right_mate: &mut [Option<usize>],
) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let free = match right_mate[v] {
            None => true,
            Some(w) => augment(w, adj, seen, left_mate, right_mate),
        };
        if free {
            left_mate[u] = Some(v);
            right_mate[v] = Some(u);
            return true;
        }
    }
    false
}

/// Proper edge coloring of a bipartite multigraph with exactly `Δ` colors,
/// where `Δ` is the maximum degree.
///
/// `edges` are `(left, right)` pairs; parallel edges are allowed. Returns
/// the color of every edge and `Δ`. Each edge is inserted with a color free
/// at both endpoints, flipping a two-colored alternating path when needed
/// (Kőnig's edge-coloring argument).
/// Lowest free color at a vertex: a pointer past every color ever used,
/// plus a lazily cleaned heap of colors freed since.
#[derive(Debug, Clone, Default)]
struct FreeColors {
    next: usize,
    released: BinaryHeap<Reverse<usize>>,
}

impl FreeColors {
    fn lowest(&mut self, at: &[Option<usize>]) -> usize {
        while let Some(&Reverse(c)) = self.released.peek() {
            if at[c].is_none() {
                return c;
            }
            self.released.pop();
        }
        while at[self.next].is_some() {
            self.next += 1;
        }
        self.next
    }

    fn release(&mut self, c: usize) {
        if c < self.next {
            self.released.push(Reverse(c));
        }
    }
}

pub fn bipartite_edge_coloring(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
) -> (Vec<usize>, usize) {
    let mut degree = vec![0usize; n_left + n_right];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[n_left + v] += 1;
    }
    let delta = degree.iter().copied().max().unwrap_or(0);
    let n = n_left + n_right;
    // at[vertex][color] = edge currently using that color at the vertex.
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; n];
    let mut color = vec![usize::MAX; edges.len()];
    let mut free = vec![FreeColors::default(); n];
    let other = |e: usize, x: usize| {
        let (u, v) = edges[e];
        if x == u {
            n_left + v
        } else {
            u
        }
    };
    for (e, &(u, v)) in edges.iter().enumerate() {
        let (x, y) = (u, n_left + v);
        let a = free[x].lowest(&at[x]);
        let b = free[y].lowest(&at[y]);
        if at[y][a].is_some() {
            // Walk the a/b path from y and swap its colors; it cannot reach x
            // because the graph is bipartite and a is free at x.
            let mut path = Vec::new();
            let mut cur = y;
            let mut want = a;
            while let Some(f) = at[cur][want] {
                path.push(f);
                cur = other(f, cur);
                want = if want == a { b } else { a };
            }
            for &f in &path {
                let (fu, fv) = edges[f];
                at[fu][color[f]] = None;
                at[n_left + fv][color[f]] = None;
            }
            for &f in &path {
                let c = if color[f] == a { b } else { a };
                color[f] = c;
                let (fu, fv) = edges[f];
                at[fu][c] = Some(f);
                at[n_left + fv][c] = Some(f);
            }
            // Only the path's two endpoints gain a free color.
            free[y].release(a);
            free[cur].release(if want == a { b } else { a });
        }
        debug_assert!(at[x][a].is_none() && at[y][a].is_none());
        color[e] = a;
        at[x][a] = Some(e);
        at[y][a] = Some(e);
    }
    (color, delta)
}
