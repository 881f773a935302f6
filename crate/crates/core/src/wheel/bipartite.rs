//! Searches in the bipartite row/column graph of a matrix.
//!
//! Node `r < m` is row `r`; node `m + c` is column `c`. Edges are the live
//! nonzeros.

use std::collections::VecDeque;

use crate::matrix::{Element, SparseMatrix};

use super::SearchError;

const UNSEEN: u32 = u32::MAX;

/// Outcome of [`find_shortest_cycle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleSearch {
    /// Alternating row/column sequence of a chordless cycle, starting at a row.
    Cycle(Vec<Element>),
    /// The start node's component misses some live element; these are the
    /// elements it does contain, rows first, each kind in increasing order.
    DisconnectedReach(Vec<Element>),
}

/// Outcome of [`find_crossing_path`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossingSearch {
    /// Shortest path from a row of `X` to a column of `Y`, as an alternating sequence.
    Path(Vec<Element>),
    /// Elements reachable from `X`, rows first, each kind in increasing order.
    Reach(Vec<Element>),
}

struct Graph<'a> {
    matrix: &'a SparseMatrix,
    m: usize,
}

impl<'a> Graph<'a> {
    fn new(matrix: &'a SparseMatrix) -> Self {
        Self { matrix, m: matrix.rows() }
    }

    fn nodes(&self) -> usize {
        self.m + self.matrix.cols()
    }

    fn element(&self, node: usize) -> Element {
        if node < self.m {
            Element::Row(node)
        } else {
            Element::Column(node - self.m)
        }
    }

    fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + 'a {
        let e = if node < self.m { Element::Row(node) } else { Element::Column(node - self.m) };
        let offset = if node < self.m { self.m } else { 0 };
        self.matrix.entries(e).map(move |(_, i, _)| i + offset)
    }

    fn sorted_elements(&self, mut nodes: Vec<usize>) -> Vec<Element> {
        nodes.sort_unstable();
        nodes.into_iter().map(|v| self.element(v)).collect()
    }
}

/// Breadth-first search from the lowest live row. If its component spans all
/// live elements, returns a chordless cycle obtained from the first non-tree
/// edge by shortening across chords; otherwise returns the component.
pub fn find_shortest_cycle(core: &SparseMatrix) -> Result<CycleSearch, SearchError> {
    let g = Graph::new(core);
    let start = core.live_rows().next().ok_or(SearchError::EmptyCore)?;
    let mut parent = vec![UNSEEN; g.nodes()];
    let mut depth = vec![0u32; g.nodes()];
    let mut order = vec![start];
    parent[start] = start as u32;
    let mut closing = None;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for v in g.neighbors(u) {
            if parent[v] == UNSEEN {
                parent[v] = u as u32;
                depth[v] = depth[u] + 1;
                order.push(v);
            } else if closing.is_none() && parent[u] as usize != v {
                closing = Some((u, v));
            }
        }
    }
    if order.len() < core.live_elements() {
        return Ok(CycleSearch::DisconnectedReach(g.sorted_elements(order)));
    }
    let (u, v) = closing.ok_or_else(|| SearchError::Internal("reduced core is a forest".into()))?;

    // Fundamental cycle: u up to the common ancestor, then down to v.
    let (mut a, mut b) = (u, v);
    let mut up = vec![a];
    let mut down = vec![b];
    while depth[a] > depth[b] {
        a = parent[a] as usize;
        up.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b] as usize;
        down.push(b);
    }
    while a != b {
        a = parent[a] as usize;
        b = parent[b] as usize;
        up.push(a);
        down.push(b);
    }
    down.pop();
    up.extend(down.into_iter().rev());
    let cycle = shorten_to_chordless(&g, up);
    Ok(CycleSearch::Cycle(rotate_to_row(&g, cycle)))
}

/// Repeatedly replaces the cycle by the shorter of the two cycles formed
/// with a chord until no chord remains.
fn shorten_to_chordless(g: &Graph<'_>, mut cycle: Vec<usize>) -> Vec<usize> {
    let mut pos = vec![usize::MAX; g.nodes()];
    'outer: loop {
        let len = cycle.len();
        for (i, &x) in cycle.iter().enumerate() {
            pos[x] = i;
        }
        for i in 0..len {
            let prev = cycle[(i + len - 1) % len];
            let next = cycle[(i + 1) % len];
            let chord = g.neighbors(cycle[i]).find(|&w| pos[w] != usize::MAX && w != prev && w != next);
            if let Some(w) = chord {
                let (lo, hi) = (i.min(pos[w]), i.max(pos[w]));
                for &x in &cycle {
                    pos[x] = usize::MAX;
                }
                cycle = if hi - lo <= len - (hi - lo) {
                    cycle[lo..=hi].to_vec()
                } else {
                    let mut c = cycle[hi..].to_vec();
                    c.extend_from_slice(&cycle[..=lo]);
                    c
                };
                continue 'outer;
            }
        }
        for &x in &cycle {
            pos[x] = usize::MAX;
        }
        return cycle;
    }
}

fn rotate_to_row(g: &Graph<'_>, mut cycle: Vec<usize>) -> Vec<Element> {
    if cycle[0] >= g.m {
        cycle.rotate_left(1);
    }
    cycle.into_iter().map(|v| g.element(v)).collect()
}

/// Grows the all-ones block `seed_rows × seed_cols` to an inclusion-wise
/// maximal one. Rows and columns are added alternately, one at a time, each
/// time the lowest-index candidate that is all ones on the other side.
/// Returns sorted row and column sets.
pub fn grow_all_ones(
    core: &SparseMatrix,
    seed_rows: [usize; 2],
    seed_cols: [usize; 2],
) -> Result<(Vec<usize>, Vec<usize>), SearchError> {
    for r in seed_rows {
        for c in seed_cols {
            if core.get(r, c) == 0 {
                return Err(SearchError::Internal(format!("seed entry ({r}, {c}) is zero")));
            }
        }
    }
    let mut rows = Side::new(core, Element::Column(seed_cols[0]), seed_rows, core.rows());
    let mut cols = Side::new(core, Element::Row(seed_rows[0]), seed_cols, core.cols());
    loop {
        let row_added = rows.add_first(core, &cols);
        let col_added = cols.add_first(core, &rows);
        if !row_added && !col_added {
            break;
        }
    }
    rows.members.sort_unstable();
    cols.members.sort_unstable();
    Ok((rows.members, cols.members))
}

/// One side of a growing block. A candidate that fails once fails forever,
/// since the other side only grows, so every candidate is examined once.
struct Side {
    members: Vec<usize>,
    member: Vec<bool>,
    candidates: Vec<Element>,
    cursor: usize,
}

impl Side {
    fn new(core: &SparseMatrix, anchor: Element, seed: [usize; 2], len: usize) -> Self {
        let mut member = vec![false; len];
        for i in seed {
            member[i] = true;
        }
        let candidates = core.entries(anchor).map(|(_, i, _)| anchor.cross(i)).filter(|e| !member[e.index()]).collect();
        Self { members: seed.to_vec(), member, candidates, cursor: 0 }
    }

    fn add_first(&mut self, core: &SparseMatrix, other: &Side) -> bool {
        while self.cursor < self.candidates.len() {
            let e = self.candidates[self.cursor];
            self.cursor += 1;
            let hits = core.entries(e).filter(|&(_, j, _)| other.member[j]).count();
            if hits == other.members.len() {
                self.member[e.index()] = true;
                self.members.push(e.index());
                return true;
            }
        }
        false
    }
}

/// Multi-source breadth-first search from the rows `x`, ignoring the edges of
/// the block `x × y`. Stops at the first column of `y` reached.
pub fn find_crossing_path(core: &SparseMatrix, x: &[usize], y: &[usize]) -> CrossingSearch {
    let g = Graph::new(core);
    let mut in_x = vec![false; core.rows()];
    let mut in_y = vec![false; core.cols()];
    for &r in x {
        in_x[r] = true;
    }
    for &c in y {
        in_y[c] = true;
    }
    let mut parent = vec![UNSEEN; g.nodes()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut seen = Vec::new();
    for &r in x {
        parent[r] = r as u32;
        queue.push_back(r);
        seen.push(r);
    }
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            let (row, col) = if u < g.m { (u, v - g.m) } else { (v, u - g.m) };
            if in_x[row] && in_y[col] || parent[v] != UNSEEN {
                continue;
            }
            parent[v] = u as u32;
            seen.push(v);
            if v >= g.m && in_y[v - g.m] {
                let mut path = vec![v];
                let mut w = v;
                while parent[w] as usize != w {
                    w = parent[w] as usize;
                    path.push(w);
                }
                path.reverse();
                return CrossingSearch::Path(path.into_iter().map(|n| g.element(n)).collect());
            }
            queue.push_back(v);
        }
    }
    CrossingSearch::Reach(g.sorted_elements(seen))
}
