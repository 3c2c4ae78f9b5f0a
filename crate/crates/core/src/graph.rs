//! Small undirected simple graphs on `0..n`, used for 1-skeleta, link graphs,
//! Cayley balls and crossing graphs.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

/// Distance value for unreachable pairs.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices; loops and repeated edges are dropped.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} vertices");
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Graph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.adj.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs distances by repeated BFS.
    pub fn distance_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.adj.len()).map(|v| self.bfs_distances(v)).collect()
    }

    /// A shortest path from `a` to `b` (inclusive), preferring smaller vertex ids.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let dist = self.bfs_distances(b);
        if dist[a] == UNREACHABLE {
            return None;
        }
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.adj[cur]
                .iter()
                .find(|&&w| dist[w] + 1 == dist[cur])
                .expect("bfs predecessor");
            path.push(cur);
        }
        Some(path)
    }

    /// Connected components of the subgraph induced on `keep` (all vertices if `None`).
    /// Returns a component index per vertex (`usize::MAX` for dropped vertices) and the count.
    pub fn components(&self, keep: Option<&FixedBitSet>) -> (Vec<usize>, usize) {
        let n = self.adj.len();
        let kept = |v: usize| keep.map_or(true, |k| k.contains(v));
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX || !kept(start) {
                continue;
            }
            comp[start] = count;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX && kept(w) {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.components(None).1 == 1
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.adj.len();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![UNREACHABLE; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if dist[w] == UNREACHABLE {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = (dist[v] + dist[w] + 1) as usize;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Maximal cliques (Bron–Kerbosch with pivoting), each sorted, in lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let nbr: Vec<FixedBitSet> = self
            .adj
            .iter()
            .map(|list| {
                let mut s = FixedBitSet::with_capacity(n);
                list.iter().for_each(|&w| s.insert(w));
                s
            })
            .collect();
        let mut out = Vec::new();
        let mut p = FixedBitSet::with_capacity(n);
        p.insert_range(..);
        let x = FixedBitSet::with_capacity(n);
        bron_kerbosch(&nbr, &mut Vec::new(), p, x, &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    /// Searches for an isomorphism `self -> other`; returns the image of each vertex.
    pub fn find_isomorphism(&self, other: &Graph) -> Option<Vec<usize>> {
        let n = self.adj.len();
        if n != other.adj.len() || self.edge_count != other.edge_count {
            return None;
        }
        if n == 0 {
            return Some(Vec::new());
        }
        let sig_a = distance_signatures(self);
        let sig_b = distance_signatures(other);
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        // Visit in BFS order per component so every later vertex has a placed neighbor.
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let search = IsoSearch {
            a: self,
            b: other,
            sig_a: &sig_a,
            sig_b: &sig_b,
            order: &order,
        };
        if search.extend(0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }
}

fn bron_kerbosch(
    nbr: &[FixedBitSet],
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_clear() && x.is_clear() {
        out.push(r.clone());
        return;
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection(&nbr[u]).count())
        .expect("p or x nonempty");
    let candidates: Vec<usize> = p.difference(&nbr[pivot]).collect();
    for v in candidates {
        r.push(v);
        let mut p2 = p.clone();
        p2.intersect_with(&nbr[v]);
        let mut x2 = x.clone();
        x2.intersect_with(&nbr[v]);
        bron_kerbosch(nbr, r, p2, x2, out);
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
}

/// Per vertex: the multiset of distances to all other vertices.
fn distance_signatures(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.vertex_count())
        .map(|v| {
            let mut d = g.bfs_distances(v);
            d.sort_unstable();
            d
        })
        .collect()
}

struct IsoSearch<'a> {
    a: &'a Graph,
    b: &'a Graph,
    sig_a: &'a [Vec<u32>],
    sig_b: &'a [Vec<u32>],
    order: &'a [usize],
}

impl IsoSearch<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let anchor = self.a.adj[v].iter().copied().find(|&w| map[w] != usize::MAX);
        let candidates: Vec<usize> = match anchor {
            Some(w) => self.b.adj[map[w]].clone(),
            None => (0..self.b.vertex_count()).collect(),
        };
        for c in candidates {
            if used[c] || self.sig_a[v] != self.sig_b[c] {
                continue;
            }
            let consistent = self.a.adj[v]
                .iter()
                .filter(|&&w| map[w] != usize::MAX)
                .all(|&w| self.b.has_edge(c, map[w]))
                && self.b.adj[c]
                    .iter()
                    .filter(|&&w| used[w])
                    .count()
                    == self.a.adj[v].iter().filter(|&&w| map[w] != usize::MAX).count();
            if !consistent {
                continue;
            }
            map[v] = c;
            used[c] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[c] = false;
        }
        false
    }
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i+5`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::new(10, edges)
}
