use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::system::{CoxeterSystem, Word};
use super::CoxeterError;
use crate::graph::Graph;

/// Ball edge `(from, from·s)`, stored once with `from < to` in ball order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub generator: u8,
}

/// Edges of the ball flipped by one reflection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub reflection: Word,
    pub edges: Vec<usize>,
}

/// A set of ball elements cut out by a wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub side: FixedBitSet,
}

impl Root {
    pub fn contains(&self, g: usize) -> bool {
        self.side.contains(g)
    }

    pub fn len(&self) -> usize {
        self.side.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_clear()
    }

    pub fn complement(&self) -> Root {
        let mut side = self.side.clone();
        side.toggle_range(..);
        Root { side }
    }

    pub fn elements(&self) -> Vec<usize> {
        self.side.ones().collect()
    }
}

/// The ball of radius `R` about the identity in the Cayley graph, with its
/// edges grouped into walls.
#[derive(Debug)]
pub struct CayleyBall<'a> {
    sys: &'a CoxeterSystem,
    radius: usize,
    elements: Vec<Word>,
    lengths: Vec<usize>,
    index: HashMap<Word, usize>,
    right: Vec<Vec<Option<usize>>>,
    edges: Vec<Edge>,
    edge_index: HashMap<(usize, usize), usize>,
    graph: Graph,
    walls: Vec<Wall>,
    edge_wall: Vec<usize>,
    distances: OnceLock<Vec<Vec<u32>>>,
}

impl<'a> CayleyBall<'a> {
    /// Breadth-first enumeration by right multiplication; elements are kept
    /// in order of length, then lexicographically by canonical word.
    pub fn new(sys: &'a CoxeterSystem, radius: usize, cap: usize) -> Result<Self, CoxeterError> {
        let mut elements: Vec<Word> = vec![Vec::new()];
        let mut lengths = vec![0];
        let mut index: HashMap<Word, usize> = HashMap::from([(Vec::new(), 0)]);
        let mut frontier = vec![0usize];
        for r in 1..=radius {
            let mut layer: Vec<Word> = Vec::new();
            for &g in &frontier {
                for s in 0..sys.rank() as u8 {
                    let mut w = elements[g].clone();
                    w.push(s);
                    let c = sys.reduce(&w)?;
                    if c.len() == r && !index.contains_key(&c) {
                        index.insert(c.clone(), usize::MAX);
                        layer.push(c);
                    }
                }
            }
            layer.sort();
            frontier.clear();
            for w in layer {
                if elements.len() >= cap {
                    return Err(CoxeterError::CapExceeded { cap });
                }
                index.insert(w.clone(), elements.len());
                frontier.push(elements.len());
                elements.push(w);
                lengths.push(r);
            }
            if frontier.is_empty() {
                break;
            }
        }
        let n = elements.len();
        let mut right = vec![vec![None; sys.rank()]; n];
        let mut edges = Vec::new();
        let mut edge_index = HashMap::new();
        for g in 0..n {
            for s in 0..sys.rank() as u8 {
                let mut w = elements[g].clone();
                w.push(s);
                if let Some(&h) = index.get(&sys.reduce(&w)?) {
                    right[g][s as usize] = Some(h);
                    if g < h {
                        edge_index.insert((g, h), edges.len());
                        edges.push(Edge {
                            from: g,
                            to: h,
                            generator: s,
                        });
                    }
                }
            }
        }
        let graph = Graph::new(n, edges.iter().map(|e| (e.from, e.to)));

        let mut by_reflection: HashMap<Word, usize> = HashMap::new();
        let mut walls: Vec<Wall> = Vec::new();
        let mut edge_wall = Vec::with_capacity(edges.len());
        for (e, edge) in edges.iter().enumerate() {
            let r = sys.reflection(&elements[edge.from], edge.generator)?;
            let id = *by_reflection.entry(r.clone()).or_insert_with(|| {
                walls.push(Wall {
                    reflection: r,
                    edges: Vec::new(),
                });
                walls.len() - 1
            });
            walls[id].edges.push(e);
            edge_wall.push(id);
        }
        let mut order: Vec<usize> = (0..walls.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&walls[a].reflection, &walls[b].reflection);
            x.len().cmp(&y.len()).then_with(|| x.cmp(y))
        });
        let mut rank_of = vec![0; walls.len()];
        for (new, &old) in order.iter().enumerate() {
            rank_of[old] = new;
        }
        let mut sorted: Vec<Option<Wall>> = walls.into_iter().map(Some).collect();
        let walls: Vec<Wall> = order.iter().map(|&old| sorted[old].take().expect("each wall once")).collect();
        let edge_wall = edge_wall.into_iter().map(|w| rank_of[w]).collect();

        Ok(CayleyBall {
            sys,
            radius,
            elements,
            lengths,
            index,
            right,
            edges,
            edge_index,
            graph,
            walls,
            edge_wall,
            distances: OnceLock::new(),
        })
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.sys
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &[u8] {
        &self.elements[g]
    }

    pub fn length(&self, g: usize) -> usize {
        self.lengths[g]
    }

    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Locates an arbitrary word, reducing it first.
    pub fn find(&self, w: &[u8]) -> Result<usize, CoxeterError> {
        let c = self.sys.reduce(w)?;
        self.index_of(&c).ok_or_else(|| CoxeterError::NotInBall(self.sys.format(&c)))
    }

    pub fn right(&self, g: usize, s: u8) -> Option<usize> {
        self.right[g][s as usize]
    }

    /// Left multiplication `s·g`, if it stays in the ball.
    pub fn left(&self, s: u8, g: usize) -> Result<Option<usize>, CoxeterError> {
        let mut w = vec![s];
        w.extend_from_slice(&self.elements[g]);
        Ok(self.index_of(&self.sys.reduce(&w)?))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall_of_edge(&self, e: usize) -> usize {
        self.edge_wall[e]
    }

    /// Elements of length exactly `r`.
    pub fn sphere(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&g| self.lengths[g] == r)
    }

    fn check_wall(&self, wall: usize) -> Result<(), CoxeterError> {
        if wall < self.walls.len() {
            Ok(())
        } else {
            Err(CoxeterError::UnknownWall(wall))
        }
    }

    fn require_edge(&self, u: usize, v: usize) -> Result<usize, CoxeterError> {
        self.edge_between(u, v)
            .ok_or_else(|| CoxeterError::NotAdjacent(self.sys.format(&self.elements[u]), self.sys.format(&self.elements[v])))
    }

    /// Word-metric distances between ball elements, computed in the group
    /// rather than in the ball graph.
    pub fn global_distances(&self) -> Result<&[Vec<u32>], CoxeterError> {
        if let Some(d) = self.distances.get() {
            return Ok(d);
        }
        let n = self.len();
        let mut d = vec![vec![0u32; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let x = self.sys.distance(&self.elements[a], &self.elements[b])? as u32;
                d[a][b] = x;
                d[b][a] = x;
            }
        }
        Ok(self.distances.get_or_init(|| d))
    }

    /// Whether `|d(x,u) - d(x,v)| = 1` for the adjacent pair `u, v`.
    pub fn plusminus_check(&self, x: usize, u: usize, v: usize) -> Result<bool, CoxeterError> {
        self.require_edge(u, v)?;
        let d = self.global_distances()?;
        Ok(d[x][u].abs_diff(d[x][v]) == 1)
    }

    /// Number of times a path of adjacent elements crosses each wall.
    pub fn crossings(&self, path: &[usize]) -> Result<Vec<usize>, CoxeterError> {
        let mut count = vec![0; self.walls.len()];
        for p in path.windows(2) {
            count[self.edge_wall[self.require_edge(p[0], p[1])?]] += 1;
        }
        Ok(count)
    }

    pub fn path_parity(&self, path: &[usize], wall: usize) -> Result<u8, CoxeterError> {
        self.check_wall(wall)?;
        Ok((self.crossings(path)?[wall] % 2) as u8)
    }

    /// Crossing parity of `wall` from `x` to every element, along a
    /// breadth-first spanning tree.
    pub fn parity_from(&self, x: usize, wall: usize) -> Result<Vec<u8>, CoxeterError> {
        self.check_wall(wall)?;
        let mut parity = vec![u8::MAX; self.len()];
        parity[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(g) = queue.pop_front() {
            for &h in self.graph.neighbors(g) {
                if parity[h] == u8::MAX {
                    let e = self.edge_between(g, h).expect("graph edge");
                    parity[h] = parity[g] ^ u8::from(self.edge_wall[e] == wall);
                    queue.push_back(h);
                }
            }
        }
        Ok(parity)
    }

    pub fn crossing_parity(&self, x: usize, y: usize, wall: usize) -> Result<u8, CoxeterError> {
        Ok(self.parity_from(x, wall)?[y])
    }

    /// Elements reached from `u` by crossing `wall` an even number of times.
    pub fn root(&self, u: usize, wall: usize) -> Result<Root, CoxeterError> {
        let parity = self.parity_from(u, wall)?;
        let mut side = FixedBitSet::with_capacity(self.len());
        parity.iter().enumerate().filter(|(_, &p)| p == 0).for_each(|(g, _)| side.insert(g));
        Ok(Root { side })
    }

    /// `H(u,v)`: elements strictly closer to `u` than to `v`.
    pub fn halfspace(&self, u: usize, v: usize) -> Result<Root, CoxeterError> {
        self.require_edge(u, v)?;
        let d = self.global_distances()?;
        let mut side = FixedBitSet::with_capacity(self.len());
        (0..self.len()).filter(|&w| d[w][u] < d[w][v]).for_each(|w| side.insert(w));
        Ok(Root { side })
    }

    /// A random walk from `x` of up to `2R` steps followed by a uniformly
    /// random ball-geodesic to `y`.
    pub fn random_path(&self, x: usize, y: usize, rng: &mut impl Rng) -> Vec<usize> {
        let mut path = vec![x];
        let steps = rng.gen_range(0..=2 * self.radius.max(1));
        for _ in 0..steps {
            let cur = *path.last().expect("nonempty");
            if let Some(&next) = self.graph.neighbors(cur).choose(rng) {
                path.push(next);
            }
        }
        let to_y = self.graph.bfs_distances(y);
        let mut cur = *path.last().expect("nonempty");
        while cur != y {
            let closer: Vec<usize> = self
                .graph
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&h| to_y[h] + 1 == to_y[cur])
                .collect();
            cur = *closer.choose(rng).expect("ball is connected");
            path.push(cur);
        }
        path
    }
}
