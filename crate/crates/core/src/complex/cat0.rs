use serde::Serialize;

use super::{is_flag, vertex_link, CubeComplex, CubeError, VertexId};
use crate::graph::{Graph, UNREACHABLE};

/// Default vertex cap for the exhaustive median test (interval table memory
/// grows cubically).
pub const DEFAULT_MEDIAN_CAP: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalVerdict {
    pub locally_cat0: bool,
    /// First vertex whose link is not flag, with the link's empty simplex
    /// (given as vertex ids of the complex: the far ends of the link edges).
    pub witness: Option<(VertexId, Vec<VertexId>)>,
}

/// Gromov's link condition: every vertex link is flag.
pub fn is_locally_cat0(x: &CubeComplex) -> LocalVerdict {
    for v in 0..x.vertex_count() {
        let link = vertex_link(x, v).expect("vertex in range");
        let verdict = is_flag(&link);
        if let Some(simplex) = verdict.empty_simplex {
            let far = simplex
                .iter()
                .map(|&i| x.vertex_by_label(&link.labels()[i]).expect("link label"))
                .collect();
            return LocalVerdict {
                locally_cat0: false,
                witness: Some((v, far)),
            };
        }
    }
    LocalVerdict {
        locally_cat0: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cat0Witness {
    EmptySimplex { vertex: VertexId, simplex: Vec<VertexId> },
    MedianTriple { triple: [VertexId; 3], medians: Vec<VertexId> },
    /// A 4-cycle of the 1-skeleton bounding no square.
    EmptySquare { cycle: [VertexId; 4] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cat0Verdict {
    pub cat0: bool,
    pub locally_cat0: bool,
    pub witness: Option<Cat0Witness>,
}

/// Geodesic intervals `I(a, b)` of a connected graph, stored as bit rows for every
/// unordered pair.
pub struct IntervalTable {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl IntervalTable {
    pub fn new(g: &Graph, cap: usize) -> Result<Self, CubeError> {
        let n = g.vertex_count();
        if n > cap {
            return Err(CubeError::CapExceeded {
                what: "median test vertex count",
                cap,
            });
        }
        let dist = g.distance_matrix();
        if dist.iter().any(|row| row.contains(&UNREACHABLE)) {
            return Err(CubeError::Disconnected);
        }
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * (n + 1) / 2 * words];
        for a in 0..n {
            for b in a..n {
                let base = tri(a, b) * words;
                let d = dist[a][b];
                for x in 0..n {
                    if dist[a][x] + dist[x][b] == d {
                        bits[base + x / 64] |= 1 << (x % 64);
                    }
                }
            }
        }
        Ok(IntervalTable { n, words, bits })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    fn row(&self, a: usize, b: usize) -> &[u64] {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let base = tri(a, b) * self.words;
        &self.bits[base..base + self.words]
    }

    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        ones(self.row(a, b))
    }

    /// `I(a,b) ∩ I(b,c) ∩ I(a,c)`.
    pub fn medians(&self, a: usize, b: usize, c: usize) -> Vec<usize> {
        let (r1, r2, r3) = (self.row(a, b), self.row(b, c), self.row(a, c));
        let meet: Vec<u64> = (0..self.words).map(|w| r1[w] & r2[w] & r3[w]).collect();
        ones(&meet)
    }

    fn median_count_capped(&self, a: usize, b: usize, c: usize) -> u32 {
        let (r1, r2, r3) = (self.row(a, b), self.row(b, c), self.row(a, c));
        let mut total = 0;
        for w in 0..self.words {
            total += (r1[w] & r2[w] & r3[w]).count_ones();
            if total > 1 {
                break;
            }
        }
        total
    }

    /// First triple (lexicographic, distinct vertices) without a unique median.
    pub fn first_bad_triple(&self) -> Option<[usize; 3]> {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if self.median_count_capped(a, b, c) != 1 {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }
}

fn tri(a: usize, b: usize) -> usize {
    b * (b + 1) / 2 + a
}

fn ones(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &bits) in words.iter().enumerate() {
        let mut x = bits;
        while x != 0 {
            let t = x.trailing_zeros() as usize;
            out.push(w * 64 + t);
            x &= x - 1;
        }
    }
    out
}

/// The unique vertex lying on geodesics between each pair of `a, b, c`.
pub fn median(x: &CubeComplex, a: VertexId, b: VertexId, c: VertexId) -> Result<VertexId, CubeError> {
    let g = x.one_skeleton();
    if !g.is_connected() || x.vertex_count() == 0 {
        return Err(CubeError::Disconnected);
    }
    let da = g.bfs_distances(a);
    let db = g.bfs_distances(b);
    let dc = g.bfs_distances(c);
    let found: Vec<VertexId> = (0..x.vertex_count())
        .filter(|&m| {
            da[m] + db[m] == da[b] && db[m] + dc[m] == db[c] && da[m] + dc[m] == da[c]
        })
        .collect();
    match found.as_slice() {
        [] => Err(CubeError::NoMedian),
        [m] => Ok(*m),
        many => Err(CubeError::MultipleMedians(many.len())),
    }
}

/// First 4-cycle `v a w b` of the 1-skeleton that bounds no square.
pub fn unfilled_square(x: &CubeComplex) -> Option<[VertexId; 4]> {
    let g = x.one_skeleton();
    for v in 0..x.vertex_count() {
        let nv = g.neighbors(v);
        for (i, &a) in nv.iter().enumerate() {
            for &b in &nv[i + 1..] {
                for &w in g.neighbors(a) {
                    if w != v && g.neighbors(b).contains(&w) && x.find_cube(&[v, a, b, w]).is_none() {
                        return Some([v, a, w, b]);
                    }
                }
            }
        }
    }
    None
}

/// CAT(0) test for a finite connected complex: vertex links are flag, the
/// 1-skeleton is a median graph and every 4-cycle bounds a square. The last
/// condition rules out holes such as a ring of four squares, whose links and
/// 1-skeleton are those of a filled patch.
pub fn is_cat0(x: &CubeComplex, cap: usize) -> Result<Cat0Verdict, CubeError> {
    let g = x.one_skeleton();
    if x.vertex_count() == 0 || !g.is_connected() {
        return Err(CubeError::Disconnected);
    }
    let local = is_locally_cat0(x);
    if let Some((vertex, simplex)) = local.witness {
        return Ok(Cat0Verdict {
            cat0: false,
            locally_cat0: false,
            witness: Some(Cat0Witness::EmptySimplex { vertex, simplex }),
        });
    }
    let table = IntervalTable::new(&g, cap)?;
    let witness = match table.first_bad_triple() {
        Some(triple) => Some(Cat0Witness::MedianTriple {
            triple,
            medians: table.medians(triple[0], triple[1], triple[2]),
        }),
        None => unfilled_square(x).map(|cycle| Cat0Witness::EmptySquare { cycle }),
    };
    Ok(Cat0Verdict {
        cat0: witness.is_none(),
        locally_cat0: true,
        witness,
    })
}

/// A complex certified CAT(0); required by operations whose guarantees only
/// hold in that setting.
#[derive(Clone, Copy, Debug)]
pub struct Cat0Complex<'a> {
    complex: &'a CubeComplex,
}

impl<'a> Cat0Complex<'a> {
    pub fn certify(x: &'a CubeComplex, cap: usize) -> Result<Self, CubeError> {
        if is_cat0(x, cap)?.cat0 {
            Ok(Cat0Complex { complex: x })
        } else {
            Err(CubeError::NotCat0)
        }
    }

    pub fn complex(&self) -> &'a CubeComplex {
        self.complex
    }
}
