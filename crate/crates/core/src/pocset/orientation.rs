use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::system::{hyperplane_of, star, HalfspaceId, HalfspaceSystem};
use super::PocsetError;

/// A choice of one halfspace per hyperplane; bit `i` set means hyperplane `i`
/// is oriented towards its starred halfspace `2i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    starred: FixedBitSet,
}

impl Orientation {
    /// The orientation choosing every listed (unstarred) halfspace.
    pub fn unstarred(hyperplanes: usize) -> Self {
        Orientation {
            starred: FixedBitSet::with_capacity(hyperplanes),
        }
    }

    pub fn from_starred(hyperplanes: usize, starred: impl IntoIterator<Item = usize>) -> Self {
        let mut o = Self::unstarred(hyperplanes);
        for i in starred {
            o.starred.insert(i);
        }
        o
    }

    /// Orientation choosing exactly the given halfspaces; `None` unless the
    /// choice covers every hyperplane once.
    pub fn from_choice(hyperplanes: usize, chosen: &[HalfspaceId]) -> Option<Self> {
        let mut seen = FixedBitSet::with_capacity(hyperplanes);
        let mut o = Self::unstarred(hyperplanes);
        for &h in chosen {
            let i = hyperplane_of(h);
            if i >= hyperplanes || seen.put(i) {
                return None;
            }
            o.starred.set(i, h & 1 == 1);
        }
        (seen.count_ones(..) == hyperplanes).then_some(o)
    }

    pub fn hyperplane_count(&self) -> usize {
        self.starred.len()
    }

    pub fn is_starred(&self, i: usize) -> bool {
        self.starred.contains(i)
    }

    /// The halfspace chosen on hyperplane `i`.
    pub fn chosen(&self, i: usize) -> HalfspaceId {
        2 * i + usize::from(self.starred.contains(i))
    }

    /// Whether this orientation lies in halfspace `h`.
    pub fn contains(&self, h: HalfspaceId) -> bool {
        self.chosen(hyperplane_of(h)) == h
    }

    pub fn chosen_set(&self) -> FixedBitSet {
        let m = self.starred.len();
        let mut s = FixedBitSet::with_capacity(2 * m);
        for i in 0..m {
            s.insert(self.chosen(i));
        }
        s
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut o = self.clone();
        o.starred.toggle(i);
        o
    }

    /// Hyperplanes on which the two orientations disagree.
    pub fn differences(&self, other: &Orientation) -> Vec<usize> {
        self.starred.symmetric_difference(&other.starred).collect()
    }

    /// Bit string, one character per hyperplane, `1` where this orientation
    /// differs from `reference`.
    pub fn bits_relative_to(&self, reference: &Orientation) -> String {
        (0..self.starred.len())
            .map(|i| if self.is_starred(i) != reference.is_starred(i) { '1' } else { '0' })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexVerdict {
    pub vertex: bool,
    /// Hyperplanes `(i, j)` with `chosen(i) ≤ chosen(j)⋆`.
    pub witness: Option<(usize, usize)>,
}

fn check_total(s: &HalfspaceSystem, o: &Orientation) -> Result<(), PocsetError> {
    if o.hyperplane_count() != s.hyperplane_count() {
        return Err(PocsetError::PartialOrientation {
            expected: s.hyperplane_count(),
            found: o.hyperplane_count(),
        });
    }
    Ok(())
}

/// Consistency: no two hyperplanes with `chosen(i) ≤ chosen(j)⋆`.
pub fn is_vertex(s: &HalfspaceSystem, o: &Orientation) -> Result<VertexVerdict, PocsetError> {
    check_total(s, o)?;
    let m = s.hyperplane_count();
    let mut starred_choice = FixedBitSet::with_capacity(2 * m);
    for j in 0..m {
        starred_choice.insert(star(o.chosen(j)));
    }
    for i in 0..m {
        let c = o.chosen(i);
        // c ≤ c⋆ never holds in a valid system, so any hit is another hyperplane.
        if let Some(k) = s.up_set(c).intersection(&starred_choice).next() {
            return Ok(VertexVerdict {
                vertex: false,
                witness: Some((i, hyperplane_of(k))),
            });
        }
    }
    Ok(VertexVerdict {
        vertex: true,
        witness: None,
    })
}

fn require_vertex(s: &HalfspaceSystem, o: &Orientation) -> Result<(), PocsetError> {
    match is_vertex(s, o)?.witness {
        None => Ok(()),
        Some((i, j)) => Err(PocsetError::NotAVertex {
            first: s.label(o.chosen(i)).clone(),
            second: s.label(o.chosen(j)).clone(),
        }),
    }
}

/// Indices of hyperplanes whose chosen halfspace is minimal among the chosen ones.
pub(crate) fn minimal_hyperplanes_unchecked(s: &HalfspaceSystem, o: &Orientation, chosen: &FixedBitSet) -> Vec<usize> {
    (0..s.hyperplane_count())
        .filter(|&i| {
            let c = o.chosen(i);
            s.down_set(c).intersection(chosen).all(|k| k == c)
        })
        .collect()
}

/// Halfspaces `h` containing `v` with no other `k ∋ v`, `k ≤ h`.
pub fn minimal_halfspaces(s: &HalfspaceSystem, v: &Orientation) -> Result<Vec<HalfspaceId>, PocsetError> {
    require_vertex(s, v)?;
    let chosen = v.chosen_set();
    Ok(minimal_hyperplanes_unchecked(s, v, &chosen)
        .into_iter()
        .map(|i| v.chosen(i))
        .collect())
}

/// Swaps the choice on hyperplane `i`; defined exactly when that choice is minimal.
pub fn flip(s: &HalfspaceSystem, v: &Orientation, i: usize) -> Result<Orientation, PocsetError> {
    require_vertex(s, v)?;
    if i >= s.hyperplane_count() {
        return Err(PocsetError::UnknownHyperplane(i));
    }
    let c = v.chosen(i);
    let chosen = v.chosen_set();
    if s.down_set(c).intersection(&chosen).any(|k| k != c) {
        return Err(PocsetError::NotMinimal(s.label(c).clone()));
    }
    Ok(v.flipped(i))
}

/// Some consistent orientation, from the 2-SAT instance "never choose both `a`
/// and `b` when `a ≤ b⋆`".
pub fn seed_vertex(s: &HalfspaceSystem) -> Result<Orientation, PocsetError> {
    let n = s.halfspace_count();
    // Node h = "choose h"; its negation is node h ^ 1.
    let mut implications: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        for bs in s.up_set(a).ones() {
            let b = star(bs);
            if hyperplane_of(a) != hyperplane_of(b) {
                implications[a].push(star(b));
            }
        }
    }
    let comp = tarjan_scc(&implications);
    let m = s.hyperplane_count();
    let mut o = Orientation::unstarred(m);
    for i in 0..m {
        let (h, hs) = (2 * i, 2 * i + 1);
        if comp[h] == comp[hs] {
            return Err(PocsetError::Unsatisfiable(s.label(h).clone()));
        }
        // Tarjan numbers components in reverse topological order.
        if comp[hs] < comp[h] {
            o.starred.insert(i);
        }
    }
    Ok(o)
}

/// Iterative Tarjan; returns the component index of every node, components
/// numbered in the order they are completed.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut comp = vec![UNSET; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut n_comp = 0;
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        comp[w] = n_comp;
                        if w == v {
                            break;
                        }
                    }
                    n_comp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::pocset::RawPocset;

    fn system(m: usize, leq: &[(usize, usize)]) -> HalfspaceSystem {
        let labels: Vec<Label> = (0..m)
            .flat_map(|i| [Label::str(format!("h{i}")), Label::str(format!("h{i}*"))])
            .collect();
        let raw = RawPocset {
            halfspaces: labels.clone(),
            star: (0..m).map(|i| (labels[2 * i].clone(), labels[2 * i + 1].clone())).collect(),
            leq: leq.iter().map(|&(a, b)| (labels[a].clone(), labels[b].clone())).collect(),
            strict: false,
        };
        HalfspaceSystem::build(&raw).unwrap()
    }

    #[test]
    fn single_pair_both_choices_are_vertices() {
        let s = system(1, &[]);
        for o in [Orientation::unstarred(1), Orientation::from_starred(1, [0])] {
            assert!(is_vertex(&s, &o).unwrap().vertex);
            assert_eq!(flip(&s, &flip(&s, &o, 0).unwrap(), 0).unwrap(), o);
        }
    }

    #[test]
    fn chain_orientations() {
        // a = h0 ≤ b = h1 (halfspace 2).
        let s = system(2, &[(0, 2)]);
        let a_bstar = Orientation::from_starred(2, [1]);
        let v = is_vertex(&s, &a_bstar).unwrap();
        assert!(!v.vertex);
        assert_eq!(v.witness, Some((0, 1)));
        let a_b = Orientation::unstarred(2);
        assert_eq!(minimal_halfspaces(&s, &a_b).unwrap(), vec![0]);
        assert!(matches!(flip(&s, &a_b, 1), Err(PocsetError::NotMinimal(_))));
        let flipped = flip(&s, &a_b, 0).unwrap();
        assert_eq!(flipped, Orientation::from_starred(2, [0]));
        assert!(is_vertex(&s, &flipped).unwrap().vertex);
    }

    #[test]
    fn transversal_pairs_all_orientations_consistent() {
        let s = system(2, &[]);
        for bits in 0..4usize {
            let o = Orientation::from_starred(2, (0..2).filter(|i| bits >> i & 1 == 1));
            assert!(is_vertex(&s, &o).unwrap().vertex);
            assert_eq!(minimal_halfspaces(&s, &o).unwrap().len(), 2);
        }
    }

    #[test]
    fn partial_orientation_is_rejected() {
        let s = system(2, &[]);
        assert!(matches!(
            is_vertex(&s, &Orientation::unstarred(1)),
            Err(PocsetError::PartialOrientation { .. })
        ));
    }

    #[test]
    fn seed_is_consistent() {
        for leq in [vec![], vec![(0, 2)], vec![(0, 2), (2, 4)], vec![(1, 2), (3, 5), (0, 5)]] {
            let s = system(3, &leq);
            let o = seed_vertex(&s).unwrap();
            assert!(is_vertex(&s, &o).unwrap().vertex, "{leq:?}");
        }
    }

    #[test]
    fn from_choice_requires_total_choice() {
        assert!(Orientation::from_choice(2, &[0, 3]).is_some());
        assert!(Orientation::from_choice(2, &[0, 1]).is_none());
        assert!(Orientation::from_choice(2, &[0]).is_none());
    }
}
