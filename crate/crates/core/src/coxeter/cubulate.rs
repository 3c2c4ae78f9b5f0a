use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::ball::{CayleyBall, Root};
use super::system::CoxeterSystem;
use super::CoxeterError;
use crate::label::Label;
use crate::pocset::{dual_complex, maximal_cubes, DualComplex, HalfspaceSystem, MaximalCubes, Orientation};

/// Pairs of hyperplanes whose truncated relation may change in a larger ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrustReport {
    /// Walls are kept when one of their edges lies within this radius.
    pub inner_radius: usize,
    pub kept_walls: usize,
    pub dropped_walls: usize,
    /// Non-transversal pairs whose every nonempty quarter reaches the ball's
    /// frontier, so the empty quarter may be filled further out.
    pub untrusted: Vec<(usize, usize)>,
}

/// Truncated roots of the walls near the identity, as a halfspace system.
/// Hyperplane `i` is ball wall `walls[i]`; its unstarred halfspace is the
/// side containing the identity.
#[derive(Clone, Debug)]
pub struct WallHalfspaces {
    pub walls: Vec<usize>,
    pub defining_edges: Vec<usize>,
    pub sides: Vec<Root>,
    pub system: HalfspaceSystem,
    pub trust: TrustReport,
}

impl WallHalfspaces {
    pub fn hyperplane_of_wall(&self, wall: usize) -> Option<usize> {
        self.walls.iter().position(|&w| w == wall)
    }

    /// The orientation choosing, on every hyperplane, the side containing `g`.
    pub fn principal_orientation(&self, g: usize) -> Orientation {
        Orientation::from_starred(self.sides.len(), (0..self.sides.len()).filter(|&i| !self.sides[i].contains(g)))
    }
}

/// Elements with a right neighbour outside the ball.
fn frontier(ball: &CayleyBall) -> FixedBitSet {
    let mut f = FixedBitSet::with_capacity(ball.len());
    for g in 0..ball.len() {
        if (0..ball.system().rank() as u8).any(|s| ball.right(g, s).is_none()) {
            f.insert(g);
        }
    }
    f
}

/// Walls with an edge inside the inner ball of radius `R - margin`. A ball with
/// no frontier is the whole (finite) group and keeps every wall.
pub fn halfspace_system(ball: &CayleyBall, margin: usize) -> Result<WallHalfspaces, CoxeterError> {
    let sys = ball.system();
    let edge = frontier(ball);
    let margin = if edge.is_clear() { 0 } else { margin };
    let inner = ball.radius().saturating_sub(margin);
    let within = margin <= ball.radius();
    let mut walls = Vec::new();
    let mut defining_edges = Vec::new();
    let mut sides = Vec::new();
    for (w, wall) in ball.walls().iter().enumerate() {
        let edge = wall.edges.iter().copied().find(|&e| {
            let ed = ball.edges()[e];
            within && ball.length(ed.from).max(ball.length(ed.to)) <= inner
        });
        if let Some(e) = edge {
            let ed = ball.edges()[e];
            let h = ball.halfspace(ed.from, ed.to)?;
            walls.push(w);
            defining_edges.push(e);
            sides.push(if h.contains(0) { h } else { h.complement() });
        }
    }
    let m = sides.len();
    let mut all: Vec<FixedBitSet> = Vec::with_capacity(2 * m);
    let mut labels = Vec::with_capacity(2 * m);
    for (i, side) in sides.iter().enumerate() {
        let r = sys.format(&ball.walls()[walls[i]].reflection);
        all.push(side.side.clone());
        all.push(side.complement().side);
        labels.push(Label::Str(format!("r{r}")));
        labels.push(Label::Str(format!("r{r}*")));
    }
    let up: Vec<FixedBitSet> = all
        .iter()
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(all.len());
            for (j, b) in all.iter().enumerate() {
                if a.is_subset(b) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let system = HalfspaceSystem::from_relation(labels, up, true)?;

    let mut untrusted = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if system.hyperplanes_transversal(i, j) {
                continue;
            }
            let quarters = (0..4).map(|q| {
                let mut x = all[2 * i + (q >> 1)].clone();
                x.intersect_with(&all[2 * j + (q & 1)]);
                x
            });
            if quarters.filter(|x| !x.is_clear()).all(|x| !x.is_disjoint(&edge)) {
                untrusted.push((i, j));
            }
        }
    }
    Ok(WallHalfspaces {
        walls,
        defining_edges,
        sides,
        system,
        trust: TrustReport {
            inner_radius: inner,
            kept_walls: m,
            dropped_walls: ball.walls().len() - m,
            untrusted,
        },
    })
}

/// Dual cube complex of the wall system, seeded at the identity's principal
/// orientation, together with the vertex `nu[g]` of every ball element.
#[derive(Clone, Debug)]
pub struct Cubulation {
    pub halfspaces: WallHalfspaces,
    pub dual: DualComplex,
    pub nu: Vec<usize>,
    pub maximal: MaximalCubes,
    /// Ball edges map to dual edges (or collapse, for dropped walls).
    pub adjacent: bool,
    /// `nu` is injective on the ball of the inner radius.
    pub injective_inner: bool,
    pub injective: bool,
    /// `nu[s·g] = s·nu[g]` wherever all data lies in the ball.
    pub equivariant: bool,
}

pub fn cubulate(ball: &CayleyBall, margin: usize, cap: usize) -> Result<Cubulation, CoxeterError> {
    let hs = halfspace_system(ball, margin)?;
    let m = hs.sides.len();
    let seed = Orientation::unstarred(m);
    let dual = dual_complex(&hs.system, &seed, cap)?;
    let orientations: Vec<Orientation> = (0..ball.len()).map(|g| hs.principal_orientation(g)).collect();
    let nu: Vec<usize> = orientations
        .iter()
        .map(|o| dual.vertex_of(o).expect("principal orientations lie in the seed component"))
        .collect();

    let adjacent = ball.edges().iter().enumerate().all(|(e, ed)| {
        let diff = orientations[ed.from].differences(&orientations[ed.to]);
        match hs.hyperplane_of_wall(ball.wall_of_edge(e)) {
            Some(i) => diff == [i],
            None => diff.is_empty(),
        }
    });
    let injective_on = |r: usize| {
        let mut seen = HashMap::new();
        (0..ball.len()).filter(|&g| ball.length(g) <= r).all(|g| seen.insert(nu[g], g).is_none())
    };
    let injective_inner = injective_on(hs.trust.inner_radius);
    let injective = injective_on(ball.radius());
    let equivariant = check_equivariance(ball, &hs, &orientations)?;
    let maximal = maximal_cubes(&hs.system, &dual);
    Ok(Cubulation {
        halfspaces: hs,
        dual,
        nu,
        maximal,
        adjacent,
        injective_inner,
        injective,
        equivariant,
    })
}

/// Translating the halfspace of `nu[g]` on wall `(u,v)` by `s` must give the
/// halfspace of `nu[s·g]` on wall `(su,sv)`.
fn check_equivariance(ball: &CayleyBall, hs: &WallHalfspaces, orientations: &[Orientation]) -> Result<bool, CoxeterError> {
    let mut cache: HashMap<(usize, usize), Root> = HashMap::new();
    let mut halfspace = |u: usize, v: usize| -> Result<Root, CoxeterError> {
        if let Some(r) = cache.get(&(u, v)) {
            return Ok(r.clone());
        }
        let r = ball.halfspace(u, v)?;
        cache.insert((u, v), r.clone());
        Ok(r)
    };
    for s in 0..ball.system().rank() as u8 {
        let shifted: Vec<Option<usize>> = (0..ball.len()).map(|g| ball.left(s, g)).collect::<Result<_, _>>()?;
        for &e in &hs.defining_edges {
            let ed = ball.edges()[e];
            let (Some(su), Some(sv)) = (shifted[ed.from], shifted[ed.to]) else {
                continue;
            };
            let Some(j) = ball
                .edge_between(su, sv)
                .and_then(|e2| hs.hyperplane_of_wall(ball.wall_of_edge(e2)))
            else {
                continue;
            };
            let h_uv = halfspace(ed.from, ed.to)?;
            let h_suv = halfspace(su, sv)?;
            let same_as_side = if h_suv == hs.sides[j] {
                true
            } else if h_suv == hs.sides[j].complement() {
                false
            } else {
                return Ok(false);
            };
            // The translate of H(u,v) is H(su,sv); starred means "not the identity side".
            let suv_starred = !same_as_side;
            for g in 0..ball.len() {
                let Some(sg) = shifted[g] else { continue };
                let g_in_uv = h_uv.contains(g);
                let expected_starred = if g_in_uv { suv_starred } else { !suv_starred };
                if orientations[sg].is_starred(j) != expected_starred {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Number of ends suggested by a finite ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndsVerdict {
    Zero,
    One,
    Two,
    /// Three or more components: by Hopf's theorem, probably infinitely many.
    Many,
}

impl EndsVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            EndsVerdict::Zero => "0",
            EndsVerdict::One => "1",
            EndsVerdict::Two => "2",
            EndsVerdict::Many => "inf",
        }
    }
}

impl Serialize for EndsVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsReport {
    pub inner: usize,
    pub radius: usize,
    pub components: usize,
    pub verdict: EndsVerdict,
}

/// Components of the annulus `r < |g| <= R` that reach the sphere of radius `R`.
/// This is an estimate from one finite ball, not a decision procedure.
pub fn ends_estimate(sys: &CoxeterSystem, r: usize, radius: usize, cap: usize) -> Result<EndsReport, CoxeterError> {
    if r >= radius {
        return Err(CoxeterError::BadRadii { inner: r, radius });
    }
    let ball = CayleyBall::new(sys, radius, cap)?;
    let mut keep = FixedBitSet::with_capacity(ball.len());
    (0..ball.len()).filter(|&g| ball.length(g) > r).for_each(|g| keep.insert(g));
    let (comp, _) = ball.graph().components(Some(&keep));
    let mut reaching: Vec<usize> = ball.sphere(radius).map(|g| comp[g]).collect();
    reaching.sort_unstable();
    reaching.dedup();
    let components = reaching.len();
    let verdict = match components {
        0 => EndsVerdict::Zero,
        1 => EndsVerdict::One,
        2 => EndsVerdict::Two,
        _ => EndsVerdict::Many,
    };
    Ok(EndsReport {
        inner: r,
        radius,
        components,
        verdict,
    })
}
