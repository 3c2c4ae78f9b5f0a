use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::PocsetError;
use crate::label::Label;

/// Index of a halfspace. Hyperplane `i` owns halfspaces `2i` (as listed) and
/// `2i + 1` (its star).
pub type HalfspaceId = usize;

pub fn star(h: HalfspaceId) -> HalfspaceId {
    h ^ 1
}

pub fn hyperplane_of(h: HalfspaceId) -> usize {
    h >> 1
}

/// Pocset input as read from JSON. `leq` lists generators; the builder closes
/// them transitively and, unless `strict`, under `a ≤ b ⇒ b⋆ ≤ a⋆`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawPocset {
    pub halfspaces: Vec<Label>,
    pub star: Vec<(Label, Label)>,
    #[serde(default)]
    pub leq: Vec<(Label, Label)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
}

impl RawPocset {
    pub fn from_json(text: &str) -> Result<Self, PocsetError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A finite halfspace system: a poset with an order-reversing, fixed-point-free
/// involution satisfying the nesting condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceSystem {
    labels: Vec<Label>,
    index: HashMap<Label, HalfspaceId>,
    /// `up[a]` = `{b : a ≤ b}`.
    up: Vec<FixedBitSet>,
    /// `down[b]` = `{a : a ≤ b}`.
    down: Vec<FixedBitSet>,
    transversal: Vec<FixedBitSet>,
}

impl HalfspaceSystem {
    pub fn build(raw: &RawPocset) -> Result<Self, PocsetError> {
        let mut listed: HashMap<&Label, usize> = HashMap::new();
        for l in &raw.halfspaces {
            if listed.insert(l, 0).is_some() {
                return Err(PocsetError::DuplicateHalfspace(l.clone()));
            }
        }
        let mut labels = Vec::with_capacity(raw.halfspaces.len());
        for (a, b) in &raw.star {
            if a == b {
                return Err(PocsetError::SelfPaired(a.clone()));
            }
            for l in [a, b] {
                let seen = listed
                    .get_mut(l)
                    .ok_or_else(|| PocsetError::UnknownHalfspace(l.clone()))?;
                *seen += 1;
                if *seen > 1 {
                    return Err(PocsetError::NotInvolution(l.clone()));
                }
            }
            labels.push(a.clone());
            labels.push(b.clone());
        }
        if let Some(l) = raw.halfspaces.iter().find(|l| listed[l] == 0) {
            return Err(PocsetError::NotInvolution(l.clone()));
        }
        let index: HashMap<Label, HalfspaceId> =
            labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in &raw.leq {
            let ia = *index.get(a).ok_or_else(|| PocsetError::UnknownHalfspace(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| PocsetError::UnknownHalfspace(b.clone()))?;
            up[ia].insert(ib);
            if !raw.strict {
                up[star(ib)].insert(star(ia));
            }
        }
        Self::from_relation(labels, up, raw.strict)
    }

    /// Builds from halfspace labels in pair order (`2i`, `2i+1` paired) and a
    /// relation given as up-sets; reflexivity and transitivity are added here.
    pub fn from_relation(labels: Vec<Label>, mut up: Vec<FixedBitSet>, strict: bool) -> Result<Self, PocsetError> {
        let n = labels.len();
        assert_eq!(n % 2, 0, "halfspaces come in pairs");
        assert_eq!(up.len(), n);
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(PocsetError::DuplicateHalfspace(l.clone()));
            }
        }
        for (a, row) in up.iter_mut().enumerate() {
            row.grow(n);
            row.insert(a);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        for a in 0..n {
            if let Some(b) = up[a].ones().find(|&b| b != a && up[b].contains(a)) {
                return Err(PocsetError::CyclicOrder {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                });
            }
        }
        if strict {
            for a in 0..n {
                if let Some(b) = up[a].ones().find(|&b| !up[star(b)].contains(star(a))) {
                    return Err(PocsetError::NotOrderReversing {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                    });
                }
            }
        }
        let m = n / 2;
        for i in 0..m {
            for j in i + 1..m {
                let rel: Vec<(Label, Label)> = [(0, 0), (0, 1), (1, 0), (1, 1)]
                    .iter()
                    .filter(|&&(s, t)| up[2 * i + s].contains(2 * j + t))
                    .map(|&(s, t)| (labels[2 * i + s].clone(), labels[2 * j + t].clone()))
                    .collect();
                if rel.len() > 1 {
                    return Err(PocsetError::NestingViolation {
                        h: labels[2 * i].clone(),
                        k: labels[2 * j].clone(),
                        relations: rel,
                    });
                }
            }
        }
        for h in 0..n {
            if up[h].contains(star(h)) {
                return Err(PocsetError::ComparableComplements(labels[h].clone()));
            }
        }
        let mut transversal = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in 0..m {
                if i != j && (0..2).all(|s| (0..2).all(|t| !up[2 * i + s].contains(2 * j + t))) {
                    transversal[i].insert(j);
                }
            }
        }
        Ok(HalfspaceSystem {
            labels,
            index,
            up,
            down,
            transversal,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, PocsetError> {
        Self::build(&RawPocset::from_json(text)?)
    }

    /// Number of hyperplanes (halfspace pairs).
    pub fn hyperplane_count(&self) -> usize {
        self.labels.len() / 2
    }

    pub fn halfspace_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, h: HalfspaceId) -> &Label {
        &self.labels[h]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn halfspace(&self, l: &Label) -> Option<HalfspaceId> {
        self.index.get(l).copied()
    }

    pub fn leq(&self, a: HalfspaceId, b: HalfspaceId) -> bool {
        self.up[a].contains(b)
    }

    pub fn up_set(&self, a: HalfspaceId) -> &FixedBitSet {
        &self.up[a]
    }

    pub fn down_set(&self, b: HalfspaceId) -> &FixedBitSet {
        &self.down[b]
    }

    /// Whether the halfspaces `h` and `k` (of distinct hyperplanes) satisfy
    /// none of the four nesting relations.
    pub fn transversal(&self, h: HalfspaceId, k: HalfspaceId) -> Result<bool, PocsetError> {
        if hyperplane_of(h) == hyperplane_of(k) {
            return Err(PocsetError::SameHyperplane(self.labels[h].clone()));
        }
        Ok(self.hyperplanes_transversal(hyperplane_of(h), hyperplane_of(k)))
    }

    pub fn hyperplanes_transversal(&self, i: usize, j: usize) -> bool {
        self.transversal[i].contains(j)
    }

    /// Hyperplanes transversal to hyperplane `i`.
    pub fn transversal_to(&self, i: usize) -> &FixedBitSet {
        &self.transversal[i]
    }

    /// Generating pairs of the order (the full relation minus reflexive pairs),
    /// suitable for re-ingestion in strict mode.
    pub fn to_raw(&self) -> RawPocset {
        let mut leq = Vec::new();
        for a in 0..self.labels.len() {
            for b in self.up[a].ones() {
                if a != b {
                    leq.push((self.labels[a].clone(), self.labels[b].clone()));
                }
            }
        }
        RawPocset {
            halfspaces: self.labels.clone(),
            star: (0..self.hyperplane_count())
                .map(|i| (self.labels[2 * i].clone(), self.labels[2 * i + 1].clone()))
                .collect(),
            leq,
            strict: true,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)], leq: &[(&str, &str)]) -> RawPocset {
        RawPocset {
            halfspaces: pairs.iter().flat_map(|(a, b)| [Label::from(*a), Label::from(*b)]).collect(),
            star: pairs.iter().map(|(a, b)| (Label::from(*a), Label::from(*b))).collect(),
            leq: leq.iter().map(|(a, b)| (Label::from(*a), Label::from(*b))).collect(),
            strict: false,
        }
    }

    #[test]
    fn single_pair_is_valid() {
        let s = HalfspaceSystem::build(&raw(&[("a", "a*")], &[])).unwrap();
        assert_eq!(s.hyperplane_count(), 1);
        assert!(!s.leq(0, 1));
    }

    #[test]
    fn doubly_nested_pair_is_rejected() {
        let err = HalfspaceSystem::build(&raw(&[("a", "a*"), ("b", "b*")], &[("a", "b"), ("a", "b*")])).unwrap_err();
        match err {
            PocsetError::NestingViolation { relations, .. } => assert!(relations.len() >= 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nesting_forces_reversed_relation() {
        let s = HalfspaceSystem::build(&raw(&[("a", "a*"), ("b", "b*")], &[("a", "b")])).unwrap();
        let (a, b) = (s.halfspace(&"a".into()).unwrap(), s.halfspace(&"b".into()).unwrap());
        assert!(s.leq(star(b), star(a)));
        assert!(!s.transversal(a, b).unwrap());
    }

    #[test]
    fn strict_mode_requires_order_reversal() {
        let mut r = raw(&[("a", "a*"), ("b", "b*")], &[("a", "b")]);
        r.strict = true;
        assert!(matches!(HalfspaceSystem::build(&r), Err(PocsetError::NotOrderReversing { .. })));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(HalfspaceSystem::build(&raw(&[("a", "a")], &[])), Err(PocsetError::DuplicateHalfspace(_))));
        let mut r = raw(&[("a", "a*")], &[]);
        r.halfspaces.push("b".into());
        assert!(matches!(HalfspaceSystem::build(&r), Err(PocsetError::NotInvolution(_))));
        let r = raw(&[("a", "a*"), ("b", "b*")], &[("a", "b"), ("b", "a")]);
        assert!(matches!(HalfspaceSystem::build(&r), Err(PocsetError::CyclicOrder { .. })));
        let r = raw(&[("a", "a*")], &[("a", "a*")]);
        assert!(matches!(HalfspaceSystem::build(&r), Err(PocsetError::ComparableComplements(_))));
        let s = HalfspaceSystem::build(&raw(&[("a", "a*")], &[])).unwrap();
        assert!(matches!(s.transversal(0, 1), Err(PocsetError::SameHyperplane(_))));
    }

    #[test]
    fn self_paired_label() {
        let r = RawPocset {
            halfspaces: vec!["a".into()],
            star: vec![("a".into(), "a".into())],
            leq: vec![],
            strict: false,
        };
        assert!(matches!(HalfspaceSystem::build(&r), Err(PocsetError::SelfPaired(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = HalfspaceSystem::build(&raw(&[("a", "a*"), ("b", "b*"), ("c", "c*")], &[("a", "b")])).unwrap();
        let t = HalfspaceSystem::from_json(&s.to_json()).unwrap();
        assert_eq!(s, t);
    }
}
