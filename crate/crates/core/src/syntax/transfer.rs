//! Transfer: labeling of every phrase, the LF structure with all copies, and
//! the pronounced PF string.
//!
//! Linearization is specifier before head before complement. A set labeled
//! by its lexical head puts the head first; a set labeled by a phrasal member
//! puts the other member (the specifier) first; in a shared-label set a moved
//! phrase goes first. Remaining ties fall back to storage order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::label::{Analysis, LabelSource};
use super::object::{Kind, ObjId, SynObj};
use super::SyntaxError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PronunciationPolicy {
    /// The occurrence closest to the root; ties go to the leftmost.
    #[default]
    Highest,
    /// The deepest occurrence; ties go to the leftmost.
    Lowest,
    /// Every occurrence.
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum LfNode {
    Leaf {
        class: ObjId,
        lex: String,
        phon: String,
        pronounced: bool,
    },
    Set {
        class: ObjId,
        label: String,
        members: Box<[LfNode; 2]>,
    },
}

impl LfNode {
    pub fn class(&self) -> ObjId {
        match self {
            Self::Leaf { class, .. } | Self::Set { class, .. } => *class,
        }
    }

    /// Number of positions in the tree.
    pub fn size(&self) -> usize {
        match self {
            Self::Leaf { .. } => 1,
            Self::Set { members, .. } => 1 + members[0].size() + members[1].size(),
        }
    }

    /// Positions per occurrence class.
    pub fn positions(&self) -> HashMap<ObjId, usize> {
        fn walk(n: &LfNode, out: &mut HashMap<ObjId, usize>) {
            *out.entry(n.class()).or_default() += 1;
            if let LfNode::Set { members, .. } = n {
                walk(&members[0], out);
                walk(&members[1], out);
            }
        }
        let mut out = HashMap::new();
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccurrenceSummary {
    pub class: ObjId,
    /// Distinct sets the class is a member of (1 for the root).
    pub occurrences: usize,
    /// Positions in the expanded LF tree.
    pub positions: usize,
    /// Positions that are pronounced.
    pub pronounced: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferOutput {
    pub root: ObjId,
    pub policy: PronunciationPolicy,
    pub lf: LfNode,
    pub pf: Vec<String>,
    pub occurrences: Vec<OccurrenceSummary>,
}

pub(crate) fn transfer(root: &SynObj, policy: PronunciationPolicy) -> Result<TransferOutput, SyntaxError> {
    let mut an = Analysis::new(root);
    let mut labels = HashMap::new();
    // Objects are in preorder; label bottom-up so failures name the lowest culprit.
    for o in an.objects.clone().iter().rev().filter(|o| !o.is_leaf()) {
        labels.insert(o.id(), an.label(o)?);
    }
    let order: HashMap<ObjId, [SynObj; 2]> = an
        .objects
        .iter()
        .filter_map(|o| {
            let [a, b] = o.members()?.clone();
            let first_b = match labels[&o.id()].source {
                LabelSource::Head(h) => h == b.id(),
                LabelSource::Projects(p) => p == a.id(),
                LabelSource::Shared => !an.moved_here(o.id(), a.id()) && an.moved_here(o.id(), b.id()),
            };
            Some((o.id(), if first_b { [b, a] } else { [a, b] }))
        })
        .collect();
    let chosen = choose_mothers(&an, &order, policy);
    let mut pf = Vec::new();
    let mut pronounced: HashMap<ObjId, usize> = HashMap::new();
    let lf = build(root, None, true, &order, &chosen, &labels, &mut pf, &mut pronounced);
    let positions = lf.positions();
    let mut occurrences: Vec<OccurrenceSummary> = an
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| OccurrenceSummary {
            class: o.id(),
            occurrences: an.mothers[i].len().max(1),
            positions: positions[&o.id()],
            pronounced: pronounced.get(&o.id()).copied().unwrap_or(0),
        })
        .collect();
    occurrences.sort_by_key(|s| s.class);
    Ok(TransferOutput { root: root.id(), policy, lf, pf, occurrences })
}

/// For each object, the mother whose occurrence is pronounced, found by a
/// pass over the objects in topological order. Each candidate is compared by
/// depth and then by its path of linear positions, so ties go leftmost.
fn choose_mothers(
    an: &Analysis,
    order: &HashMap<ObjId, [SynObj; 2]>,
    policy: PronunciationPolicy,
) -> Option<HashMap<ObjId, ObjId>> {
    if policy == PronunciationPolicy::All {
        return None;
    }
    let topo = topological(an);
    let mut best: HashMap<ObjId, (usize, Vec<u8>, ObjId)> = HashMap::new();
    best.insert(an.root.id(), (0, Vec::new(), an.root.id()));
    for o in topo {
        let (depth, key, _) = best[&o.id()].clone();
        let Some(members) = order.get(&o.id()) else { continue };
        for (i, m) in members.iter().enumerate() {
            let mut k = key.clone();
            k.push(i as u8);
            let cand = (depth + 1, k, o.id());
            let better = match best.get(&m.id()) {
                None => true,
                Some(cur) => match policy {
                    PronunciationPolicy::Highest => (cand.0, &cand.1) < (cur.0, &cur.1),
                    _ => (std::cmp::Reverse(cand.0), &cand.1) < (std::cmp::Reverse(cur.0), &cur.1),
                },
            };
            if better {
                best.insert(m.id(), cand);
            }
        }
    }
    Some(best.into_iter().map(|(c, (_, _, m))| (c, m)).collect())
}

/// Objects ordered so that every mother precedes its members.
fn topological(an: &Analysis) -> Vec<SynObj> {
    fn visit(o: &SynObj, seen: &mut HashMap<ObjId, ()>, out: &mut Vec<SynObj>) {
        if seen.insert(o.id(), ()).is_some() {
            return;
        }
        for m in o.members().into_iter().flatten() {
            visit(m, seen, out);
        }
        out.push(o.clone());
    }
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    visit(&an.root, &mut seen, &mut out);
    out.reverse();
    out
}

#[allow(clippy::too_many_arguments)]
fn build(
    o: &SynObj,
    mother: Option<ObjId>,
    mother_pronounced: bool,
    order: &HashMap<ObjId, [SynObj; 2]>,
    chosen: &Option<HashMap<ObjId, ObjId>>,
    labels: &HashMap<ObjId, super::label::LabelInfo>,
    pf: &mut Vec<String>,
    pronounced: &mut HashMap<ObjId, usize>,
) -> LfNode {
    let here = mother_pronounced
        && match (chosen, mother) {
            (Some(c), Some(m)) => c.get(&o.id()) == Some(&m),
            _ => true,
        };
    if here {
        *pronounced.entry(o.id()).or_default() += 1;
    }
    match o.kind() {
        Kind::Leaf(item) => {
            if here && !item.phon().is_empty() {
                pf.push(item.phon().to_string());
            }
            LfNode::Leaf {
                class: o.id(),
                lex: item.id().to_string(),
                phon: item.phon().to_string(),
                pronounced: here,
            }
        }
        Kind::Set(stored) => {
            let [first, second] = &order[&o.id()];
            let f = build(first, Some(o.id()), here, order, chosen, labels, pf, pronounced);
            let s = build(second, Some(o.id()), here, order, chosen, labels, pf, pronounced);
            let members = if first.id() == stored[0].id() { [f, s] } else { [s, f] };
            LfNode::Set {
                class: o.id(),
                label: labels[&o.id()].label.clone(),
                members: Box::new(members),
            }
        }
    }
}
