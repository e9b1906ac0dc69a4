//! Growth of the X-bar ("F") tree by the σ-operator dynamics.
//!
//! A `ZERO` node has a single successor (excitation by σ⁺); a `ONE` node has
//! two (decay by σ⁻, persistence by σ⁺σ⁻). Staying in `ZERO` is not a step.
//! Per-step state counts therefore follow `(zeros, ones) → (ones, zeros + ones)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on materialized nodes.
pub const DEFAULT_NODE_CAP: u64 = 1 << 20;
/// Deepest tree `grow` will materialize.
pub const MAX_MATERIALIZED_DEPTH: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NodeState {
    Zero,
    One,
}

impl NodeState {
    pub fn flipped(self) -> Self {
        match self {
            NodeState::Zero => NodeState::One,
            NodeState::One => NodeState::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    Excite,
    Decay,
    Persist,
}

impl Rule {
    fn swapped(self) -> Self {
        match self {
            Rule::Excite => Rule::Decay,
            Rule::Decay => Rule::Excite,
            Rule::Persist => Rule::Persist,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FTreeNode {
    pub id: usize,
    pub state: NodeState,
    pub step: usize,
    pub parent: Option<usize>,
    pub rule: Option<Rule>,
}

/// Successor edges of a node in state `s`, left to right.
pub fn branching(s: NodeState) -> &'static [(Rule, NodeState)] {
    match s {
        NodeState::Zero => &[(Rule::Excite, NodeState::One)],
        NodeState::One => &[(Rule::Decay, NodeState::Zero), (Rule::Persist, NodeState::One)],
    }
}

/// Successor edges in the mirrored tree (states and σ± exchanged).
fn mirrored_branching(s: NodeState) -> &'static [(Rule, NodeState)] {
    match s {
        NodeState::One => &[(Rule::Decay, NodeState::Zero)],
        NodeState::Zero => &[(Rule::Excite, NodeState::One), (Rule::Persist, NodeState::Zero)],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FTree {
    nodes: Vec<FTreeNode>,
    depth: usize,
    #[serde(skip)]
    mirrored: bool,
}

/// Number of nodes in a tree of the given depth: `Σ_{n≤depth} Fib(n+1) = Fib(depth+3) − 1`.
pub fn node_count(depth: usize) -> Option<u64> {
    let (mut zeros, mut ones) = (1u64, 0u64);
    let mut total = 1u64;
    for _ in 0..depth {
        (zeros, ones) = (ones, zeros.checked_add(ones)?);
        total = total.checked_add(zeros.checked_add(ones)?)?;
    }
    Some(total)
}

/// Breadth-first growth with the default node cap.
pub fn grow(depth: usize) -> Result<FTree> {
    grow_with_cap(depth, DEFAULT_NODE_CAP)
}

pub fn grow_with_cap(depth: usize, cap: u64) -> Result<FTree> {
    if depth > MAX_MATERIALIZED_DEPTH {
        return Err(Error::DepthTooLarge { depth, max: MAX_MATERIALIZED_DEPTH });
    }
    let total = node_count(depth).unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::NodeCap { nodes: total, cap });
    }
    let mut nodes = Vec::with_capacity(total as usize);
    nodes.push(FTreeNode {
        id: 0,
        state: NodeState::Zero,
        step: 0,
        parent: None,
        rule: None,
    });
    let mut frontier = 0..1;
    for step in 1..=depth {
        let start = nodes.len();
        for parent in frontier.clone() {
            let parent_state = nodes[parent].state;
            for &(rule, state) in branching(parent_state) {
                let id = nodes.len();
                nodes.push(FTreeNode {
                    id,
                    state,
                    step,
                    parent: Some(parent),
                    rule: Some(rule),
                });
            }
        }
        frontier = start..nodes.len();
    }
    Ok(FTree { nodes, depth, mirrored: false })
}

/// Per-step `(zeros, ones)` from the recurrence alone, no nodes built.
pub fn counts_only(depth: usize) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::with_capacity(depth + 1);
    let (mut zeros, mut ones) = (1u64, 0u64);
    out.push((zeros, ones));
    for _ in 0..depth {
        let next = zeros
            .checked_add(ones)
            .ok_or(Error::Overflow { n: out.len() as u64 + 1 })?;
        (zeros, ones) = (ones, next);
        out.push((zeros, ones));
    }
    Ok(out)
}

/// A possible parent of a node, given only the node's state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ParentCandidate {
    /// The node may be the root itself.
    Root,
    Parent { state: NodeState, rule: Rule },
}

/// All local inversions of the branching table for a node in `state`.
pub fn parents_consistent_with(state: NodeState) -> Vec<ParentCandidate> {
    let mut out = Vec::new();
    if state == NodeState::Zero {
        out.push(ParentCandidate::Root);
    }
    for parent in [NodeState::Zero, NodeState::One] {
        for &(rule, child) in branching(parent) {
            if child == state {
                out.push(ParentCandidate::Parent { state: parent, rule });
            }
        }
    }
    out
}

impl FTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &[FTreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Option<&FTreeNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Whether this tree is the state-exchanged mirror of a grown tree.
    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn count_states(&self, step: usize) -> Result<(u64, u64)> {
        if step > self.depth {
            return Err(Error::StepOutOfRange { step, depth: self.depth });
        }
        let mut zeros = 0;
        let mut ones = 0;
        for n in self.nodes.iter().filter(|n| n.step == step) {
            match n.state {
                NodeState::Zero => zeros += 1,
                NodeState::One => ones += 1,
            }
        }
        Ok((zeros, ones))
    }

    /// `(zeros, ones)` for every step `0..=depth`.
    pub fn counts(&self) -> Vec<(u64, u64)> {
        let mut out = vec![(0u64, 0u64); self.depth + 1];
        for n in &self.nodes {
            match n.state {
                NodeState::Zero => out[n.step].0 += 1,
                NodeState::One => out[n.step].1 += 1,
            }
        }
        out
    }

    /// Ancestor of `id` at `step`, found by following stored parent links.
    pub fn ancestor_at(&self, id: usize, step: usize) -> Option<&FTreeNode> {
        let mut cur = self.nodes.get(id)?;
        if step > cur.step {
            return None;
        }
        while cur.step > step {
            cur = &self.nodes[cur.parent?];
        }
        Some(cur)
    }

    /// Rule sequence from the root down to `id`.
    pub fn path_rules(&self, id: usize) -> Option<Vec<Rule>> {
        let mut rules = Vec::new();
        let mut cur = self.nodes.get(id)?;
        while let (Some(p), Some(r)) = (cur.parent, cur.rule) {
            rules.push(r);
            cur = &self.nodes[p];
        }
        rules.reverse();
        Some(rules)
    }

    /// Replays a rule sequence from the root, returning the node reached.
    pub fn follow(&self, rules: &[Rule]) -> Option<&FTreeNode> {
        let mut cur = &self.nodes[0];
        for &rule in rules {
            cur = self
                .nodes
                .iter()
                .skip(cur.id + 1)
                .find(|n| n.parent == Some(cur.id) && n.rule == Some(rule))?;
        }
        Some(cur)
    }

    /// Checks that every node is a legal successor of its parent.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let table = if self.mirrored { mirrored_branching } else { branching };
        let root_state = if self.mirrored { NodeState::One } else { NodeState::Zero };
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return Err(format!("node at index {i} has id {}", n.id));
            }
            match (n.parent, n.rule) {
                (None, None) => {
                    if n.step != 0 || n.state != root_state || i != 0 {
                        return Err(format!("bad root {n:?}"));
                    }
                }
                (Some(p), Some(rule)) => {
                    let parent = self.nodes.get(p).ok_or(format!("dangling parent {p}"))?;
                    if n.step != parent.step + 1 {
                        return Err(format!("node {i}: step {} under step {}", n.step, parent.step));
                    }
                    if !table(parent.state).contains(&(rule, n.state)) {
                        return Err(format!("node {i}: {rule:?} to {:?} from {:?}", n.state, parent.state));
                    }
                }
                _ => return Err(format!("node {i}: parent and rule must both be present")),
            }
        }
        Ok(())
    }
}

/// Exchanges ZERO↔ONE and EXCITE↔DECAY on every node; ids and shape are kept.
pub fn symmetric(tree: &FTree) -> FTree {
    FTree {
        nodes: tree
            .nodes
            .iter()
            .map(|n| FTreeNode {
                state: n.state.flipped(),
                rule: n.rule.map(Rule::swapped),
                ..n.clone()
            })
            .collect(),
        depth: tree.depth,
        mirrored: !tree.mirrored,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fib_oracle(n: usize) -> u64 {
        let (mut a, mut b) = (1u64, 1u64);
        for _ in 2..n.max(2) {
            (a, b) = (b, a + b);
        }
        if n <= 2 {
            1
        } else {
            b
        }
    }

    fn totals(counts: &[(u64, u64)]) -> Vec<u64> {
        counts.iter().map(|(z, o)| z + o).collect()
    }

    #[test]
    fn small_trees() {
        assert_eq!(totals(&grow(3).unwrap().counts()), vec![1, 1, 2, 3]);
        let t0 = grow(0).unwrap();
        assert_eq!(t0.len(), 1);
        assert_eq!(t0.nodes()[0].state, NodeState::Zero);
        assert_eq!(totals(&t0.counts()), vec![1]);
        assert_eq!(
            totals(&grow(10).unwrap().counts()),
            (1..=11).map(fib_oracle).collect::<Vec<_>>()
        );
    }

    #[test]
    fn count_states_examples() {
        let t = grow(6).unwrap();
        assert_eq!(t.count_states(0).unwrap(), (1, 0));
        assert_eq!(t.count_states(3).unwrap(), (1, 2));
        assert_eq!(t.count_states(6).unwrap(), (5, 8));
        assert!(matches!(t.count_states(7), Err(Error::StepOutOfRange { step: 7, depth: 6 })));
    }

    #[test]
    fn recurrence_oracle_for_step_six() {
        let (mut p, mut q) = (1u64, 0u64);
        for _ in 0..6 {
            (p, q) = (q, p + q);
        }
        assert_eq!((p, q), (5, 8));
    }

    #[test]
    fn counts_only_matches_materialized() {
        let grown = grow(22).unwrap().counts();
        assert_eq!(counts_only(22).unwrap(), grown);
        for (n, (z, o)) in counts_only(25).unwrap().into_iter().enumerate() {
            assert_eq!(z + o, fib_oracle(n + 1), "step {n}");
        }
    }

    #[test]
    fn deterministic_breadth_first_ids() {
        let t = grow(3).unwrap();
        let summary: Vec<_> = t.nodes().iter().map(|n| (n.id, n.state, n.parent, n.rule)).collect();
        use NodeState::*;
        use Rule::*;
        assert_eq!(
            summary,
            vec![
                (0, Zero, None, None),
                (1, One, Some(0), Some(Excite)),
                (2, Zero, Some(1), Some(Decay)),
                (3, One, Some(1), Some(Persist)),
                (4, One, Some(2), Some(Excite)),
                (5, Zero, Some(3), Some(Decay)),
                (6, One, Some(3), Some(Persist)),
            ]
        );
    }

    #[test]
    fn caps() {
        assert!(matches!(grow(31), Err(Error::DepthTooLarge { .. })));
        assert!(matches!(grow(28), Err(Error::NodeCap { .. })));
        assert!(grow(27).is_ok());
        assert!(matches!(grow_with_cap(5, 10), Err(Error::NodeCap { nodes: 20, cap: 10 })));
        assert_eq!(counts_only(60).unwrap().len(), 61);
    }

    #[test]
    fn backward_ambiguity() {
        use NodeState::*;
        let one = parents_consistent_with(One);
        assert_eq!(
            one,
            vec![
                ParentCandidate::Parent { state: Zero, rule: Rule::Excite },
                ParentCandidate::Parent { state: One, rule: Rule::Persist },
            ]
        );
        let zero = parents_consistent_with(Zero);
        assert_eq!(
            zero,
            vec![ParentCandidate::Root, ParentCandidate::Parent { state: One, rule: Rule::Decay }]
        );
    }

    #[test]
    fn ariadne_thread_recovers_ancestors() {
        let t = grow(8).unwrap();
        let witness = t
            .nodes()
            .iter()
            .find(|n| n.step >= 2 && n.state == NodeState::One)
            .unwrap();
        assert_eq!(parents_consistent_with(witness.state).len(), 2);
        let parent = t.node(witness.parent.unwrap()).unwrap();
        assert_eq!(t.ancestor_at(witness.id, witness.step - 1), Some(parent));
        for n in t.nodes() {
            let rules = t.path_rules(n.id).unwrap();
            assert_eq!(rules.len(), n.step);
            assert_eq!(t.follow(&rules).map(|m| m.id), Some(n.id));
            for s in 0..=n.step {
                let a = t.ancestor_at(n.id, s).unwrap();
                assert_eq!(t.follow(&rules[..s]).unwrap().id, a.id);
            }
        }
    }

    #[test]
    fn symmetric_tree() {
        let t = grow(3).unwrap();
        let s = symmetric(&t);
        assert_eq!(s.nodes()[0].state, NodeState::One);
        assert_eq!(totals(&s.counts()), vec![1, 1, 2, 3]);
        assert!(s.validate().is_ok());
        let back = symmetric(&s);
        assert_eq!(back, t);
        assert_eq!(s.nodes()[1].rule, Some(Rule::Decay));
    }

    proptest! {
        #[test]
        fn every_node_respects_branching(depth in 0usize..16) {
            let t = grow(depth).unwrap();
            prop_assert!(t.validate().is_ok());
            prop_assert!(symmetric(&t).validate().is_ok());
            let c = t.counts();
            for w in c.windows(2) {
                prop_assert_eq!(w[1], (w[0].1, w[0].0 + w[0].1));
            }
        }

        #[test]
        fn random_subtree_consistency(depth in 2usize..14, pick in any::<prop::sample::Index>()) {
            let t = grow(depth).unwrap();
            let node = &t.nodes()[pick.index(t.len())];
            // walk up: each (state, rule) must be one of the local inversions
            let mut cur = node;
            while let Some(p) = cur.parent {
                let parent = t.node(p).unwrap();
                let cands = parents_consistent_with(cur.state);
                let expected = ParentCandidate::Parent { state: parent.state, rule: cur.rule.unwrap() };
                prop_assert!(cands.contains(&expected));
                cur = parent;
            }
            prop_assert_eq!(cur.id, 0);
        }
    }
}
