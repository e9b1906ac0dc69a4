use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lexicon::{LexItem, Lexicon};
use super::object::{ObjId, SynObj};
use super::transfer::{self, PronunciationPolicy, TransferOutput};
use super::SyntaxError;

type Result<T> = std::result::Result<T, SyntaxError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LogEntry {
    Select { lex: String, result: ObjId },
    Em { a: ObjId, b: ObjId, result: ObjId },
    Im { root: ObjId, term: ObjId, result: ObjId },
    Close { target: ObjId },
}

/// A closed phase. Its complement is sealed at once; the edge stays
/// accessible until the next phase closes, after which the whole phase is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseRecord {
    pub phase: ObjId,
    pub head: ObjId,
    /// The set whose members are the phase head and its complement.
    pub spine: ObjId,
    pub complement: ObjId,
    pub expired: bool,
}

impl PhaseRecord {
    fn seals(&self, parent: ObjId, child: ObjId) -> bool {
        (self.spine == parent && self.complement == child) || (self.expired && self.phase == parent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Accessibility {
    Accessible,
    /// Present, but every path to it crosses a sealed phase boundary.
    Sealed(ObjId),
    Absent,
}

#[derive(Debug, Clone)]
pub struct Derivation {
    lexicon: Arc<Lexicon>,
    next_id: u64,
    workspace: Vec<SynObj>,
    log: Vec<LogEntry>,
    phases: Vec<PhaseRecord>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.next_id == other.next_id
            && self.workspace == other.workspace
            && self.log == other.log
            && self.phases == other.phases
    }
}

impl Derivation {
    pub fn new(lexicon: Arc<Lexicon>) -> Self {
        Self { lexicon, next_id: 1, workspace: Vec::new(), log: Vec::new(), phases: Vec::new() }
    }

    pub fn lexicon(&self) -> &Arc<Lexicon> {
        &self.lexicon
    }

    pub fn workspace(&self) -> &[SynObj] {
        &self.workspace
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn phases(&self) -> &[PhaseRecord] {
        &self.phases
    }

    /// Any object in the workspace, root or term.
    pub fn find(&self, id: ObjId) -> Option<SynObj> {
        self.workspace.iter().find_map(|r| r.find(id))
    }

    pub fn is_root(&self, id: ObjId) -> bool {
        self.workspace.iter().any(|r| r.id() == id)
    }

    pub fn is_phase_closed(&self, obj: &SynObj) -> bool {
        self.phases.iter().any(|p| p.phase == obj.id())
    }

    fn fresh(&mut self) -> ObjId {
        let id = ObjId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Puts a fresh leaf for a lexical item into the workspace.
    pub fn select(&self, lex: &str) -> Result<(Self, SynObj)> {
        let item = self.lexicon.get(lex).ok_or_else(|| SyntaxError::UnknownLexItem(lex.into()))?;
        let mut d = self.clone();
        let id = d.fresh();
        let leaf = SynObj::leaf(id, item.clone());
        d.workspace.push(leaf.clone());
        d.log.push(LogEntry::Select { lex: lex.into(), result: id });
        Ok((d, leaf))
    }

    fn require_root(&self, obj: &SynObj) -> Result<()> {
        if self.workspace.iter().any(|r| r == obj) {
            Ok(())
        } else if self.find(obj.id()).is_some() {
            Err(SyntaxError::TermViaExternalMerge(obj.id()))
        } else {
            Err(SyntaxError::UnknownObject(obj.id()))
        }
    }

    /// `{a, b}` from two distinct workspace roots.
    pub fn external_merge(&self, a: &SynObj, b: &SynObj) -> Result<(Self, SynObj)> {
        if a.id() == b.id() {
            return Err(SyntaxError::SelfMerge(a.id()));
        }
        self.require_root(a)?;
        self.require_root(b)?;
        let mut d = self.clone();
        let id = d.fresh();
        let merged = SynObj::set(id, a.clone(), b.clone());
        let pos = d.workspace.iter().position(|r| r.id() == a.id()).expect("root checked");
        d.workspace[pos] = merged.clone();
        d.workspace.retain(|r| r.id() != b.id());
        d.log.push(LogEntry::Em { a: a.id(), b: b.id(), result: id });
        Ok((d, merged))
    }

    /// Whether `term` can be reached from `root` without crossing a sealed
    /// phase boundary.
    pub fn accessibility(&self, root: &SynObj, term: ObjId) -> Accessibility {
        let mut seen = HashSet::new();
        let mut stack = vec![root.clone()];
        while let Some(o) = stack.pop() {
            if o.id() == term {
                return Accessibility::Accessible;
            }
            if !seen.insert(o.id()) {
                continue;
            }
            if let Some(m) = o.members() {
                for c in m {
                    if !self.phases.iter().any(|p| p.seals(o.id(), c.id())) {
                        stack.push(c.clone());
                    }
                }
            }
        }
        if !root.contains(term) {
            return Accessibility::Absent;
        }
        let phase = self
            .phases
            .iter()
            .rev()
            .find(|p| self.find(p.phase).is_some_and(|ph| ph.id() != term && ph.contains(term)))
            .map_or(root.id(), |p| p.phase);
        Accessibility::Sealed(phase)
    }

    /// `{y, x}` where `y` is a proper term of the root `x`; `x` is reused as is.
    pub fn internal_merge(&self, root: &SynObj, term: &SynObj) -> Result<(Self, SynObj)> {
        if !self.workspace.iter().any(|r| r == root) {
            return Err(if self.find(root.id()).is_some() {
                SyntaxError::NotARoot(root.id())
            } else {
                SyntaxError::UnknownObject(root.id())
            });
        }
        if term.id() == root.id() {
            return Err(SyntaxError::ImOfRoot(root.id()));
        }
        match self.accessibility(root, term.id()) {
            Accessibility::Accessible => {}
            Accessibility::Sealed(phase) => {
                return Err(SyntaxError::Pic { term: term.id(), phase })
            }
            Accessibility::Absent => {
                return Err(SyntaxError::NotATerm { term: term.id(), root: root.id() })
            }
        }
        let occurrence = root.find(term.id()).expect("accessible term exists");
        let mut d = self.clone();
        let id = d.fresh();
        let merged = SynObj::set(id, occurrence, root.clone());
        let pos = d.workspace.iter().position(|r| r.id() == root.id()).expect("root checked");
        d.workspace[pos] = merged.clone();
        d.log.push(LogEntry::Im { root: root.id(), term: term.id(), result: id });
        Ok((d, merged))
    }

    fn is_phase_head(&self, item: &LexItem) -> bool {
        self.lexicon.is_phase_head(item)
    }

    /// Closes the phase headed by `target`'s head. Closing an already closed
    /// phase returns the derivation unchanged.
    pub fn close_phase(&self, target: &SynObj) -> Result<Self> {
        if self.find(target.id()).is_none() {
            return Err(SyntaxError::UnknownObject(target.id()));
        }
        if self.is_phase_closed(target) {
            return Ok(self.clone());
        }
        let (spine, head, complement) = self
            .phase_spine(target)
            .ok_or(SyntaxError::NotPhaseHeaded(target.id()))?;
        let mut d = self.clone();
        for p in &mut d.phases {
            p.expired = true;
        }
        d.phases.push(PhaseRecord {
            phase: target.id(),
            head: head.id(),
            spine: spine.id(),
            complement: complement.id(),
            expired: false,
        });
        d.log.push(LogEntry::Close { target: target.id() });
        Ok(d)
    }

    /// Walks down from `obj` past specifiers to the set that holds the head
    /// and its complement. Returns `(spine, head, complement)` when that head
    /// is a phase head.
    fn phase_spine(&self, obj: &SynObj) -> Option<(SynObj, SynObj, SynObj)> {
        let [a, b] = obj.members()?;
        let projecting = |o: &SynObj| o.as_leaf().is_some_and(|i| i.is_projecting());
        let head = match (projecting(a), projecting(b)) {
            (true, false) => Some((a, b)),
            (false, true) => Some((b, a)),
            (true, true) => {
                let marked = |o: &SynObj| o.as_leaf().is_some_and(|i| i.is_marked_head());
                match (marked(a), marked(b)) {
                    (true, false) => Some((a, b)),
                    (false, true) => Some((b, a)),
                    _ => return None,
                }
            }
            (false, false) => None,
        };
        if let Some((h, c)) = head {
            let item = h.as_leaf().expect("head is a leaf");
            return self.is_phase_head(item).then(|| (obj.clone(), h.clone(), c.clone()));
        }
        [a, b].into_iter().filter(|m| !m.is_leaf()).find_map(|m| self.phase_spine(m))
    }

    pub fn transfer(&self, root: &SynObj, policy: PronunciationPolicy) -> Result<TransferOutput> {
        if !self.workspace.iter().any(|r| r == root) {
            return Err(SyntaxError::NotARoot(root.id()));
        }
        transfer::transfer(root, policy)
    }

    /// Rebuilds a derivation from its log.
    pub fn replay(lexicon: Arc<Lexicon>, log: &[LogEntry]) -> Result<Self> {
        let mut d = Self::new(lexicon);
        for (i, entry) in log.iter().enumerate() {
            let get = |d: &Self, id: ObjId| {
                d.find(id).ok_or_else(|| SyntaxError::Replay(format!("step {i}: {id} missing")))
            };
            let produced = match entry {
                LogEntry::Select { lex, .. } => {
                    let (next, o) = d.select(lex)?;
                    d = next;
                    Some(o.id())
                }
                LogEntry::Em { a, b, .. } => {
                    let (a, b) = (get(&d, *a)?, get(&d, *b)?);
                    let (next, o) = d.external_merge(&a, &b)?;
                    d = next;
                    Some(o.id())
                }
                LogEntry::Im { root, term, .. } => {
                    let (r, t) = (get(&d, *root)?, get(&d, *term)?);
                    let (next, o) = d.internal_merge(&r, &t)?;
                    d = next;
                    Some(o.id())
                }
                LogEntry::Close { target } => {
                    d = d.close_phase(&get(&d, *target)?)?;
                    None
                }
            };
            let expected = match entry {
                LogEntry::Select { result, .. }
                | LogEntry::Em { result, .. }
                | LogEntry::Im { result, .. } => Some(*result),
                LogEntry::Close { .. } => None,
            };
            if produced != expected {
                return Err(SyntaxError::Replay(format!(
                    "step {i}: produced {produced:?}, log says {expected:?}"
                )));
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn lexicon() -> Arc<Lexicon> {
        Arc::new(
            Lexicon::from_json(
                r#"[
                {"id":"which","phon":"which","features":["+H","cat:D","cat:Q"]},
                {"id":"books","phon":"books","features":["+N","-V"]},
                {"id":"read","phon":"read","features":["-N","+V"]},
                {"id":"you","phon":"you","features":["-H","cat:D"]},
                {"id":"did","phon":"did","features":["cat:C","cat:Q"],"phase_head":true},
                {"id":"v","phon":"","features":["cat:v"]},
                {"id":"the","phon":"the","features":["-H","cat:D"]},
                {"id":"man","phon":"man","features":["+N","-V"]}
            ]"#,
            )
            .unwrap(),
        )
    }

    fn sel(d: Derivation, lex: &str) -> (Derivation, SynObj) {
        d.select(lex).unwrap()
    }

    fn em(d: Derivation, a: &SynObj, b: &SynObj) -> (Derivation, SynObj) {
        d.external_merge(a, b).unwrap()
    }

    /// `{did, {you, {read, {which, books}}}}`
    fn clause() -> (Derivation, SynObj, SynObj) {
        let d = Derivation::new(lexicon());
        let (d, w) = sel(d, "which");
        let (d, b) = sel(d, "books");
        let (d, wb) = em(d, &w, &b);
        let (d, r) = sel(d, "read");
        let (d, vp) = em(d, &r, &wb);
        let (d, y) = sel(d, "you");
        let (d, tp) = em(d, &y, &vp);
        let (d, did) = sel(d, "did");
        let (d, cp) = em(d, &did, &tp);
        (d, cp, wb)
    }

    #[test]
    fn merge_basics() {
        let d = Derivation::new(lexicon());
        let (d, r) = sel(d, "read");
        let (d, b) = sel(d, "books");
        let (d1, rb) = em(d.clone(), &r, &b);
        let (_, br) = em(d.clone(), &b, &r);
        assert_eq!(rb, br);
        assert_eq!(d1.workspace(), &[rb.clone()]);
        assert_eq!(d.workspace().len(), 2);
        assert_eq!(d.external_merge(&r, &r).unwrap_err(), SyntaxError::SelfMerge(r.id()));
        let (d2, v) = sel(d1, "v");
        let (d2, vp) = em(d2, &rb, &v);
        assert_eq!(vp.members().unwrap().iter().filter(|m| **m == rb).count(), 1);
        assert_eq!(
            d2.external_merge(&r, &vp).unwrap_err(),
            SyntaxError::TermViaExternalMerge(r.id())
        );
    }

    #[test]
    fn internal_merge_creates_second_occurrence() {
        let (d, cp, wb) = clause();
        let (d2, q) = d.internal_merge(&cp, &wb).unwrap();
        let [x, y] = q.members().unwrap();
        assert!((x == &wb && y == &cp) || (y == &wb && x == &cp));
        assert_eq!(d2.workspace(), &[q.clone()]);
        assert_eq!(q.leaf_positions(), 7);
        assert_eq!(d.internal_merge(&cp, &cp).unwrap_err(), SyntaxError::ImOfRoot(cp.id()));
        let (d3, stray) = sel(d, "man");
        assert_eq!(
            d3.internal_merge(&cp, &stray).unwrap_err(),
            SyntaxError::NotATerm { term: stray.id(), root: cp.id() }
        );
    }

    #[test]
    fn phase_impenetrability() {
        let (d, cp, wb) = clause();
        let closed = d.close_phase(&cp).unwrap();
        assert!(closed.is_phase_closed(&cp));
        assert_eq!(closed.close_phase(&cp).unwrap(), closed);
        assert!(matches!(
            closed.internal_merge(&cp, &wb).unwrap_err(),
            SyntaxError::Pic { .. }
        ));

        let (moved, q) = d.internal_merge(&cp, &wb).unwrap();
        let closed = moved.close_phase(&q).unwrap();
        let (edge, _) = closed.internal_merge(&q, &wb).unwrap();
        assert_eq!(edge.log().len(), closed.log().len() + 1);
        let read = q.objects().into_iter().find(|o| o.as_leaf().is_some_and(|i| i.id() == "read")).unwrap();
        assert!(matches!(closed.internal_merge(&q, &read).unwrap_err(), SyntaxError::Pic { .. }));
    }

    #[test]
    fn edge_expires_at_next_phase() {
        let (d, cp, wb) = clause();
        let (d, q) = d.internal_merge(&cp, &wb).unwrap();
        let d = d.close_phase(&q).unwrap();
        let (d, v) = sel(d, "v");
        let (d, outer) = em(d, &v, &q);
        let d = d.close_phase(&outer).unwrap();
        assert!(d.phases()[0].expired);
        assert!(matches!(d.internal_merge(&outer, &wb).unwrap_err(), SyntaxError::Pic { .. }));
    }

    #[test]
    fn close_requires_phase_head() {
        let d = Derivation::new(lexicon());
        let (d, r) = sel(d, "read");
        let (d, b) = sel(d, "books");
        let (d, rb) = em(d, &r, &b);
        assert_eq!(d.close_phase(&rb).unwrap_err(), SyntaxError::NotPhaseHeaded(rb.id()));
        assert_eq!(d.close_phase(&r).unwrap_err(), SyntaxError::NotPhaseHeaded(r.id()));
    }

    #[test]
    fn log_replays() {
        let (d, cp, wb) = clause();
        let (d, q) = d.internal_merge(&cp, &wb).unwrap();
        let d = d.close_phase(&q).unwrap();
        let again = Derivation::replay(lexicon(), d.log()).unwrap();
        assert_eq!(again, d);
        assert_eq!(again.workspace()[0].structure(), q.structure());
        let mut bad = d.log().to_vec();
        if let LogEntry::Em { result, .. } = &mut bad[2] {
            *result = ObjId(99);
        }
        assert!(matches!(Derivation::replay(lexicon(), &bad), Err(SyntaxError::Replay(_))));
    }
}
