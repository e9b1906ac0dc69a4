use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::lexicon::LexItem;

/// Identity of a syntactic object. All occurrences of a copy share one id,
/// so the id doubles as the occurrence class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(pub u64);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug)]
pub enum Kind {
    Leaf(Arc<LexItem>),
    /// Members are stored in content-hash order. The order carries no meaning.
    Set([SynObj; 2]),
}

#[derive(Debug)]
struct Node {
    id: ObjId,
    digest: [u8; 32],
    kind: Kind,
}

/// An immutable syntactic object: a lexical leaf or an unordered pair.
///
/// Equality and hashing go through a content digest over the id and the
/// members' digests taken as a sorted pair, so `{a, b}` and `{b, a}` coincide.
#[derive(Clone)]
pub struct SynObj(Arc<Node>);

impl SynObj {
    pub(crate) fn leaf(id: ObjId, item: Arc<LexItem>) -> Self {
        let mut h = Sha256::new();
        h.update(b"L");
        h.update(id.0.to_le_bytes());
        h.update(item.id().as_bytes());
        Self(Arc::new(Node { id, digest: h.finalize().into(), kind: Kind::Leaf(item) }))
    }

    pub(crate) fn set(id: ObjId, a: SynObj, b: SynObj) -> Self {
        let (a, b) = if a.digest() <= b.digest() { (a, b) } else { (b, a) };
        let mut h = Sha256::new();
        h.update(b"S");
        h.update(id.0.to_le_bytes());
        h.update(a.digest());
        h.update(b.digest());
        Self(Arc::new(Node { id, digest: h.finalize().into(), kind: Kind::Set([a, b]) }))
    }

    pub fn id(&self) -> ObjId {
        self.0.id
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.0.digest
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn as_leaf(&self) -> Option<&Arc<LexItem>> {
        match &self.0.kind {
            Kind::Leaf(item) => Some(item),
            Kind::Set(_) => None,
        }
    }

    pub fn members(&self) -> Option<&[SynObj; 2]> {
        match &self.0.kind {
            Kind::Leaf(_) => None,
            Kind::Set(m) => Some(m),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.as_leaf().is_some()
    }

    /// This object or a term of it with the given id.
    pub fn find(&self, id: ObjId) -> Option<SynObj> {
        let mut seen = HashSet::new();
        let mut stack = vec![self];
        while let Some(o) = stack.pop() {
            if o.id() == id {
                return Some(o.clone());
            }
            if !seen.insert(o.id()) {
                continue;
            }
            if let Some(m) = o.members() {
                stack.extend(m.iter());
            }
        }
        None
    }

    pub fn contains(&self, id: ObjId) -> bool {
        self.find(id).is_some()
    }

    /// Distinct objects reachable from here, each once, in preorder.
    pub fn objects(&self) -> Vec<SynObj> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(o) = stack.pop() {
            if !seen.insert(o.id()) {
                continue;
            }
            if let Some([a, b]) = o.members() {
                stack.push(b.clone());
                stack.push(a.clone());
            }
            out.push(o);
        }
        out
    }

    /// Number of leaf positions, counting every copy.
    pub fn leaf_positions(&self) -> u64 {
        match self.members() {
            None => 1,
            Some([a, b]) => a.leaf_positions() + b.leaf_positions(),
        }
    }

    /// Deep structural rendering, independent of sharing, e.g.
    /// `{#3 #1:read #2:books}`.
    pub fn structure(&self) -> String {
        let mut out = String::new();
        self.write_structure(&mut out);
        out
    }

    fn write_structure(&self, out: &mut String) {
        use std::fmt::Write;
        match self.kind() {
            Kind::Leaf(item) => {
                let _ = write!(out, "{}:{}", self.id(), item.id());
            }
            Kind::Set([a, b]) => {
                let (sa, sb) = (a.structure(), b.structure());
                let (x, y) = if sa <= sb { (sa, sb) } else { (sb, sa) };
                let _ = write!(out, "{{{} {x} {y}}}", self.id());
            }
        }
    }
}

impl PartialEq for SynObj {
    fn eq(&self, other: &Self) -> bool {
        self.digest() == other.digest()
    }
}

impl Eq for SynObj {}

impl Hash for SynObj {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.digest().hash(state);
    }
}

impl fmt::Debug for SynObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.structure())
    }
}
