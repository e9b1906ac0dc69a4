//! Minimal-search labeling.
//!
//! `{H, XP}` takes the category of the lexical head `H`. A `-H` item never
//! projects, so `{-H, XP}` takes `XP`'s label. Two heads are resolved by a
//! unique `+H`. `{XP, YP}` takes the first of the prominent categories the
//! two members share, keeps the whole intersection as its own prominent
//! categories, and fails when the intersection is empty. A lower copy is
//! invisible to search unless its sister is a lower copy too.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::object::{ObjId, SynObj};
use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "member", rename_all = "snake_case")]
pub enum LabelSource {
    /// A lexical member is the head.
    Head(ObjId),
    /// A phrasal member projects its own label.
    Projects(ObjId),
    /// Two phrases share a prominent category.
    Shared,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelInfo {
    pub label: String,
    /// Categories visible to a search that reaches this object from above.
    pub prominent: Vec<String>,
    pub source: LabelSource,
}

/// Occurrence structure of one root: for every object, its distinct mothers,
/// and the highest of them.
pub(crate) struct Analysis {
    pub root: SynObj,
    pub objects: Vec<SynObj>,
    pub index: HashMap<ObjId, usize>,
    pub mothers: Vec<Vec<usize>>,
    pub highest: Vec<Option<usize>>,
    labels: HashMap<ObjId, Result<LabelInfo, SyntaxError>>,
}

impl Analysis {
    pub fn new(root: &SynObj) -> Self {
        let objects = root.objects();
        let index: HashMap<ObjId, usize> =
            objects.iter().enumerate().map(|(i, o)| (o.id(), i)).collect();
        let mut mothers = vec![Vec::new(); objects.len()];
        for (p, o) in objects.iter().enumerate() {
            for m in o.members().into_iter().flatten() {
                mothers[index[&m.id()]].push(p);
            }
        }
        let mut depth = vec![usize::MAX; objects.len()];
        depth[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            for m in objects[p].members().into_iter().flatten() {
                let c = index[&m.id()];
                if depth[c] == usize::MAX {
                    depth[c] = depth[p] + 1;
                    queue.push_back(c);
                }
            }
        }
        // Ties go to the most recently built mother.
        let highest = mothers
            .iter()
            .map(|ms| ms.iter().copied().min_by_key(|&p| (depth[p], std::cmp::Reverse(objects[p].id()))))
            .collect();
        Self { root: root.clone(), objects, index, mothers, highest, labels: HashMap::new() }
    }

    /// Whether `child` is searched from `parent`: only through its highest occurrence.
    pub fn visible(&self, parent: ObjId, child: ObjId) -> bool {
        self.highest[self.index[&child]] == Some(self.index[&parent])
    }

    /// Whether `child` has moved, and `parent` holds its highest occurrence.
    pub fn moved_here(&self, parent: ObjId, child: ObjId) -> bool {
        let c = self.index[&child];
        self.mothers[c].len() > 1 && self.visible(parent, child)
    }

    pub fn label(&mut self, obj: &SynObj) -> Result<LabelInfo, SyntaxError> {
        if let Some(r) = self.labels.get(&obj.id()) {
            return r.clone();
        }
        let r = self.compute(obj);
        self.labels.insert(obj.id(), r.clone());
        r
    }

    fn compute(&mut self, obj: &SynObj) -> Result<LabelInfo, SyntaxError> {
        let fail = |reason: String| SyntaxError::Unlabelable { object: obj.id(), reason };
        let Some([a, b]) = obj.members() else {
            let item = obj.as_leaf().expect("leaf");
            return head_info(obj, item.category(), item.categories())
                .ok_or_else(|| fail(format!("'{}' has no category", item.id())));
        };
        let visible: Vec<&SynObj> =
            [a, b].into_iter().filter(|m| self.visible(obj.id(), m.id())).collect();
        if let [only] = visible[..] {
            return self.through(obj, only);
        }
        // When both members have moved away, search sees both lower copies.
        let projecting = |o: &SynObj| o.as_leaf().is_some_and(|i| i.is_projecting());
        let marked = |o: &SynObj| o.as_leaf().is_some_and(|i| i.is_marked_head());
        match (projecting(a), projecting(b)) {
            (true, false) => return self.through(obj, a),
            (false, true) => return self.through(obj, b),
            (true, true) => match (marked(a), marked(b)) {
                (true, false) => return self.through(obj, a),
                (false, true) => return self.through(obj, b),
                _ => {}
            },
            (false, false) => match (a.is_leaf(), b.is_leaf()) {
                (true, false) => return self.through(obj, b),
                (false, true) => return self.through(obj, a),
                _ => {}
            },
        }
        let pa = self.label(a)?.prominent;
        let pb = self.label(b)?.prominent;
        let shared: Vec<String> = pa.iter().filter(|c| pb.contains(c)).cloned().collect();
        match shared.first() {
            Some(first) => Ok(LabelInfo {
                label: first.clone(),
                prominent: shared.clone(),
                source: LabelSource::Shared,
            }),
            None => Err(fail(format!(
                "no head and no shared feature between {} {pa:?} and {} {pb:?}",
                a.id(),
                b.id()
            ))),
        }
    }

    /// The label `obj` inherits from member `m`.
    fn through(&mut self, obj: &SynObj, m: &SynObj) -> Result<LabelInfo, SyntaxError> {
        match m.as_leaf() {
            Some(item) => head_info(m, item.category(), item.categories()).ok_or_else(|| {
                SyntaxError::Unlabelable {
                    object: obj.id(),
                    reason: format!("head '{}' has no category", item.id()),
                }
            }),
            None => {
                let inner = self.label(m)?;
                Ok(LabelInfo { source: LabelSource::Projects(m.id()), ..inner })
            }
        }
    }
}

fn head_info(head: &SynObj, category: Option<String>, prominent: Vec<String>) -> Option<LabelInfo> {
    Some(LabelInfo { label: category?, prominent, source: LabelSource::Head(head.id()) })
}

/// Label of a set object, searching from `so` as the root. Leaves label as
/// their own category.
pub fn label(so: &SynObj) -> Result<String, SyntaxError> {
    Analysis::new(so).label(so).map(|i| i.label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::derivation::Derivation;
    use crate::syntax::lexicon::Lexicon;
    use std::sync::Arc;

    fn lex() -> Arc<Lexicon> {
        Arc::new(
            Lexicon::from_json(
                r#"[
                {"id":"which","phon":"which","features":["+H","cat:D","cat:Q"]},
                {"id":"books","phon":"books","features":["+N","-V"]},
                {"id":"read","phon":"read","features":["-N","+V"]},
                {"id":"you","phon":"you","features":["-H","cat:D"]},
                {"id":"did","phon":"did","features":["cat:C","cat:Q"]},
                {"id":"the","phon":"the","features":["-H","cat:D"]},
                {"id":"smart","phon":"smart","features":["-H","+N","+V"]},
                {"id":"man","phon":"man","features":["+N","-V"]},
                {"id":"idea","phon":"idea","features":["+N","-V"]},
                {"id":"ran","phon":"ran","features":["-N","+V"]},
                {"id":"bare","phon":"bare","features":[]}
            ]"#,
            )
            .unwrap(),
        )
    }

    fn build(d: Derivation, a: &str, b: &SynObj) -> (Derivation, SynObj) {
        let (d, x) = d.select(a).unwrap();
        d.external_merge(&x, b).unwrap()
    }

    #[test]
    fn head_gives_the_name() {
        let d = Derivation::new(lex());
        let (d, w) = d.select("which").unwrap();
        let (d, wb) = build(d, "books", &w);
        assert_eq!(label(&wb).unwrap(), "D");
        let (_, vp) = build(d, "read", &wb);
        assert_eq!(label(&vp).unwrap(), "V");

        let d = Derivation::new(lex());
        let (d, man) = d.select("man").unwrap();
        let (d, sm) = build(d, "smart", &man);
        let (_, np) = build(d, "the", &sm);
        assert_eq!(label(&np).unwrap(), "N");
    }

    #[test]
    fn phrase_pairs() {
        let d = Derivation::new(lex());
        let (d, w) = d.select("which").unwrap();
        let (d, wb) = build(d, "books", &w);
        let (d, r) = d.select("read").unwrap();
        let (d, y) = d.select("you").unwrap();
        let (d, vp) = d.external_merge(&r, &y).unwrap();
        let (d, dp) = build(d, "did", &vp);
        let (_, q) = d.external_merge(&wb, &dp).unwrap();
        assert_eq!(label(&q).unwrap(), "Q");

        let d = Derivation::new(lex());
        let (d, m) = d.select("man").unwrap();
        let (d, np) = build(d, "the", &m);
        let (d, r) = d.select("ran").unwrap();
        let (d, vp) = build(d, "the", &r);
        let (_, bad) = d.external_merge(&np, &vp).unwrap();
        assert!(matches!(label(&bad), Err(SyntaxError::Unlabelable { .. })));
    }

    #[test]
    fn lower_copy_is_invisible() {
        let d = Derivation::new(lex());
        let (d, w) = d.select("which").unwrap();
        let (d, wb) = build(d, "books", &w);
        let (d, vp) = build(d, "read", &wb);
        let (d, tp) = build(d, "you", &vp);
        let (d, cp) = build(d, "did", &tp);
        let (_, q) = d.internal_merge(&cp, &wb).unwrap();
        let mut an = Analysis::new(&q);
        assert!(!an.visible(vp.id(), wb.id()));
        assert!(an.visible(q.id(), wb.id()));
        assert_eq!(an.label(&vp).unwrap().source, LabelSource::Head(vp.members().unwrap().iter().find(|m| m.is_leaf()).unwrap().id()));
        assert_eq!(an.label(&tp).unwrap().label, "V");
        assert_eq!(an.label(&q).unwrap().label, "Q");
    }

    #[test]
    fn categoryless_head_fails() {
        let d = Derivation::new(lex());
        let (d, m) = d.select("man").unwrap();
        let (_, x) = build(d, "bare", &m);
        assert!(matches!(label(&x), Err(SyntaxError::Unlabelable { .. })));
    }
}
