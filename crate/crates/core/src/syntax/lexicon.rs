//! Lexical items and lexicon files.
//!
//! A lexicon file is either a bare array of entries or an object with
//! `phase_heads` and `items`:
//!
//! ```json
//! [{"id": "read", "phon": "read", "features": ["-N", "+V"], "phase_head": false}]
//! ```
//!
//! Features are signed binary features over `N V H C T Pr Ph` (`+X`, `-X` or
//! `−X`), category tags `cat:X`, and inert `agree:…` / `pair:…` annotations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinaryFeature {
    N,
    V,
    H,
    C,
    T,
    Pr,
    Ph,
}

impl FromStr for BinaryFeature {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "N" => Self::N,
            "V" => Self::V,
            "H" => Self::H,
            "C" => Self::C,
            "T" => Self::T,
            "Pr" => Self::Pr,
            "Ph" => Self::Ph,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for BinaryFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexItem {
    id: String,
    phon: String,
    features: BTreeMap<BinaryFeature, Sign>,
    categories: Vec<String>,
    phase_head: bool,
    annotations: Vec<String>,
}

/// One entry as written in a lexicon file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexEntry {
    pub id: String,
    #[serde(default)]
    pub phon: String,
    #[serde(default)]
    pub features: Vec<String>,
    #[serde(default)]
    pub phase_head: bool,
}

impl LexItem {
    pub fn from_entry(entry: &LexEntry) -> Result<Self, SyntaxError> {
        if entry.id.is_empty() {
            return Err(SyntaxError::Lexicon("empty item id".into()));
        }
        let bad = |msg: String| SyntaxError::Lexicon(format!("item '{}': {msg}", entry.id));
        let mut features = BTreeMap::new();
        let mut categories = Vec::new();
        let mut annotations = Vec::new();
        for raw in &entry.features {
            if let Some(cat) = raw.strip_prefix("cat:") {
                if cat.is_empty() {
                    return Err(bad("empty category tag".into()));
                }
                if !categories.iter().any(|c| c == cat) {
                    categories.push(cat.to_string());
                }
            } else if raw.starts_with("agree:") || raw.starts_with("pair:") {
                annotations.push(raw.clone());
            } else {
                let (sign, name) = if let Some(rest) = raw.strip_prefix('+') {
                    (Sign::Plus, rest)
                } else if let Some(rest) = raw.strip_prefix('-').or_else(|| raw.strip_prefix('\u{2212}')) {
                    (Sign::Minus, rest)
                } else {
                    return Err(bad(format!("unrecognized feature '{raw}'")));
                };
                let feature: BinaryFeature =
                    name.parse().map_err(|_| bad(format!("unknown binary feature '{name}'")))?;
                if let Some(prev) = features.insert(feature, sign) {
                    if prev != sign {
                        return Err(bad(format!("feature {feature} given with both signs")));
                    }
                }
            }
        }
        Ok(Self {
            id: entry.id.clone(),
            phon: entry.phon.clone(),
            features,
            categories,
            phase_head: entry.phase_head,
            annotations,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn phon(&self) -> &str {
        &self.phon
    }

    pub fn feature(&self, f: BinaryFeature) -> Option<Sign> {
        self.features.get(&f).copied()
    }

    pub fn annotations(&self) -> &[String] {
        &self.annotations
    }

    /// Category tags in lexicon order, followed by the N/V-derived category.
    pub fn categories(&self) -> Vec<String> {
        let mut out = self.categories.clone();
        if let Some(c) = self.nv_category() {
            if !out.iter().any(|x| x == c) {
                out.push(c.to_string());
            }
        }
        out
    }

    /// The category this item gives to a constituent it heads.
    pub fn category(&self) -> Option<String> {
        self.categories.first().cloned().or_else(|| self.nv_category().map(String::from))
    }

    fn nv_category(&self) -> Option<&'static str> {
        use Sign::*;
        match (self.feature(BinaryFeature::N), self.feature(BinaryFeature::V)) {
            (Some(Plus), Some(Minus)) => Some("N"),
            (Some(Minus), Some(Plus)) => Some("V"),
            (Some(Plus), Some(Plus)) => Some("A"),
            (Some(Minus), Some(Minus)) => Some("P"),
            _ => None,
        }
    }

    /// Items marked `-H` never project a label.
    pub fn is_projecting(&self) -> bool {
        self.feature(BinaryFeature::H) != Some(Sign::Minus)
    }

    pub fn is_marked_head(&self) -> bool {
        self.feature(BinaryFeature::H) == Some(Sign::Plus)
    }

    pub fn declared_phase_head(&self) -> bool {
        self.phase_head
    }

    pub fn to_entry(&self) -> LexEntry {
        let mut features: Vec<String> = self
            .features
            .iter()
            .map(|(f, s)| format!("{}{f}", if *s == Sign::Plus { "+" } else { "-" }))
            .collect();
        features.extend(self.categories.iter().map(|c| format!("cat:{c}")));
        features.extend(self.annotations.iter().cloned());
        LexEntry {
            id: self.id.clone(),
            phon: self.phon.clone(),
            features,
            phase_head: self.phase_head,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum LexiconFile {
    Items(Vec<LexEntry>),
    Configured {
        #[serde(default)]
        phase_heads: Option<Vec<String>>,
        items: Vec<LexEntry>,
    },
}

/// Categories treated as phase heads when no lexicon override is given.
pub const DEFAULT_PHASE_HEADS: [&str; 2] = ["C", "v"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    items: BTreeMap<String, Arc<LexItem>>,
    phase_heads: BTreeSet<String>,
}

impl Lexicon {
    pub fn new(items: impl IntoIterator<Item = LexItem>) -> Result<Self, SyntaxError> {
        let mut map = BTreeMap::new();
        for item in items {
            let id = item.id.clone();
            if map.insert(id.clone(), Arc::new(item)).is_some() {
                return Err(SyntaxError::Lexicon(format!("duplicate item id '{id}'")));
            }
        }
        Ok(Self {
            items: map,
            phase_heads: DEFAULT_PHASE_HEADS.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn from_entries(entries: &[LexEntry]) -> Result<Self, SyntaxError> {
        Self::new(entries.iter().map(LexItem::from_entry).collect::<Result<Vec<_>, _>>()?)
    }

    pub fn from_json(text: &str) -> Result<Self, SyntaxError> {
        let file: LexiconFile =
            serde_json::from_str(text).map_err(|e| SyntaxError::Lexicon(e.to_string()))?;
        match file {
            LexiconFile::Items(items) => Self::from_entries(&items),
            LexiconFile::Configured { phase_heads, items } => {
                let lex = Self::from_entries(&items)?;
                Ok(match phase_heads {
                    Some(p) => lex.with_phase_heads(p),
                    None => lex,
                })
            }
        }
    }

    pub fn with_phase_heads(mut self, cats: impl IntoIterator<Item = String>) -> Self {
        self.phase_heads = cats.into_iter().collect();
        self
    }

    pub fn get(&self, id: &str) -> Option<&Arc<LexItem>> {
        self.items.get(id)
    }

    pub fn items(&self) -> impl Iterator<Item = &Arc<LexItem>> {
        self.items.values()
    }

    pub fn phase_heads(&self) -> &BTreeSet<String> {
        &self.phase_heads
    }

    pub fn is_phase_head(&self, item: &LexItem) -> bool {
        item.phase_head || item.categories().iter().any(|c| self.phase_heads.contains(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, feats: &[&str]) -> LexEntry {
        LexEntry {
            id: id.into(),
            phon: id.into(),
            features: feats.iter().map(|s| s.to_string()).collect(),
            phase_head: false,
        }
    }

    #[test]
    fn parses_features() {
        let it = LexItem::from_entry(&entry("man", &["+N", "\u{2212}V", "+H"])).unwrap();
        assert_eq!(it.feature(BinaryFeature::N), Some(Sign::Plus));
        assert_eq!(it.feature(BinaryFeature::V), Some(Sign::Minus));
        assert_eq!(it.category().as_deref(), Some("N"));
        assert!(it.is_marked_head());
        let it = LexItem::from_entry(&entry("which", &["cat:D", "cat:Q", "+N"])).unwrap();
        assert_eq!(it.category().as_deref(), Some("D"));
        assert_eq!(it.categories(), vec!["D", "Q"]);
        let it = LexItem::from_entry(&entry("the", &["-H", "cat:D", "agree:phi"])).unwrap();
        assert!(!it.is_projecting());
        assert_eq!(it.annotations(), ["agree:phi"]);
    }

    #[test]
    fn rejects_bad_features() {
        assert!(LexItem::from_entry(&entry("x", &["+N", "-N"])).is_err());
        assert!(LexItem::from_entry(&entry("x", &["+Q"])).is_err());
        assert!(LexItem::from_entry(&entry("x", &["N"])).is_err());
        assert!(LexItem::from_entry(&entry("x", &["cat:"])).is_err());
        assert!(LexItem::from_entry(&entry("", &[])).is_err());
        assert!(LexItem::from_entry(&entry("x", &["+N", "+N"])).is_ok());
    }

    #[test]
    fn lexicon_files() {
        let lex = Lexicon::from_json(
            r#"[{"id":"did","phon":"did","features":["cat:C"]},
                {"id":"v","phon":"","features":["cat:v"]},
                {"id":"read","phon":"read","features":["-N","+V"],"phase_head":false},
                {"id":"that","phon":"that","features":["cat:Comp"],"phase_head":true}]"#,
        )
        .unwrap();
        assert!(lex.is_phase_head(lex.get("did").unwrap()));
        assert!(lex.is_phase_head(lex.get("v").unwrap()));
        assert!(lex.is_phase_head(lex.get("that").unwrap()));
        assert!(!lex.is_phase_head(lex.get("read").unwrap()));

        let lex = Lexicon::from_json(
            r#"{"phase_heads":["T"],"items":[{"id":"did","features":["cat:C"]},{"id":"t","features":["cat:T"]}]}"#,
        )
        .unwrap();
        assert!(!lex.is_phase_head(lex.get("did").unwrap()));
        assert!(lex.is_phase_head(lex.get("t").unwrap()));

        assert!(Lexicon::from_json(r#"[{"id":"a"},{"id":"a"}]"#).is_err());
        assert!(Lexicon::from_json(r#"[{"id":"a","bogus":1}]"#).is_err());
    }

    #[test]
    fn entry_round_trip() {
        let e = entry("which", &["+H", "-V", "cat:D", "cat:Q"]);
        let it = LexItem::from_entry(&e).unwrap();
        assert_eq!(LexItem::from_entry(&it.to_entry()).unwrap(), it);
    }
}
