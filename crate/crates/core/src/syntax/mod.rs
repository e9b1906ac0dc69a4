//! Narrow syntax: Merge over unordered binary sets, copies, phases, labeling
//! at transfer and externalization.
//!
//! A [`Derivation`] is a persistent value. Every operation returns a new
//! derivation and leaves the old one usable; syntactic objects are shared
//! immutably between them, so no operation can tamper with an existing object.

mod derivation;
mod label;
mod lexicon;
mod object;
mod script;
mod transfer;

pub use derivation::{Accessibility, Derivation, LogEntry, PhaseRecord};
pub use label::{label, LabelInfo, LabelSource};
pub use lexicon::{BinaryFeature, LexEntry, LexItem, Lexicon, Sign, DEFAULT_PHASE_HEADS};
pub use object::{Kind, ObjId, SynObj};
pub use script::{parse_script, run_script, ScriptErrorReport, ScriptOutcome, Step, StepOp};
pub use transfer::{LfNode, OccurrenceSummary, PronunciationPolicy, TransferOutput};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("lexicon: {0}")]
    Lexicon(String),
    #[error("no lexical item '{0}'")]
    UnknownLexItem(String),
    #[error("object {0} is not in the workspace")]
    UnknownObject(ObjId),
    #[error("cannot merge {0} with itself")]
    SelfMerge(ObjId),
    #[error("{0} is a term of a workspace root; use internal merge")]
    TermViaExternalMerge(ObjId),
    #[error("{0} is not a workspace root")]
    NotARoot(ObjId),
    #[error("internal merge of root {0} with itself")]
    ImOfRoot(ObjId),
    #[error("{term} is not a term of {root}")]
    NotATerm { term: ObjId, root: ObjId },
    #[error("{term} is inside closed phase {phase} and not at its edge")]
    Pic { term: ObjId, phase: ObjId },
    #[error("{0} is not headed by a phase head")]
    NotPhaseHeaded(ObjId),
    #[error("cannot label {object}: {reason}")]
    Unlabelable { object: ObjId, reason: String },
    #[error("replay diverged: {0}")]
    Replay(String),
    #[error("script: {0}")]
    Script(String),
}

impl SyntaxError {
    /// Labeling and impenetrability failures make a derivation crash; the
    /// rest are malformed requests.
    pub fn is_crash(&self) -> bool {
        matches!(self, Self::Pic { .. } | Self::Unlabelable { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Lexicon(_) => "lexicon",
            Self::UnknownLexItem(_) => "unknown_lex_item",
            Self::UnknownObject(_) => "unknown_object",
            Self::SelfMerge(_) => "self_merge",
            Self::TermViaExternalMerge(_) => "term_via_external_merge",
            Self::NotARoot(_) => "not_a_root",
            Self::ImOfRoot(_) => "im_of_root",
            Self::NotATerm { .. } => "not_a_term",
            Self::Pic { .. } => "pic",
            Self::NotPhaseHeaded(_) => "not_phase_headed",
            Self::Unlabelable { .. } => "unlabelable",
            Self::Replay(_) => "replay",
            Self::Script(_) => "script",
        }
    }
}
