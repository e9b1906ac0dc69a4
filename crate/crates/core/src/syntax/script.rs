//! Derivation scripts.
//!
//! A script is a JSON array of steps:
//!
//! ```json
//! [{"op": "em", "args": ["which", "books"], "as": "wb"},
//!  {"op": "im", "args": ["@cp", "@wb"], "as": "q"},
//!  {"op": "close", "args": ["@q"]},
//!  {"op": "transfer", "args": ["@q"], "policy": "highest"}]
//! ```
//!
//! `@name` refers to an object bound with `as`. In `em` a bare string selects
//! a fresh copy of that lexical item; in `im` it names the unique leaf of that
//! item inside the root. `close` and `transfer` default to the only root.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::derivation::{Derivation, LogEntry};
use super::lexicon::Lexicon;
use super::object::SynObj;
use super::transfer::{LfNode, PronunciationPolicy};
use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepOp {
    Em,
    Im,
    Close,
    Transfer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub op: StepOp,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(rename = "as", default, skip_serializing_if = "Option::is_none")]
    pub bind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PronunciationPolicy>,
}

pub fn parse_script(text: &str) -> Result<Vec<Step>, SyntaxError> {
    serde_json::from_str(text).map_err(|e| SyntaxError::Script(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScriptErrorReport {
    pub step: usize,
    pub op: StepOp,
    pub kind: &'static str,
    pub crash: bool,
    pub message: String,
}

/// Result of running a script: the last transfer's LF and PF, the log, and
/// the error that stopped the run, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScriptOutcome {
    pub lf: Option<LfNode>,
    pub pf: Option<Vec<String>>,
    pub log: Vec<LogEntry>,
    pub errors: Vec<ScriptErrorReport>,
}

impl ScriptOutcome {
    pub fn converged(&self) -> bool {
        self.errors.is_empty() && self.pf.is_some()
    }

    pub fn crashed(&self) -> bool {
        self.errors.iter().any(|e| e.crash)
    }
}

struct Runner {
    d: Derivation,
    names: HashMap<String, SynObj>,
}

impl Runner {
    fn named(&self, arg: &str) -> Result<SynObj, SyntaxError> {
        let name = arg.strip_prefix('@').expect("caller checked prefix");
        let obj = self
            .names
            .get(name)
            .ok_or_else(|| SyntaxError::Script(format!("unbound name '@{name}'")))?;
        Ok(self.d.find(obj.id()).unwrap_or_else(|| obj.clone()))
    }

    fn operand(&mut self, arg: &str) -> Result<SynObj, SyntaxError> {
        if arg.starts_with('@') {
            return self.named(arg);
        }
        let (d, o) = self.d.select(arg)?;
        self.d = d;
        Ok(o)
    }

    fn term(&self, root: &SynObj, arg: &str) -> Result<SynObj, SyntaxError> {
        if arg.starts_with('@') {
            return self.named(arg);
        }
        let hits: Vec<SynObj> = root
            .objects()
            .into_iter()
            .filter(|o| o.as_leaf().is_some_and(|i| i.id() == arg))
            .collect();
        match &hits[..] {
            [one] => Ok(one.clone()),
            [] => Err(SyntaxError::Script(format!("no '{arg}' inside {}", root.id()))),
            _ => Err(SyntaxError::Script(format!("'{arg}' is ambiguous inside {}", root.id()))),
        }
    }

    fn target(&self, args: &[String]) -> Result<SynObj, SyntaxError> {
        match args {
            [one] => self.named_or_err(one),
            [] => match self.d.workspace() {
                [only] => Ok(only.clone()),
                _ => Err(SyntaxError::Script("no target and the workspace has several roots".into())),
            },
            _ => Err(SyntaxError::Script("expected at most one argument".into())),
        }
    }

    fn named_or_err(&self, arg: &str) -> Result<SynObj, SyntaxError> {
        if arg.starts_with('@') {
            self.named(arg)
        } else {
            Err(SyntaxError::Script(format!("expected @name, got '{arg}'")))
        }
    }
}

fn two(args: &[String]) -> Result<(&str, &str), SyntaxError> {
    match args {
        [a, b] => Ok((a, b)),
        _ => Err(SyntaxError::Script(format!("expected two arguments, got {}", args.len()))),
    }
}

/// Runs the steps in order and stops at the first error.
pub fn run_script(lexicon: Arc<Lexicon>, steps: &[Step]) -> ScriptOutcome {
    let mut r = Runner { d: Derivation::new(lexicon), names: HashMap::new() };
    let mut outcome = ScriptOutcome { lf: None, pf: None, log: Vec::new(), errors: Vec::new() };
    for (i, step) in steps.iter().enumerate() {
        let result = (|| -> Result<Option<SynObj>, SyntaxError> {
            match step.op {
                StepOp::Em => {
                    let (a, b) = two(&step.args)?;
                    let a = r.operand(a)?;
                    let b = r.operand(b)?;
                    let (d, o) = r.d.external_merge(&a, &b)?;
                    r.d = d;
                    Ok(Some(o))
                }
                StepOp::Im => {
                    let (root, term) = two(&step.args)?;
                    let root = r.named_or_err(root)?;
                    let term = r.term(&root, term)?;
                    let (d, o) = r.d.internal_merge(&root, &term)?;
                    r.d = d;
                    Ok(Some(o))
                }
                StepOp::Close => {
                    let t = r.target(&step.args)?;
                    r.d = r.d.close_phase(&t)?;
                    Ok(Some(t))
                }
                StepOp::Transfer => {
                    let t = r.target(&step.args)?;
                    let out = r.d.transfer(&t, step.policy.unwrap_or_default())?;
                    outcome.lf = Some(out.lf);
                    outcome.pf = Some(out.pf);
                    Ok(Some(t))
                }
            }
        })();
        match result {
            Ok(obj) => {
                if let (Some(name), Some(obj)) = (&step.bind, obj) {
                    r.names.insert(name.clone(), obj);
                }
            }
            Err(e) => {
                outcome.errors.push(ScriptErrorReport {
                    step: i,
                    op: step.op,
                    kind: e.kind(),
                    crash: e.is_crash(),
                    message: e.to_string(),
                });
                break;
            }
        }
    }
    outcome.log = r.d.log().to_vec();
    outcome
}
