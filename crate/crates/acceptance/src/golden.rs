//! The *which books did you read* derivation and its stored output.

use std::sync::Arc;

use syndyn_core::output::to_json_string;
use syndyn_core::syntax::{parse_script, run_script, Lexicon, ScriptOutcome};

pub const LEXICON: &str = include_str!("../../../data/which_books/lexicon.json");
pub const SCRIPT: &str = include_str!("../../../data/which_books/script.json");
pub const EXPECTED: &str = include_str!("../../../data/which_books/expected.json");

/// Runs the stored script and renders the outcome as the CLI does.
pub fn render() -> Result<(ScriptOutcome, String), String> {
    let lexicon = Lexicon::from_json(LEXICON).map_err(|e| e.to_string())?;
    let steps = parse_script(SCRIPT).map_err(|e| e.to_string())?;
    let outcome = run_script(Arc::new(lexicon), &steps);
    let text = to_json_string(&outcome).map_err(|e| e.to_string())?;
    Ok((outcome, text))
}
