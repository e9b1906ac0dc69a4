//! Randomized derivations checked against the Merge, copy and phase laws.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syndyn_core::syntax::{
    Derivation, Lexicon, LogEntry, ObjId, PronunciationPolicy, SynObj, SyntaxError,
};

const LEXICON: &str = r#"[
    {"id":"c","phon":"c","features":["cat:C","cat:K"]},
    {"id":"v","phon":"","features":["cat:v","cat:K"]},
    {"id":"n","phon":"n","features":["+N","-V","cat:K"]},
    {"id":"d","phon":"d","features":["-H","cat:D","cat:K"]},
    {"id":"w","phon":"w","features":["+H","cat:Q","cat:K"]},
    {"id":"t","phon":"t","features":["cat:T","cat:K"]},
    {"id":"e","phon":"","features":["+N","+V","cat:K"]}
]"#;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Stats {
    pub derivations: usize,
    pub external_merges: usize,
    pub internal_merges: usize,
    pub closes: usize,
    pub pic_rejections: usize,
    pub transfers: usize,
    pub violations: Vec<String>,
}

fn digest_hash(o: &SynObj) -> u64 {
    let mut h = DefaultHasher::new();
    o.hash(&mut h);
    h.finish()
}

/// Whether some root-to-`term` path avoids every sealed edge, by explicit
/// enumeration of tree positions. `None` when `term` does not occur.
fn open_path(d: &Derivation, root: &SynObj, term: ObjId) -> Option<bool> {
    fn walk(d: &Derivation, o: &SynObj, term: ObjId, open: bool, found: &mut Option<bool>) {
        if o.id() == term {
            *found = Some(found.unwrap_or(false) || open);
            return;
        }
        for m in o.members().into_iter().flatten() {
            let sealed = d.phases().iter().any(|p| {
                (p.spine == o.id() && p.complement == m.id()) || (p.expired && p.phase == o.id())
            });
            walk(d, m, term, open && !sealed, found);
        }
    }
    let mut found = None;
    walk(d, root, term, true, &mut found);
    found
}

fn one(rng: &mut ChaCha8Rng, lexicon: &Arc<Lexicon>, stats: &mut Stats) {
    let ids: Vec<String> = lexicon.items().map(|i| i.id().to_string()).collect();
    let mut d = Derivation::new(lexicon.clone());
    let fail = |msg: String, stats: &mut Stats| stats.violations.push(msg);
    let steps = rng.gen_range(4..24);
    for _ in 0..steps {
        let n = d.workspace().len();
        match rng.gen_range(0..4) {
            0 => d = d.select(&ids[rng.gen_range(0..ids.len())]).expect("known item").0,
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let (a, b) = (d.workspace()[i].clone(), d.workspace()[j].clone());
                let before = (a.structure(), b.structure());
                let (next, ab) = d.external_merge(&a, &b).expect("distinct roots merge");
                let (_, ba) = d.external_merge(&b, &a).expect("distinct roots merge");
                if ab != ba || ab.structure() != ba.structure() || digest_hash(&ab) != digest_hash(&ba) {
                    fail(format!("set law: {ab:?} vs {ba:?}"), stats);
                }
                let after = (next.find(a.id()), next.find(b.id()));
                if after.0.map(|o| o.structure()) != Some(before.0.clone())
                    || after.1.map(|o| o.structure()) != Some(before.1.clone())
                {
                    fail(format!("NTC after EM of {} and {}", a.id(), b.id()), stats);
                }
                stats.external_merges += 1;
                d = next;
            }
            2 if n >= 1 => {
                let root = d.workspace()[rng.gen_range(0..n)].clone();
                let terms = root.objects();
                if terms.len() < 2 {
                    continue;
                }
                let term = terms[rng.gen_range(1..terms.len())].clone();
                let before = (root.structure(), term.structure());
                let open = open_path(&d, &root, term.id());
                match d.internal_merge(&root, &term) {
                    Ok((next, merged)) => {
                        if open != Some(true) {
                            fail(format!("PIC: IM reached sealed {}", term.id()), stats);
                        }
                        let kept: Vec<String> =
                            merged.members().into_iter().flatten().map(|m| m.structure()).collect();
                        if !kept.contains(&before.0) || !kept.contains(&before.1) {
                            fail(format!("NTC after IM of {}", term.id()), stats);
                        }
                        stats.internal_merges += 1;
                        d = next;
                    }
                    Err(SyntaxError::Pic { .. }) => {
                        if open != Some(false) {
                            fail(format!("PIC: open term {} rejected", term.id()), stats);
                        }
                        stats.pic_rejections += 1;
                    }
                    Err(e) => fail(format!("unexpected IM error: {e}"), stats),
                }
            }
            3 if n >= 1 => {
                let root = &d.workspace()[rng.gen_range(0..n)];
                let objs = root.objects();
                let target = objs[rng.gen_range(0..objs.len())].clone();
                match d.close_phase(&target) {
                    Ok(next) => {
                        if next.close_phase(&target).ok().as_ref() != Some(&next) {
                            fail(format!("closing {} twice changed the derivation", target.id()), stats);
                        }
                        stats.closes += 1;
                        d = next;
                    }
                    Err(SyntaxError::NotPhaseHeaded(_)) => {}
                    Err(e) => fail(format!("unexpected close error: {e}"), stats),
                }
            }
            _ => {}
        }
    }

    match Derivation::replay(lexicon.clone(), d.log()) {
        Ok(r) if r == d => {}
        Ok(_) => fail("replay produced a different derivation".into(), stats),
        Err(e) => fail(format!("replay failed: {e}"), stats),
    }

    let mut mothers: HashMap<ObjId, usize> = HashMap::new();
    let mut moved: HashMap<ObjId, usize> = HashMap::new();
    for e in d.log() {
        match *e {
            LogEntry::Em { a, b, .. } => {
                *mothers.entry(a).or_default() += 1;
                *mothers.entry(b).or_default() += 1;
            }
            LogEntry::Im { root, term, .. } => {
                *mothers.entry(root).or_default() += 1;
                *mothers.entry(term).or_default() += 1;
                *moved.entry(term).or_default() += 1;
            }
            _ => {}
        }
    }
    for root in d.workspace() {
        let out = match d.transfer(root, PronunciationPolicy::Highest) {
            Ok(out) => out,
            Err(e) => {
                fail(format!("transfer of {} failed: {e}", root.id()), stats);
                continue;
            }
        };
        stats.transfers += 1;
        for s in &out.occurrences {
            let expected = if s.class == root.id() { 1 } else { mothers.get(&s.class).copied().unwrap_or(0) };
            if s.occurrences != expected {
                fail(format!("copy law: {} has {} occurrences, expected {expected}", s.class, s.occurrences), stats);
            }
            if let Some(&k) = moved.get(&s.class) {
                if s.occurrences != k + 1 {
                    fail(format!("copy law: {} moved {k} times, {} occurrences", s.class, s.occurrences), stats);
                }
            }
            if s.pronounced != 1 || s.positions < s.pronounced {
                fail(format!("copy law: {} pronounced {} times", s.class, s.pronounced), stats);
            }
        }
        let audible = root.objects().iter().filter(|o| o.as_leaf().is_some_and(|i| !i.phon().is_empty())).count();
        if out.pf.len() != audible {
            fail(format!("pf has {} tokens for {audible} audible items", out.pf.len()), stats);
        }
    }
    stats.derivations += 1;
}

/// Runs `count` random derivations from `seed`.
pub fn check_random_derivations(seed: u64, count: usize) -> Stats {
    let lexicon = Arc::new(Lexicon::from_json(LEXICON).expect("built-in lexicon parses"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = Stats::default();
    for _ in 0..count {
        one(&mut rng, &lexicon, &mut stats);
    }
    stats
}
