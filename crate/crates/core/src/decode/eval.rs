use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{back_transliterate, DecodeError, DecodeOptions, ModelSet};
use crate::models::{glyph_sequence, normalize_katakana, ConfusionTable, ModelError, SEPARATOR};

/// One test item: observed katakana and the expected English.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalEntry {
    pub katakana: String,
    pub reference: String,
}

/// Parses `katakana<TAB>english reference` lines.
pub fn parse_eval_set(text: &str) -> Result<Vec<EvalEntry>, ModelError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 || fields.iter().any(|f| f.trim().is_empty()) {
            return Err(ModelError::parse("evaluation set", i + 1, "expected `katakana<TAB>english`"));
        }
        out.push(EvalEntry {
            katakana: fields[0].trim().to_string(),
            reference: fields[1].trim().to_string(),
        });
    }
    Ok(out)
}

/// Seeded glyph-level recognition noise.
#[derive(Clone, Debug, PartialEq)]
pub struct Noise {
    /// Chance that a glyph with known look-alikes is misread.
    pub rate: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalOptions {
    pub decode: DecodeOptions,
    /// Remove every dot separator before decoding.
    pub strip_separators: bool,
    pub noise: Option<Noise>,
}

/// Verdict for one test item.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalItem {
    /// The katakana actually decoded, after separator removal and noise.
    pub input: String,
    pub reference: String,
    /// Best candidate, if any.
    pub top: Option<String>,
    pub top1_correct: bool,
    pub topk_correct: bool,
    /// Decoding error for this item, if any.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub k: usize,
    pub items: Vec<EvalItem>,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.items.len()
    }

    pub fn top1_correct(&self) -> usize {
        self.items.iter().filter(|i| i.top1_correct).count()
    }

    pub fn topk_correct(&self) -> usize {
        self.items.iter().filter(|i| i.topk_correct).count()
    }

    pub fn top1_accuracy(&self) -> f64 {
        self.top1_correct() as f64 / self.total() as f64
    }

    pub fn topk_accuracy(&self) -> f64 {
        self.topk_correct() as f64 / self.total() as f64
    }
}

fn canonical(s: &str) -> String {
    s.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

/// Replaces each glyph that has look-alikes in `conf` with probability
/// `rate`, picking the misreading in proportion to its table weight.
pub fn corrupt(text: &str, conf: &ConfusionTable, rate: f64, rng: &mut impl Rng) -> String {
    let mut out = String::new();
    for g in glyph_sequence(text) {
        let alternatives: Vec<&(String, f64)> =
            conf.row(&g).map(|r| r.iter().filter(|(h, _)| *h != g).collect()).unwrap_or_default();
        if alternatives.is_empty() || !rng.random_bool(rate.clamp(0.0, 1.0)) {
            out.push_str(&g);
            continue;
        }
        let mass: f64 = alternatives.iter().map(|(_, p)| p).sum();
        let mut x = rng.random::<f64>() * mass;
        let mut pick = &alternatives[alternatives.len() - 1].0;
        for (h, p) in &alternatives {
            if x < *p {
                pick = h;
                break;
            }
            x -= p;
        }
        out.push_str(pick);
    }
    out
}

/// Decodes every entry and compares against the references, ignoring case
/// and spacing differences.
pub fn evaluate(
    models: &ModelSet,
    conf: &ConfusionTable,
    set: &[EvalEntry],
    opts: &EvalOptions,
) -> Result<EvalReport, DecodeError> {
    if set.is_empty() {
        return Err(DecodeError::EmptyEvalSet);
    }
    let mut rng = opts.noise.as_ref().map(|n| ChaCha8Rng::seed_from_u64(n.seed));
    let mut items = Vec::with_capacity(set.len());
    for entry in set {
        let mut input = normalize_katakana(&entry.katakana);
        if opts.strip_separators {
            input = input.replace(SEPARATOR, "");
        }
        if let (Some(noise), Some(rng)) = (&opts.noise, rng.as_mut()) {
            input = corrupt(&input, conf, noise.rate, rng);
        }
        let reference = canonical(&entry.reference);
        let item = match back_transliterate(&input, models, &opts.decode) {
            Ok(cands) => {
                let texts: Vec<String> = cands.iter().map(|c| canonical(&c.text())).collect();
                EvalItem {
                    top1_correct: texts.first() == Some(&reference),
                    topk_correct: texts.contains(&reference),
                    top: texts.into_iter().next(),
                    input,
                    reference,
                    error: None,
                }
            }
            Err(e) => EvalItem {
                input,
                reference,
                top: None,
                top1_correct: false,
                topk_correct: false,
                error: Some(e.to_string()),
            },
        };
        items.push(item);
    }
    Ok(EvalReport {
        k: opts.decode.k,
        items,
    })
}
