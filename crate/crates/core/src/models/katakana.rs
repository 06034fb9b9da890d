//! Japanese sound sequences to katakana.
//!
//! The writer spells one sound unit at a time (a mora such as `k a`, a
//! palatalized mora such as `sh y u`, a geminate mora such as `kk a`, a
//! lone vowel, the moraic `n`, or a pause). A small amount of left context
//! decides what may come next:
//!
//! * after a vowel, repeating that vowel is spelled with the long-vowel
//!   alternatives (`ー` or the vowel glyph again);
//! * after a moraic `n` (ン) only a consonant-initial mora or a pause may
//!   follow, so `n a` is always ナ and never ンア;
//! * a pause may only follow a spoken sound, never start a phrase or
//!   repeat.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use unicode_normalization::UnicodeNormalization;

use super::inventory::{is_geminate, is_japanese_sound, is_japanese_vowel, JAPANESE_PAUSE};
use super::tsv::{probability, records};
use super::ModelError;
use crate::fsm::{Fst, StateId, SymbolTable, Transition, Weight, EPSILON};

/// The dot separator between words.
pub const SEPARATOR: &str = "・";

/// Slack allowed when a unit's alternatives are summed.
const MASS_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum LongVowelSpelling {
    Glyph(String),
    RepeatVowel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpellingUnit {
    pub sounds: Vec<String>,
    /// Glyph sequences with probabilities; an empty sequence writes nothing.
    pub spellings: Vec<(Vec<String>, f64)>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct KatakanaSpellingTable {
    units: Vec<SpellingUnit>,
    long_vowel: Vec<(LongVowelSpelling, f64)>,
}

fn glyphs_of(field: &str) -> Vec<String> {
    if field == "<eps>" {
        Vec::new()
    } else {
        field.chars().map(String::from).collect()
    }
}

impl KatakanaSpellingTable {
    /// Parses `sounds<TAB>glyphs<TAB>probability` lines. The special unit
    /// `<long>` gives the long-vowel spellings, where `<vowel>` repeats the
    /// vowel's own glyph; `<eps>` as glyphs writes nothing.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        const RES: &str = "spelling table";
        let mut table = KatakanaSpellingTable::default();
        let mut index: HashMap<Vec<String>, usize> = HashMap::new();
        for rec in records(RES, text, 3, 3) {
            let (line, f) = rec?;
            let p = probability(RES, line, f[2])?;
            if f[0] == "<long>" {
                let spelling = match f[1] {
                    "<vowel>" => LongVowelSpelling::RepeatVowel,
                    g if g.chars().count() == 1 => LongVowelSpelling::Glyph(g.to_string()),
                    g => {
                        return Err(ModelError::parse(
                            RES,
                            line,
                            format!("long-vowel spelling `{g}` must be one glyph or <vowel>"),
                        ))
                    }
                };
                table.long_vowel.push((spelling, p));
                continue;
            }
            let sounds: Vec<String> = f[0].split_whitespace().map(str::to_string).collect();
            if sounds.is_empty() {
                return Err(ModelError::parse(RES, line, "empty sound unit"));
            }
            if let Some(bad) = sounds.iter().find(|s| !is_japanese_sound(s)) {
                return Err(ModelError::parse(RES, line, format!("unknown sound `{bad}`")));
            }
            if f[1].contains("<") && f[1] != "<eps>" {
                return Err(ModelError::parse(RES, line, format!("bad glyphs `{}`", f[1])));
            }
            let i = *index.entry(sounds.clone()).or_insert_with(|| {
                table.units.push(SpellingUnit {
                    sounds,
                    spellings: Vec::new(),
                });
                table.units.len() - 1
            });
            table.units[i].spellings.push((glyphs_of(f[1]), p));
        }
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<(), ModelError> {
        for unit in &self.units {
            let mass: f64 = unit.spellings.iter().map(|(_, p)| p).sum();
            if (mass - 1.0).abs() > MASS_SLACK {
                return Err(ModelError::InvalidProbability {
                    context: format!("spellings of `{}`", unit.sounds.join(" ")),
                    value: mass,
                });
            }
        }
        if !self.long_vowel.is_empty() {
            let mass: f64 = self.long_vowel.iter().map(|(_, p)| p).sum();
            if (mass - 1.0).abs() > MASS_SLACK {
                return Err(ModelError::InvalidProbability {
                    context: "long-vowel spellings".to_string(),
                    value: mass,
                });
            }
        }
        Ok(())
    }

    pub fn units(&self) -> &[SpellingUnit] {
        &self.units
    }

    pub fn long_vowel(&self) -> &[(LongVowelSpelling, f64)] {
        &self.long_vowel
    }

    /// Inventory sounds that no unit mentions.
    pub fn missing_sounds(&self) -> Vec<&'static str> {
        let covered: BTreeSet<&str> = self
            .units
            .iter()
            .flat_map(|u| u.sounds.iter().map(String::as_str))
            .collect();
        super::inventory::japanese_sounds()
            .filter(|s| !covered.contains(s))
            .collect()
    }

    /// Every glyph the writer can produce, in first-use order.
    pub fn glyphs(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let all = self
            .units
            .iter()
            .flat_map(|u| u.spellings.iter().flat_map(|(g, _)| g.iter().cloned()))
            .chain(self.long_vowel.iter().filter_map(|(s, _)| match s {
                LongVowelSpelling::Glyph(g) => Some(g.clone()),
                LongVowelSpelling::RepeatVowel => None,
            }));
        for g in all {
            if seen.insert(g.clone()) {
                out.push(g);
            }
        }
        out
    }

    /// Glyph alphabet for the writer's output side, separator included.
    pub fn glyph_table(&self) -> SymbolTable {
        let mut t = SymbolTable::from_labels(self.glyphs()).expect("glyphs are valid labels");
        t.add(SEPARATOR).expect("separator is a valid label");
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Context {
    /// Phrase start or just after a pause.
    Boundary,
    AfterVowel(usize),
    AfterMoraicN,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum UnitKind {
    Pause,
    MoraicN,
    Vowel(usize),
    Palatal,
    Geminate,
    Consonant,
}

fn vowel_index(s: &str) -> Option<usize> {
    super::inventory::JAPANESE_VOWELS.iter().position(|v| *v == s)
}

fn classify(sounds: &[String]) -> UnitKind {
    match sounds {
        [p] if p == JAPANESE_PAUSE => UnitKind::Pause,
        [n] if n == "n" => UnitKind::MoraicN,
        [v] if is_japanese_vowel(v) => UnitKind::Vowel(vowel_index(v).expect("vowel")),
        [first, ..] if first == "y" => UnitKind::Palatal,
        [first, ..] if is_geminate(first) => UnitKind::Geminate,
        [first, ..] if is_japanese_vowel(first) => UnitKind::Vowel(vowel_index(first).expect("vowel")),
        _ => UnitKind::Consonant,
    }
}

fn allowed(ctx: Context, kind: UnitKind) -> bool {
    match ctx {
        Context::Boundary => kind != UnitKind::Pause,
        Context::AfterVowel(_) => true,
        Context::AfterMoraicN => matches!(kind, UnitKind::Consonant | UnitKind::Pause),
    }
}

fn destination(sounds: &[String], kind: UnitKind) -> Context {
    match kind {
        UnitKind::Pause => Context::Boundary,
        UnitKind::MoraicN => Context::AfterMoraicN,
        _ => match sounds.last().and_then(|s| vowel_index(s)) {
            Some(v) => Context::AfterVowel(v),
            None => Context::Boundary,
        },
    }
}

/// Builds the sound-to-katakana transducer from a spelling table.
///
/// Each spelling is realized as a chain that pairs sounds with glyphs
/// position by position, padding the shorter side with epsilon; chains
/// leaving the same context share prefixes, and the spelling's cost sits
/// on its last arc.
pub fn build_katakana_writer(
    spell: &KatakanaSpellingTable,
    sounds: &Arc<SymbolTable>,
    glyphs: &Arc<SymbolTable>,
) -> Result<Fst, ModelError> {
    let mut fst = Fst::new(sounds.clone(), glyphs.clone());
    let mut contexts: Vec<(Context, StateId)> = vec![(Context::Boundary, fst.add_state())];
    for v in 0..5 {
        contexts.push((Context::AfterVowel(v), fst.add_state()));
    }
    contexts.push((Context::AfterMoraicN, fst.add_state()));
    let state_of = |ctx: Context| contexts.iter().find(|(c, _)| *c == ctx).expect("context").1;
    fst.set_start(state_of(Context::Boundary))?;
    for &(_, s) in &contexts {
        fst.set_final(s, Weight::ONE)?;
    }

    let lone_vowel_spellings: HashMap<usize, &[(Vec<String>, f64)]> = spell
        .units()
        .iter()
        .filter_map(|u| match classify(&u.sounds) {
            UnitKind::Vowel(v) if u.sounds.len() == 1 => Some((v, u.spellings.as_slice())),
            _ => None,
        })
        .collect();

    let mut trie: HashMap<(StateId, u32, u32), StateId> = HashMap::new();
    for &(ctx, src) in &contexts {
        for unit in spell.units() {
            let kind = classify(&unit.sounds);
            if !allowed(ctx, kind) {
                continue;
            }
            let dst = state_of(destination(&unit.sounds, kind));
            let is_long = matches!((ctx, kind), (Context::AfterVowel(p), UnitKind::Vowel(v))
                if p == v && unit.sounds.len() == 1);
            let spellings: Vec<(Vec<String>, f64)> = if is_long && !spell.long_vowel().is_empty() {
                let Context::AfterVowel(v) = ctx else { unreachable!() };
                spell
                    .long_vowel()
                    .iter()
                    .flat_map(|(s, p)| match s {
                        LongVowelSpelling::Glyph(g) => vec![(vec![g.clone()], *p)],
                        LongVowelSpelling::RepeatVowel => lone_vowel_spellings
                            .get(&v)
                            .map(|alts| alts.iter().map(|(g, q)| (g.clone(), p * q)).collect())
                            .unwrap_or_default(),
                    })
                    .collect()
            } else {
                unit.spellings.clone()
            };
            let in_labels = sounds
                .encode(&unit.sounds)
                .map_err(|_| ModelError::UnknownSound(unit.sounds.join(" ")))?;
            for (glyph_seq, p) in spellings {
                let out_labels = glyphs
                    .encode(&glyph_seq)
                    .map_err(|e| ModelError::Inconsistent(format!("writer glyph: {e}")))?;
                let len = in_labels.len().max(out_labels.len());
                let mut node = src;
                for i in 0..len {
                    let il = in_labels.get(i).copied().unwrap_or(EPSILON);
                    let ol = out_labels.get(i).copied().unwrap_or(EPSILON);
                    if i + 1 == len {
                        fst.add_arc(node, Transition::new(il, ol, Weight::from_probability(p)?, dst))?;
                    } else {
                        node = match trie.get(&(node, il, ol)) {
                            Some(&n) => n,
                            None => {
                                let n = fst.add_state();
                                fst.add_arc(node, Transition::new(il, ol, Weight::ONE, n))?;
                                trie.insert((node, il, ol), n);
                                n
                            }
                        };
                    }
                }
            }
        }
    }
    Ok(fst)
}

/// Canonicalizes observed katakana: NFKC (half-width to full-width and
/// combined voicing marks), hiragana folded to katakana, and any dot-like
/// character or run of whitespace between words turned into `・`.
pub fn normalize_katakana(input: &str) -> String {
    let mut out = String::new();
    let mut pending_sep = false;
    for c in input.trim().nfkc() {
        let c = match c {
            '\u{3041}'..='\u{3096}' => char::from_u32(c as u32 + 0x60).unwrap_or(c),
            _ => c,
        };
        if matches!(c, '·' | '•' | '‧' | '・' | '∙' | '⋅') || c.is_whitespace() {
            pending_sep = true;
            continue;
        }
        if pending_sep && !out.is_empty() {
            out.push_str(SEPARATOR);
        }
        pending_sep = false;
        out.push(c);
    }
    out
}

/// Splits normalized katakana into glyph labels.
pub fn glyph_sequence(text: &str) -> Vec<String> {
    text.chars().map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{best_path, compose, invert, k_best, linear_acceptor, trim};
    use crate::models::bundled;
    use crate::models::inventory::japanese_sound_table;

    struct Setup {
        writer: Fst,
        sounds: Arc<SymbolTable>,
        glyphs: Arc<SymbolTable>,
    }

    fn setup() -> Setup {
        let spell = KatakanaSpellingTable::parse(bundled::SPELLING).unwrap();
        let sounds = Arc::new(japanese_sound_table());
        let glyphs = Arc::new(spell.glyph_table());
        let writer = build_katakana_writer(&spell, &sounds, &glyphs).unwrap();
        Setup {
            writer,
            sounds,
            glyphs,
        }
    }

    fn write(s: &Setup, sounds: &str, k: usize) -> Vec<(String, f64)> {
        let seq: Vec<&str> = sounds.split_whitespace().collect();
        let c = trim(&compose(&linear_acceptor(&seq, &s.sounds).unwrap(), &s.writer).unwrap());
        k_best(&c, k)
            .into_iter()
            .map(|p| (p.output_labels(&c).concat(), p.cost.probability()))
            .collect()
    }

    fn read(s: &Setup, katakana: &str) -> Option<String> {
        let reader = invert(&s.writer);
        let glyphs = glyph_sequence(katakana);
        let c = trim(&compose(&linear_acceptor(&glyphs, &s.glyphs).unwrap(), &reader).unwrap());
        best_path(&c).map(|p| p.output_labels(&c).join(" "))
    }

    #[test]
    fn bundled_table_covers_inventory() {
        let spell = KatakanaSpellingTable::parse(bundled::SPELLING).unwrap();
        assert!(spell.missing_sounds().is_empty(), "{:?}", spell.missing_sounds());
    }

    #[test]
    fn ga() {
        assert_eq!(write(&setup(), "g a", 1)[0].0, "ガ");
    }

    #[test]
    fn golfbag() {
        let s = setup();
        let outs = write(&s, "g o r u h u b a gg u", 5);
        assert_eq!(outs[0].0, "ゴルフバッグ");
        assert!(outs[0].1 > 0.0);
        assert_eq!(read(&s, "ゴルフバッグ").unwrap(), "g o r u h u b a gg u");
    }

    #[test]
    fn pause_prefers_separator() {
        let s = setup();
        let outs = write(&s, "a pause a", 2);
        assert_eq!(outs[0].0, "ア・ア");
        assert_eq!(outs[1].0, "アア");
        assert!((outs[0].1 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn pause_cannot_lead() {
        assert!(write(&setup(), "pause a", 1).is_empty());
    }

    #[test]
    fn long_vowels_prefer_mark() {
        let s = setup();
        let outs = write(&s, "n y u u y o o k u", 10);
        assert_eq!(outs[0].0, "ニューヨーク");
        assert!(outs.iter().any(|(k, _)| k == "ニュウヨオク"));
        assert!((outs[0].1 - 0.95 * 0.81).abs() < 1e-12);
    }

    #[test]
    fn moraic_n_only_before_consonants() {
        let s = setup();
        assert_eq!(write(&s, "a n n a", 1)[0].0, "アンナ");
        assert_eq!(write(&s, "n a", 5).len(), 1);
        assert_eq!(read(&s, "ジョンソン").unwrap(), "j y o n s o n");
    }

    #[test]
    fn readings_of_observed_examples() {
        let s = setup();
        assert_eq!(read(&s, "サッカー").unwrap(), "s a kk a a");
        assert_eq!(read(&s, "アースデー").unwrap(), "a a s u d e e");
        assert_eq!(read(&s, "ショーン").unwrap(), "sh y o o n");
        assert_eq!(write(&s, "sh y o o n", 5)[0].0, "ショーン");
        assert!(write(&s, "sh y o o n", 5).iter().any(|(k, _)| k == "シヨーン"));
    }

    #[test]
    fn bare_consonant_is_unwritable() {
        assert!(write(&setup(), "k", 1).is_empty());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_katakana("ｺﾞﾙﾌ"), "ゴルフ");
        assert_eq!(normalize_katakana("ニューヨーク･タイムズ"), "ニューヨーク・タイムズ");
        assert_eq!(normalize_katakana(" ロバート • ショーン "), "ロバート・ショーン");
        assert_eq!(normalize_katakana("あいす"), "アイス");
    }

    #[test]
    fn unit_mass_is_checked() {
        assert!(KatakanaSpellingTable::parse("g a\tガ\t0.5\n").is_err());
        assert!(KatakanaSpellingTable::parse("q a\tガ\t1\n").is_err());
        assert!(KatakanaSpellingTable::parse("<long>\tーー\t1\n").is_err());
    }
}
