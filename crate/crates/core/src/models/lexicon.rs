//! Word-level resources: the frequency list, stoplist, personal-name list,
//! unigram lexicon and pronunciation lexicon.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::inventory::{is_english_phoneme, strip_stress};
use super::tsv::{normalize_word, records};
use super::ModelError;
use crate::fsm::{Fst, SymbolTable, Transition, Weight};

/// Raw `word<TAB>count` entries, most frequent first (ties by word).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FrequencyList {
    entries: Vec<(String, f64)>,
}

impl FrequencyList {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
        for rec in records("frequency list", text, 2, 2) {
            let (line, fields) = rec?;
            let word = normalize_word(fields[0]);
            if word.is_empty() {
                return Err(ModelError::parse("frequency list", line, "empty word"));
            }
            let count: f64 = fields[1].parse().map_err(|_| {
                ModelError::parse("frequency list", line, format!("bad count `{}`", fields[1]))
            })?;
            if !(count.is_finite() && count > 0.0) {
                return Err(ModelError::parse(
                    "frequency list",
                    line,
                    format!("count must be positive, got {count}"),
                ));
            }
            *counts.entry(word).or_default() += count;
        }
        Ok(Self::from_counts(counts))
    }

    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut entries: Vec<(String, f64)> = counts
            .into_iter()
            .map(|(w, c)| (normalize_word(w.as_ref()), c))
            .collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        FrequencyList { entries }
    }

    /// The `limit` most frequent entries (all when `None`).
    pub fn top(&self, limit: Option<usize>) -> &[(String, f64)] {
        let n = limit.unwrap_or(self.entries.len()).min(self.entries.len());
        &self.entries[..n]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A set of words, one per line (extra tab-separated fields are ignored).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct WordSet(BTreeSet<String>);

impl WordSet {
    pub fn parse(resource: &str, text: &str) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        for rec in records(resource, text, 1, 8) {
            let (_, fields) = rec?;
            let w = normalize_word(fields[0]);
            if !w.is_empty() {
                set.insert(w);
            }
        }
        Ok(WordSet(set))
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        WordSet(words.into_iter().map(|w| normalize_word(w.as_ref())).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Normalized unigram probabilities over the retained vocabulary.
#[derive(Clone, Debug, PartialEq)]
pub struct UnigramLexicon {
    entries: Vec<(String, f64)>,
    names: WordSet,
}

impl UnigramLexicon {
    /// Takes the `limit` most frequent entries, drops stoplisted words and
    /// normalizes the remaining counts.
    pub fn new(
        list: &FrequencyList,
        stoplist: &WordSet,
        limit: Option<usize>,
    ) -> Result<Self, ModelError> {
        let kept: Vec<(String, f64)> = list
            .top(limit)
            .iter()
            .filter(|(w, _)| !stoplist.contains(w))
            .cloned()
            .collect();
        Self::normalized(kept, WordSet::default())
    }

    fn normalized(kept: Vec<(String, f64)>, names: WordSet) -> Result<Self, ModelError> {
        let total: f64 = kept.iter().map(|(_, c)| c).sum();
        if kept.is_empty() || total <= 0.0 {
            return Err(ModelError::EmptyLexicon);
        }
        Ok(UnigramLexicon {
            entries: kept.into_iter().map(|(w, c)| (w, c / total)).collect(),
            names,
        })
    }

    /// Attaches the personal-name list used by [`WordModelMode::PersonalNames`].
    pub fn with_names(mut self, names: WordSet) -> Self {
        self.names = names;
        self
    }

    /// The lexicon restricted to listed names and renormalized.
    pub fn names_only(&self) -> Result<Self, ModelError> {
        let kept = self
            .entries
            .iter()
            .filter(|(w, _)| self.names.contains(w))
            .cloned()
            .collect();
        Self::normalized(kept, self.names.clone())
    }

    pub fn probability(&self, word: &str) -> Option<f64> {
        self.entries.iter().find(|(w, _)| w == word).map(|&(_, p)| p)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordModelMode {
    Full,
    PersonalNames,
}

/// Unigram word-sequence acceptor: one hub state, start and final at cost
/// zero, with a self-loop per word at `-ln P(word)`.
pub fn build_word_model(
    lex: &UnigramLexicon,
    mode: WordModelMode,
    words: &Arc<SymbolTable>,
) -> Result<Fst, ModelError> {
    let restricted;
    let lex = match mode {
        WordModelMode::Full => lex,
        WordModelMode::PersonalNames => {
            restricted = lex.names_only()?;
            &restricted
        }
    };
    let mut fst = Fst::new_acceptor(words.clone());
    let hub = fst.add_state();
    fst.set_start(hub)?;
    fst.set_final(hub, Weight::ONE)?;
    for (word, p) in lex.entries() {
        let label = words
            .get(word)
            .ok_or_else(|| ModelError::UnknownWord(word.clone()))?;
        fst.add_arc(hub, Transition::new(label, label, Weight::from_probability(*p)?, hub))?;
    }
    Ok(fst)
}

/// Word to phoneme-sequence dictionary over the English inventory.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PronunciationLexicon {
    entries: BTreeMap<String, Vec<Vec<String>>>,
}

/// Cap on pronunciations generated for a multiword phrase.
const MAX_PHRASE_PRONUNCIATIONS: usize = 8;

impl PronunciationLexicon {
    /// Parses `word<TAB>PH1 PH2 ...` lines. Repeated words add alternative
    /// pronunciations; stress digits and CMU `(n)` variant suffixes are
    /// removed.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut lex = PronunciationLexicon::default();
        for rec in records("pronunciation lexicon", text, 2, 2) {
            let (line, fields) = rec?;
            let mut word = fields[0];
            if let Some(open) = word.rfind('(') {
                if word.ends_with(')') {
                    word = &word[..open];
                }
            }
            let word = normalize_word(word);
            if word.is_empty() {
                return Err(ModelError::parse("pronunciation lexicon", line, "empty word"));
            }
            let phonemes: Vec<String> = fields[1]
                .split_whitespace()
                .map(|p| strip_stress(p).to_string())
                .collect();
            lex.insert(&word, phonemes).map_err(|e| match e {
                ModelError::UnknownPhoneme { word, phoneme } => ModelError::parse(
                    "pronunciation lexicon",
                    line,
                    format!("word `{word}` uses unknown phoneme `{phoneme}`"),
                ),
                other => ModelError::parse("pronunciation lexicon", line, other.to_string()),
            })?;
        }
        Ok(lex)
    }

    pub fn insert(&mut self, word: &str, phonemes: Vec<String>) -> Result<(), ModelError> {
        if phonemes.is_empty() {
            return Err(ModelError::EmptyPronunciation(word.to_string()));
        }
        if let Some(bad) = phonemes.iter().find(|p| !is_english_phoneme(p) || *p == "PAUSE") {
            return Err(ModelError::UnknownPhoneme {
                word: word.to_string(),
                phoneme: bad.clone(),
            });
        }
        let prons = self.entries.entry(word.to_string()).or_default();
        if !prons.contains(&phonemes) {
            prons.push(phonemes);
        }
        Ok(())
    }

    pub fn pronunciations(&self, word: &str) -> Option<&[Vec<String>]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Pronunciations for a word, or for a multiword phrase by concatenating
    /// its members' pronunciations.
    pub fn lookup_or_compose(&self, word: &str) -> Option<Vec<Vec<String>>> {
        if let Some(p) = self.entries.get(word) {
            return Some(p.clone());
        }
        if !word.contains(' ') {
            return None;
        }
        let mut acc: Vec<Vec<String>> = vec![Vec::new()];
        for part in word.split(' ') {
            let alts = self.entries.get(part)?;
            acc = acc
                .iter()
                .flat_map(|prefix| {
                    alts.iter().map(move |alt| {
                        let mut p = prefix.clone();
                        p.extend(alt.iter().cloned());
                        p
                    })
                })
                .take(MAX_PHRASE_PRONUNCIATIONS)
                .collect();
        }
        Some(acc)
    }

    /// Lexicon over `vocabulary` only, composing phrase pronunciations where
    /// needed. Words without any pronunciation are returned separately.
    pub fn restricted_to<'a, I>(&self, vocabulary: I) -> (Self, Vec<String>)
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut out = PronunciationLexicon::default();
        let mut missing = Vec::new();
        for w in vocabulary {
            match self.lookup_or_compose(w) {
                Some(p) => {
                    out.entries.insert(w.to_string(), p);
                }
                None => missing.push(w.to_string()),
            }
        }
        (out, missing)
    }

    /// Per-word pronunciation counts, used for uniform alternative weights.
    pub(crate) fn alternative_counts(&self) -> HashMap<&str, usize> {
        self.entries
            .iter()
            .map(|(w, p)| (w.as_str(), p.len()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{best_path, compose, linear_acceptor, trim};

    fn words(ws: &[&str]) -> Arc<SymbolTable> {
        Arc::new(SymbolTable::from_labels(ws).unwrap())
    }

    #[test]
    fn normalizes_counts() {
        let list = FrequencyList::parse("ice\t3\ncream\t1\n").unwrap();
        let lex = UnigramLexicon::new(&list, &WordSet::default(), None).unwrap();
        assert_eq!(lex.probability("ice"), Some(0.75));
        assert_eq!(lex.probability("cream"), Some(0.25));
    }

    #[test]
    fn word_model_multiplies_unigrams() {
        let list = FrequencyList::parse("ice\t3\ncream\t1\n").unwrap();
        let lex = UnigramLexicon::new(&list, &WordSet::default(), None).unwrap();
        let t = words(&["ice", "cream"]);
        let m = build_word_model(&lex, WordModelMode::Full, &t).unwrap();
        let seq = linear_acceptor(&["ice", "cream"], &t).unwrap();
        let p = best_path(&compose(&seq, &m).unwrap()).unwrap();
        assert!((p.cost.probability() - 0.1875).abs() < 1e-12);
    }

    #[test]
    fn stoplisted_words_get_no_path() {
        let list = FrequencyList::parse("has\t100\ngolf\t5\n").unwrap();
        let stop = WordSet::parse("stoplist", "has\nan\nare\n").unwrap();
        let lex = UnigramLexicon::new(&list, &stop, None).unwrap();
        assert_eq!(lex.probability("has"), None);
        assert_eq!(lex.probability("golf"), Some(1.0));
        let t = words(&["has", "golf"]);
        let m = build_word_model(&lex, WordModelMode::Full, &t).unwrap();
        let seq = linear_acceptor(&["has"], &t).unwrap();
        assert!(best_path(&trim(&compose(&seq, &m).unwrap())).is_none());
    }

    #[test]
    fn single_word_repeats_score_one() {
        let list = FrequencyList::parse("golf\t7\n").unwrap();
        let lex = UnigramLexicon::new(&list, &WordSet::default(), None).unwrap();
        let t = words(&["golf"]);
        let m = build_word_model(&lex, WordModelMode::Full, &t).unwrap();
        let seq = linear_acceptor(&["golf"; 4], &t).unwrap();
        let p = best_path(&compose(&seq, &m).unwrap()).unwrap();
        assert_eq!(p.cost.probability(), 1.0);
    }

    #[test]
    fn empty_after_stoplist_is_error() {
        let list = FrequencyList::parse("has\t1\n").unwrap();
        let stop = WordSet::from_words(["has"]);
        assert_eq!(
            UnigramLexicon::new(&list, &stop, None),
            Err(ModelError::EmptyLexicon)
        );
    }

    #[test]
    fn limit_keeps_most_frequent() {
        let list = FrequencyList::parse("a\t1\nb\t5\nc\t3\n").unwrap();
        let lex = UnigramLexicon::new(&list, &WordSet::default(), Some(2)).unwrap();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.probability("a"), None);
        assert_eq!(lex.probability("b"), Some(5.0 / 8.0));
    }

    #[test]
    fn name_mode_keeps_only_names() {
        let list = FrequencyList::parse("robert\t3\ntournament\t5\nsean\t1\n").unwrap();
        let lex = UnigramLexicon::new(&list, &WordSet::default(), None)
            .unwrap()
            .with_names(WordSet::from_words(["robert", "sean"]));
        let names = lex.names_only().unwrap();
        assert_eq!(names.probability("robert"), Some(0.75));
        assert_eq!(names.probability("tournament"), None);
        let t = words(&["robert", "tournament", "sean"]);
        let m = build_word_model(&lex, WordModelMode::PersonalNames, &t).unwrap();
        assert_eq!(m.num_arcs(), 2);
    }

    #[test]
    fn frequency_list_errors_have_line_numbers() {
        let err = FrequencyList::parse("# c\nice\t3\ncream\tlots\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }), "{err}");
        assert!(FrequencyList::parse("ice\t-1\n").is_err());
        assert!(FrequencyList::parse("ice\n").is_err());
    }

    #[test]
    fn pronunciations_strip_stress_and_variants() {
        let lex = PronunciationLexicon::parse("GOLF\tG AA1 L F\ngolf(1)\tG AO1 L F\n").unwrap();
        assert_eq!(
            lex.pronunciations("golf").unwrap(),
            &[
                ["G", "AA", "L", "F"].iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                ["G", "AO", "L", "F"].iter().map(|s| s.to_string()).collect(),
            ]
        );
    }

    #[test]
    fn unknown_phoneme_names_word_and_phoneme() {
        let err = PronunciationLexicon::parse("golf\tG QQ L F\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("golf") && msg.contains("QQ"), "{msg}");
    }

    #[test]
    fn phrases_concatenate_member_pronunciations() {
        let lex = PronunciationLexicon::parse("ice\tAY S\ncream\tK R IY M\n").unwrap();
        let (r, missing) = lex.restricted_to(["ice cream", "ice", "gelato"]);
        assert_eq!(missing, vec!["gelato"]);
        assert_eq!(
            r.pronunciations("ice cream").unwrap()[0].join(" "),
            "AY S K R IY M"
        );
    }
}
