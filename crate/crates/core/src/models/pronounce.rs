use std::collections::HashMap;
use std::sync::Arc;

use super::inventory::ENGLISH_PAUSE;
use super::lexicon::PronunciationLexicon;
use super::ModelError;
use crate::fsm::{Fst, StateId, SymbolTable, Transition, Weight, EPSILON};

/// Probability of a PAUSE between two consecutive words. The no-pause
/// boundary takes the remaining mass.
pub const BOUNDARY_PAUSE_PROBABILITY: f64 = 0.5;

/// Builds the word-to-phoneme transducer.
///
/// Pronunciations share a phoneme prefix tree rooted at the start state:
/// tree arcs read nothing and write one phoneme, and the word symbol is
/// read on a final arc into a shared word-end state. Alternatives of a word
/// split its probability uniformly. From the word-end state the machine
/// either stops or returns to the root, optionally writing PAUSE, so a
/// PAUSE can only ever sit between two words.
pub fn build_pronouncer(
    lex: &PronunciationLexicon,
    words: &Arc<SymbolTable>,
    phonemes: &Arc<SymbolTable>,
) -> Result<Fst, ModelError> {
    if lex.is_empty() {
        return Err(ModelError::EmptyLexicon);
    }
    let pause = phonemes
        .get(ENGLISH_PAUSE)
        .ok_or_else(|| ModelError::UnknownPhoneme {
            word: String::new(),
            phoneme: ENGLISH_PAUSE.to_string(),
        })?;
    let mut fst = Fst::new(words.clone(), phonemes.clone());
    let root = fst.add_state();
    let word_end = fst.add_state();
    fst.set_start(root)?;
    fst.set_final(word_end, Weight::ONE)?;

    let counts = lex.alternative_counts();
    let mut children: HashMap<(StateId, u32), StateId> = HashMap::new();
    for word in lex.words() {
        let wlabel = words
            .get(word)
            .ok_or_else(|| ModelError::UnknownWord(word.to_string()))?;
        let share = Weight::from_probability(1.0 / counts[word] as f64)?;
        for pron in lex.pronunciations(word).expect("listed word") {
            let mut node = root;
            for ph in pron {
                let plabel = phonemes.get(ph).ok_or_else(|| ModelError::UnknownPhoneme {
                    word: word.to_string(),
                    phoneme: ph.clone(),
                })?;
                node = match children.get(&(node, plabel)) {
                    Some(&n) => n,
                    None => {
                        let n = fst.add_state();
                        fst.add_arc(node, Transition::new(EPSILON, plabel, Weight::ONE, n))?;
                        children.insert((node, plabel), n);
                        n
                    }
                };
            }
            fst.add_arc(node, Transition::new(wlabel, EPSILON, share, word_end))?;
        }
    }
    let boundary = Weight::from_probability(BOUNDARY_PAUSE_PROBABILITY)?;
    let no_pause = Weight::from_probability(1.0 - BOUNDARY_PAUSE_PROBABILITY)?;
    fst.add_arc(word_end, Transition::new(EPSILON, EPSILON, no_pause, root))?;
    fst.add_arc(word_end, Transition::new(EPSILON, pause, boundary, root))?;
    Ok(fst)
}
