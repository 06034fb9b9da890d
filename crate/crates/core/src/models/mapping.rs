use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::inventory::{is_english_phoneme, is_japanese_sound};
use super::tsv::{probability, records};
use super::ModelError;
use crate::fsm::{Fst, SymbolTable, Transition, Weight, EPSILON};

/// Conditional distribution of Japanese sound sequences given one English
/// phoneme.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SoundMappingTable {
    rows: BTreeMap<String, Vec<(Vec<String>, f64)>>,
}

/// Slack allowed when a row's probabilities are summed.
const MASS_SLACK: f64 = 1e-6;

impl SoundMappingTable {
    /// Parses `phoneme<TAB>j1 j2 ...<TAB>probability` lines.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        const RES: &str = "sound-mapping table";
        let mut table = SoundMappingTable::default();
        for rec in records(RES, text, 3, 3) {
            let (line, f) = rec?;
            let sounds: Vec<String> = f[1].split_whitespace().map(str::to_string).collect();
            let p = probability(RES, line, f[2])?;
            table
                .insert(f[0], sounds, p)
                .map_err(|e| ModelError::parse(RES, line, e.to_string()))?;
        }
        Ok(table)
    }

    /// Adds one mapping, validating symbols and the row's total mass.
    pub fn insert(&mut self, phoneme: &str, sounds: Vec<String>, p: f64) -> Result<(), ModelError> {
        if !is_english_phoneme(phoneme) {
            return Err(ModelError::UnknownPhoneme {
                word: String::new(),
                phoneme: phoneme.to_string(),
            });
        }
        if sounds.is_empty() {
            return Err(ModelError::EmptyPronunciation(phoneme.to_string()));
        }
        if let Some(bad) = sounds.iter().find(|s| !is_japanese_sound(s)) {
            return Err(ModelError::UnknownSound(bad.clone()));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(ModelError::InvalidProbability {
                context: format!("{phoneme} -> {}", sounds.join(" ")),
                value: p,
            });
        }
        let row = self.rows.entry(phoneme.to_string()).or_default();
        if row.iter().any(|(s, _)| *s == sounds) {
            return Err(ModelError::Duplicate(format!("{phoneme} -> {}", sounds.join(" "))));
        }
        let mass: f64 = row.iter().map(|(_, q)| q).sum::<f64>() + p;
        if mass > 1.0 + MASS_SLACK {
            return Err(ModelError::InvalidProbability {
                context: format!("row {phoneme} total"),
                value: mass,
            });
        }
        row.push((sounds, p));
        Ok(())
    }

    pub fn row(&self, phoneme: &str) -> &[(Vec<String>, f64)] {
        self.rows.get(phoneme).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn row_mass(&self, phoneme: &str) -> f64 {
        self.row(phoneme).iter().map(|(_, p)| p).sum()
    }

    /// Probability of one mapping, zero when absent.
    pub fn probability(&self, phoneme: &str, sounds: &[&str]) -> f64 {
        self.row(phoneme)
            .iter()
            .find(|(s, _)| s.iter().map(String::as_str).eq(sounds.iter().copied()))
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn phonemes(&self) -> impl Iterator<Item = &str> {
        self.rows.keys().map(String::as_str)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &[(Vec<String>, f64)])> {
        self.rows.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Every Japanese sound emitted by some mapping.
    pub fn output_sounds(&self) -> std::collections::BTreeSet<&str> {
        self.rows
            .values()
            .flatten()
            .flat_map(|(s, _)| s.iter().map(String::as_str))
            .collect()
    }

    /// Copy without entries at or below `floor`.
    pub fn pruned(&self, floor: f64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|(k, v)| {
                (
                    k.clone(),
                    v.iter().filter(|(_, p)| *p > floor).cloned().collect::<Vec<_>>(),
                )
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        SoundMappingTable { rows }
    }

    /// TSV in the same format [`SoundMappingTable::parse`] reads.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# phoneme\tjapanese sounds\tprobability\n");
        for (ph, row) in &self.rows {
            for (sounds, p) in row {
                writeln!(out, "{ph}\t{}\t{p}", sounds.join(" ")).expect("writing to a String");
            }
        }
        out
    }

    pub(crate) fn from_rows(rows: BTreeMap<String, Vec<(Vec<String>, f64)>>) -> Self {
        SoundMappingTable { rows }
    }
}

/// Builds the context-independent phoneme-to-sound transducer: a single
/// hub state with one loop per mapping that reads the phoneme on its first
/// arc and writes the sound sequence one symbol per arc.
pub fn build_sound_mapper(
    table: &SoundMappingTable,
    phonemes: &Arc<SymbolTable>,
    sounds: &Arc<SymbolTable>,
) -> Result<Fst, ModelError> {
    let mut fst = Fst::new(phonemes.clone(), sounds.clone());
    let hub = fst.add_state();
    fst.set_start(hub)?;
    fst.set_final(hub, Weight::ONE)?;
    for (ph, row) in table.rows() {
        let plabel = phonemes.get(ph).ok_or_else(|| ModelError::UnknownPhoneme {
            word: String::new(),
            phoneme: ph.to_string(),
        })?;
        for (seq, p) in row {
            if *p <= 0.0 {
                return Err(ModelError::InvalidProbability {
                    context: format!("{ph} -> {}", seq.join(" ")),
                    value: *p,
                });
            }
            let labels = sounds
                .encode(seq)
                .map_err(|_| ModelError::UnknownSound(seq.join(" ")))?;
            let mut node = hub;
            for (i, &l) in labels.iter().enumerate() {
                let next = if i + 1 == labels.len() { hub } else { fst.add_state() };
                let (input, weight) = if i == 0 {
                    (plabel, Weight::from_probability(*p)?)
                } else {
                    (EPSILON, Weight::ONE)
                };
                fst.add_arc(node, Transition::new(input, l, weight, next))?;
                node = next;
            }
        }
    }
    Ok(fst)
}
