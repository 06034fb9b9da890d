use std::fs;
use std::path::Path as FsPath;
use std::sync::Arc;

use super::DecodeError;
use crate::fsm::{invert, read_text, write_text, Fst, SymbolTable};
use crate::models::inventory::{english_phoneme_table, japanese_sound_table};
use crate::models::{
    build_katakana_writer, build_ocr_model, build_pronouncer, build_sound_mapper, build_word_model, bundled,
    ConfusionTable, FrequencyList, KatakanaSpellingTable, PronunciationLexicon, SoundMappingTable,
    UnigramLexicon, WordModelMode, WordSet,
};

/// Parsed resources a [`ModelSet`] is built from.
#[derive(Clone, Debug)]
pub struct Resources {
    pub frequencies: FrequencyList,
    pub pronunciations: PronunciationLexicon,
    pub stoplist: WordSet,
    pub names: WordSet,
    pub sound_mapping: SoundMappingTable,
    pub spelling: KatakanaSpellingTable,
    pub confusion: ConfusionTable,
    /// Keep only this many of the most frequent words in the word model.
    pub lexicon_limit: Option<usize>,
}

impl Resources {
    /// The resources compiled into the library.
    pub fn bundled() -> Result<Self, DecodeError> {
        Ok(Resources {
            frequencies: FrequencyList::parse(bundled::FREQUENCIES)?,
            pronunciations: PronunciationLexicon::parse(bundled::PRONUNCIATIONS)?,
            stoplist: WordSet::parse("stoplist", bundled::STOPLIST)?,
            names: WordSet::parse("name list", bundled::NAMES)?,
            sound_mapping: SoundMappingTable::parse(bundled::SOUND_MAPPING)?,
            spelling: KatakanaSpellingTable::parse(bundled::SPELLING)?,
            confusion: ConfusionTable::parse(bundled::CONFUSION)?,
            lexicon_limit: None,
        })
    }
}

/// The five models of the cascade with their alphabets.
///
/// Alphabets chain as words → English phonemes → Japanese sounds →
/// katakana glyphs → observed glyphs. Inverted machines used by the
/// decoder are built once and kept alongside.
#[derive(Clone, Debug)]
pub struct ModelSet {
    word_model: Fst,
    name_model: Option<Fst>,
    pronouncer: Fst,
    sound_mapper: Fst,
    katakana_writer: Fst,
    ocr_model: Fst,
    inverse_pronouncer: Fst,
    inverse_mapper: Fst,
    reader: Fst,
    inverse_ocr: Fst,
}

const FILES: [&str; 6] = [
    "word_model.fst",
    "name_model.fst",
    "pronouncer.fst",
    "sound_mapper.fst",
    "katakana_writer.fst",
    "ocr_model.fst",
];
const TABLES: [&str; 5] = ["words.syms", "phonemes.syms", "sounds.syms", "glyphs.syms", "observed.syms"];

impl ModelSet {
    /// Builds every model from `res`.
    ///
    /// The word alphabet holds every word of the pronunciation lexicon plus
    /// every retained frequency-list entry. Multiword entries get the
    /// concatenated pronunciations of their members.
    pub fn build(res: &Resources) -> Result<Self, DecodeError> {
        let unigram = UnigramLexicon::new(&res.frequencies, &res.stoplist, res.lexicon_limit)?
            .with_names(res.names.clone());
        let mut vocabulary: Vec<&str> = res.pronunciations.words().collect();
        vocabulary.extend(unigram.entries().iter().map(|(w, _)| w.as_str()));
        vocabulary.sort_unstable();
        vocabulary.dedup();
        let (plex, missing) = res.pronunciations.restricted_to(vocabulary.iter().copied());
        if !missing.is_empty() {
            log::info!("{} word-model entries have no pronunciation: {}", missing.len(), missing.join(", "));
        }
        let words = Arc::new(SymbolTable::from_labels(vocabulary.iter().copied())?);
        let phonemes = Arc::new(english_phoneme_table());
        let sounds = Arc::new(japanese_sound_table());
        let glyphs = Arc::new(res.spelling.glyph_table());
        let observed = Arc::new(res.confusion.observed_table(&glyphs));

        let word_model = build_word_model(&unigram, WordModelMode::Full, &words)?;
        let name_model = if unigram.entries().iter().any(|(w, _)| res.names.contains(w)) {
            Some(build_word_model(&unigram, WordModelMode::PersonalNames, &words)?)
        } else {
            None
        };
        let pronouncer = build_pronouncer(&plex, &words, &phonemes)?;
        let sound_mapper = build_sound_mapper(&res.sound_mapping, &phonemes, &sounds)?;
        let katakana_writer = build_katakana_writer(&res.spelling, &sounds, &glyphs)?;
        let ocr_model = build_ocr_model(&res.confusion, &glyphs, &observed)?;
        Self::from_models(word_model, name_model, pronouncer, sound_mapper, katakana_writer, ocr_model)
    }

    /// Builds from the bundled desk-scale resources.
    pub fn desk() -> Result<Self, DecodeError> {
        Self::build(&Resources::bundled()?)
    }

    /// Assembles a set from prebuilt machines, checking that adjacent
    /// alphabets agree.
    pub fn from_models(
        word_model: Fst,
        name_model: Option<Fst>,
        pronouncer: Fst,
        sound_mapper: Fst,
        katakana_writer: Fst,
        ocr_model: Fst,
    ) -> Result<Self, DecodeError> {
        let link = |boundary: &str, left: &Arc<SymbolTable>, right: &Arc<SymbolTable>| {
            if Arc::ptr_eq(left, right) || left == right {
                Ok(())
            } else {
                Err(DecodeError::AlphabetChain(boundary.to_string()))
            }
        };
        link("word model → pronouncer", word_model.output_symbols(), pronouncer.input_symbols())?;
        if let Some(n) = &name_model {
            link("name model → pronouncer", n.output_symbols(), pronouncer.input_symbols())?;
        }
        link("pronouncer → sound mapper", pronouncer.output_symbols(), sound_mapper.input_symbols())?;
        link(
            "sound mapper → katakana writer",
            sound_mapper.output_symbols(),
            katakana_writer.input_symbols(),
        )?;
        link("katakana writer → OCR model", katakana_writer.output_symbols(), ocr_model.input_symbols())?;
        Ok(ModelSet {
            inverse_pronouncer: invert(&pronouncer),
            inverse_mapper: invert(&sound_mapper),
            reader: invert(&katakana_writer),
            inverse_ocr: invert(&ocr_model),
            word_model,
            name_model,
            pronouncer,
            sound_mapper,
            katakana_writer,
            ocr_model,
        })
    }

    pub fn word_model(&self) -> &Fst {
        &self.word_model
    }

    pub fn name_model(&self) -> Option<&Fst> {
        self.name_model.as_ref()
    }

    pub fn pronouncer(&self) -> &Fst {
        &self.pronouncer
    }

    pub fn sound_mapper(&self) -> &Fst {
        &self.sound_mapper
    }

    pub fn katakana_writer(&self) -> &Fst {
        &self.katakana_writer
    }

    pub fn ocr_model(&self) -> &Fst {
        &self.ocr_model
    }

    /// The katakana writer inverted: glyphs to sounds.
    pub fn reader(&self) -> &Fst {
        &self.reader
    }

    pub(crate) fn inverse_pronouncer(&self) -> &Fst {
        &self.inverse_pronouncer
    }

    pub(crate) fn inverse_mapper(&self) -> &Fst {
        &self.inverse_mapper
    }

    pub(crate) fn inverse_ocr(&self) -> &Fst {
        &self.inverse_ocr
    }

    pub fn words(&self) -> &Arc<SymbolTable> {
        self.pronouncer.input_symbols()
    }

    pub fn phonemes(&self) -> &Arc<SymbolTable> {
        self.pronouncer.output_symbols()
    }

    pub fn sounds(&self) -> &Arc<SymbolTable> {
        self.sound_mapper.output_symbols()
    }

    pub fn glyphs(&self) -> &Arc<SymbolTable> {
        self.katakana_writer.output_symbols()
    }

    pub fn observed(&self) -> &Arc<SymbolTable> {
        self.ocr_model.output_symbols()
    }

    /// Writes symbol tables and machines in text form. Without a name
    /// model, `name_model.fst` is left out.
    pub fn save(&self, dir: &FsPath) -> Result<(), DecodeError> {
        fs::create_dir_all(dir)?;
        let tables = [self.words(), self.phonemes(), self.sounds(), self.glyphs(), self.observed()];
        for (name, table) in TABLES.iter().zip(tables) {
            fs::write(dir.join(name), table.to_text())?;
        }
        let machines = [
            Some(&self.word_model),
            self.name_model.as_ref(),
            Some(&self.pronouncer),
            Some(&self.sound_mapper),
            Some(&self.katakana_writer),
            Some(&self.ocr_model),
        ];
        for (name, fst) in FILES.iter().zip(machines) {
            let path = dir.join(name);
            match fst {
                Some(f) => fs::write(path, write_text(f))?,
                None if path.exists() => fs::remove_file(path)?,
                None => {}
            }
        }
        Ok(())
    }

    /// Reads a directory written by [`ModelSet::save`].
    pub fn load(dir: &FsPath) -> Result<Self, DecodeError> {
        let read = |name: &str| -> Result<String, DecodeError> {
            fs::read_to_string(dir.join(name)).map_err(|e| DecodeError::Io(format!("{}: {e}", dir.join(name).display())))
        };
        let mut tables = Vec::new();
        for name in TABLES {
            let t = SymbolTable::from_text(&read(name)?).map_err(|e| DecodeError::Resource(format!("{name}: {e}")))?;
            tables.push(Arc::new(t));
        }
        let [words, phonemes, sounds, glyphs, observed]: [Arc<SymbolTable>; 5] =
            tables.try_into().expect("five tables");
        let machine = |name: &str, i: &Arc<SymbolTable>, o: &Arc<SymbolTable>| -> Result<Fst, DecodeError> {
            read_text(&read(name)?, i.clone(), o.clone()).map_err(|e| DecodeError::Resource(format!("{name}: {e}")))
        };
        let name_model = if dir.join(FILES[1]).exists() {
            Some(machine(FILES[1], &words, &words)?)
        } else {
            None
        };
        Self::from_models(
            machine(FILES[0], &words, &words)?,
            name_model,
            machine(FILES[2], &words, &phonemes)?,
            machine(FILES[3], &phonemes, &sounds)?,
            machine(FILES[4], &sounds, &glyphs)?,
            machine(FILES[5], &glyphs, &observed)?,
        )
    }
}
