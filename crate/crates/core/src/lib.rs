//! Back-transliteration of katakana into English through a cascade of
//! weighted finite-state models: a unigram word model, a pronunciation
//! lexicon, an English-to-Japanese sound mapping, a katakana spelling
//! model and an optional OCR confusion model.

pub mod decode;
pub mod fsm;
pub mod models;
pub mod training;
