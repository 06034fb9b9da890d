//! Sound inventories for the two languages.

use crate::fsm::SymbolTable;

/// English vowels, stress marks removed.
pub const ENGLISH_VOWELS: [&str; 14] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "EY", "IH", "IY", "OW", "OY", "UH", "UW",
];

/// English consonants. ER is grouped here as an r-colored sound.
pub const ENGLISH_CONSONANTS: [&str; 25] = [
    "B", "CH", "D", "DH", "ER", "F", "G", "HH", "JH", "K", "L", "M", "N", "NG", "P", "R", "S",
    "SH", "T", "TH", "V", "W", "Y", "Z", "ZH",
];

pub const ENGLISH_PAUSE: &str = "PAUSE";

pub const JAPANESE_VOWELS: [&str; 5] = ["a", "i", "u", "e", "o"];

/// Japanese consonants, doubled (geminate) forms included.
pub const JAPANESE_CONSONANTS: [&str; 33] = [
    "b", "ch", "d", "f", "g", "h", "j", "k", "m", "n", "p", "r", "s", "sh", "t", "ts", "v", "w",
    "y", "z", "bb", "dd", "ff", "gg", "hh", "jj", "kk", "pp", "ss", "ssh", "tch", "tt", "zz",
];

pub const JAPANESE_PAUSE: &str = "pause";

/// Geminate consonants and the single consonant each one doubles.
pub const GEMINATES: [(&str, &str); 13] = [
    ("bb", "b"),
    ("dd", "d"),
    ("ff", "f"),
    ("gg", "g"),
    ("hh", "h"),
    ("jj", "j"),
    ("kk", "k"),
    ("pp", "p"),
    ("ss", "s"),
    ("ssh", "sh"),
    ("tch", "ch"),
    ("tt", "t"),
    ("zz", "z"),
];

pub fn english_phonemes() -> impl Iterator<Item = &'static str> {
    ENGLISH_VOWELS
        .into_iter()
        .chain(ENGLISH_CONSONANTS)
        .chain([ENGLISH_PAUSE])
}

pub fn japanese_sounds() -> impl Iterator<Item = &'static str> {
    JAPANESE_VOWELS
        .into_iter()
        .chain(JAPANESE_CONSONANTS)
        .chain([JAPANESE_PAUSE])
}

pub fn is_english_phoneme(p: &str) -> bool {
    english_phonemes().any(|q| q == p)
}

pub fn is_japanese_sound(s: &str) -> bool {
    japanese_sounds().any(|q| q == s)
}

pub fn is_japanese_vowel(s: &str) -> bool {
    JAPANESE_VOWELS.contains(&s)
}

pub fn is_geminate(s: &str) -> bool {
    GEMINATES.iter().any(|&(g, _)| g == s)
}

/// Strips CMU-style stress digits: `AA1` becomes `AA`.
pub fn strip_stress(p: &str) -> &str {
    p.trim_end_matches(|c: char| c.is_ascii_digit())
}

pub fn english_phoneme_table() -> SymbolTable {
    SymbolTable::from_labels(english_phonemes()).expect("inventory labels are valid")
}

pub fn japanese_sound_table() -> SymbolTable {
    SymbolTable::from_labels(japanese_sounds()).expect("inventory labels are valid")
}


#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn english_inventory_has_forty_sounds() {
        let all: HashSet<_> = english_phonemes().collect();
        assert_eq!(all.len(), 40);
        assert!(all.contains("PAUSE"));
        assert_eq!(english_phoneme_table().len(), 41);
    }

    #[test]
    fn japanese_inventory_has_thirty_nine_sounds() {
        let all: HashSet<_> = japanese_sounds().collect();
        assert_eq!(all.len(), 39);
        assert!(all.contains("pause"));
        // long vowels are sequences, not symbols
        assert!(!all.contains("aa"));
        for (g, single) in GEMINATES {
            assert!(all.contains(g) && all.contains(single));
        }
    }

    #[test]
    fn stress_is_stripped() {
        assert_eq!(strip_stress("AA1"), "AA");
        assert_eq!(strip_stress("ER0"), "ER");
        assert_eq!(strip_stress("K"), "K");
    }
}
