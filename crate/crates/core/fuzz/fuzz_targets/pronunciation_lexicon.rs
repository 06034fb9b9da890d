#![no_main]

use backtrans::models::PronunciationLexicon;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = PronunciationLexicon::parse(s);
});
