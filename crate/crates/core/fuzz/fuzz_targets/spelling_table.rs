#![no_main]

use backtrans::models::KatakanaSpellingTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = KatakanaSpellingTable::parse(s);
});
