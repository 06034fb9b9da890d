#![no_main]

use backtrans::models::WordSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = WordSet::parse("fuzz", s);
});
