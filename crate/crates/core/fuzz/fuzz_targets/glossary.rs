#![no_main]

use backtrans::training::parse_glossary;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = parse_glossary(s);
});
