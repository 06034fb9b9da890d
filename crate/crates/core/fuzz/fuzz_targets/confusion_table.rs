#![no_main]

use backtrans::models::ConfusionTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = ConfusionTable::parse(s);
});
