#![no_main]

use backtrans::models::FrequencyList;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = FrequencyList::parse(s);
});
