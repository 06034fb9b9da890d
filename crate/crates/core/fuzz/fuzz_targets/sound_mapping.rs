#![no_main]

use backtrans::models::SoundMappingTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = SoundMappingTable::parse(s);
});
