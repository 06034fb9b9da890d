#![no_main]

use backtrans::fsm::{read_text_inferring_symbols, write_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(fst) = read_text_inferring_symbols(s) {
        let once = write_text(&fst);
        let reread = read_text_inferring_symbols(&once).expect("written text reads back");
        assert_eq!(write_text(&reread), once);
    }
});
