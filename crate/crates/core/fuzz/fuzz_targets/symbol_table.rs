#![no_main]

use backtrans::fsm::SymbolTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(t) = SymbolTable::from_text(s) {
        let again = SymbolTable::from_text(&t.to_text()).expect("written table reads back");
        assert_eq!(again.to_text(), t.to_text());
    }
});
