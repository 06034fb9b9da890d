#![no_main]

use backtrans::decode::parse_eval_set;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let _ = parse_eval_set(s);
});
