#![no_main]

use std::sync::OnceLock;

use backtrans::decode::{decode, DecodeOptions, ModelSet};
use backtrans::models::normalize_katakana;
use libfuzzer_sys::fuzz_target;

static MODELS: OnceLock<ModelSet> = OnceLock::new();

fuzz_target!(|s: &str| {
    if s.chars().count() > 24 {
        return;
    }
    let normalized = normalize_katakana(s);
    assert_eq!(normalize_katakana(&normalized), normalized);
    let models = MODELS.get_or_init(|| ModelSet::desk().expect("bundled models"));
    for use_ocr_model in [false, true] {
        let opts = DecodeOptions { k: 3, use_ocr_model, ..DecodeOptions::default() };
        if let Ok(d) = decode(s, models, &opts) {
            assert!(d.candidates.windows(2).all(|w| w[0].cost.cost() <= w[1].cost.cost()));
        }
    }
});
