mod common;

use std::sync::OnceLock;

use backtrans::decode::{
    back_transliterate, decode, evaluate, parse_eval_set, phonetic_best, phonetic_candidates, rescore,
    transliterate_forward, DecodeError, DecodeOptions, EvalOptions, ModelSet, Noise, Resources,
};
use backtrans::fsm::{best_path, compose, invert, linear_acceptor, project_output, write_text};
use backtrans::models::{bundled, glyph_sequence, normalize_katakana, ConfusionTable};

fn desk() -> &'static ModelSet {
    static MODELS: OnceLock<ModelSet> = OnceLock::new();
    MODELS.get_or_init(|| ModelSet::desk().unwrap())
}

fn top(observed: &str) -> String {
    back_transliterate(observed, desk(), &DecodeOptions::default()).unwrap()[0].text()
}

fn confusion() -> ConfusionTable {
    ConfusionTable::parse(bundled::CONFUSION).unwrap()
}

#[test]
fn introduction_examples() {
    assert_eq!(top("アースデー"), "earth day");
    assert_eq!(top("ロバート・シヨーン・レナード"), "robert sean leonard");
    assert_eq!(top("マスターズトーナメント"), "masters tournament");
    assert_eq!(top("ニューヨーク・タイムズ"), "new york times");
}

#[test]
fn ice_cream_beats_i_scream_but_both_are_listed() {
    let c = back_transliterate("アイスクリーム", desk(), &DecodeOptions::default()).unwrap();
    assert_eq!(c[0].text(), "ice cream");
    assert!(c.iter().any(|c| c.text() == "i scream"));
}

#[test]
fn rescoring_changes_the_masters_answer() {
    let opts = DecodeOptions::default();
    let lattice = phonetic_candidates("マスターズトーナメント", desk(), &opts).unwrap();
    let phonetic = phonetic_best(&lattice, &DecodeOptions { k: 1000, ..opts }).unwrap();
    let rescored = rescore(&lattice, desk(), &opts).unwrap();
    assert_ne!(phonetic[0].words, rescored[0].words);
    assert!(phonetic[0].text().starts_with("masters tone am ent"));
    assert!(phonetic.iter().any(|c| c.text() == "masters tournament"));
}

#[test]
fn staged_and_monolithic_composition_agree() {
    let m = desk();
    let opts = DecodeOptions::default();
    for observed in ["アースデー", "ゴルフバッグ", "サッカー"] {
        let staged = back_transliterate(observed, m, &opts).unwrap()[0].cost.cost();
        let glyphs = glyph_sequence(&normalize_katakana(observed));
        let input = linear_acceptor(&glyphs, m.glyphs()).unwrap();
        let chain = compose(&input, m.reader()).unwrap();
        let chain = compose(&chain, &invert(m.sound_mapper())).unwrap();
        let chain = compose(&chain, &invert(m.pronouncer())).unwrap();
        let chain = compose(&project_output(&chain), m.word_model()).unwrap();
        let mono = best_path(&chain).unwrap().cost.cost();
        assert!((staged - mono).abs() <= 1e-9 * staged.max(1.0), "{observed}");
    }
}

#[test]
fn candidates_are_ordered_and_consistent() {
    let c = back_transliterate("ゴルフ・ボール", desk(), &DecodeOptions { k: 10, ..Default::default() }).unwrap();
    assert!(c.len() > 1);
    for w in c.windows(2) {
        assert!(w[0].probability >= w[1].probability);
    }
    for cand in &c {
        assert!((cand.probability * cand.cost.cost().exp() - 1.0).abs() < 1e-9);
    }
    let mut texts: Vec<String> = c.iter().map(|c| c.text()).collect();
    texts.dedup();
    assert_eq!(texts.len(), c.len());
}

#[test]
fn identity_ocr_leaves_costs_alone() {
    let mut res = Resources::bundled().unwrap();
    res.confusion = ConfusionTable::identity();
    let m = ModelSet::build(&res).unwrap();
    for observed in ["アースデー", "ロバート・シヨーン・レナード"] {
        let plain = back_transliterate(observed, &m, &DecodeOptions::default()).unwrap();
        let ocr = back_transliterate(observed, &m, &DecodeOptions { use_ocr_model: true, ..Default::default() }).unwrap();
        assert_eq!(plain, ocr);
    }
}

#[test]
fn ocr_model_recovers_misread_glyph() {
    // ロ read as the kanji 口.
    let opts = DecodeOptions { use_ocr_model: true, ..Default::default() };
    let c = back_transliterate("口バート・シヨーン・レナード", desk(), &opts).unwrap();
    assert_eq!(c[0].text(), "robert sean leonard");
    assert!(matches!(
        back_transliterate("口バート", desk(), &DecodeOptions::default()),
        Err(DecodeError::UnknownGlyph(g)) if g == "口"
    ));
}

#[test]
fn name_mode_changes_only_rescoring() {
    let plain = DecodeOptions::default();
    let names = DecodeOptions { name_mode: true, ..plain };
    let observed = "ジョン・ケネディ";
    let a = phonetic_candidates(observed, desk(), &plain).unwrap();
    let b = phonetic_candidates(observed, desk(), &names).unwrap();
    assert_eq!(write_text(&a), write_text(&b));
    let c = back_transliterate(observed, desk(), &names).unwrap();
    assert_eq!(c[0].text(), "john kennedy");
    assert!(back_transliterate("ゴルフバッグ", desk(), &names).unwrap().is_empty());
}

#[test]
fn unknown_input_gets_a_fallback() {
    // No English phoneme maps to `v`, so the reading stops at the sounds.
    let d = decode("ヴァヴァ", desk(), &DecodeOptions::default()).unwrap();
    assert!(d.candidates.is_empty());
    let fb = d.fallback.unwrap();
    assert_eq!(fb.sounds, vec!["v", "a", "v", "a"]);
    assert!(fb.phonemes.is_empty());
    let found = decode("ゴルフ", desk(), &DecodeOptions::default()).unwrap();
    assert!(found.fallback.is_none());
    assert!(matches!(
        back_transliterate("abc", desk(), &DecodeOptions::default()),
        Err(DecodeError::UnknownGlyph(_))
    ));
    assert!(matches!(
        back_transliterate("ア", desk(), &DecodeOptions { k: 0, ..Default::default() }),
        Err(DecodeError::InvalidK)
    ));
}

#[test]
fn forward_transliteration() {
    let m = desk();
    assert_eq!(transliterate_forward::<&str>(&[], m).unwrap(), "");
    // AO -> o outweighs AO -> o o, so the short-vowel spelling wins.
    assert_eq!(transliterate_forward(&["golf", "ball"], m).unwrap(), "ゴルフボル");
    assert!(matches!(transliterate_forward(&["zyzzyva"], m), Err(DecodeError::UnknownWord(_))));
    for w in ["golf", "computer", "tournament", "hotel", "internet", "leonard"] {
        let k = transliterate_forward(&[w], m).unwrap();
        let c = back_transliterate(&k, m, &DecodeOptions::default()).unwrap();
        assert!(c.iter().any(|c| c.text() == w), "{w} -> {k}");
        let lattice = phonetic_candidates(&k, m, &DecodeOptions::default()).unwrap();
        assert!(!lattice.is_empty());
    }
}

#[test]
fn save_and_load_round_trip() {
    let dir = std::env::temp_dir().join(format!("backtrans-models-{}", std::process::id()));
    desk().save(&dir).unwrap();
    let loaded = ModelSet::load(&dir).unwrap();
    for observed in ["アースデー", "マスターズトーナメント", "ジョン・ケネディ"] {
        for name_mode in [false, true] {
            let opts = DecodeOptions { name_mode, ..Default::default() };
            let a = back_transliterate(observed, desk(), &opts).unwrap();
            let b = back_transliterate(observed, &loaded, &opts).unwrap();
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.words, y.words);
                assert!((x.cost.cost() - y.cost.cost()).abs() < 1e-9 * x.cost.cost().max(1.0));
            }
        }
    }
    let again = std::env::temp_dir().join(format!("backtrans-models-{}-b", std::process::id()));
    loaded.save(&again).unwrap();
    for f in ["word_model.fst", "pronouncer.fst", "katakana_writer.fst", "words.syms"] {
        assert_eq!(std::fs::read(dir.join(f)).unwrap(), std::fs::read(again.join(f)).unwrap(), "{f}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
    std::fs::remove_dir_all(&again).unwrap();
}

#[test]
fn desk_set_accuracy_and_separator_robustness() {
    let set = parse_eval_set(bundled::DESK_EVAL).unwrap();
    let conf = confusion();
    let clean = evaluate(desk(), &conf, &set, &EvalOptions::default()).unwrap();
    assert_eq!(clean.top1_accuracy(), 1.0, "{:#?}", clean.items);
    let stripped = evaluate(desk(), &conf, &set, &EvalOptions { strip_separators: true, ..Default::default() }).unwrap();
    assert_eq!(stripped.top1_correct(), clean.top1_correct());
    assert!(stripped.items.iter().all(|i| !i.input.contains('・')));
    let silent = EvalOptions { noise: Some(Noise { rate: 0.0, seed: 3 }), ..Default::default() };
    assert_eq!(evaluate(desk(), &conf, &set, &silent).unwrap(), clean);
    assert_eq!(clean.top1_correct(), clean.items.iter().filter(|i| i.top1_correct).count());
}

#[test]
fn noisy_evaluation_is_reproducible() {
    let set = parse_eval_set(bundled::DESK_EVAL).unwrap();
    let opts = EvalOptions {
        decode: DecodeOptions { use_ocr_model: true, ..Default::default() },
        noise: Some(Noise { rate: 0.3, seed: 11 }),
        ..Default::default()
    };
    let a = evaluate(desk(), &confusion(), &set, &opts).unwrap();
    let b = evaluate(desk(), &confusion(), &set, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.items.iter().zip(&set).any(|(i, e)| i.input != normalize_katakana(&e.katakana)));
    assert!(evaluate(desk(), &confusion(), &[], &opts).is_err());
}
