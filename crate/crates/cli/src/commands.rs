use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use backtrans::decode::{self, evaluate, parse_eval_set, DecodeOptions, EvalOptions, EvalReport, ModelSet, Noise};
use backtrans::fsm::{invert, SymbolTable};
use backtrans::models::inventory::{english_phoneme_table, japanese_sound_table};
use backtrans::models::{build_katakana_writer, build_pronouncer, bundled};
use backtrans::training::{bootstrap_corpus, em_train, parse_glossary};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::CliError;

pub struct DecodeFlags {
    pub models: Option<PathBuf>,
    pub k: Option<usize>,
    pub names: bool,
    pub ocr: bool,
}

pub struct EvalArgs {
    pub testset: Option<PathBuf>,
    pub strip_separators: bool,
    pub noise_rate: Option<f64>,
    pub seed: u64,
}

fn resource_error(e: impl std::fmt::Display) -> CliError {
    CliError::Resource(e.to_string())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Resource(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(resource_error),
    }
}

pub fn train(config: &PipelineConfig, out: Option<&Path>) -> Result<(), CliError> {
    let plex = config.pronunciations()?;
    let spelling = config.spelling()?;
    let glossary_text = config.read(config.resources.glossary.as_ref(), bundled::GLOSSARY)?;
    let glossary = parse_glossary(&glossary_text).map_err(resource_error)?;

    let words = Arc::new(SymbolTable::from_labels(plex.words()).map_err(resource_error)?);
    let phonemes = Arc::new(english_phoneme_table());
    let sounds = Arc::new(japanese_sound_table());
    let glyphs = Arc::new(spelling.glyph_table());
    let pronouncer = build_pronouncer(&plex, &words, &phonemes).map_err(resource_error)?;
    let reader = invert(&build_katakana_writer(&spelling, &sounds, &glyphs).map_err(resource_error)?);

    let boot = bootstrap_corpus(&glossary, &pronouncer, &reader).map_err(resource_error)?;
    let outcome = em_train(&boot.corpus, &config.em_config()).map_err(resource_error)?;
    let table = if config.training.prune_below > 0.0 {
        outcome.table.pruned(config.training.prune_below)
    } else {
        outcome.table.clone()
    };
    write_out(out, &table.to_tsv())?;
    eprintln!(
        "pairs: {}  dropped entries: {}  skipped pairs: {}",
        boot.corpus.len(),
        boot.dropped.len(),
        outcome.skipped.len()
    );
    eprintln!(
        "iterations: {}{}  final log-likelihood: {:.6}",
        outcome.iterations,
        if outcome.converged { "" } else { " (not converged)" },
        outcome.final_log_likelihood()
    );
    Ok(())
}

pub fn build(config: &PipelineConfig, out: &Path) -> Result<(), CliError> {
    let models = ModelSet::build(&config.resources()?).map_err(resource_error)?;
    models.save(out).map_err(resource_error)?;
    for (name, fst) in [
        ("word model", Some(models.word_model())),
        ("name model", models.name_model()),
        ("pronouncer", Some(models.pronouncer())),
        ("sound mapper", Some(models.sound_mapper())),
        ("katakana writer", Some(models.katakana_writer())),
        ("OCR model", Some(models.ocr_model())),
    ] {
        if let Some(f) = fst {
            eprintln!("{name}: {} states, {} arcs", f.num_states(), f.num_arcs());
        }
    }
    Ok(())
}

fn load_models(config: &PipelineConfig, flags: &DecodeFlags) -> Result<ModelSet, CliError> {
    match &flags.models {
        Some(dir) => ModelSet::load(dir).map_err(resource_error),
        None => ModelSet::build(&config.resources()?).map_err(resource_error),
    }
}

fn options(config: &PipelineConfig, flags: &DecodeFlags) -> Result<DecodeOptions, CliError> {
    let k = flags.k.unwrap_or(config.decode.k);
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    Ok(DecodeOptions {
        k,
        use_ocr_model: flags.ocr || config.decode.ocr,
        name_mode: flags.names || config.decode.names,
        dedupe_outputs: config.decode.dedupe,
    })
}

/// Result lines for one input line, and whether it decoded.
fn decode_line(number: usize, raw: &[u8], models: &ModelSet, opts: &DecodeOptions) -> (String, bool) {
    let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
    let text = match std::str::from_utf8(raw) {
        Ok(t) => t,
        Err(e) => return (format!("# line {number}: error: invalid UTF-8 ({e})\n"), false),
    };
    match decode::decode(text, models, opts) {
        Ok(d) => {
            let mut out = String::new();
            for (rank, c) in d.candidates.iter().enumerate() {
                out.push_str(&format!("{}\t{:.6e}\t{}\n", rank + 1, c.probability, c.text()));
            }
            if let Some(fb) = d.fallback {
                out.push_str("0\t0\t<no-analysis>\n");
                out.push_str(&format!(
                    "# sounds: {} | phonemes: {}\n",
                    if fb.sounds.is_empty() { "-".to_string() } else { fb.sounds.join(" ") },
                    if fb.phonemes.is_empty() { "-".to_string() } else { fb.phonemes.join(" ") },
                ));
            }
            (out, true)
        }
        Err(e) => (format!("# line {number}: error: {e}\n"), false),
    }
}

pub fn decode(config: &PipelineConfig, flags: &DecodeFlags, input: Option<&Path>) -> Result<(), CliError> {
    let opts = options(config, flags)?;
    let models = load_models(config, flags)?;
    let mut bytes = Vec::new();
    match input {
        Some(p) => bytes = fs::read(p).map_err(|e| CliError::Resource(format!("{}: {e}", p.display())))?,
        None => {
            io::stdin().read_to_end(&mut bytes).map_err(resource_error)?;
        }
    }
    let lines: Vec<(usize, &[u8])> = bytes
        .split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.iter().all(u8::is_ascii_whitespace))
        .collect();
    let results: Vec<(String, bool)> = lines
        .par_iter()
        .map(|&(n, l)| decode_line(n, l, &models, &opts))
        .collect();
    let mut stdout = io::stdout().lock();
    for (text, ok) in &results {
        if !ok {
            eprint!("{text}");
        }
        stdout.write_all(text.as_bytes()).map_err(resource_error)?;
    }
    if !results.is_empty() && results.iter().all(|(_, ok)| !ok) {
        return Err(CliError::Resource("no input line could be decoded".into()));
    }
    Ok(())
}

fn print_report(label: &str, report: &EvalReport) {
    println!("## {label}");
    for item in &report.items {
        let verdict = if item.top1_correct {
            "correct"
        } else if item.topk_correct {
            "in-top-k"
        } else {
            "wrong"
        };
        let top = match (&item.top, &item.error) {
            (_, Some(e)) => format!("error: {e}"),
            (Some(t), None) => t.clone(),
            (None, None) => "<no-analysis>".to_string(),
        };
        println!("{verdict}\t{}\t{}\t{top}", item.input, item.reference);
    }
    println!(
        "top-1: {}/{} = {:.4}\ttop-{}: {}/{} = {:.4}",
        report.top1_correct(),
        report.total(),
        report.top1_accuracy(),
        report.k,
        report.topk_correct(),
        report.total(),
        report.topk_accuracy()
    );
}

pub fn eval(config: &PipelineConfig, flags: &DecodeFlags, args: &EvalArgs) -> Result<(), CliError> {
    if let Some(rate) = args.noise_rate {
        if !(0.0..=1.0).contains(&rate) {
            return Err(CliError::Usage(format!("--noise-rate {rate} is outside [0, 1]")));
        }
    }
    let opts = options(config, flags)?;
    let text = match &args.testset {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Resource(format!("{}: {e}", p.display())))?,
        None => config.read(config.resources.testset.as_ref(), bundled::DESK_EVAL)?,
    };
    let set = parse_eval_set(&text).map_err(resource_error)?;
    if set.is_empty() {
        return Err(CliError::Resource("test set is empty".into()));
    }
    let models = load_models(config, flags)?;
    let conf = config.confusion()?;
    let base = EvalOptions {
        decode: opts,
        ..EvalOptions::default()
    };
    let run = |o: &EvalOptions| evaluate(&models, &conf, &set, o).map_err(resource_error);
    print_report("clean", &run(&base)?);
    if args.strip_separators {
        print_report(
            "separators removed",
            &run(&EvalOptions {
                strip_separators: true,
                ..base.clone()
            })?,
        );
    }
    if let Some(rate) = args.noise_rate {
        print_report(
            &format!("OCR noise {rate} (seed {})", args.seed),
            &run(&EvalOptions {
                noise: Some(Noise { rate, seed: args.seed }),
                ..base.clone()
            })?,
        );
    }
    Ok(())
}
