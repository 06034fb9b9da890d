use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::tsv::{probability, records};
use super::ModelError;
use crate::fsm::{Fst, SymbolTable, Transition, Weight};

/// Share of recognitions that go wrong in the default noisy table.
pub const DEFAULT_NOISE: f64 = 0.07;

/// Visually confusable groups. Within a group every glyph may be misread
/// as any other member; non-katakana look-alikes only ever appear as
/// misreadings.
pub const CONFUSABLE_GROUPS: &[&[&str]] = &[
    &["シ", "ツ"],
    &["ソ", "ン"],
    &["ク", "タ", "ワ"],
    &["ウ", "ワ"],
    &["ア", "マ"],
    &["チ", "テ"],
    &["ス", "ヌ"],
    &["コ", "ユ"],
    &["ャ", "ヤ"],
    &["ュ", "ユ"],
    &["ョ", "ヨ"],
    &["ッ", "ツ"],
    &["ァ", "ア"],
    &["ィ", "イ"],
    &["ェ", "エ"],
    &["ォ", "オ"],
    &["ー", "一"],
    &["ロ", "口"],
    &["カ", "力"],
    &["エ", "工"],
    &["ニ", "二"],
    &["ハ", "八"],
    &["ト", "卜"],
];

/// Per-glyph distribution over recognized glyphs. Glyphs without a row
/// are recognized correctly with probability one.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConfusionTable {
    rows: BTreeMap<String, Vec<(String, f64)>>,
}

const MASS_SLACK: f64 = 1e-6;

impl ConfusionTable {
    /// The noiseless table.
    pub fn identity() -> Self {
        ConfusionTable::default()
    }

    /// Spreads `noise` evenly over each glyph's confusable partners in
    /// `groups`, keeping `1 - noise` on the glyph itself. Only glyphs in
    /// `alphabet` get rows.
    pub fn from_groups(groups: &[&[&str]], noise: f64, alphabet: &SymbolTable) -> Result<Self, ModelError> {
        if !(0.0..1.0).contains(&noise) {
            return Err(ModelError::InvalidProbability {
                context: "OCR noise rate".to_string(),
                value: noise,
            });
        }
        let mut partners: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for group in groups {
            for &g in *group {
                if alphabet.get(g).is_none() {
                    continue;
                }
                let entry = partners.entry(g).or_default();
                for &h in *group {
                    if h != g && !entry.contains(&h) {
                        entry.push(h);
                    }
                }
            }
        }
        let mut table = ConfusionTable::default();
        if noise == 0.0 {
            return Ok(table);
        }
        for (g, ps) in partners {
            if ps.is_empty() {
                continue;
            }
            let mut row = vec![(g.to_string(), 1.0 - noise)];
            for p in &ps {
                row.push((p.to_string(), noise / ps.len() as f64));
            }
            table.rows.insert(g.to_string(), row);
        }
        Ok(table)
    }

    /// Parses `glyph<TAB>recognized<TAB>probability` lines. Every listed
    /// glyph's row must sum to one and include the glyph itself.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        const RES: &str = "confusion table";
        let mut table = ConfusionTable::default();
        let mut first_line: BTreeMap<String, usize> = BTreeMap::new();
        for rec in records(RES, text, 3, 3) {
            let (line, f) = rec?;
            for g in [f[0], f[1]] {
                if g.chars().count() != 1 {
                    return Err(ModelError::parse(RES, line, format!("`{g}` is not one glyph")));
                }
            }
            let p = probability(RES, line, f[2])?;
            first_line.entry(f[0].to_string()).or_insert(line);
            let row = table.rows.entry(f[0].to_string()).or_default();
            if row.iter().any(|(h, _)| h == f[1]) {
                return Err(ModelError::parse(RES, line, format!("duplicate entry {} -> {}", f[0], f[1])));
            }
            row.push((f[1].to_string(), p));
        }
        for (g, row) in &table.rows {
            let line = first_line[g];
            let mass: f64 = row.iter().map(|(_, p)| p).sum();
            if (mass - 1.0).abs() > MASS_SLACK {
                return Err(ModelError::parse(
                    RES,
                    line,
                    format!("row for `{g}` sums to {mass}, expected 1"),
                ));
            }
            if !row.iter().any(|(h, _)| h == g) {
                return Err(ModelError::parse(RES, line, format!("row for `{g}` lacks an identity entry")));
            }
        }
        Ok(table)
    }

    pub fn row(&self, glyph: &str) -> Option<&[(String, f64)]> {
        self.rows.get(glyph).map(Vec::as_slice)
    }

    pub fn is_identity(&self) -> bool {
        self.rows.values().all(|r| r.len() == 1)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# glyph\trecognized\tprobability\n");
        for (g, row) in &self.rows {
            for (h, p) in row {
                writeln!(out, "{g}\t{h}\t{p}").expect("writing to a String");
            }
        }
        out
    }

    /// Recognized-glyph alphabet: `katakana` plus every misreading target.
    pub fn observed_table(&self, katakana: &SymbolTable) -> SymbolTable {
        let mut t = katakana.clone();
        for row in self.rows.values() {
            for (h, _) in row {
                t.add(h).expect("single glyphs are valid labels");
            }
        }
        t
    }
}

/// Builds the single-state glyph-to-recognized-glyph transducer.
pub fn build_ocr_model(
    conf: &ConfusionTable,
    katakana: &Arc<SymbolTable>,
    observed: &Arc<SymbolTable>,
) -> Result<Fst, ModelError> {
    let mut fst = Fst::new(katakana.clone(), observed.clone());
    let s = fst.add_state();
    fst.set_start(s)?;
    fst.set_final(s, Weight::ONE)?;
    for (label, glyph) in katakana.iter() {
        let identity = [(glyph.to_string(), 1.0)];
        let row = conf.row(glyph).unwrap_or(&identity);
        for (h, p) in row {
            let out = observed
                .get(h)
                .ok_or_else(|| ModelError::Inconsistent(format!("OCR output glyph `{h}` missing")))?;
            fst.add_arc(s, Transition::new(label, out, Weight::from_probability(*p)?, s))?;
        }
    }
    for g in conf.rows.keys() {
        if katakana.get(g).is_none() {
            return Err(ModelError::Inconsistent(format!(
                "katakana writer → OCR model: confusion table glyph `{g}` is not a katakana glyph"
            )));
        }
    }
    Ok(fst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{best_path, compose, k_best, linear_acceptor, trim};

    fn katakana() -> Arc<SymbolTable> {
        Arc::new(SymbolTable::from_labels(["シ", "ツ", "ア"]).unwrap())
    }

    #[test]
    fn identity_table_is_cost_free_identity() {
        let k = katakana();
        let m = build_ocr_model(&ConfusionTable::identity(), &k, &k).unwrap();
        assert_eq!(m.num_arcs(), 3);
        for a in m.arcs(0) {
            assert_eq!(a.ilabel, a.olabel);
            assert_eq!(a.weight, Weight::ONE);
        }
        let seq = linear_acceptor(&["シ", "ア"], &k).unwrap();
        let before = best_path(&seq).unwrap();
        let c = compose(&seq, &m).unwrap();
        let after = best_path(&c).unwrap();
        assert_eq!(before.output, after.output);
        assert_eq!(after.cost, Weight::ONE);
    }

    #[test]
    fn table_entry_becomes_arc() {
        let conf = ConfusionTable::parse("シ\tシ\t0.93\nシ\tツ\t0.07\n").unwrap();
        let k = katakana();
        let obs = Arc::new(conf.observed_table(&k));
        let m = build_ocr_model(&conf, &k, &obs).unwrap();
        let (si, tsu) = (k.get("シ").unwrap(), obs.get("ツ").unwrap());
        let arc = m.arcs(0).iter().find(|a| a.ilabel == si && a.olabel == tsu).unwrap();
        assert!((arc.weight.cost() - -(0.07f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn output_distribution_sums_to_one() {
        let conf = ConfusionTable::parse("シ\tシ\t0.93\nシ\tツ\t0.07\nツ\tツ\t0.9\nツ\tシ\t0.1\n").unwrap();
        let k = Arc::new(SymbolTable::from_labels(["シ", "ツ"]).unwrap());
        let obs = Arc::new(conf.observed_table(&k));
        let m = build_ocr_model(&conf, &k, &obs).unwrap();
        for g in ["シ", "ツ"] {
            let c = trim(&compose(&linear_acceptor(&[g], &k).unwrap(), &m).unwrap());
            let total: f64 = k_best(&c, 100).iter().map(|p| p.cost.probability()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_must_be_distributions() {
        assert!(ConfusionTable::parse("シ\tツ\t1\n").is_err());
        assert!(ConfusionTable::parse("シ\tシ\t0.5\n").is_err());
        assert!(ConfusionTable::parse("シシ\tシ\t1\n").is_err());
    }

    #[test]
    fn bundled_table_matches_groups() {
        let spell = crate::models::KatakanaSpellingTable::parse(crate::models::bundled::SPELLING).unwrap();
        let glyphs = spell.glyph_table();
        let bundled = ConfusionTable::parse(crate::models::bundled::CONFUSION).unwrap();
        let generated = ConfusionTable::from_groups(CONFUSABLE_GROUPS, DEFAULT_NOISE, &glyphs).unwrap();
        assert_eq!(bundled.rows.keys().collect::<Vec<_>>(), generated.rows.keys().collect::<Vec<_>>());
        for (g, row) in &bundled.rows {
            let other = &generated.rows[g];
            assert_eq!(row.len(), other.len(), "{g}");
            for ((a, p), (b, q)) in row.iter().zip(other) {
                assert_eq!(a, b);
                assert!((p - q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn groups_spread_noise() {
        let k = SymbolTable::from_labels(["ク", "タ", "ワ"]).unwrap();
        let t = ConfusionTable::from_groups(&[&["ク", "タ", "ワ"]], 0.07, &k).unwrap();
        let row = t.row("ク").unwrap();
        assert_eq!(row.len(), 3);
        assert!((row.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(ConfusionTable::from_groups(CONFUSABLE_GROUPS, 0.0, &k).unwrap().is_identity());
    }
}
