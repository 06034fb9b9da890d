use std::collections::{BTreeMap, HashMap};

use super::align::AlignmentLattice;
use super::{SoundPairCorpus, TrainingError};
use crate::models::SoundMappingTable;

/// Stopping rule and alignment shape for [`em_train`].
#[derive(Clone, Debug, PartialEq)]
pub struct EmConfig {
    /// Longest Japanese run one English phoneme may cover; `None` for no
    /// limit.
    pub max_span: Option<usize>,
    pub max_iters: usize,
    /// Training stops once no probability moves by this much or more.
    pub tol: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            max_span: Some(4),
            max_iters: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EmOutcome {
    pub table: SoundMappingTable,
    pub iterations: usize,
    pub converged: bool,
    /// Corpus log-likelihood under the table produced by each iteration.
    pub log_likelihoods: Vec<f64>,
    /// Indices of corpus pairs that admit no alignment.
    pub skipped: Vec<usize>,
}

impl EmOutcome {
    pub fn final_log_likelihood(&self) -> f64 {
        self.log_likelihoods.last().copied().unwrap_or(0.0)
    }
}

/// Interned `(phoneme, sounds)` mappings grouped by phoneme.
struct Mappings {
    keys: Vec<(String, Vec<String>)>,
    index: HashMap<(String, Vec<String>), usize>,
}

impl Mappings {
    fn id(&mut self, phoneme: &str, sounds: &[String]) -> usize {
        let key = (phoneme.to_string(), sounds.to_vec());
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        self.keys.push(key.clone());
        self.index.insert(key, self.keys.len() - 1);
        self.keys.len() - 1
    }

    /// Per-phoneme normalization of `counts`.
    fn normalize(&self, counts: &[f64]) -> Vec<f64> {
        let mut mass: HashMap<&str, f64> = HashMap::new();
        for (k, c) in self.keys.iter().zip(counts) {
            *mass.entry(k.0.as_str()).or_default() += c;
        }
        self.keys
            .iter()
            .zip(counts)
            .map(|(k, c)| {
                let total = mass[k.0.as_str()];
                if total > 0.0 {
                    c / total
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Estimates P(Japanese sounds | English phoneme) by EM over all
/// alignments of each pair.
///
/// The first iteration gives every alignment of a pair equal weight; later
/// iterations weight alignments by the product of the current mapping
/// probabilities. Pairs without alignments are skipped.
pub fn em_train(corpus: &SoundPairCorpus, config: &EmConfig) -> Result<EmOutcome, TrainingError> {
    if config.max_span == Some(0) {
        return Err(TrainingError::InvalidConfig("max_span must be at least 1".to_string()));
    }
    if config.tol.is_nan() || config.tol < 0.0 {
        return Err(TrainingError::InvalidConfig(format!("tolerance {} is not valid", config.tol)));
    }
    let mut mappings = Mappings {
        keys: Vec::new(),
        index: HashMap::new(),
    };
    let mut lattices = Vec::new();
    let mut skipped = Vec::new();
    for (i, pair) in corpus.pairs().iter().enumerate() {
        match AlignmentLattice::new(&pair.english, &pair.japanese, config.max_span, |p, s| mappings.id(p, s)) {
            Some(lat) => lattices.push(lat),
            None => {
                log::warn!(
                    "skipping unalignable pair {i}: ({}) / ({})",
                    pair.english.join(" "),
                    pair.japanese.join(" ")
                );
                skipped.push(i);
            }
        }
    }
    if lattices.is_empty() {
        let listed = skipped
            .iter()
            .map(|&i| {
                let p = &corpus.pairs()[i];
                format!("({}) / ({})", p.english.join(" "), p.japanese.join(" "))
            })
            .collect();
        return Err(TrainingError::NoAlignablePairs(listed));
    }

    let n = mappings.keys.len();
    let mut candidates = vec![0.0; n];
    for lat in &lattices {
        for id in lat.mapping_ids() {
            candidates[id] = 1.0;
        }
    }
    // Reference point for the first change: each candidate equally likely.
    let mut prob = mappings.normalize(&candidates);
    let ones = vec![1.0; n];
    let mut log_likelihoods = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        let weights = if iterations == 0 { &ones } else { &prob };
        let mut counts = vec![0.0; n];
        let mut ll = 0.0;
        for lat in &lattices {
            let ex = lat.expectation(weights);
            ll += ex.total.ln();
            for (id, c) in ex.counts {
                counts[id] += c;
            }
        }
        if iterations > 0 {
            log_likelihoods.push(ll);
        }
        let next = mappings.normalize(&counts);
        let delta = next
            .iter()
            .zip(&prob)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prob = next;
        iterations += 1;
        if delta < config.tol {
            converged = true;
            break;
        }
    }
    let ll: f64 = lattices.iter().map(|l| l.expectation(&prob).total.ln()).sum();
    log_likelihoods.push(ll);

    let mut rows: BTreeMap<String, Vec<(Vec<String>, f64)>> = BTreeMap::new();
    for ((ph, sounds), &p) in mappings.keys.iter().zip(&prob) {
        if p > 0.0 {
            rows.entry(ph.clone()).or_default().push((sounds.clone(), p));
        }
    }
    for row in rows.values_mut() {
        row.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    }
    Ok(EmOutcome {
        table: SoundMappingTable::from_rows(rows),
        iterations,
        converged,
        log_likelihoods,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::training::SoundPair;

    fn corpus(pairs: &[(&str, &str)]) -> SoundPairCorpus {
        SoundPairCorpus::new(pairs.iter().map(|(e, j)| SoundPair::new(e, j)).collect()).unwrap()
    }

    #[test]
    fn forced_alignment_converges_at_once() {
        let out = em_train(&corpus(&[("K", "k")]), &EmConfig::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(out.converged);
        assert_eq!(out.table.probability("K", &["k"]), 1.0);
    }

    #[test]
    fn first_iteration_splits_low_evenly() {
        let cfg = EmConfig {
            max_iters: 1,
            ..EmConfig::default()
        };
        let out = em_train(&corpus(&[("L OW", "r o o")]), &cfg).unwrap();
        assert_eq!(out.table.probability("L", &["r"]), 0.5);
        assert_eq!(out.table.probability("L", &["r", "o"]), 0.5);
        assert_eq!(out.table.probability("OW", &["o", "o"]), 0.5);
    }

    #[test]
    fn unalignable_pairs_are_skipped() {
        let out = em_train(
            &corpus(&[("B AA R B ER SH AA P", "b a a b a a"), ("K", "k")]),
            &EmConfig::default(),
        )
        .unwrap();
        assert_eq!(out.skipped, vec![0]);
        let err = em_train(&corpus(&[("B AA R B ER SH AA P", "b a a b a a")]), &EmConfig::default());
        assert!(matches!(err, Err(TrainingError::NoAlignablePairs(v)) if v.len() == 1));
    }

    #[test]
    fn rows_sorted_by_probability() {
        let out = em_train(&corpus(&[("L OW", "r o o"), ("L", "r"), ("OW", "o o")]), &EmConfig::default()).unwrap();
        for (_, row) in out.table.rows() {
            assert!(row.windows(2).all(|w| w[0].1 >= w[1].1));
            assert!((row.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
