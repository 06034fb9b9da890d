//! Independent oracles shared by the integration tests: random small
//! machines and exhaustive path enumeration.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use backtrans::fsm::{Fst, Label, SymbolTable, Transition, Weight, EPSILON};
use rand::Rng;

pub type Labels = Vec<Label>;

/// Every successful path of an acyclic machine as (input, output, cost),
/// epsilons removed.
pub fn enumerate_paths(fst: &Fst) -> Vec<(Labels, Labels, f64)> {
    let mut out = Vec::new();
    let Some(start) = fst.start() else {
        return out;
    };
    let mut stack = vec![(start, Vec::new(), Vec::new(), 0.0f64, 0usize)];
    while let Some((s, i, o, c, depth)) = stack.pop() {
        assert!(depth < 64, "enumerate_paths needs an acyclic machine");
        if let Some(w) = fst.final_weight(s) {
            out.push((i.clone(), o.clone(), c + w.cost()));
        }
        for arc in fst.arcs(s) {
            let mut ni = i.clone();
            let mut no = o.clone();
            if arc.ilabel != EPSILON {
                ni.push(arc.ilabel);
            }
            if arc.olabel != EPSILON {
                no.push(arc.olabel);
            }
            stack.push((arc.next, ni, no, c + arc.weight.cost(), depth + 1));
        }
    }
    out
}

/// Minimum cost per (input, output) pair.
pub fn relation(paths: &[(Labels, Labels, f64)]) -> HashMap<(Labels, Labels), f64> {
    let mut rel: HashMap<(Labels, Labels), f64> = HashMap::new();
    for (i, o, c) in paths {
        let e = rel.entry((i.clone(), o.clone())).or_insert(f64::INFINITY);
        *e = e.min(*c);
    }
    rel
}

/// Brute-force composition: pair every path of `a` with every path of `b`
/// whose input equals the first path's output.
pub fn compose_by_enumeration(a: &Fst, b: &Fst) -> HashMap<(Labels, Labels), f64> {
    let pa = enumerate_paths(a);
    let pb = enumerate_paths(b);
    let mut rel: HashMap<(Labels, Labels), f64> = HashMap::new();
    for (x, y, ca) in &pa {
        for (y2, z, cb) in &pb {
            if y == y2 {
                let e = rel.entry((x.clone(), z.clone())).or_insert(f64::INFINITY);
                *e = e.min(ca + cb);
            }
        }
    }
    rel
}

pub fn table(labels: &[&str]) -> Arc<SymbolTable> {
    Arc::new(SymbolTable::from_labels(labels).unwrap())
}

/// Random acyclic machine: arcs only go from lower to higher state ids,
/// state 0 is the start, at least one state is final.
pub fn random_acyclic<R: Rng>(
    rng: &mut R,
    isyms: &Arc<SymbolTable>,
    osyms: &Arc<SymbolTable>,
    max_states: usize,
    max_arcs: usize,
) -> Fst {
    let mut f = Fst::new(isyms.clone(), osyms.clone());
    let n = rng.random_range(2..=max_states);
    for _ in 0..n {
        f.add_state();
    }
    f.set_start(0).unwrap();
    let mut any_final = false;
    for s in 1..n as u32 {
        if rng.random_bool(0.4) {
            f.set_final(s, Weight::from_cost(rng.random_range(0.0..1.0)).unwrap())
                .unwrap();
            any_final = true;
        }
    }
    if !any_final {
        f.set_final(n as u32 - 1, Weight::ONE).unwrap();
    }
    let arcs = rng.random_range(1..=max_arcs);
    for _ in 0..arcs {
        let src = rng.random_range(0..n as u32 - 1);
        let dst = rng.random_range(src + 1..n as u32);
        let il = rng.random_range(0..isyms.len() as u32);
        let ol = rng.random_range(0..osyms.len() as u32);
        let w = Weight::from_cost(rng.random_range(0.0..3.0)).unwrap();
        f.add_arc(src, Transition::new(il, ol, w, dst)).unwrap();
    }
    f
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Every alignment of `m` phonemes onto `n` sounds as a list of run
/// lengths, by plain recursion.
pub fn enumerate_alignments(m: usize, n: usize, max_span: Option<usize>) -> Vec<Vec<usize>> {
    fn go(m: usize, n: usize, span: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for s in 1..=span.min(n) {
            prefix.push(s);
            go(m - 1, n - s, span, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, max_span.unwrap_or(usize::MAX), &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

pub type MappingKey = (String, Vec<String>);

/// EM written directly from its definition: list every alignment of every
/// pair, weight alignments (equally on the first pass, by the product of
/// current probabilities afterwards), collect weighted mapping counts and
/// normalize per phoneme. Runs exactly `iters` passes.
pub fn enumeration_em(
    pairs: &[(Vec<String>, Vec<String>)],
    max_span: Option<usize>,
    iters: usize,
) -> HashMap<MappingKey, f64> {
    let aligned: Vec<Vec<Vec<MappingKey>>> = pairs
        .iter()
        .map(|(e, j)| {
            enumerate_alignments(e.len(), j.len(), max_span)
                .into_iter()
                .map(|spans| {
                    let mut t = 0;
                    spans
                        .iter()
                        .zip(e)
                        .map(|(&s, ph)| {
                            let key = (ph.clone(), j[t..t + s].to_vec());
                            t += s;
                            key
                        })
                        .collect()
                })
                .collect()
        })
        .filter(|a: &Vec<Vec<MappingKey>>| !a.is_empty())
        .collect();
    let mut prob: HashMap<MappingKey, f64> = HashMap::new();
    for it in 0..iters {
        let mut counts: HashMap<MappingKey, f64> = HashMap::new();
        for alignments in &aligned {
            let weights: Vec<f64> = alignments
                .iter()
                .map(|a| {
                    if it == 0 {
                        1.0
                    } else {
                        a.iter().map(|k| prob.get(k).copied().unwrap_or(0.0)).product()
                    }
                })
                .collect();
            let total: f64 = weights.iter().sum();
            for (a, w) in alignments.iter().zip(&weights) {
                for k in a {
                    *counts.entry(k.clone()).or_default() += w / total;
                }
            }
        }
        let mut mass: HashMap<String, f64> = HashMap::new();
        for (k, c) in &counts {
            *mass.entry(k.0.clone()).or_default() += c;
        }
        prob = counts
            .into_iter()
            .filter(|(_, c)| *c > 0.0)
            .map(|(k, c)| {
                let m = mass[&k.0];
                (k, c / m)
            })
            .collect();
    }
    prob
}

/// Corpus log-likelihood of `prob` by enumeration.
pub fn enumeration_log_likelihood(
    pairs: &[(Vec<String>, Vec<String>)],
    max_span: Option<usize>,
    prob: &HashMap<MappingKey, f64>,
) -> f64 {
    let mut ll = 0.0;
    for (e, j) in pairs {
        let mut total = 0.0;
        for spans in enumerate_alignments(e.len(), j.len(), max_span) {
            let mut t = 0;
            let mut w = 1.0;
            for (&s, ph) in spans.iter().zip(e) {
                w *= prob.get(&(ph.clone(), j[t..t + s].to_vec())).copied().unwrap_or(0.0);
                t += s;
            }
            total += w;
        }
        if total > 0.0 {
            ll += total.ln();
        }
    }
    ll
}

/// Random alignable-or-not pairs over a few phonemes and sounds.
pub fn random_pairs<R: Rng>(rng: &mut R, count: usize, max_m: usize, max_n: usize) -> Vec<(Vec<String>, Vec<String>)> {
    const E: [&str; 4] = ["K", "AA", "L", "OW"];
    const J: [&str; 4] = ["k", "a", "r", "o"];
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=max_m);
            let n = rng.random_range(1..=max_n);
            (
                (0..m).map(|_| E[rng.random_range(0..E.len())].to_string()).collect(),
                (0..n).map(|_| J[rng.random_range(0..J.len())].to_string()).collect(),
            )
        })
        .collect()
}
