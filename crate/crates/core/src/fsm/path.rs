use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::{Fst, Label, StateId, Transition, Weight, EPSILON};

/// A successful start-to-final walk through a machine.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    /// Arcs in walk order, each paired with its source state.
    pub arcs: Vec<(StateId, Transition)>,
    /// Sum of arc costs plus the final cost.
    pub cost: Weight,
    /// Input labels with epsilons removed.
    pub input: Vec<Label>,
    /// Output labels with epsilons removed.
    pub output: Vec<Label>,
}

impl Path {
    pub fn input_labels(&self, fst: &Fst) -> Vec<String> {
        fst.input_symbols().decode(&self.input)
    }

    pub fn output_labels(&self, fst: &Fst) -> Vec<String> {
        fst.output_symbols().decode(&self.output)
    }
}

/// Costs closer than this (relative) are treated as ties.
const TIE_TOLERANCE: f64 = 1e-10;

/// Upper bound on heap pops per extraction, guarding against machines with
/// huge numbers of near-equal paths.
const MAX_POPS: usize = 5_000_000;

/// Extra complete paths examined to settle a tie group at the k-th cost.
const MAX_TIE_PATHS: usize = 10_000;

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Min-heap entry over `f64` priorities with FIFO tie order.
struct Entry {
    priority: f64,
    seq: u64,
    node: usize,
    complete: bool,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Cost of the cheapest path from each state to a final state (infinite
/// where none exists), by Dijkstra's algorithm over reversed arcs.
pub fn shortest_distance_to_final(fst: &Fst) -> Vec<f64> {
    let n = fst.num_states();
    let mut reverse: Vec<Vec<(StateId, f64)>> = vec![Vec::new(); n];
    for s in fst.states() {
        for arc in fst.arcs(s) {
            reverse[arc.next as usize].push((s, arc.weight.cost()));
        }
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    for s in fst.states() {
        if let Some(w) = fst.final_weight(s) {
            dist[s as usize] = w.cost();
            heap.push(Entry {
                priority: w.cost(),
                seq,
                node: s as usize,
                complete: false,
            });
            seq += 1;
        }
    }
    while let Some(Entry { priority, node, .. }) = heap.pop() {
        if done[node] || priority > dist[node] {
            continue;
        }
        done[node] = true;
        for &(p, c) in &reverse[node] {
            let candidate = priority + c;
            if candidate < dist[p as usize] {
                dist[p as usize] = candidate;
                heap.push(Entry {
                    priority: candidate,
                    seq,
                    node: p as usize,
                    complete: false,
                });
                seq += 1;
            }
        }
    }
    dist
}

/// The minimum-cost successful path, or `None` when the machine accepts
/// nothing. Equal-cost paths are ordered by output labels, then input
/// labels.
pub fn best_path(fst: &Fst) -> Option<Path> {
    k_best(fst, 1).into_iter().next()
}

/// The `k` cheapest successful paths in non-decreasing cost order. Paths
/// are distinct as arc sequences; fewer are returned when fewer exist.
pub fn k_best(fst: &Fst, k: usize) -> Vec<Path> {
    extract(fst, k, false)
}

/// Like [`k_best`], but keeps only the cheapest path for each distinct
/// output-label sequence.
pub fn k_best_unique(fst: &Fst, k: usize) -> Vec<Path> {
    extract(fst, k, true)
}

struct Node {
    state: StateId,
    parent: Option<usize>,
    arc: Option<Transition>,
    cost: f64,
}

/// Best-first enumeration of partial paths using the exact distance to a
/// final state as the heuristic, so complete paths leave the heap in cost
/// order. Each heap node is a distinct walk prefix, which makes every
/// produced path a distinct arc sequence, cycles included.
fn extract(fst: &Fst, k: usize, unique_outputs: bool) -> Vec<Path> {
    let Some(start) = fst.start() else {
        return Vec::new();
    };
    if k == 0 {
        return Vec::new();
    }
    let dist = shortest_distance_to_final(fst);
    if !dist[start as usize].is_finite() {
        return Vec::new();
    }

    let mut nodes = vec![Node {
        state: start,
        parent: None,
        arc: None,
        cost: 0.0,
    }];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Entry {
        priority: dist[start as usize],
        seq,
        node: 0,
        complete: false,
    });

    let mut found: Vec<Path> = Vec::new();
    let mut seen_outputs: HashSet<Vec<Label>> = HashSet::new();
    let mut cutoff: Option<f64> = None;
    let mut tie_paths = 0usize;
    let mut pops = 0usize;

    while let Some(entry) = heap.pop() {
        pops += 1;
        if pops > MAX_POPS {
            log::warn!("path extraction stopped after {MAX_POPS} heap pops");
            break;
        }
        if let Some(c) = cutoff {
            if entry.priority > c && !ties(entry.priority, c) {
                break;
            }
        }
        let node = &nodes[entry.node];
        if entry.complete {
            let path = build_path(&nodes, entry.node, entry.priority);
            if unique_outputs && !seen_outputs.insert(path.output.clone()) {
                continue;
            }
            found.push(path);
            if cutoff.is_some() {
                tie_paths += 1;
                if tie_paths >= MAX_TIE_PATHS {
                    break;
                }
            } else if found.len() >= k {
                cutoff = Some(entry.priority);
            }
            continue;
        }
        let (state, cost) = (node.state, node.cost);
        if let Some(w) = fst.final_weight(state) {
            seq += 1;
            heap.push(Entry {
                priority: cost + w.cost(),
                seq,
                node: entry.node,
                complete: true,
            });
        }
        for arc in fst.arcs(state) {
            let h = dist[arc.next as usize];
            if !h.is_finite() {
                continue;
            }
            let g = cost + arc.weight.cost();
            nodes.push(Node {
                state: arc.next,
                parent: Some(entry.node),
                arc: Some(*arc),
                cost: g,
            });
            seq += 1;
            heap.push(Entry {
                priority: g + h,
                seq,
                node: nodes.len() - 1,
                complete: false,
            });
        }
    }

    order_ties(&mut found);
    found.truncate(k);
    found
}

/// Reorders runs of equal-cost paths by (output, input) labels.
fn order_ties(paths: &mut [Path]) {
    let mut i = 0;
    while i < paths.len() {
        let base = paths[i].cost.cost();
        let mut j = i + 1;
        while j < paths.len() && ties(paths[j].cost.cost(), base) {
            j += 1;
        }
        paths[i..j].sort_by(|a, b| {
            a.output
                .cmp(&b.output)
                .then_with(|| a.input.cmp(&b.input))
        });
        i = j;
    }
}

fn build_path(nodes: &[Node], leaf: usize, total: f64) -> Path {
    let mut arcs = Vec::new();
    let mut cursor = leaf;
    while let Some(parent) = nodes[cursor].parent {
        let arc = nodes[cursor].arc.expect("non-root nodes carry an arc");
        arcs.push((nodes[parent].state, arc));
        cursor = parent;
    }
    arcs.reverse();
    let input = arcs
        .iter()
        .map(|(_, a)| a.ilabel)
        .filter(|&l| l != EPSILON)
        .collect();
    let output = arcs
        .iter()
        .map(|(_, a)| a.olabel)
        .filter(|&l| l != EPSILON)
        .collect();
    Path {
        arcs,
        cost: Weight::from_cost(total.max(0.0)).expect("sums of valid costs are valid"),
        input,
        output,
    }
}
