use std::collections::{HashMap, VecDeque};

use super::fst::same_alphabet;
use super::{Fst, FsmError, StateId, Transition, EPSILON};

/// Filter state of the epsilon-sequencing filter. After the right machine
/// has moved alone, the left machine may not move alone again until the
/// next matched step, so each pair of paths is realized exactly once.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Filter {
    Open,
    RightOnly,
}

/// Composes `left` (X→Y) with `right` (Y→Z) into a machine over X→Z.
///
/// The cost of a composed path is the sum of the costs of the two paths it
/// pairs. Epsilon outputs of `left` and epsilon inputs of `right` advance
/// one side alone. The result is not trimmed.
pub fn compose(left: &Fst, right: &Fst) -> Result<Fst, FsmError> {
    if !same_alphabet(left.output_symbols(), right.input_symbols()) {
        return Err(FsmError::AlphabetMismatch(format!(
            "left output alphabet ({} symbols) differs from right input alphabet ({} symbols)",
            left.output_symbols().len(),
            right.input_symbols().len()
        )));
    }
    let mut out = Fst::new(left.input_symbols().clone(), right.output_symbols().clone());
    let (Some(ls), Some(rs)) = (left.start(), right.start()) else {
        return Ok(out);
    };

    // right-hand arcs grouped by input label for matching
    let right_index: Vec<Vec<Transition>> = right
        .states()
        .map(|s| {
            let mut arcs = right.arcs(s).to_vec();
            arcs.sort_by_key(|a| a.ilabel);
            arcs
        })
        .collect();
    let matching = |state: StateId, label| {
        let arcs = &right_index[state as usize];
        let lo = arcs.partition_point(|a| a.ilabel < label);
        let hi = arcs.partition_point(|a| a.ilabel <= label);
        &arcs[lo..hi]
    };

    let mut ids: HashMap<(StateId, StateId, Filter), StateId> = HashMap::new();
    let mut queue: VecDeque<((StateId, StateId, Filter), StateId)> = VecDeque::new();
    let mut intern = |key: (StateId, StateId, Filter),
                      out: &mut Fst,
                      queue: &mut VecDeque<((StateId, StateId, Filter), StateId)>| {
        *ids.entry(key).or_insert_with(|| {
            let id = out.add_state();
            queue.push_back((key, id));
            id
        })
    };
    let start = intern((ls, rs, Filter::Open), &mut out, &mut queue);
    out.set_start(start)?;

    while let Some(((l, r, filter), src)) = queue.pop_front() {
        if let (Some(lf), Some(rf)) = (left.final_weight(l), right.final_weight(r)) {
            out.set_final(src, lf * rf)?;
        }
        for la in left.arcs(l) {
            if la.olabel == EPSILON {
                if filter == Filter::Open {
                    let dst = intern((la.next, r, Filter::Open), &mut out, &mut queue);
                    out.add_arc(src, Transition::new(la.ilabel, EPSILON, la.weight, dst))?;
                }
                continue;
            }
            for ra in matching(r, la.olabel) {
                let dst = intern((la.next, ra.next, Filter::Open), &mut out, &mut queue);
                out.add_arc(
                    src,
                    Transition::new(la.ilabel, ra.olabel, la.weight * ra.weight, dst),
                )?;
            }
        }
        for ra in matching(r, EPSILON) {
            let dst = intern((l, ra.next, Filter::RightOnly), &mut out, &mut queue);
            out.add_arc(src, Transition::new(EPSILON, ra.olabel, ra.weight, dst))?;
        }
    }
    Ok(out)
}
