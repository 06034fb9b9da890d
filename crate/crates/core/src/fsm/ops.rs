use std::collections::VecDeque;
use std::sync::Arc;

use super::{Fst, FsmError, StateId, SymbolTable, Transition, Weight};

/// Chain acceptor for exactly `seq`, all costs zero.
pub fn linear_acceptor<S: AsRef<str>>(
    seq: &[S],
    table: &Arc<SymbolTable>,
) -> Result<Fst, FsmError> {
    let labels = table.encode(seq)?;
    let mut fst = Fst::new_acceptor(table.clone());
    let mut prev = fst.add_state();
    fst.set_start(prev)?;
    for label in labels {
        let next = fst.add_state();
        fst.add_arc(prev, Transition::new(label, label, Weight::ONE, next))?;
        prev = next;
    }
    fst.set_final(prev, Weight::ONE)?;
    Ok(fst)
}

/// Swaps input and output on every arc, together with the alphabets.
pub fn invert(fst: &Fst) -> Fst {
    let mut out = fst.with_symbols(fst.output_symbols().clone(), fst.input_symbols().clone());
    for s in fst.states() {
        for arc in out.arcs_mut(s) {
            std::mem::swap(&mut arc.ilabel, &mut arc.olabel);
        }
    }
    out
}

/// Keeps only the output side, turning a transducer into an acceptor over
/// its output alphabet.
pub fn project_output(fst: &Fst) -> Fst {
    let syms = fst.output_symbols().clone();
    let mut out = fst.with_symbols(syms.clone(), syms);
    for s in fst.states() {
        for arc in out.arcs_mut(s) {
            arc.ilabel = arc.olabel;
        }
    }
    out
}

/// Removes every state that is not both reachable from the start and able
/// to reach a final state. Surviving states keep their relative order.
///
/// A machine with no successful path becomes the explicit empty machine.
pub fn trim(fst: &Fst) -> Fst {
    let n = fst.num_states();
    let mut empty = Fst::new(fst.input_symbols().clone(), fst.output_symbols().clone());
    let Some(start) = fst.start() else {
        return empty;
    };

    let mut accessible = vec![false; n];
    let mut queue = VecDeque::from([start]);
    accessible[start as usize] = true;
    while let Some(s) = queue.pop_front() {
        for arc in fst.arcs(s) {
            if !accessible[arc.next as usize] {
                accessible[arc.next as usize] = true;
                queue.push_back(arc.next);
            }
        }
    }

    let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for s in fst.states() {
        for arc in fst.arcs(s) {
            reverse[arc.next as usize].push(s);
        }
    }
    let mut coaccessible = vec![false; n];
    for s in fst.states() {
        if fst.is_final(s) {
            coaccessible[s as usize] = true;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &p in &reverse[s as usize] {
            if !coaccessible[p as usize] {
                coaccessible[p as usize] = true;
                queue.push_back(p);
            }
        }
    }

    if !coaccessible[start as usize] {
        return empty;
    }
    let mut remap = vec![None; n];
    for s in 0..n {
        if accessible[s] && coaccessible[s] {
            remap[s] = Some(empty.add_state());
        }
    }
    let out = &mut empty;
    for s in fst.states() {
        let Some(ns) = remap[s as usize] else { continue };
        if let Some(w) = fst.final_weight(s) {
            out.set_final(ns, w).expect("remapped state exists");
        }
        for arc in fst.arcs(s) {
            if let Some(nd) = remap[arc.next as usize] {
                out.add_arc(ns, Transition { next: nd, ..*arc })
                    .expect("remapped states exist");
            }
        }
    }
    out.set_start(remap[start as usize].expect("start is kept"))
        .expect("start exists");
    empty
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{best_path, EPSILON};

    fn syms() -> Arc<SymbolTable> {
        Arc::new(SymbolTable::from_labels(["a", "i", "x", "ア"]).unwrap())
    }

    #[test]
    fn empty_linear_acceptor_accepts_empty_string() {
        let f = linear_acceptor::<&str>(&[], &syms()).unwrap();
        assert_eq!(f.num_states(), 1);
        assert!(f.is_final(0));
        let p = best_path(&f).unwrap();
        assert!(p.input.is_empty());
        assert_eq!(p.cost, Weight::ONE);
    }

    #[test]
    fn single_glyph_acceptor() {
        let f = linear_acceptor(&["ア"], &syms()).unwrap();
        assert_eq!((f.num_states(), f.num_arcs()), (2, 1));
        assert!(f.is_acceptor());
    }

    #[test]
    fn two_symbol_chain_best_path() {
        let t = syms();
        let f = linear_acceptor(&["a", "i"], &t).unwrap();
        assert_eq!(f.num_states(), 3);
        let p = best_path(&f).unwrap();
        assert_eq!(p.cost.cost(), 0.0);
        assert_eq!(t.decode(&p.output), vec!["a", "i"]);
    }

    #[test]
    fn unknown_symbol_is_named() {
        match linear_acceptor(&["a", "ズ"], &syms()) {
            Err(FsmError::UnknownSymbol(l)) => assert_eq!(l, "ズ"),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn single_arc() -> Fst {
        let inp = Arc::new(SymbolTable::from_labels(["a"]).unwrap());
        let outp = Arc::new(SymbolTable::from_labels(["x"]).unwrap());
        let mut f = Fst::new(inp, outp);
        let s = f.add_state();
        let t = f.add_state();
        f.set_start(s).unwrap();
        f.set_final(t, Weight::ONE).unwrap();
        f.add_arc(s, Transition::new(1, 1, Weight::from_probability(0.3).unwrap(), t))
            .unwrap();
        f
    }

    #[test]
    fn invert_swaps_labels_and_alphabets() {
        let f = single_arc();
        let g = invert(&f);
        assert_eq!(g.input_symbols().label(1), Some("x"));
        assert_eq!(g.output_symbols().label(1), Some("a"));
        assert_eq!(g.arcs(0)[0].weight, f.arcs(0)[0].weight);
        assert_eq!(invert(&g), f);
    }

    #[test]
    fn trim_removes_dead_branch() {
        let t = syms();
        let mut f = Fst::new_acceptor(t);
        let s0 = f.add_state();
        let s1 = f.add_state();
        let dead = f.add_state();
        let unreachable = f.add_state();
        f.set_start(s0).unwrap();
        f.set_final(s1, Weight::ONE).unwrap();
        f.add_arc(s0, Transition::new(1, 1, Weight::from_cost(0.5).unwrap(), s1)).unwrap();
        f.add_arc(s0, Transition::new(2, 2, Weight::ONE, dead)).unwrap();
        f.add_arc(unreachable, Transition::new(2, 2, Weight::ONE, s1)).unwrap();
        let before = best_path(&f).unwrap();
        let g = trim(&f);
        assert_eq!((g.num_states(), g.num_arcs()), (2, 1));
        let after = best_path(&g).unwrap();
        assert_eq!(before.cost, after.cost);
        assert_eq!(before.output, after.output);
        assert_eq!(trim(&g), g);
    }

    #[test]
    fn trim_without_path_is_empty() {
        let mut f = Fst::new_acceptor(syms());
        let s = f.add_state();
        f.set_start(s).unwrap();
        f.add_arc(s, Transition::new(EPSILON, EPSILON, Weight::ONE, s)).unwrap();
        let g = trim(&f);
        assert!(g.is_empty());
        assert_eq!(g.num_states(), 0);
        assert!(best_path(&g).is_none());
    }
}
