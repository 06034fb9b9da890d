//! Tab-separated machine format.
//!
//! Arc lines are `src<TAB>dst<TAB>in<TAB>out<TAB>cost`; final lines are
//! `state<TAB>cost` (a bare `state` means cost 0). The first state named in
//! the file is the start state, and `<eps>` is the empty symbol. An empty
//! file is the empty machine.

use std::collections::HashMap;
use std::sync::Arc;

use super::{format_cost, Fst, FsmError, StateId, SymbolTable, Transition, Weight};

/// Writes `fst` in text form.
///
/// States are renumbered in order of first mention, starting from the start
/// state, so that reading the text back and writing it again reproduces it
/// byte for byte. States with neither arcs nor a final weight are dropped.
pub fn write_text(fst: &Fst) -> String {
    let mut out = String::new();
    let Some(start) = fst.start() else {
        return out;
    };
    let isyms = fst.input_symbols();
    let osyms = fst.output_symbols();

    let n = fst.num_states();
    let mut ids: Vec<Option<StateId>> = vec![None; n];
    let mut next_id: StateId = 0;
    let mut assign = |s: StateId, ids: &mut Vec<Option<StateId>>| -> StateId {
        *ids[s as usize].get_or_insert_with(|| {
            next_id += 1;
            next_id - 1
        })
    };

    assign(start, &mut ids);
    if fst.arcs(start).is_empty() {
        match fst.final_weight(start) {
            Some(w) => out.push_str(&format!("0\t{}\n", format_cost(w.cost()))),
            None => out.push_str("# start 0\n"),
        }
    }
    let roots = std::iter::once(start).chain(fst.states().filter(|&s| s != start));
    let mut visited = vec![false; n];
    for root in roots {
        if visited[root as usize] || (root != start && fst.arcs(root).is_empty()) {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([root]);
        visited[root as usize] = true;
        while let Some(s) = queue.pop_front() {
            let src = assign(s, &mut ids);
            for arc in fst.arcs(s) {
                let dst = assign(arc.next, &mut ids);
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    src,
                    dst,
                    isyms.label(arc.ilabel).expect("arc labels are registered"),
                    osyms.label(arc.olabel).expect("arc labels are registered"),
                    format_cost(arc.weight.cost())
                ));
                if !visited[arc.next as usize] {
                    visited[arc.next as usize] = true;
                    queue.push_back(arc.next);
                }
            }
        }
    }

    let mut finals: Vec<(StateId, f64)> = Vec::new();
    for s in fst.states() {
        if s == start && fst.arcs(s).is_empty() {
            continue;
        }
        if let Some(w) = fst.final_weight(s) {
            finals.push((s, w.cost()));
        }
    }
    // final-only states get ids in state order, after everything named by arcs
    let mut numbered: Vec<(StateId, f64)> = finals
        .into_iter()
        .map(|(s, c)| (assign(s, &mut ids), c))
        .collect();
    numbered.sort_by_key(|&(id, _)| id);
    for (id, c) in numbered {
        out.push_str(&format!("{}\t{}\n", id, format_cost(c)));
    }
    out
}

/// Reads a machine whose labels must already exist in the given tables.
pub fn read_text(
    text: &str,
    isyms: Arc<SymbolTable>,
    osyms: Arc<SymbolTable>,
) -> Result<Fst, FsmError> {
    let lines = parse_lines(text)?;
    let mut fst = Fst::new(isyms.clone(), osyms.clone());
    assemble(&mut fst, &lines, |side, label, line| {
        let table = if side == 0 { &isyms } else { &osyms };
        table.get(label).ok_or_else(|| {
            FsmError::parse(line, format!("unknown symbol `{label}`"))
        })
    })?;
    Ok(fst)
}

/// Reads a machine, building fresh input and output tables from the labels
/// in order of first appearance.
pub fn read_text_inferring_symbols(text: &str) -> Result<Fst, FsmError> {
    let lines = parse_lines(text)?;
    let mut isyms = SymbolTable::new();
    let mut osyms = SymbolTable::new();
    for line in &lines {
        if let Line::Arc { ilabel, olabel, line, .. } = line {
            isyms
                .add(ilabel)
                .map_err(|e| FsmError::parse(*line, e.to_string()))?;
            osyms
                .add(olabel)
                .map_err(|e| FsmError::parse(*line, e.to_string()))?;
        }
    }
    let (isyms, osyms) = (Arc::new(isyms), Arc::new(osyms));
    let mut fst = Fst::new(isyms.clone(), osyms.clone());
    assemble(&mut fst, &lines, |side, label, _| {
        let table = if side == 0 { &isyms } else { &osyms };
        Ok(table.get(label).expect("all labels were registered"))
    })?;
    Ok(fst)
}

enum Line<'a> {
    Start(u64),
    Arc {
        src: u64,
        dst: u64,
        ilabel: &'a str,
        olabel: &'a str,
        cost: f64,
        line: usize,
    },
    Final {
        state: u64,
        cost: f64,
        line: usize,
    },
}

fn parse_state(field: &str, line: usize) -> Result<u64, FsmError> {
    field
        .trim()
        .parse()
        .map_err(|_| FsmError::parse(line, format!("bad state id `{field}`")))
}

fn parse_cost(field: &str, line: usize) -> Result<f64, FsmError> {
    let cost: f64 = field
        .trim()
        .parse()
        .map_err(|_| FsmError::parse(line, format!("bad cost `{field}`")))?;
    Weight::from_cost(cost)
        .map(Weight::cost)
        .map_err(|e| FsmError::parse(line, e.to_string()))
}

fn parse_lines(text: &str) -> Result<Vec<Line<'_>>, FsmError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix('#') {
            if let Some(s) = rest.trim().strip_prefix("start ") {
                lines.push(Line::Start(parse_state(s, line)?));
            }
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        match fields.as_slice() {
            [src, dst, ilabel, olabel, cost] => lines.push(Line::Arc {
                src: parse_state(src, line)?,
                dst: parse_state(dst, line)?,
                ilabel,
                olabel,
                cost: parse_cost(cost, line)?,
                line,
            }),
            [state, cost] => lines.push(Line::Final {
                state: parse_state(state, line)?,
                cost: parse_cost(cost, line)?,
                line,
            }),
            [state] => lines.push(Line::Final {
                state: parse_state(state, line)?,
                cost: 0.0,
                line,
            }),
            _ => {
                return Err(FsmError::parse(
                    line,
                    format!("expected 1, 2 or 5 tab-separated fields, found {}", fields.len()),
                ))
            }
        }
    }
    Ok(lines)
}

/// Maximum number of distinct states a text machine may declare.
const MAX_STATES: usize = 1 << 24;

fn assemble<F>(fst: &mut Fst, lines: &[Line<'_>], mut lookup: F) -> Result<(), FsmError>
where
    F: FnMut(u8, &str, usize) -> Result<u32, FsmError>,
{
    let mut ids: HashMap<u64, StateId> = HashMap::new();
    let mut state_of = |fst: &mut Fst, raw: u64, line: usize| -> Result<StateId, FsmError> {
        if let Some(&s) = ids.get(&raw) {
            return Ok(s);
        }
        if ids.len() >= MAX_STATES {
            return Err(FsmError::parse(line, "too many states"));
        }
        let s = fst.add_state();
        ids.insert(raw, s);
        Ok(s)
    };
    for (n, line) in lines.iter().enumerate() {
        match *line {
            Line::Start(raw) => {
                let s = state_of(fst, raw, n + 1)?;
                if fst.start().is_none() {
                    fst.set_start(s)?;
                }
            }
            Line::Arc {
                src,
                dst,
                ilabel,
                olabel,
                cost,
                line,
            } => {
                let s = state_of(fst, src, line)?;
                if fst.start().is_none() {
                    fst.set_start(s)?;
                }
                let d = state_of(fst, dst, line)?;
                let il = lookup(0, ilabel, line)?;
                let ol = lookup(1, olabel, line)?;
                fst.add_arc(s, Transition::new(il, ol, Weight::from_cost(cost)?, d))?;
            }
            Line::Final { state, cost, line } => {
                let s = state_of(fst, state, line)?;
                if fst.start().is_none() {
                    fst.set_start(s)?;
                }
                fst.set_final(s, Weight::from_cost(cost)?)?;
            }
        }
    }
    Ok(())
}
