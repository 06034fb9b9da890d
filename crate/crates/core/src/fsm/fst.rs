use std::sync::Arc;

use super::{FsmError, Label, SymbolTable, Weight, EPSILON};

pub type StateId = u32;

/// One weighted arc. The source state is implied by where it is stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub ilabel: Label,
    pub olabel: Label,
    pub weight: Weight,
    pub next: StateId,
}

impl Transition {
    pub fn new(ilabel: Label, olabel: Label, weight: Weight, next: StateId) -> Self {
        Transition {
            ilabel,
            olabel,
            weight,
            next,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
struct State {
    arcs: Vec<Transition>,
    final_weight: Option<Weight>,
}

/// A weighted finite-state transducer with attached input and output
/// alphabets.
///
/// A machine without a start state is the empty machine: it accepts
/// nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct Fst {
    states: Vec<State>,
    start: Option<StateId>,
    isyms: Arc<SymbolTable>,
    osyms: Arc<SymbolTable>,
}

impl Fst {
    pub fn new(isyms: Arc<SymbolTable>, osyms: Arc<SymbolTable>) -> Self {
        Fst {
            states: Vec::new(),
            start: None,
            isyms,
            osyms,
        }
    }

    /// An acceptor shell whose input and output alphabets are the same table.
    pub fn new_acceptor(syms: Arc<SymbolTable>) -> Self {
        Fst::new(syms.clone(), syms)
    }

    pub fn add_state(&mut self) -> StateId {
        self.states.push(State::default());
        (self.states.len() - 1) as StateId
    }

    pub fn set_start(&mut self, state: StateId) -> Result<(), FsmError> {
        self.check_state(state)?;
        self.start = Some(state);
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, weight: Weight) -> Result<(), FsmError> {
        self.check_state(state)?;
        self.states[state as usize].final_weight = Some(weight);
        Ok(())
    }

    pub fn add_arc(&mut self, src: StateId, arc: Transition) -> Result<(), FsmError> {
        self.check_state(src)?;
        self.check_state(arc.next)?;
        if arc.ilabel as usize >= self.isyms.len() {
            return Err(FsmError::UnknownSymbol(format!("#{}", arc.ilabel)));
        }
        if arc.olabel as usize >= self.osyms.len() {
            return Err(FsmError::UnknownSymbol(format!("#{}", arc.olabel)));
        }
        self.states[src as usize].arcs.push(arc);
        Ok(())
    }

    fn check_state(&self, state: StateId) -> Result<(), FsmError> {
        if (state as usize) < self.states.len() {
            Ok(())
        } else {
            Err(FsmError::InvalidState(state))
        }
    }

    pub fn start(&self) -> Option<StateId> {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.states.iter().map(|s| s.arcs.len()).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.states.len() as StateId
    }

    /// # Panics
    /// If `state` is out of range.
    pub fn arcs(&self, state: StateId) -> &[Transition] {
        &self.states[state as usize].arcs
    }

    pub fn final_weight(&self, state: StateId) -> Option<Weight> {
        self.states.get(state as usize).and_then(|s| s.final_weight)
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.final_weight(state).is_some()
    }

    pub fn input_symbols(&self) -> &Arc<SymbolTable> {
        &self.isyms
    }

    pub fn output_symbols(&self) -> &Arc<SymbolTable> {
        &self.osyms
    }

    /// True when the machine has no start state (accepts nothing).
    pub fn is_empty(&self) -> bool {
        self.start.is_none()
    }

    /// True when every arc reads and writes the same symbol over a shared
    /// alphabet.
    pub fn is_acceptor(&self) -> bool {
        same_alphabet(&self.isyms, &self.osyms)
            && self
                .states
                .iter()
                .all(|s| s.arcs.iter().all(|a| a.ilabel == a.olabel))
    }

    /// True when some arc reads and writes nothing.
    pub fn has_epsilon_pairs(&self) -> bool {
        self.states
            .iter()
            .any(|s| s.arcs.iter().any(|a| a.ilabel == EPSILON && a.olabel == EPSILON))
    }

    pub(crate) fn arcs_mut(&mut self, state: StateId) -> &mut Vec<Transition> {
        &mut self.states[state as usize].arcs
    }

    pub(crate) fn with_symbols(
        &self,
        isyms: Arc<SymbolTable>,
        osyms: Arc<SymbolTable>,
    ) -> Fst {
        Fst {
            states: self.states.clone(),
            start: self.start,
            isyms,
            osyms,
        }
    }
}

/// Alphabets match when they are the same table or have identical content.
pub(crate) fn same_alphabet(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
