//! Reasons attached to cells.
//!
//! [`ProductStore`] pairs every cell's main value with an auxiliary slot.
//! [`CLSession`] tracks reads on the main channel and, on every allocation
//! and write, appends the current assignment container to the written
//! cell's [`ReasonLog`] in the auxiliary slot. The session also keeps a
//! trail of assignment events with decision levels, which is what the
//! dependency graph is built from.

use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::depgraph::DecisionLevel;
use crate::error::{Error, Result};
use crate::store::{CellId, Store, VarStore};
use crate::tracking::{AssignmentContainer, TrackingSession};
use crate::value::{pointer_name, Naming, Render, StoredValue, Value};

/// Every reason recorded for one cell, in assignment order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReasonLog {
    reasons: Vec<Arc<AssignmentContainer>>,
}

impl ReasonLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, reason: AssignmentContainer) {
        self.reasons.push(Arc::new(reason));
    }

    pub fn len(&self) -> usize {
        self.reasons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reasons.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&AssignmentContainer> {
        self.reasons.get(index).map(|r| &**r)
    }

    pub fn last(&self) -> Option<&AssignmentContainer> {
        self.reasons.last().map(|r| &**r)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AssignmentContainer> {
        self.reasons.iter().map(|r| &**r)
    }
}

impl Render for ReasonLog {
    fn render(&self, names: Naming<'_>) -> String {
        render_reasons(self, names)
    }
}

/// Entries as `(name = value)` joined by ` ^ `; reasons joined by ` v `.
pub fn render_reasons(log: &ReasonLog, names: Naming<'_>) -> String {
    log.iter()
        .map(|r| r.render(names))
        .collect::<Vec<_>>()
        .join(" v ")
}

/// Main value plus auxiliary slot.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleCell<Aux> {
    pub main: StoredValue,
    pub aux: Aux,
}

impl<Aux: Render> Render for TupleCell<Aux> {
    fn render(&self, names: Naming<'_>) -> String {
        format!("({}, {})", self.main.render(names), self.aux.render(names))
    }
}

/// Product construction over a base store. The [`VarStore`] impl is the
/// main channel; [`ProductStore::aux_read`] / [`ProductStore::aux_write`]
/// are the auxiliary channel. Each channel preserves the other's slot.
pub struct ProductStore<S = Store, Aux = ReasonLog> {
    inner: S,
    _aux: PhantomData<fn() -> Aux>,
}

impl<S: fmt::Debug, Aux> fmt::Debug for ProductStore<S, Aux> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProductStore").field("inner", &self.inner).finish()
    }
}

impl<S: Default, Aux> Default for ProductStore<S, Aux> {
    fn default() -> Self {
        ProductStore {
            inner: S::default(),
            _aux: PhantomData,
        }
    }
}

impl<S, Aux> ProductStore<S, Aux>
where
    S: VarStore,
    Aux: Value + Clone + Default,
{
    pub fn new(inner: S) -> Self {
        ProductStore {
            inner,
            _aux: PhantomData,
        }
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    fn tuple(&mut self, cell: CellId) -> Result<Arc<TupleCell<Aux>>> {
        self.inner.read_as::<TupleCell<Aux>>(cell)
    }

    pub fn aux_read(&mut self, cell: CellId) -> Result<Aux> {
        Ok(self.tuple(cell)?.aux.clone())
    }

    pub fn aux_write(&mut self, cell: CellId, aux: Aux) -> Result<()> {
        let main = self.tuple(cell)?.main.clone();
        self.inner.write(cell, TupleCell { main, aux })
    }
}

impl<S, Aux> VarStore for ProductStore<S, Aux>
where
    S: VarStore,
    Aux: Value + Clone + Default,
{
    fn alloc_stored(&mut self, value: StoredValue) -> CellId {
        self.inner.alloc(TupleCell {
            main: value,
            aux: Aux::default(),
        })
    }

    fn read(&mut self, cell: CellId) -> Result<StoredValue> {
        Ok(self.tuple(cell)?.main.clone())
    }

    fn write_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()> {
        let old = self.tuple(cell)?;
        if old.main.type_tag() != value.type_tag() {
            return Err(Error::TypeMismatch {
                cell,
                expected: old.main.type_tag().name(),
                found: value.type_tag().name(),
            });
        }
        let aux = old.aux.clone();
        self.inner.write(cell, TupleCell { main: value, aux })
    }
}

/// Sequence number of an assignment event; strictly increasing within a
/// session and never reused, even across backtracking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Alloc,
    Write,
    Decision,
}

/// One allocation or write, as recorded on the session trail.
#[derive(Clone, Debug)]
pub struct AssignmentEvent {
    pub id: EventId,
    pub cell: CellId,
    pub value: StoredValue,
    pub level: DecisionLevel,
    pub kind: EventKind,
    /// Index of this event's reason in the cell's [`ReasonLog`].
    pub reason_index: usize,
    previous: Option<StoredValue>,
}

impl AssignmentEvent {
    pub fn is_decision(&self) -> bool {
        self.kind == EventKind::Decision
    }
}

/// Clause-learning session: tracked reads, reasons on every assignment,
/// decision levels and backtracking.
pub struct CLSession<S = Store> {
    tracking: TrackingSession<ProductStore<S>>,
    trail: Vec<AssignmentEvent>,
    next_event: usize,
    level: DecisionLevel,
}

impl Default for CLSession<Store> {
    fn default() -> Self {
        Self::new()
    }
}

impl CLSession<Store> {
    pub fn new() -> Self {
        Self::with_store(Store::new())
    }
}

impl<S: VarStore> CLSession<S> {
    pub fn with_store(store: S) -> Self {
        CLSession {
            tracking: TrackingSession::new(ProductStore::new(store)),
            trail: Vec::new(),
            next_event: 0,
            level: DecisionLevel(0),
        }
    }

    pub fn current_assignments(&self) -> AssignmentContainer {
        self.tracking.current_assignments()
    }

    pub fn reset_assignments(&mut self) -> AssignmentContainer {
        self.tracking.reset_assignments()
    }

    /// Reasons recorded for `cell`. Not a tracked read.
    pub fn get_reasons(&mut self, cell: CellId) -> Result<ReasonLog> {
        self.tracking.inner_mut().aux_read(cell)
    }

    pub fn reason_of(&mut self, event: &AssignmentEvent) -> Result<AssignmentContainer> {
        let log = self.get_reasons(event.cell)?;
        log.get(event.reason_index)
            .cloned()
            .ok_or_else(|| Error::MalformedSession {
                cell: event.cell,
                detail: format!("no reason #{} recorded", event.reason_index),
            })
    }

    /// Main value without recording a read.
    pub fn peek(&mut self, cell: CellId) -> Result<StoredValue> {
        self.tracking.inner_mut().read(cell)
    }

    pub fn level(&self) -> DecisionLevel {
        self.level
    }

    /// Live assignment events, oldest first.
    pub fn trail(&self) -> &[AssignmentEvent] {
        &self.trail
    }

    pub fn latest_event(&self, cell: CellId) -> Option<&AssignmentEvent> {
        self.trail.iter().rev().find(|e| e.cell == cell)
    }

    fn put_assignments(&mut self, cell: CellId) -> Result<usize> {
        let reason = self.tracking.current_assignments().dedup();
        let product = self.tracking.inner_mut();
        let mut log = product.aux_read(cell)?;
        log.push(reason);
        let index = log.len() - 1;
        product.aux_write(cell, log)?;
        Ok(index)
    }

    fn record(
        &mut self,
        cell: CellId,
        value: StoredValue,
        kind: EventKind,
        reason_index: usize,
        previous: Option<StoredValue>,
    ) {
        self.trail.push(AssignmentEvent {
            id: EventId(self.next_event),
            cell,
            value,
            level: self.level,
            kind,
            reason_index,
            previous,
        });
        self.next_event += 1;
    }

    fn assign(&mut self, cell: CellId, value: StoredValue, kind: EventKind) -> Result<()> {
        let previous = self.peek(cell)?;
        if previous.type_tag() != value.type_tag() {
            return Err(Error::TypeMismatch {
                cell,
                expected: previous.type_tag().name(),
                found: value.type_tag().name(),
            });
        }
        let reason_index = self.put_assignments(cell)?;
        self.tracking.write_stored(cell, value.clone())?;
        self.record(cell, value, kind, reason_index, Some(previous));
        Ok(())
    }

    /// Opens a new decision level and assigns `value` to `cell` as its
    /// decision.
    pub fn decide_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()> {
        self.level = DecisionLevel(self.level.0 + 1);
        self.assign(cell, value, EventKind::Decision)
    }

    pub fn decide<T: Value>(&mut self, cell: CellId, value: T) -> Result<()> {
        self.decide_stored(cell, StoredValue::new(value))
    }

    /// Undoes every assignment made above `level`, restoring the previous
    /// main values. Reason logs are kept.
    pub fn backtrack(&mut self, level: DecisionLevel) -> Result<()> {
        while let Some(event) = self.trail.last() {
            if event.level <= level {
                break;
            }
            let event = self.trail.pop().expect("non-empty");
            if let Some(previous) = event.previous {
                self.tracking.inner_mut().write_stored(event.cell, previous)?;
            }
        }
        self.level = level.min(self.level);
        Ok(())
    }
}

impl<S: VarStore> VarStore for CLSession<S> {
    /// Allocates, then attaches the current assignments as the first reason.
    fn alloc_stored(&mut self, value: StoredValue) -> CellId {
        let cell = self.tracking.alloc_stored(value.clone());
        let index = self
            .put_assignments(cell)
            .expect("freshly allocated cell is readable");
        self.record(cell, value, EventKind::Alloc, index, None);
        cell
    }

    fn read(&mut self, cell: CellId) -> Result<StoredValue> {
        self.tracking.read(cell)
    }

    /// Attaches the current assignments as a reason, then writes.
    fn write_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()> {
        self.assign(cell, value, EventKind::Write)
    }
}

/// Default rendering of a cell log with `p<i>` names.
pub fn render_default(log: &ReasonLog) -> String {
    render_reasons(log, &pointer_name)
}
