//! Read tracking: a store wrapper that records every read as
//! `(cell, observed snapshot)` in a current-assignment container.

use std::mem;

use crate::error::Result;
use crate::store::{CellId, VarStore};
use crate::value::{Naming, Render, StoredValue, TypeTag};

/// One recorded read.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentEntry {
    pub cell: CellId,
    pub observed: StoredValue,
}

impl AssignmentEntry {
    pub fn new(cell: CellId, observed: StoredValue) -> Self {
        AssignmentEntry { cell, observed }
    }

    pub fn type_tag(&self) -> TypeTag {
        self.observed.type_tag()
    }
}

/// Ordered collection of recorded reads. Duplicates are kept; see
/// [`AssignmentContainer::dedup`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AssignmentContainer {
    entries: Vec<AssignmentEntry>,
}

impl AssignmentContainer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(entry: AssignmentEntry) -> Self {
        AssignmentContainer {
            entries: vec![entry],
        }
    }

    pub fn push(&mut self, entry: AssignmentEntry) {
        self.entries.push(entry);
    }

    /// Appends all of `other`'s entries.
    pub fn merge(&mut self, other: AssignmentContainer) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[AssignmentEntry] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AssignmentEntry> {
        self.entries.iter()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.entries.iter().map(|e| e.cell)
    }

    pub fn contains_cell(&self, cell: CellId) -> bool {
        self.entries.iter().any(|e| e.cell == cell)
    }

    /// Drops repeated `(cell, observed)` pairs, keeping first occurrences.
    pub fn dedup(&self) -> AssignmentContainer {
        let mut out: Vec<AssignmentEntry> = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            if !out.iter().any(|o| o.cell == e.cell && o.observed == e.observed) {
                out.push(e.clone());
            }
        }
        AssignmentContainer { entries: out }
    }
}

impl<'a> IntoIterator for &'a AssignmentContainer {
    type Item = &'a AssignmentEntry;
    type IntoIter = std::slice::Iter<'a, AssignmentEntry>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl FromIterator<AssignmentEntry> for AssignmentContainer {
    fn from_iter<I: IntoIterator<Item = AssignmentEntry>>(iter: I) -> Self {
        AssignmentContainer {
            entries: iter.into_iter().collect(),
        }
    }
}

/// `(p3 = lcons false p2) ^ (p2 = lcons true p1)`; empty renders as `""`.
impl Render for AssignmentContainer {
    fn render(&self, names: Naming<'_>) -> String {
        self.entries
            .iter()
            .map(|e| format!("({} = {})", names(e.cell), e.observed.render(names)))
            .collect::<Vec<_>>()
            .join(" ^ ")
    }
}

/// Wraps a store and records every read. Writes and allocations pass
/// through unrecorded.
#[derive(Debug, Default)]
pub struct TrackingSession<S> {
    inner: S,
    current: AssignmentContainer,
}

impl<S: VarStore> TrackingSession<S> {
    pub fn new(inner: S) -> Self {
        TrackingSession {
            inner,
            current: AssignmentContainer::new(),
        }
    }

    /// Snapshot of the reads recorded so far.
    pub fn current_assignments(&self) -> AssignmentContainer {
        self.current.clone()
    }

    /// Returns the recorded reads and starts a new, empty window.
    pub fn reset_assignments(&mut self) -> AssignmentContainer {
        mem::take(&mut self.current)
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn inner_mut(&mut self) -> &mut S {
        &mut self.inner
    }

    pub fn into_inner(self) -> S {
        self.inner
    }
}

impl<S: VarStore> VarStore for TrackingSession<S> {
    fn alloc_stored(&mut self, value: StoredValue) -> crate::store::CellId {
        self.inner.alloc_stored(value)
    }

    fn read(&mut self, cell: CellId) -> Result<StoredValue> {
        let value = self.inner.read(cell)?;
        self.current.push(AssignmentEntry::new(cell, value.clone()));
        Ok(value)
    }

    fn write_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()> {
        self.inner.write_stored(cell, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::list::{any_algebra, fix_list, list_descriptor};
    use crate::shape::{cell_fold, distribute};
    use crate::store::Store;
    use crate::value::pointer_name;

    #[test]
    fn reads_are_recorded_in_order() {
        let mut s = TrackingSession::new(Store::new());
        let c0 = s.alloc(true);
        let c1 = s.alloc(3i64);
        assert!(s.current_assignments().is_empty());
        assert!(*s.read_as::<bool>(c0).unwrap());
        assert_eq!(
            s.current_assignments().entries(),
            &[AssignmentEntry::new(c0, StoredValue::new(true))]
        );
        s.read(c1).unwrap();
        let cells: Vec<_> = s.current_assignments().cells().collect();
        assert_eq!(cells, vec![c0, c1]);
    }

    #[test]
    fn writes_are_not_recorded() {
        let mut s = TrackingSession::new(Store::new());
        let c0 = s.alloc(1i64);
        s.write(c0, 2i64).unwrap();
        assert!(s.current_assignments().is_empty());
        s.read(c0).unwrap();
        assert_eq!(s.current_assignments().entries()[0].observed, StoredValue::new(2i64));
    }

    #[test]
    fn snapshot_is_a_copy() {
        let mut s = TrackingSession::new(Store::new());
        let c0 = s.alloc(1i64);
        s.read(c0).unwrap();
        let snap = s.current_assignments();
        s.read(c0).unwrap();
        assert_eq!(snap.len(), 1);
        assert_eq!(s.current_assignments().len(), 2);
    }

    #[test]
    fn reset_windows_partition_reads() {
        let mut s = TrackingSession::new(Store::new());
        assert!(s.reset_assignments().is_empty());
        assert!(s.current_assignments().is_empty());
        let c0 = s.alloc(1i64);
        let c1 = s.alloc(2i64);
        s.read(c0).unwrap();
        let first = s.reset_assignments();
        s.read(c1).unwrap();
        let second = s.reset_assignments();
        assert_eq!(first.cells().collect::<Vec<_>>(), vec![c0]);
        assert_eq!(second.cells().collect::<Vec<_>>(), vec![c1]);
        assert!(s.current_assignments().is_empty());
    }

    #[test]
    fn any_fold_reads_two_cons_cells() {
        let mut s = TrackingSession::new(Store::new());
        let root = distribute(&mut s, &fix_list(&[false, true, false]));
        assert!(cell_fold(&mut s, &list_descriptor::<bool>(), &any_algebra(), root).unwrap());
        let reads = s.current_assignments();
        assert_eq!(reads.render(&pointer_name), "(p3 = lcons false p2) ^ (p2 = lcons true p1)");
    }

    #[test]
    fn dedup_and_merge() {
        let e = |i: usize, v: i64| AssignmentEntry::new(CellId::from_index(i), StoredValue::new(v));
        let mut a = AssignmentContainer::singleton(e(0, 1));
        a.merge([e(1, 2), e(0, 1), e(0, 3)].into_iter().collect());
        assert_eq!(a.len(), 4);
        let d = a.dedup();
        assert_eq!(d.entries(), &[e(0, 1), e(1, 2), e(0, 3)]);
        assert_eq!(AssignmentContainer::new().render(&pointer_name), "");
    }
}
