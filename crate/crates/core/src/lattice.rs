//! Lattice-valued cells.
//!
//! Every cell value already satisfies [`Value`] (show + equality). Cells
//! that take part in propagation additionally implement [`Lattice`]:
//! `meet` adds information, `bottom` is "nothing known" and `top` is the
//! over-constrained, conflicting state. [`merge_write`] only ever moves a
//! cell up the information order.

use std::fmt;

use crate::error::{Error, Result};
use crate::reason::CLSession;
use crate::store::{CellId, VarStore};
use crate::value::{Naming, Render, StoredValue, Value};

pub trait Lattice: Value + Clone {
    fn bottom() -> Self;
    fn top() -> Self;
    /// Combine the information of both arguments.
    fn meet(&self, other: &Self) -> Self;

    fn is_top(&self) -> bool {
        *self == Self::top()
    }

    /// `self` carries at least as much information as `other`.
    fn refines(&self, other: &Self) -> bool {
        self.meet(other) == *self
    }
}

/// Flat lattice: `Unknown` below every value, `Conflict` above them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flat<T> {
    Unknown,
    Known(T),
    Conflict,
}

impl<T> Flat<T> {
    pub fn known(&self) -> Option<&T> {
        match self {
            Flat::Known(v) => Some(v),
            _ => None,
        }
    }
}

impl<T: Render> Render for Flat<T> {
    fn render(&self, names: Naming<'_>) -> String {
        match self {
            Flat::Unknown => "unknown".to_string(),
            Flat::Known(v) => v.render(names),
            Flat::Conflict => "conflict".to_string(),
        }
    }
}

impl<T> Lattice for Flat<T>
where
    T: Value + Clone,
{
    fn bottom() -> Self {
        Flat::Unknown
    }

    fn top() -> Self {
        Flat::Conflict
    }

    fn meet(&self, other: &Self) -> Self {
        match (self, other) {
            (Flat::Unknown, x) | (x, Flat::Unknown) => x.clone(),
            (Flat::Known(a), Flat::Known(b)) if a == b => Flat::Known(a.clone()),
            _ => Flat::Conflict,
        }
    }
}

/// Candidate-set lattice over `{0, .., N-1}` (N <= 64). The full set is
/// bottom, the empty set is top, meet is intersection.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CandidateSet<const N: usize> {
    mask: u64,
}

impl<const N: usize> CandidateSet<N> {
    const FULL: u64 = if N >= 64 { u64::MAX } else { (1u64 << N) - 1 };

    pub fn from_mask(mask: u64) -> Self {
        CandidateSet {
            mask: mask & Self::FULL,
        }
    }

    pub fn only(value: usize) -> Self {
        assert!(value < N, "candidate {value} outside domain of size {N}");
        CandidateSet { mask: 1 << value }
    }

    pub fn without(self, value: usize) -> Self {
        CandidateSet {
            mask: self.mask & !(1 << value),
        }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, value: usize) -> bool {
        value < N && self.mask & (1 << value) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..N).filter(|&v| self.contains(v))
    }
}

impl<const N: usize> fmt::Debug for CandidateSet<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<const N: usize> Render for CandidateSet<N> {
    fn render(&self, _names: Naming<'_>) -> String {
        let items: Vec<String> = self.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl<const N: usize> Lattice for CandidateSet<N> {
    fn bottom() -> Self {
        CandidateSet { mask: Self::FULL }
    }

    fn top() -> Self {
        CandidateSet { mask: 0 }
    }

    fn meet(&self, other: &Self) -> Self {
        CandidateSet {
            mask: self.mask & other.mask,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeOutcome {
    Unchanged,
    Grew,
    Conflict,
}

fn current<T: Lattice, S: VarStore>(session: &mut CLSession<S>, cell: CellId) -> Result<T> {
    let raw = session.peek(cell)?;
    raw.downcast_ref::<T>().cloned().ok_or(Error::TypeMismatch {
        cell,
        expected: std::any::type_name::<T>(),
        found: raw.type_tag().name(),
    })
}

/// Meets `value` into `cell` through the session's reason-recording write.
///
/// The old value is inspected without tracking. When the meet produces top,
/// the old value is one of the causes, so it is read through the session
/// before the write and therefore appears in the conflict's reason.
pub fn merge_write<T: Lattice, S: VarStore>(
    session: &mut CLSession<S>,
    cell: CellId,
    value: T,
) -> Result<MergeOutcome> {
    let old: T = current(session, cell)?;
    let merged = old.meet(&value);
    if merged == old {
        return Ok(MergeOutcome::Unchanged);
    }
    if merged.is_top() {
        session.read(cell)?;
        session.write_stored(cell, StoredValue::new(merged))?;
        return Ok(MergeOutcome::Conflict);
    }
    session.write_stored(cell, StoredValue::new(merged))?;
    Ok(MergeOutcome::Grew)
}

pub fn is_conflict<T: Lattice, S: VarStore>(session: &mut CLSession<S>, cell: CellId) -> Result<bool> {
    Ok(current::<T, S>(session, cell)?.is_top())
}

#[cfg(test)]
mod tests {
    use super::*;

    type FB = Flat<bool>;

    #[test]
    fn flat_merge_outcomes() {
        let mut s = CLSession::new();
        let c = s.alloc(FB::Unknown);
        assert!(!is_conflict::<FB, _>(&mut s, c).unwrap());
        assert_eq!(merge_write(&mut s, c, FB::Known(true)).unwrap(), MergeOutcome::Grew);
        assert_eq!(*s.read_as::<FB>(c).unwrap(), FB::Known(true));
        assert_eq!(merge_write(&mut s, c, FB::Known(true)).unwrap(), MergeOutcome::Unchanged);
        assert_eq!(merge_write(&mut s, c, FB::Known(false)).unwrap(), MergeOutcome::Conflict);
        assert!(is_conflict::<FB, _>(&mut s, c).unwrap());
        assert_eq!(merge_write(&mut s, c, FB::Known(true)).unwrap(), MergeOutcome::Unchanged);
        assert!(is_conflict::<FB, _>(&mut s, c).unwrap());
    }

    #[test]
    fn flat_meet_table() {
        use Flat::*;
        let elems = [Unknown, Known(true), Known(false), Conflict];
        // expected[i][j] = meet(elems[i], elems[j])
        let expected = [
            [Unknown, Known(true), Known(false), Conflict],
            [Known(true), Known(true), Conflict, Conflict],
            [Known(false), Conflict, Known(false), Conflict],
            [Conflict, Conflict, Conflict, Conflict],
        ];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                assert_eq!(a.meet(b), expected[i][j], "{a:?} /\\ {b:?}");
            }
        }
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let mut s = CLSession::new();
        let c = s.alloc(5i64);
        assert!(matches!(
            merge_write(&mut s, c, FB::Known(true)),
            Err(Error::TypeMismatch { .. })
        ));
        let d = s.alloc(CandidateSet::<4>::bottom());
        assert!(merge_write(&mut s, d, FB::Known(true)).is_err());
    }

    #[test]
    fn candidate_sets_shrink_to_conflict() {
        let mut s = CLSession::new();
        let c = s.alloc(CandidateSet::<4>::bottom());
        assert_eq!(
            merge_write(&mut s, c, CandidateSet::<4>::from_mask(0b0110)).unwrap(),
            MergeOutcome::Grew
        );
        assert_eq!(
            merge_write(&mut s, c, CandidateSet::<4>::bottom()).unwrap(),
            MergeOutcome::Unchanged
        );
        assert_eq!(
            merge_write(&mut s, c, CandidateSet::<4>::only(0)).unwrap(),
            MergeOutcome::Conflict
        );
        assert!(is_conflict::<CandidateSet<4>, _>(&mut s, c).unwrap());
        assert_eq!(CandidateSet::<4>::from_mask(0b1010).render(&crate::value::pointer_name), "{1,3}");
    }

    #[test]
    fn conflict_reason_contains_causes() {
        let mut s = CLSession::new();
        let a = s.alloc(FB::Known(true));
        let c = s.alloc(FB::Unknown);
        merge_write(&mut s, c, FB::Known(true)).unwrap();
        s.reset_assignments();
        s.read(a).unwrap();
        assert_eq!(merge_write(&mut s, c, FB::Known(false)).unwrap(), MergeOutcome::Conflict);
        let reason = s.get_reasons(c).unwrap().last().unwrap().clone();
        let cells: Vec<_> = reason.cells().collect();
        assert_eq!(cells, vec![a, c]);
        assert_eq!(reason.entries()[1].observed, StoredValue::new(FB::Known(true)));
    }

    #[test]
    fn refinement_order() {
        assert!(FB::Known(true).refines(&FB::Unknown));
        assert!(FB::Conflict.refines(&FB::Known(false)));
        assert!(!FB::Unknown.refines(&FB::Known(false)));
    }
}
