//! The base cell store: allocate, read and write dynamically typed cells.
//!
//! [`VarStore`] is the interface every higher store (tracking, product,
//! clause learning) implements; [`Store`] is the default backend, a dense
//! map from integer ids to immutable snapshots.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::value::{StoredValue, Value};

/// Handle to a cell. Ids are dense and scoped to the store that issued them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(u32);

impl CellId {
    pub fn from_index(index: usize) -> Self {
        CellId(u32::try_from(index).expect("cell index overflow"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

pub trait VarStore {
    fn alloc_stored(&mut self, value: StoredValue) -> CellId;

    fn read(&mut self, cell: CellId) -> Result<StoredValue>;

    fn write_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()>;

    fn alloc<T: Value>(&mut self, value: T) -> CellId
    where
        Self: Sized,
    {
        self.alloc_stored(StoredValue::new(value))
    }

    fn write<T: Value>(&mut self, cell: CellId, value: T) -> Result<()>
    where
        Self: Sized,
    {
        self.write_stored(cell, StoredValue::new(value))
    }

    /// Reads and downcasts in one step.
    fn read_as<T: Value>(&mut self, cell: CellId) -> Result<Arc<T>>
    where
        Self: Sized,
    {
        let value = self.read(cell)?;
        value.downcast::<T>().ok_or(Error::TypeMismatch {
            cell,
            expected: std::any::type_name::<T>(),
            found: value.type_tag().name(),
        })
    }
}

impl<S: VarStore + ?Sized> VarStore for &mut S {
    fn alloc_stored(&mut self, value: StoredValue) -> CellId {
        (**self).alloc_stored(value)
    }

    fn read(&mut self, cell: CellId) -> Result<StoredValue> {
        (**self).read(cell)
    }

    fn write_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()> {
        (**self).write_stored(cell, value)
    }
}

/// In-memory store. Cells are never freed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Store {
    cells: Vec<StoredValue>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Read without going through any wrapper.
    pub fn peek(&self, cell: CellId) -> Result<&StoredValue> {
        self.cells.get(cell.index()).ok_or(Error::UnknownCell(cell))
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellId, &StoredValue)> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, v)| (CellId::from_index(i), v))
    }
}

impl VarStore for Store {
    fn alloc_stored(&mut self, value: StoredValue) -> CellId {
        let id = CellId::from_index(self.cells.len());
        self.cells.push(value);
        id
    }

    fn read(&mut self, cell: CellId) -> Result<StoredValue> {
        self.peek(cell).cloned()
    }

    fn write_stored(&mut self, cell: CellId, value: StoredValue) -> Result<()> {
        let slot = self
            .cells
            .get_mut(cell.index())
            .ok_or(Error::UnknownCell(cell))?;
        if slot.type_tag() != value.type_tag() {
            return Err(Error::TypeMismatch {
                cell,
                expected: slot.type_tag().name(),
                found: value.type_tag().name(),
            });
        }
        *slot = value;
        Ok(())
    }
}
