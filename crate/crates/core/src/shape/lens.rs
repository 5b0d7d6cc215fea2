use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::store::{CellId, VarStore};
use crate::value::{StoredValue, Value};

type View<T> = Arc<dyn Fn(&StoredValue) -> Result<T> + Send + Sync>;

/// Read-only view of a cell through a pure transformation. Writes always go
/// through the raw [`CellId`].
pub struct LensHandle<T> {
    origin: CellId,
    view: View<T>,
}

impl<T> Clone for LensHandle<T> {
    fn clone(&self) -> Self {
        LensHandle {
            origin: self.origin,
            view: self.view.clone(),
        }
    }
}

impl<T> fmt::Debug for LensHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LensHandle").field("origin", &self.origin).finish_non_exhaustive()
    }
}

impl LensHandle<StoredValue> {
    /// Exposes the raw stored value.
    pub fn identity(origin: CellId) -> Self {
        LensHandle {
            origin,
            view: Arc::new(|v: &StoredValue| Ok(v.clone())),
        }
    }
}

impl<T: Value + Clone> LensHandle<T> {
    /// Exposes the cell's value as `T`, failing on read if the cell holds
    /// something else.
    pub fn typed(origin: CellId) -> Self {
        LensHandle {
            origin,
            view: Arc::new(move |v: &StoredValue| {
                v.downcast_ref::<T>().cloned().ok_or(Error::TypeMismatch {
                    cell: origin,
                    expected: std::any::type_name::<T>(),
                    found: v.type_tag().name(),
                })
            }),
        }
    }
}

impl<T: 'static> LensHandle<T> {
    pub fn origin(&self) -> CellId {
        self.origin
    }

    pub fn map<U: 'static>(&self, f: impl Fn(T) -> U + Send + Sync + 'static) -> LensHandle<U> {
        let inner = self.view.clone();
        LensHandle {
            origin: self.origin,
            view: Arc::new(move |v: &StoredValue| inner(v).map(&f)),
        }
    }

    /// Reads the origin cell (through `store`, so tracking sees it) and
    /// applies the view.
    pub fn read<S: VarStore + ?Sized>(&self, store: &mut S) -> Result<T> {
        let raw = store.read(self.origin)?;
        (self.view)(&raw)
    }
}

pub fn lens_map<T: 'static, U: 'static>(
    handle: &LensHandle<T>,
    f: impl Fn(T) -> U + Send + Sync + 'static,
) -> LensHandle<U> {
    handle.map(f)
}

pub fn lens_read<T: 'static, S: VarStore + ?Sized>(store: &mut S, handle: &LensHandle<T>) -> Result<T> {
    handle.read(store)
}
