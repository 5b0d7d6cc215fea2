//! Dynamically typed, immutable cell contents.
//!
//! Every value that lives in a cell satisfies [`Value`]: it can be rendered
//! (with cell references named by the caller), compared for equality and
//! downcast back to its concrete type. The blanket impl means any
//! `PartialEq + Debug + Render` type is storable.

use std::any::{Any, TypeId};
use std::fmt;
use std::sync::Arc;

use crate::store::CellId;

/// Maps a cell to the name used when rendering reasons and graphs.
pub type Naming<'a> = &'a dyn Fn(CellId) -> String;

/// The default naming scheme: `p<index>`.
pub fn pointer_name(cell: CellId) -> String {
    format!("p{}", cell.index())
}

/// Text rendering of a stored value. Cell references are rendered through
/// the supplied naming function.
pub trait Render {
    fn render(&self, names: Naming<'_>) -> String;
}

macro_rules! render_via_display {
    ($($t:ty),* $(,)?) => {
        $(impl Render for $t {
            fn render(&self, _names: Naming<'_>) -> String {
                self.to_string()
            }
        })*
    };
}

render_via_display!(bool, char, i8, i16, i32, i64, u8, u16, u32, u64, usize, isize, String);

impl Render for &'static str {
    fn render(&self, _names: Naming<'_>) -> String {
        (*self).to_string()
    }
}

impl Render for CellId {
    fn render(&self, names: Naming<'_>) -> String {
        names(*self)
    }
}

impl<T: Render> Render for Option<T> {
    fn render(&self, names: Naming<'_>) -> String {
        match self {
            Some(v) => v.render(names),
            None => "_".to_string(),
        }
    }
}

/// Runtime identity of a stored value's type.
#[derive(Clone, Copy, Debug)]
pub struct TypeTag {
    id: TypeId,
    name: &'static str,
}

impl TypeTag {
    pub fn of<T: Any>() -> Self {
        TypeTag {
            id: TypeId::of::<T>(),
            name: std::any::type_name::<T>(),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }
}

impl PartialEq for TypeTag {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for TypeTag {}

/// Capabilities required of every cell value: show and equality.
/// Implemented automatically for every qualifying type.
pub trait Value: Any + Send + Sync + fmt::Debug + PartialEq + Render {}

impl<T> Value for T where T: Any + Send + Sync + fmt::Debug + PartialEq + Render {}

/// Object-safe view of a [`Value`].
pub trait DynValue: Any + Send + Sync + fmt::Debug {
    fn as_any(&self) -> &dyn Any;
    fn into_any(self: Arc<Self>) -> Arc<dyn Any + Send + Sync>;
    fn type_tag(&self) -> TypeTag;
    fn render_value(&self, names: Naming<'_>) -> String;
    fn eq_value(&self, other: &dyn DynValue) -> bool;
}

impl<T: Value> DynValue for T {
    fn as_any(&self) -> &dyn Any {
        self
    }

    fn into_any(self: Arc<Self>) -> Arc<dyn Any + Send + Sync> {
        self
    }

    fn type_tag(&self) -> TypeTag {
        TypeTag::of::<T>()
    }

    fn render_value(&self, names: Naming<'_>) -> String {
        self.render(names)
    }

    fn eq_value(&self, other: &dyn DynValue) -> bool {
        other.as_any().downcast_ref::<T>() == Some(self)
    }
}

/// An immutable snapshot of a cell's contents. Cloning shares the snapshot.
#[derive(Clone)]
pub struct StoredValue(Arc<dyn DynValue>);

impl StoredValue {
    pub fn new<T: Value>(value: T) -> Self {
        StoredValue(Arc::new(value))
    }

    pub fn type_tag(&self) -> TypeTag {
        self.0.type_tag()
    }

    pub fn is<T: Value>(&self) -> bool {
        self.0.as_any().is::<T>()
    }

    pub fn downcast_ref<T: Value>(&self) -> Option<&T> {
        self.0.as_any().downcast_ref::<T>()
    }

    /// Shared handle to the concrete value.
    pub fn downcast<T: Value>(&self) -> Option<Arc<T>> {
        self.0.clone().into_any().downcast::<T>().ok()
    }

    pub fn render(&self, names: Naming<'_>) -> String {
        self.0.render_value(names)
    }

    /// True when both handles point at the same snapshot.
    pub fn ptr_eq(&self, other: &StoredValue) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for StoredValue {
    fn eq(&self, other: &Self) -> bool {
        self.0.eq_value(other.0.as_ref())
    }
}

impl fmt::Debug for StoredValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl Render for StoredValue {
    fn render(&self, names: Naming<'_>) -> String {
        StoredValue::render(self, names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_type_sensitive() {
        assert_eq!(StoredValue::new(5i64), StoredValue::new(5i64));
        assert_ne!(StoredValue::new(5i64), StoredValue::new(5i32));
        assert_ne!(StoredValue::new(true), StoredValue::new(false));
    }

    #[test]
    fn downcast_round_trip() {
        let v = StoredValue::new(String::from("x"));
        assert_eq!(v.downcast_ref::<String>().unwrap(), "x");
        assert!(v.downcast::<bool>().is_none());
        assert_eq!(*v.downcast::<String>().unwrap(), "x");
        assert_eq!(v.type_tag(), TypeTag::of::<String>());
    }

    #[test]
    fn renders_options_and_cells() {
        assert_eq!(Some(5u8).render(&pointer_name), "5");
        assert_eq!(None::<u8>.render(&pointer_name), "_");
        assert_eq!(CellId::from_index(3).render(&pointer_name), "p3");
    }
}
