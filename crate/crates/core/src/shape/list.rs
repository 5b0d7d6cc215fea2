//! The list shape (`nil` / `lcons x xs`) and the folds used throughout the
//! demos and tests.

use std::ops::Add;

use super::{fix_in, Constructor, FixValue, MendlerAlgebra, ShapeDescriptor, ShapeNode, Slot, Step};
use crate::value::{TypeTag, Value};

pub const NIL: &str = "nil";
pub const CONS: &str = "lcons";

pub fn list_descriptor<T: Value>() -> ShapeDescriptor {
    ShapeDescriptor::new(vec![
        Constructor::new(NIL, vec![], 0),
        Constructor::new(CONS, vec![TypeTag::of::<T>()], 1),
    ])
    .expect("list constructors are distinct")
}

/// Builds an inline list from a slice.
pub fn fix_list<T: Value + Clone>(items: &[T]) -> FixValue {
    items.iter().rev().fold(fix_in(ShapeNode::leaf(NIL)), |tail, x| {
        fix_in(ShapeNode::new(
            CONS,
            vec![crate::value::StoredValue::new(x.clone())],
            vec![tail],
        ))
    })
}

/// `any`, short-circuiting: the tail is only consumed after a `false`.
pub fn any_algebra() -> impl MendlerAlgebra<bool> {
    |node: ShapeNode<Slot>| match node.tag() {
        CONS if *node.payload_as::<bool>(0).expect("bool payload") => Step::done(true),
        CONS => Step::recurse(node.into_children().remove(0), Step::done),
        _ => Step::done(false),
    }
}

pub fn length_algebra() -> impl MendlerAlgebra<usize> {
    |node: ShapeNode<Slot>| match node.tag() {
        CONS => Step::recurse(node.into_children().remove(0), |n| Step::done(n + 1)),
        _ => Step::done(0),
    }
}

pub fn sum_algebra<T>() -> impl MendlerAlgebra<T>
where
    T: Value + Copy + Default + Add<Output = T>,
{
    |node: ShapeNode<Slot>| match node.tag() {
        CONS => {
            let x = *node.payload_as::<T>(0).expect("numeric payload");
            Step::recurse(node.into_children().remove(0), move |s| Step::done(x + s))
        }
        _ => Step::done(T::default()),
    }
}
