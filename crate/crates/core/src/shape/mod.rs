//! Recursive data one layer at a time.
//!
//! A [`ShapeDescriptor`] lists the constructors of a shape functor, each with
//! a fixed number of payload fields and recursive child slots. A
//! [`ShapeNode<R>`] is one layer whose child slots have type `R`:
//!
//! * `ShapeNode<FixValue>` builds ordinary, inline recursive values;
//! * `ShapeNode<CellId>` is a layer whose children live in other cells.
//!
//! Folds are Mendler-style: an algebra sees children only as opaque
//! [`Slot`]s and must ask for a child's result with [`Step::recurse`]. For
//! cell-distributed values this makes every descent an observable read, so
//! a tracking store sees exactly the cells the algebra needed.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::store::{CellId, VarStore};
use crate::value::{Naming, Render, StoredValue, TypeTag, Value};

mod lens;
pub mod list;

pub use lens::{lens_map, lens_read, LensHandle};

/// Guard against cyclic cell structures in [`cell_fold`].
pub const DEFAULT_DEPTH_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub tag: String,
    pub payload: Vec<TypeTag>,
    pub children: usize,
}

impl Constructor {
    pub fn new(tag: impl Into<String>, payload: Vec<TypeTag>, children: usize) -> Self {
        Constructor {
            tag: tag.into(),
            payload,
            children,
        }
    }
}

/// Runtime description of a shape functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeDescriptor {
    constructors: Vec<Constructor>,
}

impl ShapeDescriptor {
    pub fn new(constructors: Vec<Constructor>) -> Result<Self> {
        for (i, c) in constructors.iter().enumerate() {
            if constructors[..i].iter().any(|d| d.tag == c.tag) {
                return Err(Error::DuplicateTag(c.tag.clone()));
            }
        }
        Ok(ShapeDescriptor { constructors })
    }

    pub fn constructors(&self) -> &[Constructor] {
        &self.constructors
    }

    pub fn constructor(&self, tag: &str) -> Option<&Constructor> {
        self.constructors.iter().find(|c| c.tag == tag)
    }

    /// Checks tag, arities and payload types of `node`.
    pub fn check<R>(&self, node: &ShapeNode<R>) -> std::result::Result<(), String> {
        let Some(ctor) = self.constructor(node.tag()) else {
            return Err(format!("unknown constructor `{}`", node.tag()));
        };
        if ctor.payload.len() != node.payload.len() {
            return Err(format!(
                "`{}` expects {} payload fields, found {}",
                ctor.tag,
                ctor.payload.len(),
                node.payload.len()
            ));
        }
        if let Some((i, (want, got))) = ctor
            .payload
            .iter()
            .zip(&node.payload)
            .enumerate()
            .find(|(_, (want, got))| **want != got.type_tag())
        {
            return Err(format!(
                "`{}` payload {} should be `{}`, found `{}`",
                ctor.tag,
                i,
                want.name(),
                got.type_tag().name()
            ));
        }
        if ctor.children != node.children.len() {
            return Err(format!(
                "`{}` expects {} children, found {}",
                ctor.tag,
                ctor.children,
                node.children.len()
            ));
        }
        Ok(())
    }
}

/// One layer of a recursive value.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeNode<R> {
    tag: Arc<str>,
    payload: Vec<StoredValue>,
    children: Vec<R>,
}

impl<R> ShapeNode<R> {
    pub fn new(tag: &str, payload: Vec<StoredValue>, children: Vec<R>) -> Self {
        ShapeNode {
            tag: Arc::from(tag),
            payload,
            children,
        }
    }

    pub fn leaf(tag: &str) -> Self {
        Self::new(tag, Vec::new(), Vec::new())
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn payload(&self) -> &[StoredValue] {
        &self.payload
    }

    pub fn payload_as<T: Value>(&self, index: usize) -> Option<&T> {
        self.payload.get(index)?.downcast_ref::<T>()
    }

    pub fn children(&self) -> &[R] {
        &self.children
    }

    pub fn into_children(self) -> Vec<R> {
        self.children
    }

    pub fn map_children<S>(self, f: impl FnMut(R) -> S) -> ShapeNode<S> {
        ShapeNode {
            tag: self.tag,
            payload: self.payload,
            children: self.children.into_iter().map(f).collect(),
        }
    }

    fn with_children<S>(&self, children: Vec<S>) -> ShapeNode<S> {
        ShapeNode {
            tag: self.tag.clone(),
            payload: self.payload.clone(),
            children,
        }
    }
}

/// Reason rendering: `lcons false p2`.
impl<R: Render> Render for ShapeNode<R> {
    fn render(&self, names: Naming<'_>) -> String {
        let mut out = self.tag.to_string();
        for p in &self.payload {
            out.push(' ');
            out.push_str(&p.render(names));
        }
        for c in &self.children {
            out.push(' ');
            out.push_str(&c.render(names));
        }
        out
    }
}

/// Debug rendering: `lcons(false, c2)`.
impl fmt::Display for ShapeNode<CellId> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |c: CellId| c.to_string();
        let fields: Vec<String> = self
            .payload
            .iter()
            .map(|p| p.render(&names))
            .chain(self.children.iter().map(|c| c.to_string()))
            .collect();
        write!(f, "{}({})", self.tag, fields.join(", "))
    }
}

/// A finite recursive value: a layer whose children are again `FixValue`s.
#[derive(Clone, PartialEq)]
pub struct FixValue(Arc<ShapeNode<FixValue>>);

impl FixValue {
    pub fn node(&self) -> &ShapeNode<FixValue> {
        &self.0
    }

    pub fn fold<A: 'static>(&self, alg: &dyn MendlerAlgebra<A>) -> A {
        mendler_fold(alg, self)
    }
}

impl fmt::Debug for FixValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.tag)?;
        if !self.0.payload.is_empty() || !self.0.children.is_empty() {
            f.debug_list()
                .entries(self.0.payload.iter().map(|p| p as &dyn fmt::Debug))
                .entries(self.0.children.iter().map(|c| c as &dyn fmt::Debug))
                .finish()?;
        }
        Ok(())
    }
}

// Long chains would otherwise drop recursively.
impl Drop for FixValue {
    fn drop(&mut self) {
        let mut pending = Vec::new();
        if let Some(node) = Arc::get_mut(&mut self.0) {
            pending.append(&mut node.children);
        }
        while let Some(mut v) = pending.pop() {
            if let Some(node) = Arc::get_mut(&mut v.0) {
                pending.append(&mut node.children);
            }
        }
    }
}

/// Wraps one layer into a fixpoint value.
pub fn fix_in(node: ShapeNode<FixValue>) -> FixValue {
    FixValue(Arc::new(node))
}

/// Exposes the top constructor of a fixpoint value.
pub fn fix_out(value: &FixValue) -> ShapeNode<FixValue> {
    (*value.0).clone()
}

/// Opaque child slot handed to an algebra. Its contents can only be
/// consumed through [`Step::recurse`].
#[derive(Clone)]
pub struct Slot(SlotRef);

#[derive(Clone)]
enum SlotRef {
    Inline(FixValue),
    Cell(CellId),
}

impl fmt::Debug for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Slot(..)")
    }
}

type Continuation<A> = Box<dyn FnOnce(A) -> Step<A>>;

/// What an algebra step does next: finish with a result, or ask for the
/// result of one child slot and continue with it.
pub enum Step<A> {
    Done(A),
    Recurse(Slot, Continuation<A>),
}

impl<A: 'static> Step<A> {
    pub fn done(value: A) -> Self {
        Step::Done(value)
    }

    pub fn recurse(slot: Slot, then: impl FnOnce(A) -> Step<A> + 'static) -> Self {
        Step::Recurse(slot, Box::new(then))
    }

    /// Recurse into each slot left to right, then continue with all results.
    pub fn recurse_all(slots: Vec<Slot>, then: impl FnOnce(Vec<A>) -> Step<A> + 'static) -> Self {
        fn go<A: 'static>(
            mut rest: std::vec::IntoIter<Slot>,
            mut acc: Vec<A>,
            then: Box<dyn FnOnce(Vec<A>) -> Step<A>>,
        ) -> Step<A> {
            match rest.next() {
                None => then(acc),
                Some(slot) => Step::recurse(slot, move |a| {
                    acc.push(a);
                    go(rest, acc, then)
                }),
            }
        }
        let n = slots.len();
        go(slots.into_iter(), Vec::with_capacity(n), Box::new(then))
    }
}

/// A Mendler-style algebra: one fold step over a layer with opaque slots.
pub trait MendlerAlgebra<A> {
    fn step(&self, node: ShapeNode<Slot>) -> Step<A>;
}

impl<A, F> MendlerAlgebra<A> for F
where
    F: Fn(ShapeNode<Slot>) -> Step<A>,
{
    fn step(&self, node: ShapeNode<Slot>) -> Step<A> {
        self(node)
    }
}

/// Runs `alg` to completion using an explicit continuation stack.
/// `resolve` yields the layer behind a slot; `limit` bounds nesting.
fn drive<A: 'static>(
    alg: &dyn MendlerAlgebra<A>,
    root: ShapeNode<Slot>,
    limit: usize,
    mut resolve: impl FnMut(Slot) -> Result<ShapeNode<Slot>>,
) -> Result<A> {
    let mut pending: Vec<Continuation<A>> = Vec::new();
    let mut step = alg.step(root);
    loop {
        match step {
            Step::Done(value) => match pending.pop() {
                None => return Ok(value),
                Some(k) => step = k(value),
            },
            Step::Recurse(slot, k) => {
                pending.push(k);
                if pending.len() > limit {
                    return Err(Error::CyclicStructure { limit });
                }
                step = alg.step(resolve(slot)?);
            }
        }
    }
}

fn inline_layer(value: &FixValue) -> ShapeNode<Slot> {
    let node = value.node();
    node.with_children(
        node.children
            .iter()
            .map(|c| Slot(SlotRef::Inline(c.clone())))
            .collect(),
    )
}

fn cell_layer(node: &ShapeNode<CellId>) -> ShapeNode<Slot> {
    node.with_children(node.children.iter().map(|&c| Slot(SlotRef::Cell(c))).collect())
}

/// Folds an inline value.
///
/// Panics if the algebra recurses on a slot that came from a different fold
/// over cells.
pub fn mendler_fold<A: 'static>(alg: &dyn MendlerAlgebra<A>, value: &FixValue) -> A {
    let result = drive(alg, inline_layer(value), usize::MAX, |slot| match slot.0 {
        SlotRef::Inline(v) => Ok(inline_layer(&v)),
        SlotRef::Cell(_) => panic!("cell slot passed to an inline fold"),
    });
    match result {
        Ok(a) => a,
        Err(e) => unreachable!("inline fold cannot fail: {e}"),
    }
}

/// Allocates one cell per layer, children before parents, and returns the
/// root cell. Each cell holds a `ShapeNode<CellId>`.
pub fn distribute<S: VarStore + ?Sized>(store: &mut S, value: &FixValue) -> CellId {
    struct Frame {
        value: FixValue,
        next_child: usize,
        ids: Vec<CellId>,
    }
    let frame = |value: &FixValue| Frame {
        value: value.clone(),
        next_child: 0,
        ids: Vec::with_capacity(value.node().children.len()),
    };

    let mut stack = vec![frame(value)];
    loop {
        let top = stack.last_mut().expect("non-empty");
        if let Some(child) = top.value.node().children.get(top.next_child) {
            top.next_child += 1;
            let child = child.clone();
            stack.push(frame(&child));
            continue;
        }
        let done = stack.pop().expect("non-empty");
        let layer: ShapeNode<CellId> = done.value.node().with_children(done.ids);
        let id = store.alloc_stored(StoredValue::new(layer));
        match stack.last_mut() {
            Some(parent) => parent.ids.push(id),
            None => return id,
        }
    }
}

fn load_layer<S: VarStore + ?Sized>(
    store: &mut S,
    desc: &ShapeDescriptor,
    cell: CellId,
) -> Result<ShapeNode<Slot>> {
    let value = store.read(cell)?;
    let node = value
        .downcast_ref::<ShapeNode<CellId>>()
        .ok_or_else(|| Error::MalformedShape {
            cell,
            detail: format!("holds `{}`", value.type_tag().name()),
        })?;
    desc.check(node)
        .map_err(|detail| Error::MalformedShape { cell, detail })?;
    Ok(cell_layer(node))
}

/// Folds a cell-distributed value rooted at `root`. A child cell is read
/// only when the algebra recurses into its slot.
pub fn cell_fold<S, A>(
    store: &mut S,
    desc: &ShapeDescriptor,
    alg: &dyn MendlerAlgebra<A>,
    root: CellId,
) -> Result<A>
where
    S: VarStore + ?Sized,
    A: 'static,
{
    cell_fold_with_limit(store, desc, alg, root, DEFAULT_DEPTH_LIMIT)
}

pub fn cell_fold_with_limit<S, A>(
    store: &mut S,
    desc: &ShapeDescriptor,
    alg: &dyn MendlerAlgebra<A>,
    root: CellId,
    depth_limit: usize,
) -> Result<A>
where
    S: VarStore + ?Sized,
    A: 'static,
{
    let first = load_layer(store, desc, root)?;
    drive(alg, first, depth_limit, |slot| match slot.0 {
        SlotRef::Cell(c) => load_layer(store, desc, c),
        SlotRef::Inline(_) => Err(Error::MalformedShape {
            cell: root,
            detail: "inline slot passed to a cell fold".into(),
        }),
    })
}

/// Rebuilds the value layer by layer. Folding with it is the identity.
pub fn rebuild_algebra() -> impl MendlerAlgebra<FixValue> {
    |node: ShapeNode<Slot>| {
        let children = node.children.clone();
        let tag = node.tag.clone();
        let payload = node.payload.clone();
        Step::recurse_all(children, move |kids| {
            Step::done(fix_in(ShapeNode {
                tag,
                payload,
                children: kids,
            }))
        })
    }
}
