//! Dependency-tracking variable stores.
//!
//! Recursive data is spread over typed cells ([`shape`]), every read can be
//! tracked ([`tracking`]), and every allocation or write records the reads
//! that preceded it as its reason ([`reason`]). From those reasons the
//! [`depgraph`] module builds dependency graphs and learned clauses, which
//! the [`solver`] module uses for a small clause-learning SAT solver.
//!
//! ```
//! use vartrack::prelude::*;
//! use vartrack::shape::list::{any_algebra, fix_list, list_descriptor};
//!
//! let mut session = CLSession::new();
//! let root = distribute(&mut session, &fix_list(&[false, true, false]));
//! let any = cell_fold(&mut session, &list_descriptor::<bool>(), &any_algebra(), root).unwrap();
//! let result = session.alloc(any);
//! let reasons = session.get_reasons(result).unwrap();
//! assert_eq!(
//!     render_reasons(&reasons, &pointer_name),
//!     "(p3 = lcons false p2) ^ (p2 = lcons true p1)"
//! );
//! ```

pub mod depgraph;
pub mod error;
pub mod lattice;
pub mod reason;
pub mod shape;
pub mod solver;
pub mod store;
pub mod tracking;
pub mod value;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::depgraph::{
        analyze_conflict, build_graph, earliest_decision, export_dot, CutStrategy, DecisionLevel, DepGraph,
        LearnedClause, Literal, Polarity,
    };
    pub use crate::lattice::{is_conflict, merge_write, CandidateSet, Flat, Lattice, MergeOutcome};
    pub use crate::reason::{render_reasons, CLSession, ProductStore, ReasonLog, TupleCell};
    pub use crate::shape::{
        cell_fold, distribute, fix_in, fix_out, lens_map, mendler_fold, FixValue, LensHandle, MendlerAlgebra,
        ShapeDescriptor, ShapeNode, Slot, Step,
    };
    pub use crate::store::{CellId, Store, VarStore};
    pub use crate::tracking::{AssignmentContainer, AssignmentEntry, TrackingSession};
    pub use crate::value::{pointer_name, Render, StoredValue, Value};
}
