use thiserror::Error;

use crate::store::CellId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The handle was not allocated by this store.
    #[error("unknown cell {0}; handle does not belong to this store")]
    UnknownCell(CellId),
    #[error("cell {cell} holds `{expected}`, got `{found}`")]
    TypeMismatch {
        cell: CellId,
        expected: &'static str,
        found: &'static str,
    },
    #[error("duplicate constructor tag `{0}` in shape descriptor")]
    DuplicateTag(String),
    #[error("cell {cell} does not hold a valid shape node: {detail}")]
    MalformedShape { cell: CellId, detail: String },
    #[error("fold exceeded the depth limit of {limit}; structure is likely cyclic")]
    CyclicStructure { limit: usize },
    #[error("session is malformed at cell {cell}: {detail}")]
    MalformedSession { cell: CellId, detail: String },
    #[error("conflict does not depend on any decision; the instance is unsatisfiable")]
    Unsatisfiable,
    #[error("malformed sudoku grid: {0}")]
    MalformedGrid(String),
}
