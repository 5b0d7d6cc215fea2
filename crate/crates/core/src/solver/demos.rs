//! Reason-producing demos: the short-circuiting `any` over a cell list, and
//! a Sudoku validity check whose failure reason is the violated
//! constraint's reads.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::reason::{render_reasons, CLSession};
use crate::shape::list::{any_algebra, fix_list, list_descriptor};
use crate::shape::{cell_fold, distribute};
use crate::store::{CellId, VarStore};
use crate::value::pointer_name;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnyDemo {
    pub result: bool,
    pub reasons: String,
    /// List cells the fold read.
    pub cells_read: usize,
}

/// Distributes `bits` over cells, folds `any` under a clause-learning
/// session and renders the reason of the result cell.
pub fn demo_any(bits: &[bool]) -> Result<AnyDemo> {
    let mut session = CLSession::new();
    let root = distribute(&mut session, &fix_list(bits));
    let result = cell_fold(&mut session, &list_descriptor::<bool>(), &any_algebra(), root)?;
    let cells_read = session.current_assignments().len();
    let cell = session.alloc(result);
    let reasons = render_reasons(&session.get_reasons(cell)?, &pointer_name);
    Ok(AnyDemo {
        result,
        reasons,
        cells_read,
    })
}

/// A 9x9 grid; `None` is an empty square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SudokuGrid {
    pub cells: [[Option<u8>; 9]; 9],
}

impl SudokuGrid {
    pub fn empty() -> Self {
        Self::default()
    }

    /// 1-based row and column.
    pub fn get(&self, row: usize, col: usize) -> Option<u8> {
        self.cells[row - 1][col - 1]
    }

    pub fn set(&mut self, row: usize, col: usize, digit: Option<u8>) {
        assert!(digit.is_none_or(|d| (1..=9).contains(&d)), "digit out of range");
        self.cells[row - 1][col - 1] = digit;
    }
}

/// Nine lines of nine squares: `1`-`9`, or `.`, `0`, `_` for empty.
/// Whitespace inside a line, blank lines and `#` comments are ignored.
impl FromStr for SudokuGrid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if rows.len() != 9 {
            return Err(Error::MalformedGrid(format!("expected 9 rows, found {}", rows.len())));
        }
        let mut grid = SudokuGrid::empty();
        for (r, line) in rows.iter().enumerate() {
            let squares: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if squares.len() != 9 {
                return Err(Error::MalformedGrid(format!(
                    "row {} has {} squares",
                    r + 1,
                    squares.len()
                )));
            }
            for (c, ch) in squares.into_iter().enumerate() {
                grid.cells[r][c] = match ch {
                    '1'..='9' => Some(ch as u8 - b'0'),
                    '.' | '0' | '_' => None,
                    other => {
                        return Err(Error::MalformedGrid(format!(
                            "row {} column {}: unexpected `{other}`",
                            r + 1,
                            c + 1
                        )))
                    }
                };
            }
        }
        Ok(grid)
    }
}

impl fmt::Display for SudokuGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.cells {
            for sq in row {
                match sq {
                    Some(d) => write!(f, "{d}")?,
                    None => f.write_str(".")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Row(usize),
    Column(usize),
    Box(usize),
}

impl Constraint {
    /// Row-major scan order: rows, then columns, then boxes.
    pub fn all() -> impl Iterator<Item = Constraint> {
        (1..=9)
            .map(Constraint::Row)
            .chain((1..=9).map(Constraint::Column))
            .chain((1..=9).map(Constraint::Box))
    }

    /// 1-based `(row, col)` squares in read order.
    pub fn squares(self) -> Vec<(usize, usize)> {
        match self {
            Constraint::Row(r) => (1..=9).map(|c| (r, c)).collect(),
            Constraint::Column(c) => (1..=9).map(|r| (r, c)).collect(),
            Constraint::Box(b) => {
                let (r0, c0) = ((b - 1) / 3 * 3, (b - 1) % 3 * 3);
                (0..9).map(|i| (r0 + i / 3 + 1, c0 + i % 3 + 1)).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SudokuDemo {
    pub valid: bool,
    pub reasons: String,
    pub violated: Option<Constraint>,
    /// Squares in the result's reason, in read order.
    pub reason_squares: Vec<(usize, usize)>,
}

fn square_of(cell: CellId) -> Option<(usize, usize)> {
    let i = cell.index();
    (i < 81).then(|| (i / 9 + 1, i % 9 + 1))
}

pub fn sudoku_cell_name(cell: CellId) -> String {
    match square_of(cell) {
        Some((r, c)) => format!("sfield at ({r} , {c})"),
        None => pointer_name(cell),
    }
}

/// Validity check over cells. Each constraint is read in its own window and
/// the scan stops at the first repeated digit; the result's reason is that
/// constraint's reads so far. A valid grid's reason is a read of every
/// square.
pub fn demo_sudoku(grid: &SudokuGrid) -> Result<SudokuDemo> {
    let mut session = CLSession::new();
    let mut squares = Vec::with_capacity(81);
    for row in &grid.cells {
        for sq in row {
            squares.push(session.alloc(*sq));
        }
    }
    let at = |r: usize, c: usize| squares[(r - 1) * 9 + (c - 1)];

    let mut violated = None;
    'scan: for constraint in Constraint::all() {
        session.reset_assignments();
        let mut seen = [false; 10];
        for (r, c) in constraint.squares() {
            if let Some(d) = *session.read_as::<Option<u8>>(at(r, c))? {
                if std::mem::replace(&mut seen[d as usize], true) {
                    violated = Some(constraint);
                    break 'scan;
                }
            }
        }
    }
    if violated.is_none() {
        session.reset_assignments();
        for &cell in &squares {
            session.read(cell)?;
        }
    }
    let valid = violated.is_none();
    let result = session.alloc(valid);
    let log = session.get_reasons(result)?;
    let reason_squares = log
        .last()
        .map(|r| r.cells().filter_map(square_of).collect())
        .unwrap_or_default();
    Ok(SudokuDemo {
        valid,
        reasons: render_reasons(&log, &sudoku_cell_name),
        violated,
        reason_squares,
    })
}

/// Untracked reference checker.
pub fn sudoku_is_valid(grid: &SudokuGrid) -> bool {
    Constraint::all().all(|constraint| {
        let digits: Vec<u8> = constraint
            .squares()
            .into_iter()
            .filter_map(|(r, c)| grid.get(r, c))
            .collect();
        (1..=9u8).all(|d| digits.iter().filter(|&&x| x == d).count() <= 1)
    })
}
