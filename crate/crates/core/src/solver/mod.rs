//! A small clause-learning SAT solver written purely against
//! [`CLSession`] and flat-lattice cells.
//!
//! Variables are `Flat<bool>` cells. Unit propagation reads a clause's
//! falsified literals through the session and then merges the forced value
//! into the remaining cell, so every propagated assignment carries exactly
//! its clause's falsified literals as its reason. Conflicts are cells that
//! reached top; analysis runs on the dependency graph built from those
//! reasons.

use crate::depgraph::{analyze_conflict, build_graph, CutStrategy, DecisionLevel, DepGraph, LearnedClause, Literal};
use crate::error::{Error, Result};
use crate::lattice::{merge_write, Flat, MergeOutcome};
use crate::reason::CLSession;
use crate::store::{CellId, VarStore};
use crate::value::StoredValue;

pub mod demos;
pub mod dimacs;

pub use dimacs::{parse_dimacs, render_dimacs, ParseError, ParseErrorKind};

/// The value type of a solver variable cell.
pub type BoolCell = Flat<bool>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    /// Signed, 1-based variable indices.
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        CnfFormula { num_vars, clauses }
    }

    /// True when `model[v - 1]` assigns every clause a true literal.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    Fixpoint,
    Conflict(CellId),
}

/// A clause-learning session with one `Flat<bool>` cell per variable.
/// Variable `v` lives in cell `v - 1`.
pub struct SatSession {
    session: CLSession,
    vars: Vec<CellId>,
    propagations: usize,
}

impl SatSession {
    pub fn new(num_vars: usize) -> Self {
        let mut session = CLSession::new();
        let vars = (0..num_vars).map(|_| session.alloc(BoolCell::Unknown)).collect();
        SatSession {
            session,
            vars,
            propagations: 0,
        }
    }

    pub fn session(&self) -> &CLSession {
        &self.session
    }

    pub fn session_mut(&mut self) -> &mut CLSession {
        &mut self.session
    }

    pub fn cell(&self, lit: i32) -> CellId {
        self.vars[lit.unsigned_abs() as usize - 1]
    }

    pub fn var_of(&self, cell: CellId) -> i32 {
        cell.index() as i32 + 1
    }

    pub fn value(&mut self, var: usize) -> Result<BoolCell> {
        let cell = self.vars[var - 1];
        let raw = self.session.peek(cell)?;
        Ok(*raw.downcast_ref::<BoolCell>().expect("bool cell"))
    }

    /// `Some(true)` if the literal holds, `Some(false)` if falsified.
    fn literal_value(&mut self, lit: i32) -> Result<Option<bool>> {
        Ok(match self.value(lit.unsigned_abs() as usize)? {
            Flat::Known(v) => Some(v == (lit > 0)),
            _ => None,
        })
    }

    pub fn num_propagations(&self) -> usize {
        self.propagations
    }

    /// Converts a learned literal (a forbidden `(cell, value)` pair) into a
    /// DIMACS literal.
    pub fn clause_literal(&self, literal: &Literal) -> Result<i32> {
        let var = self.var_of(literal.cell);
        match literal.value.downcast_ref::<BoolCell>() {
            Some(Flat::Known(true)) => Ok(-var),
            Some(Flat::Known(false)) => Ok(var),
            _ => Err(Error::MalformedSession {
                cell: literal.cell,
                detail: format!("cannot forbid {:?}", literal.value),
            }),
        }
    }

    /// Re-reads the falsified literals of `clause` (all but `skip`) through
    /// the session into a fresh window.
    fn read_falsified(&mut self, clause: &[i32], skip: i32) -> Result<()> {
        self.session.reset_assignments();
        for &l in clause {
            if l != skip {
                self.session.read(self.cell(l))?;
            }
        }
        Ok(())
    }

    /// Assigns forced literals until no clause is unit or a cell conflicts.
    pub fn unit_propagate(&mut self, clauses: &[Vec<i32>]) -> Result<Propagation> {
        loop {
            let mut changed = false;
            for clause in clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &l in clause {
                    match self.literal_value(l)? {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None if unassigned.is_none() => {
                            open = 1;
                            unassigned = Some(l);
                        }
                        None if unassigned != Some(l) => open = 2,
                        None => {}
                    }
                }
                if satisfied || open > 1 {
                    continue;
                }
                let lit = match unassigned {
                    Some(l) => l,
                    // Falsified clause: contradict its most recently assigned literal.
                    None => match self.latest_literal(clause) {
                        Some(l) => l,
                        None => continue,
                    },
                };
                self.read_falsified(clause, lit)?;
                let cell = self.cell(lit);
                match merge_write(&mut self.session, cell, BoolCell::Known(lit > 0))? {
                    MergeOutcome::Conflict => return Ok(Propagation::Conflict(cell)),
                    MergeOutcome::Grew => {
                        self.propagations += 1;
                        changed = true;
                    }
                    MergeOutcome::Unchanged => {}
                }
            }
            if !changed {
                return Ok(Propagation::Fixpoint);
            }
        }
    }

    fn latest_literal(&self, clause: &[i32]) -> Option<i32> {
        clause
            .iter()
            .copied()
            .max_by_key(|&l| self.session.latest_event(self.cell(l)).map(|e| e.id))
    }

    /// Opens a decision level assigning `lit` true.
    pub fn decide(&mut self, lit: i32) -> Result<()> {
        self.session.reset_assignments();
        let cell = self.cell(lit);
        self.session.decide(cell, BoolCell::Known(lit > 0))
    }

    pub fn backtrack(&mut self, level: DecisionLevel) -> Result<()> {
        self.session.backtrack(level)
    }

    /// Decision literals currently on the trail, oldest first.
    pub fn decisions(&self) -> Vec<i32> {
        self.session
            .trail()
            .iter()
            .filter(|e| e.is_decision())
            .map(|e| {
                let var = self.var_of(e.cell);
                match e.value.downcast_ref::<BoolCell>() {
                    Some(Flat::Known(false)) => -var,
                    _ => var,
                }
            })
            .collect()
    }

    pub fn model(&mut self) -> Result<Option<Vec<bool>>> {
        let mut model = Vec::with_capacity(self.vars.len());
        for v in 1..=self.vars.len() {
            match self.value(v)? {
                Flat::Known(b) => model.push(b),
                _ => return Ok(None),
            }
        }
        Ok(Some(model))
    }

    fn first_unassigned(&mut self) -> Result<Option<usize>> {
        for v in 1..=self.vars.len() {
            if self.value(v)? == Flat::Unknown {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Satisfiable,
    Unsatisfiable,
    /// The conflict budget ran out.
    Unknown,
}

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    pub strategy: CutStrategy,
    pub max_conflicts: Option<usize>,
    /// Keep a [`ConflictRecord`] per analysed conflict.
    pub record_conflicts: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: usize,
    pub propagations: usize,
    pub conflicts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictRecord {
    /// Decisions on the trail when the conflict occurred, oldest first.
    pub decisions: Vec<i32>,
    pub learned: Vec<i32>,
    /// Index of `learned` in [`SolverResult::learned`].
    pub learned_index: usize,
    pub backjump: DecisionLevel,
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub status: Status,
    pub model: Option<Vec<bool>>,
    /// Learned clauses as DIMACS literals.
    pub learned: Vec<Vec<i32>>,
    pub learned_clauses: Vec<LearnedClause>,
    pub stats: Stats,
    pub conflicts: Vec<ConflictRecord>,
    /// Dependency graph of the last conflict seen.
    pub last_conflict: Option<DepGraph>,
}

/// DPLL with unit propagation, conflict analysis and backjumping.
/// Decides the lowest-index unassigned variable, true first.
pub fn solve(formula: &CnfFormula, opts: &SolverOptions) -> Result<SolverResult> {
    let mut result = SolverResult {
        status: Status::Unknown,
        model: None,
        learned: Vec::new(),
        learned_clauses: Vec::new(),
        stats: Stats::default(),
        conflicts: Vec::new(),
        last_conflict: None,
    };
    if formula.clauses.iter().any(Vec::is_empty) {
        result.status = Status::Unsatisfiable;
        return Ok(result);
    }

    let mut sat = SatSession::new(formula.num_vars);
    let mut clauses = formula.clauses.clone();
    loop {
        match sat.unit_propagate(&clauses)? {
            Propagation::Conflict(cell) => {
                result.stats.conflicts += 1;
                let graph = build_graph(sat.session_mut(), cell)?;
                let analysis = if sat.session().level() == DecisionLevel(0) {
                    Err(Error::Unsatisfiable)
                } else {
                    analyze_conflict(&graph, opts.strategy)
                };
                result.last_conflict = Some(graph);
                let analysis = match analysis {
                    Ok(a) => a,
                    Err(Error::Unsatisfiable) => {
                        result.status = Status::Unsatisfiable;
                        break;
                    }
                    Err(e) => return Err(e),
                };
                let learned = analysis
                    .clause
                    .literals
                    .iter()
                    .map(|l| sat.clause_literal(l))
                    .collect::<Result<Vec<i32>>>()?;
                if opts.record_conflicts {
                    result.conflicts.push(ConflictRecord {
                        decisions: sat.decisions(),
                        learned: learned.clone(),
                        learned_index: result.learned.len(),
                        backjump: analysis.backjump,
                    });
                }
                clauses.push(learned.clone());
                result.learned.push(learned);
                result.learned_clauses.push(analysis.clause);
                sat.backtrack(analysis.backjump)?;
                if opts.max_conflicts.is_some_and(|max| result.stats.conflicts >= max) {
                    result.status = Status::Unknown;
                    break;
                }
            }
            Propagation::Fixpoint => match sat.first_unassigned()? {
                Some(var) => {
                    result.stats.decisions += 1;
                    sat.decide(var as i32)?;
                }
                None => {
                    result.status = Status::Satisfiable;
                    result.model = sat.model()?;
                    break;
                }
            },
        }
    }
    result.stats.propagations = sat.num_propagations();
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplayOutcome {
    /// Propagation hit a conflict after this many decisions.
    Conflict { after: usize },
    /// A pending decision was forced the other way after this many decisions.
    Forced { after: usize, literal: i32 },
    /// Every decision was applied without conflict or contradiction.
    Completed,
}

/// Replays `decisions` against `clauses`, propagating after each one.
pub fn replay_decisions(num_vars: usize, clauses: &[Vec<i32>], decisions: &[i32]) -> Result<ReplayOutcome> {
    let mut sat = SatSession::new(num_vars);
    for (i, &d) in decisions.iter().enumerate() {
        if let Propagation::Conflict(_) = sat.unit_propagate(clauses)? {
            return Ok(ReplayOutcome::Conflict { after: i });
        }
        match sat.literal_value(d)? {
            Some(true) => continue,
            Some(false) => return Ok(ReplayOutcome::Forced { after: i, literal: -d }),
            None => sat.decide(d)?,
        }
    }
    match sat.unit_propagate(clauses)? {
        Propagation::Conflict(_) => Ok(ReplayOutcome::Conflict { after: decisions.len() }),
        Propagation::Fixpoint => Ok(ReplayOutcome::Completed),
    }
}

/// Value stored for a forced literal; used by tests inspecting reasons.
pub fn literal_value(lit: i32) -> StoredValue {
    StoredValue::new(BoolCell::Known(lit > 0))
}
