//! DIMACS CNF input and output.

use std::fmt;

use thiserror::Error;

use super::CnfFormula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    MalformedHeader(String),
    DuplicateHeader,
    InvalidLiteral(String),
    VariableOutOfRange { literal: i64, num_vars: usize },
    UnterminatedClause,
    ClauseCountMismatch { expected: usize, found: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingHeader => write!(f, "clause before `p cnf` header"),
            ParseErrorKind::MalformedHeader(h) => write!(f, "malformed header `{h}`"),
            ParseErrorKind::DuplicateHeader => write!(f, "second `p` header"),
            ParseErrorKind::InvalidLiteral(t) => write!(f, "invalid literal `{t}`"),
            ParseErrorKind::VariableOutOfRange { literal, num_vars } => {
                write!(f, "literal {literal} outside 1..={num_vars}")
            }
            ParseErrorKind::UnterminatedClause => write!(f, "last clause is not terminated by 0"),
            ParseErrorKind::ClauseCountMismatch { expected, found } => {
                write!(f, "header declares {expected} clauses, found {found}")
            }
        }
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize), ParseError> {
    let bad = || ParseError {
        line: lineno,
        kind: ParseErrorKind::MalformedHeader(line.to_string()),
    };
    let mut it = line.split_whitespace();
    if it.next() != Some("p") || it.next() != Some("cnf") {
        return Err(bad());
    }
    let vars = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let clauses = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((vars, clauses))
}

/// Parses DIMACS CNF. Clauses may span lines; a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError {
                    line: lineno,
                    kind: ParseErrorKind::DuplicateHeader,
                });
            }
            header = Some(parse_header(line, lineno)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(ParseError {
                line: lineno,
                kind: ParseErrorKind::MissingHeader,
            });
        };
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| ParseError {
                line: lineno,
                kind: ParseErrorKind::InvalidLiteral(token.to_string()),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() > num_vars as u64 {
                return Err(ParseError {
                    line: lineno,
                    kind: ParseErrorKind::VariableOutOfRange { literal: lit, num_vars },
                });
            }
            current.push(lit as i32);
        }
    }

    let Some((num_vars, expected)) = header else {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::MissingHeader,
        });
    };
    if !current.is_empty() {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::UnterminatedClause,
        });
    }
    if clauses.len() != expected {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::ClauseCountMismatch {
                expected,
                found: clauses.len(),
            },
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

pub fn render_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars, formula.clauses.len());
    for clause in &formula.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
