//! Verification reports shared by every checker.
//!
//! A failed identity is a report outcome, never an error. Reports sort by
//! `(suite, relation)` and serialize deterministically; `elapsed_ms` is the
//! only field excluded from the byte-identity guarantee, and it is omitted
//! from JSON unless requested.

use std::fmt;

use serde::Serialize;

use crate::kernel::SafeWindow;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The identity holds on a nonempty verified region.
    Pass,
    /// Some verified cell is nonzero.
    Fail,
    /// Nothing could be verified (empty safe window).
    Skipped,
    /// The check could not be carried out.
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Error => "error",
        })
    }
}

/// A nonzero residual cell: grid position `(m, n)` and the row-major index
/// of the offending matrix entry. Plain matrix identities use `m = n = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FailingCell {
    /// Exponent of the first grid variable.
    pub m: i32,
    /// Exponent of the second grid variable.
    pub n: i32,
    /// Row-major entry index within the cell matrix.
    pub entry: usize,
}

/// Result of checking one identity or relation.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// Group name (suite or verifier family).
    pub suite: String,
    /// Identity name.
    pub relation: String,
    /// Outcome.
    pub status: Status,
    /// Number of cells (matrix entries times grid cells) compared.
    pub cells_checked: usize,
    /// Nonzero residual cells, truncated to the first few hundred.
    pub failing_cells: Vec<FailingCell>,
    /// Region on which the verdict was reached, for series identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safe_window: Option<SafeWindow>,
    /// Free-form facts the verdict depends on (conventions, directions,
    /// discovered parameters, error messages).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock time; not part of the determinism guarantee.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

/// Maximal number of failing cells recorded per report.
pub const MAX_FAILING_CELLS: usize = 256;

impl CheckReport {
    /// A report with the given outcome and no details.
    pub fn new(suite: &str, relation: &str, status: Status) -> Self {
        CheckReport {
            suite: suite.to_string(),
            relation: relation.to_string(),
            status,
            cells_checked: 0,
            failing_cells: Vec::new(),
            safe_window: None,
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    /// A report for a check that raised an error.
    pub fn error(suite: &str, relation: &str, err: &crate::Error) -> Self {
        let mut r = Self::new(suite, relation, Status::Error);
        r.notes.push(err.to_string());
        r
    }

    /// A verdict from a list of failing cells: pass iff there are none and
    /// at least one cell was compared.
    pub fn from_cells(suite: &str, relation: &str, checked: usize, mut failing: Vec<FailingCell>) -> Self {
        let status = if checked == 0 {
            Status::Skipped
        } else if failing.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        failing.sort();
        failing.truncate(MAX_FAILING_CELLS);
        let mut r = Self::new(suite, relation, status);
        r.cells_checked = checked;
        r.failing_cells = failing;
        r
    }

    /// Adds a note.
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Whether the check passed.
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Sorts reports by `(suite, relation)`, the fixed output order.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| (&a.suite, &a.relation).cmp(&(&b.suite, &b.relation)));
}

/// The process exit code for a batch of reports: 1 if anything failed,
/// otherwise 2 if anything was skipped or errored, otherwise 0.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| matches!(r.status, Status::Skipped | Status::Error)) {
        2
    } else {
        0
    }
}

/// One line per report: `status suite/relation [details]`.
pub fn render_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{:<7} {}/{}", r.status.to_string(), r.suite, r.relation));
        if r.cells_checked > 0 {
            out.push_str(&format!("  cells={}", r.cells_checked));
        }
        if let Some(w) = &r.safe_window {
            match (w.m, w.n) {
                (Some(m), Some(n)) => out.push_str(&format!(
                    "  safe=[{},{}]x[{},{}]",
                    m.0, m.1, n.0, n.1
                )),
                _ => out.push_str("  safe=empty"),
            }
        }
        if !r.failing_cells.is_empty() {
            let shown: Vec<String> = r
                .failing_cells
                .iter()
                .take(4)
                .map(|c| format!("({},{},{})", c.m, c.n, c.entry))
                .collect();
            out.push_str(&format!("  failing={}", shown.join(" ")));
        }
        out.push('\n');
        for note in &r.notes {
            out.push_str(&format!("        - {note}\n"));
        }
    }
    out
}
