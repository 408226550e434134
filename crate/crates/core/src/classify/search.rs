//! Exhaustive search for PMDS completions of a partially specified matrix.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{Matrix, MatrixError};
use crate::pmds::{pmds_oracle, PmdsError, PmdsParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search over {wildcards} wildcards ({assignments} assignments) exceeds the budget of {max_wildcards} wildcards / {max_assignments} assignments")]
    BudgetExceeded {
        wildcards: usize,
        assignments: u128,
        max_wildcards: usize,
        max_assignments: u64,
    },
    #[error("template is {rows}x{cols} but parameters need {k}x{n}")]
    Shape { rows: usize, cols: usize, k: usize, n: usize },
    #[error("template has {got} entries, expected {expected}")]
    EntryCount { got: usize, expected: usize },
    #[error("entry {value} is not an element of {field}")]
    Entry { value: u32, field: String },
    #[error(transparent)]
    Pmds(#[from] PmdsError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A matrix whose `None` entries are free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Template {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Option<u32>>,
}

impl Template {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Option<u32>>) -> Result<Self, SearchError> {
        if entries.len() != rows * cols {
            return Err(SearchError::EntryCount {
                got: entries.len(),
                expected: rows * cols,
            });
        }
        if let Some(value) = entries.iter().flatten().copied().find(|&v| !field.contains(v)) {
            return Err(SearchError::Entry {
                value,
                field: field.to_string(),
            });
        }
        Ok(Self {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// `m` with the given `(row, col)` positions made free.
    pub fn from_matrix(m: &Matrix, free: &[(usize, usize)]) -> Self {
        let mut entries: Vec<Option<u32>> = m.data().iter().map(|&v| Some(v)).collect();
        for &(r, c) in free {
            entries[r * m.cols() + c] = None;
        }
        Self {
            field: m.field().clone(),
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<u32> {
        self.entries[r * self.cols + c]
    }

    /// Free positions in row-major order.
    pub fn wildcards(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .cartesian_product(0..self.cols)
            .filter(|&(r, c)| self.get(r, c).is_none())
            .collect()
    }

    /// The template with every free entry set to `values` in row-major order.
    pub fn fill(&self, values: &[u32]) -> Matrix {
        let mut vals = values.iter();
        let data = self
            .entries
            .iter()
            .map(|e| e.unwrap_or_else(|| *vals.next().expect("one value per wildcard")))
            .collect();
        Matrix::new(self.field.clone(), self.rows, self.cols, data).expect("shape and values checked")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_wildcards: usize,
    /// Upper bound on `q^wildcards`.
    pub max_assignments: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_wildcards: 8,
            max_assignments: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletionOutcome {
    /// Completions in canonical order: the first one, or all of them.
    pub completions: Vec<Matrix>,
    /// Search-tree nodes visited (partial and full assignments).
    pub nodes: u64,
    /// Full assignments handed to the exhaustive oracle.
    pub leaves: u64,
}

impl CompletionOutcome {
    pub fn first(&self) -> Option<&Matrix> {
        self.completions.first()
    }
}

/// A necessary condition for PMDS on a set of columns.
enum Constraint {
    /// The `k` columns are independent.
    Independent(Vec<usize>),
    /// The columns span at most `ell` dimensions.
    RankAtMost(Vec<usize>, usize),
}

impl Constraint {
    fn columns(&self) -> &[usize] {
        match self {
            Constraint::Independent(c) | Constraint::RankAtMost(c, _) => c,
        }
    }

    fn holds(&self, g: &Matrix) -> bool {
        match self {
            Constraint::Independent(c) => g.det_of_columns(c) != 0,
            Constraint::RankAtMost(c, r) => g.rank_of_columns(c) <= *r,
        }
    }
}

fn constraints(params: &PmdsParams) -> Vec<Constraint> {
    let n = params.n();
    let mut out: Vec<Constraint> = (0..params.m)
        .map(|i| Constraint::RankAtMost(params.block_range(i).collect(), params.ell))
        .collect();
    out.extend(
        (0..n)
            .combinations(params.k)
            .filter(|cols| params.block_counts(cols).iter().all(|&c| c <= params.ell))
            .map(Constraint::Independent),
    );
    out
}

/// Depth-first search over the free entries in row-major order, each taking
/// values `0..q`. A partial assignment is abandoned as soon as a condition
/// whose columns are fully assigned fails; full assignments are confirmed
/// with [`pmds_oracle`]. With `all = false` the search stops at the first
/// completion, which is therefore the canonically first one.
pub fn completion_search(
    template: &Template,
    params: &PmdsParams,
    budget: &Budget,
    all: bool,
) -> Result<CompletionOutcome, SearchError> {
    if template.rows != params.k || template.cols != params.n() {
        return Err(SearchError::Shape {
            rows: template.rows,
            cols: template.cols,
            k: params.k,
            n: params.n(),
        });
    }
    let wild = template.wildcards();
    let q = template.field.order() as u128;
    let assignments = q.checked_pow(wild.len() as u32).unwrap_or(u128::MAX);
    if wild.len() > budget.max_wildcards || assignments > budget.max_assignments as u128 {
        return Err(SearchError::BudgetExceeded {
            wildcards: wild.len(),
            assignments,
            max_wildcards: budget.max_wildcards,
            max_assignments: budget.max_assignments,
        });
    }

    // constraint checked right after the wildcard of highest index it reads
    let mut buckets: Vec<Vec<Constraint>> = (0..=wild.len()).map(|_| Vec::new()).collect();
    for c in constraints(params) {
        let last = wild
            .iter()
            .rposition(|(_, col)| c.columns().contains(col))
            .map_or(0, |i| i + 1);
        buckets[last].push(c);
    }

    let mut state = Search {
        template,
        params,
        wild: &wild,
        buckets: &buckets,
        g: template.fill(&vec![0; wild.len()]),
        all,
        outcome: CompletionOutcome {
            completions: Vec::new(),
            nodes: 0,
            leaves: 0,
        },
    };
    state.run(0)?;
    Ok(state.outcome)
}

struct Search<'a> {
    template: &'a Template,
    params: &'a PmdsParams,
    wild: &'a [(usize, usize)],
    buckets: &'a [Vec<Constraint>],
    g: Matrix,
    all: bool,
    outcome: CompletionOutcome,
}

impl Search<'_> {
    /// Visits the node where the first `depth` wildcards are set; returns
    /// `false` once the search should stop.
    fn run(&mut self, depth: usize) -> Result<bool, SearchError> {
        self.outcome.nodes += 1;
        if !self.buckets[depth].iter().all(|c| c.holds(&self.g)) {
            return Ok(true);
        }
        if depth == self.wild.len() {
            self.outcome.leaves += 1;
            let is_pmds = match pmds_oracle(&self.g, self.params) {
                Ok(v) => v.is_pmds,
                Err(PmdsError::RankDeficient { .. }) => false,
                Err(e) => return Err(e.into()),
            };
            if is_pmds {
                self.outcome.completions.push(self.g.clone());
                return Ok(self.all);
            }
            return Ok(true);
        }
        let (r, c) = self.wild[depth];
        for v in 0..self.template.field.order() {
            self.g.set(r, c, v);
            if !self.run(depth + 1)? {
                return Ok(false);
            }
        }
        self.g.set(r, c, 0);
        Ok(true)
    }
}
