//! MDS predicates and generators: exhaustive MDS check, superregularity,
//! (doubly-)extended Reed-Solomon codes, systematic forms and duals.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdsError {
    #[error("generator has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("matrix is not in systematic form (I | X)")]
    NotSystematic,
    #[error("row scaling factor {index} is zero")]
    ZeroScale { index: usize },
    #[error("expected {expected} scaling factors, got {got}")]
    ScaleLength { expected: usize, got: usize },
    #[error("{0}")]
    Bounds(String),
    #[error("pivot columns {0:?} are linearly dependent")]
    DependentPivots(Vec<usize>),
    #[error("an [n,n] code has no nonzero parity-check rows")]
    EmptyDual,
    #[error("no [{n},{k}] MDS code over {field} is known to exist")]
    NoMdsCode { n: usize, k: usize, field: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Outcome of [`is_mds_generator`]. The witness is the lexicographically
/// first set of `rows` columns whose square submatrix is singular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MdsReport {
    pub is_mds: bool,
    pub witness: Option<Vec<usize>>,
}

/// A vanishing square minor, given by its row and column indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperregularReport {
    pub is_superregular: bool,
    pub witness: Option<Minor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RsVariant {
    Plain,
    Extended,
    DoublyExtended,
}

/// First `rows`-subset of columns (in lexicographic order) whose square
/// submatrix is singular, if any. Does not require full row rank: a
/// rank-deficient matrix yields the first subset.
pub fn first_singular_subset(g: &Matrix) -> Option<Vec<usize>> {
    let k = g.rows();
    if k > g.cols() {
        return Some((0..g.cols()).collect());
    }
    (0..g.cols())
        .combinations(k)
        .find(|cols| g.det_of_columns(cols) == 0)
}

/// Exhaustive MDS test over all `C(cols, rows)` column subsets.
pub fn is_mds_generator(g: &Matrix) -> Result<MdsReport, MdsError> {
    let rank = g.rank();
    if rank != g.rows() || g.rows() > g.cols() {
        return Err(MdsError::RankDeficient {
            rank,
            rows: g.rows(),
        });
    }
    let witness = first_singular_subset(g);
    Ok(MdsReport {
        is_mds: witness.is_none(),
        witness,
    })
}

/// True iff every square minor of every size is nonzero.
pub fn is_superregular(x: &Matrix) -> SuperregularReport {
    for t in 1..=x.rows().min(x.cols()) {
        for rows in (0..x.rows()).combinations(t) {
            let sub = x.select_rows(&rows).expect("rows in range");
            for cols in (0..x.cols()).combinations(t) {
                if sub.det_of_columns(&cols) == 0 {
                    return SuperregularReport {
                        is_superregular: false,
                        witness: Some(Minor { rows, cols }),
                    };
                }
            }
        }
    }
    SuperregularReport {
        is_superregular: true,
        witness: None,
    }
}

fn is_systematic(g: &Matrix) -> bool {
    let k = g.rows();
    k <= g.cols() && (0..k).all(|r| (0..k).all(|c| g.get(r, c) == u32::from(r == c)))
}

/// Row-scales the redundancy part of a systematic generator:
/// `(I | X)` becomes `(I | diag(alphas) · X)`. The MDS property is
/// preserved in both directions.
pub fn systematic_mds_equivalence(g: &Matrix, alphas: &[u32]) -> Result<Matrix, MdsError> {
    if !is_systematic(g) {
        return Err(MdsError::NotSystematic);
    }
    if alphas.len() != g.rows() {
        return Err(MdsError::ScaleLength {
            expected: g.rows(),
            got: alphas.len(),
        });
    }
    if let Some(index) = alphas.iter().position(|&a| a == 0) {
        return Err(MdsError::ZeroScale { index });
    }
    let f = g.field();
    let k = g.rows();
    let mut out = g.clone();
    for (r, &a) in alphas.iter().enumerate() {
        for c in k..g.cols() {
            out.set(r, c, f.mul(a, g.get(r, c)));
        }
    }
    Ok(out)
}

/// Generator matrix of a Reed-Solomon code and its extensions.
///
/// Rows evaluate `x^0 .. x^(k-1)` at the first points of
/// [`FieldSpec::elements`]. `Extended` appends the unit column
/// `(0,…,0,1)ᵀ`; `DoublyExtended` (q = 2^h, n = q+2, k ∈ {3, q−1}) appends
/// `(0,…,0,1)ᵀ` and `(0,…,0,1,0)ᵀ` for k = 3 and is the dual of that code
/// for k = q−1. The result is re-checked with [`is_mds_generator`].
pub fn rs_generator(field: &FieldSpec, k: usize, n: usize, variant: RsVariant) -> Result<Matrix, MdsError> {
    let q = field.order() as usize;
    if k == 0 || k > n {
        return Err(MdsError::Bounds(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let g = match variant {
        RsVariant::Plain => {
            if n > q {
                return Err(MdsError::Bounds(format!("plain RS needs n <= q, got n={n}, q={q}")));
            }
            vandermonde(field, k, n, 0)
        }
        RsVariant::Extended => {
            if n > q + 1 {
                return Err(MdsError::Bounds(format!(
                    "extended RS needs n <= q+1, got n={n}, q={q}"
                )));
            }
            vandermonde(field, k, n, 1)
        }
        RsVariant::DoublyExtended => {
            if !field.is_binary() || n != q + 2 || !(k == 3 || k + 1 == q) {
                return Err(MdsError::Bounds(format!(
                    "doubly-extended RS needs q = 2^h, n = q+2 and k in {{3, q-1}}; got q={q}, n={n}, k={k}"
                )));
            }
            let hyperoval = vandermonde(field, 3, n, 2);
            if k == 3 {
                hyperoval
            } else {
                parity_check(&hyperoval)?
            }
        }
    };
    let report = is_mds_generator(&g)?;
    if !report.is_mds {
        return Err(MdsError::Bounds(format!(
            "{variant:?} RS [{n},{k}] over {field} failed the MDS re-check"
        )));
    }
    Ok(g)
}

/// Evaluation matrix at the first `n - extra` field elements followed by
/// `extra` unit columns `e_{k-1}`, `e_{k-2}`.
fn vandermonde(field: &FieldSpec, k: usize, n: usize, extra: usize) -> Matrix {
    let mut g = Matrix::zeros(field.clone(), k, n);
    for j in 0..n - extra {
        let a = j as u32;
        for i in 0..k {
            g.set(i, j, field.pow(a, i as u64));
        }
    }
    for e in 0..extra {
        g.set(k - 1 - e, n - extra + e, 1);
    }
    g
}

/// Whether an `[n, k]` MDS code over `field` exists, decided by the
/// constructions available here: trivial codes (k ≤ 1 or k ≥ n−1),
/// extended RS for n ≤ q+1 and doubly-extended RS for the q = 2^h
/// exceptions. Beyond those this relies on the MDS conjecture.
pub fn mds_code_exists(field: &FieldSpec, n: usize, k: usize) -> bool {
    let q = field.order() as usize;
    if k > n {
        return false;
    }
    k <= 1 || k + 1 >= n || n <= q + 1 || (field.is_binary() && n == q + 2 && (k == 3 || k + 1 == q))
}

/// A canonical `[n, k]` MDS generator: identity, repetition or single
/// parity code for the trivial dimensions, otherwise (doubly-)extended RS.
pub fn mds_generator(field: &FieldSpec, k: usize, n: usize) -> Result<Matrix, MdsError> {
    let q = field.order() as usize;
    if k == 0 || k > n {
        return Err(MdsError::Bounds(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if k == n {
        return Ok(Matrix::identity(field.clone(), n));
    }
    if k == 1 {
        return Ok(Matrix::from_raw(field.clone(), 1, n, vec![1; n]));
    }
    if k + 1 == n && n > q + 1 {
        let mut g = Matrix::identity(field.clone(), k).hstack(&Matrix::zeros(field.clone(), k, 1))?;
        for r in 0..k {
            g.set(r, k, 1);
        }
        return Ok(g);
    }
    if n <= q + 1 {
        return rs_generator(field, k, n, RsVariant::Extended);
    }
    if mds_code_exists(field, n, k) {
        return rs_generator(field, k, n, RsVariant::DoublyExtended);
    }
    Err(MdsError::NoMdsCode {
        n,
        k,
        field: field.to_string(),
    })
}

/// Row-equivalent matrix with `e_i` in column `pivots[i]`. Without explicit
/// pivots the first linearly independent columns are used.
pub fn systematic_form(g: &Matrix, pivots: Option<&[usize]>) -> Result<Matrix, MdsError> {
    let r = g.rref();
    if r.rank != g.rows() {
        return Err(MdsError::RankDeficient {
            rank: r.rank,
            rows: g.rows(),
        });
    }
    let Some(pivots) = pivots else {
        return Ok(r.matrix);
    };
    if pivots.len() != g.rows() {
        return Err(MdsError::DependentPivots(pivots.to_vec()));
    }
    let s = g
        .columns(pivots)?
        .inverse()
        .map_err(|_| MdsError::DependentPivots(pivots.to_vec()))?;
    Ok(s.mul(g)?)
}

/// Parity-check matrix `H` ((n−k)×n, full rank) with `G · Hᵀ = 0`. For
/// `G = (I | P)` this is `(−Pᵀ | I)`.
pub fn parity_check(g: &Matrix) -> Result<Matrix, MdsError> {
    let r = g.rref();
    if r.rank != g.rows() {
        return Err(MdsError::RankDeficient {
            rank: r.rank,
            rows: g.rows(),
        });
    }
    let n = g.cols();
    if r.rank == n {
        return Err(MdsError::EmptyDual);
    }
    let f = g.field();
    let free: Vec<usize> = (0..n).filter(|c| !r.pivots.contains(c)).collect();
    let mut h = Matrix::zeros(f.clone(), free.len(), n);
    for (t, &fc) in free.iter().enumerate() {
        h.set(t, fc, 1);
        for (i, &pc) in r.pivots.iter().enumerate() {
            h.set(t, pc, f.neg(r.matrix.get(i, fc)));
        }
    }
    Ok(h)
}
