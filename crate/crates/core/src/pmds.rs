//! PMDS parameters, the exhaustive PMDS oracle, erasure-pattern
//! correctability, the maximal-recoverability check and field-size bounds.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{Matrix, MatrixError};
use crate::mds::{first_singular_subset, is_mds_generator, mds_code_exists, MdsError};

/// Largest code length for which [`mr_check`] enumerates all 2^n patterns.
pub const MR_CHECK_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PmdsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("matrix is {rows}x{cols} but parameters need {k}x{n}")]
    DimensionMismatch { rows: usize, cols: usize, k: usize, n: usize },
    #[error("generator has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("erasure index {index} out of range for length {n}")]
    ErasureOutOfRange { index: usize, n: usize },
    #[error("exhaustive pattern scan limited to n <= {max}, got n = {n}")]
    TooLong { n: usize, max: usize },
    #[error("{0}")]
    Hypothesis(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Mds(#[from] MdsError),
}

/// `m` blocks of length `ell + r[i]`, code dimension `k`, and
/// `s = m·ell − k` erasures correctable anywhere beyond the local ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PmdsParams {
    pub m: usize,
    pub ell: usize,
    pub r: Vec<usize>,
    pub k: usize,
}

impl PmdsParams {
    pub fn new(m: usize, ell: usize, r: Vec<usize>, k: usize) -> Result<Self, PmdsError> {
        if m == 0 || ell == 0 {
            return Err(PmdsError::InvalidParams(format!("need m >= 1 and l >= 1, got m={m}, l={ell}")));
        }
        if r.len() != m {
            return Err(PmdsError::InvalidParams(format!("expected {m} values of r, got {}", r.len())));
        }
        if r.contains(&0) {
            return Err(PmdsError::InvalidParams("every r_i must be at least 1".into()));
        }
        if k < ell || k > m * ell {
            return Err(PmdsError::InvalidParams(format!(
                "need l <= k <= m*l, got k={k}, l={ell}, m={m}"
            )));
        }
        Ok(Self { m, ell, r, k })
    }

    pub fn with_s(m: usize, ell: usize, r: Vec<usize>, s: usize) -> Result<Self, PmdsError> {
        let k = (m * ell).checked_sub(s).ok_or_else(|| {
            PmdsError::InvalidParams(format!("s={s} exceeds m*l={}", m * ell))
        })?;
        Self::new(m, ell, r, k)
    }

    pub fn n(&self) -> usize {
        self.m * self.ell + self.r.iter().sum::<usize>()
    }

    pub fn s(&self) -> usize {
        self.m * self.ell - self.k
    }

    pub fn max_r(&self) -> usize {
        self.r.iter().copied().max().unwrap_or(0)
    }

    pub fn block_len(&self, i: usize) -> usize {
        self.ell + self.r[i]
    }

    pub fn block_start(&self, i: usize) -> usize {
        (0..i).map(|j| self.block_len(j)).sum()
    }

    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.block_start(i);
        start..start + self.block_len(i)
    }

    pub fn block_of(&self, col: usize) -> Option<usize> {
        (0..self.m).find(|&i| self.block_range(i).contains(&col))
    }

    /// Erasures per block for a set of coordinates.
    pub fn block_counts(&self, erased: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.m];
        for &c in erased {
            if let Some(b) = self.block_of(c) {
                counts[b] += 1;
            }
        }
        counts
    }

    /// Erasures beyond the local capacity: `Σ max(0, e_i − r_i)`.
    pub fn excess(&self, erased: &[usize]) -> usize {
        self.block_counts(erased)
            .iter()
            .zip(&self.r)
            .map(|(&e, &r)| e.saturating_sub(r))
            .sum()
    }
}

impl std::fmt::Display for PmdsParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{},{},{}; {}]",
            self.n(),
            self.k,
            self.ell,
            self.r.iter().map(|r| r.to_string()).join(",")
        )
    }
}

/// A sorted set of erased coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ErasurePattern {
    erased: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, PmdsError> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&index) = indices.iter().find(|&&i| i >= n) {
            return Err(PmdsError::ErasureOutOfRange { index, n });
        }
        Ok(Self { erased: indices })
    }

    pub fn empty() -> Self {
        Self { erased: Vec::new() }
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.erased.binary_search(&i).is_ok()
    }

    pub fn survivors(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| !self.contains(i)).collect()
    }

    pub fn block_counts(&self, params: &PmdsParams) -> Vec<usize> {
        params.block_counts(&self.erased)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailingStage {
    BlockMds,
    PuncturedMds,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PmdsFailure {
    /// Block columns do not span an `ell`-dimensional space.
    BlockRank { block: usize, rank: usize },
    /// The block code is not MDS; `witness` holds the global column
    /// indices of a dependent `ell`-subset.
    BlockNotMds { block: usize, witness: Vec<usize> },
    /// After erasing `erased`, the columns in `witness` (global indices,
    /// `k` of them) are linearly dependent.
    PuncturedNotMds { erased: Vec<usize>, witness: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PmdsVerdict {
    pub is_pmds: bool,
    pub failure: Option<PmdsFailure>,
}

impl PmdsVerdict {
    pub fn failing_stage(&self) -> FailingStage {
        match self.failure {
            None => FailingStage::None,
            Some(PmdsFailure::PuncturedNotMds { .. }) => FailingStage::PuncturedMds,
            Some(_) => FailingStage::BlockMds,
        }
    }
}

pub(crate) fn check_shape(g: &Matrix, params: &PmdsParams) -> Result<(), PmdsError> {
    if g.rows() != params.k || g.cols() != params.n() {
        return Err(PmdsError::DimensionMismatch {
            rows: g.rows(),
            cols: g.cols(),
            k: params.k,
            n: params.n(),
        });
    }
    let rank = g.rank();
    if rank != params.k {
        return Err(PmdsError::RankDeficient { rank, k: params.k });
    }
    Ok(())
}

/// Block condition for block `i`: rank `ell` and an MDS row space.
fn block_failure(g: &Matrix, params: &PmdsParams, i: usize) -> Option<PmdsFailure> {
    let range = params.block_range(i);
    let start = range.start;
    let block = g.block(0..g.rows(), range);
    let rref = block.rref();
    if rref.rank != params.ell {
        return Some(PmdsFailure::BlockRank {
            block: i,
            rank: rref.rank,
        });
    }
    let basis = rref.matrix.block(0..params.ell, 0..block.cols());
    first_singular_subset(&basis).map(|w| PmdsFailure::BlockNotMds {
        block: i,
        witness: w.into_iter().map(|c| c + start).collect(),
    })
}

/// All ways to erase exactly `r_i` coordinates in every block, block 0
/// varying slowest and each block's choices in lexicographic order.
pub fn puncture_choices(params: &PmdsParams) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..params.m)
        .map(|i| params.block_range(i).combinations(params.r[i]))
        .multi_cartesian_product()
        .map(|parts| parts.concat())
}

/// Exhaustive PMDS test: every block code is `[ell + r_i, ell]`-MDS and
/// every puncturing of `r_i` coordinates per block leaves an
/// `[m·ell, k]`-MDS code. Reports the first failure found.
pub fn pmds_oracle(g: &Matrix, params: &PmdsParams) -> Result<PmdsVerdict, PmdsError> {
    check_shape(g, params)?;
    for i in 0..params.m {
        if let Some(failure) = block_failure(g, params, i) {
            return Ok(PmdsVerdict {
                is_pmds: false,
                failure: Some(failure),
            });
        }
    }
    let n = params.n();
    for erased in puncture_choices(params) {
        let kept: Vec<usize> = (0..n).filter(|c| !erased.contains(c)).collect();
        let punctured = g.select_columns(&kept)?;
        if let Some(w) = first_singular_subset(&punctured) {
            return Ok(PmdsVerdict {
                is_pmds: false,
                failure: Some(PmdsFailure::PuncturedNotMds {
                    erased,
                    witness: w.into_iter().map(|c| kept[c]).collect(),
                }),
            });
        }
    }
    Ok(PmdsVerdict {
        is_pmds: true,
        failure: None,
    })
}

/// True iff the columns outside `e` have full rank `g.rows()`, i.e. every
/// codeword is determined by its unerased coordinates.
pub fn pattern_correctable(g: &Matrix, e: &ErasurePattern) -> bool {
    if e.len() + g.rows() > g.cols() {
        return false;
    }
    let survivors = e.survivors(g.cols());
    g.rank_of_columns(&survivors) == g.rows()
}

/// Depth-first walk over subsets of `0..n` as sorted index lists in
/// lexicographic order (a prefix precedes its extensions). `keep` prunes a
/// subset together with all its extensions; `visit` returns `false` to stop.
fn walk_subsets(
    n: usize,
    keep: &mut impl FnMut(&[usize]) -> bool,
    visit: &mut impl FnMut(&[usize]) -> bool,
) {
    fn rec(
        n: usize,
        cur: &mut Vec<usize>,
        keep: &mut impl FnMut(&[usize]) -> bool,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if !visit(cur) {
            return false;
        }
        let from = cur.last().map_or(0, |&l| l + 1);
        for i in from..n {
            cur.push(i);
            if keep(cur) && !rec(n, cur, keep, visit) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(n, &mut Vec::new(), keep, visit);
}

/// Every pattern with at most `r_i` erasures per block plus at most `s`
/// further erasures anywhere, in lexicographic order.
pub fn pmds_pattern_family(params: &PmdsParams) -> Vec<ErasurePattern> {
    let s = params.s();
    let mut out = Vec::new();
    walk_subsets(
        params.n(),
        &mut |e| params.excess(e) <= s,
        &mut |e| {
            out.push(ErasurePattern { erased: e.to_vec() });
            true
        },
    );
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MrViolation {
    /// A pattern in the PMDS family is not correctable.
    FamilyUncorrectable,
    /// A pattern exceeding the local capacity by more than `s` is correctable.
    OverflowCorrectable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MrCounterexample {
    pub pattern: ErasurePattern,
    pub violation: MrViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MrReport {
    pub holds: bool,
    pub patterns_checked: u64,
    pub family_size: u64,
    pub counterexample: Option<MrCounterexample>,
}

/// Checks all 2^n erasure patterns: those in [`pmds_pattern_family`] must be
/// correctable and all others (excess over local capacity above `s`) must
/// not be. Returns the first violation in lexicographic order.
pub fn mr_check(g: &Matrix, params: &PmdsParams) -> Result<MrReport, PmdsError> {
    check_shape(g, params)?;
    let n = params.n();
    if n > MR_CHECK_MAX_N {
        return Err(PmdsError::TooLong {
            n,
            max: MR_CHECK_MAX_N,
        });
    }
    let s = params.s();
    let mut checked = 0u64;
    let mut family = 0u64;
    let mut counterexample = None;
    walk_subsets(n, &mut |_| true, &mut |e| {
        checked += 1;
        let pattern = ErasurePattern { erased: e.to_vec() };
        let in_family = params.excess(e) <= s;
        family += u64::from(in_family);
        let correctable = pattern_correctable(g, &pattern);
        let violation = match (in_family, correctable) {
            (true, false) => Some(MrViolation::FamilyUncorrectable),
            (false, true) => Some(MrViolation::OverflowCorrectable),
            _ => None,
        };
        if let Some(violation) = violation {
            counterexample = Some(MrCounterexample { pattern, violation });
            return false;
        }
        true
    });
    Ok(MrReport {
        holds: counterexample.is_none(),
        patterns_checked: checked,
        family_size: family,
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialCaseReport {
    pub oracle: bool,
    pub mds: bool,
    pub agree: bool,
}

/// For `k = ell` a code is PMDS exactly when it is MDS; runs both tests.
pub fn trivial_case_check(g: &Matrix, params: &PmdsParams) -> Result<TrivialCaseReport, PmdsError> {
    if params.k != params.ell {
        return Err(PmdsError::InvalidParams(format!(
            "trivial case needs k = l, got k={}, l={}",
            params.k, params.ell
        )));
    }
    let oracle = pmds_oracle(g, params)?.is_pmds;
    let mds = is_mds_generator(g)?.is_mds;
    Ok(TrivialCaseReport {
        oracle,
        mds,
        agree: oracle == mds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MdsRequirement {
    pub n: usize,
    pub k: usize,
    pub exists: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryConditions {
    /// `[ell + max r_i + s, ell]`-MDS code.
    pub local: MdsRequirement,
    /// `[m·ell, m·ell − s]`-MDS code.
    pub global: MdsRequirement,
    pub holds: bool,
    pub assumes_mds_conjecture: bool,
}

/// Two MDS codes that must exist over `field` for a PMDS code with these
/// parameters to exist. Existence is decided by the known RS-type
/// constructions, i.e. under the MDS conjecture.
pub fn necessary_conditions_general_s(params: &PmdsParams, field: &FieldSpec) -> NecessaryConditions {
    let s = params.s();
    let ln = params.ell + params.max_r() + s;
    let gn = params.m * params.ell;
    let local = MdsRequirement {
        n: ln,
        k: params.ell,
        exists: mds_code_exists(field, ln, params.ell),
    };
    let global = MdsRequirement {
        n: gn,
        k: gn - s,
        exists: mds_code_exists(field, gn, gn - s),
    };
    NecessaryConditions {
        holds: local.exists && global.exists,
        local,
        global,
        assumes_mds_conjecture: true,
    }
}

/// True iff `n = 2^h + 2` and `k ∈ {3, 2^h − 1}` for some `h ≥ 1`, the
/// lengths where doubly-extended RS codes beat the `n ≤ q + 1` bound.
pub fn is_doubly_extended_case(n: usize, k: usize) -> bool {
    n >= 4 && (n - 2).is_power_of_two() && (k == 3 || k + 3 == n)
}

/// Smallest field order admitting a PMDS code with `s = 1`, locality `ell`
/// and largest local redundancy `max_r`, assuming the MDS conjecture.
pub fn field_size_bound_s1(ell: usize, max_r: usize) -> usize {
    if ell == 1 {
        2
    } else if is_doubly_extended_case(ell + max_r + 1, ell) && ell + max_r > 3 {
        ell + max_r - 1
    } else {
        ell + max_r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralSBound {
    /// `max{ell + max r_i + s, m·ell} − 2`.
    pub baseline: usize,
    /// `n* − 1` with `n* = ell + max r_i + s`, when that refinement applies.
    pub local_case: Option<usize>,
    /// `n* − 1` with `n* = m·ell`, when that refinement applies.
    pub global_case: Option<usize>,
    /// No PMDS code exists over fields smaller than this.
    pub bound: usize,
    pub assumes_mds_conjecture: bool,
}

/// Field-size lower bound for `ell, m, s > 1`, assuming the MDS conjecture.
pub fn field_size_bound_general_s(params: &PmdsParams) -> Result<GeneralSBound, PmdsError> {
    let s = params.s();
    if params.ell <= 1 {
        return Err(PmdsError::Hypothesis(
            "l = 1: codes exist over any field with q >= m - 1 (concatenation construction)".into(),
        ));
    }
    if s <= 1 {
        return Err(PmdsError::Hypothesis(
            "s <= 1: use the s = 1 bound q >= max r_i + l (or its doubly-extended exception)".into(),
        ));
    }
    if params.m <= 1 {
        return Err(PmdsError::Hypothesis("m = 1: the code is a single MDS code".into()));
    }
    let local_n = params.ell + params.max_r() + s;
    let global_n = params.m * params.ell;
    let baseline = local_n.max(global_n) - 2;
    let local_case = (local_n <= global_n && !is_doubly_extended_case(local_n, params.ell))
        .then(|| local_n - 1);
    let global_case = (global_n <= local_n && !is_doubly_extended_case(global_n, global_n - s))
        .then(|| global_n - 1);
    let bound = baseline
        .max(local_case.unwrap_or(0))
        .max(global_case.unwrap_or(0));
    Ok(GeneralSBound {
        baseline,
        local_case,
        global_case,
        bound,
        assumes_mds_conjecture: true,
    })
}
