//! Structural test for PMDS codes with one global parity: reduction to the
//! standard form, extraction of its parameters, and the MDS conditions on
//! the extracted blocks.

mod search;

pub use search::{completion_search, Budget, CompletionOutcome, SearchError, Template};

use serde::Serialize;

use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::mds::first_singular_subset;
use crate::pmds::{check_shape, pmds_oracle, PmdsError, PmdsParams};

/// Generator matrix in standard form, with the block permutation used to
/// reach it. All matrices refer to the permuted block order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardForm {
    params: PmdsParams,
    field: FieldSpec,
    block_order: Vec<usize>,
    column_order: Vec<usize>,
    b: Vec<Matrix>,
    alphas: Vec<Vec<u32>>,
    x_tail: Vec<u32>,
    x_last: Matrix,
    s: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StandardizeFailure {
    /// The first `ell` columns of each block (one fewer in the last) are
    /// dependent.
    SingularInformationSet,
    /// A multiplier in the shared column vanishes; `index` counts rows.
    ZeroAlpha { index: usize },
    /// A non-last block has a nonzero entry outside its own rows.
    BlockSpill { block: usize, row: usize, col: usize },
    /// A row above the last block's own rows is not a multiple of its
    /// special row, so that block has rank above `ell`.
    LastBlockRank { row: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassifyFailure {
    Standardize(StandardizeFailure),
    /// `(B_i | α^(i))` is not MDS; `block` is the original block index and
    /// `witness` indexes columns of that extended matrix.
    BHatNotMds { block: usize, witness: Vec<usize> },
    /// The de-scaled last-block matrix is not MDS.
    AHatNotMds { witness: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub is_pmds: bool,
    pub standard_form: Option<StandardForm>,
    pub failure: Option<ClassifyFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub classify: bool,
    pub oracle: bool,
    pub agree: bool,
}

impl StandardForm {
    /// Builds a form from its free parameters, with identity permutations
    /// and `S = I`.
    pub fn from_parts(
        params: PmdsParams,
        field: FieldSpec,
        b: Vec<Matrix>,
        alphas: Vec<Vec<u32>>,
        x_tail: Vec<u32>,
        x_last: Matrix,
    ) -> Result<Self, PmdsError> {
        check_params(&params)?;
        let (m, ell) = (params.m, params.ell);
        let bad = |msg: String| Err(PmdsError::InvalidParams(msg));
        if b.len() != m - 1 || alphas.len() != m {
            return bad(format!("expected {} B blocks and {m} multiplier vectors", m - 1));
        }
        for (i, bi) in b.iter().enumerate() {
            let systematic = (0..ell).all(|r| (0..ell).all(|c| bi.get(r, c) == u32::from(r == c)));
            if bi.rows() != ell || bi.cols() != ell + params.r[i] || !systematic {
                return bad(format!("B_{i} must be systematic {ell}x{}", ell + params.r[i]));
            }
        }
        for (i, a) in alphas.iter().enumerate() {
            let len = if i + 1 == m { ell - 1 } else { ell };
            if a.len() != len || a.contains(&0) {
                return bad(format!("multipliers {i} must be {len} nonzero values"));
            }
        }
        let rm = params.r[m - 1];
        if x_tail.len() != rm || x_last.rows() != ell - 1 || x_last.cols() != rm {
            return bad(format!("last-block entries must have {rm} columns"));
        }
        let k = params.k;
        let n = params.n();
        Ok(Self {
            block_order: (0..m).collect(),
            column_order: (0..n).collect(),
            s: Matrix::identity(field.clone(), k),
            params,
            field,
            b,
            alphas,
            x_tail,
            x_last,
        })
    }

    pub fn params(&self) -> &PmdsParams {
        &self.params
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// `block_order[i]` is the input block placed at position `i`.
    pub fn block_order(&self) -> &[usize] {
        &self.block_order
    }

    /// `column_order[c]` is the input column placed at position `c`.
    pub fn column_order(&self) -> &[usize] {
        &self.column_order
    }

    pub fn b(&self, i: usize) -> &Matrix {
        &self.b[i]
    }

    /// Multipliers `α^(i)`; the last vector has `ell − 1` entries.
    pub fn alphas(&self) -> &[Vec<u32>] {
        &self.alphas
    }

    /// `x^(m)_{ell,h}`, shared by every `M_i`.
    pub fn x_tail(&self) -> &[u32] {
        &self.x_tail
    }

    /// `x^(m)_{j,h}` for `j < ell`, with the `α^(m)` scaling removed.
    pub fn x_last(&self) -> &Matrix {
        &self.x_last
    }

    /// The invertible `S` with `S · G[:, column_order] = assemble()`.
    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn all_alphas_one(&self) -> bool {
        self.alphas.iter().flatten().all(|&a| a == 1)
    }

    /// `A`: rows `(e_j | α_j | α_j·x_j)` of the last block.
    pub fn a(&self) -> Matrix {
        let f = &self.field;
        let (ell, rm) = (self.params.ell, self.x_tail.len());
        let am = &self.alphas[self.params.m - 1];
        let mut a = Matrix::zeros(f.clone(), ell - 1, ell + rm);
        for j in 0..ell - 1 {
            a.set(j, j, 1);
            a.set(j, ell - 1, am[j]);
            for h in 0..rm {
                a.set(j, ell + h, f.mul(am[j], self.x_last.get(j, h)));
            }
        }
        a
    }

    /// `M_i`: rank-one block with rows `α^(i)_j · (0,…,0,1,x_tail)`.
    pub fn m_block(&self, i: usize) -> Matrix {
        let f = &self.field;
        let (ell, rm) = (self.params.ell, self.x_tail.len());
        let mut out = Matrix::zeros(f.clone(), ell, ell + rm);
        for (j, &a) in self.alphas[i].iter().enumerate() {
            out.set(j, ell - 1, a);
            for (h, &x) in self.x_tail.iter().enumerate() {
                out.set(j, ell + h, f.mul(a, x));
            }
        }
        out
    }

    /// `(B_i | α^(i))`.
    pub fn b_hat(&self, i: usize) -> Matrix {
        let col = Matrix::from_raw(self.field.clone(), self.params.ell, 1, self.alphas[i].clone());
        self.b[i].hstack(&col).expect("same row count")
    }

    /// Last-block matrix with the multipliers removed:
    /// first row `(1, 0,…,0, 1, x_tail)`, then `(0, e_j, 1, x_j)`.
    pub fn a_hat(&self) -> Matrix {
        let (ell, rm) = (self.params.ell, self.x_tail.len());
        let mut out = Matrix::zeros(self.field.clone(), ell, ell + rm + 1);
        out.set(0, 0, 1);
        out.set(0, ell, 1);
        for (h, &x) in self.x_tail.iter().enumerate() {
            out.set(0, ell + 1 + h, x);
        }
        for j in 1..ell {
            out.set(j, j, 1);
            out.set(j, ell, 1);
            for h in 0..rm {
                out.set(j, ell + 1 + h, self.x_last.get(j - 1, h));
            }
        }
        out
    }

    /// The standard-form generator matrix in the permuted column order.
    pub fn assemble(&self) -> Matrix {
        let p = &self.params;
        let ell = p.ell;
        let mut g = Matrix::zeros(self.field.clone(), p.k, p.n());
        let last = p.block_range(p.m - 1);
        let put = |g: &mut Matrix, row0: usize, cols: std::ops::Range<usize>, blk: &Matrix| {
            for r in 0..blk.rows() {
                for (c, col) in cols.clone().enumerate() {
                    g.set(row0 + r, col, blk.get(r, c));
                }
            }
        };
        for i in 0..p.m - 1 {
            put(&mut g, i * ell, p.block_range(i), &self.b[i]);
            put(&mut g, i * ell, last.clone(), &self.m_block(i));
        }
        put(&mut g, (p.m - 1) * ell, last, &self.a());
        g
    }
}

fn check_params(params: &PmdsParams) -> Result<(), PmdsError> {
    if params.m < 2 || params.s() != 1 {
        return Err(PmdsError::InvalidParams(format!(
            "standard form needs m >= 2 and s = 1, got m={}, s={}",
            params.m,
            params.s()
        )));
    }
    Ok(())
}

/// Reduces `g` with block `last` in the role of the last block.
pub fn standardize_with_role(
    g: &Matrix,
    params: &PmdsParams,
    last: usize,
) -> Result<Result<StandardForm, StandardizeFailure>, PmdsError> {
    check_shape(g, params)?;
    check_params(params)?;
    let (m, ell) = (params.m, params.ell);
    if last >= m {
        return Err(PmdsError::InvalidParams(format!("block {last} out of range")));
    }
    let f = g.field();
    let block_order: Vec<usize> = (0..m).filter(|&i| i != last).chain([last]).collect();
    let column_order: Vec<usize> = block_order.iter().flat_map(|&i| params.block_range(i)).collect();
    let p = PmdsParams::new(m, ell, block_order.iter().map(|&i| params.r[i]).collect(), params.k)?;
    let gp = g.columns(&column_order)?;

    let firsts: Vec<usize> = (0..m).flat_map(|i| p.block_start(i)..p.block_start(i) + ell).collect();
    let (info, shared) = firsts.split_at(m * ell - 1);
    let Ok(s) = gp.columns(info)?.inverse() else {
        return Ok(Err(StandardizeFailure::SingularInformationSet));
    };
    let gs = s.mul(&gp)?;
    let alpha = gs.column(shared[0]);
    if let Some(index) = alpha.iter().position(|&a| a == 0) {
        return Ok(Err(StandardizeFailure::ZeroAlpha { index }));
    }

    for i in 0..m - 1 {
        let own = i * ell..(i + 1) * ell;
        for col in p.block_range(i) {
            if let Some(row) = (0..p.k).find(|r| !own.contains(r) && gs.get(*r, col) != 0) {
                return Ok(Err(StandardizeFailure::BlockSpill {
                    block: block_order[i],
                    row,
                    col: column_order[col],
                }));
            }
        }
    }

    let lb = p.block_range(m - 1);
    let special = (m - 1) * ell - 1;
    let inv_p = f.inv(alpha[special]).expect("nonzero");
    let u: Vec<u32> = lb.clone().map(|c| f.mul(inv_p, gs.get(special, c))).collect();
    for row in 0..(m - 1) * ell {
        if lb.clone().zip(&u).any(|(c, &uc)| gs.get(row, c) != f.mul(alpha[row], uc)) {
            return Ok(Err(StandardizeFailure::LastBlockRank { row }));
        }
    }

    let rm = p.r[m - 1];
    let x_tail = u[ell..].to_vec();
    let mut x_last = Matrix::zeros(f.clone(), ell - 1, rm);
    for j in 0..ell - 1 {
        let row = (m - 1) * ell + j;
        let inv = f.inv(alpha[row]).expect("nonzero");
        for h in 0..rm {
            x_last.set(j, h, f.mul(inv, gs.get(row, lb.start + ell + h)));
        }
    }
    let b = (0..m - 1)
        .map(|i| gs.block(i * ell..(i + 1) * ell, p.block_range(i)))
        .collect();
    let alphas = (0..m)
        .map(|i| alpha[i * ell..((i + 1) * ell).min(p.k)].to_vec())
        .collect();
    Ok(Ok(StandardForm {
        params: p,
        field: f.clone(),
        block_order,
        column_order,
        b,
        alphas,
        x_tail,
        x_last,
        s,
    }))
}

/// Reduces `g` to standard form, trying the last block in the last-block
/// role first and then every other block. On failure the reason for the
/// default role is reported.
pub fn standardize(g: &Matrix, params: &PmdsParams) -> Result<Result<StandardForm, StandardizeFailure>, PmdsError> {
    let default = standardize_with_role(g, params, params.m - 1)?;
    if default.is_ok() {
        return Ok(default);
    }
    for last in 0..params.m - 1 {
        let attempt = standardize_with_role(g, params, last)?;
        if attempt.is_ok() {
            return Ok(attempt);
        }
    }
    Ok(default)
}

/// PMDS test through the standard form: standardization succeeds, every
/// `(B_i | α^(i))` is MDS and the de-scaled last-block matrix is MDS.
pub fn classify_s1(g: &Matrix, params: &PmdsParams) -> Result<ClassificationVerdict, PmdsError> {
    let failed = |failure| ClassificationVerdict {
        is_pmds: false,
        standard_form: None,
        failure: Some(failure),
    };
    let form = match standardize(g, params)? {
        Ok(form) => form,
        Err(e) => return Ok(failed(ClassifyFailure::Standardize(e))),
    };
    for i in 0..params.m - 1 {
        if let Some(witness) = first_singular_subset(&form.b_hat(i)) {
            return Ok(failed(ClassifyFailure::BHatNotMds {
                block: form.block_order[i],
                witness,
            }));
        }
    }
    if let Some(witness) = first_singular_subset(&form.a_hat()) {
        return Ok(failed(ClassifyFailure::AHatNotMds { witness }));
    }
    Ok(ClassificationVerdict {
        is_pmds: true,
        standard_form: Some(form),
        failure: None,
    })
}

/// Runs [`classify_s1`] and the exhaustive oracle on the same input.
pub fn classify_equals_oracle(g: &Matrix, params: &PmdsParams) -> Result<Agreement, PmdsError> {
    let classify = classify_s1(g, params)?.is_pmds;
    let oracle = pmds_oracle(g, params)?.is_pmds;
    Ok(Agreement {
        classify,
        oracle,
        agree: classify == oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_s1;
    use crate::pmds::field_size_bound_s1;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn gf3_example() -> (Matrix, PmdsParams) {
        (
            Matrix::from_rows(gf(3), &[[1, 0, 1, 0, 1, 1], [0, 1, 2, 0, 1, 1], [0, 0, 0, 1, 1, 2]]).unwrap(),
            PmdsParams::new(2, 2, vec![1, 1], 3).unwrap(),
        )
    }

    fn gf4_example() -> (Matrix, PmdsParams) {
        (
            Matrix::from_rows(
                gf(4),
                &[
                    [1, 0, 0, 1, 1, 0, 0, 1, 1],
                    [0, 1, 0, 3, 2, 0, 0, 1, 1],
                    [0, 0, 1, 2, 3, 0, 0, 1, 1],
                    [0, 0, 0, 0, 0, 1, 0, 1, 2],
                    [0, 0, 0, 0, 0, 0, 1, 1, 3],
                ],
            )
            .unwrap(),
            PmdsParams::new(2, 3, vec![2, 1], 5).unwrap(),
        )
    }

    fn random_full_rank(rng: &mut ChaCha8Rng, f: &FieldSpec, k: usize, n: usize) -> Matrix {
        loop {
            let data = (0..k * n).map(|_| rng.random_range(0..f.order())).collect();
            let g = Matrix::new(f.clone(), k, n, data).unwrap();
            if g.rank() == k {
                return g;
            }
        }
    }

    #[test]
    fn gf3_example_standard_form() {
        let (g, p) = gf3_example();
        let form = standardize(&g, &p).unwrap().unwrap();
        assert_eq!(form.alphas(), &[vec![1, 1], vec![1]]);
        assert_eq!(form.b(0).to_rows(), vec![vec![1, 0, 1], vec![0, 1, 2]]);
        // the shared row (0, 1, 1) gives x_{2,1} = 1; the row of A gives x_{1,1} = 2
        assert_eq!(form.x_tail(), &[1]);
        assert_eq!(form.x_last().to_rows(), vec![vec![2]]);
        assert_eq!(form.block_order(), &[0, 1]);
        assert_eq!(form.s(), &Matrix::identity(gf(3), 3));
        assert_eq!(form.assemble(), g);
        let v = classify_s1(&g, &p).unwrap();
        assert!(v.is_pmds && v.failure.is_none());
    }

    #[test]
    fn gf4_example_classifies() {
        let (g, p) = gf4_example();
        let v = classify_s1(&g, &p).unwrap();
        assert!(v.is_pmds);
        let form = v.standard_form.unwrap();
        assert_eq!(form.assemble(), form.s().mul(&g.columns(form.column_order()).unwrap()).unwrap());
    }

    #[test]
    fn zero_alpha_is_reported() {
        let (g, p) = gf3_example();
        let g = g.with_entry(0, 4, 0).unwrap();
        assert_eq!(
            standardize_with_role(&g, &p, 1).unwrap(),
            Err(StandardizeFailure::ZeroAlpha { index: 0 })
        );
        let v = classify_s1(&g, &p).unwrap();
        assert!(!v.is_pmds && v.standard_form.is_none());
    }

    #[test]
    fn broken_b_hat_is_reported() {
        let (g, p) = gf3_example();
        let g = g.with_entry(0, 2, 0).unwrap();
        let v = classify_s1(&g, &p).unwrap();
        // (B_1 | α) = [[1,0,0,1],[0,1,2,1]]: columns 1 and 2 are parallel
        assert_eq!(
            v.failure,
            Some(ClassifyFailure::BHatNotMds {
                block: 0,
                witness: vec![1, 2]
            })
        );
        assert!(!pmds_oracle(&g, &p).unwrap().is_pmds);
    }

    #[test]
    fn other_failures() {
        let f = gf(3);
        let p = PmdsParams::new(2, 2, vec![1, 1], 3).unwrap();
        let spill = Matrix::from_rows(f.clone(), &[[1, 0, 1, 0, 1, 1], [0, 1, 2, 0, 1, 1], [0, 0, 1, 1, 1, 2]]).unwrap();
        assert!(matches!(
            standardize_with_role(&spill, &p, 1).unwrap(),
            Err(StandardizeFailure::BlockSpill { block: 0, .. })
        ));
        let singular = Matrix::from_rows(f.clone(), &[[1, 1, 1, 0, 1, 1], [1, 1, 2, 0, 1, 1], [0, 0, 0, 1, 1, 2]]).unwrap();
        assert_eq!(
            standardize_with_role(&singular, &p, 1).unwrap(),
            Err(StandardizeFailure::SingularInformationSet)
        );
        let rank3 = Matrix::from_rows(f.clone(), &[[1, 0, 1, 0, 1, 2], [0, 1, 2, 0, 1, 1], [0, 0, 0, 1, 1, 2]]).unwrap();
        assert_eq!(
            standardize_with_role(&rank3, &p, 1).unwrap(),
            Err(StandardizeFailure::LastBlockRank { row: 0 })
        );
        let s2 = PmdsParams::new(2, 2, vec![1, 1], 2).unwrap();
        assert!(classify_s1(&spill.select_rows(&[0, 1]).unwrap(), &s2).is_err());
    }

    #[test]
    fn constructed_codes_have_unit_alphas() {
        for m in [2usize, 3] {
            for ell in [1usize, 2, 3] {
                for mask in 0..1u32 << m {
                    let r: Vec<usize> = (0..m).map(|i| 1 + (mask >> i & 1) as usize).collect();
                    let p = PmdsParams::with_s(m, ell, r, 1).unwrap();
                    let f = FieldSpec::smallest_with_order_at_least(field_size_bound_s1(ell, p.max_r()) as u32).unwrap();
                    let g = build_s1(&p, &f).unwrap();
                    let v = classify_s1(&g, &p).unwrap();
                    assert!(v.is_pmds, "{p}");
                    let form = v.standard_form.unwrap();
                    assert!(form.all_alphas_one(), "{p}");
                    assert_eq!(form.assemble(), g);
                }
            }
        }
    }

    #[test]
    fn round_trip_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for q in [5u32, 7, 8] {
            let f = gf(q);
            for _ in 0..200 {
                let m = rng.random_range(2..=3usize);
                let ell = rng.random_range(1..=3usize);
                let r: Vec<usize> = (0..m).map(|_| rng.random_range(1..=2)).collect();
                let p = PmdsParams::with_s(m, ell, r.clone(), 1).unwrap();
                let b = (0..m - 1)
                    .map(|i| {
                        let mut bi = Matrix::identity(f.clone(), ell)
                            .hstack(&Matrix::zeros(f.clone(), ell, r[i]))
                            .unwrap();
                        for j in 0..ell {
                            for h in 0..r[i] {
                                bi.set(j, ell + h, rng.random_range(0..q));
                            }
                        }
                        bi
                    })
                    .collect();
                let alphas = (0..m)
                    .map(|i| {
                        let len = if i + 1 == m { ell - 1 } else { ell };
                        (0..len).map(|_| rng.random_range(1..q)).collect()
                    })
                    .collect();
                let x_tail = (0..r[m - 1]).map(|_| rng.random_range(0..q)).collect();
                let data = (0..(ell - 1) * r[m - 1]).map(|_| rng.random_range(0..q)).collect();
                let x_last = Matrix::new(f.clone(), ell - 1, r[m - 1], data).unwrap();
                let form = StandardForm::from_parts(p.clone(), f.clone(), b, alphas, x_tail, x_last).unwrap();
                let g = form.assemble();
                if g.rank() < p.k {
                    continue;
                }
                let back = standardize_with_role(&g, &p, m - 1).unwrap().unwrap();
                assert_eq!(back, form);
            }
        }
    }

    /// `S · G · D` for random invertible `S` and nonzero diagonal `D`;
    /// keeps the PMDS property.
    fn scramble(rng: &mut ChaCha8Rng, g: &Matrix) -> Matrix {
        let f = g.field().clone();
        let s = loop {
            let s = random_full_rank(rng, &f, g.rows(), g.rows());
            if s.rank() == g.rows() {
                break s;
            }
        };
        let d: Vec<u32> = (0..g.cols()).map(|_| rng.random_range(1..f.order())).collect();
        s.mul(g).unwrap().transpose().scale_rows(&d).unwrap().transpose()
    }

    #[test]
    fn classify_agrees_with_oracle_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [3u32, 4] {
            let f = gf(q);
            let p = PmdsParams::new(2, 2, vec![1, 1], 3).unwrap();
            let base = build_s1(&p, &f).unwrap();
            let mut positives = 0;
            for i in 0..200 {
                let g = if i % 2 == 0 {
                    random_full_rank(&mut rng, &f, 3, 6)
                } else {
                    scramble(&mut rng, &base)
                };
                let a = classify_equals_oracle(&g, &p).unwrap();
                assert!(a.agree, "{g}");
                positives += usize::from(a.oracle);
            }
            assert!(positives > 0);
        }
    }

    #[test]
    fn oracle_positive_inputs_standardize() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = gf(5);
        let p = PmdsParams::new(2, 2, vec![1, 2], 3).unwrap();
        for _ in 0..300 {
            let g = random_full_rank(&mut rng, &f, 3, 7);
            if pmds_oracle(&g, &p).unwrap().is_pmds {
                assert!(standardize_with_role(&g, &p, 1).unwrap().is_ok());
                assert!(standardize_with_role(&g, &p, 0).unwrap().is_ok());
            }
        }
    }

    #[test]
    fn block_permutation_keeps_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = gf(4);
        let p = PmdsParams::with_s(3, 2, vec![1, 2, 1], 1).unwrap();
        let built = build_s1(&p, &f).unwrap();
        let mut inputs = vec![built];
        for _ in 0..20 {
            inputs.push(random_full_rank(&mut rng, &f, p.k, p.n()));
        }
        for g in inputs {
            let verdict = classify_s1(&g, &p).unwrap().is_pmds;
            let mut order: Vec<usize> = (0..p.m).collect();
            order.shuffle(&mut rng);
            let cols: Vec<usize> = order.iter().flat_map(|&i| p.block_range(i)).collect();
            let pp = PmdsParams::new(p.m, p.ell, order.iter().map(|&i| p.r[i]).collect(), p.k).unwrap();
            let permuted = g.columns(&cols).unwrap();
            assert_eq!(classify_s1(&permuted, &pp).unwrap().is_pmds, verdict);
            assert_eq!(pmds_oracle(&permuted, &pp).unwrap().is_pmds, verdict);
        }
    }
}
