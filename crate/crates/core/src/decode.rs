//! Erasure decoding for PMDS codes with one global parity through a
//! block-structured parity-check matrix, plus a generic rank-based decoder.

use serde::Serialize;
use thiserror::Error;

use crate::classify::{standardize, StandardForm, StandardizeFailure};
use crate::matrix::{Matrix, MatrixError, OpCount, Solution};
use crate::mds::{parity_check, MdsError};
use crate::pmds::{ErasurePattern, PmdsError, PmdsParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("received word has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("erasures exceed the local capacity by {excess}; only one extra erasure is handled (use the generic decoder)")]
    OutsideFamily { excess: usize },
    #[error("pattern is not correctable: surviving columns have rank deficit {deficit}")]
    Uncorrectable { deficit: usize },
    #[error("received word is not consistent with any codeword")]
    Inconsistent,
    #[error("generator cannot be put in standard form: {0:?}")]
    NotStandard(StandardizeFailure),
    #[error("value {value} at position {position} is not a field element")]
    Value { position: usize, value: u32 },
    #[error(transparent)]
    Pmds(#[from] PmdsError),
    #[error(transparent)]
    Mds(#[from] MdsError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A word with erased positions set to `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ReceivedWord {
    values: Vec<Option<u32>>,
}

impl ReceivedWord {
    pub fn new(values: Vec<Option<u32>>) -> Self {
        Self { values }
    }

    /// `codeword` with the positions in `pattern` erased.
    pub fn erase(codeword: &[u32], pattern: &ErasurePattern) -> Self {
        Self {
            values: codeword
                .iter()
                .enumerate()
                .map(|(i, &v)| (!pattern.contains(i)).then_some(v))
                .collect(),
        }
    }

    pub fn values(&self) -> &[Option<u32>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pattern(&self) -> ErasurePattern {
        let erased = (0..self.len()).filter(|&i| self.values[i].is_none()).collect();
        ErasurePattern::new(erased, self.len()).expect("indices in range")
    }
}

/// Parity-check matrix
/// ```text
/// B_1^⊥  0   …  0        0
///  0   B_2^⊥ …  0        0
///  …
/// X_1   X_2  …  X_{m-1}  A^⊥
/// ```
/// for a code in standard form, where each `X_i` is zero except its last
/// row and the first `r_m` rows of `A^⊥` check the last block on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuredParityCheck {
    params: PmdsParams,
    block_order: Vec<usize>,
    column_order: Vec<usize>,
    b_perp: Vec<Matrix>,
    a_perp: Matrix,
    coupling: Vec<Vec<u32>>,
    h: Matrix,
}

/// Which parts of the parity-check matrix a decode used, and its cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecodeTrace {
    /// Block (in input order) holding one erasure beyond its local capacity.
    pub overflow_block: Option<usize>,
    pub used_global_row: bool,
    pub ops: OpCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub codeword: Vec<u32>,
    pub trace: DecodeTrace,
}

impl StructuredParityCheck {
    pub fn from_form(form: &StandardForm) -> Result<Self, DecodeError> {
        let p = form.params().clone();
        let f = form.field().clone();
        let (m, ell) = (p.m, p.ell);
        let b_perp = (0..m - 1)
            .map(|i| parity_check(form.b(i)))
            .collect::<Result<Vec<_>, _>>()?;

        // v = (0,…,0,1,x_tail) spans the rows of every M_i
        let rm = p.r[m - 1];
        let mut v = vec![0u32; ell + rm];
        v[ell - 1] = 1;
        v[ell..].copy_from_slice(form.x_tail());
        let a = form.a();
        let local = Matrix::from_raw(f.clone(), 1, ell + rm, v.clone()).vstack(&a)?;
        let local_perp = parity_check(&local)?;
        let dot = |x: &[u32], y: &[u32]| x.iter().zip(y).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
        let a_dual = parity_check(&a)?;
        let global = (0..a_dual.rows())
            .map(|r| a_dual.row(r).to_vec())
            .find(|h| dot(&v, h) != 0)
            .expect("A has rank l - 1 and v is outside its row space");
        let a_perp = local_perp.vstack(&Matrix::from_raw(f.clone(), 1, ell + rm, global.clone()))?;

        // B_i x_i^T = -α^(i) (v·h); B_i starts with I so x_i = (-α^(i) v·h, 0,…,0)
        let vh = dot(&v, &global);
        let coupling: Vec<Vec<u32>> = (0..m - 1)
            .map(|i| {
                let mut x = vec![0u32; ell + p.r[i]];
                for (j, &a) in form.alphas()[i].iter().enumerate() {
                    x[j] = f.neg(f.mul(a, vh));
                }
                x
            })
            .collect();

        let n = p.n();
        let mut h = Matrix::zeros(f.clone(), n - p.k, n);
        let mut row = 0;
        for (i, bp) in b_perp.iter().enumerate() {
            for r in 0..bp.rows() {
                for (c, col) in p.block_range(i).enumerate() {
                    h.set(row, col, bp.get(r, c));
                }
                row += 1;
            }
        }
        let last = p.block_range(m - 1);
        for r in 0..a_perp.rows() {
            for (c, col) in last.clone().enumerate() {
                h.set(row + r, col, a_perp.get(r, c));
            }
        }
        let global_row = n - p.k - 1;
        for (i, x) in coupling.iter().enumerate() {
            for (c, col) in p.block_range(i).enumerate() {
                h.set(global_row, col, x[c]);
            }
        }
        Ok(Self {
            params: p,
            block_order: form.block_order().to_vec(),
            column_order: form.column_order().to_vec(),
            b_perp,
            a_perp,
            coupling,
            h,
        })
    }

    /// Standardizes `g` and builds the structured parity-check matrix.
    pub fn from_generator(g: &Matrix, params: &PmdsParams) -> Result<Self, DecodeError> {
        let form = standardize(g, params)?.map_err(DecodeError::NotStandard)?;
        Self::from_form(&form)
    }

    /// Parameters in the standardized block order.
    pub fn params(&self) -> &PmdsParams {
        &self.params
    }

    pub fn block_order(&self) -> &[usize] {
        &self.block_order
    }

    pub fn column_order(&self) -> &[usize] {
        &self.column_order
    }

    pub fn b_perp(&self, i: usize) -> &Matrix {
        &self.b_perp[i]
    }

    pub fn a_perp(&self) -> &Matrix {
        &self.a_perp
    }

    /// Nonzero row of `X_i`.
    pub fn coupling_row(&self, i: usize) -> &[u32] {
        &self.coupling[i]
    }

    /// `H` in the standardized column order.
    pub fn h(&self) -> &Matrix {
        &self.h
    }

    /// `H` with columns back in input order, so `G · Hᵀ = 0` for the input `G`.
    pub fn h_input_order(&self) -> Matrix {
        let mut inv = vec![0; self.column_order.len()];
        for (pos, &orig) in self.column_order.iter().enumerate() {
            inv[orig] = pos;
        }
        self.h.columns(&inv).expect("permutation")
    }

    /// Recovers the codeword from a word whose erasures lie in the PMDS
    /// family for `s = 1`: blocks within their local capacity are solved
    /// with their own checks, then the block with one extra erasure is
    /// solved together with the global row.
    pub fn decode_erasures(&self, rw: &ReceivedWord) -> Result<Decoded, DecodeError> {
        let p = &self.params;
        let n = p.n();
        let f = self.h.field();
        if rw.len() != n {
            return Err(DecodeError::Length { expected: n, got: rw.len() });
        }
        let mut w: Vec<Option<u32>> = self.column_order.iter().map(|&c| rw.values()[c]).collect();
        if let Some((pos, v)) = w.iter().enumerate().find_map(|(i, v)| v.filter(|&v| !f.contains(v)).map(|v| (i, v))) {
            return Err(DecodeError::Value {
                position: self.column_order[pos],
                value: v,
            });
        }
        let erased: Vec<usize> = (0..n).filter(|&i| w[i].is_none()).collect();
        let excess = p.excess(&erased);
        if excess > p.s() {
            return Err(DecodeError::OutsideFamily { excess });
        }
        let counts = p.block_counts(&erased);
        let overflow = (0..p.m).find(|&i| counts[i] > p.r[i]);
        let mut ops = OpCount::default();

        // local checks of block i: rows of H restricted to that block
        let local_rows = |i: usize| -> Vec<usize> {
            let start: usize = p.r[..i].iter().sum();
            let len = p.r[i];
            (start..start + len).collect()
        };
        let global_row = n - p.k - 1;

        for i in (0..p.m).filter(|&i| Some(i) != overflow && counts[i] > 0) {
            self.solve_block(&mut w, &local_rows(i), p.block_range(i), &mut ops)?;
        }
        let mut used_global_row = false;
        if let Some(i) = overflow {
            let mut rows = local_rows(i);
            rows.push(global_row);
            used_global_row = true;
            self.solve_block(&mut w, &rows, 0..n, &mut ops)?;
        }

        let word: Vec<u32> = w.iter().map(|v| v.expect("all positions solved")).collect();
        if !self.h.mul_vec(&word)?.iter().all(|&s| s == 0) {
            return Err(DecodeError::Inconsistent);
        }
        let mut codeword = vec![0; n];
        for (pos, &orig) in self.column_order.iter().enumerate() {
            codeword[orig] = word[pos];
        }
        Ok(Decoded {
            codeword,
            trace: DecodeTrace {
                overflow_block: overflow.map(|i| self.block_order[i]),
                used_global_row,
                ops,
            },
        })
    }

    /// Solves the equations `rows` of `H` for the erased positions among
    /// `cols`, with every other position already known.
    fn solve_block(
        &self,
        w: &mut [Option<u32>],
        rows: &[usize],
        cols: std::ops::Range<usize>,
        ops: &mut OpCount,
    ) -> Result<(), DecodeError> {
        let f = self.h.field();
        let unknown: Vec<usize> = cols.filter(|&c| w[c].is_none()).collect();
        let mut lhs = Matrix::zeros(f.clone(), rows.len(), unknown.len());
        let mut rhs = vec![0u32; rows.len()];
        for (ri, &r) in rows.iter().enumerate() {
            let hr = self.h.row(r);
            let mut acc = 0;
            for (c, &hv) in hr.iter().enumerate() {
                if hv == 0 {
                    continue;
                }
                if let Some(v) = w[c] {
                    acc = f.add(acc, f.mul(hv, v));
                    ops.multiplications += 1;
                }
            }
            rhs[ri] = f.neg(acc);
            for (ui, &c) in unknown.iter().enumerate() {
                lhs.set(ri, ui, hr[c]);
            }
        }
        match lhs.solve_counted(&rhs, ops)? {
            Solution::Solved { x, nullity: 0 } => {
                for (&c, v) in unknown.iter().zip(x) {
                    w[c] = Some(v);
                }
                Ok(())
            }
            Solution::Solved { nullity, .. } => Err(DecodeError::Uncorrectable { deficit: nullity }),
            Solution::NoSolution => Err(DecodeError::Inconsistent),
        }
    }
}

/// `message · G`.
pub fn encode(g: &Matrix, message: &[u32]) -> Result<Vec<u32>, DecodeError> {
    if message.len() != g.rows() {
        return Err(DecodeError::Length {
            expected: g.rows(),
            got: message.len(),
        });
    }
    Ok(g.vec_mul(message)?)
}

/// Decodes any erasure pattern whose surviving columns have full rank by
/// solving `u · G_S = w_S` for the message `u`.
pub fn decode_generic(g: &Matrix, rw: &ReceivedWord) -> Result<Vec<u32>, DecodeError> {
    if rw.len() != g.cols() {
        return Err(DecodeError::Length {
            expected: g.cols(),
            got: rw.len(),
        });
    }
    let survivors: Vec<usize> = (0..g.cols()).filter(|&i| rw.values()[i].is_some()).collect();
    let known: Vec<u32> = survivors.iter().map(|&i| rw.values()[i].expect("survivor")).collect();
    let system = g.columns(&survivors)?.transpose();
    match system.solve(&known)? {
        Solution::Solved { x, nullity: 0 } => Ok(g.vec_mul(&x)?),
        Solution::Solved { nullity, .. } => Err(DecodeError::Uncorrectable { deficit: nullity }),
        Solution::NoSolution => Err(DecodeError::Inconsistent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_s1;
    use crate::field::FieldSpec;
    use crate::pmds::{field_size_bound_s1, pattern_correctable, pmds_pattern_family};

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn gf3_example() -> (Matrix, PmdsParams) {
        (
            Matrix::from_rows(gf(3), &[[1, 0, 1, 0, 1, 1], [0, 1, 2, 0, 1, 1], [0, 0, 0, 1, 1, 2]]).unwrap(),
            PmdsParams::new(2, 2, vec![1, 1], 3).unwrap(),
        )
    }

    fn pattern(e: &[usize], n: usize) -> ErasurePattern {
        ErasurePattern::new(e.to_vec(), n).unwrap()
    }

    #[test]
    fn encode_examples() {
        let (g, _) = gf3_example();
        // (1,1,1)·G by hand: columns sum to (1, 1, 1+2, 1, 1+1+1, 1+1+2)
        assert_eq!(encode(&g, &[1, 1, 1]).unwrap(), vec![1, 1, 0, 1, 0, 1]);
        assert_eq!(encode(&g, &[0, 0, 0]).unwrap(), vec![0; 6]);
        assert_eq!(encode(&g, &[0, 1, 0]).unwrap(), g.row(1).to_vec());
        assert!(matches!(encode(&g, &[1, 1]), Err(DecodeError::Length { .. })));
    }

    #[test]
    fn parity_check_invariants() {
        let (g, p) = gf3_example();
        let h = StructuredParityCheck::from_generator(&g, &p).unwrap();
        assert_eq!((h.h().rows(), h.h().cols()), (3, 6));
        assert_eq!(h.h().rank(), 3);
        assert!(g.mul(&h.h_input_order().transpose()).unwrap().is_zero());
    }

    #[test]
    fn coupling_identity_on_grid() {
        for m in [2usize, 3] {
            for ell in [1usize, 2, 3] {
                for mask in 0..1u32 << m {
                    let r: Vec<usize> = (0..m).map(|i| 1 + (mask >> i & 1) as usize).collect();
                    let p = PmdsParams::with_s(m, ell, r, 1).unwrap();
                    let f = FieldSpec::smallest_with_order_at_least(field_size_bound_s1(ell, p.max_r()) as u32).unwrap();
                    let g = build_s1(&p, &f).unwrap();
                    let form = standardize(&g, &p).unwrap().unwrap();
                    let h = StructuredParityCheck::from_form(&form).unwrap();
                    assert!(g.mul(&h.h_input_order().transpose()).unwrap().is_zero(), "{p}");
                    assert_eq!(h.h().rank(), p.n() - p.k);
                    let rm1 = p.r[m - 1] + 1;
                    for i in 0..m - 1 {
                        // M_i (A^⊥)^T = -B_i X_i^T with X_i zero but its last row
                        let lhs = form.m_block(i).mul(&h.a_perp().transpose()).unwrap();
                        let mut x = Matrix::zeros(f.clone(), rm1, ell + p.r[i]);
                        for (c, &v) in h.coupling_row(i).iter().enumerate() {
                            x.set(rm1 - 1, c, v);
                        }
                        let rhs = form.b(i).mul(&x.transpose()).unwrap();
                        let neg: Vec<u32> = rhs.data().iter().map(|&v| f.neg(v)).collect();
                        assert_eq!(lhs.data(), &neg[..], "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn decode_example() {
        let (g, p) = gf3_example();
        let h = StructuredParityCheck::from_generator(&g, &p).unwrap();
        let cw = encode(&g, &[1, 1, 1]).unwrap();
        let rw = ReceivedWord::erase(&cw, &pattern(&[2, 3, 5], 6));
        let out = h.decode_erasures(&rw).unwrap();
        assert_eq!(out.codeword, vec![1, 1, 0, 1, 0, 1]);
        assert_eq!(out.trace.overflow_block, Some(1));
        assert!(out.trace.used_global_row);
        assert_eq!(decode_generic(&g, &rw).unwrap(), cw);

        let clean = ReceivedWord::erase(&cw, &ErasurePattern::empty());
        let out = h.decode_erasures(&clean).unwrap();
        assert_eq!(out.codeword, cw);
        assert_eq!(out.trace.ops.multiplications, 0);

        let local = ReceivedWord::erase(&cw, &pattern(&[1, 4], 6));
        let out = h.decode_erasures(&local).unwrap();
        assert_eq!(out.codeword, cw);
        assert!(!out.trace.used_global_row);
        assert_eq!(out.trace.overflow_block, None);
    }

    #[test]
    fn decode_errors() {
        let (g, p) = gf3_example();
        let h = StructuredParityCheck::from_generator(&g, &p).unwrap();
        let cw = encode(&g, &[2, 0, 1]).unwrap();
        let rw = ReceivedWord::erase(&cw, &pattern(&[0, 1, 3, 4], 6));
        assert!(matches!(h.decode_erasures(&rw), Err(DecodeError::OutsideFamily { excess: 2 })));
        assert!(matches!(decode_generic(&g, &rw), Err(DecodeError::Uncorrectable { .. })));

        let mut bad = cw.clone();
        bad[0] = (bad[0] + 1) % 3;
        let rw = ReceivedWord::erase(&bad, &pattern(&[5], 6));
        assert_eq!(h.decode_erasures(&rw), Err(DecodeError::Inconsistent));
        assert_eq!(decode_generic(&g, &rw), Err(DecodeError::Inconsistent));
        assert!(matches!(
            h.decode_erasures(&ReceivedWord::new(vec![None; 5])),
            Err(DecodeError::Length { .. })
        ));
    }

    #[test]
    fn generic_decoder_on_max_erasures() {
        let (g, p) = gf3_example();
        for e in pmds_pattern_family(&p).iter().filter(|e| e.len() == 3) {
            let cw = encode(&g, &[1, 2, 1]).unwrap();
            let rw = ReceivedWord::erase(&cw, e);
            assert!(pattern_correctable(&g, e));
            assert_eq!(decode_generic(&g, &rw).unwrap(), cw);
        }
        let cw = encode(&g, &[1, 2, 1]).unwrap();
        let rw = ReceivedWord::erase(&cw, &pattern(&[0, 1, 2, 3], 6));
        assert!(matches!(decode_generic(&g, &rw), Err(DecodeError::Uncorrectable { .. })));
    }

    #[test]
    fn decoders_agree_on_permuted_input() {
        // blocks swapped so the shorter block comes last
        let f = gf(4);
        let p = PmdsParams::with_s(2, 2, vec![2, 1], 1).unwrap();
        let g = build_s1(&p, &f).unwrap();
        let cols: Vec<usize> = p.block_range(1).chain(p.block_range(0)).collect();
        let swapped = g.columns(&cols).unwrap();
        let sp = PmdsParams::with_s(2, 2, vec![1, 2], 1).unwrap();
        let h = StructuredParityCheck::from_generator(&swapped, &sp).unwrap();
        for e in pmds_pattern_family(&sp) {
            for msg in [[1u32, 2, 3], [0, 0, 1], [3, 3, 3]] {
                let cw = encode(&swapped, &msg).unwrap();
                let rw = ReceivedWord::erase(&cw, &e);
                let out = h.decode_erasures(&rw).unwrap();
                assert_eq!(out.codeword, cw);
                assert_eq!(decode_generic(&swapped, &rw).unwrap(), cw);
                let counts = sp.block_counts(e.erased());
                let expect = (0..2).find(|&i| counts[i] > sp.r[i]);
                assert_eq!(out.trace.overflow_block, expect);
            }
        }
    }

    #[test]
    fn every_family_pattern_decodes_on_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for m in [2usize, 3] {
            for ell in [1usize, 2, 3] {
                for mask in 0..1u32 << m {
                    let r: Vec<usize> = (0..m).map(|i| 1 + (mask >> i & 1) as usize).collect();
                    let p = PmdsParams::with_s(m, ell, r, 1).unwrap();
                    let f = FieldSpec::smallest_with_order_at_least(field_size_bound_s1(ell, p.max_r()) as u32).unwrap();
                    let g = build_s1(&p, &f).unwrap();
                    let h = StructuredParityCheck::from_generator(&g, &p).unwrap();
                    for e in pmds_pattern_family(&p) {
                        let msg: Vec<u32> = (0..p.k).map(|_| rng.random_range(0..f.order())).collect();
                        let cw = encode(&g, &msg).unwrap();
                        let rw = ReceivedWord::erase(&cw, &e);
                        assert_eq!(h.decode_erasures(&rw).unwrap().codeword, cw, "{p} {:?}", e.erased());
                    }
                }
            }
        }
    }
}
