//! Dense matrices over a [`FieldSpec`] and exact elimination.
//!
//! Matrices are values: every operation returns a new matrix and leaves its
//! input untouched. Pivoting always takes the first nonzero entry in the
//! column, which makes every result (echelon form, pivot list, solution)
//! deterministic.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty column selection")]
    EmptySelection,
    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("column indices must be strictly increasing")]
    NotIncreasing,
    #[error("matrices are over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Field-operation tally, used to measure decoder cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct OpCount {
    pub multiplications: u64,
    pub inversions: u64,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row-echelon form with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// One solution (free variables set to zero) and the dimension of the
    /// solution space.
    Solved { x: Vec<u32>, nullity: usize },
    NoSolution,
}

impl Solution {
    pub fn unique(&self) -> Option<&[u32]> {
        match self {
            Solution::Solved { x, nullity: 0 } => Some(x),
            _ => None,
        }
    }
}

impl Matrix {
    /// Row-major constructor. Zero-sized matrices are allowed; they appear
    /// as empty blocks when the locality is 1.
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&v) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(FieldError::ValueOutOfRange {
                value: v,
                q: field.order(),
            }
            .into());
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(field: FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows<R: AsRef<[u32]>>(field: FieldSpec, rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(field, rows.len(), cols, data)
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix::from_raw(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        self.field.element(self.get(r, c)).expect("entries are in range")
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Returns a copy with one entry replaced.
    pub fn with_entry(&self, r: usize, c: usize, v: u32) -> Result<Self, MatrixError> {
        if !self.field.contains(v) {
            return Err(FieldError::ValueOutOfRange {
                value: v,
                q: self.field.order(),
            }
            .into());
        }
        if r >= self.rows || c >= self.cols {
            return Err(MatrixError::IndexOutOfRange {
                index: r * self.cols + c,
                cols: self.cols,
            });
        }
        let mut out = self.clone();
        out.set(r, c, v);
        Ok(out)
    }

    fn check_field(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v · self`.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>, MatrixError> {
        if v.len() != self.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector: `self · v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(MatrixError::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix::from_raw(self.field.clone(), self.rows, cols, data))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix::from_raw(
            self.field.clone(),
            self.rows + other.rows,
            self.cols,
            data,
        ))
    }

    /// Puncturing: keeps the listed columns, which must be non-empty, in
    /// range and strictly increasing.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Matrix, MatrixError> {
        if idx.is_empty() {
            return Err(MatrixError::EmptySelection);
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::NotIncreasing);
        }
        self.columns(idx)
    }

    /// Columns in the given order; repeats and permutations allowed.
    pub fn columns(&self, idx: &[usize]) -> Result<Matrix, MatrixError> {
        if let Some(&index) = idx.iter().find(|&&i| i >= self.cols) {
            return Err(MatrixError::IndexOutOfRange {
                index,
                cols: self.cols,
            });
        }
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(idx.iter().map(|&c| row[c]));
        }
        Ok(Matrix::from_raw(self.field.clone(), self.rows, idx.len(), data))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<Matrix, MatrixError> {
        if let Some(&index) = idx.iter().find(|&&i| i >= self.rows) {
            return Err(MatrixError::IndexOutOfRange {
                index,
                cols: self.rows,
            });
        }
        let mut data = Vec::with_capacity(self.cols * idx.len());
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Ok(Matrix::from_raw(self.field.clone(), idx.len(), self.cols, data))
    }

    /// Contiguous sub-block `rows × cols`.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            data.extend_from_slice(&self.row(r)[cols.clone()]);
        }
        Matrix::from_raw(self.field.clone(), rows.len(), cols.len(), data)
    }

    /// Multiplies row `i` by `factors[i]`.
    pub fn scale_rows(&self, factors: &[u32]) -> Result<Matrix, MatrixError> {
        if factors.len() != self.rows {
            return Err(MatrixError::DimensionMismatch("one factor per row".into()));
        }
        let f = &self.field;
        let mut out = self.clone();
        for (r, &a) in factors.iter().enumerate() {
            for c in 0..self.cols {
                out.set(r, c, f.mul(a, self.get(r, c)));
            }
        }
        Ok(out)
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = eliminate(&self.field, &mut m.data, m.rows, m.cols, m.cols, &mut OpCount::default());
        Rref {
            rank: pivots.len(),
            pivots,
            matrix: m,
        }
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.data.clone();
        eliminate(&self.field, &mut buf, self.rows, self.cols, self.cols, &mut OpCount::default()).len()
    }

    /// Rank of the submatrix on the given columns.
    pub fn rank_of_columns(&self, idx: &[usize]) -> usize {
        let mut buf = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            let row = self.row(r);
            buf.extend(idx.iter().map(|&c| row[c]));
        }
        eliminate(&self.field, &mut buf, self.rows, idx.len(), idx.len(), &mut OpCount::default()).len()
    }

    pub fn det(&self) -> Result<FieldElement, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut buf = self.data.clone();
        Ok(self.field.element(det_in_place(&self.field, &mut buf, self.rows))?)
    }

    /// Determinant of the square submatrix formed by the listed columns
    /// (`idx.len()` must equal the row count).
    pub fn det_of_columns(&self, idx: &[usize]) -> u32 {
        debug_assert_eq!(idx.len(), self.rows);
        let n = self.rows;
        let mut buf = Vec::with_capacity(n * n);
        for r in 0..n {
            let row = self.row(r);
            buf.extend(idx.iter().map(|&c| row[c]));
        }
        det_in_place(&self.field, &mut buf, n)
    }

    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field.clone(), n))?;
        let r = aug.rref();
        if r.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Err(MatrixError::Singular);
        }
        Ok(r.matrix.block(0..n, n..2 * n))
    }

    /// Solves `self · x = b`.
    pub fn solve(&self, b: &[u32]) -> Result<Solution, MatrixError> {
        self.solve_counted(b, &mut OpCount::default())
    }

    /// [`Matrix::solve`] that also tallies the field operations spent.
    pub fn solve_counted(&self, b: &[u32], ops: &mut OpCount) -> Result<Solution, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        if let Some(&v) = b.iter().find(|&&v| !self.field.contains(v)) {
            return Err(FieldError::ValueOutOfRange {
                value: v,
                q: self.field.order(),
            }
            .into());
        }
        let n = self.cols;
        let w = n + 1;
        let mut buf = Vec::with_capacity(self.rows * w);
        for r in 0..self.rows {
            buf.extend_from_slice(self.row(r));
            buf.push(b[r]);
        }
        let pivots = eliminate(&self.field, &mut buf, self.rows, w, n, ops);
        // A nonzero right-hand side left in a zero row means inconsistency.
        for r in pivots.len()..self.rows {
            if buf[r * w + n] != 0 {
                return Ok(Solution::NoSolution);
            }
        }
        let mut x = vec![0u32; n];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = buf[i * w + n];
        }
        Ok(Solution::Solved {
            x,
            nullity: n - pivots.len(),
        })
    }
}

/// In-place Gauss-Jordan elimination of a `rows × width` row-major buffer,
/// choosing pivots among the first `pivot_cols` columns only. Returns the
/// pivot columns; on return the buffer is in reduced row-echelon form with
/// respect to those columns.
fn eliminate(
    f: &FieldSpec,
    buf: &mut [u32],
    rows: usize,
    width: usize,
    pivot_cols: usize,
    ops: &mut OpCount,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| buf[i * width + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..width {
                buf.swap(p * width + j, r * width + j);
            }
        }
        let lead = buf[r * width + c];
        if lead != 1 {
            let inv = f.inv(lead).expect("pivot is nonzero");
            ops.inversions += 1;
            for j in c..width {
                buf[r * width + j] = f.mul(buf[r * width + j], inv);
            }
            ops.multiplications += (width - c) as u64;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = buf[i * width + c];
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..width {
                let v = buf[r * width + j];
                if v != 0 {
                    buf[i * width + j] = f.add(buf[i * width + j], f.mul(nf, v));
                    ops.multiplications += 1;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Determinant by forward elimination, destroying `buf`.
fn det_in_place(f: &FieldSpec, buf: &mut [u32], n: usize) -> u32 {
    let mut det = 1u32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| buf[i * n + c] != 0) else {
            return 0;
        };
        if p != c {
            for j in c..n {
                buf.swap(p * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let lead = buf[c * n + c];
        det = f.mul(det, lead);
        let inv = f.inv(lead).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = buf[i * n + c];
            if factor == 0 {
                continue;
            }
            let t = f.neg(f.mul(factor, inv));
            for j in c..n {
                buf[i * n + j] = f.add(buf[i * n + j], f.mul(t, buf[c * n + j]));
            }
        }
    }
    det
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Matrix", 2)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("rows", &self.to_rows())?;
        st.end()
    }
}
