//! PMDS code builders: the block construction for one global parity
//! (`s = 1`), the all-ones construction for `ell = 1`, and the
//! concatenation construction for `ell = 1` and any `s`.

use serde::Serialize;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{Matrix, MatrixError};
use crate::mds::{is_mds_generator, mds_generator, systematic_form, systematic_mds_equivalence, MdsError};
use crate::pmds::{field_size_bound_s1, PmdsError, PmdsParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("field of order {q} is too small, need q >= {bound}")]
    FieldTooSmall { q: u32, bound: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid seed: {0}")]
    Seed(String),
    #[error(transparent)]
    Mds(#[from] MdsError),
    #[error(transparent)]
    Pmds(#[from] PmdsError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedRole {
    /// `(I | X | 1)`: systematic with an all-ones last column.
    Interior,
    /// `(I | 1 | X)`: systematic with the all-ones column at position `ell`.
    Last,
}

/// An `[ell + r + 1, ell]`-MDS generator normalised for `role`, obtained
/// from a (doubly-)extended RS code by row scaling its systematic form.
pub fn seed_from_rs(field: &FieldSpec, ell: usize, r: usize, role: SeedRole) -> Result<Matrix, ConstructError> {
    if ell == 0 || r == 0 {
        return Err(ConstructError::InvalidParams(format!("need l >= 1 and r >= 1, got l={ell}, r={r}")));
    }
    let n = ell + r + 1;
    let g = mds_generator(field, ell, n).map_err(|e| match e {
        MdsError::NoMdsCode { .. } => ConstructError::FieldTooSmall {
            q: field.order(),
            bound: field_size_bound_s1(ell, r),
        },
        other => other.into(),
    })?;
    let sys = systematic_form(&g, None)?;
    let pivot = match role {
        SeedRole::Interior => n - 1,
        SeedRole::Last => ell,
    };
    let factors: Vec<u32> = (0..ell)
        .map(|j| field.inv(sys.get(j, pivot)).expect("MDS redundancy entries are nonzero"))
        .collect();
    Ok(systematic_mds_equivalence(&sys, &factors)?)
}

/// Parameters plus the MDS seeds from which the `s = 1` generator is
/// assembled: one `(B_i | 1)` per block but the last, and `Â` for the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S1Blueprint {
    params: PmdsParams,
    field: FieldSpec,
    interior: Vec<Matrix>,
    last: Matrix,
}

impl S1Blueprint {
    /// Validates user-supplied seeds against the required shapes.
    pub fn new(params: PmdsParams, field: FieldSpec, interior: Vec<Matrix>, last: Matrix) -> Result<Self, ConstructError> {
        check_s1_params(&params)?;
        let ell = params.ell;
        if interior.len() != params.m - 1 {
            return Err(ConstructError::Seed(format!(
                "expected {} interior seeds, got {}",
                params.m - 1,
                interior.len()
            )));
        }
        let seeds = interior.iter().enumerate().map(|(i, s)| (i, s, SeedRole::Interior));
        for (i, seed, role) in seeds.chain(std::iter::once((params.m - 1, &last, SeedRole::Last))) {
            let cols = ell + params.r[i] + 1;
            if seed.field() != &field || seed.rows() != ell || seed.cols() != cols {
                return Err(ConstructError::Seed(format!(
                    "seed {i} must be {ell}x{cols} over {field}"
                )));
            }
            let ones = match role {
                SeedRole::Interior => cols - 1,
                SeedRole::Last => ell,
            };
            let systematic = (0..ell).all(|r| (0..ell).all(|c| seed.get(r, c) == u32::from(r == c)));
            if !systematic || seed.column(ones).iter().any(|&v| v != 1) {
                return Err(ConstructError::Seed(format!(
                    "seed {i} must be systematic with an all-ones column {ones}"
                )));
            }
            if !is_mds_generator(seed)?.is_mds {
                return Err(ConstructError::Seed(format!("seed {i} is not MDS")));
            }
        }
        Ok(Self {
            params,
            field,
            interior,
            last,
        })
    }

    /// Default seeds from (doubly-)extended RS codes.
    pub fn from_rs(params: PmdsParams, field: FieldSpec) -> Result<Self, ConstructError> {
        check_s1_params(&params)?;
        let bound = field_size_bound_s1(params.ell, params.max_r());
        if (field.order() as usize) < bound {
            return Err(ConstructError::FieldTooSmall {
                q: field.order(),
                bound,
            });
        }
        let m = params.m;
        let interior = (0..m - 1)
            .map(|i| seed_from_rs(&field, params.ell, params.r[i], SeedRole::Interior))
            .collect::<Result<Vec<_>, _>>()?;
        let last = seed_from_rs(&field, params.ell, params.r[m - 1], SeedRole::Last)?;
        Self::new(params, field, interior, last)
    }

    pub fn params(&self) -> &PmdsParams {
        &self.params
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn interior_seeds(&self) -> &[Matrix] {
        &self.interior
    }

    pub fn last_seed(&self) -> &Matrix {
        &self.last
    }

    /// `B_i`: the interior seed without its all-ones column.
    pub fn b(&self, i: usize) -> Matrix {
        let s = &self.interior[i];
        s.block(0..s.rows(), 0..s.cols() - 1)
    }

    /// `A`: rows `1..` of `Â` without its first column.
    pub fn a(&self) -> Matrix {
        self.last.block(1..self.last.rows(), 1..self.last.cols())
    }

    /// One row of `M`: row 0 of `Â` without its first column.
    pub fn m_row(&self) -> Vec<u32> {
        self.last.row(0)[1..].to_vec()
    }

    /// The `(m·ell − 1) × n` generator matrix.
    pub fn assemble(&self) -> Matrix {
        let p = &self.params;
        let ell = p.ell;
        let mut g = Matrix::zeros(self.field.clone(), p.k, p.n());
        let last = p.block_range(p.m - 1);
        let m_row = self.m_row();
        for i in 0..p.m - 1 {
            let b = self.b(i);
            let cols = p.block_range(i);
            for j in 0..ell {
                let row = i * ell + j;
                for (c, col) in cols.clone().enumerate() {
                    g.set(row, col, b.get(j, c));
                }
                for (c, col) in last.clone().enumerate() {
                    g.set(row, col, m_row[c]);
                }
            }
        }
        let a = self.a();
        for j in 0..ell - 1 {
            for (c, col) in last.clone().enumerate() {
                g.set((p.m - 1) * ell + j, col, a.get(j, c));
            }
        }
        g
    }
}

fn check_s1_params(params: &PmdsParams) -> Result<(), ConstructError> {
    if params.m < 2 {
        return Err(ConstructError::InvalidParams("need at least two blocks".into()));
    }
    if params.s() != 1 {
        return Err(ConstructError::InvalidParams(format!(
            "this construction has s = 1, got s = {}",
            params.s()
        )));
    }
    Ok(())
}

/// Generator of an `[n, m·ell − 1, ell; r]`-PMDS code built from RS seeds.
pub fn build_s1(params: &PmdsParams, field: &FieldSpec) -> Result<Matrix, ConstructError> {
    Ok(S1Blueprint::from_rs(params.clone(), field.clone())?.assemble())
}

/// `ell = 1`, `s = 1`: row `i` is all ones on block `i` and on the last block.
pub fn build_ell1_s1(params: &PmdsParams, field: &FieldSpec) -> Result<Matrix, ConstructError> {
    if params.ell != 1 {
        return Err(ConstructError::InvalidParams(format!("need l = 1, got l = {}", params.ell)));
    }
    check_s1_params(params)?;
    let mut g = Matrix::zeros(field.clone(), params.k, params.n());
    let last = params.block_range(params.m - 1);
    for i in 0..params.m - 1 {
        for c in params.block_range(i).chain(last.clone()) {
            g.set(i, c, 1);
        }
    }
    Ok(g)
}

/// `ell = 1`, any `1 <= s < m`: column `j` of an `[m, m − s]`-MDS generator
/// repeated `r_j + 1` times.
pub fn build_ell1_general_s(m: usize, s: usize, r: &[usize], field: &FieldSpec) -> Result<Matrix, ConstructError> {
    if m < 2 || s == 0 || s >= m {
        return Err(ConstructError::InvalidParams(format!("need m >= 2 and 1 <= s < m, got m={m}, s={s}")));
    }
    let params = PmdsParams::with_s(m, 1, r.to_vec(), s)?;
    let outer = mds_generator(field, m - s, m).map_err(|e| match e {
        MdsError::NoMdsCode { .. } => ConstructError::FieldTooSmall {
            q: field.order(),
            bound: m - 1,
        },
        other => other.into(),
    })?;
    let mut g = Matrix::zeros(field.clone(), m - s, params.n());
    for j in 0..m {
        for c in params.block_range(j) {
            for i in 0..m - s {
                g.set(i, c, outer.get(i, j));
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmds::{mr_check, pmds_oracle};

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn params(m: usize, ell: usize, r: &[usize]) -> PmdsParams {
        PmdsParams::with_s(m, ell, r.to_vec(), 1).unwrap()
    }

    #[test]
    fn gf3_build_reproduces_known_matrix() {
        let g = build_s1(&params(2, 2, &[1, 1]), &gf(3)).unwrap();
        assert_eq!(
            g.to_rows(),
            vec![
                vec![1, 0, 1, 0, 1, 1],
                vec![0, 1, 2, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 2]
            ]
        );
        assert!(pmds_oracle(&g, &params(2, 2, &[1, 1])).unwrap().is_pmds);
    }

    #[test]
    fn gf4_build_is_pmds() {
        let p = params(2, 3, &[2, 1]);
        let g = build_s1(&p, &gf(4)).unwrap();
        assert_eq!((g.rows(), g.cols()), (5, 9));
        assert!(pmds_oracle(&g, &p).unwrap().is_pmds);
        assert!(mr_check(&g, &p).unwrap().holds);
    }

    #[test]
    fn too_small_field_is_rejected() {
        assert_eq!(
            build_s1(&params(2, 2, &[2, 2]), &gf(3)),
            Err(ConstructError::FieldTooSmall { q: 3, bound: 4 })
        );
        assert!(build_s1(&PmdsParams::with_s(2, 2, vec![1, 1], 2).unwrap(), &gf(5)).is_err());
    }

    #[test]
    fn seeds_have_required_shape() {
        let s = seed_from_rs(&gf(3), 2, 1, SeedRole::Interior).unwrap();
        assert_eq!((s.rows(), s.cols()), (2, 4));
        assert_eq!(s.column(3), vec![1, 1]);
        assert!(is_mds_generator(&s).unwrap().is_mds);

        let s = seed_from_rs(&gf(4), 3, 2, SeedRole::Interior).unwrap();
        assert_eq!((s.rows(), s.cols()), (3, 6));
        assert_eq!(s.column(5), vec![1, 1, 1]);
        assert!(is_mds_generator(&s).unwrap().is_mds);

        let s = seed_from_rs(&gf(4), 3, 2, SeedRole::Last).unwrap();
        assert_eq!(s.column(3), vec![1, 1, 1]);
        assert_eq!(s.block(0..3, 0..3), Matrix::identity(gf(4), 3));
        assert!(is_mds_generator(&s).unwrap().is_mds);

        assert!(matches!(
            seed_from_rs(&gf(3), 3, 2, SeedRole::Interior),
            Err(ConstructError::FieldTooSmall { .. })
        ));
    }

    #[test]
    fn blueprint_rejects_bad_seeds() {
        let p = params(2, 2, &[1, 1]);
        let f = gf(3);
        let good = S1Blueprint::from_rs(p.clone(), f.clone()).unwrap();
        let interior = good.interior_seeds().to_vec();
        let last = good.last_seed().clone();
        assert!(S1Blueprint::new(p.clone(), f.clone(), interior.clone(), last.clone()).is_ok());

        let no_ones = interior[0].with_entry(0, 3, 2).unwrap();
        assert!(matches!(
            S1Blueprint::new(p.clone(), f.clone(), vec![no_ones], last.clone()),
            Err(ConstructError::Seed(_))
        ));
        // systematic with ones column but a zero redundancy entry
        let not_mds = Matrix::from_rows(f.clone(), &[[1, 0, 0, 1], [0, 1, 1, 1]]).unwrap();
        assert!(matches!(
            S1Blueprint::new(p.clone(), f.clone(), vec![not_mds], last.clone()),
            Err(ConstructError::Seed(_))
        ));
        assert!(S1Blueprint::new(p, f, vec![], last).is_err());
    }

    #[test]
    fn build_is_deterministic() {
        let p = params(3, 2, &[2, 1, 2]);
        assert_eq!(build_s1(&p, &gf(4)).unwrap(), build_s1(&p, &gf(4)).unwrap());
    }

    #[test]
    fn s1_grid_passes_oracle() {
        for m in [2usize, 3] {
            for ell in [1usize, 2, 3] {
                for mask in 0..1u32 << m {
                    let r: Vec<usize> = (0..m).map(|i| 1 + (mask >> i & 1) as usize).collect();
                    let p = params(m, ell, &r);
                    let q = field_size_bound_s1(ell, p.max_r());
                    let f = FieldSpec::smallest_with_order_at_least(q as u32).unwrap();
                    let g = build_s1(&p, &f).unwrap();
                    assert!(pmds_oracle(&g, &p).unwrap().is_pmds, "{p} over {f}");
                }
            }
        }
    }

    #[test]
    fn ell1_s1_examples() {
        let p = params(2, 1, &[1, 1]);
        let g = build_ell1_s1(&p, &gf(2)).unwrap();
        assert_eq!(g.to_rows(), vec![vec![1, 1, 1, 1]]);
        assert!(pmds_oracle(&g, &p).unwrap().is_pmds);

        let p = params(3, 1, &[1, 2, 1]);
        let g = build_ell1_s1(&p, &gf(2)).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 7));
        assert!(pmds_oracle(&g, &p).unwrap().is_pmds);
        assert_eq!(g, build_s1(&p, &gf(2)).unwrap());

        assert!(build_ell1_s1(&params(2, 2, &[1, 1]), &gf(2)).is_err());
    }

    #[test]
    fn ell1_general_s_examples() {
        let g = build_ell1_general_s(2, 1, &[1, 1], &gf(2)).unwrap();
        assert_eq!(g.to_rows(), vec![vec![1, 1, 1, 1]]);

        let g = build_ell1_general_s(4, 2, &[1, 1, 1, 1], &gf(3)).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 8));
        let p = PmdsParams::with_s(4, 1, vec![1; 4], 2).unwrap();
        assert!(pmds_oracle(&g, &p).unwrap().is_pmds);

        assert!(matches!(
            build_ell1_general_s(4, 2, &[1, 1, 1, 1], &gf(2)),
            Err(ConstructError::FieldTooSmall { q: 2, bound: 3 })
        ));
        assert!(build_ell1_general_s(3, 3, &[1, 1, 1], &gf(5)).is_err());
    }

    #[test]
    fn ell1_general_s_grid() {
        for m in 2..=4usize {
            for s in 1..m {
                for mask in 0..1u32 << m {
                    let r: Vec<usize> = (0..m).map(|i| 1 + (mask >> i & 1) as usize).collect();
                    let p = PmdsParams::with_s(m, 1, r.clone(), s).unwrap();
                    let f = (2..)
                        .filter_map(|q| FieldSpec::with_order(q).ok())
                        .find(|f| build_ell1_general_s(m, s, &r, f).is_ok())
                        .unwrap();
                    assert!(f.order() as usize >= m - 2, "m={m} s={s}");
                    let g = build_ell1_general_s(m, s, &r, &f).unwrap();
                    assert!(pmds_oracle(&g, &p).unwrap().is_pmds, "{p} over {f}");
                }
            }
        }
    }
}
