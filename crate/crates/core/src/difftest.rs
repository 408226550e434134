//! Seeded differential testing of the standard-form classifier against the
//! brute-force oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::classify_equals_oracle;
use crate::construct::build_s1;
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::pmds::{PmdsError, PmdsParams};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Uniformly random `k × n` matrix of rank `k` (rejection sampling).
pub fn random_full_rank<R: Rng>(rng: &mut R, field: &FieldSpec, k: usize, n: usize) -> Matrix {
    loop {
        let data = (0..k * n).map(|_| rng.random_range(0..field.order())).collect();
        let g = Matrix::new(field.clone(), k, n, data).expect("entries in range");
        if g.rank() == k {
            return g;
        }
    }
}

/// `S · G · D` for random invertible `S` and random nonzero diagonal `D`;
/// generates a code equivalent to `G` with the same block structure.
pub fn random_equivalent<R: Rng>(rng: &mut R, g: &Matrix) -> Matrix {
    let f = g.field().clone();
    let s = random_full_rank(rng, &f, g.rows(), g.rows());
    let d: Vec<u32> = (0..g.cols()).map(|_| rng.random_range(1..f.order())).collect();
    s.mul(g)
        .expect("shapes agree")
        .transpose()
        .scale_rows(&d)
        .expect("one scale per column")
        .transpose()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffTestReport {
    pub seed: u64,
    pub instances: usize,
    pub oracle_positive: usize,
    pub agreements: usize,
    /// Inputs on which the classifier and the oracle disagree.
    pub disagreements: Vec<Matrix>,
}

impl DiffTestReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs the classifier and the oracle on `count` random full-rank inputs.
/// When a PMDS code over `field` can be built, two thirds of the inputs are
/// derived from it (random equivalents, and random equivalents with one
/// entry changed) so that both verdicts are well represented.
pub fn differential_test(
    params: &PmdsParams,
    field: &FieldSpec,
    count: usize,
    seed: u64,
) -> Result<DiffTestReport, PmdsError> {
    if params.s() != 1 {
        return Err(PmdsError::Hypothesis(format!(
            "the classifier needs s = 1, got s = {}",
            params.s()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = build_s1(params, field).ok();
    let mut report = DiffTestReport {
        seed,
        instances: 0,
        oracle_positive: 0,
        agreements: 0,
        disagreements: Vec::new(),
    };
    for i in 0..count {
        let g = match (&base, i % 3) {
            (Some(b), 1) => random_equivalent(&mut rng, b),
            (Some(b), 2) => loop {
                let g = random_equivalent(&mut rng, b);
                let (r, c) = (rng.random_range(0..g.rows()), rng.random_range(0..g.cols()));
                let g = g.with_entry(r, c, rng.random_range(0..field.order())).expect("in range");
                if g.rank() == params.k {
                    break g;
                }
            },
            _ => random_full_rank(&mut rng, field, params.k, params.n()),
        };
        let a = classify_equals_oracle(&g, params)?;
        report.instances += 1;
        report.oracle_positive += usize::from(a.oracle);
        if a.agree {
            report.agreements += 1;
        } else {
            report.disagreements.push(g);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equivalents_keep_rank_and_verdict() {
        let f = FieldSpec::with_order(5).unwrap();
        let p = PmdsParams::with_s(2, 2, vec![1, 2], 1).unwrap();
        let g = build_s1(&p, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let h = random_equivalent(&mut rng, &g);
            assert_eq!(h.rank(), p.k);
            assert!(crate::pmds::pmds_oracle(&h, &p).unwrap().is_pmds);
        }
    }

    #[test]
    fn report_is_reproducible_and_mixed() {
        let f = FieldSpec::with_order(3).unwrap();
        let p = PmdsParams::new(2, 2, vec![1, 1], 3).unwrap();
        let a = differential_test(&p, &f, 60, 3).unwrap();
        assert_eq!(a, differential_test(&p, &f, 60, 3).unwrap());
        assert!(a.all_agree());
        assert_eq!(a.instances, 60);
        assert!(a.oracle_positive > 0 && a.oracle_positive < 60);
    }

    #[test]
    fn rejects_general_s() {
        let f = FieldSpec::with_order(7).unwrap();
        let p = PmdsParams::with_s(2, 3, vec![1, 1], 2).unwrap();
        assert!(differential_test(&p, &f, 1, 0).is_err());
    }
}
