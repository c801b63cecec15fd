//! Generic dimensions measured directly: the rank of the interpolation matrix
//! at random points over a prime field.
//!
//! A point `(a, b)` of multiplicity `k` contributes one row per pair
//! `(alpha, beta)` with `alpha + beta < k`: the coefficient of
//! `s^alpha t^beta` in `f(a + s, b + t)`. Expanding each monomial by the
//! binomial theorem keeps this valid in every characteristic. The projective
//! dimension of the system is `cols - rank - 1`, minimized over trials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cremona::MultiplicitySequence;
use crate::dimension::{DimensionResult, Evidence, Status};
use crate::error::{Error, Result};
use crate::system::QuasiHomogeneousSystem;

/// `2^31 - 1`.
pub const MERSENNE_31: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OracleConfig {
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            prime: MERSENNE_31,
            trials: 3,
            seed: 0x5eed,
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Checks the modulus is a prime below `2^32` (products then fit in
    /// `u64`) and that there is at least one trial.
    pub fn validate(&self) -> Result<()> {
        if self.prime >= 1 << 32 || !is_prime(self.prime) {
            return Err(Error::NotPrime(self.prime));
        }
        if self.trials == 0 {
            return Err(Error::OutOfRange {
                name: "trials",
                value: 0,
                reason: "at least one trial is needed",
            });
        }
        Ok(())
    }

    fn trial_rng(&self, trial: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ u64::from(trial).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Degree-`d` curves through points with the given multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationProblem {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl InterpolationProblem {
    pub fn new(degree: i64, mults: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = mults.iter().find(|&&m| m < 0) {
            return Err(Error::NegativeMultiplicity(bad));
        }
        Ok(Self { degree, mults })
    }

    pub fn from_sequence(seq: &MultiplicitySequence) -> Result<Self> {
        Self::new(seq.degree, seq.mults.clone())
    }

    /// `sum m(m+1)/2`.
    pub fn nominal_rows(&self) -> i64 {
        self.mults.iter().map(|m| m * (m + 1) / 2).sum()
    }

    /// `(d+1)(d+2)/2`, zero for negative degree.
    pub fn cols(&self) -> i64 {
        if self.degree < 0 {
            0
        } else {
            (self.degree + 1) * (self.degree + 2) / 2
        }
    }

    /// Monomials `x^i y^j` of the affine chart, `i + j <= d`.
    fn monomials(&self) -> Vec<(usize, usize)> {
        let d = self.degree.max(0) as usize;
        let mut out = Vec::with_capacity(self.cols() as usize);
        for total in 0..=d {
            for i in (0..=total).rev() {
                out.push((i, total - i));
            }
        }
        out
    }

    /// Build the interpolation matrix at `points` (one per multiplicity).
    ///
    /// Orders above `d` give zero rows and are left out, so the matrix has
    /// exactly [`Self::nominal_rows`] rows whenever every `m <= d + 1`.
    pub fn matrix(&self, points: &[(u64, u64)], prime: u64) -> Vec<Vec<u64>> {
        assert_eq!(points.len(), self.mults.len());
        if self.degree < 0 {
            return Vec::new();
        }
        let d = self.degree as usize;
        let binom = binomials(d, prime);
        let monomials = self.monomials();
        let mut rows = Vec::new();
        for (&(a, b), &mult) in points.iter().zip(&self.mults) {
            let pa = powers(a, d, prime);
            let pb = powers(b, d, prime);
            let top = (mult as usize).min(d + 1);
            for order in 0..top {
                for alpha in 0..=order {
                    let beta = order - alpha;
                    let row = monomials
                        .iter()
                        .map(|&(i, j)| {
                            if alpha > i || beta > j {
                                0
                            } else {
                                let x = binom[i][alpha] * pa[i - alpha] % prime;
                                let y = binom[j][beta] * pb[j - beta] % prime;
                                x * y % prime
                            }
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// Projective dimension at the given points.
    pub fn dim_at(&self, points: &[(u64, u64)], prime: u64) -> i64 {
        if self.degree < 0 {
            return -1;
        }
        let mut matrix = self.matrix(points, prime);
        let cols = self.cols() as usize;
        let rank = rank_mod_p(&mut matrix, cols, prime);
        cols as i64 - rank as i64 - 1
    }
}

fn powers(x: u64, d: usize, prime: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = 1 % prime;
    for _ in 0..=d {
        out.push(acc);
        acc = acc * x % prime;
    }
    out
}

fn binomials(d: usize, prime: u64) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; d + 1]; d + 1];
    for i in 0..=d {
        table[i][0] = 1;
        for k in 1..=i {
            table[i][k] = (table[i - 1][k - 1] + table[i - 1][k]) % prime;
        }
    }
    table
}

/// Rank over `F_p` by fraction-free elimination: rows are combined as
/// `pivot * row - factor * pivot_row`, never dividing.
pub fn rank_mod_p(matrix: &mut [Vec<u64>], cols: usize, prime: u64) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == matrix.len() {
            break;
        }
        let Some(pivot) = (rank..matrix.len()).find(|&r| matrix[r][col] != 0) else {
            continue;
        };
        matrix.swap(rank, pivot);
        let (top, rest) = matrix.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[col];
        for row in rest.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let lhs = pv * row[c] % prime;
                let rhs = factor * pivot_row[c] % prime;
                row[c] = (lhs + prime - rhs) % prime;
            }
        }
        rank += 1;
    }
    rank
}

/// Result of a measurement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleMeasurement {
    pub dim: i64,
    pub trial_dims: Vec<i64>,
    pub config: OracleConfig,
}

pub fn random_points(count: usize, prime: u64, rng: &mut impl Rng) -> Vec<(u64, u64)> {
    (0..count)
        .map(|_| (rng.gen_range(0..prime), rng.gen_range(0..prime)))
        .collect()
}

/// Measure the generic dimension of a multiplicity sequence.
pub fn measure_sequence(
    seq: &MultiplicitySequence,
    cfg: &OracleConfig,
) -> Result<OracleMeasurement> {
    cfg.validate()?;
    if seq.degree >= cfg.prime as i64 {
        return Err(Error::PrimeTooSmall {
            prime: cfg.prime,
            degree: seq.degree,
        });
    }
    let problem = InterpolationProblem::from_sequence(seq)?;
    let trial_dims: Vec<i64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = cfg.trial_rng(t);
            let points = random_points(problem.mults.len(), cfg.prime, &mut rng);
            problem.dim_at(&points, cfg.prime)
        })
        .collect();
    let dim = *trial_dims.iter().min().expect("at least one trial");
    Ok(OracleMeasurement {
        dim,
        trial_dims,
        config: *cfg,
    })
}

pub fn measure_dim(l: &QuasiHomogeneousSystem, cfg: &OracleConfig) -> Result<DimensionResult> {
    let m = measure_sequence(&l.to_sequence(), cfg)?;
    Ok(DimensionResult {
        dim: m.dim,
        status: Status::OracleMeasured,
        evidence: Evidence::Oracle {
            config: m.config,
            trial_dims: m.trial_dims,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Speciality {
    pub dim: i64,
    pub e: i64,
    pub special: bool,
}

pub fn measure_speciality(l: &QuasiHomogeneousSystem, cfg: &OracleConfig) -> Result<Speciality> {
    let dim = measure_dim(l, cfg)?.dim;
    let e = l.expected_dim();
    Ok(Speciality {
        dim,
        e,
        special: dim > e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::qh;

    fn dim(d: i64, m0: i64, n: i64, m: i64) -> i64 {
        measure_dim(&qh(d, m0, n, m), &OracleConfig::default())
            .unwrap()
            .dim
    }

    #[test]
    fn small_examples() {
        assert_eq!(dim(1, 0, 2, 1), 0);
        assert_eq!(dim(6, 0, 5, 3), 0);
        assert_eq!(dim(2, 0, 2, 2), 0);
        assert_eq!(dim(4, 0, 5, 2), 0);
        assert_eq!(dim(4, 0, 2, 3), 3);
        assert_eq!(dim(5, 0, 1, 1), 19);
        assert_eq!(dim(0, 0, 0, 0), 0);
        assert_eq!(dim(2, 3, 0, 0), -1);
    }

    #[test]
    fn speciality_examples() {
        let cfg = OracleConfig::default();
        assert!(measure_speciality(&qh(4, 0, 5, 2), &cfg).unwrap().special);
        let s = measure_speciality(&qh(3, 0, 3, 2), &cfg).unwrap();
        assert_eq!((s.dim, s.e, s.special), (0, 0, false));
    }

    #[test]
    fn row_count_matches_conditions() {
        for (d, mults) in [(4, vec![2, 3, 3]), (6, vec![0, 1, 7]), (3, vec![4, 4])] {
            let p = InterpolationProblem::new(d, mults).unwrap();
            let pts: Vec<_> = (0..p.mults.len() as u64)
                .map(|i| (i + 3, 2 * i + 5))
                .collect();
            let rows = p.matrix(&pts, MERSENNE_31);
            assert_eq!(rows.len() as i64, p.nominal_rows());
            assert!(rows.iter().all(|r| r.len() as i64 == p.cols()));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let small = OracleConfig {
            prime: 5,
            ..OracleConfig::default()
        };
        assert!(matches!(
            measure_dim(&qh(7, 0, 1, 1), &small),
            Err(Error::PrimeTooSmall { .. })
        ));
        let composite = OracleConfig {
            prime: 1 << 20,
            ..OracleConfig::default()
        };
        assert!(composite.validate().is_err());
        assert!(InterpolationProblem::new(3, vec![1, -1]).is_err());
    }

    #[test]
    fn rank_of_known_matrices() {
        let p = 7;
        let mut m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(&mut m, 3, p), 2);
        let mut id = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(rank_mod_p(&mut id, 2, p), 2);
        // determinant 7
        let mut m = vec![vec![2, 3], vec![1, 5]];
        assert_eq!(rank_mod_p(&mut m, 2, p), 1);
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = OracleConfig::with_seed(42);
        let a = measure_sequence(&qh(7, 2, 6, 2).to_sequence(), &cfg).unwrap();
        let b = measure_sequence(&qh(7, 2, 6, 2).to_sequence(), &cfg).unwrap();
        assert_eq!(a, b);
    }
}
