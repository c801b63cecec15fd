//! Quadratic Cremona transformations and the closed forms for systems whose
//! distinguished multiplicity is close to the degree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dimension::{DimensionResult, Rule, Status};
use crate::error::{Error, Result};
use crate::system::{multiplicity_one, trinomial_dim, QuasiHomogeneousSystem};

/// `(degree; m_0, m_1, ...)`, index 0 being the distinguished point.
///
/// Entries may be negative while doing class computations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiplicitySequence {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl MultiplicitySequence {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        Self { degree, mults }
    }

    /// Degree and every multiplicity non-negative.
    pub fn is_effective_form(&self) -> bool {
        self.degree >= 0 && self.mults.iter().all(|&m| m >= 0)
    }

    pub fn virtual_dim(&self) -> i64 {
        let d = self.degree;
        d * (d + 3) / 2 - self.mults.iter().map(|m| m * (m + 1) / 2).sum::<i64>()
    }

    pub fn self_int(&self) -> i64 {
        self.degree * self.degree - self.mults.iter().map(|m| m * m).sum::<i64>()
    }

    pub fn genus(&self) -> i64 {
        let d = self.degree;
        (d * (d - 3) - self.mults.iter().map(|m| m * (m - 1)).sum::<i64>() + 2) / 2
    }

    /// Intersection number; missing trailing entries count as zero.
    pub fn dot(&self, other: &Self) -> i64 {
        self.degree * other.degree
            - self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a * b)
                .sum::<i64>()
    }

    /// Apply the quadratic transformation based at points `i, j, k`.
    pub fn quadratic_transform(&self, i: usize, j: usize, k: usize) -> Result<Transformed> {
        let len = self.mults.len();
        if i == j || j == k || i == k || i >= len || j >= len || k >= len {
            return Err(Error::BadTransformIndices(i, j, k));
        }
        let d = self.degree;
        let (mi, mj, mk) = (self.mults[i], self.mults[j], self.mults[k]);
        let mut mults = self.mults.clone();
        mults[i] = d - mj - mk;
        mults[j] = d - mi - mk;
        mults[k] = d - mi - mj;
        Ok(Transformed {
            sequence: MultiplicitySequence::new(2 * d - mi - mj - mk, mults),
            empty_warning: 2 * d < mi + mj + mk,
        })
    }

    /// Indices of the three largest multiplicities, ties broken by index.
    pub fn three_largest(&self) -> Option<(usize, usize, usize)> {
        if self.mults.len() < 3 {
            return None;
        }
        let mut idx: Vec<usize> = (0..self.mults.len()).collect();
        idx.sort_by(|&a, &b| self.mults[b].cmp(&self.mults[a]).then(a.cmp(&b)));
        Some((idx[0], idx[1], idx[2]))
    }

    /// Drop zero multiplicities beyond the distinguished point.
    pub fn trimmed(&self) -> Self {
        let mut mults = vec![self.mults.first().copied().unwrap_or(0)];
        mults.extend(self.mults.iter().skip(1).copied().filter(|&m| m != 0));
        Self::new(self.degree, mults)
    }
}

impl fmt::Display for MultiplicitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.degree)?;
        for (i, m) in self.mults.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {m}")?;
        }
        write!(f, ")")
    }
}

/// Output of [`MultiplicitySequence::quadratic_transform`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformed {
    pub sequence: MultiplicitySequence,
    /// Set when `2d < m_i + m_j + m_k`, in which case the system is empty.
    pub empty_warning: bool,
}

/// Division data `d = q * modulus + mu`, `n = 2h + eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeM0Form {
    pub q: i64,
    pub mu: i64,
    pub h: i64,
    pub eps: i64,
}

impl LargeM0Form {
    /// `d = q m + mu` with `0 <= mu <= m - 1`.
    pub fn complementary(d: i64, n: i64, m: i64) -> Self {
        Self::divide(d, n, m)
    }

    /// `d = q (m - 1) + mu` with `0 <= mu <= m - 2`.
    pub fn complementary_minus_one(d: i64, n: i64, m: i64) -> Self {
        Self::divide(d, n, m - 1)
    }

    fn divide(d: i64, n: i64, modulus: i64) -> Self {
        Self {
            q: d.div_euclid(modulus),
            mu: d.rem_euclid(modulus),
            h: n / 2,
            eps: n % 2,
        }
    }
}

fn precondition(rule: &'static str, l: &QuasiHomogeneousSystem) -> Error {
    let (d, m0, n, m) = l.tuple();
    Error::Precondition { rule, d, m0, n, m }
}

/// `L(d, d-m, n, m)` with `2 <= m <= d`.
pub fn dim_m0_eq_d_minus_m(l: &QuasiHomogeneousSystem) -> Result<DimensionResult> {
    let (d, m0, n, m) = l.tuple();
    if m < 2 || m > d || m0 != d - m {
        return Err(precondition("m0 = d - m, 2 <= m <= d", l));
    }
    let LargeM0Form { q, mu, h, eps } = LargeM0Form::complementary(d, n, m);
    let (dim, special) = if q > h {
        (d * (m + 1) - m * (m - 1) / 2 - n * m * (m + 1) / 2, false)
    } else if q == h && eps == 1 {
        (-1, false)
    } else if q == h && mu == m - 1 {
        ((m - 1) * (m + 2) / 2, false)
    } else if q == h {
        (mu * (mu + 3) / 2, true)
    } else {
        (-1, false)
    };
    Ok(DimensionResult {
        dim,
        status: if special {
            Status::SpecialProved
        } else {
            Status::NonSpecialProved
        },
        evidence: crate::dimension::Evidence::Rule {
            rule: Rule::ComplementaryMultiplicity,
        },
    })
}

/// `L(d, d-m, n, m)` for any `0 <= m <= d`, falling back to the trivial
/// cases for `m <= 1`.
fn complementary_any(d: i64, n: i64, m: i64) -> i64 {
    if d < 0 {
        return -1;
    }
    if m > d {
        // m0 = d - m < 0 imposes nothing, but a point of multiplicity above
        // the degree kills the system
        return if n >= 1 { -1 } else { d * (d + 3) / 2 };
    }
    match m {
        0 => d,
        1 => (2 * d - n).max(-1),
        _ => {
            let l = QuasiHomogeneousSystem::new(d, d - m, n, m).expect("non-negative");
            dim_m0_eq_d_minus_m(&l).expect("precondition checked").dim
        }
    }
}

/// `L(d, d-m+k, n, m)` with `k >= 1`.
pub fn dim_m0_ge_d_minus_m(l: &QuasiHomogeneousSystem) -> Result<DimensionResult> {
    let (d, m0, n, m) = l.tuple();
    let k = m0 - d + m;
    if k <= 0 {
        return Err(precondition("m0 > d - m", l));
    }
    let e = l.expected_dim();
    if m0 > d {
        return Ok(DimensionResult::from_rule(
            -1,
            e,
            Rule::MultiplicityExceedsDegree,
        ));
    }
    if m0 == d {
        return Ok(DimensionResult::from_rule(
            (d - n * m).max(-1),
            e,
            Rule::ConeOverPoint,
        ));
    }
    if m0 == d - 1 && m >= 2 {
        return Ok(DimensionResult::from_rule(
            (2 * d - 2 * n * m + n).max(-1),
            e,
            Rule::NearConeOverPoint,
        ));
    }
    let dim = complementary_any(d - k * n, n, m - k);
    Ok(DimensionResult::from_rule(dim, e, Rule::LineSplitting))
}

/// The system left after the lines through `p0` split off `k` times.
pub fn line_split_residual(l: &QuasiHomogeneousSystem) -> Option<(i64, i64, i64, i64)> {
    let (d, m0, n, m) = l.tuple();
    let k = m0 - d + m;
    (k >= 1).then(|| (d - k * n, d - k * n - m + k, n, m - k))
}

/// `L(d, d-m-1, n, m)` with `2 <= m <= d - 1`.
pub fn dim_m0_eq_d_minus_m_minus_1(l: &QuasiHomogeneousSystem) -> Result<DimensionResult> {
    let (d, m0, n, m) = l.tuple();
    if m < 2 || m > d - 1 || m0 != d - m - 1 {
        return Err(precondition("m0 = d - m - 1, 2 <= m <= d - 1", l));
    }
    let LargeM0Form { q, mu, h, eps } = LargeM0Form::complementary_minus_one(d, n, m);
    let dim = if q == h + 1 && mu == 0 && eps == 0 && (m - 1) * (m + 2) >= 4 * h {
        (m - 1) * (m + 2) / 2 - 2 * h
    } else if q == h && eps == 0 && 4 * q <= mu * (mu + 3) {
        mu * (mu + 3) / 2 - 2 * q
    } else {
        (d * (m + 2) - (n + 1) * m * (m + 1) / 2).max(-1)
    };
    Ok(DimensionResult::from_rule(
        dim,
        l.expected_dim(),
        Rule::ComplementaryMultiplicityMinusOne,
    ))
}

/// Systems with at most two equal points or simple equal points.
pub fn dim_few_points(l: &QuasiHomogeneousSystem) -> Result<DimensionResult> {
    let (d, m0, n, m) = l.tuple();
    if n > 2 && m > 1 {
        return Err(precondition("n <= 2 or m <= 1", l));
    }
    let e = l.expected_dim();
    if m0 == d - m && m <= d {
        if let Some(dim) = complementary_few_points(d, n, m) {
            return Ok(DimensionResult::from_rule(
                dim,
                e,
                Rule::ComplementaryFewPoints,
            ));
        }
    }
    if m <= 1 {
        let base = trinomial_dim(d, m0, 0, 0);
        return Ok(DimensionResult::from_rule(
            multiplicity_one(base, n),
            e,
            Rule::SimplePoints,
        ));
    }
    let dim = match n {
        1 => trinomial_dim(d, m0, m, 0),
        _ => trinomial_dim(d, m0, m, m),
    };
    Ok(DimensionResult::from_rule(dim, e, Rule::MonomialCount))
}

/// Closed forms for `L(d, d-m, n, m)` when `m <= 1` or `n <= 2`.
pub fn complementary_few_points(d: i64, n: i64, m: i64) -> Option<i64> {
    if m == 0 || n == 0 {
        // with nothing on the equal points this is L(d, d - m)
        return Some(d + d * m - m * (m - 1) / 2);
    }
    if m == 1 {
        return Some((2 * d - n).max(-1));
    }
    match n {
        1 => Some(d + m * (d - m)),
        2 if m <= d && d <= 2 * m => Some((d - m) * (d - m + 3) / 2),
        2 => Some(d * (m + 1) - m * (3 * m + 1) / 2),
        _ => None,
    }
}

/// Dimension of `L(d, d-m, n, m)` by the step-by-step reduction: transform
/// at `p0` and two equal points while `d >= 2m`, then finish with a closed
/// form or the emptiness statement for `d < 2m`, `n >= 3`.
pub fn complementary_by_reduction(mut d: i64, mut n: i64, m: i64) -> i64 {
    assert!(d >= m && m >= 0);
    loop {
        if let Some(dim) = complementary_few_points(d, n, m) {
            return dim;
        }
        if d >= 2 * m {
            d -= m;
            n -= 2;
        } else {
            return -1;
        }
    }
}

/// Closed forms for any system with `m0 >= d - m - 1`, or `None` when the
/// system is outside that regime.
pub fn large_m0_dim(l: &QuasiHomogeneousSystem) -> Option<DimensionResult> {
    let (d, m0, n, m) = l.tuple();
    let e = l.expected_dim();
    if m0 > d {
        return Some(DimensionResult::from_rule(
            -1,
            e,
            Rule::MultiplicityExceedsDegree,
        ));
    }
    if n >= 1 && m > d {
        return Some(DimensionResult::from_rule(
            -1,
            e,
            Rule::MultiplicityExceedsDegree,
        ));
    }
    if m0 == d {
        return Some(DimensionResult::from_rule(
            (d - n * m).max(-1),
            e,
            Rule::ConeOverPoint,
        ));
    }
    if m <= 1 || n <= 2 {
        return dim_few_points(l).ok();
    }
    if m0 > d - m {
        return dim_m0_ge_d_minus_m(l).ok();
    }
    if m0 == d - m {
        return dim_m0_eq_d_minus_m(l).ok();
    }
    if m0 == d - m - 1 {
        return dim_m0_eq_d_minus_m_minus_1(l).ok();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::qh;

    fn seq(d: i64, mults: &[i64]) -> MultiplicitySequence {
        MultiplicitySequence::new(d, mults.to_vec())
    }

    #[test]
    fn transform_examples() {
        let s = qh(12, 8, 9, 3).to_sequence();
        let t = s.quadratic_transform(0, 1, 2).unwrap();
        let mut expect = vec![6, 1, 1];
        expect.extend([3; 7]);
        assert_eq!(t.sequence, seq(10, &expect));
        assert!(!t.empty_warning);

        for e in 2..8 {
            let s = qh(e, e - 1, 2 * e, 1).to_sequence();
            let t = s.quadratic_transform(0, 1, 2).unwrap().sequence.trimmed();
            assert_eq!(t, qh(e - 1, e - 2, 2 * e - 2, 1).to_sequence());
        }

        let zero = seq(0, &[0, 0, 0]);
        assert_eq!(zero.quadratic_transform(0, 1, 2).unwrap().sequence, zero);
    }

    #[test]
    fn transform_rejects_bad_indices() {
        let s = seq(3, &[1, 1, 1]);
        assert!(s.quadratic_transform(0, 0, 1).is_err());
        assert!(s.quadratic_transform(0, 1, 3).is_err());
    }

    #[test]
    fn transform_flags_empty_systems() {
        let t = seq(2, &[2, 2, 1]).quadratic_transform(0, 1, 2).unwrap();
        assert!(t.empty_warning);
        assert_eq!(t.sequence.degree, -1);
    }

    #[test]
    fn three_largest_breaks_ties_by_index() {
        assert_eq!(seq(5, &[1, 3, 3, 2, 3]).three_largest(), Some((1, 2, 4)));
        assert_eq!(seq(5, &[1, 3]).three_largest(), None);
    }

    #[test]
    fn complementary_examples() {
        let r = dim_m0_eq_d_minus_m(&qh(6, 4, 6, 2)).unwrap();
        assert_eq!((r.dim, r.status), (0, Status::SpecialProved));
        let r = dim_m0_eq_d_minus_m(&qh(9, 6, 6, 3)).unwrap();
        assert_eq!((r.dim, r.status), (0, Status::SpecialProved));
        let r = dim_m0_eq_d_minus_m(&qh(7, 4, 4, 3)).unwrap();
        assert_eq!((r.dim, r.status), (2, Status::SpecialProved));
        assert!(dim_m0_eq_d_minus_m(&qh(7, 5, 4, 3)).is_err());
        assert!(dim_m0_eq_d_minus_m(&qh(7, 6, 4, 1)).is_err());
    }

    #[test]
    fn line_splitting_examples() {
        assert_eq!(dim_m0_ge_d_minus_m(&qh(4, 4, 1, 3)).unwrap().dim, 1);
        let r = dim_m0_ge_d_minus_m(&qh(4, 2, 2, 3)).unwrap();
        assert_eq!(line_split_residual(&qh(4, 2, 2, 3)), Some((2, 0, 2, 2)));
        assert_eq!((r.dim, r.status), (0, Status::SpecialProved));
        assert_eq!(dim_m0_ge_d_minus_m(&qh(5, 6, 3, 2)).unwrap().dim, -1);
        assert!(dim_m0_ge_d_minus_m(&qh(5, 3, 3, 2)).is_err());
    }

    #[test]
    fn minus_one_examples() {
        let r = dim_m0_eq_d_minus_m_minus_1(&qh(4, 0, 2, 3)).unwrap();
        assert_eq!((r.dim, r.status), (3, Status::SpecialProved));
        let r = dim_m0_eq_d_minus_m_minus_1(&qh(6, 2, 4, 3)).unwrap();
        assert_eq!((r.dim, r.status), (1, Status::SpecialProved));
        let r = dim_m0_eq_d_minus_m_minus_1(&qh(8, 4, 5, 3)).unwrap();
        assert_eq!((r.dim, r.status), (4, Status::NonSpecialProved));
        assert!(dim_m0_eq_d_minus_m_minus_1(&qh(8, 4, 5, 4)).is_err());
    }

    #[test]
    fn few_points_examples() {
        let r = dim_few_points(&qh(4, 1, 2, 3)).unwrap();
        assert_eq!((r.dim, r.status), (2, Status::SpecialProved));
        assert_eq!(dim_few_points(&qh(5, 3, 1, 2)).unwrap().dim, 11);
        assert_eq!(dim_few_points(&qh(3, 2, 0, 0)).unwrap().dim, 6);
        assert!(dim_few_points(&qh(5, 0, 3, 2)).is_err());
    }

    #[test]
    fn large_m0_dispatch_declines_small_m0() {
        assert!(large_m0_dim(&qh(10, 2, 5, 3)).is_none());
        assert!(large_m0_dim(&qh(10, 6, 5, 3)).is_some());
    }
}
