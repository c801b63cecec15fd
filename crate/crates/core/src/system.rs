//! Quasi-homogeneous linear systems `L(d, m0, n, m)` and their numerical
//! invariants.
//!
//! A system consists of the plane curves of degree `d` with multiplicity at
//! least `m0` at a distinguished general point `p0` and at least `m` at each
//! of `n` further general points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on every parameter; keeps all quadratic formulas inside `i64`.
pub const MAX_PARAM: i64 = 1_000_000;

/// `d(d+3)/2 - m0(m0+1)/2 - n m(m+1)/2`, valid for arbitrary integers.
pub fn virtual_dim(d: i64, m0: i64, n: i64, m: i64) -> i64 {
    d * (d + 3) / 2 - m0 * (m0 + 1) / 2 - n * (m * (m + 1) / 2)
}

pub fn self_intersection(d: i64, m0: i64, n: i64, m: i64) -> i64 {
    d * d - m0 * m0 - n * m * m
}

/// Arithmetic genus from `2g - 2 = d(d-3) - m0(m0-1) - n m(m-1)`.
pub fn arithmetic_genus(d: i64, m0: i64, n: i64, m: i64) -> i64 {
    (d * (d - 3) - m0 * (m0 - 1) - n * m * (m - 1) + 2) / 2
}

/// Dimension after imposing `n` general simple points on a system of
/// dimension `dim_m`.
pub fn multiplicity_one(dim_m: i64, n: i64) -> i64 {
    (dim_m - n).max(-1)
}

/// Generic dimension of degree-`d` curves with three (or fewer) general
/// points of multiplicities `m0, m1, m2`.
///
/// The points sit at the coordinate vertices, so the system is spanned by the
/// monomials `x^a y^b z^c` whose order at each vertex is large enough.
pub fn trinomial_dim(d: i64, m0: i64, m1: i64, m2: i64) -> i64 {
    if d < 0 {
        return -1;
    }
    let mut count = 0i64;
    for a in 0..=d {
        for b in 0..=(d - a) {
            let c = d - a - b;
            if b + c >= m0 && a + c >= m1 && a + b >= m2 {
                count += 1;
            }
        }
    }
    count - 1
}

/// Numerical invariants of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInvariants {
    /// Virtual dimension.
    pub v: i64,
    /// Expected dimension `max(-1, v)`.
    pub e: i64,
    pub self_int: i64,
    pub genus: i64,
}

/// The system `L(d, m0, n, m)`.
///
/// Construction normalizes the degenerate shapes: `n = 0` forces `m = 0` and
/// vice versa, so structural equality is equality of systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct QuasiHomogeneousSystem {
    d: i64,
    m0: i64,
    n: i64,
    m: i64,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    d: i64,
    m0: i64,
    n: i64,
    m: i64,
}

impl TryFrom<RawSystem> for QuasiHomogeneousSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        Self::new(raw.d, raw.m0, raw.n, raw.m)
    }
}

impl From<QuasiHomogeneousSystem> for RawSystem {
    fn from(s: QuasiHomogeneousSystem) -> Self {
        RawSystem {
            d: s.d,
            m0: s.m0,
            n: s.n,
            m: s.m,
        }
    }
}

fn check_param(name: &'static str, value: i64) -> Result<()> {
    if value < 0 {
        return Err(Error::OutOfRange {
            name,
            value,
            reason: "must be non-negative",
        });
    }
    if value > MAX_PARAM {
        return Err(Error::OutOfRange {
            name,
            value,
            reason: "exceeds 10^6",
        });
    }
    Ok(())
}

/// Shorthand for [`QuasiHomogeneousSystem::new`] on literal parameters.
///
/// Panics if a parameter is negative or larger than [`MAX_PARAM`].
pub fn qh(d: i64, m0: i64, n: i64, m: i64) -> QuasiHomogeneousSystem {
    QuasiHomogeneousSystem::new(d, m0, n, m)
        .unwrap_or_else(|e| panic!("invalid system L({d},{m0},{n},{m}): {e}"))
}

impl QuasiHomogeneousSystem {
    pub fn new(d: i64, m0: i64, n: i64, m: i64) -> Result<Self> {
        check_param("d", d)?;
        check_param("m0", m0)?;
        check_param("n", n)?;
        check_param("m", m)?;
        let (n, m) = if n == 0 || m == 0 { (0, 0) } else { (n, m) };
        Ok(Self { d, m0, n, m })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn m0(&self) -> i64 {
        self.m0
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.d, self.m0, self.n, self.m)
    }

    pub fn virtual_dim(&self) -> i64 {
        virtual_dim(self.d, self.m0, self.n, self.m)
    }

    pub fn expected_dim(&self) -> i64 {
        self.virtual_dim().max(-1)
    }

    pub fn invariants(&self) -> SystemInvariants {
        let v = self.virtual_dim();
        SystemInvariants {
            v,
            e: v.max(-1),
            self_int: self_intersection(self.d, self.m0, self.n, self.m),
            genus: arithmetic_genus(self.d, self.m0, self.n, self.m),
        }
    }

    /// Intersection number with `other`, identifying `n_shared` of the
    /// equal-multiplicity points of the two systems.
    pub fn intersect(&self, other: &Self, n_shared: i64) -> Result<i64> {
        if n_shared < 0 || n_shared > self.n.min(other.n) {
            return Err(Error::SharedPoints(n_shared, self.n, other.n));
        }
        Ok(self.d * other.d - self.m0 * other.m0 - n_shared * self.m * other.m)
    }

    /// Number of general base points carrying a positive multiplicity.
    pub fn point_count(&self) -> i64 {
        self.n + i64::from(self.m0 > 0)
    }

    /// Key used for memoization. With a single equal-multiplicity point the
    /// two points are interchangeable, so the larger multiplicity goes first.
    pub fn canonical(&self) -> Self {
        if self.n == 1 && self.m > self.m0 {
            Self::new(self.d, self.m, 1, self.m0).expect("same parameters")
        } else {
            *self
        }
    }

    /// Every way of writing the same multiset of multiplicities in
    /// quasi-homogeneous form, starting with `self`.
    pub fn representations(&self) -> Vec<Self> {
        let mut out = vec![*self];
        let mut push = |s: Self| {
            if !out.contains(&s) {
                out.push(s);
            }
        };
        if self.n == 0 {
            // L(d, m0) with one point
            return out;
        }
        if self.m0 == 0 {
            push(Self::new(self.d, self.m, self.n - 1, self.m).unwrap());
        }
        if self.m0 == self.m {
            push(Self::new(self.d, 0, self.n + 1, self.m).unwrap());
        }
        if self.n == 1 {
            push(Self::new(self.d, self.m, 1, self.m0).unwrap());
        }
        out
    }

    /// The full multiplicity sequence `(d; m0, m, ..., m)`.
    pub fn to_sequence(&self) -> crate::cremona::MultiplicitySequence {
        let mut mults = Vec::with_capacity(self.n as usize + 1);
        mults.push(self.m0);
        mults.extend(std::iter::repeat_n(self.m, self.n as usize));
        crate::cremona::MultiplicitySequence::new(self.d, mults)
    }
}

impl fmt::Display for QuasiHomogeneousSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            write!(f, "L({},{})", self.d, self.m0)
        } else {
            write!(f, "L({},{},{},{})", self.d, self.m0, self.n, self.m)
        }
    }
}

/// A quasi-homogeneous numerical class. Unlike [`QuasiHomogeneousSystem`]
/// the entries may be negative; residuals and fixed parts live here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QhClass {
    pub d: i64,
    pub m0: i64,
    pub n: i64,
    pub m: i64,
}

impl QhClass {
    pub fn new(d: i64, m0: i64, n: i64, m: i64) -> Self {
        Self { d, m0, n, m }
    }

    pub fn virtual_dim(&self) -> i64 {
        virtual_dim(self.d, self.m0, self.n, self.m)
    }

    pub fn self_int(&self) -> i64 {
        self_intersection(self.d, self.m0, self.n, self.m)
    }

    pub fn genus(&self) -> i64 {
        arithmetic_genus(self.d, self.m0, self.n, self.m)
    }

    /// Intersection of two classes on the same `n` points.
    pub fn dot(&self, other: &Self) -> i64 {
        self.d * other.d - self.m0 * other.m0 - self.n.min(other.n) * self.m * other.m
    }

    pub fn is_effective_form(&self) -> bool {
        self.d >= 0 && self.m0 >= 0 && self.n >= 0 && self.m >= 0
    }

    pub fn to_system(&self) -> Option<QuasiHomogeneousSystem> {
        QuasiHomogeneousSystem::new(self.d, self.m0, self.n, self.m).ok()
    }
}

impl From<QuasiHomogeneousSystem> for QhClass {
    fn from(s: QuasiHomogeneousSystem) -> Self {
        Self::new(s.d, s.m0, s.n, s.m)
    }
}

impl fmt::Display for QhClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{},{},{})", self.d, self.m0, self.n, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virtual_dimension_examples() {
        assert_eq!(qh(4, 0, 5, 2).virtual_dim(), -1);
        assert_eq!(qh(6, 2, 4, 3).virtual_dim(), 0);
        assert_eq!(qh(4, 0, 2, 3).virtual_dim(), 2);
        assert_eq!(qh(1, 0, 0, 0).virtual_dim(), 2);
        let inv = qh(1, 1, 1, 1).invariants();
        assert_eq!((inv.self_int, inv.genus, inv.v), (-1, 0, 0));
    }

    #[test]
    fn normalization() {
        assert_eq!(qh(3, 1, 0, 5), qh(3, 1, 4, 0));
        assert_eq!(qh(3, 1, 0, 5).tuple(), (3, 1, 0, 0));
        assert!(QuasiHomogeneousSystem::new(-1, 0, 0, 0).is_err());
        assert!(QuasiHomogeneousSystem::new(1, 0, 0, MAX_PARAM + 1).is_err());
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(qh(27, 17, 9, 7).intersect(&qh(12, 8, 9, 3), 9), Ok(-1));
        assert_eq!(qh(1, 1, 1, 1).intersect(&qh(1, 1, 1, 1), 1), Ok(-1));
        // 36 - 9 - 28
        assert_eq!(qh(6, 3, 7, 2).intersect(&qh(6, 3, 7, 2), 7), Ok(-1));
        assert!(qh(6, 3, 7, 2).intersect(&qh(1, 1, 1, 1), 2).is_err());
    }

    #[test]
    fn multiplicity_one_examples() {
        assert_eq!(multiplicity_one(5, 2), 3);
        assert_eq!(multiplicity_one(2, 5), -1);
        // conics through five points
        assert_eq!(multiplicity_one(5, 5), 0);
    }

    #[test]
    fn trinomial_examples() {
        assert_eq!(trinomial_dim(4, 1, 3, 3), 2);
        for d in 0..8 {
            assert_eq!(trinomial_dim(d, 0, 0, 0), d * (d + 3) / 2);
        }
        assert_eq!(trinomial_dim(-1, 0, 0, 0), -1);
        assert_eq!(trinomial_dim(2, 3, 0, 0), -1);
    }

    #[test]
    fn representations_cover_symmetric_forms() {
        let reps = qh(3, 0, 2, 3).representations();
        assert!(reps.contains(&qh(3, 3, 1, 3)));
        let reps = qh(4, 2, 4, 2).representations();
        assert!(reps.contains(&qh(4, 0, 5, 2)));
        let reps = qh(5, 1, 1, 3).representations();
        assert!(reps.contains(&qh(5, 3, 1, 1)));
        assert_eq!(qh(5, 1, 1, 3).canonical(), qh(5, 3, 1, 1));
    }
}
