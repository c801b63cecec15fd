//! Results of dimension computations together with the evidence behind them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degeneration::Certificate;
use crate::minus_one::SpecialDecomposition;
use crate::oracle::OracleConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    NonSpecialProved,
    SpecialProved,
    Conjectural,
    OracleMeasured,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::NonSpecialProved => "NonSpecialProved",
            Status::SpecialProved => "SpecialProved",
            Status::Conjectural => "Conjectural",
            Status::OracleMeasured => "OracleMeasured",
        };
        f.write_str(s)
    }
}

/// A closed-form dimension rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// `m0 > d`: nothing of degree `d` has such a point.
    MultiplicityExceedsDegree,
    /// `m0 = d`: `max(-1, d - nm)`.
    ConeOverPoint,
    /// `m0 = d - 1`, `m >= 2`: `max(-1, 2d - 2nm + n)`.
    NearConeOverPoint,
    /// `m0 > d - m`: the lines through `p0` split off.
    LineSplitting,
    /// `m0 = d - m`: iterated quadratic transformations.
    ComplementaryMultiplicity,
    /// `m0 = d - m - 1`.
    ComplementaryMultiplicityMinusOne,
    /// Multiplicity at most one on the equal points.
    SimplePoints,
    /// At most three multiple points, counted by monomials.
    MonomialCount,
    /// Closed forms for `L(d, d-m, n, m)` with `n <= 2` or `m <= 1`.
    ComplementaryFewPoints,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::MultiplicityExceedsDegree => "empty: multiplicity exceeds degree",
            Rule::ConeOverPoint => "m0 = d: cones over p0, dim = max(-1, d - nm)",
            Rule::NearConeOverPoint => "m0 = d-1: dim = max(-1, 2d - 2nm + n)",
            Rule::LineSplitting => "m0 > d-m: split off the lines p0 p_i",
            Rule::ComplementaryMultiplicity => "m0 = d-m: reduce by quadratic transformations",
            Rule::ComplementaryMultiplicityMinusOne => {
                "m0 = d-m-1: reduce by quadratic transformations"
            }
            Rule::SimplePoints => "simple points impose independent conditions",
            Rule::MonomialCount => "at most three points: count monomials",
            Rule::ComplementaryFewPoints => "m0 = d-m with few points: closed form",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Rule {
        rule: Rule,
    },
    /// Matched a family of the low-multiplicity special table.
    SpecialTable {
        family: String,
        decomposition: Option<SpecialDecomposition>,
    },
    /// Not in the special table with `m <= 3`, hence non-special.
    Classification,
    Degeneration {
        certificate: Box<Certificate>,
    },
    /// Prediction from the fixed-part accounting of enumerated (-1)-curves.
    Conjecture {
        decomposition: Option<SpecialDecomposition>,
        e_max: i64,
    },
    Oracle {
        config: OracleConfig,
        trial_dims: Vec<i64>,
    },
}

/// Generic dimension of a system with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub dim: i64,
    pub status: Status,
    pub evidence: Evidence,
}

impl DimensionResult {
    pub fn from_rule(dim: i64, expected: i64, rule: Rule) -> Self {
        let status = if dim > expected {
            Status::SpecialProved
        } else {
            Status::NonSpecialProved
        };
        Self {
            dim,
            status,
            evidence: Evidence::Rule { rule },
        }
    }

    pub fn is_special(&self) -> bool {
        self.status == Status::SpecialProved
    }
}
