//! Theory against oracle over a box of parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{catalog_for, dimension, lookup_special_table};
use crate::dimension::Status;
use crate::error::Result;
use crate::minus_one::find_special_decomposition;
use crate::oracle::{measure_dim, OracleConfig};
use crate::system::QuasiHomogeneousSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBounds {
    pub d_max: i64,
    pub n_max: i64,
    pub m_max: i64,
}

impl SweepBounds {
    /// Every `L(d, m0, n, m)` with `d <= d_max`, `m0 <= d`, `n <= n_max`,
    /// `1 <= m <= m_max`, plus the one-point systems `L(d, m0)`.
    pub fn systems(&self) -> Vec<QuasiHomogeneousSystem> {
        let mut out = Vec::new();
        for d in 0..=self.d_max {
            for m0 in 0..=d {
                out.push(QuasiHomogeneousSystem::new(d, m0, 0, 0).expect("small"));
                for n in 1..=self.n_max {
                    for m in 1..=self.m_max {
                        out.push(QuasiHomogeneousSystem::new(d, m0, n, m).expect("small"));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub system: QuasiHomogeneousSystem,
    pub predicted: i64,
    pub status: Status,
    pub measured: i64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub bounds: SweepBounds,
    pub checked: usize,
    /// Systems whose prediction was only conjectural and so not compared.
    pub conjectural: usize,
    pub special: usize,
    pub mismatches: Vec<Mismatch>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn check(l: &QuasiHomogeneousSystem, cfg: &OracleConfig) -> Result<(bool, bool, Option<Mismatch>)> {
    let r = dimension(l);
    if r.status == Status::Conjectural {
        return Ok((false, false, None));
    }
    let measured = measure_dim(l, cfg)?.dim;
    let e = l.expected_dim();
    let mismatch = |reason: &str| Mismatch {
        system: *l,
        predicted: r.dim,
        status: r.status,
        measured,
        reason: reason.to_string(),
    };
    if measured != r.dim {
        return Ok((true, measured > e, Some(mismatch("dimension"))));
    }
    if l.m() <= 3 {
        let in_table = lookup_special_table(l)?.is_some();
        if (measured > e) != in_table {
            return Ok((true, measured > e, Some(mismatch("speciality vs table"))));
        }
        let decomposed = find_special_decomposition(l, &catalog_for(l.d())).is_some();
        if decomposed != in_table {
            return Ok((true, measured > e, Some(mismatch("decomposition vs table"))));
        }
    }
    Ok((true, measured > e, None))
}

/// Compare the classifier with the oracle on every system in `bounds`.
pub fn sweep(bounds: SweepBounds, cfg: &OracleConfig) -> Result<SweepReport> {
    let systems = bounds.systems();
    let results: Vec<_> = systems
        .par_iter()
        .map(|l| check(l, cfg))
        .collect::<Result<_>>()?;
    let mut report = SweepReport {
        bounds,
        checked: 0,
        conjectural: 0,
        special: 0,
        mismatches: Vec::new(),
    };
    for (compared, special, mismatch) in results {
        if compared {
            report.checked += 1;
        } else {
            report.conjectural += 1;
        }
        report.special += usize::from(special);
        report.mismatches.extend(mismatch);
    }
    report.mismatches.sort_by_key(|m| m.system);
    Ok(report)
}
