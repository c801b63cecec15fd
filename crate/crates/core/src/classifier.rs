//! The table of (-1)-special systems with `m <= 3` and the top-level
//! dimension function.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cremona::large_m0_dim;
use crate::degeneration::{Certifier, CertifierConfig, Outcome};
use crate::dimension::{DimensionResult, Evidence, Status};
use crate::error::{Error, Result};
use crate::minus_one::{find_special_decomposition, Catalog, SpecialDecomposition};
use crate::system::{QuasiHomogeneousSystem, SystemInvariants};

/// Systems of degree at most this are certified by degeneration when they
/// have `m >= 4` and no closed form applies.
pub const CERTIFY_DEGREE_LIMIT: i64 = 30;
const CERTIFY_BUDGET: usize = 20_000;
const SHARED_CATALOG_DEGREE: i64 = 64;

type Matcher = fn(i64, i64, i64, i64) -> Option<(i64, i64)>;
type Generator = fn(i64) -> Vec<(i64, i64, i64, i64)>;

/// One family of the special table.
pub struct SpecialTableEntry {
    pub pattern: &'static str,
    pub constraint: &'static str,
    pub v_formula: &'static str,
    pub l_formula: &'static str,
    matcher: Matcher,
    generator: Generator,
}

impl SpecialTableEntry {
    /// `(v, ℓ)` if the tuple belongs to the family.
    pub fn matches(&self, d: i64, m0: i64, n: i64, m: i64) -> Option<(i64, i64)> {
        (self.matcher)(d, m0, n, m)
    }

    /// Every member with `d <= d_max`.
    pub fn instances(&self, d_max: i64) -> Vec<QuasiHomogeneousSystem> {
        (self.generator)(d_max)
            .into_iter()
            .filter_map(|(d, m0, n, m)| QuasiHomogeneousSystem::new(d, m0, n, m).ok())
            .collect()
    }
}

pub static SPECIAL_TABLE: [SpecialTableEntry; 11] = [
    SpecialTableEntry {
        pattern: "L(4,0,5,2)",
        constraint: "",
        v_formula: "-1",
        l_formula: "0",
        matcher: |d, m0, n, m| ((d, m0, n, m) == (4, 0, 5, 2)).then_some((-1, 0)),
        generator: |dm| if dm >= 4 { vec![(4, 0, 5, 2)] } else { vec![] },
    },
    SpecialTableEntry {
        pattern: "L(2e,2e-2,2e,2)",
        constraint: "e >= 1",
        v_formula: "-1",
        l_formula: "0",
        matcher: |d, m0, n, m| {
            (m == 2 && n >= 2 && n % 2 == 0 && d == n && m0 == n - 2).then_some((-1, 0))
        },
        generator: |dm| (1..=dm / 2).map(|e| (2 * e, 2 * e - 2, 2 * e, 2)).collect(),
    },
    SpecialTableEntry {
        pattern: "L(d,d,e,2)",
        constraint: "d >= 2e >= 2",
        v_formula: "d-3e",
        l_formula: "d-2e",
        matcher: |d, m0, n, m| {
            (m == 2 && m0 == d && n >= 1 && d >= 2 * n).then_some((d - 3 * n, d - 2 * n))
        },
        generator: |dm| {
            (2..=dm)
                .flat_map(|d| (1..=d / 2).map(move |e| (d, d, e, 2)))
                .collect()
        },
    },
    SpecialTableEntry {
        pattern: "L(4,0,2,3)",
        constraint: "",
        v_formula: "2",
        l_formula: "3",
        matcher: |d, m0, n, m| ((d, m0, n, m) == (4, 0, 2, 3)).then_some((2, 3)),
        generator: |dm| if dm >= 4 { vec![(4, 0, 2, 3)] } else { vec![] },
    },
    SpecialTableEntry {
        pattern: "L(6,0,5,3)",
        constraint: "",
        v_formula: "-3",
        l_formula: "0",
        matcher: |d, m0, n, m| ((d, m0, n, m) == (6, 0, 5, 3)).then_some((-3, 0)),
        generator: |dm| if dm >= 6 { vec![(6, 0, 5, 3)] } else { vec![] },
    },
    SpecialTableEntry {
        pattern: "L(6,2,4,3)",
        constraint: "",
        v_formula: "0",
        l_formula: "1",
        matcher: |d, m0, n, m| ((d, m0, n, m) == (6, 2, 4, 3)).then_some((0, 1)),
        generator: |dm| if dm >= 6 { vec![(6, 2, 4, 3)] } else { vec![] },
    },
    SpecialTableEntry {
        pattern: "L(3e,3e-3,2e,3)",
        constraint: "e >= 1",
        v_formula: "-3",
        l_formula: "0",
        matcher: |d, m0, n, m| {
            let e = n / 2;
            (m == 3 && n >= 2 && n % 2 == 0 && d == 3 * e && m0 == 3 * e - 3).then_some((-3, 0))
        },
        generator: |dm| (1..=dm / 3).map(|e| (3 * e, 3 * e - 3, 2 * e, 3)).collect(),
    },
    SpecialTableEntry {
        pattern: "L(3e+1,3e-2,2e,3)",
        constraint: "e >= 1",
        v_formula: "1",
        l_formula: "2",
        matcher: |d, m0, n, m| {
            let e = n / 2;
            (m == 3 && n >= 2 && n % 2 == 0 && d == 3 * e + 1 && m0 == 3 * e - 2).then_some((1, 2))
        },
        generator: |dm| {
            (1..=(dm - 1) / 3)
                .map(|e| (3 * e + 1, 3 * e - 2, 2 * e, 3))
                .collect()
        },
    },
    SpecialTableEntry {
        pattern: "L(4e,4e-2,2e,3)",
        constraint: "e >= 1",
        v_formula: "-1",
        l_formula: "0",
        matcher: |d, m0, n, m| {
            let e = n / 2;
            (m == 3 && n >= 2 && n % 2 == 0 && d == 4 * e && m0 == 4 * e - 2).then_some((-1, 0))
        },
        generator: |dm| (1..=dm / 4).map(|e| (4 * e, 4 * e - 2, 2 * e, 3)).collect(),
    },
    SpecialTableEntry {
        pattern: "L(d,d-1,e,3)",
        constraint: "2d >= 5e >= 5",
        v_formula: "2d-6e",
        l_formula: "2d-5e",
        matcher: |d, m0, n, m| {
            (m == 3 && m0 == d - 1 && n >= 1 && 2 * d >= 5 * n)
                .then_some((2 * d - 6 * n, 2 * d - 5 * n))
        },
        generator: |dm| {
            (1..=dm)
                .flat_map(|d| (1..=2 * d / 5).map(move |e| (d, d - 1, e, 3)))
                .collect()
        },
    },
    SpecialTableEntry {
        pattern: "L(d,d,e,3)",
        constraint: "d >= 3e >= 3",
        v_formula: "d-6e",
        l_formula: "d-3e",
        matcher: |d, m0, n, m| {
            (m == 3 && m0 == d && n >= 1 && d >= 3 * n).then_some((d - 6 * n, d - 3 * n))
        },
        generator: |dm| {
            (3..=dm)
                .flat_map(|d| (1..=d / 3).map(move |e| (d, d, e, 3)))
                .collect()
        },
    },
];

/// A hit in the special table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMatch {
    pub family: String,
    /// The representation of the system that matched.
    pub matched: QuasiHomogeneousSystem,
    pub v: i64,
    pub l: i64,
}

/// Match `l` against every family, across all ways of writing its
/// multiplicities. Overlapping families must agree.
pub fn lookup_special_table(l: &QuasiHomogeneousSystem) -> Result<Option<TableMatch>> {
    if l.m() > 3 {
        return Err(Error::OutOfRange {
            name: "m",
            value: l.m(),
            reason: "the special table covers m <= 3",
        });
    }
    let mut found: Option<TableMatch> = None;
    for rep in l.representations() {
        let (d, m0, n, m) = rep.tuple();
        if m > 3 {
            continue;
        }
        for entry in &SPECIAL_TABLE {
            if let Some((v, ell)) = entry.matches(d, m0, n, m) {
                match &found {
                    Some(prev) => assert_eq!(
                        (prev.v, prev.l),
                        (v, ell),
                        "{} and {} disagree on {l}",
                        prev.family,
                        entry.pattern
                    ),
                    None => {
                        found = Some(TableMatch {
                            family: entry.pattern.to_string(),
                            matched: rep,
                            v,
                            l: ell,
                        })
                    }
                }
            }
        }
    }
    Ok(found)
}

/// The shared catalog of (-1)-curves, or a fresh one for large degrees.
pub fn catalog_for(d: i64) -> std::borrow::Cow<'static, Catalog> {
    static SHARED: OnceLock<Catalog> = OnceLock::new();
    if d <= SHARED_CATALOG_DEGREE {
        std::borrow::Cow::Borrowed(SHARED.get_or_init(|| Catalog::new(SHARED_CATALOG_DEGREE)))
    } else {
        std::borrow::Cow::Owned(Catalog::new(d))
    }
}

/// Generic dimension of `l` with its status and evidence.
pub fn dimension(l: &QuasiHomogeneousSystem) -> DimensionResult {
    dimension_with(l, None)
}

/// As [`dimension`], reusing `certifier` for systems with `m >= 4`.
pub fn dimension_with(
    l: &QuasiHomogeneousSystem,
    certifier: Option<&Certifier>,
) -> DimensionResult {
    if l.m() <= 3 {
        return classified(l);
    }
    if let Some(r) = large_m0_dim(l) {
        return r;
    }
    let e = l.expected_dim();
    if l.d() <= CERTIFY_DEGREE_LIMIT {
        let local;
        let c = match certifier {
            Some(c) => c,
            None => {
                local = Certifier::new(CertifierConfig {
                    budget: CERTIFY_BUDGET,
                    ..CertifierConfig::default()
                });
                &local
            }
        };
        if let Ok(cert) = c.certify(l) {
            if cert.outcome != Outcome::Inconclusive && !cert.oracle_assisted {
                return DimensionResult {
                    dim: e,
                    status: Status::NonSpecialProved,
                    evidence: Evidence::Degeneration {
                        certificate: Box::new(cert),
                    },
                };
            }
        }
    }
    let catalog = catalog_for(l.d());
    let decomposition = find_special_decomposition(l, &catalog);
    let dim = decomposition.as_ref().map_or(e, |dec| dec.residual_v);
    DimensionResult {
        dim,
        status: Status::Conjectural,
        evidence: Evidence::Conjecture {
            decomposition,
            e_max: catalog.degree_bound,
        },
    }
}

fn classified(l: &QuasiHomogeneousSystem) -> DimensionResult {
    match lookup_special_table(l).expect("m <= 3") {
        Some(hit) => {
            let decomposition = find_special_decomposition(l, &catalog_for(l.d()));
            DimensionResult {
                dim: hit.l,
                status: Status::SpecialProved,
                evidence: Evidence::SpecialTable {
                    family: hit.family,
                    decomposition,
                },
            }
        }
        None => DimensionResult {
            dim: l.expected_dim(),
            status: Status::NonSpecialProved,
            evidence: Evidence::Classification,
        },
    }
}

/// Speciality report for one system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialityReport {
    pub system: QuasiHomogeneousSystem,
    pub invariants: SystemInvariants,
    pub result: DimensionResult,
    pub special: bool,
    pub decomposition: Option<SpecialDecomposition>,
}

pub fn classify(l: &QuasiHomogeneousSystem) -> SpecialityReport {
    let result = dimension(l);
    let decomposition = match &result.evidence {
        Evidence::SpecialTable { decomposition, .. }
        | Evidence::Conjecture { decomposition, .. } => decomposition.clone(),
        _ => find_special_decomposition(l, &catalog_for(l.d())),
    };
    let invariants = l.invariants();
    SpecialityReport {
        system: *l,
        special: result.dim > invariants.e,
        invariants,
        result,
        decomposition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::qh;

    #[test]
    fn table_examples() {
        let hit = lookup_special_table(&qh(10, 9, 4, 3)).unwrap().unwrap();
        assert_eq!((hit.v, hit.l), (-4, 0));
        let hit = lookup_special_table(&qh(9, 9, 3, 3)).unwrap().unwrap();
        assert_eq!((hit.v, hit.l), (-9, 0));
        assert!(lookup_special_table(&qh(5, 0, 4, 2)).unwrap().is_none());
        assert!(lookup_special_table(&qh(5, 0, 4, 4)).is_err());
        // a second representation of L(4,0,5,2)
        assert!(lookup_special_table(&qh(4, 2, 4, 2)).unwrap().is_some());
    }

    #[test]
    fn table_formulas_match_virtual_dimension() {
        for entry in &SPECIAL_TABLE {
            for s in entry.instances(30) {
                let (d, m0, n, m) = s.tuple();
                let (v, ell) = entry.matches(d, m0, n, m).expect(entry.pattern);
                assert_eq!(v, s.virtual_dim(), "{s}");
                assert!(ell > v.max(-1), "{s}");
            }
        }
    }

    #[test]
    fn generators_are_complete() {
        // every tuple with d <= 30 and m <= 3 that a family matches is
        // produced by that family's generator
        for (i, entry) in SPECIAL_TABLE.iter().enumerate() {
            let listed = entry.instances(30);
            for d in 0..=30 {
                for m0 in 0..=d + 1 {
                    for n in 1..=20 {
                        for m in 1..=3 {
                            if entry.matches(d, m0, n, m).is_some() {
                                assert!(
                                    listed.contains(&qh(d, m0, n, m)),
                                    "family {i}: {d} {m0} {n} {m}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        let r = dimension(&qh(4, 0, 2, 3));
        assert_eq!((r.dim, r.status), (3, Status::SpecialProved));
        let r = dimension(&qh(10, 0, 2, 10));
        assert_eq!(r.dim, 0);
        let r = dimension(&qh(6, 0, 5, 3));
        assert_eq!((r.dim, r.status), (0, Status::SpecialProved));
        let r = dimension(&qh(5, 0, 4, 2));
        assert_eq!((r.dim, r.status), (8, Status::NonSpecialProved));
    }

    #[test]
    fn large_multiplicity_is_labelled() {
        let r = dimension(&qh(20, 0, 10, 6));
        assert_ne!(r.status, Status::OracleMeasured);
        let r = dimension(&qh(12, 0, 6, 5));
        // a homogeneous configuration: nonempty only by its fixed curves
        assert!(r.dim >= 0, "{r:?}");
    }

    #[test]
    fn full_multiplicity_families_agree_with_closed_form() {
        for d in 1..=40 {
            for n in 1..=40 {
                for m in 2..=3 {
                    let l = qh(d, d, n, m);
                    let closed = crate::cremona::large_m0_dim(&l).unwrap().dim;
                    if let Some(hit) = lookup_special_table(&l).unwrap() {
                        assert_eq!(hit.l, closed, "{l}");
                    }
                    assert_eq!(dimension(&l).dim, closed, "{l}");
                }
            }
        }
    }
}
