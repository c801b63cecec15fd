//! Degenerations of the plane to `P ∪ F` and the recursive certifier built
//! on the transversality formula for the limit system.
//!
//! The certifier is one-sided. Semicontinuity gives `ℓ <= ℓ0`, so a split
//! with `ℓ0 = e(L)` proves `ℓ = e(L)`; nothing here ever claims speciality.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::classifier::lookup_special_table;
use crate::cremona::large_m0_dim;
use crate::dimension::Rule;
use crate::error::{Error, Result};
use crate::oracle::{measure_dim, OracleConfig};
use crate::system::{virtual_dim, QuasiHomogeneousSystem};

pub const DEFAULT_BUDGET: usize = 100_000;
pub const DEFAULT_MAX_SPLITS: usize = 4096;
pub const CACHE_VERSION: u32 = 1;
const MAX_DEPTH: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegenerationParams {
    pub k: i64,
    pub b: i64,
}

/// The four systems of a `(k, b)`-degeneration and their virtual dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationSplit {
    pub system: QuasiHomogeneousSystem,
    pub params: DegenerationParams,
    pub lp: QuasiHomogeneousSystem,
    pub lf: QuasiHomogeneousSystem,
    pub hat_lp: QuasiHomogeneousSystem,
    pub hat_lf: QuasiHomogeneousSystem,
    pub v: i64,
    pub v_p: i64,
    pub v_f: i64,
    pub hat_v_p: i64,
    pub hat_v_f: i64,
}

/// Generic dimensions of the four systems of a split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDims {
    pub l_p: i64,
    pub l_f: i64,
    pub hat_l_p: i64,
    pub hat_l_f: i64,
}

impl SplitDims {
    pub fn r_p(&self) -> i64 {
        self.l_p - self.hat_l_p - 1
    }

    pub fn r_f(&self) -> i64 {
        self.l_f - self.hat_l_f - 1
    }

    /// Dimension of the kernel part of the limit system.
    pub fn hat_l0(&self) -> i64 {
        self.hat_l_p + self.hat_l_f + 1
    }
}

/// Which branch of the transversality formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L0Case {
    /// Restricted systems miss each other: `ℓ0 = ℓ̂P + ℓ̂F + 1`.
    Disjoint,
    /// Restricted systems meet properly: `ℓ0 = ℓP + ℓF - d + k`.
    Proper,
}

impl DegenerationSplit {
    pub fn degree(&self) -> i64 {
        self.system.d()
    }

    /// Degree of the double curve's divisors, `d - k`.
    pub fn double_curve_degree(&self) -> i64 {
        self.system.d() - self.params.k
    }
}

/// Build the `(k, b)`-degeneration of `l`.
pub fn split(l: &QuasiHomogeneousSystem, params: DegenerationParams) -> Result<DegenerationSplit> {
    let (d, m0, n, m) = l.tuple();
    let DegenerationParams { k, b } = params;
    if k <= 0 || k >= d || b <= 0 || b >= n {
        return Err(Error::DegenerationBounds { k, b, d, n });
    }
    let sys = |d, m0, n, m| QuasiHomogeneousSystem::new(d, m0, n, m);
    let s = DegenerationSplit {
        system: *l,
        params,
        lp: sys(d - k, m0, n - b, m)?,
        lf: sys(d, d - k, b, m)?,
        hat_lp: sys(d - k - 1, m0, n - b, m)?,
        hat_lf: sys(d, d - k + 1, b, m)?,
        v: virtual_dim(d, m0, n, m),
        v_p: virtual_dim(d - k, m0, n - b, m),
        v_f: virtual_dim(d, d - k, b, m),
        hat_v_p: virtual_dim(d - k - 1, m0, n - b, m),
        hat_v_f: virtual_dim(d, d - k + 1, b, m),
    };
    assert_eq!(s.v_p + s.v_f, s.v + d - k, "identity (a) on {l} {params:?}");
    assert_eq!(s.hat_v_p + s.v_f, s.v - 1, "identity (b) on {l} {params:?}");
    assert_eq!(s.v_p + s.hat_v_f, s.v - 1, "identity (c) on {l} {params:?}");
    Ok(s)
}

/// Which case applies to a split with the given sub-dimensions.
pub fn l0_case(split: &DegenerationSplit, dims: &SplitDims) -> L0Case {
    if dims.r_p() + dims.r_f() < split.double_curve_degree() {
        L0Case::Disjoint
    } else {
        L0Case::Proper
    }
}

/// Dimension `ℓ0` of the limit system from the four sub-dimensions.
pub fn dim_l0(split: &DegenerationSplit, dims: &SplitDims) -> i64 {
    match l0_case(split, dims) {
        L0Case::Disjoint => dims.hat_l0(),
        L0Case::Proper => dims.l_p + dims.l_f - split.double_curve_degree(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    EmptyProved,
    NonSpecialProved,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::EmptyProved => "EmptyProved",
            Outcome::NonSpecialProved => "NonSpecialProved",
            Outcome::Inconclusive => "Inconclusive",
        })
    }
}

/// A node of a proof tree. `dim` is the generic dimension established at
/// that node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum CertNode {
    ClosedForm {
        system: QuasiHomogeneousSystem,
        dim: i64,
        rule: Rule,
    },
    SpecialTable {
        system: QuasiHomogeneousSystem,
        family: String,
        dim: i64,
    },
    Split {
        system: QuasiHomogeneousSystem,
        params: DegenerationParams,
        case: L0Case,
        l0: i64,
        dim: i64,
        /// `LP`, `LF`, `L̂P`, `L̂F` in that order.
        parts: Vec<CertNode>,
    },
    Oracle {
        system: QuasiHomogeneousSystem,
        dim: i64,
        config: OracleConfig,
    },
    Unresolved {
        system: QuasiHomogeneousSystem,
        splits_tried: usize,
    },
}

impl CertNode {
    pub fn system(&self) -> QuasiHomogeneousSystem {
        match self {
            CertNode::ClosedForm { system, .. }
            | CertNode::SpecialTable { system, .. }
            | CertNode::Split { system, .. }
            | CertNode::Oracle { system, .. }
            | CertNode::Unresolved { system, .. } => *system,
        }
    }

    pub fn dim(&self) -> Option<i64> {
        match self {
            CertNode::ClosedForm { dim, .. }
            | CertNode::SpecialTable { dim, .. }
            | CertNode::Split { dim, .. }
            | CertNode::Oracle { dim, .. } => Some(*dim),
            CertNode::Unresolved { .. } => None,
        }
    }

    fn uses_oracle(&self) -> bool {
        match self {
            CertNode::Oracle { .. } => true,
            CertNode::Split { parts, .. } => parts.iter().any(CertNode::uses_oracle),
            _ => false,
        }
    }

    fn write_trace(&self, out: &mut String, depth: usize, label: &str) {
        let pad = "  ".repeat(depth);
        let _ = match self {
            CertNode::ClosedForm { system, dim, rule } => {
                writeln!(out, "{pad}{label}{system}: dim {dim} [{rule}]")
            }
            CertNode::SpecialTable {
                system,
                family,
                dim,
            } => writeln!(
                out,
                "{pad}{label}{system}: dim {dim} [special family {family}]"
            ),
            CertNode::Split {
                system,
                params,
                case,
                l0,
                dim,
                parts,
            } => {
                let rule = match case {
                    L0Case::Disjoint => "restricted systems disjoint, l0 = hl_P + hl_F + 1",
                    L0Case::Proper => "restricted systems transverse, l0 = l_P + l_F - d + k",
                };
                let _ = writeln!(
                    out,
                    "{pad}{label}{system}: dim {dim} [({},{})-degeneration, {rule} = {l0}; l0 = e gives l = e]",
                    params.k, params.b
                );
                for (part, name) in parts.iter().zip(["P: ", "F: ", "P^: ", "F^: "]) {
                    part.write_trace(out, depth + 1, name);
                }
                Ok(())
            }
            CertNode::Oracle {
                system,
                dim,
                config,
            } => writeln!(
                out,
                "{pad}{label}{system}: dim {dim} [oracle, p = {}, {} trials, seed {:#x}]",
                config.prime, config.trials, config.seed
            ),
            CertNode::Unresolved {
                system,
                splits_tried,
            } => writeln!(
                out,
                "{pad}{label}{system}: unresolved after {splits_tried} splits"
            ),
        };
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub system: QuasiHomogeneousSystem,
    pub outcome: Outcome,
    /// Dimension established by the tree, even when it is not `e`.
    pub dim: Option<i64>,
    pub oracle_assisted: bool,
    pub tree: CertNode,
}

impl Certificate {
    fn from_node(system: QuasiHomogeneousSystem, tree: CertNode) -> Self {
        let dim = tree.dim();
        let e = system.expected_dim();
        // table and closed-form leaves may certify special values; only
        // dim = e counts as a proof here
        let outcome = match dim {
            Some(-1) if e == -1 => Outcome::EmptyProved,
            Some(x) if x == e => Outcome::NonSpecialProved,
            _ => Outcome::Inconclusive,
        };
        Self {
            system,
            outcome,
            dim,
            oracle_assisted: tree.uses_oracle(),
            tree,
        }
    }

    pub fn is_proof(&self) -> bool {
        self.outcome != Outcome::Inconclusive
    }

    /// Human-readable proof steps, one node per line.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.tree.write_trace(&mut out, 0, "");
        out
    }
}

#[derive(Debug, Clone)]
pub struct CertifierConfig {
    /// Maximum number of freshly evaluated nodes per `certify` call.
    pub budget: usize,
    /// Maximum number of splits tried at one node.
    pub max_splits: usize,
    /// Last resort for subsystem dimensions. Off by default.
    pub oracle_fallback: Option<OracleConfig>,
}

impl Default for CertifierConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            max_splits: DEFAULT_MAX_SPLITS,
            oracle_fallback: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: Vec<CertNode>,
}

/// Memoizing certifier. The memo is shared between threads.
#[derive(Debug, Default)]
pub struct Certifier {
    pub config: CertifierConfig,
    memo: RwLock<HashMap<QuasiHomogeneousSystem, Arc<CertNode>>>,
}

struct Walk {
    nodes: usize,
}

impl Certifier {
    pub fn new(config: CertifierConfig) -> Self {
        Self {
            config,
            memo: RwLock::default(),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    /// Prove `l` empty or non-special, or report `Inconclusive`.
    pub fn certify(&self, l: &QuasiHomogeneousSystem) -> Result<Certificate> {
        let mut walk = Walk { nodes: 0 };
        let node = self.resolve(l, &mut walk, 0)?;
        let mut tree = (*node).clone();
        relabel(&mut tree, *l);
        Ok(Certificate::from_node(*l, tree))
    }

    fn resolve(
        &self,
        l: &QuasiHomogeneousSystem,
        walk: &mut Walk,
        depth: usize,
    ) -> Result<Arc<CertNode>> {
        let key = l.canonical();
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        walk.nodes += 1;
        if walk.nodes > self.config.budget || depth > MAX_DEPTH {
            return Err(Error::BudgetExhausted(self.config.budget));
        }
        let node = Arc::new(self.evaluate(&key, walk, depth)?);
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| node.clone());
        Ok(node)
    }

    fn evaluate(
        &self,
        l: &QuasiHomogeneousSystem,
        walk: &mut Walk,
        depth: usize,
    ) -> Result<CertNode> {
        if let Some(r) = large_m0_dim(l) {
            if let crate::dimension::Evidence::Rule { rule } = r.evidence {
                return Ok(CertNode::ClosedForm {
                    system: *l,
                    dim: r.dim,
                    rule,
                });
            }
        }
        if l.m() <= 3 {
            if let Some(hit) = lookup_special_table(l)? {
                return Ok(CertNode::SpecialTable {
                    system: *l,
                    family: hit.family,
                    dim: hit.l,
                });
            }
        }
        let e = l.expected_dim();
        let mut tried = 0;
        for params in candidate_params(l).into_iter().take(self.config.max_splits) {
            tried += 1;
            let s = split(l, params)?;
            let mut parts = Vec::with_capacity(4);
            for sub in [s.lp, s.lf, s.hat_lp, s.hat_lf] {
                let node = self.resolve(&sub, walk, depth + 1)?;
                if node.dim().is_none() {
                    break;
                }
                parts.push(node);
            }
            if parts.len() < 4 {
                continue;
            }
            let dims = SplitDims {
                l_p: parts[0].dim().unwrap(),
                l_f: parts[1].dim().unwrap(),
                hat_l_p: parts[2].dim().unwrap(),
                hat_l_f: parts[3].dim().unwrap(),
            };
            let l0 = dim_l0(&s, &dims);
            if l0 == e {
                return Ok(CertNode::Split {
                    system: *l,
                    params,
                    case: l0_case(&s, &dims),
                    l0,
                    dim: e,
                    parts: parts
                        .iter()
                        .zip([s.lp, s.lf, s.hat_lp, s.hat_lf])
                        .map(|(p, sub)| {
                            let mut node = (**p).clone();
                            relabel(&mut node, sub);
                            node
                        })
                        .collect(),
                });
            }
        }
        if let Some(cfg) = &self.config.oracle_fallback {
            let r = measure_dim(l, cfg)?;
            return Ok(CertNode::Oracle {
                system: *l,
                dim: r.dim,
                config: *cfg,
            });
        }
        Ok(CertNode::Unresolved {
            system: *l,
            splits_tried: tried,
        })
    }

    /// Load memo entries from a cache file written by [`Certifier::save`].
    pub fn load(&self, path: &Path) -> Result<usize> {
        let text = fs::read_to_string(path).map_err(|e| Error::Cache(e.to_string()))?;
        let file: CacheFile =
            serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
        if file.version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "cache version {} (expected {CACHE_VERSION})",
                file.version
            )));
        }
        let mut memo = self.memo.write().expect("memo lock");
        let count = file.entries.len();
        for node in file.entries {
            // oracle-assisted entries depend on the oracle settings
            if !node.uses_oracle() {
                memo.insert(node.system().canonical(), Arc::new(node));
            }
        }
        Ok(count)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let memo = self.memo.read().expect("memo lock");
        let mut entries: Vec<CertNode> = memo
            .values()
            .filter(|n| !n.uses_oracle())
            .map(|n| (**n).clone())
            .collect();
        entries.sort_by_key(CertNode::system);
        let file = CacheFile {
            version: CACHE_VERSION,
            entries,
        };
        let text = serde_json::to_string(&file).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| Error::Cache(e.to_string()))?;
        fs::rename(&tmp, path).map_err(|e| Error::Cache(e.to_string()))
    }
}

/// Memo keys are canonical; show the system the caller asked about.
fn relabel(node: &mut CertNode, system: QuasiHomogeneousSystem) {
    match node {
        CertNode::ClosedForm { system: s, .. }
        | CertNode::SpecialTable { system: s, .. }
        | CertNode::Split { system: s, .. }
        | CertNode::Oracle { system: s, .. }
        | CertNode::Unresolved { system: s, .. } => *s = system,
    }
}

/// Split parameters in search order: the prescribed choices for `m = 2, 3`
/// first, then every admissible pair by increasing `|2bk - dk|`.
pub fn candidate_params(l: &QuasiHomogeneousSystem) -> Vec<DegenerationParams> {
    let (d, _, n, m) = l.tuple();
    let ok = |k: i64, b: i64| k > 0 && k < d && b > 0 && b < n;
    let mut out = Vec::new();
    let push = |k: i64, b: i64, out: &mut Vec<DegenerationParams>| {
        let p = DegenerationParams { k, b };
        if ok(k, b) && !out.contains(&p) {
            out.push(p);
        }
    };
    match m {
        2 => {
            // b minimal with 2b > d, or maximal with 2b <= d + 1
            push(1, d / 2 + 1, &mut out);
            push(1, (d + 1) / 2, &mut out);
        }
        3 => {
            // 2d/5 < b <= d/2, strict at d/2 when 4 | d
            let lo = 2 * d / 5 + 1;
            let hi = if d % 4 == 0 { d / 2 - 1 } else { d / 2 };
            for b in (lo..=hi).rev() {
                push(2, b, &mut out);
            }
            if d % 4 == 0 {
                push(2, d / 2, &mut out);
            }
            push(3, (d + 1) / 2, &mut out);
        }
        _ => {}
    }
    let mut rest: Vec<(i64, i64)> = (1..d).flat_map(|k| (1..n).map(move |b| (k, b))).collect();
    rest.sort_by_key(|&(k, b)| ((2 * b * k - d * k).abs(), k, b));
    for (k, b) in rest {
        push(k, b, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::qh;

    #[test]
    fn split_example() {
        let s = split(&qh(6, 0, 5, 3), DegenerationParams { k: 2, b: 3 }).unwrap();
        assert_eq!(s.lp, qh(4, 0, 2, 3));
        assert_eq!(s.lf, qh(6, 4, 3, 3));
        assert_eq!(s.hat_lp, qh(3, 0, 2, 3));
        assert_eq!(s.hat_lf, qh(6, 5, 3, 3));
        assert_eq!((s.v, s.v_p, s.v_f), (-3, 2, -1));
        assert_eq!(s.v_p + s.v_f, s.v + 4);
    }

    #[test]
    fn split_bounds() {
        let l = qh(6, 0, 5, 3);
        for (k, b) in [(6, 1), (1, 5), (0, 2), (2, 0)] {
            assert!(matches!(
                split(&l, DegenerationParams { k, b }),
                Err(Error::DegenerationBounds { .. })
            ));
        }
    }

    #[test]
    fn l0_cases() {
        let s = split(&qh(6, 0, 5, 3), DegenerationParams { k: 2, b: 3 }).unwrap();
        let empty = SplitDims {
            l_p: -1,
            l_f: -1,
            hat_l_p: -1,
            hat_l_f: -1,
        };
        assert_eq!(dim_l0(&s, &empty), -1);
        // r_P + r_F = d - k - 1 = 3 exactly: both branches agree
        let edge = SplitDims {
            l_p: 3,
            l_f: 1,
            hat_l_p: 0,
            hat_l_f: -1,
        };
        assert_eq!(edge.r_p() + edge.r_f(), 3);
        assert_eq!(edge.hat_l0(), edge.l_p + edge.l_f - 4);
    }

    #[test]
    fn certify_examples() {
        let c = Certifier::default();
        let cert = c.certify(&qh(5, 0, 6, 2)).unwrap();
        assert_eq!(
            (cert.outcome, cert.dim),
            (Outcome::NonSpecialProved, Some(2))
        );
        let cert = c.certify(&qh(6, 0, 9, 2)).unwrap();
        assert_eq!(
            (cert.outcome, cert.dim),
            (Outcome::NonSpecialProved, Some(0))
        );
        let cert = c.certify(&qh(4, 0, 5, 2)).unwrap();
        assert_eq!(cert.outcome, Outcome::Inconclusive);
        assert!(!cert.trace().is_empty());
    }

    #[test]
    fn prescriptions_come_first() {
        let p = candidate_params(&qh(12, 0, 10, 3));
        assert_eq!(p[0], DegenerationParams { k: 2, b: 5 });
        let p = candidate_params(&qh(9, 0, 10, 2));
        assert_eq!(p[0], DegenerationParams { k: 1, b: 5 });
    }

    #[test]
    fn budget_exhaustion() {
        let c = Certifier::new(CertifierConfig {
            budget: 1,
            ..CertifierConfig::default()
        });
        assert!(matches!(
            c.certify(&qh(10, 0, 10, 3)),
            Err(Error::BudgetExhausted(1))
        ));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("memo.json");
        let c = Certifier::default();
        let before = c.certify(&qh(7, 0, 7, 2)).unwrap();
        c.save(&path).unwrap();
        let fresh = Certifier::default();
        assert_eq!(fresh.load(&path).unwrap(), c.memo_len());
        assert_eq!(fresh.certify(&qh(7, 0, 7, 2)).unwrap(), before);
        std::fs::write(&path, r#"{"version":999,"entries":[]}"#).unwrap();
        assert!(matches!(fresh.load(&path), Err(Error::Cache(_))));
    }
}
