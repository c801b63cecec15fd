//! Quasi-homogeneous (-1)-classes and (-1)-configurations, irreducibility by
//! Cremona reduction, and fixed-part decompositions of special systems.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cremona::MultiplicitySequence;
use crate::error::{Error, Result};
use crate::system::{qh, QhClass, QuasiHomogeneousSystem};

/// Default truncation of the infinite families `(e, e-1, 2e, 1)` and
/// `(e, e, e, 1)`.
pub const DEFAULT_E_MAX: i64 = 50;

/// Largest degree the decomposition catalog is built for.
pub const CATALOG_MAX_DEGREE: i64 = 100_000;

/// Solution data of `x y = (m-1)(2m+1)`, with `u = x + 2m + 1 = 4d - nm`
/// and `v = 1 - m - y = 2d - nm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub x: i64,
    pub y: i64,
    pub u: i64,
    pub v: i64,
}

impl Witness {
    pub fn new(x: i64, y: i64, m: i64) -> Self {
        Self {
            x,
            y,
            u: x + 2 * m + 1,
            v: 1 - m - y,
        }
    }

    /// `(d, m0, n)` recovered from `(u, v)`.
    pub fn reconstruct(&self, m: i64) -> (i64, i64, i64) {
        let (u, v) = (self.u, self.v);
        ((u - v) / 2, (u + v) / 2 - 1, (u - 2 * v) / m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Family {
    /// The conic through five points, `(2, 0, 5, 1)`.
    Conic5,
    /// The line through `p0` and one other point, `(1, 1, 1, 1)`.
    Line,
    /// `(e, e-1, 2e, 1)`.
    LinePencil { e: i64 },
    /// Solutions of the hyperbola for `m >= 2`.
    Hyperbola { x: i64, y: i64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Conic5 => write!(f, "conic5"),
            Family::Line => write!(f, "line"),
            Family::LinePencil { e } => write!(f, "pencil(e={e})"),
            Family::Hyperbola { x, y } => write!(f, "hyperbola(x={x},y={y})"),
        }
    }
}

/// A quasi-homogeneous class with `L^2 = -1` and genus `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinusOneClass {
    pub system: QuasiHomogeneousSystem,
    pub witness: Option<Witness>,
    pub family: Family,
}

impl MinusOneClass {
    pub fn from_hyperbola(x: i64, y: i64, m: i64) -> Option<Self> {
        if x < 1 || y < 1 || m < 2 || x * y != (m - 1) * (2 * m + 1) {
            return None;
        }
        if x + m < y || (x - y - m).rem_euclid(2) != 0 || (x + 2 * y - 1) % m != 0 {
            return None;
        }
        let d = (x + y + 3 * m) / 2;
        let m0 = (x - y + m) / 2;
        let n = (x + 2 * y - 1) / m + 4;
        Some(Self {
            system: qh(d, m0, n, m),
            witness: Some(Witness::new(x, y, m)),
            family: Family::Hyperbola { x, y },
        })
    }

    pub fn class(&self) -> QhClass {
        self.system.into()
    }
}

fn divisors(value: i64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut f = 1;
    while f * f <= value {
        if value % f == 0 {
            small.push(f);
            if f * f != value {
                large.push(value / f);
            }
        }
        f += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Classes with `m >= 2` coming from the factorizations of `(m-1)(2m+1)`.
pub fn hyperbola_classes(m: i64) -> Vec<MinusOneClass> {
    let product = (m - 1) * (2 * m + 1);
    let mut out: Vec<_> = divisors(product)
        .into_iter()
        .filter_map(|x| MinusOneClass::from_hyperbola(x, product / x, m))
        .collect();
    out.sort_by_key(|c| c.system.d());
    out
}

pub fn line_pencil(e: i64) -> MinusOneClass {
    MinusOneClass {
        system: qh(e, e - 1, 2 * e, 1),
        witness: None,
        family: Family::LinePencil { e },
    }
}

fn family_rank(f: &Family) -> u8 {
    match f {
        Family::Line => 0,
        Family::Conic5 => 1,
        Family::LinePencil { .. } => 2,
        Family::Hyperbola { .. } => 3,
    }
}

/// All quasi-homogeneous (-1)-classes with `m <= m_max`, the pencil family
/// cut at `e <= e_max`. Sorted by `(m, d)`.
pub fn enumerate_qh_classes_with(m_max: i64, e_max: i64) -> Vec<MinusOneClass> {
    let mut out = Vec::new();
    if m_max >= 1 {
        out.push(MinusOneClass {
            system: qh(1, 1, 1, 1),
            witness: None,
            family: Family::Line,
        });
        out.push(MinusOneClass {
            system: qh(2, 0, 5, 1),
            witness: None,
            family: Family::Conic5,
        });
        out.extend((1..=e_max).map(line_pencil));
    }
    for m in 2..=m_max {
        out.extend(hyperbola_classes(m));
    }
    out.sort_by(|a, b| {
        (a.system.m(), a.system.d(), family_rank(&a.family)).cmp(&(
            b.system.m(),
            b.system.d(),
            family_rank(&b.family),
        ))
    });
    out
}

pub fn enumerate_qh_classes(m_max: i64) -> Vec<MinusOneClass> {
    enumerate_qh_classes_with(m_max, DEFAULT_E_MAX)
}

/// The homogeneous (-1)-classes: the line through two points and the conic
/// through five.
pub fn enumerate_homogeneous_classes() -> Vec<MinusOneClass> {
    vec![line_pencil(1), enumerate_qh_classes_with(1, 0)[1].clone()]
}

/// Curve data of one member of a configuration: degree `delta`,
/// multiplicity `mu0` at `p0`, `mu1` at one point and `mu2` at the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitCurve {
    pub delta: i64,
    pub mu0: i64,
    pub mu1: i64,
    pub mu2: i64,
}

/// The sum of the `n` conjugates of a (-1)-curve whose multiplicities at the
/// equal points take two values, one of them only once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinusOneConfiguration {
    pub total: QuasiHomogeneousSystem,
    pub curve: OrbitCurve,
    pub count: i64,
    pub compound: bool,
}

impl MinusOneConfiguration {
    pub fn new(curve: OrbitCurve, n: i64) -> Self {
        let OrbitCurve {
            delta,
            mu0,
            mu1,
            mu2,
        } = curve;
        Self {
            total: qh(n * delta, n * mu0, n, mu1 + (n - 1) * mu2),
            curve,
            count: n,
            compound: n > 1,
        }
    }

    pub fn n(&self) -> i64 {
        self.total.n()
    }

    /// Member `index` (0-based among the equal points) as a sequence on
    /// `p0, ..., pn`.
    pub fn member(&self, index: usize) -> MultiplicitySequence {
        let n = self.n() as usize;
        let mut mults = vec![self.curve.mu0];
        mults.extend((0..n).map(|i| {
            if i == index {
                self.curve.mu1
            } else {
                self.curve.mu2
            }
        }));
        MultiplicitySequence::new(self.curve.delta, mults)
    }
}

/// Search for configurations with `delta <= delta_max` and total `m <=
/// m_max`. The pencil family of lines through `p0` is cut at `e_max`.
pub fn enumerate_configurations_with(
    m_max: i64,
    delta_max: i64,
    e_max: i64,
) -> Vec<MinusOneConfiguration> {
    let mut out = Vec::new();
    if m_max >= 1 {
        let lines = OrbitCurve {
            delta: 1,
            mu0: 1,
            mu1: 1,
            mu2: 0,
        };
        out.extend((2..=e_max).map(|e| MinusOneConfiguration::new(lines, e)));
    }
    for delta in 1..=delta_max {
        for mu0 in 0..=delta {
            for mu2 in 1..=delta {
                for mu1 in [mu2 - 1, mu2 + 1] {
                    if mu1 < 0 || mu1 > delta {
                        continue;
                    }
                    // genus zero: 3 delta - mu0 - mu1 - (n-1) mu2 = 1
                    let rest = 3 * delta - mu0 - mu1 - 1;
                    if rest <= 0 || rest % mu2 != 0 {
                        continue;
                    }
                    let n = rest / mu2 + 1;
                    if n == 2 && mu1 < mu2 {
                        // same orbit as the swapped pair
                        continue;
                    }
                    let curve = OrbitCurve {
                        delta,
                        mu0,
                        mu1,
                        mu2,
                    };
                    let config = MinusOneConfiguration::new(curve, n);
                    let member = config.member(0);
                    if member.self_int() != -1 || config.total.m() > m_max {
                        continue;
                    }
                    if reduce_to_line(&member).irreducible {
                        out.push(config);
                    }
                }
            }
        }
    }
    out.sort_by_key(|c| (c.total.m(), c.total.d(), c.total.m0()));
    out.dedup();
    out
}

/// Every irreducible member has `m = 3 delta - mu0 - 1 >= 2 delta - 1`, so
/// `delta <= (m_max + 1) / 2` loses nothing.
pub fn default_delta_max(m_max: i64) -> i64 {
    (m_max + 1) / 2 + 1
}

pub fn enumerate_configurations(m_max: i64, delta_max: i64) -> Vec<MinusOneConfiguration> {
    enumerate_configurations_with(m_max, delta_max, DEFAULT_E_MAX)
}

/// Homogeneous (`m0 = 0`) configurations: the two homogeneous classes and
/// the compound configurations with `mu0 = 0`.
pub fn enumerate_homogeneous_configurations(
    m_max: i64,
    delta_max: i64,
) -> Vec<QuasiHomogeneousSystem> {
    let mut out: Vec<_> = enumerate_homogeneous_classes()
        .into_iter()
        .map(|c| c.system)
        .collect();
    out.extend(
        enumerate_configurations(m_max, delta_max)
            .into_iter()
            .filter(|c| c.total.m0() == 0)
            .map(|c| c.total),
    );
    out.sort();
    out.dedup();
    out
}

/// One quadratic transformation of a reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub indices: (usize, usize, usize),
    pub result: MultiplicitySequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub irreducible: bool,
    pub steps: Vec<ReductionStep>,
}

fn is_line_through_two(s: &MultiplicitySequence) -> bool {
    s.degree == 1
        && s.mults.iter().all(|&m| m == 0 || m == 1)
        && s.mults.iter().filter(|&&m| m == 1).count() == 2
}

/// Reduce a (-1)-class by quadratic transformations at its three largest
/// multiplicities until it becomes a line through two points (irreducible)
/// or an entry turns negative or the degree stops dropping (not
/// irreducible).
pub fn reduce_to_line(seq: &MultiplicitySequence) -> Reduction {
    let mut current = seq.clone();
    while current.mults.len() < 3 {
        current.mults.push(0);
    }
    let mut steps = Vec::new();
    loop {
        if is_line_through_two(&current) {
            return Reduction {
                irreducible: true,
                steps,
            };
        }
        if !current.is_effective_form() {
            return Reduction {
                irreducible: false,
                steps,
            };
        }
        let (i, j, k) = current.three_largest().expect("at least three entries");
        let next = current
            .quadratic_transform(i, j, k)
            .expect("distinct indices")
            .sequence;
        let stalled = next.degree >= current.degree;
        steps.push(ReductionStep {
            indices: (i, j, k),
            result: next.clone(),
        });
        if stalled {
            return Reduction {
                irreducible: false,
                steps,
            };
        }
        current = next;
    }
}

/// Another irreducible (-1)-class meeting a class negatively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub curve: QuasiHomogeneousSystem,
    pub intersection: i64,
    pub residual: QhClass,
    pub residual_v: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    pub class: QuasiHomogeneousSystem,
    pub irreducible: bool,
    pub reduction: Reduction,
    pub obstruction: Option<Obstruction>,
}

/// Decide whether a quasi-homogeneous (-1)-class contains a (-1)-curve.
pub fn is_irreducible_class(class: &QuasiHomogeneousSystem) -> Result<IrreducibilityReport> {
    let inv = class.invariants();
    if inv.self_int != -1 || inv.genus != 0 {
        return Err(Error::NotMinusOneClass(class.to_string()));
    }
    let reduction = reduce_to_line(&class.to_sequence());
    let obstruction = if reduction.irreducible {
        None
    } else {
        find_obstruction(class)
    };
    Ok(IrreducibilityReport {
        class: *class,
        irreducible: reduction.irreducible,
        reduction,
        obstruction,
    })
}

fn find_obstruction(class: &QuasiHomogeneousSystem) -> Option<Obstruction> {
    let target = QhClass::from(*class);
    enumerate_qh_classes_with(class.m(), class.n())
        .into_iter()
        .filter(|c| c.system.n() == class.n() && c.system != *class)
        .filter(|c| reduce_to_line(&c.system.to_sequence()).irreducible)
        .find_map(|c| {
            let a = c.class();
            let intersection = target.dot(&a);
            (intersection < 0).then(|| {
                let residual =
                    QhClass::new(target.d - a.d, target.m0 - a.m0, target.n, target.m - a.m);
                Obstruction {
                    curve: c.system,
                    intersection,
                    residual,
                    residual_v: residual.virtual_dim(),
                }
            })
        })
}

/// A (-1)-curve orbit usable as a fixed component of systems on `n` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedCurve {
    Class(MinusOneClass),
    Configuration(MinusOneConfiguration),
}

impl FixedCurve {
    /// Sum of the orbit.
    pub fn total(&self) -> QhClass {
        match self {
            FixedCurve::Class(c) => c.class(),
            FixedCurve::Configuration(c) => c.total.into(),
        }
    }

    pub fn count(&self) -> i64 {
        match self {
            FixedCurve::Class(_) => 1,
            FixedCurve::Configuration(c) => c.count,
        }
    }

    /// The individual (-1)-curves of the orbit.
    pub fn members(&self) -> Vec<MultiplicitySequence> {
        match self {
            FixedCurve::Class(c) => vec![c.system.to_sequence()],
            FixedCurve::Configuration(c) => (0..c.n() as usize).map(|i| c.member(i)).collect(),
        }
    }

    /// Intersection of a quasi-homogeneous class with a single member.
    pub fn meet(&self, l: &QhClass) -> i64 {
        match self {
            FixedCurve::Class(c) => l.dot(&c.class()),
            FixedCurve::Configuration(c) => {
                let OrbitCurve {
                    delta,
                    mu0,
                    mu1,
                    mu2,
                } = c.curve;
                l.d * delta - l.m0 * mu0 - l.m * (mu1 + (c.n() - 1) * mu2)
            }
        }
    }
}

impl fmt::Display for FixedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedCurve::Class(c) => write!(f, "{}", c.system),
            FixedCurve::Configuration(c) => {
                let OrbitCurve {
                    delta,
                    mu0,
                    mu1,
                    mu2,
                } = c.curve;
                write!(
                    f,
                    "{} = {} x ({delta}; {mu0}, {mu1}, {mu2}^{})",
                    c.total,
                    c.count,
                    c.n() - 1
                )
            }
        }
    }
}

/// Irreducible (-1)-curve orbits grouped by their number of equal points.
#[derive(Debug, Clone)]
pub struct Catalog {
    by_n: BTreeMap<i64, Vec<FixedCurve>>,
    pub degree_bound: i64,
}

impl Catalog {
    /// Every orbit whose total has degree at most `degree_bound`.
    pub fn new(degree_bound: i64) -> Self {
        let bound = degree_bound.clamp(1, CATALOG_MAX_DEGREE);
        let mut by_n: BTreeMap<i64, Vec<FixedCurve>> = BTreeMap::new();
        // every class with m >= 2 has d > 2m
        let classes = enumerate_qh_classes_with(bound / 2 + 1, bound);
        for c in classes {
            if c.system.d() > bound {
                continue;
            }
            if !reduce_to_line(&c.system.to_sequence()).irreducible {
                continue;
            }
            by_n.entry(c.system.n())
                .or_default()
                .push(FixedCurve::Class(c));
        }
        for c in enumerate_configurations_with(3 * bound, bound / 2, bound) {
            if c.total.d() > bound {
                continue;
            }
            let dup = by_n
                .get(&c.n())
                .is_some_and(|v| v.iter().any(|f| f.total() == QhClass::from(c.total)));
            if !dup {
                by_n.entry(c.n())
                    .or_default()
                    .push(FixedCurve::Configuration(c));
            }
        }
        Self {
            by_n,
            degree_bound: bound,
        }
    }

    pub fn curves_for(&self, n: i64) -> &[FixedCurve] {
        self.by_n.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.by_n.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `L = sum N_j A_j + M` with every `A_j` meeting `L` negatively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialDecomposition {
    pub system: QuasiHomogeneousSystem,
    pub fixed_parts: Vec<(FixedCurve, i64)>,
    pub residual: QhClass,
    pub residual_v: i64,
}

impl SpecialDecomposition {
    /// `sum N (N - 1) / 2` over individual curves.
    pub fn excess(&self) -> i64 {
        self.fixed_parts
            .iter()
            .map(|(c, n)| c.count() * n * (n - 1) / 2)
            .sum()
    }
}

/// Split off the enumerated curves meeting `l` negatively and keep the
/// result when it shows `l` to be (-1)-special.
pub fn find_special_decomposition(
    l: &QuasiHomogeneousSystem,
    catalog: &Catalog,
) -> Option<SpecialDecomposition> {
    l.representations()
        .iter()
        .find_map(|rep| decompose_representation(rep, catalog))
}

fn decompose_representation(
    l: &QuasiHomogeneousSystem,
    catalog: &Catalog,
) -> Option<SpecialDecomposition> {
    let curves: Vec<&FixedCurve> = catalog
        .curves_for(l.n())
        .iter()
        .filter(|c| c.total().d <= l.d())
        .collect();
    let mut residual = QhClass::from(*l);
    let mut multiplicity: BTreeMap<usize, i64> = BTreeMap::new();
    while let Some((idx, meet)) = curves
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.meet(&residual)))
        .find(|&(_, meet)| meet < 0)
    {
        let n = -meet;
        let total = curves[idx].total();
        residual = QhClass::new(
            residual.d - n * total.d,
            residual.m0 - n * total.m0,
            residual.n,
            residual.m - n * total.m,
        );
        *multiplicity.entry(idx).or_default() += n;
        if !residual.is_effective_form() {
            return None;
        }
    }
    if multiplicity.values().all(|&n| n < 2) {
        return None;
    }
    let residual_v = residual.virtual_dim();
    if residual_v < 0 {
        return None;
    }
    let parts: Vec<_> = multiplicity.iter().map(|(&i, &n)| (curves[i], n)).collect();
    for (a, (ca, _)) in parts.iter().enumerate() {
        for (cb, _) in &parts[a + 1..] {
            if ca.total().dot(&cb.total()) != 0 {
                return None;
            }
        }
    }
    Some(SpecialDecomposition {
        system: *l,
        fixed_parts: parts.into_iter().map(|(c, n)| (c.clone(), n)).collect(),
        residual,
        residual_v,
    })
}
