//! Printable tables: the quasi-homogeneous (-1)-classes, the
//! (-1)-configurations and the special systems with `m <= 3`.

use serde::Serialize;

use crate::classifier::SPECIAL_TABLE;
use crate::minus_one::{
    default_delta_max, enumerate_configurations_with, enumerate_qh_classes_with, Family,
    DEFAULT_E_MAX,
};

/// A row of a table with its cells already rendered. Parametric rows carry
/// `e` in their cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Row>,
}

fn row<I: IntoIterator<Item = S>, S: ToString>(cells: I) -> Row {
    Row {
        cells: cells.into_iter().map(|c| c.to_string()).collect(),
    }
}

impl Table {
    /// Columns padded to a common width, two spaces apart.
    pub fn to_plain(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(&r.cells) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: Vec<&str>| {
            let mut s = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut out = line(self.header.clone());
        for r in &self.rows {
            out += &line(r.cells.iter().map(String::as_str).collect());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(&r.cells).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 cells")
    }

    /// One JSON object per row keyed by the header.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                self.header
                    .iter()
                    .zip(&r.cells)
                    .map(|(h, c)| (h.to_string(), serde_json::Value::String(c.clone())))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            })
            .collect();
        serde_json::json!({ "table": self.name, "rows": rows })
    }
}

/// Quasi-homogeneous (-1)-classes with `m <= m_max`. With `expand`, the
/// pencil `(e, e-1, 2e, 1)` is listed for `e <= e_max` instead of as one
/// parametric row.
pub fn qh_class_table(m_max: i64, expand: bool, e_max: i64) -> Table {
    let mut rows = Vec::new();
    let mut pencil_pending = !expand && m_max >= 1;
    for c in enumerate_qh_classes_with(m_max, if expand { e_max } else { 0 }) {
        let (d, m0, n, m) = c.system.tuple();
        if pencil_pending && m > 1 {
            rows.push(row(["e>=1", "e-1", "2e", "1", "-", "-"]));
            pencil_pending = false;
        }
        let witness = match c.family {
            Family::Hyperbola { x, y } => [format!("({x}"), format!("{y})")],
            _ => ["-".to_string(), "-".to_string()],
        };
        rows.push(row([d, m0, n, m]
            .map(|v| v.to_string())
            .into_iter()
            .chain(witness)));
    }
    if pencil_pending {
        rows.push(row(["e>=1", "e-1", "2e", "1", "-", "-"]));
    }
    Table {
        name: "qh1list",
        header: vec!["d", "m0", "n", "m", "(x", "y)"],
        rows,
    }
}

/// Quasi-homogeneous (-1)-configurations with `m <= m_max`, the pencil of
/// lines through `p0` as one parametric row unless `expand`.
pub fn configuration_table(m_max: i64, expand: bool, e_max: i64) -> Table {
    let configs = enumerate_configurations_with(
        m_max,
        default_delta_max(m_max),
        if expand { e_max } else { 2 },
    );
    let rows = configs
        .into_iter()
        .map(|c| {
            let k = c.curve;
            let tail = [
                format!("({}", k.delta),
                k.mu0.to_string(),
                k.mu1.to_string(),
                format!("{})", k.mu2),
            ];
            if !expand && k.mu2 == 0 {
                row(["e>=2".to_string(), "e".into(), "e".into(), "1".into()]
                    .into_iter()
                    .chain(tail))
            } else {
                let (d, m0, n, m) = c.total.tuple();
                row([d, m0, n, m].map(|v| v.to_string()).into_iter().chain(tail))
            }
        })
        .collect();
    Table {
        name: "compound",
        header: vec!["d", "m0", "n", "m", "(delta", "mu0", "mu1", "mu2)"],
        rows,
    }
}

/// The special systems with `m <= 3`.
pub fn special_table() -> Table {
    Table {
        name: "obirreg23",
        header: vec!["system", "constraint", "v", "l"],
        rows: SPECIAL_TABLE
            .iter()
            .map(|e| {
                row([
                    e.pattern,
                    if e.constraint.is_empty() {
                        "-"
                    } else {
                        e.constraint
                    },
                    e.v_formula,
                    e.l_formula,
                ])
            })
            .collect(),
    }
}

pub fn default_e_max() -> i64 {
    DEFAULT_E_MAX
}
