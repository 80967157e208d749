//! JSON, CSV and text renderings. JSON is complete; CSV covers flat tables only;
//! text is a lossy summary and says so on its first line.

use std::fmt::Write as _;

use serde::Serialize;

use crate::commands::{EssentialTable, FiltrationReport, RootTable, VerifyReport};
use crate::config::Format;
use crate::CliError;

const TEXT_HEADER: &str = "# text summary (lossy; use --format json for the full report)\n";

pub trait Render: Serialize {
    /// Rows for CSV output, or `None` when the table is not flat.
    fn csv_rows(&self) -> Option<(Vec<&'static str>, Vec<Vec<String>>)>;
    fn text(&self, out: &mut String);
}

pub fn render<T: Render>(tables: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = if tables.len() == 1 {
                serde_json::to_string_pretty(&tables[0])
            } else {
                serde_json::to_string_pretty(tables)
            }
            .expect("reports serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header_written = false;
            for t in tables {
                let (header, rows) = t.csv_rows().ok_or_else(|| {
                    CliError::Usage("CSV output is only available for flat tables".into())
                })?;
                if !header_written {
                    w.write_record(&header).map_err(csv_err)?;
                    header_written = true;
                }
                for r in rows {
                    w.write_record(&r).map_err(csv_err)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Text => {
            let mut s = String::from(TEXT_HEADER);
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                t.text(&mut s);
            }
            Ok(s)
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

impl Render for RootTable {
    fn csv_rows(&self) -> Option<(Vec<&'static str>, Vec<Vec<String>>)> {
        let rows = self
            .roots
            .iter()
            .map(|r| {
                vec![
                    r.index.to_string(),
                    r.root.clone(),
                    r.height.to_string(),
                    r.pairings.clone(),
                ]
            })
            .collect();
        Some((vec!["index", "root", "height", "pairings"], rows))
    }

    fn text(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "{}: {} positive roots, Jacobi identity {}",
            self.type_label,
            self.roots.len(),
            if self.jacobi { "holds" } else { "FAILS" }
        );
        for r in &self.roots {
            let _ = writeln!(
                out,
                "  {:>2}  ({})  height {}  pairings ({})",
                r.index, r.root, r.height, r.pairings
            );
        }
    }
}

impl Render for EssentialTable {
    fn csv_rows(&self) -> Option<(Vec<&'static str>, Vec<Vec<String>>)> {
        let lambda = crate::weight_csv(&self.lambda);
        let rows = self
            .entries
            .iter()
            .map(|e| {
                vec![
                    self.type_label.clone(),
                    lambda.clone(),
                    self.p.to_string(),
                    e.s.clone(),
                    e.degree.to_string(),
                ]
            })
            .collect();
        Some((vec!["type", "lambda", "p", "s", "degree"], rows))
    }

    fn text(&self, out: &mut String) {
        let field = if self.p == 0 {
            "Q".to_string()
        } else {
            format!("F_{}", self.p)
        };
        let _ = writeln!(
            out,
            "es{} for {} over {}: {} elements (Weyl dimension {})",
            self.lambda, self.type_label, field, self.count, self.weyl_dimension
        );
        for e in &self.entries {
            let _ = writeln!(out, "  ({})  degree {}", e.s, e.degree);
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                out,
                "oracle: {}",
                if o.agrees { "agrees" } else { "MISMATCH" }
            );
            for s in &o.missing_from_table {
                let _ = writeln!(out, "  essential but rejected by the table: ({s})");
            }
            for s in &o.missing_from_sweep {
                let _ = writeln!(out, "  admitted by the table but not essential: ({s})");
            }
        }
    }
}

impl Render for FiltrationReport {
    fn csv_rows(&self) -> Option<(Vec<&'static str>, Vec<Vec<String>>)> {
        let lambda = crate::weight_csv(&self.lambda);
        let mu = self.mu.as_ref().map(crate::weight_csv).unwrap_or_default();
        let rows = self
            .levels
            .iter()
            .map(|l| {
                vec![
                    self.type_label.clone(),
                    lambda.clone(),
                    mu.clone(),
                    self.p.to_string(),
                    l.n.to_string(),
                    l.dim.to_string(),
                    self.graded[l.n].to_string(),
                ]
            })
            .collect();
        Some((
            vec!["type", "lambda", "mu", "p", "n", "dim", "graded"],
            rows,
        ))
    }

    fn text(&self, out: &mut String) {
        let field = if self.p == 0 {
            "Q".to_string()
        } else {
            format!("F_{}", self.p)
        };
        match &self.mu {
            Some(mu) => {
                let _ = writeln!(
                    out,
                    "induced filtration of V{} (x) V{} for {} over {} (dim {})",
                    self.lambda, mu, self.type_label, field, self.full_dim
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "PBW filtration of V{} for {} over {} (dim {})",
                    self.lambda, self.type_label, field, self.full_dim
                );
            }
        }
        for l in &self.levels {
            let _ = writeln!(
                out,
                "  n={}  dim {}  graded {}",
                l.n, l.dim, self.graded[l.n]
            );
        }
        if let Some(n) = &self.note {
            let _ = writeln!(out, "note: {n}");
        }
    }
}

impl Render for VerifyReport {
    fn csv_rows(&self) -> Option<(Vec<&'static str>, Vec<Vec<String>>)> {
        None
    }

    fn text(&self, out: &mut String) {
        match self {
            VerifyReport::G2(r) => {
                if r.exploration {
                    let _ = writeln!(
                        out,
                        "EXPLORATION ONLY (p < 11): no certification is claimed"
                    );
                }
                let _ = writeln!(
                    out,
                    "G2 verification at p = {} ({} order): {}",
                    r.p,
                    r.order.name(),
                    r.status
                );
                for s in &r.steps {
                    let _ = writeln!(
                        out,
                        "  {:<24} {}",
                        s.name,
                        if s.verdict { "PASS" } else { "FAIL" }
                    );
                }
            }
            VerifyReport::Criterion(r) => {
                let _ = writeln!(
                    out,
                    "{} for {} at p = {} (gamma {}): {}",
                    r.condition,
                    r.type_label,
                    r.p,
                    r.gamma,
                    if r.verdict { "PASS" } else { "FAIL" }
                );
            }
        }
    }
}
