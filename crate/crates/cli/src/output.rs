//! Deterministic CSV output with commented provenance headers.

use crate::Failure;
use optomech::SystemModel;
use std::fmt;
use std::io::Write;
use std::path::Path;

/// One CSV cell; floats are printed with full round-trip precision.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Flag(bool),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Float(x) => write!(f, "{x:.16e}"),
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Flag(b) => write!(f, "{b}"),
            Cell::Text(s) => write!(f, "{}", sanitize(s)),
        }
    }
}

/// Comment block, header row, and data rows of one report.
#[derive(Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Renders the table as CSV text.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(&sanitize(c));
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes the table to a file or stdout.
    pub fn write(&self, out: Option<&Path>) -> Result<(), Failure> {
        let text = self.render();
        match out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(e.to_string())),
        }
    }
}

/// Keeps cell and comment text on one comma-free line.
fn sanitize(s: &str) -> String {
    s.replace(',', ";").replace(['\n', '\r'], " ")
}

/// Comment lines recording every model parameter.
pub fn model_comments(model: &SystemModel) -> Vec<String> {
    let mut lines = vec![
        format!(
            "system: epsilon_l = {}; epsilon_a = {}; kappa_a = {}; kappa_a_prime = {}",
            model.freq.epsilon_l,
            model.freq.epsilon_a,
            model.cavity.kappa_a,
            model.cavity.kappa_a_prime
        ),
        format!(
            "opo: chi = {}; kappa_c = {}; kappa_c_prime = {}",
            model.opo.chi, model.opo.kappa_c, model.opo.kappa_c_prime
        ),
    ];
    for (k, m) in model.modes.iter().enumerate() {
        let coupling = if m.coupling.im == 0.0 {
            format!("{}", m.coupling.re)
        } else {
            format!("{}{:+}i", m.coupling.re, m.coupling.im)
        };
        lines.push(format!(
            "mode {}: omega = {}; gamma = {}; coupling = {coupling}; n_thermal = {}",
            k + 1,
            m.omega,
            m.gamma,
            m.n_thermal
        ));
    }
    lines
}
