use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
}

impl Cell {
    /// 17 significant digits, so the text round-trips to the same `f64`.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The assertion does not apply to this configuration.
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Assertion {
    pub fn check(name: &'static str, ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name, status, detail }
    }

    pub fn skip(name: &'static str, detail: &str) -> Self {
        Self {
            name,
            status: Status::Skip,
            detail: detail.to_string(),
        }
    }

    pub fn holds(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiment: &'static str,
    pub seed: u64,
    pub csv_paths: Vec<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub summary: Vec<(&'static str, f64)>,
    pub assertions: Vec<Assertion>,
    pub wall_seconds: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(Assertion::holds)
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment = {}", self.experiment);
        let _ = writeln!(s, "seed = {}", self.seed);
        for p in &self.csv_paths {
            let _ = writeln!(s, "csv = {}", p.display());
        }
        if let Some(p) = &self.svg_path {
            let _ = writeln!(s, "svg = {}", p.display());
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "summary.{k} = {v}");
        }
        for a in &self.assertions {
            let _ = writeln!(s, "assert.{} = {}", a.name, a.status.as_str());
            let _ = writeln!(s, "assert.{}.detail = {}", a.name, a.detail);
        }
        let _ = writeln!(s, "passed = {}", self.passed());
        let _ = writeln!(s, "wall_seconds = {:.3}", self.wall_seconds);
        s
    }
}
