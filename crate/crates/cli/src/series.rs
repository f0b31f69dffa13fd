//! CSV output and golden-file comparison.

use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) if v.is_infinite() => if *v > 0.0 { "inf".into() } else { "-inf".into() },
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Header, rows and `#` metadata lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvSeries {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvSeries {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    #[cfg(test)]
    pub fn to_string_lossy(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDeviation {
    pub column: String,
    pub max_rel_dev: f64,
    /// Zero-based data row of the largest deviation.
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub columns: Vec<ColumnDeviation>,
    pub rel_tol: f64,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.columns.iter().all(|c| c.max_rel_dev <= self.rel_tol)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ColumnDeviation> {
        self.columns.iter().filter(|c| !(c.max_rel_dev <= self.rel_tol))
    }
}

fn read_table(text: &str, what: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| format!("{what}: {e}"))?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| format!("{what}: {e}"))?;
    Ok((header, rows))
}

fn relative_deviation(a: &str, b: &str) -> f64 {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) if x == y => 0.0,
        (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => (x - y).abs() / x.abs().max(y.abs()),
        (Ok(_), Ok(_)) => f64::INFINITY,
        _ if a == b => 0.0,
        _ => f64::INFINITY,
    }
}

/// Per-column maximum relative deviation of `candidate` from `golden`.
/// Errors on structural mismatch (header or row count).
pub fn compare_golden(candidate: &str, golden: &str, rel_tol: f64) -> Result<CompareReport, String> {
    let (h1, r1) = read_table(candidate, "candidate")?;
    let (h2, r2) = read_table(golden, "golden")?;
    if h1 != h2 {
        return Err(format!("header mismatch: {h1:?} vs {h2:?}"));
    }
    if r1.len() != r2.len() {
        return Err(format!("row count mismatch: {} vs {}", r1.len(), r2.len()));
    }
    let mut columns: Vec<ColumnDeviation> =
        h1.iter().map(|c| ColumnDeviation { column: c.clone(), max_rel_dev: 0.0, row: 0 }).collect();
    for (i, (a, b)) in r1.iter().zip(&r2).enumerate() {
        for (col, (x, y)) in columns.iter_mut().zip(a.iter().zip(b)) {
            let d = relative_deviation(x, y);
            if d > col.max_rel_dev {
                col.max_rel_dev = d;
                col.row = i;
            }
        }
    }
    Ok(CompareReport { columns, rel_tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsvSeries {
        let mut s = CsvSeries::new(&["z_m", "region", "gain"]);
        s.meta("tool", "nearfield 0.1.0");
        s.push(vec![1.5.into(), "far-field".into(), 0.25.into()]);
        s.push(vec![f64::INFINITY.into(), "far-field".into(), 1.0.into()]);
        s
    }

    #[test]
    fn renders_scientific_and_infinity() {
        let text = sample().to_string_lossy();
        assert!(text.starts_with("# tool: nearfield 0.1.0\n"));
        assert!(text.contains("1.5e0,far-field,2.5e-1"));
        assert!(text.contains("inf,far-field,1e0"));
    }

    #[test]
    fn self_comparison_passes_at_zero() {
        let t = sample().to_string_lossy();
        assert!(compare_golden(&t, &t, 0.0).unwrap().passed());
    }

    #[test]
    fn perturbation_is_located() {
        let golden = sample();
        let mut cand = golden.clone();
        cand.rows[1][2] = Cell::Num(1.0 + 2e-6);
        let rep = compare_golden(&cand.to_string_lossy(), &golden.to_string_lossy(), 1e-6).unwrap();
        assert!(!rep.passed());
        let f: Vec<_> = rep.failures().collect();
        assert_eq!((f[0].column.as_str(), f[0].row), ("gain", 1));
    }

    #[test]
    fn structural_mismatch() {
        let a = sample().to_string_lossy();
        let b = CsvSeries::new(&["z_m"]).to_string_lossy();
        assert!(compare_golden(&a, &b, 1.0).is_err());
        let mut c = sample();
        c.rows.pop();
        assert!(compare_golden(&a, &c.to_string_lossy(), 1.0).is_err());
    }

    #[test]
    fn text_cells_compare_exactly() {
        let golden = sample();
        let mut cand = golden.clone();
        cand.rows[0][1] = "near-field".into();
        let rep = compare_golden(&cand.to_string_lossy(), &golden.to_string_lossy(), 1.0).unwrap();
        assert_eq!(rep.failures().next().unwrap().column, "region");
    }
}
