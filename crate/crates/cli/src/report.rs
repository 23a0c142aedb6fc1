//! Run reports and their text / CSV / JSON renderings.
//!
//! Text mode prints six decimal places (matching the published table);
//! CSV and JSON carry nine significant digits. Reports are byte-identical
//! across identical invocations except for the timing, which CSV omits
//! entirely.

use serde::Serialize;

/// Header mandated for the `table` command's CSV output.
pub const TABLE_CSV_HEADER: &str = "lambda,E_num,E_inferred,cr_product";

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub lambda: f64,
    pub e_num: Option<f64>,
    pub e_inferred: Option<f64>,
    pub cr_product: Option<f64>,
    /// Published targets, present when `lambda` is a benchmark value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_num_reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_inferred_reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cr_product_reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TableRow {
    /// Attach the published targets when this row's `lambda` is tabulated.
    pub fn with_references(mut self, row: Option<&fisher_eig::benchmark::BenchmarkRow>) -> Self {
        if let Some(r) = row {
            self.e_num_reference = Some(r.energy_numeric);
            self.e_inferred_reference = Some(r.energy_inferred);
            self.cr_product_reference = Some(r.cr_product);
        }
        self
    }
}

/// A named scalar of an `infer` or `oracle` run.
#[derive(Debug, Clone, Serialize)]
pub struct Field {
    pub name: &'static str,
    pub value: Option<f64>,
}

/// One verification record of a `check` run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Worst observed residual (or bound slack) of the check.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_reference_deviation: Option<f64>,
    pub rows_failed: usize,
    pub checks_failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<Field>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        Self {
            command,
            rows: Vec::new(),
            fields: Vec::new(),
            checks: Vec::new(),
            summary: Summary::default(),
            elapsed_ms: 0.0,
        }
    }

    pub fn finalize(&mut self) {
        self.summary.rows_failed = self.rows.iter().filter(|r| r.error.is_some()).count();
        self.summary.checks_failed = self.checks.iter().filter(|c| !c.pass).count();
        self.summary.pass = self.summary.rows_failed == 0 && self.summary.checks_failed == 0;
    }
}

/// Nearest double to the value printed with nine significant digits.
fn round_sig9(v: f64) -> f64 {
    if v.is_finite() {
        format!("{v:.8e}").parse().unwrap_or(v)
    } else {
        v
    }
}

fn csv_number(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.8e}"),
        _ => "nan".to_string(),
    }
}

fn text_number(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.6}"),
        _ => "n/a".to_string(),
    }
}

pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", report.command));

    if !report.fields.is_empty() {
        for field in &report.fields {
            out.push_str(&format!(
                "{:<12} {:>14}\n",
                field.name,
                text_number(field.value)
            ));
        }
    }

    if !report.rows.is_empty() {
        out.push_str(&format!(
            "{:>12} {:>12} {:>12} {:>12}\n",
            "lambda", "E_num", "E_inferred", "cr_product"
        ));
        for row in &report.rows {
            out.push_str(&format!(
                "{:>12} {:>12} {:>12} {:>12}",
                format!("{}", row.lambda),
                text_number(row.e_num),
                text_number(row.e_inferred),
                text_number(row.cr_product)
            ));
            if let Some(err) = &row.error {
                out.push_str(&format!("  ! {err}"));
            }
            out.push('\n');
        }
    }

    for check in &report.checks {
        out.push_str(&format!(
            "[{}] {:<28} residual {:>10.3e}  (tolerance {:.0e})\n",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.residual,
            check.tolerance
        ));
    }

    if let Some(dev) = report.summary.max_reference_deviation {
        out.push_str(&format!("max |deviation from reference| = {dev:.3e}\n"));
    }
    out.push_str(&format!(
        "result: {}\n",
        if report.summary.pass { "PASS" } else { "FAIL" }
    ));
    out.push_str(&format!("elapsed_ms {:.3}\n", report.elapsed_ms));
    out
}

pub fn render_csv(report: &RunReport) -> String {
    let mut out = String::new();
    if !report.rows.is_empty() {
        out.push_str(TABLE_CSV_HEADER);
        out.push('\n');
        for row in &report.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_number(Some(row.lambda)),
                csv_number(row.e_num),
                csv_number(row.e_inferred),
                csv_number(row.cr_product)
            ));
        }
    } else if !report.fields.is_empty() {
        let names: Vec<&str> = report.fields.iter().map(|f| f.name).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        let values: Vec<String> = report.fields.iter().map(|f| csv_number(f.value)).collect();
        out.push_str(&values.join(","));
        out.push('\n');
    } else {
        out.push_str("name,residual,tolerance,pass\n");
        for check in &report.checks {
            out.push_str(&format!(
                "{},{},{},{}\n",
                check.name,
                csv_number(Some(check.residual)),
                csv_number(Some(check.tolerance)),
                check.pass
            ));
        }
    }
    out
}

pub fn render_json(report: &RunReport) -> String {
    let mut rounded = report.clone();
    for row in &mut rounded.rows {
        row.lambda = round_sig9(row.lambda);
        row.e_num = row.e_num.map(round_sig9);
        row.e_inferred = row.e_inferred.map(round_sig9);
        row.cr_product = row.cr_product.map(round_sig9);
        row.e_num_reference = row.e_num_reference.map(round_sig9);
        row.e_inferred_reference = row.e_inferred_reference.map(round_sig9);
        row.cr_product_reference = row.cr_product_reference.map(round_sig9);
    }
    for field in &mut rounded.fields {
        field.value = field.value.map(round_sig9);
    }
    for check in &mut rounded.checks {
        check.residual = round_sig9(check.residual);
    }
    if let Some(dev) = rounded.summary.max_reference_deviation {
        rounded.summary.max_reference_deviation = Some(round_sig9(dev));
    }
    let mut text = serde_json::to_string_pretty(&rounded).expect("report serializes");
    text.push('\n');
    text
}
