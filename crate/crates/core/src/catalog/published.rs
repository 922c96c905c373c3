//! The published global-weight table for the top-ranked DfX.

use serde::{Deserialize, Serialize};

use super::{CatalogError, WEIGHTS_FILE};

/// Rows are rounded to one decimal, so sums may drift by a few tenths.
pub const ROW_SUM_TOLERANCE: f64 = 0.15;
pub const CRITERIA_TOTAL_TOLERANCE: f64 = 0.5;
pub const CONSISTENCY_LIMIT_PCT: f64 = 10.0;

const OVERALL_ROW: &str = "OVERALL";
const CONSISTENCY_ROW: &str = "CONSISTENCY";
const OVERALL_COLUMN: &str = "Overall";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedRow {
    pub name: String,
    /// Percent per criterion, in [`PublishedWeightTable::criteria`] order.
    pub contributions: Vec<f64>,
    pub overall: f64,
}

/// All values in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedWeightTable {
    pub criteria: Vec<String>,
    pub criteria_overall: Vec<f64>,
    pub stated_total: f64,
    pub rows: Vec<PublishedRow>,
    pub consistency: Vec<f64>,
    pub overall_consistency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightCheck {
    pub check: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<WeightCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn violations(&self) -> Vec<&WeightCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn within(check: String, expected: f64, actual: f64, tolerance: f64) -> WeightCheck {
    WeightCheck {
        pass: (actual - expected).abs() <= tolerance + 1e-9,
        check,
        expected,
        actual,
        tolerance,
    }
}

fn below(check: String, limit: f64, actual: f64) -> WeightCheck {
    WeightCheck {
        pass: actual < limit,
        check,
        expected: limit,
        actual,
        tolerance: 0.0,
    }
}

/// Row sums, criteria total and consistency limits. Violations are report
/// content, never errors.
pub fn validate_published_weights(table: &PublishedWeightTable) -> ValidationReport {
    let mut checks = Vec::new();
    for row in &table.rows {
        let sum: f64 = row.contributions.iter().sum();
        checks.push(within(format!("row sum: {}", row.name), row.overall, sum, ROW_SUM_TOLERANCE));
    }
    let total: f64 = table.criteria_overall.iter().sum();
    checks.push(within(
        "criteria overall sum".into(),
        table.stated_total,
        total,
        CRITERIA_TOTAL_TOLERANCE,
    ));
    for (c, &v) in table.criteria.iter().zip(&table.consistency) {
        checks.push(below(format!("consistency: {c}"), CONSISTENCY_LIMIT_PCT, v));
    }
    checks.push(below(
        "consistency: overall".into(),
        CONSISTENCY_LIMIT_PCT,
        table.overall_consistency,
    ));
    ValidationReport { checks }
}

pub(super) fn parse(text: &str) -> Result<PublishedWeightTable, CatalogError> {
    let records = super::read_csv(WEIGHTS_FILE, text, &["row", "criterion", "value_pct"])?;
    let schema = |line: u64, message: String| CatalogError::SchemaViolation {
        file: WEIGHTS_FILE.to_string(),
        line: Some(line),
        message,
    };

    // (row label, first line, [(criterion, value)]) in first-seen order
    type Group = (String, u64, Vec<(String, f64)>);
    let mut grouped: Vec<Group> = Vec::new();
    for (line, r) in records {
        let label = r[0].trim().to_string();
        let criterion = r[1].trim().to_string();
        let value: f64 = r[2]
            .trim()
            .parse()
            .map_err(|_| schema(line, format!("value_pct '{}' is not a number", &r[2])))?;
        match grouped.iter_mut().find(|(l, _, _)| *l == label) {
            Some((_, _, cells)) => {
                if cells.iter().any(|(c, _)| *c == criterion) {
                    return Err(schema(line, format!("duplicate cell ({label}, {criterion})")));
                }
                cells.push((criterion, value));
            }
            None => grouped.push((label, line, vec![(criterion, value)])),
        }
    }

    let take = |label: &str| grouped.iter().find(|(l, _, _)| l == label);
    let (_, overall_line, overall) =
        take(OVERALL_ROW).ok_or_else(|| schema(1, format!("missing {OVERALL_ROW} row")))?;
    let criteria: Vec<String> = overall
        .iter()
        .map(|(c, _)| c.clone())
        .filter(|c| c != OVERALL_COLUMN)
        .collect();
    if criteria.is_empty() {
        return Err(schema(*overall_line, "no criteria columns".into()));
    }

    let split = |label: &str, line: u64, cells: &[(String, f64)]| -> Result<(Vec<f64>, f64), CatalogError> {
        let get = |c: &str| {
            cells
                .iter()
                .find(|(k, _)| k == c)
                .map(|(_, v)| *v)
                .ok_or_else(|| schema(line, format!("row '{label}' has no '{c}' value")))
        };
        if cells.len() != criteria.len() + 1 {
            return Err(schema(
                line,
                format!("row '{label}' has {} cells, expected {}", cells.len(), criteria.len() + 1),
            ));
        }
        let values = criteria.iter().map(|c| get(c)).collect::<Result<_, _>>()?;
        Ok((values, get(OVERALL_COLUMN)?))
    };

    let (criteria_overall, stated_total) = split(OVERALL_ROW, *overall_line, overall)?;
    let (_, cline, ccells) =
        take(CONSISTENCY_ROW).ok_or_else(|| schema(1, format!("missing {CONSISTENCY_ROW} row")))?;
    let (consistency, overall_consistency) = split(CONSISTENCY_ROW, *cline, ccells)?;

    let mut rows = Vec::new();
    for (label, line, cells) in &grouped {
        if label == OVERALL_ROW || label == CONSISTENCY_ROW {
            continue;
        }
        let (contributions, overall) = split(label, *line, cells)?;
        rows.push(PublishedRow {
            name: label.clone(),
            contributions,
            overall,
        });
    }
    Ok(PublishedWeightTable {
        criteria,
        criteria_overall,
        stated_total,
        rows,
        consistency,
        overall_consistency,
    })
}
