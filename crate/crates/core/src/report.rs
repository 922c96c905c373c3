//! Renderings of results: CSV and JSON at full precision, Markdown with
//! percentages to one decimal.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::{DfxEntry, GapReport, ValidationReport};
use crate::engine::{GlobalWeights, Model, PruneOutcome, RankedAlternative, RankingDelta, Solution, TopLevelBreakdown};
use crate::hierarchy::ContextKind;
use crate::priority::ConsistencyReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Markdown,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextReport {
    pub context: String,
    pub kind: ContextKind,
    pub children: Vec<String>,
    pub priorities: Vec<f64>,
    pub lambda_max: f64,
    pub iterations: usize,
    pub consistency: ConsistencyReport,
    pub imputed: bool,
}

/// Everything a solve produces, in hierarchy order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub goal: String,
    pub all_consistent: bool,
    pub ranking: Vec<RankedAlternative>,
    pub weights: GlobalWeights,
    pub top_level: TopLevelBreakdown,
    pub contexts: Vec<ContextReport>,
}

impl SolveReport {
    pub fn new(model: &Model, solution: &Solution) -> Self {
        let h = model.hierarchy();
        let contexts = h
            .required_contexts()
            .into_iter()
            .filter_map(|c| solution.contexts.get(&c.name))
            .map(|s| ContextReport {
                context: s.context.name.clone(),
                kind: s.context.kind,
                children: s.context.children.clone(),
                priorities: s.priority.priorities.clone(),
                lambda_max: s.priority.lambda_max,
                iterations: s.priority.iterations,
                consistency: s.consistency,
                imputed: s.matrix.is_imputed(),
            })
            .collect();
        Self {
            goal: h.goal().to_string(),
            all_consistent: solution.all_consistent(),
            ranking: solution.weights.ranking(),
            top_level: solution.weights.top_level(h),
            weights: solution.weights.clone(),
            contexts,
        }
    }

    /// Largest consistency ratio among the contexts under each top-level
    /// criterion (including its own), and over all contexts.
    pub fn consistency_by_top_criterion(&self) -> (Vec<f64>, f64) {
        let criteria = &self.top_level.criteria;
        let mut per = vec![0.0_f64; criteria.len()];
        let mut overall = 0.0_f64;
        for c in &self.contexts {
            overall = overall.max(c.consistency.cr);
            if c.context == self.goal {
                continue;
            }
            let top = self.top_criterion_of(&c.context);
            if let Some(i) = top.and_then(|t| criteria.iter().position(|x| x == t)) {
                per[i] = per[i].max(c.consistency.cr);
            }
        }
        (per, overall)
    }

    fn top_criterion_of<'a>(&'a self, node: &'a str) -> Option<&'a str> {
        let mut current = node;
        loop {
            let n = self.weights.criterion(current)?;
            if n.parent == self.goal {
                return Some(&n.name);
            }
            current = &n.parent;
        }
    }
}

pub fn pct(v: f64) -> String {
    format!("{:.1}%", v * 100.0)
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_table(header: &[String], align_right_from: usize, rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.iter().map(|h| md_cell(h)).collect::<Vec<_>>().join(" | "));
    let seps: Vec<&str> = (0..header.len())
        .map(|i| if i >= align_right_from { "---:" } else { "---" })
        .collect();
    let _ = writeln!(out, "|{}|", seps.join("|"));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "));
    }
    out
}

/// One row per alternative (hierarchy order), one column per leaf criterion, then overall.
pub fn breakdown_csv(weights: &GlobalWeights) -> String {
    let mut header = vec!["alternative".to_string()];
    header.extend(weights.leaf_criteria.iter().cloned());
    header.push("overall".into());
    let rows = weights.alternatives.iter().enumerate().map(|(a, name)| {
        let mut r = vec![name.clone()];
        r.extend(weights.breakdown[a].iter().map(|v| v.to_string()));
        r.push(weights.alternative_weights[a].to_string());
        r
    });
    csv_string(std::iter::once(header).chain(rows))
}

/// Top-level criteria as columns; an OVERALL row of criterion weights,
/// alternatives by descending weight, and a CONSISTENCY row.
pub fn weights_markdown(report: &SolveReport, limit: Option<usize>) -> String {
    let t = &report.top_level;
    let mut header = vec![String::new()];
    header.extend(t.criteria.iter().cloned());
    header.push("Overall".into());

    let mut rows = Vec::new();
    let mut overall = vec!["OVERALL".to_string()];
    overall.extend(t.criteria_weights.iter().map(|&w| pct(w)));
    overall.push(pct(t.criteria_weights.iter().sum()));
    rows.push(overall);

    let shown = limit.unwrap_or(report.ranking.len());
    for r in report.ranking.iter().take(shown) {
        let a = report
            .weights
            .alternatives
            .iter()
            .position(|x| *x == r.name)
            .expect("ranked alternative exists");
        let mut row = vec![r.name.clone()];
        row.extend(t.rows[a].iter().map(|&v| pct(v)));
        row.push(pct(r.weight));
        rows.push(row);
    }

    let (per, all) = report.consistency_by_top_criterion();
    let mut cons = vec!["CONSISTENCY".to_string()];
    cons.extend(per.iter().map(|&c| pct(c)));
    cons.push(pct(all));
    rows.push(cons);

    let mut out = format!("# {}\n\n", report.goal);
    out.push_str(&md_table(&header, 1, &rows));
    if shown < report.ranking.len() {
        let _ = writeln!(out, "\n{} of {} alternatives shown.", shown, report.ranking.len());
    }
    out
}

pub fn consistency_markdown(report: &SolveReport) -> String {
    let header: Vec<String> = ["Context", "Kind", "n", "λmax", "CI", "RI", "CR", "Status"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = report
        .contexts
        .iter()
        .map(|c| {
            let k = &c.consistency;
            vec![
                c.context.clone(),
                match c.kind {
                    ContextKind::Criteria => "criteria",
                    ContextKind::Alternatives => "alternatives",
                }
                .to_string(),
                k.order.to_string(),
                format!("{:.4}", c.lambda_max),
                format!("{:.4}", k.ci),
                format!("{:.4}", k.ri),
                format!("{:.4}", k.cr),
                if k.pass { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut out = String::from("## Consistency\n\n");
    out.push_str(&md_table(&header, 2, &rows));
    out
}

pub fn consistency_csv(report: &SolveReport) -> String {
    let header = ["context", "kind", "order", "lambda_max", "ci", "ri", "cr", "pass"]
        .map(String::from)
        .to_vec();
    let rows = report.contexts.iter().map(|c| {
        let k = &c.consistency;
        vec![
            c.context.clone(),
            format!("{:?}", c.kind).to_lowercase(),
            k.order.to_string(),
            c.lambda_max.to_string(),
            k.ci.to_string(),
            k.ri.to_string(),
            k.cr.to_string(),
            k.pass.to_string(),
        ]
    });
    csv_string(std::iter::once(header).chain(rows))
}

pub fn solve_markdown(report: &SolveReport, limit: Option<usize>) -> String {
    format!("{}\n{}", weights_markdown(report, limit), consistency_markdown(report))
}

pub fn prune_markdown(outcome: &PruneOutcome) -> String {
    let mut out = format!("## Prune\n\nPolicy: {}\n\n", outcome.policy);
    let _ = writeln!(
        out,
        "Retained {} criteria and {} alternatives; eliminated {} criteria and {} alternatives.\n",
        outcome.retained_criteria.len(),
        outcome.retained_alternatives.len(),
        outcome.eliminated_criteria.len(),
        outcome.eliminated_alternatives.len()
    );
    let list = |title: &str, names: &[String]| {
        let mut s = format!("### {title}\n\n");
        for n in names {
            let _ = writeln!(s, "- {n}");
        }
        s.push('\n');
        s
    };
    out.push_str(&list("Retained criteria", &outcome.retained_criteria));
    out.push_str(&list("Retained alternatives", &outcome.retained_alternatives));
    let header = ["Eliminated", "Kind", "Weight"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = outcome
        .eliminated_criteria
        .iter()
        .map(|e| (e, "criterion"))
        .chain(outcome.eliminated_alternatives.iter().map(|e| (e, "alternative")))
        .map(|(e, k)| vec![e.name.clone(), k.to_string(), pct(e.weight)])
        .collect();
    if !rows.is_empty() {
        out.push_str(&md_table(&header, 2, &rows));
    }
    out
}

pub fn prune_csv(outcome: &PruneOutcome) -> String {
    let header = ["name", "kind", "status", "pre_prune_weight"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for n in &outcome.retained_criteria {
        rows.push(vec![n.clone(), "criterion".into(), "retained".into(), String::new()]);
    }
    for n in &outcome.retained_alternatives {
        rows.push(vec![n.clone(), "alternative".into(), "retained".into(), String::new()]);
    }
    for e in &outcome.eliminated_criteria {
        rows.push(vec![e.name.clone(), "criterion".into(), "eliminated".into(), e.weight.to_string()]);
    }
    for e in &outcome.eliminated_alternatives {
        rows.push(vec![e.name.clone(), "alternative".into(), "eliminated".into(), e.weight.to_string()]);
    }
    csv_string(std::iter::once(header).chain(rows))
}

pub fn delta_markdown(delta: &RankingDelta) -> String {
    let k = &delta.consistency;
    let mut out = format!(
        "## What-if on '{}'\n\nEdited matrix CR {:.4} ({}). Leader {}.\n\n",
        delta.context,
        k.cr,
        if k.pass { "PASS" } else { "FAIL" },
        if delta.leader_changed { "changed" } else { "unchanged" }
    );
    if delta.is_empty() {
        out.push_str("No alternative weight changed.\n");
        return out;
    }
    let header = ["Alternative", "Old rank", "New rank", "Old", "New", "Δ"].map(String::from).to_vec();
    let rank_of = |list: &[RankedAlternative], n: &str| {
        list.iter().find(|r| r.name == n).map_or(0, |r| r.rank).to_string()
    };
    let rows: Vec<Vec<String>> = delta
        .new_ranking
        .iter()
        .map(|r| {
            let change = delta.changes.iter().find(|c| c.alternative == r.name);
            let old = change.map_or(r.weight, |c| c.old);
            vec![
                r.name.clone(),
                rank_of(&delta.old_ranking, &r.name),
                r.rank.to_string(),
                pct(old),
                pct(r.weight),
                format!("{:+.2}pp", (r.weight - old) * 100.0),
            ]
        })
        .collect();
    out.push_str(&md_table(&header, 1, &rows));
    out
}

pub fn delta_csv(delta: &RankingDelta) -> String {
    let header = ["alternative", "old_rank", "new_rank", "old", "new", "delta"].map(String::from).to_vec();
    let rows = delta.new_ranking.iter().map(|r| {
        let old_rank = delta.old_ranking.iter().find(|o| o.name == r.name).map_or(0, |o| o.rank);
        let old = delta.old_ranking.iter().find(|o| o.name == r.name).map_or(r.weight, |o| o.weight);
        vec![
            r.name.clone(),
            old_rank.to_string(),
            r.rank.to_string(),
            old.to_string(),
            r.weight.to_string(),
            (r.weight - old).to_string(),
        ]
    });
    csv_string(std::iter::once(header).chain(rows))
}

pub fn gaps_markdown(report: &GapReport) -> String {
    let mut out = format!(
        "## Strategy gaps\n\n{} of {} strategies have no DfX available.\n\n",
        report.gap_count, report.total_strategies
    );
    for p in &report.by_phase {
        let _ = writeln!(out, "### {} ({})\n", p.phase, p.strategies.len());
        for s in &p.strategies {
            let mark = if report.best_effort.contains(s) { " (phase: best-effort)" } else { "" };
            let _ = writeln!(out, "- {s}{mark}");
        }
        out.push('\n');
    }
    out
}

pub fn gaps_csv(report: &GapReport) -> String {
    let header = ["phase", "strategy", "phase_best_effort"].map(String::from).to_vec();
    let rows = report.by_phase.iter().flat_map(|p| {
        p.strategies.iter().map(move |s| {
            vec![
                p.phase.to_string(),
                s.clone(),
                report.best_effort.contains(s).to_string(),
            ]
        })
    });
    csv_string(std::iter::once(header).chain(rows))
}

pub fn validation_markdown(report: &ValidationReport) -> String {
    let header = ["Check", "Expected", "Actual", "Tolerance", "Status"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.check.clone(),
                format!("{:.1}", c.expected),
                format!("{:.1}", c.actual),
                if c.tolerance > 0.0 { format!("±{}", c.tolerance) } else { "< expected".into() },
                if c.pass { "PASS" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    let mut out = format!(
        "## Published weight validation\n\n{} checks, {} violations.\n\n",
        report.checks.len(),
        report.violations().len()
    );
    out.push_str(&md_table(&header, 1, &rows));
    out
}

pub fn validation_csv(report: &ValidationReport) -> String {
    let header = ["check", "expected", "actual", "tolerance", "pass"].map(String::from).to_vec();
    let rows = report.checks.iter().map(|c| {
        vec![
            c.check.clone(),
            c.expected.to_string(),
            c.actual.to_string(),
            c.tolerance.to_string(),
            c.pass.to_string(),
        ]
    });
    csv_string(std::iter::once(header).chain(rows))
}

pub fn catalog_markdown(entries: &[&DfxEntry]) -> String {
    let header = ["DfX", "Goals", "Scope", "Character", "Focus", "References"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|d| {
            vec![
                d.name.clone(),
                d.goals.join("; "),
                d.scope.to_string(),
                d.character.to_string(),
                d.focus.to_string(),
                d.references.join("; "),
            ]
        })
        .collect();
    let mut out = format!("## DfX catalog ({} entries)\n\n", entries.len());
    out.push_str(&md_table(&header, usize::MAX, &rows));
    out
}

pub fn catalog_csv(entries: &[&DfxEntry]) -> String {
    let header = ["name", "goals", "scope", "character", "focus", "references"].map(String::from).to_vec();
    let rows = entries.iter().map(|d| {
        vec![
            d.name.clone(),
            d.goals.join("; "),
            d.scope.to_string(),
            d.character.to_string(),
            d.focus.to_string(),
            d.references.join("; "),
        ]
    });
    csv_string(std::iter::once(header).chain(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::solve;
    use crate::presets::load_bundled;
    use crate::EngineOptions;

    fn demo() -> SolveReport {
        let m = load_bundled("demo").unwrap().model().unwrap();
        let s = solve(&m, &EngineOptions::default()).unwrap();
        SolveReport::new(&m, &s)
    }

    #[test]
    fn breakdown_csv_shape() {
        let r = demo();
        let text = breakdown_csv(&r.weights);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rd.headers().unwrap().len(), 2 + r.weights.leaf_criteria.len());
        let mut total = 0.0;
        for rec in rd.records() {
            let rec = rec.unwrap();
            let vals: Vec<f64> = rec.iter().skip(1).map(|v| v.parse().unwrap()).collect();
            let (parts, overall) = vals.split_at(vals.len() - 1);
            assert!((parts.iter().sum::<f64>() - overall[0]).abs() < 1e-12);
            total += overall[0];
        }
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn markdown_layout() {
        let r = demo();
        let md = weights_markdown(&r, None);
        let lines: Vec<&str> = md.lines().filter(|l| l.starts_with('|')).collect();
        assert!(lines[2].starts_with("| OVERALL |"));
        assert!(lines[2].ends_with("| 100.0% |"));
        assert!(lines.last().unwrap().starts_with("| CONSISTENCY |"));
        assert_eq!(lines.len(), 2 + 1 + 4 + 1);
        let first = lines[3];
        assert!(first.contains(&r.ranking[0].name));
        let pcts: Vec<f64> = lines[3..7]
            .iter()
            .map(|l| l.trim_end_matches(" |").rsplit("| ").next().unwrap().trim_end_matches('%').parse().unwrap())
            .collect();
        assert!((pcts.iter().sum::<f64>() - 100.0).abs() <= 0.1 + 1e-9);
        assert!(consistency_markdown(&r).contains("PASS"));
    }

    #[test]
    fn consistency_summary() {
        let r = demo();
        let (per, all) = r.consistency_by_top_criterion();
        assert_eq!(per.len(), 3);
        let max = r.contexts.iter().map(|c| c.consistency.cr).fold(0.0, f64::max);
        assert_eq!(all, max);
        assert!(per.iter().all(|&c| c <= all));
    }

    #[test]
    fn json_round_trip() {
        let r = demo();
        let text = serde_json::to_string(&r).unwrap();
        let back: SolveReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn pct_rounding() {
        assert_eq!(pct(0.12549), "12.5%");
        assert_eq!(pct(1.0), "100.0%");
    }
}
