//! Maps model errors back to a line in the input document.

use dfx_ahp::hierarchy::{HierarchyDocument, JudgmentRecord, ModelError};

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Line of each object in the top-level `judgments` array, in order.
fn judgment_lines(text: &str) -> Vec<usize> {
    let Some(key) = text.find("\"judgments\"") else {
        return Vec::new();
    };
    let Some(open) = text[key..].find('[').map(|i| key + i) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, b) in text.bytes().enumerate().skip(open + 1) {
        if in_string {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' | b'[' => {
                if depth == 0 && b == b'{' {
                    out.push(line_at(text, i));
                }
                depth += 1;
            }
            b'}' => depth = depth.saturating_sub(1),
            b']' if depth == 0 => break,
            b']' => depth -= 1,
            _ => {}
        }
    }
    out
}

fn judgment_line(text: &str, doc: &HierarchyDocument, pick: impl Fn(&[usize]) -> Option<usize>, matches: impl Fn(&JudgmentRecord) -> bool) -> Option<usize> {
    let lines = judgment_lines(text);
    let hits: Vec<usize> = doc
        .judgments
        .iter()
        .enumerate()
        .filter(|(_, j)| matches(j))
        .filter_map(|(k, _)| lines.get(k).copied())
        .collect();
    pick(&hits)
}

/// Line of the `n`th occurrence of a quoted string.
fn string_line(text: &str, s: &str, n: usize) -> Option<usize> {
    let quoted = serde_json::to_string(s).ok()?;
    text.match_indices(&quoted).nth(n).map(|(i, _)| line_at(text, i))
}

pub fn anchor(text: &str, doc: Option<&HierarchyDocument>, err: &ModelError) -> Option<usize> {
    let first = |h: &[usize]| h.first().copied();
    match (err, doc) {
        (ModelError::ConflictingJudgment { context, row, col }, Some(doc)) => {
            let probe = JudgmentRecord {
                context: context.clone(),
                row: row.clone(),
                col: col.clone(),
                grade: 1,
                inverted: false,
            };
            judgment_line(text, doc, |h| h.get(1).or(h.first()).copied(), |j| j.same_cell(&probe))
        }
        (ModelError::MissingPair { context, .. } | ModelError::UnknownContext { context }, Some(doc)) => {
            judgment_line(text, doc, first, |j| &j.context == context)
        }
        (ModelError::UnknownNode { context, node } | ModelError::SelfComparison { context, node }, Some(doc)) => {
            judgment_line(text, doc, first, |j| &j.context == context && (&j.row == node || &j.col == node))
        }
        (ModelError::OutOfScale { grade }, Some(doc)) => judgment_line(text, doc, first, |j| j.grade == *grade),
        (ModelError::DuplicateName { name }, _) => string_line(text, name, 1).or_else(|| string_line(text, name, 0)),
        (ModelError::OrphanNode { node, .. }, _) => string_line(text, node, 0),
        (ModelError::EmptyLayer { layer }, _) => string_line(text, layer, 0),
        _ => None,
    }
}
