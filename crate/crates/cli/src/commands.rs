use std::io::Write;
use std::path::Path;

use dfx_ahp::catalog::{gap_report, load_catalog, validate_published_weights, DfxEntry, DfxFilter, KnowledgeBase};
use dfx_ahp::engine::{prune, rerun_after_prune, PrunePolicy};
use dfx_ahp::hierarchy::{Completion, JudgmentRecord};
use dfx_ahp::presets::list_bundled;
use dfx_ahp::priority::RandomIndex;
use dfx_ahp::report::{self, SolveReport};
use dfx_ahp::{solve, EngineOptions, SolvedModel};
use dfx_ahp_client::Client;
use serde_json::json;

use crate::args::{Command, Global, OutputFormat};
use crate::error::{CliError, EXIT_INCONSISTENT, EXIT_INVALID, EXIT_OK};
use crate::input::Input;

pub fn engine_options(g: &Global) -> EngineOptions {
    EngineOptions {
        random_index: g.seed.map(RandomIndex::with_seed).unwrap_or_default(),
        completion: if g.lenient {
            Completion::Lenient
        } else {
            Completion::Strict
        },
        ..EngineOptions::default()
    }
}

fn knowledge_base(g: &Global) -> Result<KnowledgeBase, CliError> {
    match &g.data_dir {
        Some(dir) => Ok(load_catalog(dir)?),
        None => Ok(KnowledgeBase::bundled()),
    }
}

fn emit(g: &Global, content: &str) -> Result<(), CliError> {
    match &g.out {
        Some(path) => std::fs::write(path, content).map_err(|e| CliError::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn render_solve(format: OutputFormat, report: &SolveReport, top: Option<usize>) -> String {
    match format {
        OutputFormat::Markdown => report::solve_markdown(report, top),
        OutputFormat::Csv => format!(
            "{}\n{}",
            report::breakdown_csv(&report.weights),
            report::consistency_csv(report)
        ),
        OutputFormat::Json => to_json(report),
    }
}

/// Exit status for a solved report, with the failing contexts on stderr.
fn gate(g: &Global, reports: &[&SolveReport]) -> u8 {
    let failing: Vec<_> = reports
        .iter()
        .flat_map(|r| r.contexts.iter())
        .filter(|c| !c.consistency.pass)
        .collect();
    if failing.is_empty() {
        return EXIT_OK;
    }
    for c in &failing {
        eprintln!("inconsistent: context '{}' has CR {:.4} (limit 0.10)", c.context, c.consistency.cr);
    }
    if g.allow_inconsistent {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    }
}

fn runtime() -> Result<tokio::runtime::Runtime, CliError> {
    tokio::runtime::Runtime::new().map_err(|e| CliError::io("<runtime>", e))
}

fn remote(g: &Global) -> Result<Option<(Client, tokio::runtime::Runtime)>, CliError> {
    g.server
        .as_deref()
        .map(|url| Ok((Client::new(url)?, runtime()?)))
        .transpose()
}

fn load_input(g: &Global, input: Option<&Path>) -> Result<Input, CliError> {
    let input = Input::load(input, g.preset.as_deref())?;
    if let Some(notice) = input.notice() {
        eprintln!("{notice}");
    }
    Ok(input)
}

pub fn run(g: &Global, command: Command) -> Result<u8, CliError> {
    match command {
        Command::Solve { input, top } => {
            let input = load_input(g, input.input.as_deref())?;
            let report = match remote(g)? {
                Some((client, rt)) => rt.block_on(async {
                    let created = client.create_session(&input.session_request()).await?;
                    Ok::<_, CliError>(client.results(&created.meta.id).await?.report)
                })?,
                None => {
                    let solution = solve(&input.model, &engine_options(g)).map_err(|e| input.explain(e))?;
                    SolveReport::new(&input.model, &solution)
                }
            };
            emit(g, &render_solve(g.format, &report, top))?;
            Ok(gate(g, &[&report]))
        }
        Command::Prune {
            input,
            keep_criteria,
            keep_alternatives,
        } => {
            if g.server.is_some() {
                return Err(CliError::Usage("prune runs locally; drop --server".into()));
            }
            let input = load_input(g, input.input.as_deref())?;
            let options = engine_options(g);
            let solution = solve(&input.model, &options).map_err(|e| input.explain(e))?;
            let policy = if !keep_criteria.is_empty() || !keep_alternatives.is_empty() {
                PrunePolicy::Explicit {
                    criteria_layer: 0,
                    criteria: (!keep_criteria.is_empty()).then_some(keep_criteria),
                    alternatives: (!keep_alternatives.is_empty()).then_some(keep_alternatives),
                }
            } else if let Some(theta) = g.theta {
                PrunePolicy::threshold(theta)
            } else {
                input.prune_policy().cloned().unwrap_or_default()
            };
            let outcome = prune(&solution.weights, &policy).map_err(|e| input.explain(e.into()))?;
            let (model, rerun) = rerun_after_prune(&input.model, &outcome, &options).map_err(|e| input.explain(e))?;
            let initial = SolveReport::new(&input.model, &solution);
            let rerun = SolveReport::new(&model, &rerun);
            let text = match g.format {
                OutputFormat::Markdown => format!(
                    "# {}\n\n{}\n## Re-run\n\n{}",
                    initial.goal,
                    report::prune_markdown(&outcome),
                    report::solve_markdown(&rerun, None).trim_start_matches(&format!("# {}\n\n", rerun.goal))
                ),
                OutputFormat::Csv => format!(
                    "{}\n{}",
                    report::prune_csv(&outcome),
                    report::breakdown_csv(&rerun.weights)
                ),
                OutputFormat::Json => to_json(&json!({ "initial": initial, "prune": outcome, "rerun": rerun })),
            };
            emit(g, &text)?;
            Ok(gate(g, &[&initial, &rerun]))
        }
        Command::Whatif {
            input,
            context,
            row,
            col,
            grade,
            inverted,
        } => {
            let input = load_input(g, input.input.as_deref())?;
            let edit = JudgmentRecord {
                context,
                row,
                col,
                grade,
                inverted,
            };
            let delta = match remote(g)? {
                Some((client, rt)) => rt.block_on(async {
                    let created = client.create_session(&input.session_request()).await?;
                    Ok::<_, CliError>(client.what_if(&created.meta.id, edit).await?.delta)
                })?,
                None => SolvedModel::solve(input.model.clone(), engine_options(g))
                    .and_then(|s| s.what_if(&edit))
                    .map_err(|e| input.explain(e))?,
            };
            let text = match g.format {
                OutputFormat::Markdown => report::delta_markdown(&delta),
                OutputFormat::Csv => report::delta_csv(&delta),
                OutputFormat::Json => to_json(&delta),
            };
            emit(g, &text)?;
            Ok(if delta.consistency.pass || g.allow_inconsistent {
                EXIT_OK
            } else {
                eprintln!(
                    "inconsistent: the edit leaves '{}' at CR {:.4}",
                    delta.context, delta.consistency.cr
                );
                EXIT_INCONSISTENT
            })
        }
        Command::Gaps => {
            let gaps = match remote(g)? {
                Some((client, rt)) => rt.block_on(client.gaps())?,
                None => gap_report(&knowledge_base(g)?),
            };
            let text = match g.format {
                OutputFormat::Markdown => report::gaps_markdown(&gaps),
                OutputFormat::Csv => report::gaps_csv(&gaps),
                OutputFormat::Json => to_json(&gaps),
            };
            emit(g, &text)?;
            Ok(EXIT_OK)
        }
        Command::Catalog {
            name,
            scope,
            character,
            focus,
            goal,
        } => {
            let pairs: Vec<(&str, String)> = [
                ("name", name),
                ("scope", scope),
                ("character", character),
                ("focus", focus),
                ("goal", goal),
            ]
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .collect();
            let entries: Vec<DfxEntry> = match remote(g)? {
                Some((client, rt)) => {
                    let borrowed: Vec<(&str, &str)> = pairs.iter().map(|(k, v)| (*k, v.as_str())).collect();
                    rt.block_on(client.catalog(&borrowed))?.entries
                }
                None => {
                    let kb = knowledge_base(g)?;
                    kb.query(&DfxFilter::from_pairs(&pairs)?).into_iter().cloned().collect()
                }
            };
            let refs: Vec<&DfxEntry> = entries.iter().collect();
            let text = match g.format {
                OutputFormat::Markdown => report::catalog_markdown(&refs),
                OutputFormat::Csv => report::catalog_csv(&refs),
                OutputFormat::Json => to_json(&entries),
            };
            emit(g, &text)?;
            Ok(EXIT_OK)
        }
        Command::ValidateFig10 => {
            let kb = knowledge_base(g)?;
            let validation = validate_published_weights(&kb.published_weights);
            let text = match g.format {
                OutputFormat::Markdown => report::validation_markdown(&validation),
                OutputFormat::Csv => report::validation_csv(&validation),
                OutputFormat::Json => to_json(&validation),
            };
            emit(g, &text)?;
            let violations = validation.violations();
            for v in &violations {
                eprintln!(
                    "violation: {} expected {} got {} (tolerance {})",
                    v.check, v.expected, v.actual, v.tolerance
                );
            }
            Ok(if violations.is_empty() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Presets => {
            let presets = match remote(g)? {
                Some((client, rt)) => rt.block_on(client.presets())?,
                None => list_bundled(),
            };
            let text = match g.format {
                OutputFormat::Json => to_json(&presets),
                OutputFormat::Markdown => {
                    let mut s = String::from("| Preset | Title | Criteria | Alternatives | Illustrative |\n|---|---|---:|---:|---|\n");
                    for p in &presets {
                        s.push_str(&format!(
                            "| {} | {} | {} | {} | {} |\n",
                            p.name,
                            p.title,
                            p.criteria,
                            p.alternatives,
                            if p.illustrative { "yes" } else { "no" }
                        ));
                    }
                    s
                }
                OutputFormat::Csv => {
                    let mut s = String::from("name,criteria,alternatives,illustrative\n");
                    for p in &presets {
                        s.push_str(&format!("{},{},{},{}\n", p.name, p.criteria, p.alternatives, p.illustrative));
                    }
                    s
                }
            };
            emit(g, &text)?;
            Ok(EXIT_OK)
        }
        Command::Serve { addr, journal } => serve(g, &addr, journal.as_deref()),
    }
}

fn serve(g: &Global, addr: &str, journal: Option<&Path>) -> Result<u8, CliError> {
    use dfx_ahp_service::{AppState, Journal, SessionStore};
    let options = engine_options(g);
    let store = match journal {
        Some(path) => {
            let j = Journal::open(path).map_err(|e| CliError::io(path, e))?;
            SessionStore::with_journal(j, &options).map_err(|e| CliError::io(path, e))?
        }
        None => SessionStore::in_memory(),
    };
    let state = AppState::new(knowledge_base(g)?, store, options);
    runtime()?.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| CliError::io(addr, e))?;
        eprintln!("listening on http://{}", listener.local_addr().map_err(|e| CliError::io(addr, e))?);
        dfx_ahp_service::serve(listener, state).await.map_err(|e| CliError::io(addr, e))
    })?;
    Ok(EXIT_OK)
}
