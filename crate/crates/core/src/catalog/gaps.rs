use serde::{Deserialize, Serialize};

use super::{KnowledgeBase, Phase};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseGaps {
    pub phase: Phase,
    pub strategies: Vec<String>,
}

/// Strategies with no applicable DfX.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub total_strategies: usize,
    pub gap_count: usize,
    pub gaps: Vec<String>,
    /// A strategy marked in several phases appears under each of them.
    pub by_phase: Vec<PhaseGaps>,
    /// Gap strategies whose phase marks are a best-effort reading.
    pub best_effort: Vec<String>,
}

pub fn gap_report(kb: &KnowledgeBase) -> GapReport {
    let gaps: Vec<_> = kb.strategies.iter().filter(|s| s.gap).collect();
    let by_phase = Phase::ALL
        .iter()
        .map(|&phase| PhaseGaps {
            phase,
            strategies: gaps
                .iter()
                .filter(|s| s.phases.phases().contains(&phase))
                .map(|s| s.strategy.clone())
                .collect(),
        })
        .collect();
    GapReport {
        total_strategies: kb.strategies.len(),
        gap_count: gaps.len(),
        gaps: gaps.iter().map(|s| s.strategy.clone()).collect(),
        by_phase,
        best_effort: gaps
            .iter()
            .filter(|s| s.phase_best_effort)
            .map(|s| s.strategy.clone())
            .collect(),
    }
}
