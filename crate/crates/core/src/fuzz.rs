//! Seeded fuzzing of the simulation checks over generated terms.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gen::{gen_sample, GenConfig, GenError};
use crate::ipc::{is_head_step, redexes};
use crate::rule::{RuleId, RuleSet};
use crate::sim::{check_simulation_with, is_strict, SimOptions, SimReport, SimVerdict};

pub const DEFAULT_MAX_REDEXES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub samples: u64,
    pub max_redexes_per_term: usize,
    pub generator: GenConfig,
    pub simulation: SimOptions,
}

impl FuzzConfig {
    pub fn new(seed: u64, samples: u64) -> FuzzConfig {
        FuzzConfig {
            samples,
            max_redexes_per_term: DEFAULT_MAX_REDEXES,
            generator: GenConfig::with_seed(seed),
            simulation: SimOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCounts {
    pub checked: u64,
    pub identity: u64,
    pub reached: u64,
    pub joined: u64,
    pub failed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeadCounts {
    pub checked: u64,
    pub strict: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub terms_generated: u64,
    pub generation_failures: u64,
    pub counts: BTreeMap<RuleId, RuleCounts>,
    pub head_strictness: HeadCounts,
    pub failures: Vec<SimReport>,
    pub head_failures: Vec<SimReport>,
}

impl FuzzReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.head_failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Everything checked for one generated term.
#[derive(Clone, Debug)]
pub struct SampleResult {
    pub index: u64,
    pub reports: Vec<SimReport>,
    /// One entry per head β redex: its report is also in `reports`.
    pub head: Vec<usize>,
}

/// Generate sample `index` and check up to the configured number of its
/// redexes. `Err` when no term could be generated.
pub fn run_sample(cfg: &FuzzConfig, index: u64) -> Result<SampleResult, GenError> {
    let (ctx, _, t) = gen_sample(&cfg.generator, index)?;
    let mut reports = Vec::new();
    let mut head = Vec::new();
    for (pos, rule) in redexes(&t, RuleSet::ipc_all()).into_iter().take(cfg.max_redexes_per_term) {
        if rule.is_ipc_beta() && is_head_step(&t, &pos, rule) {
            head.push(reports.len());
        }
        reports.push(check_simulation_with(&t, &ctx, &pos, rule, &cfg.simulation));
    }
    Ok(SampleResult { index, reports, head })
}

/// Run every sample, in parallel, and merge the results by sample index.
pub fn fuzz(cfg: &FuzzConfig) -> FuzzReport {
    let results: Vec<Result<SampleResult, GenError>> =
        (0..cfg.samples).into_par_iter().map(|i| run_sample(cfg, i)).collect();
    let mut report = FuzzReport {
        config: cfg.clone(),
        terms_generated: 0,
        generation_failures: 0,
        counts: RuleId::IPC.iter().map(|r| (*r, RuleCounts::default())).collect(),
        head_strictness: HeadCounts::default(),
        failures: Vec::new(),
        head_failures: Vec::new(),
    };
    for result in results {
        let Ok(sample) = result else {
            report.generation_failures += 1;
            continue;
        };
        report.terms_generated += 1;
        for r in &sample.reports {
            let c = report.counts.entry(r.rule).or_default();
            c.checked += 1;
            match r.verdict {
                SimVerdict::SyntacticIdentity => c.identity += 1,
                SimVerdict::ReachedIn { .. } => c.reached += 1,
                SimVerdict::JoinedAtNormalForm => c.joined += 1,
                SimVerdict::Failed { .. } => {
                    c.failed += 1;
                    report.failures.push(r.clone());
                }
            }
        }
        for &i in &sample.head {
            let r = &sample.reports[i];
            report.head_strictness.checked += 1;
            if is_strict(r) {
                report.head_strictness.strict += 1;
            } else {
                report.head_failures.push(r.clone());
            }
        }
    }
    report
}
