//! The full verification suite for one genus, grouped by topic.

use serde::Serialize;

use crate::construct::{build_all_q, GenusContext, HFamily};
use crate::derivations::DerivationTable;
use crate::error::ParseError;
use crate::fixtures::{golden_all, Finding, FixtureSet};
use crate::verify::{
    check_dual_construction, check_euler, check_grading, check_lemma33, check_q_structure, check_shape, CheckRecord,
};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub records: Vec<CheckRecord>,
}

impl SuiteResult {
    pub fn passed_count(&self) -> usize {
        self.records.iter().filter(|r| r.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.passed_count() == self.records.len()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suites: Vec<SuiteResult>,
    pub findings: Vec<Finding>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// ψ-product freeness and grading of every `𝓛_{2k}` and `w_{2k,j}`.
pub fn check_derivations(table: &DerivationTable) -> Vec<CheckRecord> {
    let g = table.genus;
    let mut out = Vec::new();
    for (k, l) in table.operators.iter().enumerate() {
        out.push(CheckRecord::new("grading", g, format!("Lcal_{}", 2 * k), l.is_homogeneous()));
    }
    for (&(two_k, j), w) in &table.w {
        let free = w.terms().all(|(m, _)| m.psi_degree() <= 1);
        out.push(CheckRecord::new("psi-product-free", g, format!("w_{two_k},{j}"), free));
        out.push(CheckRecord::new("grading", g, format!("w_{two_k},{j}"), w.is_homogeneous_of((two_k + j) as i64)));
    }
    out
}

/// Every check for `ctx`; the golden comparison runs when tables are given.
/// Fails only on malformed tables or an internal error, never on a failed check.
pub fn run_suite(ctx: &GenusContext, tables: Option<&FixtureSet>) -> Result<SuiteReport, ParseError> {
    let fam = HFamily::from_generating(ctx)?;
    let qs = build_all_q(ctx)?;
    let table = DerivationTable::from_family(&fam)?;
    let suite = |name, records| SuiteResult { name, records };
    let mut report = SuiteReport {
        suites: vec![
            suite("euler", check_euler(ctx)?),
            suite("lemma33", check_lemma33(ctx)?),
            suite("q-structure", check_q_structure(ctx, &qs)?),
            suite("dual-construction", check_dual_construction(ctx, &fam)?),
            suite("shape", check_shape(ctx, &fam)?),
            suite("grading", check_grading(ctx, &qs)?),
            suite("derivations", check_derivations(&table)),
        ],
        findings: Vec::new(),
    };
    if let Some(set) = tables {
        let golden = golden_all(ctx, set)?;
        report.suites.push(suite("golden", golden.records));
        report.findings = golden.findings;
    }
    Ok(report)
}
