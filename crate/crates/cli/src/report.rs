//! Evaluation and analysis reports shared by the CLI and the service.

use std::fmt::Write as _;

use ptacl_core::analysis::{sample_monotonic, MonotonicityCounterexample, Outcome};
use ptacl_core::{
    check_monotonic_semantic, classify_policy_guarantee, classify_target, desugar_policy,
    eval_policy, eval_policy_traced, find_hiding_attacks, print_request, resolve,
    sample_hiding_attacks, AccessDecision, BudgetExceeded, DecisionSet, Guarantee, GuaranteeClass,
    HidingWitness, MonotonicityClass, MonotonicityKind, Policy, Request, SubRequestMode, Target,
    TraceNode, Verdict,
};
use serde::Serialize;

/// How brute-force procedures cover their search space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
pub enum Search {
    Exhaustive { limit: usize },
    /// Random sampling; a clean result proves nothing.
    Sampled { samples: usize, seed: u64 },
}

impl Search {
    fn describe(&self) -> String {
        match self {
            Search::Exhaustive { limit } => format!("exhaustive (limit 2^{limit})"),
            Search::Sampled { samples, seed } => {
                format!("sampled, NON-EXHAUSTIVE ({samples} samples, seed {seed})")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub decisions: DecisionSet,
    pub resolved: AccessDecision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceNode>,
}

pub fn evaluate(policy: &Policy, request: &Request, trace: bool) -> EvalReport {
    let decisions = eval_policy(policy, request);
    EvalReport {
        decisions,
        resolved: resolve(decisions),
        trace: trace.then(|| eval_policy_traced(policy, request)),
    }
}

impl EvalReport {
    pub fn render(&self, show_resolved: bool) -> String {
        let mut out = format!("decisions: {}\n", self.decisions);
        if show_resolved {
            writeln!(out, "resolved: {}", self.resolved).unwrap();
        }
        if let Some(trace) = &self.trace {
            out.push_str("trace:\n");
            render_trace(&mut out, trace, 1);
        }
        out
    }
}

fn render_trace(out: &mut String, node: &TraceNode, depth: usize) {
    let indent = "  ".repeat(depth);
    match &node.target_value {
        Some(v) => writeln!(out, "{indent}{} [{v}] => {}", node.label, node.decisions),
        None => writeln!(out, "{indent}{} => {}", node.label, node.decisions),
    }
    .unwrap();
    for child in &node.children {
        render_trace(out, child, depth + 1);
    }
}

fn indented_request(out: &mut String, q: &Request, indent: &str) {
    if q.is_empty() {
        writeln!(out, "{indent}(empty)").unwrap();
    }
    for line in print_request(q).lines() {
        writeln!(out, "{indent}{line}").unwrap();
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub target: String,
    pub kind: MonotonicityKind,
    pub mode: SubRequestMode,
    #[serde(flatten)]
    pub counterexample: MonotonicityCounterexample,
}

fn findings(target: &Target, mode: SubRequestMode, search: Search) -> Result<Vec<Finding>, BudgetExceeded> {
    let mut found = Vec::new();
    for kind in [MonotonicityKind::Strong, MonotonicityKind::Weak] {
        let verdict = match search {
            Search::Exhaustive { limit } => check_monotonic_semantic(target, kind, mode, limit)?,
            Search::Sampled { samples, seed } => sample_monotonic(target, kind, mode, samples, seed)?,
        };
        if let Verdict::Counterexample(counterexample) = verdict {
            found.push(Finding {
                target: target.to_string(),
                kind,
                mode,
                counterexample,
            });
        }
    }
    Ok(found)
}

fn render_findings(out: &mut String, found: &[Finding]) {
    for f in found {
        let kind = match f.kind {
            MonotonicityKind::Strong => "strong",
            MonotonicityKind::Weak => "weak",
        };
        let c = &f.counterexample;
        writeln!(
            out,
            "counterexample ({kind}, {}): {} gives {} but a sub-request gives {}",
            f.mode,
            f.target,
            c.full.symbol('T'),
            c.reduced.symbol('T')
        )
        .unwrap();
        out.push_str("  request:\n");
        indented_request(out, &c.request, "    ");
        out.push_str("  sub-request:\n");
        indented_request(out, &c.sub_request, "    ");
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetReport {
    pub class: MonotonicityClass,
    pub search: Search,
    pub counterexamples: Vec<Finding>,
}

/// Syntactic classification plus semantic strong and weak checks in `mode`.
pub fn analyze_target(target: &Target, mode: SubRequestMode, search: Search) -> Result<TargetReport, BudgetExceeded> {
    Ok(TargetReport {
        class: classify_target(target),
        search,
        counterexamples: findings(target, mode, search)?,
    })
}

impl TargetReport {
    pub fn render(&self) -> String {
        let c = &self.class;
        let mut out = format!(
            "strong(AON): {}\nstrong: {}\nweak: {}\n",
            yes_no(c.strong_under_all_or_nothing),
            yes_no(c.strong),
            yes_no(c.weak)
        );
        for note in &c.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        writeln!(out, "search: {}", self.search.describe()).unwrap();
        render_findings(&mut out, &self.counterexamples);
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicyReport {
    pub class: GuaranteeClass,
    pub guarantee: Guarantee,
    pub search: Search,
    /// Semantic counterexamples for the targets of the desugared policy.
    pub counterexamples: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<HidingWitness>>,
}

/// Guarantee classification, semantic checks of every target, and a hiding
/// search on `request` when one is given.
pub fn analyze_policy(
    policy: &Policy,
    mode: SubRequestMode,
    request: Option<&Request>,
    search: Search,
) -> Result<PolicyReport, BudgetExceeded> {
    let class = classify_policy_guarantee(policy, mode);
    let core = desugar_policy(policy);
    let mut targets: Vec<&Target> = core.targets();
    targets.sort_by_key(|t| t.to_string());
    targets.dedup();
    let mut counterexamples = Vec::new();
    for t in targets {
        counterexamples.extend(findings(t, mode, search)?);
    }
    let witnesses = request.map(|q| hiding_search(policy, q, mode, search)).transpose()?;
    Ok(PolicyReport {
        guarantee: class.strongest(),
        class,
        search,
        counterexamples,
        witnesses,
    })
}

impl PolicyReport {
    pub fn render(&self) -> String {
        let c = &self.class;
        let mut out = format!(
            "guarantee: {}\nset-inclusion ({}): {}\nconclusive-stable: {}\nallow-stable: {}\n",
            self.guarantee,
            c.mode,
            yes_no(c.set_inclusion),
            yes_no(c.conclusive_stable),
            yes_no(c.allow_stable)
        );
        for reason in &c.reasons {
            writeln!(out, "reason: {reason}").unwrap();
        }
        writeln!(out, "search: {}", self.search.describe()).unwrap();
        render_findings(&mut out, &self.counterexamples);
        if let Some(w) = &self.witnesses {
            render_witnesses(&mut out, w);
        }
        out
    }
}

fn hiding_search(
    policy: &Policy,
    request: &Request,
    mode: SubRequestMode,
    search: Search,
) -> Result<Vec<HidingWitness>, BudgetExceeded> {
    match search {
        Search::Exhaustive { limit } => find_hiding_attacks(policy, request, mode, limit),
        Search::Sampled { samples, seed } => sample_hiding_attacks(policy, request, mode, samples, seed),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HidingReport {
    pub mode: SubRequestMode,
    pub search: Search,
    pub original: EvalReport,
    pub witnesses: Vec<HidingWitness>,
}

pub fn hiding(policy: &Policy, request: &Request, mode: SubRequestMode, search: Search) -> Result<HidingReport, BudgetExceeded> {
    Ok(HidingReport {
        mode,
        search,
        original: evaluate(policy, request, false),
        witnesses: hiding_search(policy, request, mode, search)?,
    })
}

fn outcome(o: &Outcome) -> String {
    format!("{} => {}", o.decisions, o.resolved)
}

fn render_witnesses(out: &mut String, witnesses: &[HidingWitness]) {
    writeln!(out, "witnesses: {}", witnesses.len()).unwrap();
    for (i, w) in witnesses.iter().enumerate() {
        writeln!(
            out,
            "witness {}: hiding {} pair(s) turns {} into {}",
            i + 1,
            w.hidden.len(),
            outcome(&w.original_outcome),
            outcome(&w.reduced_outcome)
        )
        .unwrap();
        out.push_str("  hidden:\n");
        indented_request(out, &w.hidden, "    ");
        out.push_str("  reduced request:\n");
        indented_request(out, &w.reduced_request, "    ");
    }
}

impl HidingReport {
    pub fn render(&self) -> String {
        let mut out = format!(
            "mode: {}\nsearch: {}\noriginal: {} => {}\n",
            self.mode,
            self.search.describe(),
            self.original.decisions,
            self.original.resolved
        );
        render_witnesses(&mut out, &self.witnesses);
        out
    }
}
