//! Core of the PTaCL policy language: the three-valued logic kernel, target
//! and policy evaluation, monotonicity analysis and the textual syntax.
pub mod analysis;
pub mod budget;
pub mod generate;
pub mod logic3;
pub mod policies;
pub mod syntax;
pub mod targets;

pub use analysis::{
    check_monotonic_semantic, classify_policy_guarantee, classify_target, find_hiding_attacks,
    sample_hiding_attacks, sample_monotonic, AnalysisError, Guarantee, GuaranteeClass,
    HidingWitness, MonotonicityClass, MonotonicityKind, SubRequestMode, Verdict,
};
pub use logic3::TriValue;
pub use policies::{
    desugar_policy, eval_policy, eval_policy_traced, resolve, AccessDecision, CombineMode,
    DecisionOp, DecisionSet, Policy, TraceNode,
};
pub use syntax::{
    parse_policy, parse_request, parse_target, print_policy, print_request, print_target,
    ParseError, SourceSpan,
};
pub use budget::{BudgetExceeded, DEFAULT_LIMIT};
pub use targets::{eval_target, AttributeName, AttributeValue, Request, Target};
