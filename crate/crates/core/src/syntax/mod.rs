//! Textual syntax for targets (`.ptt`), policies (`.ptp`) and requests
//! (`.ptq`).
//!
//! ```text
//! target  := or_t
//! or_t    := and_t { "or" and_t }
//! and_t   := unary_t { "and" unary_t }
//! unary_t := "opt" unary_t | "not" unary_t | atom_t
//! atom_t  := "null" | IDENT | IDENT "=" VALUE | "(" target ")"
//!          | "sand" "(" target "," target ")"
//!          | "wor"  "(" target "," target ")"
//!          | "sup"  "(" target "," target ")"
//! policy  := unary_p { BINOP unary_p }
//! unary_p := "not" unary_p | "dbd" unary_p | "abd" unary_p | atom_p
//! atom_p  := "allow" | "deny" | "(" policy ")"
//!          | "{" target "?" policy "}" | "(" target "?" policy ")"
//!          | "{" target "?" BINOP "[" policy { "," policy } "]" "}"
//! BINOP   := "and" | "and_cup" | "or_cup" | "and_cap" | "or_cap" | "fa" | "la"
//! ```
//!
//! A chain of one binary policy operator associates left; different
//! operators may not be mixed without parentheses. `p and q` is the core
//! conjunction; any other operator chain `p1 op … op pk` becomes a combined
//! policy under `null`. `abd p` is read as `not dbd not p`.
//!
//! Identifiers and values are bare words or double-quoted strings with `\"`,
//! `\\`, `\n` and `\t` escapes; keywords must be quoted to be used as names.
//! `#` starts a comment. Requests are one `name = value` pair per line.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::Serialize;

use crate::policies::Policy;
use crate::targets::{Request, Target};

use parser::Parser;

pub(crate) const TARGET_KEYWORDS: &[&str] = &["null", "opt", "not", "and", "or", "sand", "wor", "sup"];
pub(crate) const POLICY_KEYWORDS: &[&str] = &[
    "allow", "deny", "not", "dbd", "abd", "and", "and_cup", "or_cup", "and_cap", "or_cap", "fa", "la",
];

/// Byte range into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    /// 1-based line and column of `start`.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        let before = &src[..self.start.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: impl Into<String>, expected: Vec<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected,
        }
    }

    /// `line:col: message` followed by the offending line and a caret.
    pub fn render(&self, src: &str) -> String {
        let (line, col) = self.span.line_col(src);
        let text = src.lines().nth(line - 1).unwrap_or("");
        let width = src
            .get(self.span.start..self.span.end)
            .map_or(1, |s| s.chars().count().max(1));
        format!(
            "{line}:{col}: {self}\n  {text}\n  {}{}",
            " ".repeat(col - 1),
            "^".repeat(width)
        )
    }
}

impl std::error::Error for ParseError {}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

pub fn parse_target(text: &str) -> Result<Target, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.target()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_policy(text: &str) -> Result<Policy, ParseError> {
    let mut p = Parser::new(text)?;
    let policy = p.policy()?;
    p.finish()?;
    Ok(policy)
}

pub fn parse_request(text: &str) -> Result<Request, ParseError> {
    Parser::new(text)?.request()
}

pub fn print_target(t: &Target) -> String {
    let mut out = String::new();
    printer::write_target(&mut out, t, 0);
    out
}

pub fn print_policy(p: &Policy) -> String {
    let mut out = String::new();
    printer::write_policy(&mut out, p);
    out
}

pub fn print_request(r: &Request) -> String {
    let mut out = String::new();
    printer::write_request(&mut out, r);
    out
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_target(self))
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_policy(self))
    }
}

impl fmt::Display for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_request(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::DecisionOp;

    #[test]
    fn null_and_precedence() {
        assert_eq!(parse_target("null").unwrap(), Target::Null);
        assert_eq!(print_target(&Target::Null), "null");
        assert_eq!(
            parse_target("opt a and b").unwrap(),
            Target::and(Target::opt(Target::name("a")), Target::name("b"))
        );
        assert_eq!(
            parse_target("a or b and c").unwrap(),
            Target::or(Target::name("a"), Target::and(Target::name("b"), Target::name("c")))
        );
    }

    #[test]
    fn and_chain_prints_without_parens() {
        let t = Target::and(Target::and(Target::name("a"), Target::name("b")), Target::name("c"));
        assert_eq!(print_target(&t), "a and b and c");
        let t = Target::and(Target::name("a"), Target::and(Target::name("b"), Target::name("c")));
        assert_eq!(print_target(&t), "a and (b and c)");
    }

    #[test]
    fn acl_interface_target() {
        let t = parse_target("opt (object = test.txt and subject and action)").unwrap();
        let expected = Target::opt(Target::and(
            Target::and(Target::matching("object", "test.txt"), Target::name("subject")),
            Target::name("action"),
        ));
        assert_eq!(t, expected);
    }

    #[test]
    fn unsupported_predicate() {
        let err = parse_target("(age < 18)").unwrap_err();
        assert!(err.message.contains("unsupported predicate"), "{err}");
        assert_eq!(err.span, SourceSpan::new(5, 6));
    }

    #[test]
    fn errors_carry_spans_and_expectations() {
        let src = "{ (a = 1) ? allow";
        let err = parse_policy(src).unwrap_err();
        assert_eq!(err.span, SourceSpan::new(src.len(), src.len()));
        assert!(err.expected.contains(&"`}`".to_string()));
        assert!(err.render(src).starts_with("1:18:"));
    }

    #[test]
    fn mixing_operators_requires_parens() {
        let err = parse_policy("allow and_cup deny or_cup allow").unwrap_err();
        assert!(err.message.contains("cannot mix"));
        assert!(parse_policy("(allow and_cup deny) or_cup allow").is_ok());
    }

    #[test]
    fn keywords_need_quotes() {
        assert!(parse_target("allow").is_err());
        assert!(parse_target("or").is_err());
        let t = Target::name("or");
        assert_eq!(print_target(&t), "\"or\"");
        assert_eq!(parse_target("\"or\"").unwrap(), t);
    }

    #[test]
    fn chinese_wall_text() {
        let src = "{ (confidential = true) ? ((employer = A) ? allow) and_cup ((employer = B) ? deny) } and_cup allow";
        let inner = Policy::combined(
            Target::Null,
            DecisionOp::AndCup,
            vec![
                Policy::targeted(Target::matching("employer", "A"), Policy::Allow),
                Policy::targeted(Target::matching("employer", "B"), Policy::Deny),
            ],
        )
        .unwrap();
        let expected = Policy::combined(
            Target::Null,
            DecisionOp::AndCup,
            vec![Policy::targeted(Target::matching("confidential", "true"), inner), Policy::Allow],
        )
        .unwrap();
        let parsed = parse_policy(src).unwrap();
        assert_eq!(parsed, expected);
        assert_eq!(parse_policy(&print_policy(&parsed)).unwrap(), parsed);
    }

    #[test]
    fn combined_bracket_form() {
        let p = parse_policy("{ role ? fa [ {(role = a) ? allow}, deny, allow ] }").unwrap();
        let Policy::Combined(c) = &p else { panic!() };
        assert_eq!(c.op(), DecisionOp::FirstApplicable);
        assert_eq!(c.children().len(), 3);
        assert!(parse_policy("{ null ? fa [ allow ] }").is_err());
        assert_eq!(print_policy(&p), "{role ? fa [{(role = a) ? allow}, deny, allow]}");
    }

    #[test]
    fn requests() {
        let q = parse_request("# comment\nemployer = A\n\nemployer = B\nemployer = A\n\"full name\" = \"x y\"\n").unwrap();
        assert_eq!(q.len(), 3);
        assert!(q.contains("full name", "x y"));
        assert_eq!(parse_request(&print_request(&q)).unwrap(), q);
        assert!(parse_request("a = 1 b = 2").is_err());
        assert!(parse_request("a =\n1").is_err());
        assert!(parse_request("a = \"\"").is_err());
    }
}
