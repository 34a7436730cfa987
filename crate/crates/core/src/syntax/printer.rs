use super::lexer::is_word_char;
use super::parser::is_keyword;
use crate::policies::{DecisionOp, Policy};
use crate::targets::{Request, Target};

pub(crate) fn literal(s: &str) -> String {
    if !s.is_empty() && s.chars().all(is_word_char) && !is_keyword(s) {
        return s.to_owned();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

// Target binding strength: or < and < unary < atom.
const T_OR: u8 = 1;
const T_AND: u8 = 2;
const T_UNARY: u8 = 3;

fn target_prec(t: &Target) -> u8 {
    match t {
        Target::Or(..) => T_OR,
        Target::And(..) => T_AND,
        Target::Opt(_) | Target::Not(_) => T_UNARY,
        _ => 4,
    }
}

pub(crate) fn write_target(out: &mut String, t: &Target, min_prec: u8) {
    let wrap = target_prec(t) < min_prec;
    if wrap {
        out.push('(');
    }
    match t {
        Target::Null => out.push_str("null"),
        Target::Name(n) => out.push_str(&literal(n.as_str())),
        Target::Match(n, v) => {
            out.push('(');
            out.push_str(&literal(n.as_str()));
            out.push_str(" = ");
            out.push_str(&literal(v.as_str()));
            out.push(')');
        }
        Target::Opt(inner) | Target::Not(inner) => {
            out.push_str(if matches!(t, Target::Opt(_)) { "opt " } else { "not " });
            write_target(out, inner, T_UNARY);
        }
        Target::Or(a, b) | Target::And(a, b) => {
            let (prec, kw) = if matches!(t, Target::Or(..)) {
                (T_OR, " or ")
            } else {
                (T_AND, " and ")
            };
            // left-associative: a same-operator chain may continue on the left only
            write_target(out, a, prec);
            out.push_str(kw);
            write_target(out, b, prec + 1);
        }
        Target::StrongAnd(a, b) | Target::WeakOr(a, b) | Target::Sup(a, b) => {
            out.push_str(match t {
                Target::StrongAnd(..) => "sand(",
                Target::WeakOr(..) => "wor(",
                _ => "sup(",
            });
            write_target(out, a, 0);
            out.push_str(", ");
            write_target(out, b, 0);
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

fn is_infix(p: &Policy) -> bool {
    match p {
        Policy::And(..) => true,
        Policy::Combined(c) => c.target() == &Target::Null && c.op() != DecisionOp::AndP,
        _ => false,
    }
}

/// Writes `p` where a unary-level policy is required.
fn write_operand(out: &mut String, p: &Policy) {
    if is_infix(p) {
        out.push('(');
        write_policy(out, p);
        out.push(')');
    } else {
        write_policy(out, p);
    }
}

pub(crate) fn write_policy(out: &mut String, p: &Policy) {
    match p {
        Policy::Allow => out.push_str("allow"),
        Policy::Deny => out.push_str("deny"),
        Policy::Not(inner) => {
            out.push_str("not ");
            write_operand(out, inner);
        }
        Policy::Dbd(inner) => {
            out.push_str("dbd ");
            write_operand(out, inner);
        }
        Policy::And(a, b) => {
            if matches!(**a, Policy::And(..)) {
                write_policy(out, a);
            } else {
                write_operand(out, a);
            }
            out.push_str(" and ");
            write_operand(out, b);
        }
        Policy::Targeted(t, inner) => {
            out.push('{');
            write_target(out, t, 0);
            out.push_str(" ? ");
            write_policy(out, inner);
            out.push('}');
        }
        Policy::Combined(c) if is_infix(p) => {
            for (i, child) in c.children().iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                    out.push_str(c.op().keyword());
                    out.push(' ');
                }
                write_operand(out, child);
            }
        }
        Policy::Combined(c) => {
            out.push('{');
            write_target(out, c.target(), 0);
            out.push_str(" ? ");
            out.push_str(c.op().keyword());
            out.push_str(" [");
            for (i, child) in c.children().iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_policy(out, child);
            }
            out.push_str("]}");
        }
    }
}

pub(crate) fn write_request(out: &mut String, r: &Request) {
    for (n, v) in r {
        out.push_str(&literal(n.as_str()));
        out.push_str(" = ");
        out.push_str(&literal(v.as_str()));
        out.push('\n');
    }
}
