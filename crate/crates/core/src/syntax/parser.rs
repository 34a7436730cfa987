use super::lexer::{lex, Tok, Token};
use super::{ParseError, SourceSpan, POLICY_KEYWORDS, TARGET_KEYWORDS};
use crate::policies::{DecisionOp, Policy};
use crate::targets::{AttributeName, AttributeValue, Request, Target};

pub(crate) struct Parser<'s> {
    src: &'s str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'s> Parser<'s> {
    pub(crate) fn new(src: &'s str) -> Result<Self, ParseError> {
        Ok(Parser {
            src,
            tokens: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn peek_word(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Word(w)) => Some(w),
            _ => None,
        }
    }

    fn span_here(&self) -> SourceSpan {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => SourceSpan::new(self.src.len(), self.src.len()),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".into(),
        };
        ParseError::new(
            self.span_here(),
            format!("unexpected {found}"),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_word() == Some(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected(&["end of input"])),
        }
    }

    /// A name or value: bare word or quoted string. Bare keywords are only
    /// accepted when `allow_keywords` is set.
    fn string_literal(&mut self, what: &str, allow_keywords: bool) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            Some(Tok::Word(w)) if allow_keywords || !is_keyword(&w) => {
                let span = self.bump().span;
                Ok((w, span))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn attribute_name(&mut self, allow_keywords: bool) -> Result<AttributeName, ParseError> {
        let (s, span) = self.string_literal("attribute name", allow_keywords)?;
        AttributeName::new(s).map_err(|e| ParseError::new(span, e.to_string(), vec![]))
    }

    fn attribute_value(&mut self) -> Result<AttributeValue, ParseError> {
        let (s, span) = self.string_literal("attribute value", true)?;
        AttributeValue::new(s).map_err(|e| ParseError::new(span, e.to_string(), vec![]))
    }

    pub(crate) fn target(&mut self) -> Result<Target, ParseError> {
        let mut lhs = self.and_target()?;
        while self.eat_keyword("or") {
            let rhs = self.and_target()?;
            lhs = Target::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_target(&mut self) -> Result<Target, ParseError> {
        let mut lhs = self.unary_target()?;
        while self.eat_keyword("and") {
            let rhs = self.unary_target()?;
            lhs = Target::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary_target(&mut self) -> Result<Target, ParseError> {
        if self.eat_keyword("opt") {
            return Ok(Target::opt(self.unary_target()?));
        }
        if self.eat_keyword("not") {
            return Ok(Target::not(self.unary_target()?));
        }
        self.atom_target()
    }

    fn atom_target(&mut self) -> Result<Target, ParseError> {
        const EXPECTED: &[&str] = &["`null`", "attribute name", "`(`", "`opt`", "`not`", "`sand`", "`wor`", "`sup`"];
        match self.peek().cloned() {
            Some(Tok::Word(w)) => match w.as_str() {
                "null" => {
                    self.pos += 1;
                    Ok(Target::Null)
                }
                "sand" | "wor" | "sup" => {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    let a = self.target()?;
                    self.expect(Tok::Comma)?;
                    let b = self.target()?;
                    self.expect(Tok::RParen)?;
                    Ok(match w.as_str() {
                        "sand" => Target::strong_and(a, b),
                        "wor" => Target::weak_or(a, b),
                        _ => Target::sup(a, b),
                    })
                }
                _ if self.at_match() => self.match_atom(),
                kw if is_keyword(kw) => Err(self.unexpected(EXPECTED)),
                _ => Ok(Target::Name(self.attribute_name(false)?)),
            },
            Some(Tok::Str(_)) if self.at_match() => self.match_atom(),
            Some(Tok::Str(_)) => Ok(Target::Name(self.attribute_name(false)?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.target()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected(EXPECTED)),
        }
    }

    fn at_match(&self) -> bool {
        matches!(self.peek_at(1), Some(Tok::Eq | Tok::CmpOp(_)))
    }

    /// `IDENT = VALUE`; names may be keywords here since `=` disambiguates.
    fn match_atom(&mut self) -> Result<Target, ParseError> {
        let name = self.attribute_name(true)?;
        if let Some(Tok::CmpOp(op)) = self.peek().cloned() {
            return Err(ParseError::new(
                self.span_here(),
                format!("unsupported predicate `{op}`: only `=` is supported"),
                vec!["`=`".into()],
            ));
        }
        self.expect(Tok::Eq)?;
        Ok(Target::Match(name, self.attribute_value()?))
    }

    pub(crate) fn policy(&mut self) -> Result<Policy, ParseError> {
        let first = self.unary_policy()?;
        let Some((op, op_span)) = self.binop() else {
            return Ok(first);
        };
        let mut operands = vec![first];
        loop {
            operands.push(self.unary_policy()?);
            match self.binop() {
                None => break,
                Some((next, span)) if next != op => {
                    return Err(ParseError::new(
                        span,
                        format!(
                            "cannot mix `{op}` (at byte {}) and `{next}` without parentheses",
                            op_span.start
                        ),
                        vec![format!("`{op}`"), "`)`".into(), "`}`".into()],
                    ));
                }
                Some(_) => {}
            }
        }
        Ok(if op == DecisionOp::AndP {
            let mut it = operands.into_iter();
            let first = it.next().expect("two operands");
            it.fold(first, Policy::and)
        } else {
            Policy::combined(Target::Null, op, operands).expect("at least two operands")
        })
    }

    fn binop(&mut self) -> Option<(DecisionOp, SourceSpan)> {
        let op = self.peek_word().and_then(DecisionOp::from_keyword)?;
        Some((op, self.bump().span))
    }

    fn unary_policy(&mut self) -> Result<Policy, ParseError> {
        if self.eat_keyword("not") {
            return Ok(Policy::not(self.unary_policy()?));
        }
        if self.eat_keyword("dbd") {
            return Ok(Policy::dbd(self.unary_policy()?));
        }
        if self.eat_keyword("abd") {
            return Ok(Policy::abd(self.unary_policy()?));
        }
        self.atom_policy()
    }

    fn atom_policy(&mut self) -> Result<Policy, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "allow" => {
                self.pos += 1;
                Ok(Policy::Allow)
            }
            Some(Tok::Word(w)) if w == "deny" => {
                self.pos += 1;
                Ok(Policy::Deny)
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let p = self.targeted_body()?;
                self.expect(Tok::RBrace)?;
                Ok(p)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                // `(target ? policy)` is accepted as an alternative to braces.
                let save = self.pos;
                let p = match self.target() {
                    Ok(_) if self.peek() == Some(&Tok::Question) => {
                        self.pos = save;
                        self.targeted_body()?
                    }
                    _ => {
                        self.pos = save;
                        self.policy()?
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => Err(self.unexpected(&["`allow`", "`deny`", "`not`", "`dbd`", "`abd`", "`{`", "`(`"])),
        }
    }

    /// `target ? policy` or `target ? BINOP [policy, …]`.
    fn targeted_body(&mut self) -> Result<Policy, ParseError> {
        let target = self.target()?;
        self.expect(Tok::Question)?;
        let combined_op = self
            .peek_word()
            .and_then(DecisionOp::from_keyword)
            .filter(|_| self.peek_at(1) == Some(&Tok::LBracket));
        if let Some(op) = combined_op {
            let op_span = self.bump().span;
            self.expect(Tok::LBracket)?;
            let mut children = vec![self.policy()?];
            while self.eat(&Tok::Comma) {
                children.push(self.policy()?);
            }
            self.expect(Tok::RBracket)?;
            return Policy::combined(target, op, children)
                .map_err(|e| ParseError::new(op_span, e.to_string(), vec!["`,`".into()]));
        }
        Ok(Policy::targeted(target, self.policy()?))
    }

    pub(crate) fn request(&mut self) -> Result<Request, ParseError> {
        let mut request = Request::new();
        // Pairs are line-oriented; check that each pair sits on one line.
        while self.peek().is_some() {
            let line_of = |span: SourceSpan| self.src[..span.start].matches('\n').count();
            let start = self.span_here();
            let name = self.attribute_name(true)?;
            self.expect(Tok::Eq)?;
            let value_span = self.span_here();
            let value = self.attribute_value()?;
            if line_of(start) != line_of(value_span) {
                return Err(ParseError::new(
                    value_span,
                    "a request pair must fit on one line",
                    vec!["attribute value".into()],
                ));
            }
            if let Some(t) = self.tokens.get(self.pos) {
                if line_of(t.span) == line_of(value_span) {
                    return Err(self.unexpected(&["end of line"]));
                }
            }
            request.insert(name, value);
        }
        Ok(request)
    }
}

pub(crate) fn is_keyword(word: &str) -> bool {
    TARGET_KEYWORDS.contains(&word) || POLICY_KEYWORDS.contains(&word)
}
