use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Bare word; may be a keyword depending on position.
    Word(String),
    /// Double-quoted string, never a keyword.
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Question,
    /// Any other comparison operator. Only reachable in the reserved
    /// predicate slot of an atomic target.
    CmpOp(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Question => "`?`".into(),
            Tok::CmpOp(op) => format!("`{op}`"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || "_.-:/@+*$%&'".contains(c)
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        let single = |tok| Token {
            tok,
            span: SourceSpan::new(start, start + c.len_utf8()),
        };
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' | ')' | '{' | '}' | '[' | ']' | ',' | '?' => {
                chars.next();
                tokens.push(single(match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    _ => Tok::Question,
                }));
            }
            '=' | '<' | '>' | '!' | '~' => {
                let mut op = String::new();
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !"=<>!~".contains(c) {
                        break;
                    }
                    op.push(c);
                    end = i + c.len_utf8();
                    chars.next();
                }
                let tok = if op == "=" { Tok::Eq } else { Tok::CmpOp(op) };
                tokens.push(Token {
                    tok,
                    span: SourceSpan::new(start, end),
                });
            }
            '"' => {
                chars.next();
                let mut value = String::new();
                let mut end = None;
                while let Some((i, c)) = chars.next() {
                    match c {
                        '"' => {
                            end = Some(i + 1);
                            break;
                        }
                        '\\' => match chars.next() {
                            Some((_, 'n')) => value.push('\n'),
                            Some((_, 't')) => value.push('\t'),
                            Some((_, e @ ('"' | '\\'))) => value.push(e),
                            Some((i, e)) => {
                                return Err(ParseError::new(
                                    SourceSpan::new(i - 1, i + e.len_utf8()),
                                    format!("unknown escape `\\{e}`"),
                                    vec![],
                                ))
                            }
                            None => break,
                        },
                        c => value.push(c),
                    }
                }
                let end = end.ok_or_else(|| {
                    ParseError::new(SourceSpan::new(start, src.len()), "unterminated string", vec![])
                })?;
                tokens.push(Token {
                    tok: Tok::Str(value),
                    span: SourceSpan::new(start, end),
                });
            }
            c if is_word_char(c) => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                tokens.push(Token {
                    tok: Tok::Word(src[start..end].to_owned()),
                    span: SourceSpan::new(start, end),
                });
            }
            other => {
                return Err(ParseError::new(
                    SourceSpan::new(start, start + other.len_utf8()),
                    format!("unexpected character `{other}`"),
                    vec![],
                ))
            }
        }
    }
    Ok(tokens)
}
