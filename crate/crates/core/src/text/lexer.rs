use super::{ParseDiagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Str(String),
    Ident(String),
    LBrace,
    RBrace,
    Colon,
    Semi,
    Arrow,
    Slash,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Str(s) => format!("string {}", super::quote(s)),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '/'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '#' {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let span = |len: usize| SourceSpan::new(line, column, len.max(1));
        let Some(c) = cur.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                span: span(1),
            });
            return Ok(out);
        };
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '/' => Tok::Slash,
            '-' if cur.peek() == Some('>') => {
                cur.bump();
                out.push(Token {
                    tok: Tok::Arrow,
                    span: span(2),
                });
                continue;
            }
            '"' => {
                let (value, len) = lex_string(&mut cur, line, column)?;
                out.push(Token {
                    tok: Tok::Str(value),
                    span: span(len),
                });
                continue;
            }
            c if is_ident_start(c) => {
                let mut ident = c.to_string();
                while let Some(n) = cur.peek().filter(|&n| is_ident_continue(n)) {
                    ident.push(n);
                    cur.bump();
                }
                let len = ident.len();
                out.push(Token {
                    tok: Tok::Ident(ident),
                    span: span(len),
                });
                continue;
            }
            other => {
                return Err(ParseDiagnostic::error(
                    span(1),
                    format!("unexpected character {:?}", other),
                ))
            }
        };
        out.push(Token { tok, span: span(1) });
    }
}

/// Lexes the rest of a string literal after its opening quote. Returns the
/// value and the literal's length in characters.
fn lex_string(cur: &mut Cursor<'_>, line: usize, column: usize) -> Result<(String, usize), ParseDiagnostic> {
    let mut value = String::new();
    let mut len = 1;
    let unterminated = || ParseDiagnostic::error(SourceSpan::new(line, column, 1), "unterminated string");
    loop {
        let (el, ec) = (cur.line, cur.column);
        let c = cur.bump().ok_or_else(unterminated)?;
        len += 1;
        match c {
            '"' => return Ok((value, len)),
            '\n' => return Err(unterminated()),
            '\\' => {
                let bad =
                    |what: &str| ParseDiagnostic::error(SourceSpan::new(el, ec, 2), format!("invalid escape {what}"));
                let e = cur.bump().ok_or_else(unterminated)?;
                len += 1;
                match e {
                    '"' => value.push('"'),
                    '\\' => value.push('\\'),
                    'n' => value.push('\n'),
                    't' => value.push('\t'),
                    'r' => value.push('\r'),
                    'u' => {
                        if cur.bump() != Some('{') {
                            return Err(bad("\\u: expected `{`"));
                        }
                        len += 1;
                        let mut hex = String::new();
                        loop {
                            match cur.bump() {
                                Some('}') => break,
                                Some(h) if h.is_ascii_hexdigit() && hex.len() < 6 => hex.push(h),
                                _ => return Err(bad("\\u{...}")),
                            }
                        }
                        len += hex.len() + 1;
                        let ch = u32::from_str_radix(&hex, 16)
                            .ok()
                            .and_then(char::from_u32)
                            .ok_or_else(|| bad("\\u{...}: not a scalar value"))?;
                        value.push(ch);
                    }
                    '\n' => return Err(unterminated()),
                    other => return Err(bad(&format!("\\{other}"))),
                }
            }
            c => value.push(c),
        }
    }
}
