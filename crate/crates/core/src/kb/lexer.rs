use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u32),
    Colon,
    DoubleColon,
    Dot,
    LParen,
    RParen,
    /// `∧`
    Wedge,
    /// `∨`
    Vee,
    /// `¬`
    Not,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Colon => "`:`".into(),
            Tok::DoubleColon => "`::`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Wedge => "`∧`".into(),
            Tok::Vee => "`∨`".into(),
            Tok::Not => "`¬`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        let tok = match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() == Some(&':') {
                    bump(&mut chars);
                    Tok::DoubleColon
                } else {
                    Tok::Colon
                }
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '∧' => {
                bump(&mut chars);
                Tok::Wedge
            }
            '∨' => {
                bump(&mut chars);
                Tok::Vee
            }
            '¬' => {
                bump(&mut chars);
                Tok::Not
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                let n = s.parse().map_err(|_| ParseError::Syntax {
                    line: start_line,
                    col: start_col,
                    message: format!("integer `{s}` out of range"),
                })?;
                Tok::Int(n)
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !is_ident_continue(d) {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            other => {
                return Err(ParseError::Syntax {
                    line: start_line,
                    col: start_col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token {
            tok,
            line: start_line,
            col: start_col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("# header\nm4 :: IM.\n").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("m4".into()),
                Tok::DoubleColon,
                Tok::Ident("IM".into()),
                Tok::Dot,
                Tok::Eof
            ]
        );
        assert_eq!((toks[0].line, toks[0].col), (2, 1));
        assert_eq!((toks[2].line, toks[2].col), (2, 7));
    }

    #[test]
    fn rejects_stray_characters() {
        assert!(matches!(
            tokenize("a $ b"),
            Err(ParseError::Syntax { line: 1, col: 3, .. })
        ));
    }
}
