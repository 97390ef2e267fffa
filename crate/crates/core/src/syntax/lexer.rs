use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &[&str] = &[
    "->", "==", "~~", "{", "}", "(", ")", "[", "]", ";", ":", ",", ".", "=", "+", "-", "*", "%", "/",
];

pub fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let from = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - from;
            out.push(Token {
                tok: Tok::Ident(chars[from..i].iter().collect()),
                line: start.0,
                col: start.1,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let from = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - from;
            out.push(Token {
                tok: Tok::Num(chars[from..i].iter().collect()),
                line: start.0,
                col: start.1,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let sym = SYMBOLS
            .iter()
            .find(|s| rest.starts_with(**s))
            .ok_or_else(|| Error::Syntax {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            })?;
        i += sym.len();
        col += sym.len();
        out.push(Token {
            tok: Tok::Sym(sym),
            line: start.0,
            col: start.1,
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
    fn splits_arrows_and_dots() {
        let toks: Vec<Tok> = lex("op s : N -> N; p . s ~~ id[N] # note\n")
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect();
        assert_eq!(toks[4], Tok::Sym("->"));
        assert!(toks.contains(&Tok::Sym("~~")));
        assert!(toks.contains(&Tok::Sym(".")));
        assert_eq!(toks.last(), Some(&Tok::Eof));
    }

    #[test]
    fn reports_position_of_bad_character() {
        let err = lex("term a\n  @").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                col: 3,
                msg: "unexpected character `@`".into()
            }
        );
    }
}
