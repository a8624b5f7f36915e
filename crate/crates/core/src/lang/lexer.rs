use std::fmt;

use super::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    /// Punctuation and operators, by their source text.
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

/// Longest symbols first so that `->` wins over `-` and `::` over `:`.
const SYMBOLS: [&str; 20] =
    ["->", "::", "\\", "λ", ".", "(", ")", ",", ":", "|", "+", "*", "=", ";", "[", "]", "-", "/", "{", "}"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub span: Span,
    pub msg: String,
}

/// Splits source text into tokens; `--` starts a comment running to the end of the line.
pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
        } else if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(&mut i, &mut line, &mut col, 1);
            }
            let text: String = chars[start..i].iter().collect();
            if text == "_" {
                return Err(LexError { span, msg: "`_` is not a valid identifier".into() });
            }
            out.push((Tok::Ident(text), span));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), span));
        } else if let Some(sym) = SYMBOLS.iter().find(|s| {
            let sc: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&sc)
        }) {
            advance(&mut i, &mut line, &mut col, sym.chars().count());
            out.push((Tok::Sym(sym), span));
        } else {
            return Err(LexError { span, msg: format!("unexpected character {c:?}") });
        }
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn symbols_and_comments() {
        assert_eq!(
            toks("\\x. x :: nil -- trailing\n -> -3/4"),
            vec![
                Tok::Sym("\\"),
                Tok::Ident("x".into()),
                Tok::Sym("."),
                Tok::Ident("x".into()),
                Tok::Sym("::"),
                Tok::Ident("nil".into()),
                Tok::Sym("->"),
                Tok::Sym("-"),
                Tok::Num("3".into()),
                Tok::Sym("/"),
                Tok::Num("4".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn spans_track_lines() {
        let ts = lex("a\n  b").unwrap();
        assert_eq!(ts[1].1, Span { line: 2, col: 3 });
        assert!(lex("a # b").is_err());
    }
}
