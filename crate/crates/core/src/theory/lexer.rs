use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(i64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

// Longest first, so `|-` wins over `|` and `==` over `=`.
const SYMBOLS: [&str; 17] = [
    "|-", "<=", "==", "⊢", "(", ")", "[", "]", "{", "}", ",", ";", ":", "|", "=", "/", "*",
];

/// Splits `text` into tokens. Comments run from `#` or `//` to the end of
/// the line. `∞` lexes as the identifier `inf`.
pub fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        let (l0, c0) = (line, col);
        let mut advance = |s: &str| {
            for ch in s.chars() {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
        };
        if c.is_whitespace() {
            advance(&rest[..c.len_utf8()]);
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '#' || rest.starts_with("//") {
            let end = rest.find('\n').unwrap_or(rest.len());
            advance(&rest[..end]);
            rest = &rest[end..];
            continue;
        }
        let push = |tok| Token { tok, line: l0, col: c0 };
        if c.is_ascii_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_' || ch == '\''))
                .unwrap_or(rest.len());
            out.push(push(Tok::Ident(rest[..end].to_string())));
            advance(&rest[..end]);
            rest = &rest[end..];
            continue;
        }
        if c.is_ascii_digit() {
            let end = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            let n = rest[..end].parse().map_err(|_| Error::Parse {
                line: l0,
                col: c0,
                expected: "a number that fits in 64 bits".into(),
            })?;
            out.push(push(Tok::Nat(n)));
            advance(&rest[..end]);
            rest = &rest[end..];
            continue;
        }
        if c == '∞' {
            out.push(push(Tok::Ident("inf".into())));
            advance("∞");
            rest = &rest['∞'.len_utf8()..];
            continue;
        }
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                let sym = if *s == "⊢" { "|-" } else { s };
                out.push(push(Tok::Sym(sym)));
                advance(s);
                rest = &rest[s.len()..];
            }
            None => {
                return Err(Error::Parse {
                    line: l0,
                    col: c0,
                    expected: format!("a token, found `{c}`"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("op mul : 2; # comment\n  [x <= y] |- d(x,y) <= 1/2 ∞").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("op".into()));
        assert_eq!(kinds[3], Tok::Nat(2));
        assert_eq!(kinds[5], Tok::Sym("["));
        assert_eq!((toks[5].line, toks[5].col), (2, 3));
        assert!(kinds.contains(&Tok::Sym("|-")));
        assert!(kinds.contains(&Tok::Ident("inf".into())));
    }

    #[test]
    fn bad_character_reports_position() {
        let err = lex("op @").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 4, .. }));
    }
}
