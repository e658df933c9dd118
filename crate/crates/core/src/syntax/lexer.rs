use super::{Pos, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Num(u32),
    Backslash,
    /// `/\`: conjunction in types, type abstraction in terms.
    SlashBack,
    /// `\/`
    BackSlash,
    Arrow,
    FatArrow,
    Dot,
    Colon,
    Semi,
    Comma,
    Pipe,
    Bottom,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Backslash => "`\\`".into(),
            Tok::SlashBack => "`/\\`".into(),
            Tok::BackSlash => "`\\/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Bottom => "`_|_`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(super) fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for k in 0..n {
            if chars[*i + k] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (tok, len) = match (c, next) {
            ('_', Some('|')) if chars.get(i + 2) == Some(&'_') => (Tok::Bottom, 3),
            ('\\', Some('/')) => (Tok::BackSlash, 2),
            ('\\', _) => (Tok::Backslash, 1),
            ('/', Some('\\')) => (Tok::SlashBack, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            ('.', _) => (Tok::Dot, 1),
            (':', _) => (Tok::Colon, 1),
            (';', _) => (Tok::Semi, 1),
            (',', _) => (Tok::Comma, 1),
            ('|', _) => (Tok::Pipe, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('<', _) => (Tok::LAngle, 1),
            ('>', _) => (Tok::RAngle, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (d, _) if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n = text.parse().map_err(|_| SyntaxError::at(pos, "number too large"))?;
                (Tok::Num(n), j - i)
            }
            (a, _) if a.is_ascii_alphabetic() || a == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                (Tok::Ident(chars[i..j].iter().collect()), j - i)
            }
            (other, _) => {
                return Err(SyntaxError::at(pos, format!("unexpected character `{other}`")));
            }
        };
        out.push((tok, pos));
        advance(&mut i, &mut line, &mut col, len);
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn slashes_and_bottom() {
        assert_eq!(
            toks("\\x /\\ \\/ _|_ _a"),
            vec![
                Tok::Backslash,
                Tok::Ident("x".into()),
                Tok::SlashBack,
                Tok::BackSlash,
                Tok::Bottom,
                Tok::Ident("_a".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_and_comments() {
        let t = lex("# note\n  x.1").unwrap();
        assert_eq!(t[0].1, Pos { line: 2, col: 3 });
        assert_eq!(t[2].0, Tok::Num(1));
        assert!(lex("x $ y").is_err());
    }
}
