use std::fmt;

use num_bigint::BigInt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Keyword {
    System,
    Coords,
    Coefficient(char),
    Theta,
    Omega,
    Integral,
    Surface,
    NormalForm,
    Check,
    Let,
    Contact,
}

const RESERVED_DIFFERENTIALS: [&str; 12] = ["dx", "dy", "dz", "dp", "dq", "dX", "dY", "dZ", "dP", "dQ", "du", "dv"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Str(String),
    /// A reserved differential such as `dx`; holds the coordinate name.
    Diff(String),
    Keyword(Keyword),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    Equals,
    Comma,
    Colon,
    Newline,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "ident {s}"),
            TokenKind::Int(n) => write!(f, "int {n}"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::Diff(s) => write!(f, "diff d{s}"),
            TokenKind::Keyword(k) => write!(f, "kw {}", keyword_text(k)),
            TokenKind::Plus => f.write_str("op +"),
            TokenKind::Minus => f.write_str("op −"),
            TokenKind::Star => f.write_str("op *"),
            TokenKind::Slash => f.write_str("op /"),
            TokenKind::Caret => f.write_str("op ^"),
            TokenKind::Wedge => f.write_str("wedge"),
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::Equals => f.write_str("="),
            TokenKind::Comma => f.write_str(","),
            TokenKind::Colon => f.write_str(":"),
            TokenKind::Newline => f.write_str("newline"),
        }
    }
}

pub fn keyword_text(k: &Keyword) -> String {
    match k {
        Keyword::System => "system".into(),
        Keyword::Coords => "coords".into(),
        Keyword::Coefficient(c) => c.to_string(),
        Keyword::Theta => "theta".into(),
        Keyword::Omega => "omega".into(),
        Keyword::Integral => "integral".into(),
        Keyword::Surface => "surface".into(),
        Keyword::NormalForm => "normalform".into(),
        Keyword::Check => "check".into(),
        Keyword::Let => "let".into(),
        Keyword::Contact => "contact".into(),
    }
}

fn keyword(word: &str) -> Option<Keyword> {
    Some(match word {
        "system" => Keyword::System,
        "coords" => Keyword::Coords,
        "A" | "B" | "C" | "D" | "E" => Keyword::Coefficient(word.chars().next()?),
        "theta" => Keyword::Theta,
        "omega" => Keyword::Omega,
        "integral" => Keyword::Integral,
        "surface" => Keyword::Surface,
        "normalform" => Keyword::NormalForm,
        "check" => Keyword::Check,
        "let" => Keyword::Let,
        "contact" => Keyword::Contact,
        _ => return None,
    })
}

/// Splits `text` into tokens. `#` starts a comment that runs to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col, start) = (line, column, i);
        let single = |kind| Some((kind, 1));
        let found: Option<(TokenKind, usize)> = match c {
            '\n' => single(TokenKind::Newline),
            ' ' | '\t' | '\r' => None,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    column += 1;
                }
                continue;
            }
            '+' => single(TokenKind::Plus),
            '-' => single(TokenKind::Minus),
            '*' => single(TokenKind::Star),
            '^' => single(TokenKind::Caret),
            '(' => single(TokenKind::LParen),
            ')' => single(TokenKind::RParen),
            '=' => single(TokenKind::Equals),
            ',' => single(TokenKind::Comma),
            ':' => single(TokenKind::Colon),
            '/' if chars.get(i + 1) == Some(&'\\') => Some((TokenKind::Wedge, 2)),
            '/' => single(TokenKind::Slash),
            '"' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                    j += 1;
                }
                if chars.get(j) != Some(&'"') {
                    return Err(ParseError::new(line, column, "unterminated string", "\""));
                }
                Some((TokenKind::Str(chars[i + 1..j].iter().collect()), j + 1 - i))
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                Some((TokenKind::Int(digits.parse().expect("ascii digits")), j - i))
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let kind = if let Some(k) = keyword(&word) {
                    TokenKind::Keyword(k)
                } else if RESERVED_DIFFERENTIALS.contains(&word.as_str()) {
                    TokenKind::Diff(word[1..].to_string())
                } else {
                    TokenKind::Ident(word)
                };
                Some((kind, j - i))
            }
            other => return Err(ParseError::new(line, column, "illegal character", &other.to_string())),
        };
        match found {
            Some((kind, len)) => {
                let text: String = chars[start..start + len].iter().collect();
                tokens.push(Token { kind, text, line: start_line, column: start_col });
                i += len;
                if c == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += len;
                }
            }
            None => {
                i += 1;
                column += 1;
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn scalar_tokens() {
        assert_eq!(
            kinds("p - x^2"),
            vec![
                TokenKind::Ident("p".into()),
                TokenKind::Minus,
                TokenKind::Ident("x".into()),
                TokenKind::Caret,
                TokenKind::Int(2.into()),
            ]
        );
    }

    #[test]
    fn wedge_tokens() {
        assert_eq!(
            kinds("dp /\\ dy"),
            vec![TokenKind::Diff("p".into()), TokenKind::Wedge, TokenKind::Diff("y".into())]
        );
    }

    #[test]
    fn keyword_tokens() {
        assert_eq!(
            kinds("A = 0"),
            vec![TokenKind::Keyword(Keyword::Coefficient('A')), TokenKind::Equals, TokenKind::Int(0.into())]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("system \"w\"\n  A = 1").unwrap();
        let a = t.iter().find(|t| t.text == "A").unwrap();
        assert_eq!((a.line, a.column), (2, 3));
        assert_eq!(t[1].kind, TokenKind::Str("w".into()));
    }

    #[test]
    fn illegal_character() {
        let e = tokenize("x = 1\ny = $").unwrap_err();
        assert_eq!((e.line, e.column, e.token.as_str()), (2, 5, "$"));
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(kinds("x # note\n"), vec![TokenKind::Ident("x".into()), TokenKind::Newline]);
    }
}
