//! Java tokenizer. Comments and whitespace are dropped; every `>` is its own
//! token so that nested generic closers lex cleanly. The parser re-joins
//! adjacent `>` tokens into shift and comparison operators.

use crate::ast::{AstError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    IntLit,
    FloatLit,
    CharLit,
    StringLit,
    TextBlock,
    Punct,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        matches!(self.kind, TokenKind::Punct | TokenKind::Keyword) && self.text == text
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

// Longest first; `>`-prefixed operators are deliberately absent.
const PUNCTS: &[&str] = &[
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "<<", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", ">",
    "<", "!", "~", "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, AstError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() || c == 0x0c {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            let start = i;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(AstError::syntax(
                        source,
                        Span::new(start, bytes.len()),
                        "unterminated comment",
                    ));
                }
                if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                i += 1;
            }
            continue;
        }
        let start = i;
        let ch = source[i..].chars().next().expect("in bounds");
        if ch.is_alphabetic() || ch == '_' || ch == '$' {
            let mut end = i;
            for (off, ch) in source[i..].char_indices() {
                if ch.is_alphanumeric() || ch == '_' || ch == '$' {
                    end = i + off + ch.len_utf8();
                } else {
                    break;
                }
            }
            let word = &source[start..end];
            let kind = if is_keyword(word) { TokenKind::Keyword } else { TokenKind::Ident };
            tokens.push(Token { kind, text: word.to_string(), span: Span::new(start, end) });
            i = end;
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let (end, kind) = lex_number(bytes, i);
            tokens.push(Token { kind, text: source[start..end].to_string(), span: Span::new(start, end) });
            i = end;
            continue;
        }
        if c == b'"' {
            let end = if bytes[i..].starts_with(b"\"\"\"") {
                lex_text_block(source, i)?
            } else {
                lex_quoted(source, i, b'"')?
            };
            let kind = if end - start >= 6 && bytes[start..].starts_with(b"\"\"\"") {
                TokenKind::TextBlock
            } else {
                TokenKind::StringLit
            };
            tokens.push(Token { kind, text: source[start..end].to_string(), span: Span::new(start, end) });
            i = end;
            continue;
        }
        if c == b'\'' {
            let end = lex_quoted(source, i, b'\'')?;
            tokens.push(Token {
                kind: TokenKind::CharLit,
                text: source[start..end].to_string(),
                span: Span::new(start, end),
            });
            i = end;
            continue;
        }
        match PUNCTS.iter().find(|p| bytes[i..].starts_with(p.as_bytes())) {
            Some(p) => {
                tokens.push(Token {
                    kind: TokenKind::Punct,
                    text: (*p).to_string(),
                    span: Span::new(i, i + p.len()),
                });
                i += p.len();
            }
            None => {
                return Err(AstError::syntax(
                    source,
                    Span::new(i, i + ch.len_utf8()),
                    format!("unexpected character `{ch}`"),
                ))
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        span: Span::new(source.len(), source.len()),
    });
    Ok(tokens)
}

fn lex_number(bytes: &[u8], start: usize) -> (usize, TokenKind) {
    let mut i = start;
    let mut float = false;
    if bytes[i] == b'0' && matches!(bytes.get(i + 1), Some(b'x' | b'X' | b'b' | b'B')) {
        i += 2;
        while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            float = true;
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
                i += 1;
            }
        }
        if i < bytes.len() && matches!(bytes[i], b'p' | b'P') {
            float = true;
            i = skip_exponent(bytes, i);
        }
    } else {
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
            i += 1;
        }
        if i < bytes.len()
            && bytes[i] == b'.'
            && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphabetic() && !matches!(b, b'e' | b'E' | b'f' | b'F' | b'd' | b'D'))
            && bytes.get(i + 1) != Some(&b'.')
        {
            float = true;
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
        }
        if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
            float = true;
            i = skip_exponent(bytes, i);
        }
    }
    if i < bytes.len() {
        match bytes[i] {
            b'l' | b'L' => i += 1,
            b'f' | b'F' | b'd' | b'D' => {
                float = true;
                i += 1;
            }
            _ => {}
        }
    }
    (i, if float { TokenKind::FloatLit } else { TokenKind::IntLit })
}

fn skip_exponent(bytes: &[u8], mut i: usize) -> usize {
    i += 1;
    if i < bytes.len() && matches!(bytes[i], b'+' | b'-') {
        i += 1;
    }
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
        i += 1;
    }
    i
}

fn lex_quoted(source: &str, start: usize, quote: u8) -> Result<usize, AstError> {
    let bytes = source.as_bytes();
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'\n' => break,
            b if b == quote => return Ok(i + 1),
            _ => i += 1,
        }
    }
    Err(AstError::syntax(source, Span::new(start, i.min(bytes.len())), "unterminated literal"))
}

fn lex_text_block(source: &str, start: usize) -> Result<usize, AstError> {
    let bytes = source.as_bytes();
    let mut i = start + 3;
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            i += 2;
            continue;
        }
        if bytes[i..].starts_with(b"\"\"\"") {
            return Ok(i + 3);
        }
        i += 1;
    }
    Err(AstError::syntax(source, Span::new(start, bytes.len()), "unterminated text block"))
}

/// Token texts with comments and whitespace stripped; used for duplicate
/// detection.
pub fn token_texts(source: &str) -> Result<Vec<String>, AstError> {
    Ok(tokenize(source)?
        .into_iter()
        .filter(|t| t.kind != TokenKind::Eof)
        .map(|t| t.text)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        token_texts(src).unwrap()
    }

    #[test]
    fn strips_comments_and_whitespace() {
        assert_eq!(texts("a /* x */ +  // y\n b"), vec!["a", "+", "b"]);
    }

    #[test]
    fn numbers() {
        let toks = tokenize("0x1F 1_000L 3.5e-2 .5f 1.f 07 0b101 1..2").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| (t.kind, t.text.as_str())).collect();
        assert_eq!(kinds[0], (TokenKind::IntLit, "0x1F"));
        assert_eq!(kinds[1], (TokenKind::IntLit, "1_000L"));
        assert_eq!(kinds[2], (TokenKind::FloatLit, "3.5e-2"));
        assert_eq!(kinds[3], (TokenKind::FloatLit, ".5f"));
        assert_eq!(kinds[4], (TokenKind::FloatLit, "1.f"));
        assert_eq!(kinds[5], (TokenKind::IntLit, "07"));
        assert_eq!(kinds[6], (TokenKind::IntLit, "0b101"));
        assert_eq!(kinds[7], (TokenKind::IntLit, "1"));
    }

    #[test]
    fn greater_than_is_split() {
        assert_eq!(texts("a >>>= b"), vec!["a", ">", ">", ">", "=", "b"]);
        assert_eq!(texts("x <<= 2"), vec!["x", "<<=", "2"]);
    }

    #[test]
    fn strings_and_chars() {
        assert_eq!(texts(r#"s = "a\"b" + 'c' + '\''"#), vec!["s", "=", r#""a\"b""#, "+", "'c'", "+", r"'\''"]);
        let t = tokenize("\"\"\"\n  hi \"\"\" x").unwrap();
        assert_eq!(t[0].kind, TokenKind::TextBlock);
    }

    #[test]
    fn unterminated_literal_errors() {
        assert!(matches!(tokenize("\"abc"), Err(AstError::SyntaxError { .. })));
        assert!(matches!(tokenize("/* x"), Err(AstError::SyntaxError { .. })));
    }
}
