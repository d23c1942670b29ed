use std::fmt;

/// Byte range `[start, end)` in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    /// `\name`; the text keeps the backslash.
    Function,
    Number,
    /// `+ - * / ^ °`
    Operator,
    /// `( ) [ ] { }`
    Bracket,
    /// `,` and `;`
    Separator,
    /// `< > <= >= =`
    Comparator,
    /// A character outside the language.
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    /// Operator spelling with typographic variants folded to ASCII.
    pub fn op(&self) -> &str {
        match self.text.as_str() {
            "{^}" => "^",
            "−" => "-",
            "·" | "×" => "*",
            "≤" => "<=",
            "≥" => ">=",
            t => t,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Splits `source` into tokens. Whitespace is dropped; characters outside
/// the language become [`TokenKind::Error`] tokens.
pub fn tokenize(source: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let end_of = |k: usize| chars.get(k).map_or(source.len(), |c| c.0);
    let mut k = 0;
    while k < chars.len() {
        let (start, c) = chars[k];
        macro_rules! push {
            ($kind:expr, $len:expr, $out:expr) => {{
                let len: usize = $len;
                let end = end_of(k + len);
                $out.push(Token {
                    kind: $kind,
                    text: source[start..end].to_string(),
                    span: Span::new(start, end),
                });
                k += len;
            }};
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit()
            || (c == '.' && chars.get(k + 1).is_some_and(|n| n.1.is_ascii_digit()))
        {
            let mut len = 0;
            while chars.get(k + len).is_some_and(|n| n.1.is_ascii_digit()) {
                len += 1;
            }
            if chars.get(k + len).is_some_and(|n| n.1 == '.')
                && chars
                    .get(k + len + 1)
                    .is_none_or(|n| n.1.is_ascii_digit() || !n.1.is_alphabetic())
            {
                len += 1;
                while chars.get(k + len).is_some_and(|n| n.1.is_ascii_digit()) {
                    len += 1;
                }
            }
            // Exponent only when digits follow, so `2e` stays `2` then `e`.
            if chars.get(k + len).is_some_and(|n| n.1 == 'e' || n.1 == 'E') {
                let mut j = k + len + 1;
                if chars.get(j).is_some_and(|n| n.1 == '+' || n.1 == '-') {
                    j += 1;
                }
                if chars.get(j).is_some_and(|n| n.1.is_ascii_digit()) {
                    while chars.get(j).is_some_and(|n| n.1.is_ascii_digit()) {
                        j += 1;
                    }
                    len = j - k;
                }
            }
            push!(TokenKind::Number, len, &mut out);
            continue;
        }
        if c == '\\' {
            let mut len = 1;
            while chars.get(k + len).is_some_and(|n| is_ident_char(n.1)) {
                len += 1;
            }
            let kind = if len == 1 {
                TokenKind::Error
            } else {
                TokenKind::Function
            };
            push!(kind, len, &mut out);
            continue;
        }
        if is_ident_start(c) {
            let mut len = 1;
            while chars.get(k + len).is_some_and(|n| is_ident_char(n.1)) {
                len += 1;
            }
            push!(TokenKind::Identifier, len, &mut out);
            continue;
        }
        let next = chars.get(k + 1).map(|n| n.1);
        match c {
            '{' if next == Some('^') && chars.get(k + 2).is_some_and(|n| n.1 == '}') => {
                push!(TokenKind::Operator, 3, &mut out)
            }
            '<' | '>' if next == Some('=') => push!(TokenKind::Comparator, 2, &mut out),
            '<' | '>' | '=' | '≤' | '≥' => push!(TokenKind::Comparator, 1, &mut out),
            '+' | '-' | '*' | '/' | '^' | '°' | '−' | '·' | '×' => {
                push!(TokenKind::Operator, 1, &mut out)
            }
            '(' | ')' | '[' | ']' | '{' | '}' => push!(TokenKind::Bracket, 1, &mut out),
            ',' | ';' => push!(TokenKind::Separator, 1, &mut out),
            _ => push!(TokenKind::Error, 1, &mut out),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn means_statement() {
        use TokenKind::*;
        let toks = kinds("a=\\AGM(1,5);");
        let want = [
            (Identifier, "a"),
            (Comparator, "="),
            (Function, "\\AGM"),
            (Bracket, "("),
            (Number, "1"),
            (Separator, ","),
            (Number, "5"),
            (Bracket, ")"),
            (Separator, ";"),
        ];
        assert_eq!(toks.len(), want.len());
        for (t, w) in toks.iter().zip(want) {
            assert_eq!((t.0, t.1.as_str()), w);
        }
    }

    #[test]
    fn counts_and_spans() {
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("M=[[1,2],[3,1]];").len(), 16);
        let src = "x^2 + 9.80665*y";
        let toks = tokenize(src);
        for t in &toks {
            assert_eq!(&src[t.span.start..t.span.end], t.text);
        }
        assert_eq!(toks[4].text, "9.80665");
    }

    #[test]
    fn variants_and_errors() {
        let toks = tokenize("x{^}2 <= 1e-3 # 120°");
        assert_eq!(toks[1].op(), "^");
        assert_eq!(toks[3].text, "<=");
        assert_eq!(toks[4].text, "1e-3");
        assert_eq!(toks[5].kind, TokenKind::Error);
        assert_eq!(toks[5].span, Span::new(14, 15));
        assert_eq!(toks[7].text, "°");
        assert_eq!(kinds("2e")[1].1, "e");
        assert_eq!(kinds("\\ x")[0].0, TokenKind::Error);
    }
}
