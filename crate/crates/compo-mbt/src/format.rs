//! Textual model format (`.mbt`), canonical serialization, and DOT
//! export.
//!
//! ```text
//! # comment
//! lts Name {
//!   inputs a b;
//!   outputs x;
//!   initial q0;
//!   q0 -> q1 : ?a;
//!   q1 -> q0 : !x;
//!   q1 -> q1 : tau;
//! }
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::lts::{Lts, RawLts, Transition, ValidationReport, TAU};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("model `{name}` is invalid: {report}")]
    Invalid {
        name: String,
        report: ValidationReport,
    },
    #[error("line {line}, column {column}: duplicate model name `{name}`")]
    DuplicateName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("overlay alphabet differs from the base model's")]
    OverlayAlphabetMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Arrow,
    LBrace,
    RBrace,
    Semi,
    Colon,
    Query,
    Bang,
    Eof,
}

impl<'a> Token<'a> {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Arrow => "`->`".to_string(),
            Token::LBrace => "`{`".to_string(),
            Token::RBrace => "`}`".to_string(),
            Token::Semi => "`;`".to_string(),
            Token::Colon => "`:`".to_string(),
            Token::Query => "`?`".to_string(),
            Token::Bang => "`!`".to_string(),
            Token::Eof => "end of input".to_string(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '|' | '~')
}

struct Lexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.bump(c);
            } else if c == '#' {
                while let Some(c) = self.peek_char() {
                    self.bump(c);
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Next token plus the (line, column) where it starts.
    fn next(&mut self) -> Result<(Token<'a>, usize, usize), FormatError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let c = match self.peek_char() {
            None => return Ok((Token::Eof, line, column)),
            Some(c) => c,
        };
        let single = match c {
            '{' => Some(Token::LBrace),
            '}' => Some(Token::RBrace),
            ';' => Some(Token::Semi),
            ':' => Some(Token::Colon),
            '?' => Some(Token::Query),
            '!' => Some(Token::Bang),
            _ => None,
        };
        if let Some(token) = single {
            self.bump(c);
            return Ok((token, line, column));
        }
        if c == '-' && self.bytes.get(self.pos + 1) == Some(&b'>') {
            self.bump('-');
            self.bump('>');
            return Ok((Token::Arrow, line, column));
        }
        if is_ident_char(c) {
            let start = self.pos;
            while let Some(c) = self.peek_char() {
                if is_ident_char(c) {
                    self.bump(c);
                } else {
                    break;
                }
            }
            return Ok((Token::Ident(&self.text[start..self.pos]), line, column));
        }
        Err(FormatError::Parse {
            line,
            column,
            message: format!("unexpected character `{c}`"),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Option<(Token<'a>, usize, usize)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lexer: Lexer::new(text),
            lookahead: None,
        }
    }

    fn peek(&mut self) -> Result<(Token<'a>, usize, usize), FormatError> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lexer.next()?);
        }
        Ok(self.lookahead.unwrap())
    }

    fn advance(&mut self) -> Result<(Token<'a>, usize, usize), FormatError> {
        let t = self.peek()?;
        self.lookahead = None;
        Ok(t)
    }

    fn error(line: usize, column: usize, message: String) -> FormatError {
        FormatError::Parse {
            line,
            column,
            message,
        }
    }

    fn expect(&mut self, want: Token<'_>, what: &str) -> Result<(usize, usize), FormatError> {
        let (token, line, column) = self.advance()?;
        if std::mem::discriminant(&token) == std::mem::discriminant(&want) {
            Ok((line, column))
        } else {
            Err(Self::error(
                line,
                column,
                format!("expected {what}, found {}", token.describe()),
            ))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(&'a str, usize, usize), FormatError> {
        let (token, line, column) = self.advance()?;
        match token {
            Token::Ident(s) => Ok((s, line, column)),
            other => Err(Self::error(
                line,
                column,
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), FormatError> {
        let (got, line, column) = self.expect_ident(&format!("`{word}`"))?;
        if got == word {
            Ok(())
        } else {
            Err(Self::error(
                line,
                column,
                format!("expected `{word}`, found `{got}`"),
            ))
        }
    }

    /// `name* ";"`.
    fn name_list(&mut self) -> Result<Vec<String>, FormatError> {
        let mut names = Vec::new();
        loop {
            let (token, line, column) = self.advance()?;
            match token {
                Token::Semi => return Ok(names),
                Token::Ident(s) => names.push(s.to_string()),
                other => {
                    return Err(Self::error(
                        line,
                        column,
                        format!("expected a label name or `;`, found {}", other.describe()),
                    ))
                }
            }
        }
    }

    fn block(&mut self) -> Result<(String, RawLts), FormatError> {
        self.expect_keyword("lts")?;
        let (name, _, _) = self.expect_ident("a model name")?;
        self.expect(Token::LBrace, "`{`")?;
        self.expect_keyword("inputs")?;
        let inputs = self.name_list()?;
        self.expect_keyword("outputs")?;
        let outputs = self.name_list()?;
        self.expect_keyword("initial")?;
        let (initial, _, _) = self.expect_ident("the initial state")?;
        self.expect(Token::Semi, "`;`")?;

        let mut raw = RawLts {
            inputs: inputs.iter().cloned().collect(),
            outputs: outputs.iter().cloned().collect(),
            initial: initial.to_string(),
            ..RawLts::default()
        };
        raw.states.insert(initial.to_string());

        loop {
            let (token, line, column) = self.peek()?;
            match token {
                Token::RBrace => {
                    self.advance()?;
                    break;
                }
                Token::Ident(_) => {
                    let (src, _, _) = self.expect_ident("a source state")?;
                    self.expect(Token::Arrow, "`->`")?;
                    let (dst, _, _) = self.expect_ident("a target state")?;
                    self.expect(Token::Colon, "`:`")?;
                    let (kind, kline, kcolumn) = self.advance()?;
                    let label = match kind {
                        Token::Query | Token::Bang => {
                            let (label, lline, lcolumn) = self.expect_ident("a label name")?;
                            let declared_input = raw.inputs.contains(label);
                            let declared_output = raw.outputs.contains(label);
                            let matches = match kind {
                                Token::Query => declared_input,
                                _ => declared_output,
                            };
                            if !declared_input && !declared_output {
                                return Err(Self::error(
                                    lline,
                                    lcolumn,
                                    format!("label `{label}` is not declared in the alphabet"),
                                ));
                            }
                            if !matches {
                                return Err(Self::error(
                                    lline,
                                    lcolumn,
                                    format!("kind mismatch for label {label}"),
                                ));
                            }
                            label.to_string()
                        }
                        Token::Ident(word) if word == TAU => TAU.to_string(),
                        other => {
                            return Err(Self::error(
                                kline,
                                kcolumn,
                                format!("expected `?`, `!`, or `tau`, found {}", other.describe()),
                            ))
                        }
                    };
                    self.expect(Token::Semi, "`;`")?;
                    raw.states.insert(src.to_string());
                    raw.states.insert(dst.to_string());
                    raw.transitions
                        .insert((src.to_string(), label, dst.to_string()));
                }
                other => {
                    return Err(Self::error(
                        line,
                        column,
                        format!("expected an edge or `}}`, found {}", other.describe()),
                    ))
                }
            }
        }

        Ok((name.to_string(), raw))
    }
}

/// Parses a model file into named candidate structures without semantic
/// validation; the empty file is the empty list.
pub fn parse_raw(text: &str) -> Result<Vec<(String, RawLts)>, FormatError> {
    let mut parser = Parser::new(text);
    let mut models: Vec<(String, RawLts)> = Vec::new();
    loop {
        let (token, line, column) = parser.peek()?;
        if token == Token::Eof {
            return Ok(models);
        }
        let (name, raw) = parser.block()?;
        if models.iter().any(|(n, _)| *n == name) {
            return Err(FormatError::DuplicateName { name, line, column });
        }
        models.push((name, raw));
    }
}

/// Parses a model file into its named, validated models.
pub fn parse(text: &str) -> Result<Vec<(String, Lts)>, FormatError> {
    parse_raw(text)?
        .into_iter()
        .map(|(name, raw)| match raw.build() {
            Ok(lts) => Ok((name, lts)),
            Err(report) => Err(FormatError::Invalid { name, report }),
        })
        .collect()
}

/// Canonical rendering of one transition's label part.
fn edge_label(m: &Lts, label: &str) -> String {
    if label == TAU {
        TAU.to_string()
    } else if m.inputs().contains(label) {
        format!("?{label}")
    } else {
        format!("!{label}")
    }
}

/// Canonical serialization: labels sorted lexicographically, edges sorted
/// by (source, label, target). `serialize(parse(serialize(x))) =
/// serialize(x)`.
pub fn serialize(models: &[(String, Lts)]) -> String {
    let mut text = String::new();
    for (i, (name, m)) in models.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        let _ = writeln!(text, "lts {name} {{");
        let list = |labels: &std::collections::BTreeSet<String>| {
            labels
                .iter()
                .map(|l| format!(" {l}"))
                .collect::<Vec<_>>()
                .join("")
        };
        let _ = writeln!(text, "  inputs{};", list(m.inputs()));
        let _ = writeln!(text, "  outputs{};", list(m.outputs()));
        let _ = writeln!(text, "  initial {};", m.initial());
        let mut edges: Vec<&Transition> = m.transitions().iter().collect();
        edges.sort_by(|(s1, l1, t1), (s2, l2, t2)| (s1, l1, t1).cmp(&(s2, l2, t2)));
        for (src, label, dst) in edges {
            let _ = writeln!(text, "  {src} -> {dst} : {};", edge_label(m, label));
        }
        text.push_str("}\n");
    }
    text
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT export; with an overlay sharing the base alphabet, overlay-only
/// edges render dashed (spec solid, implementation extras dashed).
pub fn export_dot(m: &Lts, overlay: Option<&Lts>) -> Result<String, FormatError> {
    if let Some(overlay) = overlay {
        if overlay.inputs() != m.inputs() || overlay.outputs() != m.outputs() {
            return Err(FormatError::OverlayAlphabetMismatch);
        }
    }
    let mut text = String::new();
    text.push_str("digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n");
    text.push_str("  __start [shape=point];\n");
    let _ = writeln!(text, "  __start -> \"{}\";", dot_escape(m.initial()));
    let mut states: Vec<&String> = m.states().iter().collect();
    if let Some(overlay) = overlay {
        for state in overlay.states() {
            if !m.states().contains(state) {
                states.push(state);
            }
        }
    }
    for state in states {
        let _ = writeln!(text, "  \"{}\";", dot_escape(state));
    }
    for (src, label, dst) in m.transitions() {
        let _ = writeln!(
            text,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            dot_escape(src),
            dot_escape(dst),
            dot_escape(&edge_label(m, label))
        );
    }
    if let Some(overlay) = overlay {
        for edge in overlay.transitions() {
            if m.transitions().contains(edge) {
                continue;
            }
            let (src, label, dst) = edge;
            let _ = writeln!(
                text,
                "  \"{}\" -> \"{}\" [label=\"{}\", style=dashed];",
                dot_escape(src),
                dot_escape(dst),
                dot_escape(&edge_label(overlay, label))
            );
        }
    }
    text.push_str("}\n");
    Ok(text)
}
