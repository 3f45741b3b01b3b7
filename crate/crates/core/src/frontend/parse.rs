//! Line-oriented text format for diagrams and presentations.
//!
//! ```text
//! diagram <name> (oriented|unoriented)
//! regions <name>+
//! arc over=<r> from=<r> to=<r> sign=(+|-)
//!
//! presentation <name>
//! gens <name>*
//! rel <token>+            # token: <gen> or <gen>^-1; `rel 1` is the empty relator
//! ```
//!
//! `#` starts a comment. Blank lines are ignored. A document may hold several
//! blocks; each starts at a header line.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::diagrams::{Arc, Diagram};
use crate::presentations::{is_valid_name, Presentation};
use crate::words::{Letter, Sign, TokenError, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPresentation {
    pub name: String,
    pub presentation: Presentation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Diagram(Diagram),
    Presentation(NamedPresentation),
}

impl Input {
    pub fn name(&self) -> &str {
        match self {
            Input::Diagram(d) => d.name(),
            Input::Presentation(p) => &p.name,
        }
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected a `diagram` or `presentation` header, found `{0}`")]
    ExpectedHeader(String),
    #[error("unknown keyword `{0}` in {1} block")]
    UnknownKeyword(String, &'static str),
    #[error("expected `oriented` or `unoriented`, found `{0}`")]
    BadOrientation(String),
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("unexpected extra token `{0}`")]
    Extra(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("`{0}` appears twice in this block")]
    RepeatedLine(&'static str),
    #[error("`{0}` must come before any `{1}` line")]
    OutOfOrder(&'static str, &'static str),
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("malformed field `{0}` (expected key=value with key over, from, to or sign)")]
    MalformedField(String),
    #[error("field `{0}` given twice")]
    DuplicateField(String),
    #[error("sign must be `+` or `-`, found `{0}`")]
    BadSign(String),
    #[error("{0}")]
    Token(#[from] TokenError),
    #[error("empty input")]
    Empty,
    #[error("expected exactly one block, found {0}")]
    BlockCount(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub location: Location,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: warning: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub input: Input,
    pub warnings: Vec<Warning>,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn at(&self, column: usize) -> Location {
        Location {
            line: self.number,
            column,
        }
    }

    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            location: self.at(column),
            kind,
        }
    }

    /// Column just past the last token, for "missing" errors.
    fn end(&self) -> usize {
        self.tokens.last().map_or(1, |(c, t)| c + t.chars().count())
    }
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        for (byte, ch) in content
            .char_indices()
            .chain(std::iter::once((content.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    let column = content[..s].chars().count() + 1;
                    tokens.push((column, &content[s..byte]));
                    start = None;
                }
                (false, None) => start = Some(byte),
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(Line {
                number: i + 1,
                tokens,
            });
        }
    }
    lines
}

fn check_name(line: &Line, column: usize, name: &str) -> Result<(), ParseError> {
    if is_valid_name(name) {
        Ok(())
    } else {
        Err(line.err(column, ParseErrorKind::InvalidName(name.to_string())))
    }
}

/// Collects a list of fresh names from the tokens after the keyword.
fn name_list(line: &Line) -> Result<Vec<String>, ParseError> {
    let mut seen = HashSet::new();
    let mut names = Vec::new();
    for &(column, name) in &line.tokens[1..] {
        check_name(line, column, name)?;
        if !seen.insert(name) {
            return Err(line.err(column, ParseErrorKind::Duplicate(name.to_string())));
        }
        names.push(name.to_string());
    }
    Ok(names)
}

fn parse_diagram(
    header: &Line,
    body: &[Line],
    warnings: &mut Vec<Warning>,
) -> Result<Diagram, ParseError> {
    let (name_col, name) = *header
        .tokens
        .get(1)
        .ok_or_else(|| header.err(header.end(), ParseErrorKind::Missing("diagram name")))?;
    check_name(header, name_col, name)?;
    let (or_col, orientation) = *header
        .tokens
        .get(2)
        .ok_or_else(|| header.err(header.end(), ParseErrorKind::Missing("orientation")))?;
    let oriented = match orientation {
        "oriented" => true,
        "unoriented" => false,
        other => return Err(header.err(or_col, ParseErrorKind::BadOrientation(other.to_string()))),
    };
    if let Some(&(c, t)) = header.tokens.get(3) {
        return Err(header.err(c, ParseErrorKind::Extra(t.to_string())));
    }

    let mut regions: Option<Vec<String>> = None;
    let mut arcs = Vec::new();
    for line in body {
        let (kw_col, kw) = line.tokens[0];
        match kw {
            "regions" => {
                if regions.is_some() {
                    return Err(line.err(kw_col, ParseErrorKind::RepeatedLine("regions")));
                }
                let names = name_list(line)?;
                if names.is_empty() {
                    return Err(line.err(line.end(), ParseErrorKind::Missing("region names")));
                }
                regions = Some(names);
            }
            "arc" => {
                let regions = regions.as_ref().ok_or_else(|| {
                    line.err(kw_col, ParseErrorKind::OutOfOrder("regions", "arc"))
                })?;
                arcs.push(parse_arc(line, regions, oriented, warnings)?);
            }
            other => {
                return Err(line.err(
                    kw_col,
                    ParseErrorKind::UnknownKeyword(other.to_string(), "diagram"),
                ))
            }
        }
    }
    let regions = regions
        .ok_or_else(|| header.err(header.end(), ParseErrorKind::Missing("`regions` line")))?;
    Ok(Diagram::new(name, oriented, regions, arcs)
        .expect("names and references checked while parsing"))
}

fn parse_arc(
    line: &Line,
    regions: &[String],
    oriented: bool,
    warnings: &mut Vec<Warning>,
) -> Result<Arc, ParseError> {
    let mut fields: [Option<(usize, &str)>; 4] = [None; 4];
    const KEYS: [&str; 4] = ["over", "from", "to", "sign"];
    for &(column, tok) in &line.tokens[1..] {
        let (key, value) = tok
            .split_once('=')
            .filter(|(_, v)| !v.is_empty())
            .ok_or_else(|| line.err(column, ParseErrorKind::MalformedField(tok.to_string())))?;
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| line.err(column, ParseErrorKind::MalformedField(tok.to_string())))?;
        if fields[slot].is_some() {
            return Err(line.err(column, ParseErrorKind::DuplicateField(key.to_string())));
        }
        fields[slot] = Some((column + key.chars().count() + 1, value));
    }
    let region = |slot: usize, what: &'static str| -> Result<usize, ParseError> {
        let (column, name) =
            fields[slot].ok_or_else(|| line.err(line.end(), ParseErrorKind::Missing(what)))?;
        regions
            .iter()
            .position(|r| r == name)
            .ok_or_else(|| line.err(column, ParseErrorKind::UnknownRegion(name.to_string())))
    };
    let over = region(0, "`over=` field")?;
    let from = region(1, "`from=` field")?;
    let to = region(2, "`to=` field")?;
    let sign = match fields[3] {
        None if oriented => {
            return Err(line.err(line.end(), ParseErrorKind::Missing("`sign=` field")))
        }
        None => Sign::Pos,
        Some((_, "+")) => Sign::Pos,
        Some((column, "-")) => {
            if !oriented {
                warnings.push(Warning {
                    location: line.at(column),
                    message: "sign on an unoriented diagram is ignored; read as +".to_string(),
                });
            }
            Sign::Neg
        }
        Some((column, other)) => {
            return Err(line.err(column, ParseErrorKind::BadSign(other.to_string())))
        }
    };
    Ok(Arc::new(over, from, to, sign))
}

fn parse_presentation(header: &Line, body: &[Line]) -> Result<NamedPresentation, ParseError> {
    let (name_col, name) = *header
        .tokens
        .get(1)
        .ok_or_else(|| header.err(header.end(), ParseErrorKind::Missing("presentation name")))?;
    check_name(header, name_col, name)?;
    if let Some(&(c, t)) = header.tokens.get(2) {
        return Err(header.err(c, ParseErrorKind::Extra(t.to_string())));
    }
    let mut gens: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for line in body {
        let (kw_col, kw) = line.tokens[0];
        match kw {
            "gens" => {
                if gens.is_some() {
                    return Err(line.err(kw_col, ParseErrorKind::RepeatedLine("gens")));
                }
                gens = Some(name_list(line)?);
            }
            "rel" => {
                let gens = gens
                    .as_ref()
                    .ok_or_else(|| line.err(kw_col, ParseErrorKind::OutOfOrder("gens", "rel")))?;
                relators.push(parse_relator(line, gens)?);
            }
            other => {
                return Err(line.err(
                    kw_col,
                    ParseErrorKind::UnknownKeyword(other.to_string(), "presentation"),
                ))
            }
        }
    }
    let gens =
        gens.ok_or_else(|| header.err(header.end(), ParseErrorKind::Missing("`gens` line")))?;
    let presentation =
        Presentation::new(gens, relators).expect("names and references checked while parsing");
    Ok(NamedPresentation {
        name: name.to_string(),
        presentation,
    })
}

fn parse_relator(line: &Line, gens: &[String]) -> Result<Word, ParseError> {
    let tokens = &line.tokens[1..];
    if tokens.is_empty() {
        return Err(line.err(line.end(), ParseErrorKind::Missing("relator tokens")));
    }
    if tokens.len() == 1 && tokens[0].1 == "1" {
        return Ok(Word::identity());
    }
    tokens
        .iter()
        .map(|&(column, tok)| {
            Letter::parse_token(tok, |n| gens.iter().position(|g| g == n))
                .map_err(|e| line.err(column, e.into()))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word::new)
}

/// Parses every block in `text`.
pub fn parse_document(text: &str) -> Result<Vec<Parsed>, ParseError> {
    let lines = lex(text);
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let header = &lines[i];
        let (col, kw) = header.tokens[0];
        let end = (i + 1..lines.len())
            .find(|&j| matches!(lines[j].tokens[0].1, "diagram" | "presentation"))
            .unwrap_or(lines.len());
        let body = &lines[i + 1..end];
        let mut warnings = Vec::new();
        let input = match kw {
            "diagram" => Input::Diagram(parse_diagram(header, body, &mut warnings)?),
            "presentation" => Input::Presentation(parse_presentation(header, body)?),
            other => return Err(header.err(col, ParseErrorKind::ExpectedHeader(other.to_string()))),
        };
        out.push(Parsed { input, warnings });
        i = end;
    }
    Ok(out)
}

/// Parses a document holding exactly one block.
pub fn parse_input(text: &str) -> Result<Parsed, ParseError> {
    let mut blocks = parse_document(text)?;
    match blocks.len() {
        1 => Ok(blocks.pop().expect("one block")),
        0 => Err(ParseError {
            location: Location { line: 1, column: 1 },
            kind: ParseErrorKind::Empty,
        }),
        n => {
            let second = lex(text)
                .into_iter()
                .filter(|l| matches!(l.tokens[0].1, "diagram" | "presentation"))
                .nth(1)
                .map_or(Location { line: 1, column: 1 }, |l| l.at(1));
            Err(ParseError {
                location: second,
                kind: ParseErrorKind::BlockCount(n),
            })
        }
    }
}

pub fn print_diagram(d: &Diagram) -> String {
    let mut s = format!(
        "diagram {} {}\nregions {}\n",
        d.name(),
        if d.is_oriented() {
            "oriented"
        } else {
            "unoriented"
        },
        d.regions().join(" ")
    );
    for a in d.arcs() {
        let r = |i: usize| &d.regions()[i];
        s.push_str(&format!(
            "arc over={} from={} to={}",
            r(a.over),
            r(a.under_from),
            r(a.under_to)
        ));
        if d.is_oriented() {
            s.push_str(&format!(" sign={}", a.sign));
        }
        s.push('\n');
    }
    s
}

pub fn print_presentation(name: &str, p: &Presentation) -> String {
    let mut s = format!("presentation {name}\n");
    if p.generators().is_empty() {
        s.push_str("gens\n");
    } else {
        s.push_str(&format!("gens {}\n", p.generators().join(" ")));
    }
    for r in p.relators() {
        s.push_str(&format!("rel {}\n", r.display_with(p.generators())));
    }
    s
}

pub fn print_input(input: &Input) -> String {
    match input {
        Input::Diagram(d) => print_diagram(d),
        Input::Presentation(p) => print_presentation(&p.name, &p.presentation),
    }
}
