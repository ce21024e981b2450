//! The `pht` text format for sketches.
//!
//! ```text
//! pht 1
//! flags numbered=no labeled=yes links=no
//! alphabet abc          # optional
//! root r
//! edge r x a            # parent child label, `-` when unlabeled
//! num x 1               # only when numbered
//! slink x r             # only when links
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Ids are whitespace-free
//! tokens. Since `-` marks a missing label it cannot itself be a label.

use thiserror::Error;

use crate::heap::{is_letter, Alphabet};
use crate::sketch::{Flags, HeapSketch, SketchBuilder, SketchError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Node { line: usize, source: SketchError },
    #[error("{0}")]
    Content(#[from] SketchError),
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("id {0:?} cannot be written: ids must be nonempty tokens without whitespace or '#'")]
    BadId(String),
    #[error("letter {0:?} cannot be written: '#' starts a comment and '-' marks a missing label")]
    BadLetter(char),
}

fn yes_no(line: usize, key: &str, field: &str) -> Result<bool, FormatError> {
    let syntax = |message: String| FormatError::Syntax { line, message };
    let (k, v) = field
        .split_once('=')
        .ok_or_else(|| syntax(format!("expected {key}=yes|no, found {field:?}")))?;
    if k != key {
        return Err(syntax(format!("expected {key}=..., found {field:?}")));
    }
    match v {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => Err(syntax(format!("{key} must be yes or no, found {v:?}"))),
    }
}

pub fn parse_pht(input: &str) -> Result<HeapSketch, FormatError> {
    let mut header = false;
    let mut flags: Option<Flags> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut builder: Option<SketchBuilder> = None;

    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let syntax = |message: String| FormatError::Syntax { line, message };
        let arity = |n: usize| {
            if words.len() == n {
                Ok(())
            } else {
                Err(syntax(format!("`{}` takes {} field(s)", words[0], n - 1)))
            }
        };
        if !header {
            if words != ["pht", "1"] {
                return Err(syntax("expected `pht 1`".into()));
            }
            header = true;
            continue;
        }
        match words[0] {
            "pht" => return Err(syntax("repeated header".into())),
            "flags" => {
                arity(4)?;
                if flags.is_some() {
                    return Err(syntax("repeated `flags`".into()));
                }
                flags = Some(Flags {
                    numbered: yes_no(line, "numbered", words[1])?,
                    labeled: yes_no(line, "labeled", words[2])?,
                    links: yes_no(line, "links", words[3])?,
                });
            }
            "alphabet" => {
                arity(2)?;
                if alphabet.is_some() {
                    return Err(syntax("repeated `alphabet`".into()));
                }
                alphabet = Some(words[1].parse().map_err(|e| syntax(format!("{e}")))?);
            }
            "root" => {
                arity(2)?;
                if builder.is_some() {
                    return Err(syntax("repeated `root`".into()));
                }
                builder = Some(SketchBuilder::new(words[1]));
            }
            "edge" => {
                arity(4)?;
                let b = builder.as_mut().ok_or_else(|| syntax("`edge` before `root`".into()))?;
                let label = match words[3].as_bytes() {
                    b"-" => None,
                    &[c] if is_letter(c) => Some(c),
                    _ => return Err(syntax(format!("label must be one letter or -, found {:?}", words[3]))),
                };
                b.edge(words[1], words[2], label)
                    .map_err(|source| FormatError::Node { line, source })?;
            }
            "num" => {
                arity(3)?;
                let b = builder.as_mut().ok_or_else(|| syntax("`num` before `root`".into()))?;
                let n: usize = words[2]
                    .parse()
                    .map_err(|_| syntax(format!("bad number {:?}", words[2])))?;
                b.number(words[1], n);
            }
            "slink" => {
                arity(3)?;
                let b = builder.as_mut().ok_or_else(|| syntax("`slink` before `root`".into()))?;
                b.link(words[1], words[2]);
            }
            other => return Err(syntax(format!("unknown record {other:?}"))),
        }
    }
    if !header {
        return Err(FormatError::Missing("pht 1"));
    }
    let flags = flags.ok_or(FormatError::Missing("flags"))?;
    let mut b = builder.ok_or(FormatError::Missing("root"))?;
    if let Some(a) = alphabet {
        b.alphabet(a);
    }
    Ok(b.build(flags)?)
}

fn check_id(id: &str) -> Result<&str, FormatError> {
    if id.is_empty() || id.contains('#') || id.chars().any(char::is_whitespace) {
        return Err(FormatError::BadId(id.to_string()));
    }
    Ok(id)
}

fn check_letter(c: u8) -> Result<char, FormatError> {
    match c {
        b'#' | b'-' => Err(FormatError::BadLetter(c as char)),
        _ => Ok(c as char),
    }
}

pub fn write_pht(s: &HeapSketch) -> Result<String, FormatError> {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let f = s.flags();
    let mut out = String::from("pht 1\n");
    out += &format!("flags numbered={} labeled={} links={}\n", yn(f.numbered), yn(f.labeled), yn(f.links));
    if let Some(a) = s.alphabet() {
        a.letters().iter().try_for_each(|&c| check_letter(c).map(drop))?;
        out += &format!("alphabet {a}\n");
    }
    out += &format!("root {}\n", check_id(s.id(0))?);
    for v in 1..s.node_count() {
        let label = s.label(v).map_or(Ok('-'), check_letter)?;
        let parent = s.id(s.parent(v).unwrap());
        out += &format!("edge {} {} {}\n", parent, check_id(s.id(v))?, label);
    }
    if let Some(numbers) = s.numbers() {
        for (v, n) in numbers.iter().enumerate() {
            out += &format!("num {} {}\n", s.id(v), n);
        }
    }
    for v in 0..s.node_count() {
        if let Some(t) = s.link(v) {
            out += &format!("slink {} {}\n", s.id(v), s.id(t));
        }
    }
    Ok(out)
}
