//! Plain-text format for presentations.
//!
//! ```text
//! # comment (allowed anywhere, also trailing)
//! group bg
//! gens a b alpha beta
//! rel b a^-2 b^-1 a^3
//! ```
//!
//! A file holds an optional `group <name>` line, exactly one `gens` line, and
//! any number of `rel` lines. A relator is a whitespace-separated list of
//! factors `g`, `g^k`, or `g^-k`. When parsing with a parameter value set
//! (see [`ParseOptions`]), exponents may also use the template forms `p`,
//! `-p`, `p+3`, `-p-1`, …, which expand to integers at load time.

use crate::presentation::{Presentation, PresentationError};
use crate::word::{Syllable, Word};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: exponent uses the parameter `p`, but no value for p was supplied")]
    SymbolicExponent { line: usize },
    #[error("line {line}: relator {index} freely reduces to the empty word")]
    TrivialRelator { line: usize, index: usize },
    #[error("no `gens` line found")]
    MissingGens,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Value substituted for the symbolic exponent parameter `p`.
    pub p: Option<i64>,
}

/// A parsed file: the presentation plus the optional `group` header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFile {
    pub name: Option<String>,
    pub presentation: Presentation,
}

/// Parse exponent text: `'-'? ( digits | 'p' (('+'|'-') digits)? )`.
fn parse_exponent(text: &str, opts: ParseOptions, line: usize) -> Result<i64, ParseError> {
    let syntax = |msg: String| ParseError::Syntax { line, msg };
    let (negated, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if let Some(tail) = body.strip_prefix('p') {
        let p = opts.p.ok_or(ParseError::SymbolicExponent { line })?;
        let offset = if tail.is_empty() {
            0
        } else {
            let (sign, digits) = match tail.split_at(1) {
                ("+", d) => (1i64, d),
                ("-", d) => (-1i64, d),
                _ => return Err(syntax(format!("malformed exponent `{text}`"))),
            };
            let magnitude: i64 = digits
                .parse()
                .map_err(|_| syntax(format!("malformed exponent `{text}`")))?;
            sign * magnitude
        };
        Ok(if negated { -p } else { p } + offset)
    } else {
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(format!("malformed exponent `{text}`")));
        }
        let magnitude: i64 = body
            .parse()
            .map_err(|_| syntax(format!("exponent `{text}` out of range")))?;
        Ok(if negated { -magnitude } else { magnitude })
    }
}

fn parse_factor(
    token: &str,
    names: &[String],
    opts: ParseOptions,
    line: usize,
) -> Result<Syllable, ParseError> {
    let (name, exp) = match token.split_once('^') {
        Some((name, exp_text)) => (name, parse_exponent(exp_text, opts, line)?),
        None => (token, 1),
    };
    let gen = names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| ParseError::UnknownGenerator {
            line,
            name: name.to_string(),
        })? as u32;
    Ok(Syllable::new(gen, exp))
}

/// Parse a word over the given generator names. The single token `1` denotes
/// the identity (unless a generator is literally named `1`).
pub fn parse_word_with(
    text: &str,
    names: &[String],
    opts: ParseOptions,
    line: usize,
) -> Result<Word, ParseError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["1"] && !names.iter().any(|n| n == "1") {
        return Ok(Word::identity());
    }
    let mut syllables = Vec::with_capacity(tokens.len());
    for token in tokens {
        syllables.push(parse_factor(token, names, opts, line)?);
    }
    Ok(Word::from_syllables(syllables))
}

/// Parse a word in the context of a presentation (CLI word arguments).
pub fn parse_word(text: &str, pres: &Presentation) -> Result<Word, ParseError> {
    parse_word_with(text, pres.names(), ParseOptions::default(), 0)
}

/// Parse a presentation file.
pub fn parse_group_file(text: &str, opts: ParseOptions) -> Result<GroupFile, ParseError> {
    let mut group_name: Option<String> = None;
    let mut names: Option<Vec<String>> = None;
    // Relators, with source info for error reporting: (line, index, body).
    let mut relator_lines: Vec<(usize, usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = match content.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (content, ""),
        };
        match keyword {
            "group" => {
                if group_name.is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "duplicate `group` line".into(),
                    });
                }
                if rest.is_empty() || rest.split_whitespace().count() != 1 {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`group` expects exactly one name".into(),
                    });
                }
                group_name = Some(rest.to_string());
            }
            "gens" => {
                if names.is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "duplicate `gens` line".into(),
                    });
                }
                let list: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if list.is_empty() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`gens` expects at least one name".into(),
                    });
                }
                names = Some(list);
            }
            "rel" => {
                if names.is_none() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`rel` before `gens`".into(),
                    });
                }
                if rest.is_empty() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`rel` expects a word".into(),
                    });
                }
                relator_lines.push((line, relator_lines.len() + 1, rest.to_string()));
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    let names = names.ok_or(ParseError::MissingGens)?;
    let mut relators = Vec::with_capacity(relator_lines.len());
    for (line, index, body) in &relator_lines {
        let word = parse_word_with(body, &names, opts, *line)?;
        if word.is_identity() {
            return Err(ParseError::TrivialRelator {
                line: *line,
                index: *index,
            });
        }
        relators.push(word);
    }
    let presentation = Presentation::new(names, relators)?;
    Ok(GroupFile {
        name: group_name,
        presentation,
    })
}

/// Render a word using the presentation's generator names. The identity
/// prints as `1`.
pub fn format_word(word: &Word, pres: &Presentation) -> String {
    format_word_names(word, pres.names())
}

pub fn format_word_names(word: &Word, names: &[String]) -> String {
    if word.is_identity() {
        return "1".to_string();
    }
    let mut out = String::new();
    for (i, s) in word.syllables().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let name = &names[s.gen as usize];
        if s.exp == 1 {
            out.push_str(name);
        } else {
            let _ = write!(out, "{name}^{}", s.exp);
        }
    }
    out
}

/// Render a presentation back to file form (numeric exponents only).
/// `parse_group_file(print_group_file(f), default)` is the identity.
pub fn print_group_file(file: &GroupFile) -> String {
    let mut out = String::new();
    if let Some(name) = &file.name {
        let _ = writeln!(out, "group {name}");
    }
    let _ = writeln!(out, "gens {}", file.presentation.names().join(" "));
    for r in file.presentation.relators() {
        let _ = writeln!(out, "rel {}", format_word(r, &file.presentation));
    }
    out
}
