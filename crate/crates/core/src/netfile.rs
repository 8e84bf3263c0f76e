//! Line-oriented network files.
//!
//! ```text
//! # comment
//! network tweety
//! var B TB F
//! belief 1 : B & TB -> F label bird_flies
//! belief 0.9 : TB
//! observe B
//! ```
//!
//! The `network` line comes first. Variables must be declared before a
//! formula mentions them. Beliefs without a label get `b<n>`, `n` being
//! the belief's 1-based position.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::Error;
use crate::formula::{parse_formula, Formula};
use crate::frame::{is_identifier, Variable};
use crate::network::{Belief, NetworkSpec};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{line}:{col}: duplicate variable `{name}`")]
    DuplicateVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: undeclared atom `{name}`")]
    UndeclaredAtom { line: usize, col: usize, name: String },
}

impl LoadError {
    fn parse(line: usize, col: usize, message: impl Into<String>) -> Self {
        LoadError::Parse { line, col, message: message.into() }
    }
}

pub fn load_network(path: impl AsRef<Path>) -> Result<NetworkSpec, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.to_owned(), source })?;
    parse_network(&text)
}

/// Byte offset to 1-based character column.
fn column(line: &str, offset: usize) -> usize {
    line[..offset.min(line.len())].chars().count() + 1
}

/// Splits off the first whitespace-delimited word; returns it with its
/// byte offset and the remainder's offset.
fn next_word(line: &str, from: usize) -> Option<(usize, &str, usize)> {
    let rest = &line[from..];
    let start = from + (rest.len() - rest.trim_start().len());
    if start >= line.len() {
        return None;
    }
    let end = line[start..].find(char::is_whitespace).map_or(line.len(), |i| start + i);
    Some((start, &line[start..end], end))
}

struct FileParser {
    name: Option<String>,
    variables: Vec<Variable>,
    beliefs: Vec<(Option<String>, Formula, f64)>,
    observations: Vec<Formula>,
}

impl FileParser {
    fn formula(&self, line_no: usize, line: &str, start: usize, end: usize) -> Result<Formula, LoadError> {
        let text = &line[start..end];
        let formula = parse_formula(text).map_err(|e| match e {
            Error::Syntax { position, message } => {
                let at = if text.trim().is_empty() { start } else { start + position };
                LoadError::parse(line_no, column(line, at), message)
            }
            other => LoadError::parse(line_no, column(line, start), other.to_string()),
        })?;
        for atom in formula.atoms() {
            if !self.variables.iter().any(|v| v.name() == atom) {
                let at = find_identifier(text, atom).map_or(start, |i| start + i);
                return Err(LoadError::UndeclaredAtom {
                    line: line_no,
                    col: column(line, at),
                    name: atom.to_owned(),
                });
            }
        }
        Ok(formula)
    }
}

/// Offset of `name` as a whole identifier inside `text`.
fn find_identifier(text: &str, name: &str) -> Option<usize> {
    let ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    text.match_indices(name).map(|(i, _)| i).find(|&i| {
        let before = text[..i].chars().next_back().is_none_or(|c| !ident(c));
        let after = text[i + name.len()..].chars().next().is_none_or(|c| !ident(c));
        before && after
    })
}

/// A trailing `label <id>` on a belief line, as (keyword offset, id).
/// Two adjacent identifiers never form a valid formula, so the suffix is
/// unambiguous.
fn split_label(line: &str, start: usize, end: usize) -> Option<(usize, &str)> {
    let body = line[start..end].trim_end();
    let (head, id) = body.rsplit_once(char::is_whitespace)?;
    let head = head.trim_end();
    let kw = head.strip_suffix("label")?;
    if !(kw.is_empty() || kw.ends_with(char::is_whitespace)) || kw.trim().is_empty() {
        return None;
    }
    is_identifier(id).then_some((start + kw.len(), id))
}

pub fn parse_network(text: &str) -> Result<NetworkSpec, LoadError> {
    let mut p = FileParser { name: None, variables: Vec::new(), beliefs: Vec::new(), observations: Vec::new() };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.find('#').map_or(raw, |i| &raw[..i]);
        let Some((kw_at, keyword, after_kw)) = next_word(line, 0) else {
            continue;
        };
        if p.name.is_none() && keyword != "network" {
            return Err(LoadError::parse(line_no, column(line, kw_at), "expected `network <name>` header"));
        }
        match keyword {
            "network" => {
                if p.name.is_some() {
                    return Err(LoadError::parse(line_no, column(line, kw_at), "second `network` line"));
                }
                let Some((at, name, after)) = next_word(line, after_kw) else {
                    return Err(LoadError::parse(line_no, column(line, line.len()), "missing network name"));
                };
                if let Some((extra, _, _)) = next_word(line, after) {
                    return Err(LoadError::parse(line_no, column(line, extra), "network name must be one word"));
                }
                let _ = at;
                p.name = Some(name.to_owned());
            }
            "var" => {
                let mut pos = after_kw;
                let mut any = false;
                while let Some((at, name, after)) = next_word(line, pos) {
                    any = true;
                    let var = Variable::new(name).map_err(|_| {
                        LoadError::parse(line_no, column(line, at), format!("illegal variable name `{name}`"))
                    })?;
                    if p.variables.contains(&var) {
                        return Err(LoadError::DuplicateVariable {
                            line: line_no,
                            col: column(line, at),
                            name: name.to_owned(),
                        });
                    }
                    p.variables.push(var);
                    pos = after;
                }
                if !any {
                    return Err(LoadError::parse(line_no, column(line, line.len()), "`var` needs at least one name"));
                }
            }
            "belief" => {
                let Some((w_at, w_text, after_w)) = next_word(line, after_kw) else {
                    return Err(LoadError::parse(line_no, column(line, line.len()), "missing weight"));
                };
                let weight: f64 = w_text
                    .parse()
                    .map_err(|_| LoadError::parse(line_no, column(line, w_at), format!("invalid weight `{w_text}`")))?;
                if !(0.0..=1.0).contains(&weight) {
                    return Err(LoadError::parse(
                        line_no,
                        column(line, w_at),
                        format!("weight {w_text} is outside [0, 1]"),
                    ));
                }
                let colon = match next_word(line, after_w) {
                    Some((at, word, _)) if word.starts_with(':') => at,
                    Some((at, _, _)) => return Err(LoadError::parse(line_no, column(line, at), "expected `:`")),
                    None => return Err(LoadError::parse(line_no, column(line, line.len()), "expected `:`")),
                };
                let f_start = colon + 1;
                let (f_end, label) = match split_label(line, f_start, line.len()) {
                    Some((kw, id)) => (kw, Some(id.to_owned())),
                    None => (line.len(), None),
                };
                let formula = p.formula(line_no, line, f_start, f_end)?;
                if let Some(l) = &label {
                    if p.beliefs.iter().any(|(o, _, _)| o.as_deref() == Some(l)) {
                        return Err(LoadError::parse(line_no, column(line, f_end), format!("duplicate label `{l}`")));
                    }
                }
                p.beliefs.push((label, formula, weight));
            }
            "observe" => {
                let formula = p.formula(line_no, line, after_kw, line.len())?;
                p.observations.push(formula);
            }
            other => {
                return Err(LoadError::parse(line_no, column(line, kw_at), format!("unknown directive `{other}`")));
            }
        }
    }
    let Some(name) = p.name else {
        return Err(LoadError::parse(last_line.max(1), 1, "missing `network <name>` header"));
    };
    if p.variables.is_empty() {
        return Err(LoadError::parse(last_line, 1, "no variables declared"));
    }
    let mut beliefs: Vec<Belief> = Vec::with_capacity(p.beliefs.len());
    let explicit: Vec<String> = p.beliefs.iter().filter_map(|(l, _, _)| l.clone()).collect();
    for (i, (label, formula, weight)) in p.beliefs.into_iter().enumerate() {
        let label = label.unwrap_or_else(|| {
            let mut candidate = format!("b{}", i + 1);
            while explicit.contains(&candidate) || beliefs.iter().any(|b| b.label == candidate) {
                candidate.push('_');
            }
            candidate
        });
        beliefs.push(Belief::new(label, formula, weight));
    }
    NetworkSpec::new(name, p.variables, beliefs, p.observations)
        .map_err(|e| LoadError::parse(last_line, 1, e.to_string()))
}

/// Serializes a network in the file format. `parse_network` of the output
/// yields an equal spec.
pub fn to_network_text(spec: &NetworkSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network {}", spec.name());
    out.push_str("var");
    for v in spec.variables() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    for b in spec.beliefs() {
        let _ = writeln!(out, "belief {} : {} label {}", b.weight, b.formula, b.label);
    }
    for o in spec.observations() {
        let _ = writeln!(out, "observe {o}");
    }
    out
}
