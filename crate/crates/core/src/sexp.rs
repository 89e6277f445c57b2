//! Proof scripts as s-expressions.
//!
//! Base: `(rule-id "sequent" child*)`.
//! Meta: `(rule-id "-|" "sequent" child*)` with `"-|"` single, `"=|"` double.
//! `;` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::calculus::DerivationTree;
use crate::metacalculus::MetaDerivationTree;
use crate::syntax::{parse_sequent, LineType, MetaJudgment, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("script syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("bad sequent at offset {offset}: {source}")]
    Sequent { offset: usize, source: ParseError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Symbol(String, usize),
    Str(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Symbol(_, o) | Sexp::Str(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Syntax { offset, message: message.into() }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn skip_blank(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b';' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ScriptError> {
        self.skip_blank();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Err(syntax(start, "unexpected end of input"));
        };
        match c {
            '(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.src[self.pos..].chars().next() {
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        None => return Err(syntax(self.pos, "unclosed `(`")),
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            ')' => Err(syntax(start, "unexpected `)`")),
            '"' => {
                let body = &rest[1..];
                match body.find('"') {
                    Some(end) => {
                        self.pos += end + 2;
                        Ok(Sexp::Str(body[..end].to_string(), start + 1))
                    }
                    None => Err(syntax(start, "unterminated string")),
                }
            }
            _ => {
                let len = rest.find(|c: char| c.is_whitespace() || "()\";".contains(c)).unwrap_or(rest.len());
                self.pos += len;
                Ok(Sexp::Symbol(rest[..len].to_string(), start))
            }
        }
    }
}

fn read_one(text: &str) -> Result<Sexp, ScriptError> {
    let mut r = Reader { src: text, pos: 0 };
    let e = r.read()?;
    r.skip_blank();
    if r.pos < text.len() {
        return Err(syntax(r.pos, "trailing input after script"));
    }
    Ok(e)
}

fn sequent_at(text: &str, offset: usize) -> Result<crate::syntax::Sequent, ScriptError> {
    parse_sequent(text).map_err(|source| ScriptError::Sequent { offset: offset + source.offset(), source })
}

fn node_head(e: &Sexp) -> Result<(&str, &[Sexp]), ScriptError> {
    let Sexp::List(items, at) = e else {
        return Err(syntax(e.offset(), "expected `(rule-id ...)`"));
    };
    match items.split_first() {
        Some((Sexp::Symbol(id, _), rest)) => Ok((id, rest)),
        Some((other, _)) => Err(syntax(other.offset(), "expected a rule id")),
        None => Err(syntax(*at, "empty node")),
    }
}

fn to_tree(e: &Sexp) -> Result<DerivationTree, ScriptError> {
    let (id, rest) = node_head(e)?;
    let Some((Sexp::Str(text, at), children)) = rest.split_first() else {
        return Err(syntax(e.offset(), format!("`{id}`: expected a sequent string")));
    };
    Ok(DerivationTree {
        conclusion: sequent_at(text, *at)?,
        rule_id: id.to_string(),
        children: children.iter().map(to_tree).collect::<Result<_, _>>()?,
    })
}

fn to_meta_tree(e: &Sexp) -> Result<MetaDerivationTree, ScriptError> {
    let (id, rest) = node_head(e)?;
    let (line, rest) = match rest.split_first() {
        Some((Sexp::Str(marker, at), rest)) => match LineType::from_marker(marker) {
            Some(l) => (l, rest),
            None => return Err(syntax(*at, format!("`{id}`: expected a line marker `-|` or `=|`"))),
        },
        _ => return Err(syntax(e.offset(), format!("`{id}`: expected a line marker"))),
    };
    let Some((Sexp::Str(text, at), children)) = rest.split_first() else {
        return Err(syntax(e.offset(), format!("`{id}`: expected a sequent string")));
    };
    Ok(MetaDerivationTree {
        conclusion: MetaJudgment { line, sequent: sequent_at(text, *at)? },
        rule_id: id.to_string(),
        children: children.iter().map(to_meta_tree).collect::<Result<_, _>>()?,
    })
}

pub fn parse_proof_script(text: &str) -> Result<DerivationTree, ScriptError> {
    to_tree(&read_one(text)?)
}

pub fn parse_meta_script(text: &str) -> Result<MetaDerivationTree, ScriptError> {
    to_meta_tree(&read_one(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Script {
    Base(DerivationTree),
    Meta(MetaDerivationTree),
}

/// Parses either kind of script; a line marker after the root rule id
/// selects the meta format.
pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let e = read_one(text)?;
    let is_meta = matches!(node_head(&e)?.1.first(), Some(Sexp::Str(s, _)) if LineType::from_marker(s).is_some());
    if is_meta {
        to_meta_tree(&e).map(Script::Meta)
    } else {
        to_tree(&e).map(Script::Base)
    }
}

fn write_tree(out: &mut String, t: &DerivationTree, indent: usize) {
    let _ = write!(out, "{:indent$}({} \"{}\"", "", t.rule_id, t.conclusion);
    for c in &t.children {
        out.push('\n');
        write_tree(out, c, indent + 2);
    }
    out.push(')');
}

/// One node per line, children indented.
pub fn print_proof_script(t: &DerivationTree) -> String {
    let mut out = String::new();
    write_tree(&mut out, t, 0);
    out
}

fn write_meta_tree(out: &mut String, t: &MetaDerivationTree, indent: usize) {
    let _ = write!(out, "{:indent$}({} \"{}\" \"{}\"", "", t.rule_id, t.conclusion.line.marker(), t.conclusion.sequent);
    for c in &t.children {
        out.push('\n');
        write_meta_tree(out, c, indent + 2);
    }
    out.push(')');
}

pub fn print_meta_script(t: &MetaDerivationTree) -> String {
    let mut out = String::new();
    write_meta_tree(&mut out, t, 0);
    out
}

/// Single-line form, used inside reports.
pub fn compact_proof_script(t: &DerivationTree) -> String {
    let mut out = format!("({} \"{}\"", t.rule_id, t.conclusion);
    for c in &t.children {
        out.push(' ');
        out.push_str(&compact_proof_script(c));
    }
    out.push(')');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_derivation;

    #[test]
    fn base_script_round_trip() {
        let text = r#"(and-r+ "; |-+ T & T" (top-r+ "; |-+ T") (top-r+ "; |-+ T"))"#;
        let tree = parse_proof_script(text).unwrap();
        assert!(check_derivation(&tree).is_accepted());
        assert_eq!(compact_proof_script(&tree), text);
        assert_eq!(parse_proof_script(&print_proof_script(&tree)).unwrap(), tree);
    }

    #[test]
    fn meta_script_round_trip() {
        let text = r#"(s2a "-|" "; |-- F & p" (and-r-a[S>D] "=|" "; |-+ F & p" (bot-r- "-|" "; |-- F")))"#;
        let Script::Meta(tree) = parse_script(text).unwrap() else { panic!() };
        assert_eq!(tree.children[0].rule_id, "and-r-a[S>D]");
        assert_eq!(tree.children[0].conclusion.line, LineType::Double);
        assert_eq!(parse_meta_script(&print_meta_script(&tree)).unwrap(), tree);
    }

    #[test]
    fn comments_and_errors() {
        let text = "; identity\n(ax+ \"p; |-+ p\") ; done\n";
        assert!(matches!(parse_script(text).unwrap(), Script::Base(_)));
        assert!(matches!(parse_proof_script("(ax+ \"p; |-+ p\""), Err(ScriptError::Syntax { .. })));
        assert!(matches!(parse_proof_script("(ax+)"), Err(ScriptError::Syntax { .. })));
        assert!(matches!(parse_proof_script("(ax+ \"p |-+ p\")"), Err(ScriptError::Sequent { .. })));
        assert!(matches!(parse_meta_script("(ax+ \"~|\" \"p; |-+ p\")"), Err(ScriptError::Syntax { offset: 6, .. })));
        assert!(matches!(parse_proof_script("(ax+ \"p; |-+ p\") x"), Err(ScriptError::Syntax { offset: 17, .. })));
    }
}
