//! Formulas, signed sequents and meta-judgments, with their text syntax.
//!
//! Grammar (ASCII):
//!
//! ```text
//! formula  := or (("->" | "-<") formula)?      right-associative
//! or       := and ("|" and)*                   left-associative
//! and      := unit ("&" unit)*                 left-associative
//! unit     := atom | "T" | "F" | "(" formula ")"
//! atom     := [a-z][a-z0-9_]*
//! sequent  := list ";" list ("|-+" | "|--") formula
//! list     := (formula ("," formula)*)?
//! ```
//!
//! `T` is verum, `F` is falsum, `-<` is co-implication. Negation is not
//! primitive: `A -> F` and `T -< A` are the usual abbreviations.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Atom names, sorted.
pub type AtomSet = BTreeSet<String>;

pub fn atom_set<S: AsRef<str>>(names: &[S]) -> AtomSet {
    names.iter().map(|n| n.as_ref().to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown token {found:?} at offset {offset}")]
    UnknownToken { offset: usize, found: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownToken { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Imp,
    CoImp,
}

impl Connective {
    /// Fixed constructor order used by the enumeration.
    pub const ALL: [Connective; 4] = [Connective::And, Connective::Or, Connective::Imp, Connective::CoImp];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Imp => "->",
            Connective::CoImp => "-<",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            Connective::And => 3,
            Connective::Or => 2,
            Connective::Imp | Connective::CoImp => 1,
        }
    }
}

/// Propositional formula over atoms, verum, falsum, conjunction, disjunction,
/// implication and co-implication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Arc<str>),
    Top,
    Bot,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    CoImp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn binary(op: Connective, left: Formula, right: Formula) -> Formula {
        let (l, r) = (Arc::new(left), Arc::new(right));
        match op {
            Connective::And => Formula::And(l, r),
            Connective::Or => Formula::Or(l, r),
            Connective::Imp => Formula::Imp(l, r),
            Connective::CoImp => Formula::CoImp(l, r),
        }
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::And, left, right)
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::Or, left, right)
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::Imp, left, right)
    }

    pub fn coimp(left: Formula, right: Formula) -> Formula {
        Formula::binary(Connective::CoImp, left, right)
    }

    /// Splits a binary formula into its connective and operands.
    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self {
            Formula::And(l, r) => Some((Connective::And, l, r)),
            Formula::Or(l, r) => Some((Connective::Or, l, r)),
            Formula::Imp(l, r) => Some((Connective::Imp, l, r)),
            Formula::CoImp(l, r) => Some((Connective::CoImp, l, r)),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self.as_binary() {
            Some((_, l, r)) => 1 + l.depth().max(r.depth()),
            None => 0,
        }
    }

    pub fn atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut AtomSet) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.to_string());
            }
            Formula::Top | Formula::Bot => {}
            _ => {
                let (_, l, r) = self.as_binary().expect("binary");
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// All subformulas including the formula itself, without repetition.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if seen.insert(f) {
                out.push(f.clone());
                if let Some((_, l, r)) = f.as_binary() {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }

    fn precedence(&self) -> u8 {
        match self.as_binary() {
            Some((op, _, _)) => op.precedence(),
            None => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Top => write!(f, "T"),
            Formula::Bot => write!(f, "F"),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary");
                let prec = op.precedence();
                // `&` and `|` associate to the left, `->` and `-<` to the right.
                let (left_parens, right_parens) = match op {
                    Connective::And | Connective::Or => (l.precedence() < prec, r.precedence() <= prec),
                    Connective::Imp | Connective::CoImp => (l.precedence() <= prec, r.precedence() < prec),
                };
                write_operand(f, l, left_parens)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, r, right_parens)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, operand: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({operand})")
    } else {
        write!(f, "{operand}")
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn dual(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A signed sequent `(Γ; Δ) ⊢± A`. Γ holds assumptions (verified), Δ holds
/// counterassumptions (falsified). Both are sets, so weakening and
/// contraction are built in. Γ and Δ may overlap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub gamma: BTreeSet<Formula>,
    pub delta: BTreeSet<Formula>,
    pub sign: Sign,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(
        gamma: impl IntoIterator<Item = Formula>,
        delta: impl IntoIterator<Item = Formula>,
        sign: Sign,
        succedent: Formula,
    ) -> Sequent {
        Sequent {
            gamma: gamma.into_iter().collect(),
            delta: delta.into_iter().collect(),
            sign,
            succedent,
        }
    }

    /// Sequent with empty contexts: a provability (`+`) or refutability (`-`) claim.
    pub fn closed(sign: Sign, succedent: Formula) -> Sequent {
        Sequent::new([], [], sign, succedent)
    }

    pub fn dual(&self) -> Sequent {
        Sequent { sign: self.sign.dual(), ..self.clone() }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.gamma.iter().chain(self.delta.iter()).chain(std::iter::once(&self.succedent))
    }

    pub fn atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        for f in self.formulas() {
            f.collect_atoms(&mut out);
        }
        out
    }
}

pub fn dual_sequent(s: &Sequent) -> Sequent {
    s.dual()
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.gamma)?;
        write!(f, ";")?;
        if !self.delta.is_empty() {
            write!(f, " ")?;
            write_list(f, &self.delta)?;
        }
        write!(f, " |-{} {}", self.sign, self.succedent)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &BTreeSet<Formula>) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// Single line: the sequent is proved. Double line: the sequent is refuted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineType {
    Single,
    Double,
}

impl LineType {
    /// Marker used in proof scripts.
    pub fn marker(self) -> &'static str {
        match self {
            LineType::Single => "-|",
            LineType::Double => "=|",
        }
    }

    pub fn from_marker(s: &str) -> Option<LineType> {
        match s {
            "-|" => Some(LineType::Single),
            "=|" => Some(LineType::Double),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaJudgment {
    pub line: LineType,
    pub sequent: Sequent,
}

impl MetaJudgment {
    pub fn single(sequent: Sequent) -> MetaJudgment {
        MetaJudgment { line: LineType::Single, sequent }
    }

    pub fn double(sequent: Sequent) -> MetaJudgment {
        MetaJudgment { line: LineType::Double, sequent }
    }
}

impl fmt::Display for MetaJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.line.marker(), self.sequent)
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Top,
    Bot,
    Op(Connective),
    LParen,
    RParen,
    Comma,
    Semi,
    Turnstile(Sign),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Atom(a) => format!("atom `{a}`"),
            Token::Top => "`T`".into(),
            Token::Bot => "`F`".into(),
            Token::Op(op) => format!("`{}`", op.symbol()),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::Semi => "`;`".into(),
            Token::Turnstile(s) => format!("`|-{s}`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let rest = &text[i..];
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'a'..=b'z' => {
                let len = rest
                    .bytes()
                    .take_while(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || *b == b'_')
                    .count();
                i += len;
                Token::Atom(rest[..len].to_string())
            }
            b'T' | b'F' => {
                // `T`/`F` must not run into an identifier.
                let ident_len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
                if ident_len > 1 {
                    return Err(ParseError::UnknownToken { offset: start, found: rest[..ident_len].to_string() });
                }
                i += 1;
                if c == b'T' {
                    Token::Top
                } else {
                    Token::Bot
                }
            }
            b'&' => {
                i += 1;
                Token::Op(Connective::And)
            }
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            b',' => {
                i += 1;
                Token::Comma
            }
            b';' => {
                i += 1;
                Token::Semi
            }
            b'|' if rest.starts_with("|-+") => {
                i += 3;
                Token::Turnstile(Sign::Plus)
            }
            b'|' if rest.starts_with("|--") => {
                i += 3;
                Token::Turnstile(Sign::Minus)
            }
            b'|' => {
                i += 1;
                Token::Op(Connective::Or)
            }
            b'-' if rest.starts_with("->") => {
                i += 2;
                Token::Op(Connective::Imp)
            }
            b'-' if rest.starts_with("-<") => {
                i += 2;
                Token::Op(Connective::CoImp)
            }
            _ => {
                let ch = rest.chars().next().expect("non-empty");
                return Err(ParseError::UnknownToken { offset: start, found: ch.to_string() });
            }
        };
        out.push((start, token));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { tokens: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, expected: &str) -> ParseError {
        let message = match self.peek() {
            Some(t) => format!("expected {expected}, found {}", t.describe()),
            None => format!("expected {expected}, found end of input"),
        };
        ParseError::Syntax { offset: self.offset(), message }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        match self.peek() {
            Some(Token::Op(op @ (Connective::Imp | Connective::CoImp))) => {
                let op = *op;
                self.pos += 1;
                let right = self.formula()?;
                Ok(Formula::binary(op, left, right))
            }
            _ => Ok(left),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Token::Op(Connective::Or)) {
            self.pos += 1;
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unit()?;
        while self.peek() == Some(&Token::Op(Connective::And)) {
            self.pos += 1;
            let right = self.unit()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        let f = match self.peek() {
            Some(Token::Atom(a)) => Formula::atom(a),
            Some(Token::Top) => Formula::Top,
            Some(Token::Bot) => Formula::Bot,
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error("`)`"));
                }
                self.pos += 1;
                return Ok(inner);
            }
            _ => return Err(self.error("formula")),
        };
        self.pos += 1;
        Ok(f)
    }

    fn list(&mut self, terminator: fn(&Token) -> bool) -> Result<BTreeSet<Formula>, ParseError> {
        let mut out = BTreeSet::new();
        if self.peek().is_some_and(terminator) {
            return Ok(out);
        }
        loop {
            out.insert(self.formula()?);
            match self.peek() {
                Some(Token::Comma) => self.pos += 1,
                _ => return Ok(out),
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses `Γ ; Δ |-± A`. Repeated list entries collapse.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let gamma = p.list(|t| *t == Token::Semi)?;
    if p.peek() != Some(&Token::Semi) {
        return Err(p.error("`,` or `;`"));
    }
    p.pos += 1;
    let delta = p.list(|t| matches!(t, Token::Turnstile(_)))?;
    let sign = match p.peek() {
        Some(Token::Turnstile(s)) => *s,
        _ => return Err(p.error("`,`, `|-+` or `|--`")),
    };
    p.pos += 1;
    let succedent = p.formula()?;
    p.finish()?;
    Ok(Sequent { gamma, delta, sign, succedent })
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl std::str::FromStr for Sequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every formula over `atoms`, `T` and `F` of depth at most `max_depth`,
/// each exactly once. Order: by depth, then connective (`&`, `|`, `->`,
/// `-<`), then left operand, then right operand, operands compared by their
/// own position in this order. Depth 0 lists atoms (sorted), then `T`, `F`.
pub fn enumerate_formulas<S: AsRef<str>>(atoms: &BTreeSet<S>, max_depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = atoms.iter().map(|a| Formula::atom(a.as_ref())).collect();
    all.push(Formula::Top);
    all.push(Formula::Bot);
    // all[..prefix_end[d]] holds the formulas of depth <= d
    let mut prefix_end = vec![all.len()];
    for depth in 1..=max_depth {
        let below = prefix_end[depth - 1];
        let prev_start = if depth >= 2 { prefix_end[depth - 2] } else { 0 };
        let mut layer = Vec::new();
        for op in Connective::ALL {
            for (i, l) in all[..below].iter().enumerate() {
                for (j, r) in all[..below].iter().enumerate() {
                    // exactly depth - 1 for at least one operand
                    if i >= prev_start || j >= prev_start {
                        layer.push(Formula::binary(op, l.clone(), r.clone()));
                    }
                }
            }
        }
        all.extend(layer);
        prefix_end.push(all.len());
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn parses_grammar_cases() {
        assert_eq!(parse_formula("p & q").unwrap(), Formula::and(p(), q()));
        assert_eq!(parse_formula("p -> (q | F)").unwrap(), Formula::imp(p(), Formula::or(q(), Formula::Bot)));
        assert_eq!(parse_formula("p -> q -< p").unwrap(), Formula::imp(p(), Formula::coimp(q(), p())));
        assert_eq!(parse_formula("p | q & p").unwrap(), Formula::or(p(), Formula::and(q(), p())));
        assert_eq!(parse_formula("p & q & p").unwrap(), Formula::and(Formula::and(p(), q()), p()));
    }

    #[test]
    fn incomplete_input_reports_end_offset() {
        let err = parse_formula("p -<").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 4, .. }), "{err:?}");
    }

    #[test]
    fn unknown_tokens() {
        assert!(matches!(parse_formula("p ~ q"), Err(ParseError::UnknownToken { offset: 2, .. })));
        assert!(matches!(parse_formula("Tx"), Err(ParseError::UnknownToken { offset: 0, .. })));
        assert!(matches!(parse_formula("p q"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_formula("(p"), Err(ParseError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(Formula::and(p(), q()).to_string(), "p & q");
        assert_eq!(Formula::Top.to_string(), "T");
        assert_eq!(Formula::coimp(p(), q()).to_string(), "p -< q");
        assert_eq!(Formula::imp(Formula::imp(p(), q()), p()).to_string(), "(p -> q) -> p");
        assert_eq!(Formula::imp(p(), Formula::imp(q(), p())).to_string(), "p -> q -> p");
        assert_eq!(Formula::and(p(), Formula::and(q(), p())).to_string(), "p & (q & p)");
        assert_eq!(Formula::and(Formula::or(p(), q()), p()).to_string(), "(p | q) & p");
    }

    #[test]
    fn parses_sequents() {
        let s = parse_sequent("p, q ; r |-+ p & q").unwrap();
        assert_eq!(s, Sequent::new([p(), q()], [Formula::atom("r")], Sign::Plus, Formula::and(p(), q())));
        assert_eq!(parse_sequent("; |-- F").unwrap(), Sequent::closed(Sign::Minus, Formula::Bot));
        let inconsistent = parse_sequent("p ; p |-+ p").unwrap();
        assert_eq!(inconsistent, Sequent::new([p()], [p()], Sign::Plus, p()));
        assert_eq!(parse_sequent("p, p, q;|-+ p").unwrap().gamma.len(), 2);
        assert_eq!(parse_sequent("p | q; |-- q").unwrap().gamma, [Formula::or(p(), q())].into());
        assert!(parse_sequent("p |-+ p").is_err());
        assert!(parse_sequent("; |-+").is_err());
    }

    #[test]
    fn sequent_display_round_trips() {
        for text in ["; |-- F", "p, q; r |-+ p & q", "p; |-+ p", "; p -> q |-- T"] {
            let s = parse_sequent(text).unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn dual_sequent_flips_sign_only() {
        let s = Sequent::closed(Sign::Plus, p());
        assert_eq!(dual_sequent(&s), Sequent::closed(Sign::Minus, p()));
        let t = Sequent::new([p()], [q()], Sign::Minus, Formula::imp(p(), q()));
        assert_eq!(dual_sequent(&t), Sequent::new([p()], [q()], Sign::Plus, Formula::imp(p(), q())));
        assert_eq!(dual_sequent(&dual_sequent(&t)), t);
    }

    #[test]
    fn enumeration_base_cases() {
        let p_only: BTreeSet<&str> = ["p"].into();
        assert_eq!(enumerate_formulas(&p_only, 0), vec![p(), Formula::Top, Formula::Bot]);
        assert_eq!(enumerate_formulas(&p_only, 1).len(), 39);
        let none: BTreeSet<&str> = BTreeSet::new();
        assert_eq!(enumerate_formulas(&none, 0), vec![Formula::Top, Formula::Bot]);
    }

    #[test]
    fn depth_and_atoms() {
        let f = parse_formula("(p -> q) & T").unwrap();
        assert_eq!(f.depth(), 2);
        assert_eq!(f.atoms().len(), 2);
        assert_eq!(f.subformulas().len(), 5);
    }
}
