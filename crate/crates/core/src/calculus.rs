//! The single-lined sequent calculus: rule schemata over sequent patterns,
//! the fixed catalogue, instantiation and derivation checking.
//!
//! Every pattern carries the implicit context variables `Γ` and `Δ`; a
//! pattern `Γ, A; Δ |-+ B` denotes the sequent `(Γ ∪ {A}; Δ) ⊢⁺ B`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::syntax::{Connective, Formula, Sequent, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaVar {
    A,
    B,
    C,
}

impl MetaVar {
    pub const ALL: [MetaVar; 3] = [MetaVar::A, MetaVar::B, MetaVar::C];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for MetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MetaVar::A => "A",
            MetaVar::B => "B",
            MetaVar::C => "C",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(MetaVar),
    Top,
    Bot,
    Binary(Connective, Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    fn visit_vars(&self, out: &mut BTreeSet<MetaVar>) {
        match self {
            Pattern::Var(v) => {
                out.insert(*v);
            }
            Pattern::Top | Pattern::Bot => {}
            Pattern::Binary(_, l, r) => {
                l.visit_vars(out);
                r.visit_vars(out);
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(v) => write!(f, "{v}"),
            Pattern::Top => write!(f, "T"),
            Pattern::Bot => write!(f, "F"),
            Pattern::Binary(op, l, r) => {
                let atomic = |p: &Pattern| !matches!(p, Pattern::Binary(..));
                let wrap = |p: &Pattern| if atomic(p) { p.to_string() } else { format!("({p})") };
                write!(f, "{} {} {}", wrap(l), op.symbol(), wrap(r))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignPattern {
    Fixed(Sign),
    /// The rule's sign variable `*`.
    Var,
    /// The dual of the sign variable.
    DualVar,
}

impl SignPattern {
    pub fn dual(self) -> SignPattern {
        match self {
            SignPattern::Fixed(s) => SignPattern::Fixed(s.dual()),
            SignPattern::Var => SignPattern::DualVar,
            SignPattern::DualVar => SignPattern::Var,
        }
    }

    pub fn resolve(self, var: Option<Sign>) -> Option<Sign> {
        match self {
            SignPattern::Fixed(s) => Some(s),
            SignPattern::Var => var,
            SignPattern::DualVar => var.map(Sign::dual),
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignPattern::Fixed(s) => write!(f, "{s}"),
            SignPattern::Var => write!(f, "*"),
            SignPattern::DualVar => write!(f, "~*"),
        }
    }
}

/// `(Γ, gamma...; Δ, delta...) ⊢sign succedent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequentPattern {
    pub gamma: Vec<Pattern>,
    pub delta: Vec<Pattern>,
    pub sign: SignPattern,
    pub succedent: Pattern,
}

impl SequentPattern {
    pub fn dual(&self) -> SequentPattern {
        SequentPattern { sign: self.sign.dual(), ..self.clone() }
    }

    pub fn metavars(&self) -> BTreeSet<MetaVar> {
        let mut out = BTreeSet::new();
        for p in self.gamma.iter().chain(&self.delta).chain(std::iter::once(&self.succedent)) {
            p.visit_vars(&mut out);
        }
        out
    }

    pub fn uses_sign_var(&self) -> bool {
        !matches!(self.sign, SignPattern::Fixed(_))
    }
}

impl fmt::Display for SequentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G")?;
        for p in &self.gamma {
            write!(f, ", {p}")?;
        }
        write!(f, "; D")?;
        for p in &self.delta {
            write!(f, ", {p}")?;
        }
        write!(f, " |-{} {}", self.sign, self.succedent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSchema {
    pub id: String,
    pub premises: Vec<SequentPattern>,
    pub conclusion: SequentPattern,
}

impl RuleSchema {
    pub fn arity(&self) -> usize {
        self.premises.len()
    }

    pub fn metavars(&self) -> BTreeSet<MetaVar> {
        let mut out = self.conclusion.metavars();
        for p in &self.premises {
            out.extend(p.metavars());
        }
        out
    }

    pub fn uses_sign_var(&self) -> bool {
        self.conclusion.uses_sign_var() || self.premises.iter().any(SequentPattern::uses_sign_var)
    }

    /// Rules that can grow the goal under backward search.
    pub fn is_premise_growing(&self) -> bool {
        matches!(self.id.as_str(), "imp-l-gamma" | "coimp-l-delta")
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.id)?;
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, "  &&  ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "  ==>  {}", self.conclusion)
    }
}

// ---------------------------------------------------------------------------
// Catalogue

fn var(v: MetaVar) -> Pattern {
    Pattern::Var(v)
}

fn bin(op: Connective, l: Pattern, r: Pattern) -> Pattern {
    Pattern::Binary(op, Box::new(l), Box::new(r))
}

fn seq(gamma: Vec<Pattern>, delta: Vec<Pattern>, sign: SignPattern, succedent: Pattern) -> SequentPattern {
    SequentPattern { gamma, delta, sign, succedent }
}

fn rule(id: &str, premises: Vec<SequentPattern>, conclusion: SequentPattern) -> RuleSchema {
    RuleSchema { id: id.to_string(), premises, conclusion }
}

fn build_catalogue() -> Vec<RuleSchema> {
    use Connective::*;
    use MetaVar::{A, B, C};
    let plus = SignPattern::Fixed(Sign::Plus);
    let minus = SignPattern::Fixed(Sign::Minus);
    let any = SignPattern::Var;
    let (a, b, c) = (var(A), var(B), var(C));
    let ab = |op| bin(op, var(A), var(B));

    vec![
        // zero-premise rules
        rule("ax+", vec![], seq(vec![a.clone()], vec![], plus, a.clone())),
        rule("ax-", vec![], seq(vec![], vec![a.clone()], minus, a.clone())),
        rule("top-r+", vec![], seq(vec![], vec![], plus, Pattern::Top)),
        rule("bot-r-", vec![], seq(vec![], vec![], minus, Pattern::Bot)),
        rule("bot-l", vec![], seq(vec![Pattern::Bot], vec![], any, c.clone())),
        rule("top-l", vec![], seq(vec![], vec![Pattern::Top], any, c.clone())),
        // right rules
        rule(
            "and-r+",
            vec![seq(vec![], vec![], plus, a.clone()), seq(vec![], vec![], plus, b.clone())],
            seq(vec![], vec![], plus, ab(And)),
        ),
        rule("and-r-a", vec![seq(vec![], vec![], minus, a.clone())], seq(vec![], vec![], minus, ab(And))),
        rule("and-r-b", vec![seq(vec![], vec![], minus, b.clone())], seq(vec![], vec![], minus, ab(And))),
        rule("or-r+a", vec![seq(vec![], vec![], plus, a.clone())], seq(vec![], vec![], plus, ab(Or))),
        rule("or-r+b", vec![seq(vec![], vec![], plus, b.clone())], seq(vec![], vec![], plus, ab(Or))),
        rule(
            "or-r-",
            vec![seq(vec![], vec![], minus, a.clone()), seq(vec![], vec![], minus, b.clone())],
            seq(vec![], vec![], minus, ab(Or)),
        ),
        rule("imp-r+", vec![seq(vec![a.clone()], vec![], plus, b.clone())], seq(vec![], vec![], plus, ab(Imp))),
        rule(
            "imp-r-",
            vec![seq(vec![], vec![], plus, a.clone()), seq(vec![], vec![], minus, b.clone())],
            seq(vec![], vec![], minus, ab(Imp)),
        ),
        rule("coimp-r-", vec![seq(vec![], vec![a.clone()], minus, b.clone())], seq(vec![], vec![], minus, ab(CoImp))),
        rule(
            "coimp-r+",
            vec![seq(vec![], vec![], minus, a.clone()), seq(vec![], vec![], plus, b.clone())],
            seq(vec![], vec![], plus, ab(CoImp)),
        ),
        // left rules
        rule(
            "and-l-gamma",
            vec![seq(vec![a.clone(), b.clone()], vec![], any, c.clone())],
            seq(vec![ab(And)], vec![], any, c.clone()),
        ),
        rule(
            "and-l-delta",
            vec![seq(vec![], vec![a.clone()], any, c.clone()), seq(vec![], vec![b.clone()], any, c.clone())],
            seq(vec![], vec![ab(And)], any, c.clone()),
        ),
        rule(
            "or-l-gamma",
            vec![seq(vec![a.clone()], vec![], any, c.clone()), seq(vec![b.clone()], vec![], any, c.clone())],
            seq(vec![ab(Or)], vec![], any, c.clone()),
        ),
        rule(
            "or-l-delta",
            vec![seq(vec![], vec![a.clone(), b.clone()], any, c.clone())],
            seq(vec![], vec![ab(Or)], any, c.clone()),
        ),
        rule(
            "imp-l-delta",
            vec![seq(vec![a.clone()], vec![b.clone()], any, c.clone())],
            seq(vec![], vec![ab(Imp)], any, c.clone()),
        ),
        rule(
            "coimp-l-gamma",
            vec![seq(vec![b.clone()], vec![a.clone()], any, c.clone())],
            seq(vec![ab(CoImp)], vec![], any, c.clone()),
        ),
        // premise-growing rules come last; the principal formula stays in
        // the context of the first premise
        rule(
            "imp-l-gamma",
            vec![seq(vec![ab(Imp)], vec![], plus, a.clone()), seq(vec![b.clone()], vec![], any, c.clone())],
            seq(vec![ab(Imp)], vec![], any, c.clone()),
        ),
        rule(
            "coimp-l-delta",
            vec![seq(vec![], vec![ab(CoImp)], minus, a.clone()), seq(vec![], vec![b.clone()], any, c.clone())],
            seq(vec![], vec![ab(CoImp)], any, c),
        ),
    ]
}

/// The fixed rule catalogue, in search order.
pub fn base_rules() -> &'static [RuleSchema] {
    static CATALOGUE: OnceLock<Vec<RuleSchema>> = OnceLock::new();
    CATALOGUE.get_or_init(build_catalogue)
}

pub fn find_rule(id: &str) -> Option<&'static RuleSchema> {
    base_rules().iter().find(|r| r.id == id)
}

/// Right rules for the four binary connectives: the rules whose line
/// variants make up the two-level calculus.
pub fn connective_right_rules() -> impl Iterator<Item = &'static RuleSchema> {
    base_rules().iter().filter(|r| {
        !r.premises.is_empty()
            && r.conclusion.gamma.is_empty()
            && r.conclusion.delta.is_empty()
            && matches!(r.conclusion.succedent, Pattern::Binary(..))
    })
}

// ---------------------------------------------------------------------------
// Bindings and instantiation

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Bindings {
    formulas: [Option<Formula>; 3],
    pub sign: Option<Sign>,
    pub gamma: Option<BTreeSet<Formula>>,
    pub delta: Option<BTreeSet<Formula>>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn with(mut self, v: MetaVar, f: Formula) -> Bindings {
        self.formulas[v.index()] = Some(f);
        self
    }

    pub fn with_sign(mut self, s: Sign) -> Bindings {
        self.sign = Some(s);
        self
    }

    pub fn with_contexts(
        mut self,
        gamma: impl IntoIterator<Item = Formula>,
        delta: impl IntoIterator<Item = Formula>,
    ) -> Bindings {
        self.gamma = Some(gamma.into_iter().collect());
        self.delta = Some(delta.into_iter().collect());
        self
    }

    pub fn get(&self, v: MetaVar) -> Option<&Formula> {
        self.formulas[v.index()].as_ref()
    }

    pub fn set(&mut self, v: MetaVar, f: Formula) {
        self.formulas[v.index()] = Some(f);
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for v in MetaVar::ALL {
            if let Some(x) = self.get(v) {
                parts.push(format!("{v} = {x}"));
            }
        }
        if let Some(s) = self.sign {
            parts.push(format!("* = {s}"));
        }
        let set = |s: &BTreeSet<Formula>| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        if let Some(g) = &self.gamma {
            parts.push(format!("G = {{{}}}", set(g)));
        }
        if let Some(d) = &self.delta {
            parts.push(format!("D = {{{}}}", set(d)));
        }
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("missing binding for {0}")]
    MissingBinding(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule_id: String,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

pub fn instantiate_pattern(p: &Pattern, b: &Bindings) -> Result<Formula, InstantiateError> {
    Ok(match p {
        Pattern::Var(v) => b.get(*v).cloned().ok_or_else(|| InstantiateError::MissingBinding(v.to_string()))?,
        Pattern::Top => Formula::Top,
        Pattern::Bot => Formula::Bot,
        Pattern::Binary(op, l, r) => Formula::binary(*op, instantiate_pattern(l, b)?, instantiate_pattern(r, b)?),
    })
}

pub fn instantiate_sequent(p: &SequentPattern, b: &Bindings) -> Result<Sequent, InstantiateError> {
    let missing = |name: &str| InstantiateError::MissingBinding(name.to_string());
    let mut gamma = b.gamma.clone().ok_or_else(|| missing("G"))?;
    let mut delta = b.delta.clone().ok_or_else(|| missing("D"))?;
    for item in &p.gamma {
        gamma.insert(instantiate_pattern(item, b)?);
    }
    for item in &p.delta {
        delta.insert(instantiate_pattern(item, b)?);
    }
    let sign = p.sign.resolve(b.sign).ok_or_else(|| missing("*"))?;
    Ok(Sequent { gamma, delta, sign, succedent: instantiate_pattern(&p.succedent, b)? })
}

/// Checks that `b` covers every metavariable of the rule, in the order
/// A, B, C, sign, Γ, Δ, reporting the first one missing.
fn check_coverage(vars: &BTreeSet<MetaVar>, uses_sign: bool, b: &Bindings) -> Result<(), InstantiateError> {
    for v in vars {
        if b.get(*v).is_none() {
            return Err(InstantiateError::MissingBinding(v.to_string()));
        }
    }
    if uses_sign && b.sign.is_none() {
        return Err(InstantiateError::MissingBinding("*".into()));
    }
    if b.gamma.is_none() {
        return Err(InstantiateError::MissingBinding("G".into()));
    }
    if b.delta.is_none() {
        return Err(InstantiateError::MissingBinding("D".into()));
    }
    Ok(())
}

pub fn instantiate(rule: &RuleSchema, b: &Bindings) -> Result<RuleInstance, InstantiateError> {
    check_coverage(&rule.metavars(), rule.uses_sign_var(), b)?;
    Ok(RuleInstance {
        rule_id: rule.id.clone(),
        premises: rule.premises.iter().map(|p| instantiate_sequent(p, b)).collect::<Result<_, _>>()?,
        conclusion: instantiate_sequent(&rule.conclusion, b)?,
    })
}

// ---------------------------------------------------------------------------
// Matching

/// How context variables are bound when a principal formula also belongs to
/// the surrounding context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextChoice {
    /// Γ excludes the explicit formulas (used by proof search).
    Minimal,
    /// Every Γ with Γ ∪ explicit = context (used by the checker).
    All,
}

fn match_formula(p: &Pattern, f: &Formula, b: &mut Bindings) -> bool {
    match p {
        Pattern::Var(v) => match b.get(*v) {
            Some(bound) => bound == f,
            None => {
                b.set(*v, f.clone());
                true
            }
        },
        Pattern::Top => *f == Formula::Top,
        Pattern::Bot => *f == Formula::Bot,
        Pattern::Binary(op, pl, pr) => match f.as_binary() {
            Some((fop, fl, fr)) if fop == *op => match_formula(pl, fl, b) && match_formula(pr, fr, b),
            _ => false,
        },
    }
}

/// All ways of matching each explicit item to some member of `set`.
fn match_items(items: &[Pattern], set: &BTreeSet<Formula>, b: Bindings, out: &mut Vec<Bindings>) {
    let Some((first, rest)) = items.split_first() else {
        out.push(b);
        return;
    };
    for candidate in set {
        let mut trial = b.clone();
        if match_formula(first, candidate, &mut trial) {
            match_items(rest, set, trial, out);
        }
    }
}

fn context_options(items: &[Pattern], set: &BTreeSet<Formula>, b: &Bindings, choice: ContextChoice) -> Vec<BTreeSet<Formula>> {
    let explicit: Vec<Formula> = items
        .iter()
        .map(|p| instantiate_pattern(p, b).expect("explicit items are bound after matching"))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let base: BTreeSet<Formula> = set.iter().filter(|f| !explicit.contains(f)).cloned().collect();
    match choice {
        ContextChoice::Minimal => vec![base],
        ContextChoice::All => (0u32..1 << explicit.len())
            .map(|mask| {
                let mut ctx = base.clone();
                for (i, f) in explicit.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        ctx.insert(f.clone());
                    }
                }
                ctx
            })
            .collect(),
    }
}

/// Every binding under which `pattern` instantiates to `s`.
pub fn match_sequent(pattern: &SequentPattern, s: &Sequent, choice: ContextChoice) -> Vec<Bindings> {
    match_sequent_from(pattern, s, choice, Bindings::new())
}

pub fn match_sequent_from(pattern: &SequentPattern, s: &Sequent, choice: ContextChoice, start: Bindings) -> Vec<Bindings> {
    let mut b = start;
    match pattern.sign {
        SignPattern::Fixed(sign) if sign != s.sign => return vec![],
        SignPattern::Fixed(_) => {}
        SignPattern::Var | SignPattern::DualVar => {
            let var_sign = if pattern.sign == SignPattern::Var { s.sign } else { s.sign.dual() };
            match b.sign {
                Some(bound) if bound != var_sign => return vec![],
                _ => b.sign = Some(var_sign),
            }
        }
    }
    if !match_formula(&pattern.succedent, &s.succedent, &mut b) {
        return vec![];
    }
    let mut after_gamma = Vec::new();
    match_items(&pattern.gamma, &s.gamma, b, &mut after_gamma);
    let mut after_delta = Vec::new();
    for b in after_gamma {
        match_items(&pattern.delta, &s.delta, b, &mut after_delta);
    }
    let mut out = Vec::new();
    for b in after_delta {
        let gammas = context_options(&pattern.gamma, &s.gamma, &b, choice);
        let deltas = context_options(&pattern.delta, &s.delta, &b, choice);
        for g in &gammas {
            for d in &deltas {
                let mut full = b.clone();
                full.gamma = Some(g.clone());
                full.delta = Some(d.clone());
                if !out.contains(&full) {
                    out.push(full);
                }
            }
        }
    }
    out
}

/// Premise lists obtainable by applying `rule` backwards to `goal`.
pub fn backward_instances(rule: &RuleSchema, goal: &Sequent, choice: ContextChoice) -> Vec<(Bindings, Vec<Sequent>)> {
    match_sequent(&rule.conclusion, goal, choice)
        .into_iter()
        .filter_map(|b| {
            let premises = rule.premises.iter().map(|p| instantiate_sequent(p, &b)).collect::<Result<Vec<_>, _>>().ok()?;
            Some((b, premises))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Derivations

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    pub conclusion: Sequent,
    pub rule_id: String,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn leaf(rule_id: &str, conclusion: Sequent) -> DerivationTree {
        DerivationTree { conclusion, rule_id: rule_id.to_string(), children: vec![] }
    }

    pub fn node(rule_id: &str, conclusion: Sequent, children: Vec<DerivationTree>) -> DerivationTree {
        DerivationTree { conclusion, rule_id: rule_id.to_string(), children }
    }

    /// Number of rule applications on the longest branch.
    pub fn height(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::size).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `path` lists child indices from the root to the offending node.
    Rejected { path: Vec<usize>, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "accepted"),
            Verdict::Rejected { path, reason } => {
                let at = if path.is_empty() {
                    "root".to_string()
                } else {
                    format!("root/{}", path.iter().map(ToString::to_string).collect::<Vec<_>>().join("/"))
                };
                write!(f, "rejected at {at}: {reason}")
            }
        }
    }
}

/// Whether `conclusion` follows from `premises` by one application of `rule`.
pub fn is_rule_instance(rule: &RuleSchema, premises: &[&Sequent], conclusion: &Sequent) -> bool {
    premises.len() == rule.arity()
        && match_sequent(&rule.conclusion, conclusion, ContextChoice::All).into_iter().any(|b| {
            rule.premises
                .iter()
                .zip(premises)
                .all(|(p, actual)| instantiate_sequent(p, &b).is_ok_and(|s| &s == *actual))
        })
}

pub fn check_derivation(tree: &DerivationTree) -> Verdict {
    let mut path = Vec::new();
    check_node(tree, &mut path)
}

fn check_node(node: &DerivationTree, path: &mut Vec<usize>) -> Verdict {
    let reject = |path: &Vec<usize>, reason: String| Verdict::Rejected { path: path.clone(), reason };
    let Some(rule) = find_rule(&node.rule_id) else {
        return reject(path, format!("unknown rule `{}`", node.rule_id));
    };
    if rule.arity() != node.children.len() {
        return reject(
            path,
            format!("arity mismatch: `{}` takes {} premise(s), node has {}", rule.id, rule.arity(), node.children.len()),
        );
    }
    let premises: Vec<&Sequent> = node.children.iter().map(|c| &c.conclusion).collect();
    if !is_rule_instance(rule, &premises, &node.conclusion) {
        return reject(path, format!("not an instance of `{}`", rule.id));
    }
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        let verdict = check_node(child, path);
        path.pop();
        if !verdict.is_accepted() {
            return verdict;
        }
    }
    Verdict::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    #[test]
    fn catalogue_ids_unique_and_premise_vars_bound() {
        let rules = base_rules();
        let ids: BTreeSet<_> = rules.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids.len(), rules.len());
        for r in rules {
            let in_conclusion = r.conclusion.metavars();
            for p in &r.premises {
                assert!(p.metavars().is_subset(&in_conclusion), "{}", r.id);
            }
        }
        assert_eq!(connective_right_rules().count(), 10);
    }

    #[test]
    fn conjunction_right_rules_match_expected_shape() {
        let and_r = find_rule("and-r+").unwrap();
        let b = Bindings::new().with(MetaVar::A, p()).with(MetaVar::B, q()).with_contexts([], []);
        let inst = instantiate(and_r, &b).unwrap();
        assert_eq!(inst.premises, vec![s("; |-+ p"), s("; |-+ q")]);
        assert_eq!(inst.conclusion, s("; |-+ p & q"));

        let and_ra = find_rule("and-r-a").unwrap();
        let inst = instantiate(and_ra, &b).unwrap();
        assert_eq!(inst.premises, vec![s("; |-- p")]);
        assert_eq!(inst.conclusion, s("; |-- p & q"));
    }

    #[test]
    fn axiom_instantiation() {
        let ax = find_rule("ax+").unwrap();
        assert_eq!(ax.arity(), 0);
        let b = Bindings::new().with(MetaVar::A, p()).with_contexts([p()], []);
        assert_eq!(instantiate(ax, &b).unwrap().conclusion, s("p; |-+ p"));
    }

    #[test]
    fn missing_binding_is_reported() {
        let and_r = find_rule("and-r+").unwrap();
        let err = instantiate(and_r, &Bindings::new().with(MetaVar::A, p())).unwrap_err();
        assert_eq!(err, InstantiateError::MissingBinding("B".into()));
        assert_eq!(err.to_string(), "missing binding for B");
        let bot_l = find_rule("bot-l").unwrap();
        let b = Bindings::new().with(MetaVar::C, p()).with_contexts([], []);
        assert_eq!(instantiate(bot_l, &b).unwrap_err(), InstantiateError::MissingBinding("*".into()));
    }

    #[test]
    fn checker_examples() {
        let leaf = DerivationTree::leaf("ax+", s("p; |-+ p"));
        assert_eq!(check_derivation(&leaf), Verdict::Accepted);

        let tree = DerivationTree::node("and-r-a", s("; p |-- p & q"), vec![DerivationTree::leaf("ax-", s("; p |-- p"))]);
        assert_eq!(check_derivation(&tree), Verdict::Accepted);

        let bad = DerivationTree::node("and-r+", s("; |-+ p & q"), vec![DerivationTree::leaf("ax+", s("p; |-+ p"))]);
        match check_derivation(&bad) {
            Verdict::Rejected { path, reason } => {
                assert!(path.is_empty());
                assert!(reason.contains("arity mismatch"), "{reason}");
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn checker_reports_path_of_bad_child() {
        let tree = DerivationTree::node(
            "and-r+",
            s("; |-+ T & p"),
            vec![DerivationTree::leaf("top-r+", s("; |-+ T")), DerivationTree::leaf("ax+", s("; |-+ p"))],
        );
        match check_derivation(&tree) {
            Verdict::Rejected { path, .. } => assert_eq!(path, vec![1]),
            v => panic!("{v:?}"),
        }
        let unknown = DerivationTree::leaf("cut", s("; |-+ T"));
        assert!(matches!(check_derivation(&unknown), Verdict::Rejected { reason, .. } if reason.contains("unknown")));
    }

    #[test]
    fn context_retention_is_accepted_either_way() {
        // principal formula dropped from the premise context
        let dropped = DerivationTree::node(
            "and-l-gamma",
            s("p & q; |-+ p"),
            vec![DerivationTree::leaf("ax+", s("p, q; |-+ p"))],
        );
        assert!(check_derivation(&dropped).is_accepted());
        let kept = DerivationTree::node(
            "and-l-gamma",
            s("p & q; |-+ p"),
            vec![DerivationTree::leaf("ax+", s("p, q, p & q; |-+ p"))],
        );
        assert!(check_derivation(&kept).is_accepted());
    }

    #[test]
    fn implication_left_keeps_principal_formula() {
        let goal = s("p, p -> q; |-+ q");
        let rule = find_rule("imp-l-gamma").unwrap();
        let inst = backward_instances(rule, &goal, ContextChoice::Minimal);
        assert_eq!(inst.len(), 1);
        assert_eq!(inst[0].1, vec![s("p, p -> q; |-+ p"), s("p, q; |-+ q")]);
    }

    #[test]
    fn sign_generic_rule_matches_both_signs() {
        let rule = find_rule("bot-l").unwrap();
        assert_eq!(match_sequent(&rule.conclusion, &s("F; |-- p"), ContextChoice::Minimal).len(), 1);
        assert_eq!(match_sequent(&rule.conclusion, &s("F; |-+ p"), ContextChoice::Minimal).len(), 1);
        assert!(match_sequent(&rule.conclusion, &s("; F |-+ p"), ContextChoice::Minimal).is_empty());
    }
}
