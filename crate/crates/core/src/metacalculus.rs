//! The two-level calculus: judgments carry a line (single = proved,
//! double = refuted) on top of the sequent sign.
//!
//! Each base rule yields `2^(k+1)` line variants: every position is either
//! single-lined over its own sequent or double-lined over the dual sequent.
//! Coordination rules link a sequent's status to the status of its dual.

use std::fmt;

use serde::Serialize;

use crate::calculus::{base_rules, find_rule, is_rule_instance, RuleSchema, SequentPattern, SignPattern, Pattern, MetaVar, Verdict};
use crate::syntax::{LineType, MetaJudgment, Sequent, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Base(String),
    Structural,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetaRuleSchema {
    pub id: String,
    pub premises: Vec<(LineType, SequentPattern)>,
    pub conclusion: (LineType, SequentPattern),
    pub origin: Origin,
}

impl MetaRuleSchema {
    pub fn arity(&self) -> usize {
        self.premises.len()
    }

    pub fn label(&self) -> PatternLabel {
        classify_variant(self)
    }

    /// The single-lined base rule this schema coincides with, if any.
    pub fn as_base_rule(&self) -> Option<&'static RuleSchema> {
        let Origin::Base(id) = &self.origin else { return None };
        let all_single =
            self.conclusion.0 == LineType::Single && self.premises.iter().all(|(l, _)| *l == LineType::Single);
        all_single.then(|| find_rule(id)).flatten()
    }

    /// The sequent-level skeleton, ignoring lines.
    pub fn skeleton(&self) -> RuleSchema {
        RuleSchema {
            id: self.id.clone(),
            premises: self.premises.iter().map(|(_, p)| p.clone()).collect(),
            conclusion: self.conclusion.1.clone(),
        }
    }
}

impl fmt::Display for MetaRuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.id)?;
        for (i, (line, p)) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, "  &&  ")?;
            }
            write!(f, "{} {p}", line.marker())?;
        }
        write!(f, "  ==>  {} {}", self.conclusion.0.marker(), self.conclusion.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoordinationMode {
    #[serde(rename = "asymmetric")]
    AsymmetricDefault,
    #[serde(rename = "unified")]
    UnifiedConstructions,
    #[serde(rename = "independent")]
    IndependentConstructions,
}

impl fmt::Display for CoordinationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordinationMode::AsymmetricDefault => "asymmetric",
            CoordinationMode::UnifiedConstructions => "unified",
            CoordinationMode::IndependentConstructions => "independent",
        })
    }
}

/// Number of double-lined premises and the conclusion's line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PatternLabel {
    pub double_premises: usize,
    pub conclusion: LineType,
}

impl PatternLabel {
    /// From at least one refutation to a proof.
    pub fn is_zeta(&self) -> bool {
        self.double_premises > 0 && self.conclusion == LineType::Single
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = match self.conclusion {
            LineType::Single => "single",
            LineType::Double => "double",
        };
        write!(f, "{}D>{}", self.double_premises, line)?;
        if self.is_zeta() {
            write!(f, " zeta")?;
        }
        Ok(())
    }
}

pub fn classify_variant(v: &MetaRuleSchema) -> PatternLabel {
    PatternLabel {
        double_premises: v.premises.iter().filter(|(l, _)| *l == LineType::Double).count(),
        conclusion: v.conclusion.0,
    }
}

fn line_letter(l: LineType) -> char {
    match l {
        LineType::Single => 'S',
        LineType::Double => 'D',
    }
}

fn render(line: LineType, p: &SequentPattern) -> (LineType, SequentPattern) {
    match line {
        LineType::Single => (line, p.clone()),
        LineType::Double => (line, p.dual()),
    }
}

/// All line assignments of `rule`, ordered by the bitmask of double-lined
/// positions (premises low, conclusion high), so the all-single variant is
/// first. Ids look like `and-r+[DS>S]`.
pub fn generate_variants(rule: &RuleSchema) -> Vec<MetaRuleSchema> {
    let k = rule.arity();
    (0u32..1 << (k + 1))
        .map(|mask| {
            let line = |i: usize| if mask & (1 << i) != 0 { LineType::Double } else { LineType::Single };
            let premises: Vec<_> = rule.premises.iter().enumerate().map(|(i, p)| render(line(i), p)).collect();
            let conclusion = render(line(k), &rule.conclusion);
            let letters: String = (0..k).map(|i| line_letter(line(i))).collect();
            MetaRuleSchema {
                id: format!("{}[{}>{}]", rule.id, letters, line_letter(line(k))),
                premises,
                conclusion,
                origin: Origin::Base(rule.id.clone()),
            }
        })
        .collect()
}

fn structural(id: &str, premise: (LineType, Sign), conclusion: (LineType, Sign)) -> MetaRuleSchema {
    let pattern = |sign| SequentPattern {
        gamma: vec![],
        delta: vec![],
        sign: SignPattern::Fixed(sign),
        succedent: Pattern::Var(MetaVar::A),
    };
    MetaRuleSchema {
        id: id.to_string(),
        premises: vec![(premise.0, pattern(premise.1))],
        conclusion: (conclusion.0, pattern(conclusion.1)),
        origin: Origin::Structural,
    }
}

/// `s1a`, `s1b`, `s2a`, `s2b`, in that order.
pub fn structural_rules() -> Vec<MetaRuleSchema> {
    use LineType::{Double, Single};
    use Sign::{Minus, Plus};
    vec![
        structural("s1a", (Single, Plus), (Double, Minus)),
        structural("s1b", (Single, Minus), (Double, Plus)),
        structural("s2a", (Double, Plus), (Single, Minus)),
        structural("s2b", (Double, Minus), (Single, Plus)),
    ]
}

pub fn coordination_rules(mode: CoordinationMode) -> Vec<MetaRuleSchema> {
    let all = structural_rules();
    match mode {
        CoordinationMode::AsymmetricDefault => all.into_iter().take(2).collect(),
        CoordinationMode::UnifiedConstructions => all,
        CoordinationMode::IndependentConstructions => vec![],
    }
}

/// Every line variant of the connective right rules, in catalogue order.
pub fn right_rule_variants() -> Vec<MetaRuleSchema> {
    crate::calculus::connective_right_rules().flat_map(generate_variants).collect()
}

/// The sequent a judgment amounts to when proofs and refutations share
/// constructions: a double line over `⊢σ` is a single line over `⊢σ̄`.
pub fn translate_unified(j: &MetaJudgment) -> Sequent {
    match j.line {
        LineType::Single => j.sequent.clone(),
        LineType::Double => j.sequent.dual(),
    }
}

pub fn translate_pattern(line: LineType, p: &SequentPattern) -> SequentPattern {
    match line {
        LineType::Single => p.clone(),
        LineType::Double => p.dual(),
    }
}

/// The base-level rule obtained by translating every position.
pub fn translate_rule(v: &MetaRuleSchema) -> RuleSchema {
    RuleSchema {
        id: v.id.clone(),
        premises: v.premises.iter().map(|(l, p)| translate_pattern(*l, p)).collect(),
        conclusion: translate_pattern(v.conclusion.0, &v.conclusion.1),
    }
}

// ---------------------------------------------------------------------------
// Meta-derivations

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaDerivationTree {
    pub conclusion: MetaJudgment,
    pub rule_id: String,
    pub children: Vec<MetaDerivationTree>,
}

impl MetaDerivationTree {
    pub fn node(rule_id: &str, conclusion: MetaJudgment, children: Vec<MetaDerivationTree>) -> MetaDerivationTree {
        MetaDerivationTree { conclusion, rule_id: rule_id.to_string(), children }
    }

    /// Lifts a base derivation to single-lined judgments.
    pub fn lift(tree: &crate::calculus::DerivationTree) -> MetaDerivationTree {
        MetaDerivationTree {
            conclusion: MetaJudgment::single(tree.conclusion.clone()),
            rule_id: tree.rule_id.clone(),
            children: tree.children.iter().map(MetaDerivationTree::lift).collect(),
        }
    }
}

/// The meta-rules available under a regime.
#[derive(Debug, Clone)]
pub struct ActiveRules {
    rules: Vec<MetaRuleSchema>,
}

impl ActiveRules {
    /// Non-ζ variants of every base rule, the ζ variants when
    /// `include_zeta` is set, and the coordination rules of `mode`.
    pub fn new(mode: CoordinationMode, include_zeta: bool) -> ActiveRules {
        let mut rules: Vec<MetaRuleSchema> = base_rules()
            .iter()
            .flat_map(generate_variants)
            .filter(|v| include_zeta || !classify_variant(v).is_zeta())
            .collect();
        rules.extend(coordination_rules(mode));
        ActiveRules { rules }
    }

    /// Looks up a rule; a plain base id names its all-single variant.
    pub fn get(&self, id: &str) -> Option<&MetaRuleSchema> {
        self.rules.iter().find(|r| r.id == id || r.as_base_rule().is_some_and(|b| b.id == id))
    }

    pub fn rules(&self) -> &[MetaRuleSchema] {
        &self.rules
    }
}

fn is_known_meta_rule(id: &str) -> bool {
    let base = id.split('[').next().unwrap_or(id);
    find_rule(base).is_some_and(|r| id == base || generate_variants(r).iter().any(|v| v.id == id))
        || structural_rules().iter().any(|r| r.id == id)
}

pub fn is_meta_rule_instance(rule: &MetaRuleSchema, premises: &[&MetaJudgment], conclusion: &MetaJudgment) -> bool {
    premises.len() == rule.arity()
        && rule.conclusion.0 == conclusion.line
        && rule.premises.iter().zip(premises).all(|((l, _), j)| *l == j.line)
        && {
            let sequents: Vec<&Sequent> = premises.iter().map(|j| &j.sequent).collect();
            is_rule_instance(&rule.skeleton(), &sequents, &conclusion.sequent)
        }
}

pub fn check_meta_derivation(tree: &MetaDerivationTree, mode: CoordinationMode, include_zeta: bool) -> Verdict {
    let active = ActiveRules::new(mode, include_zeta);
    let mut path = Vec::new();
    check_meta_node(tree, &active, &mut path)
}

fn check_meta_node(node: &MetaDerivationTree, active: &ActiveRules, path: &mut Vec<usize>) -> Verdict {
    let reject = |path: &Vec<usize>, reason: String| Verdict::Rejected { path: path.clone(), reason };
    let Some(rule) = active.get(&node.rule_id) else {
        return if is_known_meta_rule(&node.rule_id) {
            reject(path, format!("rule not in active set: `{}`", node.rule_id))
        } else {
            reject(path, format!("unknown rule `{}`", node.rule_id))
        };
    };
    if rule.arity() != node.children.len() {
        return reject(
            path,
            format!("arity mismatch: `{}` takes {} premise(s), node has {}", rule.id, rule.arity(), node.children.len()),
        );
    }
    let premises: Vec<&MetaJudgment> = node.children.iter().map(|c| &c.conclusion).collect();
    if !is_meta_rule_instance(rule, &premises, &node.conclusion) {
        return reject(path, format!("not an instance of `{}`", rule.id));
    }
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        let verdict = check_meta_node(child, active, path);
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
    use crate::calculus::{check_derivation, connective_right_rules, DerivationTree};
    use crate::syntax::parse_sequent;

    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    fn variant(base: &str, id: &str) -> MetaRuleSchema {
        generate_variants(find_rule(base).unwrap()).into_iter().find(|v| v.id == id).unwrap()
    }

    #[test]
    fn variant_counts_and_base_lift() {
        for rule in base_rules() {
            let vs = generate_variants(rule);
            assert_eq!(vs.len(), 1 << (rule.arity() + 1));
            assert_eq!(vs[0].as_base_rule().map(|r| &r.id), Some(&rule.id));
            assert_eq!(vs[0].skeleton().premises, rule.premises);
            for (i, a) in vs.iter().enumerate() {
                for b in &vs[i + 1..] {
                    assert_ne!((&a.premises, &a.conclusion), (&b.premises, &b.conclusion));
                }
            }
        }
        assert_eq!(right_rule_variants().len(), 56);
        assert_eq!(connective_right_rules().count(), 10);
    }

    #[test]
    fn conjunction_variants_have_expected_shapes() {
        // double premise over |-+ A, double conclusion over |-+ A & B
        let v = variant("and-r-a", "and-r-a[D>D]");
        assert_eq!(v.premises[0].1.sign, SignPattern::Fixed(Sign::Plus));
        assert_eq!(v.conclusion.1.sign, SignPattern::Fixed(Sign::Plus));
        assert!(!v.label().is_zeta());
        // single premise |-- A, double conclusion over |-+ A & B
        let v = variant("and-r-a", "and-r-a[S>D]");
        assert_eq!(v.premises[0], (LineType::Single, find_rule("and-r-a").unwrap().premises[0].clone()));
        assert_eq!(v.conclusion.1.sign, SignPattern::Fixed(Sign::Plus));
        let zeta = variant("and-r+", "and-r+[DD>S]");
        assert_eq!(zeta.label(), PatternLabel { double_premises: 2, conclusion: LineType::Single });
        assert!(zeta.label().is_zeta());
        let both_refuted = variant("and-r-a", "and-r-a[D>D]");
        assert_eq!(both_refuted.label().double_premises, 1);
        let r4 = variant("or-r-", "or-r-[DD>D]");
        assert!(!r4.label().is_zeta());
        assert!(!variant("and-r+", "and-r+[SS>S]").label().is_zeta());
    }

    #[test]
    fn coordination_regimes() {
        let ids = |m| coordination_rules(m).into_iter().map(|r| r.id).collect::<Vec<_>>();
        assert_eq!(ids(CoordinationMode::AsymmetricDefault), ["s1a", "s1b"]);
        assert_eq!(ids(CoordinationMode::UnifiedConstructions), ["s1a", "s1b", "s2a", "s2b"]);
        assert!(ids(CoordinationMode::IndependentConstructions).is_empty());
        let rules = structural_rules();
        assert!(!rules[0].label().is_zeta() && !rules[1].label().is_zeta());
        assert!(rules[2].label().is_zeta() && rules[3].label().is_zeta());
    }

    #[test]
    fn unified_translation() {
        let j = MetaJudgment::double(s("; |-+ p"));
        assert_eq!(translate_unified(&j), s("; |-- p"));
        let t = s("p; q |-- p -> q");
        assert_eq!(translate_unified(&MetaJudgment::single(t.clone())), t);
        assert_eq!(translate_unified(&MetaJudgment::double(t.dual())), t);
    }

    #[test]
    fn translation_collapses_variants_onto_their_rule() {
        for rule in base_rules() {
            for v in generate_variants(rule) {
                let t = translate_rule(&v);
                assert_eq!(t.premises, rule.premises, "{}", v.id);
                assert_eq!(t.conclusion, rule.conclusion, "{}", v.id);
            }
        }
        for r in structural_rules() {
            let t = translate_rule(&r);
            assert_eq!(t.premises[0], t.conclusion, "{}", r.id);
        }
    }

    fn s2a_tree() -> MetaDerivationTree {
        MetaDerivationTree::node(
            "s2a",
            MetaJudgment::single(s("; |-- F & p")),
            vec![MetaDerivationTree::node(
                "and-r-a[S>D]",
                MetaJudgment::double(s("; |-+ F & p")),
                vec![MetaDerivationTree::node("bot-r-", MetaJudgment::single(s("; |-- F")), vec![])],
            )],
        )
    }

    #[test]
    fn regime_gating() {
        let tree = s2a_tree();
        assert!(check_meta_derivation(&tree, CoordinationMode::UnifiedConstructions, false).is_accepted());
        for mode in [CoordinationMode::IndependentConstructions, CoordinationMode::AsymmetricDefault] {
            match check_meta_derivation(&tree, mode, false) {
                Verdict::Rejected { path, reason } => {
                    assert!(path.is_empty());
                    assert!(reason.contains("rule not in active set"), "{reason}");
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn zeta_rules_are_gated() {
        let tree = MetaDerivationTree::node(
            "and-r+[DD>S]",
            MetaJudgment::single(s("; |-+ p & q")),
            vec![
                MetaDerivationTree::node("s1b", MetaJudgment::double(s("; |-- p")), vec![]),
                MetaDerivationTree::node("s1b", MetaJudgment::double(s("; |-- q")), vec![]),
            ],
        );
        let v = check_meta_derivation(&tree, CoordinationMode::UnifiedConstructions, false);
        assert!(matches!(&v, Verdict::Rejected { path, reason } if path.is_empty() && reason.contains("active")));
        // with the gate open the root passes and the ill-formed leaves are caught
        let v = check_meta_derivation(&tree, CoordinationMode::UnifiedConstructions, true);
        assert!(matches!(&v, Verdict::Rejected { path, reason } if path == &[0] && reason.contains("arity")));
    }

    #[test]
    fn lifted_base_derivations_are_accepted() {
        let base = DerivationTree::node("and-r-a", s("; p |-- p & q"), vec![DerivationTree::leaf("ax-", s("; p |-- p"))]);
        assert!(check_derivation(&base).is_accepted());
        let lifted = MetaDerivationTree::lift(&base);
        for mode in [
            CoordinationMode::AsymmetricDefault,
            CoordinationMode::UnifiedConstructions,
            CoordinationMode::IndependentConstructions,
        ] {
            assert!(check_meta_derivation(&lifted, mode, false).is_accepted());
        }
        let wrong_line = MetaDerivationTree::node("ax-", MetaJudgment::double(s("; p |-- p")), vec![]);
        assert!(!check_meta_derivation(&wrong_line, CoordinationMode::UnifiedConstructions, true).is_accepted());
        let unknown = MetaDerivationTree::node("cut", MetaJudgment::single(s("; |-+ T")), vec![]);
        assert!(matches!(
            check_meta_derivation(&unknown, CoordinationMode::UnifiedConstructions, true),
            Verdict::Rejected { reason, .. } if reason.contains("unknown")
        ));
    }
}
