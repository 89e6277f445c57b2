//! Bounded backward proof search over the base catalogue, and the
//! constructiveness checks built on it.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::calculus::{backward_instances, base_rules, ContextChoice, DerivationTree};
use crate::syntax::{enumerate_formulas, AtomSet, Formula, Sequent, Sign};

/// Maximum number of rule applications along any branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SearchBudget {
    pub max_depth: usize,
}

impl SearchBudget {
    pub fn new(max_depth: usize) -> SearchBudget {
        SearchBudget { max_depth }
    }
}

/// Depth-first search state shared across the subgoals of one query.
#[derive(Default)]
struct Searcher {
    proved: HashMap<Sequent, DerivationTree>,
    /// Largest budget at which the sequent failed without any branch being
    /// cut by the repetition check.
    failed: HashMap<Sequent, usize>,
    ancestors: Vec<Sequent>,
}

impl Searcher {
    /// Returns the derivation (if any) and whether the failure, if it is
    /// one, is independent of the current branch.
    fn search(&mut self, goal: &Sequent, budget: usize) -> (Option<DerivationTree>, bool) {
        if budget == 0 {
            return (None, true);
        }
        if let Some(tree) = self.proved.get(goal) {
            if tree.height() <= budget {
                return (Some(tree.clone()), true);
            }
        }
        if self.failed.get(goal).is_some_and(|&b| b >= budget) {
            return (None, true);
        }
        if self.ancestors.contains(goal) {
            return (None, false);
        }
        self.ancestors.push(goal.clone());
        let mut clean = true;
        let mut found = None;
        'rules: for rule in base_rules() {
            for (_, premises) in backward_instances(rule, goal, ContextChoice::Minimal) {
                let mut children = Vec::with_capacity(premises.len());
                for p in &premises {
                    let (child, child_clean) = self.search(p, budget - 1);
                    clean &= child_clean;
                    match child {
                        Some(t) => children.push(t),
                        None => break,
                    }
                }
                if children.len() == premises.len() {
                    found = Some(DerivationTree::node(&rule.id, goal.clone(), children));
                    break 'rules;
                }
            }
        }
        self.ancestors.pop();
        match found {
            Some(tree) => {
                self.proved.insert(goal.clone(), tree.clone());
                (Some(tree), true)
            }
            None => {
                if clean {
                    let entry = self.failed.entry(goal.clone()).or_insert(0);
                    *entry = (*entry).max(budget);
                }
                (None, clean)
            }
        }
    }
}

/// Searches for a derivation of `s` with at most `budget.max_depth` rule
/// applications on every branch. Rules are tried in catalogue order and a
/// branch is cut when a sequent repeats one of its ancestors.
pub fn prove(s: &Sequent, budget: SearchBudget) -> Option<DerivationTree> {
    Searcher::default().search(s, budget.max_depth).0
}

/// Caches provability of closed sequents across many queries.
pub(crate) struct ProofCache {
    budget: usize,
    searcher: Searcher,
}

impl ProofCache {
    pub(crate) fn new(budget: usize) -> ProofCache {
        ProofCache { budget, searcher: Searcher::default() }
    }

    pub(crate) fn prove(&mut self, s: &Sequent) -> Option<DerivationTree> {
        self.searcher.search(s, self.budget).0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub atoms: AtomSet,
    pub max_depth: usize,
    pub budget: usize,
    pub slack: usize,
    /// Pairs whose compound was derivable and therefore checked.
    pub checked: usize,
    /// Pairs examined in total.
    pub examined: usize,
    #[serde(serialize_with = "serialize_pairs")]
    pub counterexamples: Vec<(Formula, Formula)>,
}

fn serialize_pairs<S: serde::Serializer>(pairs: &[(Formula, Formula)], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]))
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} of {} pairs derivable, atoms {{{}}}, depth {}, budget {}+{})",
            self.property,
            if self.passed() { "pass" } else { "FAIL" },
            self.checked,
            self.examined,
            self.atoms.iter().cloned().collect::<Vec<_>>().join(","),
            self.max_depth,
            self.budget,
            self.slack,
        )?;
        for (a, b) in &self.counterexamples {
            write!(f, "\n  counterexample: A = {a}, B = {b}")?;
        }
        Ok(())
    }
}

/// Slack added to the budget when looking for a derivation of a component.
pub const COMPONENT_SLACK: usize = 2;

fn component_property(
    property: &str,
    sign: Sign,
    compound: fn(Formula, Formula) -> Formula,
    atoms: &AtomSet,
    max_depth: usize,
    budget: usize,
) -> PropertyReport {
    // components range over formulas one level shallower, so that every
    // compound has depth <= max_depth
    let pool = enumerate_formulas(atoms, max_depth.max(1) - 1);
    let mut whole = ProofCache::new(budget);
    let mut parts = ProofCache::new(budget + COMPONENT_SLACK);
    let mut part_ok: HashMap<Formula, bool> = HashMap::new();
    let mut part = |f: &Formula| {
        *part_ok.entry(f.clone()).or_insert_with(|| parts.prove(&Sequent::closed(sign, f.clone())).is_some())
    };
    let mut report = PropertyReport {
        property: property.to_string(),
        atoms: atoms.clone(),
        max_depth,
        budget,
        slack: COMPONENT_SLACK,
        checked: 0,
        examined: 0,
        counterexamples: Vec::new(),
    };
    for a in &pool {
        for b in &pool {
            report.examined += 1;
            if whole.prove(&Sequent::closed(sign, compound(a.clone(), b.clone()))).is_none() {
                continue;
            }
            report.checked += 1;
            if !part(a) && !part(b) {
                report.counterexamples.push((a.clone(), b.clone()));
            }
        }
    }
    report
}

/// If `⊢⁺ A | B` is derivable then `⊢⁺ A` or `⊢⁺ B` is, for all components of
/// depth below `max_depth`.
pub fn check_disjunction_property(atoms: &AtomSet, max_depth: usize, budget: SearchBudget) -> PropertyReport {
    component_property("disjunction property", Sign::Plus, Formula::or, atoms, max_depth, budget.max_depth)
}

/// If `⊢⁻ A & B` is derivable then `⊢⁻ A` or `⊢⁻ B` is.
pub fn check_dual_conjunction_property(atoms: &AtomSet, max_depth: usize, budget: SearchBudget) -> PropertyReport {
    component_property("dual conjunction property", Sign::Minus, Formula::and, atoms, max_depth, budget.max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_derivation;
    use crate::syntax::{atom_set, parse_formula, parse_sequent};

    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    #[test]
    fn identity_implication() {
        let tree = prove(&s("; |-+ p -> p"), SearchBudget::new(3)).unwrap();
        assert_eq!(tree.rule_id, "imp-r+");
        assert_eq!(tree.children[0].rule_id, "ax+");
        assert!(check_derivation(&tree).is_accepted());
        assert!(prove(&s("; |-+ p -> p"), SearchBudget::new(1)).is_none());
        assert!(prove(&s("; |-+ p -> p"), SearchBudget::new(2)).is_some());
    }

    #[test]
    fn no_proof_of_falsum_or_refutation_of_verum() {
        for b in 0..=8 {
            assert!(prove(&s("; |-+ F"), SearchBudget::new(b)).is_none());
            assert!(prove(&s("; |-- T"), SearchBudget::new(b)).is_none());
        }
    }

    #[test]
    fn inconsistent_context() {
        let tree = prove(&s("p; p |-- p"), SearchBudget::new(1)).unwrap();
        assert_eq!(tree.rule_id, "ax-");
    }

    #[test]
    fn left_rules_are_used() {
        for text in [
            "p & q; |-+ q & p",
            "p | q; |-+ q | p",
            "p, p -> q; |-+ q",
            "; p | q |-- p",
            "q -< p; |-+ p",
            "q -< p; |-- q",
            "; p -> q |-+ p",
            "; q -< p |-- q -< p",
            "F; |-- p",
            "; T |-+ p",
        ] {
            let tree = prove(&s(text), SearchBudget::new(6)).unwrap_or_else(|| panic!("{text}"));
            assert!(check_derivation(&tree).is_accepted(), "{text}");
        }
    }

    #[test]
    fn excluded_middle_is_not_derivable() {
        assert!(prove(&s("; |-+ p | (p -> F)"), SearchBudget::new(6)).is_none());
    }

    #[test]
    fn property_examples() {
        let atoms = atom_set(&["p"]);
        let report = check_disjunction_property(&atoms, 2, SearchBudget::new(6));
        assert!(report.passed(), "{report}");
        let top_or_p = Formula::or(Formula::Top, parse_formula("p").unwrap());
        assert!(prove(&Sequent::closed(Sign::Plus, top_or_p), SearchBudget::new(6)).is_some());
        let dual = check_dual_conjunction_property(&atoms, 2, SearchBudget::new(6));
        assert!(dual.passed(), "{dual}");
        assert!(dual.checked > 0);
        assert!(prove(&s("; |-- T & T"), SearchBudget::new(6)).is_none());
    }
}
