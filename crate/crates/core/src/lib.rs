//! A workbench for a bilateral two-level sequent calculus of
//! bi-intuitionistic logic: signed sequents (`⊢⁺` proves, `⊢⁻` refutes),
//! single and double lines between sequents, bounded proof search, and a
//! finite Kripke auditor for rule soundness.

pub mod audit;
pub mod calculus;
pub mod cli;
pub mod metacalculus;
pub mod search;
pub mod semantics;
pub mod sexp;
pub mod syntax;

pub use calculus::{base_rules, check_derivation, instantiate, DerivationTree, RuleSchema, Verdict};
pub use metacalculus::{check_meta_derivation, generate_variants, CoordinationMode, MetaRuleSchema};
pub use search::{prove, SearchBudget};
pub use semantics::{find_countermodel, KripkeModel, ModelClass, Reading};
pub use syntax::{parse_formula, parse_sequent, Formula, LineType, MetaJudgment, Sequent, Sign};
