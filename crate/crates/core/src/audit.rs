//! Rule soundness by exhaustive enumeration at a bound.
//!
//! Base rules are audited locally: in every model, if every premise is
//! valid in the model then so is the conclusion. Meta rules are audited
//! globally: if every premise judgment holds over the whole model space
//! (under the chosen reading of the double line) then so does the
//! conclusion.
//!
//! Metavariables range over formulas of depth below `max_formula_depth`, so
//! that principal formulas reach exactly that depth; each context side holds
//! at most one formula from the same pool. Formulas that agree on every
//! model are interchangeable for these checks, so the engine works with one
//! representative per equivalence class and reports instances in terms of
//! the first representative in enumeration order.
//!
//! A violation is only reported once it is backed by checkable evidence: a
//! derivation for every judgment claimed to hold by derivability, a
//! countermodel for every judgment claimed to fail by invalidity (and the
//! mirror cases for double lines). Candidates that cannot be backed this way
//! are counted as inconclusive.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::{json, Value};

use crate::calculus::{base_rules, instantiate, instantiate_sequent, Bindings, MetaVar, Pattern, RuleInstance, RuleSchema, SequentPattern, SignPattern};
use crate::metacalculus::{
    classify_variant, is_meta_rule_instance, right_rule_variants, structural_rules, translate_rule, translate_unified,
    CoordinationMode, MetaRuleSchema, Origin, PatternLabel,
};
use crate::search::ProofCache;
use crate::semantics::{enumerate_rooted_models, Evidence, KripkeModel, ModelClass, Reading, Support, World};
use crate::sexp::compact_proof_script;
use crate::syntax::{atom_set, enumerate_formulas, AtomSet, Connective, Formula, LineType, MetaJudgment, Sequent, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextRegime {
    /// Γ = Δ = ∅.
    Empty,
    /// The context formulas on the two sides differ.
    Disjoint,
    Arbitrary,
}

impl fmt::Display for ContextRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextRegime::Empty => "empty",
            ContextRegime::Disjoint => "disjoint",
            ContextRegime::Arbitrary => "arbitrary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditConfig {
    pub reading: Reading,
    pub model_class: ModelClass,
    pub context_regime: ContextRegime,
    pub max_worlds: usize,
    pub atoms: AtomSet,
    pub max_formula_depth: usize,
    /// Meta rows have no semantic reading under independent constructions.
    pub mode: CoordinationMode,
    /// Budget for the derivations that back a reported violation.
    pub search_budget: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            reading: Reading::R1Absence,
            model_class: ModelClass::NonExclusive,
            context_regime: ContextRegime::Empty,
            max_worlds: 3,
            atoms: atom_set(&["p", "q"]),
            max_formula_depth: 2,
            mode: CoordinationMode::AsymmetricDefault,
            search_budget: 6,
        }
    }
}

impl AuditConfig {
    pub fn label(&self) -> String {
        format!(
            "{}/{}/{}/{} w<={} d<={} {{{}}}",
            self.reading,
            self.model_class,
            self.context_regime,
            self.mode,
            self.max_worlds,
            self.max_formula_depth,
            self.atoms.iter().cloned().collect::<Vec<_>>().join(","),
        )
    }

    /// Depth of the formulas that metavariables and contexts range over.
    pub fn pool_depth(&self) -> usize {
        self.max_formula_depth.max(1) - 1
    }
}

/// A row of the audit: a base rule or a meta rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditTarget {
    Base(RuleSchema),
    Meta(MetaRuleSchema),
}

impl AuditTarget {
    pub fn id(&self) -> &str {
        match self {
            AuditTarget::Base(r) => &r.id,
            AuditTarget::Meta(r) => &r.id,
        }
    }

    pub fn label(&self) -> Option<PatternLabel> {
        match self {
            AuditTarget::Base(_) => None,
            AuditTarget::Meta(r) => Some(classify_variant(r)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AuditTarget::Base(_) => "base",
            AuditTarget::Meta(MetaRuleSchema { origin: Origin::Structural, .. }) => "structural",
            AuditTarget::Meta(_) => "variant",
        }
    }
}

/// Base catalogue, right-rule variants, then the coordination rules.
pub fn default_targets() -> Vec<AuditTarget> {
    let mut out: Vec<AuditTarget> = base_rules().iter().cloned().map(AuditTarget::Base).collect();
    out.extend(right_rule_variants().into_iter().map(AuditTarget::Meta));
    out.extend(structural_rules().into_iter().map(AuditTarget::Meta));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgmentEvidence {
    pub judgment: MetaJudgment,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// All premises valid in `model`, conclusion fails at `world`.
    Local { bindings: Bindings, instance: RuleInstance, model: KripkeModel, world: World },
    /// All premise judgments hold and the conclusion judgment fails.
    Global { bindings: Bindings, premises: Vec<JudgmentEvidence>, conclusion: JudgmentEvidence },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditStatus {
    SoundUpToBound,
    Unsound(Box<Violation>),
    NoSemanticReading,
}

impl AuditStatus {
    pub fn is_unsound(&self) -> bool {
        matches!(self, AuditStatus::Unsound(_))
    }

    pub fn is_sound(&self) -> bool {
        matches!(self, AuditStatus::SoundUpToBound)
    }

    fn short(&self) -> &'static str {
        match self {
            AuditStatus::SoundUpToBound => "sound",
            AuditStatus::Unsound(_) => "UNSOUND",
            AuditStatus::NoSemanticReading => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditVerdict {
    pub rule_id: String,
    pub label: Option<PatternLabel>,
    pub status: AuditStatus,
    /// Syntactic instances covered (per model, for base rules).
    pub instance_count: u64,
    /// Checks performed after merging equivalent formulas.
    pub checks: u64,
    /// Candidate violations that could not be backed by evidence.
    pub inconclusive: u64,
}

// ---------------------------------------------------------------------------
// Verification

fn effective(j: &MetaJudgment, reading: Reading) -> (LineType, Sequent) {
    match (j.line, reading) {
        (LineType::Double, Reading::R2Unified) => (LineType::Single, translate_unified(j)),
        _ => (j.line, j.sequent.clone()),
    }
}

/// Whether `evidence` shows `j` holding (`want_holds`) or failing.
fn evidence_settles(j: &MetaJudgment, e: &Evidence, want_holds: bool, reading: Reading) -> bool {
    let (line, s) = effective(j, reading);
    let valid = match e.verify(&s) {
        Some(v) => v,
        None => return false,
    };
    let holds = match line {
        LineType::Single => valid,
        LineType::Double => !valid,
    };
    holds == want_holds
}

/// Re-checks a reported violation from scratch: the instance must match the
/// rule, and the evidence must be re-verified by direct evaluation or by the
/// derivation checker.
pub fn verify_violation(target: &AuditTarget, v: &Violation, reading: Reading) -> bool {
    match (target, v) {
        (AuditTarget::Base(rule), Violation::Local { bindings, instance, model, world }) => {
            instantiate(rule, bindings).is_ok_and(|i| &i == instance)
                && instance.premises.iter().all(|p| model.failing_worlds(p) == 0)
                && model.failing_worlds(&instance.conclusion) & (1 << world.0) != 0
        }
        (AuditTarget::Meta(rule), Violation::Global { bindings, premises, conclusion }) => {
            let judgments: Vec<&MetaJudgment> = premises.iter().map(|p| &p.judgment).collect();
            let instantiated = rule
                .premises
                .iter()
                .map(|(l, p)| instantiate_sequent(p, bindings).map(|s| MetaJudgment { line: *l, sequent: s }))
                .collect::<Result<Vec<_>, _>>();
            instantiated.is_ok_and(|js| js.iter().zip(&judgments).all(|(a, b)| a == *b))
                && is_meta_rule_instance(rule, &judgments, &conclusion.judgment)
                && premises.iter().all(|p| evidence_settles(&p.judgment, &p.evidence, true, reading))
                && evidence_settles(&conclusion.judgment, &conclusion.evidence, false, reading)
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Model space

/// Support tables of one formula, one mask per model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Table {
    plus: Vec<u32>,
    minus: Vec<u32>,
}

type Bits = Vec<u64>;

struct Space {
    models: Vec<KripkeModel>,
    /// First bit of each model in the packed world vector.
    offsets: Vec<usize>,
    words: usize,
}

impl Space {
    fn new(models: Vec<KripkeModel>) -> Space {
        let mut offsets = Vec::with_capacity(models.len());
        let mut total = 0;
        for m in &models {
            offsets.push(total);
            total += m.world_count();
        }
        Space { models, offsets, words: total.div_ceil(64) }
    }

    fn pack(&self, masks: &[u32]) -> Bits {
        let mut out = vec![0u64; self.words];
        for (i, &mask) in masks.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                let bit = self.offsets[i] + w;
                out[bit / 64] |= 1 << (bit % 64);
                m &= m - 1;
            }
        }
        out
    }

    fn table(&self, f: &Formula) -> Table {
        let (plus, minus) = self.models.iter().map(|m| m.support(f)).map(|s| (s.plus, s.minus)).unzip();
        Table { plus, minus }
    }

    fn countermodel(&self, s: &Sequent) -> Option<(KripkeModel, World)> {
        self.models.iter().find_map(|m| {
            let failing = m.failing_worlds(s);
            (failing != 0).then(|| (m.clone(), World(failing.trailing_zeros() as usize)))
        })
    }
}

/// First world where `ctx ∧ extra` holds but `succ` does not.
fn first_failure(ctx: &[u64], extra: Option<&[u64]>, succ: &[u64]) -> Option<usize> {
    for i in 0..ctx.len() {
        let mut bad = ctx[i] & !succ[i];
        if let Some(e) = extra {
            bad &= e[i];
        }
        if bad != 0 {
            return Some(i * 64 + bad.trailing_zeros() as usize);
        }
    }
    None
}

fn eval_support(m: &KripkeModel, p: &Pattern, vals: &[Support; 3]) -> Support {
    match p {
        Pattern::Var(v) => vals[*v as usize],
        Pattern::Top => Support { plus: m.all_worlds(), minus: 0 },
        Pattern::Bot => Support { plus: 0, minus: m.all_worlds() },
        Pattern::Binary(op, l, r) => {
            let (l, r) = (eval_support(m, l, vals), eval_support(m, r, vals));
            match op {
                Connective::And => Support { plus: l.plus & r.plus, minus: l.minus | r.minus },
                Connective::Or => Support { plus: l.plus | r.plus, minus: l.minus & r.minus },
                Connective::Imp => Support { plus: m.box_implies(l.plus, r.plus), minus: l.plus & r.minus },
                Connective::CoImp => Support { plus: l.minus & r.plus, minus: m.box_implies(l.minus, r.minus) },
            }
        }
    }
}

/// Which support facets of each metavariable a pattern can observe.
fn facet_needs(p: &Pattern, plus: bool, minus: bool, out: &mut [(bool, bool); 3]) {
    match p {
        Pattern::Var(v) => {
            out[*v as usize].0 |= plus;
            out[*v as usize].1 |= minus;
        }
        Pattern::Top | Pattern::Bot => {}
        Pattern::Binary(op, l, r) => {
            if plus {
                match op {
                    Connective::And | Connective::Or | Connective::Imp => {
                        facet_needs(l, true, false, out);
                        facet_needs(r, true, false, out);
                    }
                    Connective::CoImp => {
                        facet_needs(l, false, true, out);
                        facet_needs(r, true, false, out);
                    }
                }
            }
            if minus {
                match op {
                    Connective::And | Connective::Or | Connective::CoImp => {
                        facet_needs(l, false, true, out);
                        facet_needs(r, false, true, out);
                    }
                    Connective::Imp => {
                        facet_needs(l, true, false, out);
                        facet_needs(r, false, true, out);
                    }
                }
            }
        }
    }
}

fn sequent_facet_needs(s: &SequentPattern, out: &mut [(bool, bool); 3]) {
    for g in &s.gamma {
        facet_needs(g, true, false, out);
    }
    for d in &s.delta {
        facet_needs(d, false, true, out);
    }
    match s.sign {
        SignPattern::Fixed(Sign::Plus) => facet_needs(&s.succedent, true, false, out),
        SignPattern::Fixed(Sign::Minus) => facet_needs(&s.succedent, false, true, out),
        SignPattern::Var | SignPattern::DualVar => facet_needs(&s.succedent, true, true, out),
    }
}

/// Worlds of `m` where the instantiated pattern fails.
fn failing_in_model(m: &KripkeModel, p: &SequentPattern, vals: &[Support; 3], sign: Option<Sign>, ctx: u32) -> u32 {
    let mut ctx = ctx;
    for g in &p.gamma {
        ctx &= eval_support(m, g, vals).plus;
    }
    for d in &p.delta {
        ctx &= eval_support(m, d, vals).minus;
    }
    let succ = eval_support(m, &p.succedent, vals);
    let holds = match p.sign.resolve(sign).expect("sign bound") {
        Sign::Plus => succ.plus,
        Sign::Minus => succ.minus,
    };
    ctx & !holds
}

fn regime_admits(regime: ContextRegime, g: Option<usize>, d: Option<usize>) -> bool {
    match regime {
        ContextRegime::Empty => g.is_none() && d.is_none(),
        ContextRegime::Disjoint => g.is_none() || d.is_none() || g != d,
        ContextRegime::Arbitrary => true,
    }
}

/// Number of (Γ, Δ) choices, with at most one pool formula per side.
fn context_count(regime: ContextRegime, n: u64) -> u64 {
    match regime {
        ContextRegime::Empty => 1,
        ContextRegime::Disjoint => (n + 1) * (n + 1) - n,
        ContextRegime::Arbitrary => (n + 1) * (n + 1),
    }
}

/// Sort key putting small indices first: by largest coordinate, then
/// lexicographically.
fn shell_key(t: &[usize]) -> (usize, Vec<usize>) {
    (t.iter().copied().max().unwrap_or(0), t.to_vec())
}

fn tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

struct ContextClass {
    /// `None` is the empty context.
    members: Vec<Option<usize>>,
    bits: Bits,
}

struct ContextPair {
    gamma: Option<usize>,
    delta: Option<usize>,
    bits: Bits,
}

struct FormulaClass {
    rep: usize,
    table: Table,
}

/// Runs audits for one configuration, sharing the model space and the
/// formula tables across rules.
pub struct Auditor {
    cfg: AuditConfig,
    pool: Vec<Formula>,
    space: Space,
    tables: Vec<Table>,
    classes: Vec<FormulaClass>,
    contexts: Vec<ContextPair>,
    prover: ProofCache,
}

impl Auditor {
    pub fn new(cfg: &AuditConfig) -> Auditor {
        let models = enumerate_rooted_models(cfg.max_worlds, &cfg.atoms, cfg.model_class);
        Auditor::with_models(cfg, models)
    }

    pub(crate) fn with_models(cfg: &AuditConfig, models: Vec<KripkeModel>) -> Auditor {
        let pool = enumerate_formulas(&cfg.atoms, cfg.pool_depth());
        let space = Space::new(models);
        let tables: Vec<Table> = pool.iter().map(|f| space.table(f)).collect();

        let mut classes: Vec<FormulaClass> = Vec::new();
        let mut seen: HashMap<&Table, usize> = HashMap::new();
        for (i, t) in tables.iter().enumerate() {
            seen.entry(t).or_insert_with(|| {
                classes.push(FormulaClass { rep: i, table: t.clone() });
                classes.len() - 1
            });
        }

        let full: Vec<u32> = space.models.iter().map(|m| m.all_worlds()).collect();
        let side = |facet: fn(&Table) -> &Vec<u32>| {
            let mut out: Vec<ContextClass> = Vec::new();
            let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
            let candidates = std::iter::once((None, full.clone()))
                .chain(tables.iter().enumerate().map(|(i, t)| (Some(i), facet(t).clone())));
            for (member, masks) in candidates {
                match seen.get(&masks) {
                    Some(&c) => out[c].members.push(member),
                    None => {
                        seen.insert(masks.clone(), out.len());
                        out.push(ContextClass { members: vec![member], bits: space.pack(&masks) });
                    }
                }
            }
            out
        };
        let gammas = side(|t| &t.plus);
        let deltas = side(|t| &t.minus);
        let mut keyed = Vec::new();
        for (gi, g) in gammas.iter().enumerate() {
            for (di, d) in deltas.iter().enumerate() {
                let rep = g.members.iter().flat_map(|&gm| d.members.iter().map(move |&dm| (gm, dm))).find(|&(gm, dm)| {
                    regime_admits(cfg.context_regime, gm, dm)
                });
                if let Some((gm, dm)) = rep {
                    let bits = g.bits.iter().zip(&d.bits).map(|(a, b)| a & b).collect();
                    keyed.push((shell_key(&[gi, di]), ContextPair { gamma: gm, delta: dm, bits }));
                }
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let contexts = keyed.into_iter().map(|(_, c)| c).collect();

        Auditor { cfg: cfg.clone(), pool, space, tables, classes, contexts, prover: ProofCache::new(cfg.search_budget) }
    }

    pub fn config(&self) -> &AuditConfig {
        &self.cfg
    }

    pub fn model_count(&self) -> usize {
        self.space.models.len()
    }

    pub fn pool(&self) -> &[Formula] {
        &self.pool
    }

    fn context_formula(&self, i: Option<usize>) -> Vec<Formula> {
        i.map(|i| self.pool[i].clone()).into_iter().collect()
    }

    pub fn audit(&mut self, target: &AuditTarget) -> AuditVerdict {
        match target {
            AuditTarget::Base(rule) => self.audit_base(rule),
            AuditTarget::Meta(rule) => self.audit_meta_group(&[rule]).pop().expect("one verdict"),
        }
    }

    /// Audits all targets; meta rules with a common origin share one pass.
    pub fn audit_all(&mut self, targets: &[AuditTarget]) -> Vec<AuditVerdict> {
        let mut out: Vec<Option<AuditVerdict>> = vec![None; targets.len()];
        let mut groups: Vec<(Origin, Vec<usize>)> = Vec::new();
        for (i, t) in targets.iter().enumerate() {
            match t {
                AuditTarget::Base(rule) => out[i] = Some(self.audit_base(rule)),
                AuditTarget::Meta(rule) => match groups.iter_mut().find(|(o, _)| *o == rule.origin) {
                    Some((_, members)) => members.push(i),
                    None => groups.push((rule.origin.clone(), vec![i])),
                },
            }
        }
        for (_, members) in groups {
            let rules: Vec<&MetaRuleSchema> = members
                .iter()
                .map(|&i| match &targets[i] {
                    AuditTarget::Meta(r) => r,
                    AuditTarget::Base(_) => unreachable!(),
                })
                .collect();
            for (i, v) in members.into_iter().zip(self.audit_meta_group(&rules)) {
                out[i] = Some(v);
            }
        }
        out.into_iter().map(|v| v.expect("every target audited")).collect()
    }

    // -- base rules ---------------------------------------------------------

    fn audit_base(&mut self, rule: &RuleSchema) -> AuditVerdict {
        let mut needs = [(false, false); 3];
        for p in rule.premises.iter().chain(std::iter::once(&rule.conclusion)) {
            sequent_facet_needs(p, &mut needs);
        }
        let vars: Vec<MetaVar> = rule.metavars().into_iter().collect();
        let signs: Vec<Option<Sign>> =
            if rule.uses_sign_var() { vec![Some(Sign::Plus), Some(Sign::Minus)] } else { vec![None] };
        let n = self.pool.len() as u64;
        let instance_count = n.pow(vars.len() as u32) * signs.len() as u64 * context_count(self.cfg.context_regime, n);
        let mut checks = 0u64;

        for (mi, m) in self.space.models.iter().enumerate() {
            // distinct observable values of each metavariable, first representative kept
            let values: Vec<Vec<(Support, usize)>> = vars
                .iter()
                .map(|v| {
                    let (np, nm) = needs[*v as usize];
                    let mut vals: Vec<(Support, usize)> = Vec::new();
                    for (i, t) in self.tables.iter().enumerate() {
                        let s = Support {
                            plus: if np { t.plus[mi] } else { 0 },
                            minus: if nm { t.minus[mi] } else { 0 },
                        };
                        if !vals.iter().any(|(x, _)| *x == s) {
                            vals.push((s, i));
                        }
                    }
                    vals
                })
                .collect();
            let contexts = self.model_contexts(mi);
            let mut counter = vec![0usize; vars.len()];
            loop {
                let mut vals = [Support { plus: 0, minus: 0 }; 3];
                for (k, v) in vars.iter().enumerate() {
                    vals[*v as usize] = values[k][counter[k]].0;
                }
                for &sign in &signs {
                    for &(ctx, g, d) in &contexts {
                        checks += 1;
                        let premises_hold =
                            rule.premises.iter().all(|p| failing_in_model(m, p, &vals, sign, ctx) == 0);
                        if !premises_hold {
                            continue;
                        }
                        let failing = failing_in_model(m, &rule.conclusion, &vals, sign, ctx);
                        if failing == 0 {
                            continue;
                        }
                        let mut b = Bindings::new().with_contexts(self.context_formula(g), self.context_formula(d));
                        b.sign = sign;
                        for (k, v) in vars.iter().enumerate() {
                            b.set(*v, self.pool[values[k][counter[k]].1].clone());
                        }
                        let instance = instantiate(rule, &b).expect("all metavariables bound");
                        let violation = Violation::Local {
                            bindings: b,
                            instance,
                            model: m.clone(),
                            world: World(failing.trailing_zeros() as usize),
                        };
                        debug_assert!(verify_violation(&AuditTarget::Base(rule.clone()), &violation, self.cfg.reading));
                        return AuditVerdict {
                            rule_id: rule.id.clone(),
                            label: None,
                            status: AuditStatus::Unsound(Box::new(violation)),
                            instance_count,
                            checks,
                            inconclusive: 0,
                        };
                    }
                }
                // next combination, last variable fastest
                let mut k = vars.len();
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    counter[k] += 1;
                    if counter[k] < values[k].len() {
                        done = false;
                        break;
                    }
                    counter[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        AuditVerdict {
            rule_id: rule.id.clone(),
            label: None,
            status: AuditStatus::SoundUpToBound,
            instance_count,
            checks,
            inconclusive: 0,
        }
    }

    /// Distinct context masks of model `mi` admitted by the regime, with the
    /// first (Γ, Δ) pool indices producing them.
    fn model_contexts(&self, mi: usize) -> Vec<(u32, Option<usize>, Option<usize>)> {
        let full = self.space.models[mi].all_worlds();
        let side = |facet: fn(&Table) -> &Vec<u32>| {
            std::iter::once((None, full))
                .chain(self.tables.iter().enumerate().map(|(i, t)| (Some(i), facet(t)[mi])))
                .collect::<Vec<_>>()
        };
        let gammas = side(|t| &t.plus);
        let deltas = side(|t| &t.minus);
        let mut out: Vec<(u32, Option<usize>, Option<usize>)> = Vec::new();
        let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
        for &(g, gm) in &gammas {
            for &(d, dm) in &deltas {
                if regime_admits(self.cfg.context_regime, g, d) && seen.insert((gm, dm), ()).is_none() {
                    out.push((gm & dm, g, d));
                }
            }
        }
        out
    }

    // -- meta rules ---------------------------------------------------------

    fn audit_meta_group(&mut self, rules: &[&MetaRuleSchema]) -> Vec<AuditVerdict> {
        let blank = |r: &MetaRuleSchema, status: AuditStatus| AuditVerdict {
            rule_id: r.id.clone(),
            label: Some(classify_variant(r)),
            status,
            instance_count: 0,
            checks: 0,
            inconclusive: 0,
        };
        if self.cfg.mode == CoordinationMode::IndependentConstructions {
            return rules.iter().map(|r| blank(r, AuditStatus::NoSemanticReading)).collect();
        }

        // distinct sequent shapes; a judgment refers to a shape and a sign
        let mut shapes: Vec<SequentPattern> = Vec::new();
        let mut shape_of = |p: &SequentPattern| {
            let key = SequentPattern { sign: SignPattern::Var, ..p.clone() };
            match shapes.iter().position(|s| *s == key) {
                Some(i) => i,
                None => {
                    shapes.push(key);
                    shapes.len() - 1
                }
            }
        };
        struct Judged {
            line: LineType,
            shape: usize,
            sign: SignPattern,
        }
        let judged: Vec<(Vec<Judged>, Judged)> = rules
            .iter()
            .map(|r| {
                let premises =
                    r.premises.iter().map(|(l, p)| Judged { line: *l, shape: shape_of(p), sign: p.sign }).collect();
                let c = &r.conclusion;
                (premises, Judged { line: c.0, shape: shape_of(&c.1), sign: c.1.sign })
            })
            .collect();

        let mut vars = std::collections::BTreeSet::new();
        let mut uses_sign = false;
        for r in rules {
            let skeleton = r.skeleton();
            vars.extend(skeleton.metavars());
            uses_sign |= skeleton.uses_sign_var();
        }
        let vars: Vec<MetaVar> = vars.into_iter().collect();
        let signs: Vec<Option<Sign>> = if uses_sign { vec![Some(Sign::Plus), Some(Sign::Minus)] } else { vec![None] };

        let n = self.pool.len() as u64;
        let instance_count = n.pow(vars.len() as u32) * signs.len() as u64 * context_count(self.cfg.context_regime, n);
        let mut verdicts: Vec<AuditVerdict> = rules.iter().map(|r| blank(r, AuditStatus::SoundUpToBound)).collect();
        for v in &mut verdicts {
            v.instance_count = instance_count;
        }

        // binding tuples over formula classes: distinct classes first, then
        // small indices first
        let mut order = tuples(vars.len(), self.classes.len());
        order.sort_by_key(|t| {
            let distinct = t.iter().collect::<std::collections::BTreeSet<_>>().len() == t.len();
            (!distinct, shell_key(t))
        });

        let reading = self.cfg.reading;
        for tuple in order {
            let tables: Vec<&Table> = tuple.iter().map(|&c| &self.classes[c].table).collect();
            // per shape: context extras and succedent facets
            let evaluated: Vec<(Option<Bits>, Bits, Bits)> = shapes
                .iter()
                .map(|shape| self.eval_shape(shape, &vars, &tables))
                .collect();
            for &sign in &signs {
                for ci in 0..self.contexts.len() {
                    let mut cache: Vec<[Option<bool>; 2]> = vec![[None; 2]; shapes.len()];
                    let ctx = &self.contexts[ci].bits;
                    let mut valid = |shape: usize, sp: SignPattern, dual: bool| -> bool {
                        let mut s = sp.resolve(sign).expect("sign bound");
                        if dual {
                            s = s.dual();
                        }
                        let slot = s as usize;
                        *cache[shape][slot].get_or_insert_with(|| {
                            let (extra, plus, minus) = &evaluated[shape];
                            let succ = if s == Sign::Plus { plus } else { minus };
                            first_failure(ctx, extra.as_deref(), succ).is_none()
                        })
                    };
                    let mut holds = |j: &Judged| match (j.line, reading) {
                        (LineType::Single, _) => valid(j.shape, j.sign, false),
                        (LineType::Double, Reading::R1Absence) => !valid(j.shape, j.sign, false),
                        (LineType::Double, Reading::R2Unified) => valid(j.shape, j.sign, true),
                    };
                    let mut candidates = Vec::new();
                    for (ri, (premises, conclusion)) in judged.iter().enumerate() {
                        verdicts[ri].checks += 1;
                        if premises.iter().all(&mut holds) && !holds(conclusion) {
                            candidates.push(ri);
                        }
                    }
                    for ri in candidates {
                        if verdicts[ri].status.is_unsound() {
                            continue;
                        }
                        let b = self.bindings_for(&vars, &tuple, sign, ci);
                        match self.confirm(rules[ri], &b) {
                            Some(v) => verdicts[ri].status = AuditStatus::Unsound(Box::new(v)),
                            None => verdicts[ri].inconclusive += 1,
                        }
                    }
                }
            }
        }
        verdicts
    }

    fn eval_shape(&self, shape: &SequentPattern, vars: &[MetaVar], tables: &[&Table]) -> (Option<Bits>, Bits, Bits) {
        let models = &self.space.models;
        let eval = |p: &Pattern| -> Table {
            let (plus, minus) = models
                .iter()
                .enumerate()
                .map(|(mi, m)| {
                    let mut vals = [Support { plus: 0, minus: 0 }; 3];
                    for (v, t) in vars.iter().zip(tables) {
                        vals[*v as usize] = Support { plus: t.plus[mi], minus: t.minus[mi] };
                    }
                    let s = eval_support(m, p, &vals);
                    (s.plus, s.minus)
                })
                .unzip();
            Table { plus, minus }
        };
        let mut extra: Option<Bits> = None;
        let mut meet = |bits: Bits| {
            extra = Some(match extra.take() {
                Some(e) => e.iter().zip(&bits).map(|(a, b)| a & b).collect(),
                None => bits,
            })
        };
        for g in &shape.gamma {
            meet(self.space.pack(&eval(g).plus));
        }
        for d in &shape.delta {
            meet(self.space.pack(&eval(d).minus));
        }
        let succ = eval(&shape.succedent);
        (extra, self.space.pack(&succ.plus), self.space.pack(&succ.minus))
    }

    fn bindings_for(&self, vars: &[MetaVar], tuple: &[usize], sign: Option<Sign>, ci: usize) -> Bindings {
        let c = &self.contexts[ci];
        let mut b = Bindings::new().with_contexts(self.context_formula(c.gamma), self.context_formula(c.delta));
        b.sign = sign;
        for (v, &class) in vars.iter().zip(tuple) {
            b.set(*v, self.pool[self.classes[class].rep].clone());
        }
        b
    }

    fn evidence(&mut self, j: &MetaJudgment, want_holds: bool) -> Option<Evidence> {
        let (line, s) = effective(j, self.cfg.reading);
        let by_derivation = match line {
            LineType::Single => want_holds,
            LineType::Double => !want_holds,
        };
        if by_derivation {
            self.prover.prove(&s).map(Evidence::Derivation)
        } else {
            self.space.countermodel(&s).map(|(model, world)| Evidence::Countermodel { model, world })
        }
    }

    fn confirm(&mut self, rule: &MetaRuleSchema, b: &Bindings) -> Option<Violation> {
        let judgment = |(line, p): &(LineType, SequentPattern)| MetaJudgment {
            line: *line,
            sequent: instantiate_sequent(p, b).expect("all metavariables bound"),
        };
        let mut premises = Vec::new();
        for p in &rule.premises {
            let j = judgment(p);
            let evidence = self.evidence(&j, true)?;
            premises.push(JudgmentEvidence { judgment: j, evidence });
        }
        let j = judgment(&rule.conclusion);
        let evidence = self.evidence(&j, false)?;
        let v = Violation::Global { bindings: b.clone(), premises, conclusion: JudgmentEvidence { judgment: j, evidence } };
        verify_violation(&AuditTarget::Meta(rule.clone()), &v, self.cfg.reading).then_some(v)
    }

    /// Bounded validity of a sequent over the model space.
    pub fn valid(&self, s: &Sequent) -> bool {
        self.space.countermodel(s).is_none()
    }
}

pub fn audit_rule(target: &AuditTarget, cfg: &AuditConfig) -> AuditVerdict {
    Auditor::new(cfg).audit(target)
}

/// Derivable sequents found to have a countermodel.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CoherenceReport {
    pub sequents: usize,
    pub derivable: usize,
    pub violations: Vec<String>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CoherenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "search/semantics coherence: {} sequents, {} derivable, {} with a countermodel",
            self.sequents,
            self.derivable,
            self.violations.len()
        )?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Proves every closed sequent over formulas of depth up to
/// `max_formula_depth`, and every sequent built like an audit instance
/// (succedent and at most one context formula per side from the pool), then
/// checks that no derivable one has a countermodel in the bounded space.
pub fn coherence_check(cfg: &AuditConfig) -> CoherenceReport {
    let auditor = Auditor::new(cfg);
    let mut prover = ProofCache::new(cfg.search_budget);
    let mut report = CoherenceReport::default();
    let mut visit = |s: Sequent, report: &mut CoherenceReport| {
        report.sequents += 1;
        if let Some(tree) = prover.prove(&s) {
            report.derivable += 1;
            let accepted = crate::calculus::check_derivation(&tree).is_accepted();
            if !accepted || tree.conclusion != s {
                report.violations.push(format!("{s}: search returned a rejected derivation"));
            } else if let Some((m, w)) = auditor.space.countermodel(&s) {
                report.violations.push(format!("{s}: derivable but fails at {} of\n{m}", m.world_name(w)));
            }
        }
    };
    for f in enumerate_formulas(&cfg.atoms, cfg.max_formula_depth) {
        for sign in [Sign::Plus, Sign::Minus] {
            visit(Sequent::closed(sign, f.clone()), &mut report);
        }
    }
    let side = |i: Option<usize>| auditor.context_formula(i);
    let choices: Vec<Option<usize>> = std::iter::once(None).chain((0..auditor.pool.len()).map(Some)).collect();
    for &g in &choices {
        for &d in &choices {
            if g.is_none() && d.is_none() {
                continue;
            }
            for a in &auditor.pool {
                for sign in [Sign::Plus, Sign::Minus] {
                    visit(Sequent::new(side(g), side(d), sign, a.clone()), &mut report);
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub configs: Vec<AuditConfig>,
    pub targets: Vec<AuditTarget>,
    /// `cells[row][config]`.
    pub cells: Vec<Vec<AuditVerdict>>,
    pub model_counts: Vec<usize>,
}

pub fn audit_suite(cfg_matrix: &[AuditConfig]) -> AuditReport {
    audit_targets(&default_targets(), cfg_matrix)
}

pub fn audit_targets(targets: &[AuditTarget], cfg_matrix: &[AuditConfig]) -> AuditReport {
    let mut columns = Vec::new();
    let mut model_counts = Vec::new();
    for cfg in cfg_matrix {
        let mut auditor = Auditor::new(cfg);
        model_counts.push(auditor.model_count());
        columns.push(auditor.audit_all(targets));
    }
    let cells = (0..targets.len()).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    AuditReport { configs: cfg_matrix.to_vec(), targets: targets.to_vec(), cells, model_counts }
}

fn judgment_json(j: &JudgmentEvidence) -> Value {
    json!({
        "line": j.judgment.line,
        "sequent": j.judgment.sequent.to_string(),
        "evidence": evidence_json(&j.evidence),
    })
}

fn evidence_json(e: &Evidence) -> Value {
    match e {
        Evidence::Countermodel { model, world } => json!({
            "countermodel": { "model": model.to_file(), "world": model.world_name(*world) }
        }),
        Evidence::Derivation(tree) => json!({ "derivation": compact_proof_script(tree) }),
    }
}

pub fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::Local { bindings, instance, model, world } => json!({
            "bindings": bindings.to_string(),
            "premises": instance.premises.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "conclusion": instance.conclusion.to_string(),
            "model": model.to_file(),
            "world": model.world_name(*world),
        }),
        Violation::Global { bindings, premises, conclusion } => json!({
            "bindings": bindings.to_string(),
            "premises": premises.iter().map(judgment_json).collect::<Vec<_>>(),
            "conclusion": judgment_json(conclusion),
        }),
    }
}

fn describe_evidence(e: &Evidence) -> String {
    match e {
        Evidence::Countermodel { model, world } => {
            let mut text = format!("countermodel, fails at {}:\n", model.world_name(*world));
            for line in model.to_string().lines() {
                let _ = writeln!(text, "        {line}");
            }
            text.trim_end().to_string()
        }
        Evidence::Derivation(tree) => format!("derivation {}", compact_proof_script(tree)),
    }
}

pub fn describe_violation(v: &Violation) -> String {
    let mut out = String::new();
    match v {
        Violation::Local { bindings, instance, model, world } => {
            let _ = writeln!(out, "    instance: {bindings}");
            for p in &instance.premises {
                let _ = writeln!(out, "    premise valid in model:  {p}");
            }
            let _ = writeln!(out, "    conclusion fails at {}: {}", model.world_name(*world), instance.conclusion);
            for line in model.to_string().lines() {
                let _ = writeln!(out, "      {line}");
            }
        }
        Violation::Global { bindings, premises, conclusion } => {
            let _ = writeln!(out, "    instance: {bindings}");
            for p in premises {
                let _ = writeln!(out, "    premise holds:   {}", p.judgment);
                let _ = writeln!(out, "      {}", describe_evidence(&p.evidence));
            }
            let _ = writeln!(out, "    conclusion fails: {}", conclusion.judgment);
            let _ = writeln!(out, "      {}", describe_evidence(&conclusion.evidence));
        }
    }
    out
}

/// Per-configuration summary of which rows came out unsound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigSummary {
    pub config: String,
    pub unsound: Vec<String>,
    pub zeta_rows: usize,
    pub zeta_unsound: usize,
    pub non_zeta_unsound: usize,
    /// Unsound rows outside the ζ class.
    pub unexpected: Vec<String>,
    pub inconclusive: u64,
    /// Whether the unsound rows are exactly the ζ-class meta rows.
    pub unsound_exactly_zeta: bool,
    pub no_semantic_reading: bool,
}

impl fmt::Display for ConfigSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.no_semantic_reading {
            return write!(f, "{}: meta rows have no semantic reading; {} unsound", self.config, self.unsound.len());
        }
        write!(
            f,
            "{}: {} unsound, zeta-class {}/{} unsound, non-zeta {} unsound, inconclusive {}; unsound rows are exactly the zeta class: {}",
            self.config,
            self.unsound.len(),
            self.zeta_unsound,
            self.zeta_rows,
            self.non_zeta_unsound,
            self.inconclusive,
            if self.unsound_exactly_zeta { "yes" } else { "no" },
        )?;
        if !self.unexpected.is_empty() {
            write!(f, "; non-zeta unsound rows: {}", self.unexpected.join(", "))?;
        }
        Ok(())
    }
}

impl AuditReport {
    pub fn any_unsound(&self) -> bool {
        self.cells.iter().flatten().any(|v| v.status.is_unsound())
    }

    pub fn verdict(&self, rule_id: &str, config: usize) -> Option<&AuditVerdict> {
        self.targets.iter().position(|t| t.id() == rule_id).map(|r| &self.cells[r][config])
    }

    pub fn summaries(&self) -> Vec<ConfigSummary> {
        (0..self.configs.len())
            .map(|c| {
                let mut s = ConfigSummary {
                    config: self.configs[c].label(),
                    unsound: Vec::new(),
                    zeta_rows: 0,
                    zeta_unsound: 0,
                    non_zeta_unsound: 0,
                    unexpected: Vec::new(),
                    inconclusive: 0,
                    unsound_exactly_zeta: true,
                    no_semantic_reading: self.configs[c].mode == CoordinationMode::IndependentConstructions,
                };
                for (t, row) in self.targets.iter().zip(&self.cells) {
                    let v = &row[c];
                    let zeta = t.label().is_some_and(|l| l.is_zeta());
                    s.zeta_rows += zeta as usize;
                    s.inconclusive += v.inconclusive;
                    if v.status.is_unsound() {
                        s.unsound.push(t.id().to_string());
                        if zeta {
                            s.zeta_unsound += 1;
                        } else {
                            s.non_zeta_unsound += 1;
                            s.unexpected.push(t.id().to_string());
                        }
                    }
                    if zeta != v.status.is_unsound() {
                        s.unsound_exactly_zeta = false;
                    }
                }
                s
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.configs.iter().enumerate() {
            let _ = writeln!(
                out,
                "[{i}] {} ({} models, pool of {} formulas, budget {})",
                c.label(),
                self.model_counts[i],
                enumerate_formulas(&c.atoms, c.pool_depth()).len(),
                c.search_budget
            );
        }
        let width = self.targets.iter().map(|t| t.id().len()).max().unwrap_or(4).max(4);
        let _ = write!(out, "\n{:width$}  {:10}  {:12}", "rule", "kind", "label");
        for i in 0..self.configs.len() {
            let _ = write!(out, "  {:>8}", format!("[{i}]"));
        }
        out.push('\n');
        for (t, row) in self.targets.iter().zip(&self.cells) {
            let label = t.label().map(|l| l.to_string()).unwrap_or_default();
            let _ = write!(out, "{:width$}  {:10}  {:12}", t.id(), t.kind(), label);
            for v in row {
                let _ = write!(out, "  {:>8}", v.status.short());
            }
            out.push('\n');
        }
        let mut first = true;
        for (t, row) in self.targets.iter().zip(&self.cells) {
            for (i, v) in row.iter().enumerate() {
                if let AuditStatus::Unsound(w) = &v.status {
                    if first {
                        out.push_str("\nwitnesses:\n");
                        first = false;
                    }
                    let _ = writeln!(out, "  {} under [{i}]:", t.id());
                    out.push_str(&describe_violation(w));
                }
            }
        }
        out.push('\n');
        for s in self.summaries() {
            let _ = writeln!(out, "summary {s}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let configs: Vec<Value> = self
            .configs
            .iter()
            .zip(&self.model_counts)
            .map(|(c, &models)| {
                let mut v = serde_json::to_value(c).expect("config serializes");
                v["models"] = json!(models);
                v["pool_size"] = json!(enumerate_formulas(&c.atoms, c.pool_depth()).len());
                v
            })
            .collect();
        let mut records = Vec::new();
        for (t, row) in self.targets.iter().zip(&self.cells) {
            for (i, v) in row.iter().enumerate() {
                let status = match &v.status {
                    AuditStatus::SoundUpToBound => "sound_up_to_bound",
                    AuditStatus::Unsound(_) => "unsound",
                    AuditStatus::NoSemanticReading => "no_semantic_reading",
                };
                let witness = match &v.status {
                    AuditStatus::Unsound(w) => violation_json(w),
                    _ => Value::Null,
                };
                records.push(json!({
                    "rule": t.id(),
                    "kind": t.kind(),
                    "label": t.label().map(|l| l.to_string()),
                    "zeta": t.label().is_some_and(|l| l.is_zeta()),
                    "config": i,
                    "status": status,
                    "instances": v.instance_count,
                    "checks": v.checks,
                    "inconclusive": v.inconclusive,
                    "witness": witness,
                }));
            }
        }
        let doc = json!({ "configs": configs, "records": records, "summaries": self.summaries() });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

/// Outcome of comparing unified-reading verdicts with the translation of
/// each meta row onto the base level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CollapseCheck {
    pub checked: usize,
    pub agreeing: usize,
    pub disagreements: Vec<String>,
}

impl CollapseCheck {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.agreeing == self.checked
    }
}

/// Under the unified reading, a meta row should be sound exactly when its
/// translation is a sound base rule (or an identity step, for coordination
/// rules). Base soundness is taken from `base`, audited with the same bounds.
pub fn translation_collapse_check(report: &AuditReport) -> CollapseCheck {
    let mut out = CollapseCheck::default();
    for (c, cfg) in report.configs.iter().enumerate() {
        if cfg.reading != Reading::R2Unified || cfg.mode == CoordinationMode::IndependentConstructions {
            continue;
        }
        let mut base_verdicts: HashMap<String, bool> = HashMap::new();
        for (t, row) in report.targets.iter().zip(&report.cells) {
            if let AuditTarget::Base(r) = t {
                base_verdicts.insert(r.id.clone(), row[c].status.is_sound());
            }
        }
        let mut auditor: Option<Auditor> = None;
        for (t, row) in report.targets.iter().zip(&report.cells) {
            let AuditTarget::Meta(rule) = t else { continue };
            let translated = translate_rule(rule);
            let predicted = match &rule.origin {
                Origin::Structural => translated.premises.len() == 1 && translated.premises[0] == translated.conclusion,
                Origin::Base(id) => {
                    let base = crate::calculus::find_rule(id).expect("origin is a catalogue rule");
                    let same_shape = translated.premises == base.premises && translated.conclusion == base.conclusion;
                    let sound = *base_verdicts.entry(id.clone()).or_insert_with(|| {
                        let a = auditor.get_or_insert_with(|| Auditor::new(cfg));
                        a.audit(&AuditTarget::Base(base.clone())).status.is_sound()
                    });
                    same_shape && sound
                }
            };
            out.checked += 1;
            if predicted == row[c].status.is_sound() {
                out.agreeing += 1;
            } else {
                out.disagreements.push(format!("{} under [{c}]", rule.id));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::find_rule;
    use crate::metacalculus::generate_variants;
    use crate::semantics::enumerate_models;
    use crate::syntax::parse_sequent;

    fn meta(id: &str) -> AuditTarget {
        let rule = right_rule_variants()
            .into_iter()
            .chain(structural_rules())
            .find(|r| r.id == id)
            .unwrap_or_else(|| panic!("{id}"));
        AuditTarget::Meta(rule)
    }

    fn cfg(reading: Reading, regime: ContextRegime, worlds: usize, depth: usize) -> AuditConfig {
        AuditConfig { reading, context_regime: regime, max_worlds: worlds, max_formula_depth: depth, ..AuditConfig::default() }
    }

    fn global(v: &AuditVerdict) -> (&Bindings, &[JudgmentEvidence], &JudgmentEvidence) {
        match &v.status {
            AuditStatus::Unsound(w) => match w.as_ref() {
                Violation::Global { bindings, premises, conclusion } => (bindings, premises, conclusion),
                other => panic!("{other:?}"),
            },
            other => panic!("{}: {other:?}", v.rule_id),
        }
    }

    #[test]
    fn zeta_conjunction_witness() {
        let c = cfg(Reading::R1Absence, ContextRegime::Empty, 2, 1);
        let target = meta("and-r+[DD>S]");
        let v = audit_rule(&target, &c);
        let (b, premises, conclusion) = global(&v);
        assert_eq!(b.get(MetaVar::A), Some(&Formula::atom("p")));
        assert_eq!(b.get(MetaVar::B), Some(&Formula::atom("q")));
        assert_eq!(premises[0].judgment, MetaJudgment::double(parse_sequent("; |-- p").unwrap()));
        assert_eq!(conclusion.judgment, MetaJudgment::single(parse_sequent("; |-+ p & q").unwrap()));
        let Evidence::Countermodel { model, .. } = &premises[0].evidence else { panic!() };
        assert_eq!(model.world_count(), 1);
        let AuditStatus::Unsound(w) = &v.status else { panic!() };
        assert!(verify_violation(&target, w, c.reading));
    }

    #[test]
    fn coordination_rules_under_absence_reading() {
        let empty = cfg(Reading::R1Absence, ContextRegime::Empty, 2, 1);
        let v = audit_rule(&meta("s2a"), &empty);
        let (b, _, _) = global(&v);
        assert_eq!(b.get(MetaVar::A), Some(&Formula::atom("p")));
        assert!(audit_rule(&meta("s1a"), &empty).status.is_sound());
        assert!(audit_rule(&meta("s1b"), &empty).status.is_sound());

        let arbitrary = cfg(Reading::R1Absence, ContextRegime::Arbitrary, 2, 1);
        for id in ["s1a", "s1b"] {
            let v = audit_rule(&meta(id), &arbitrary);
            let (b, _, _) = global(&v);
            let p = Formula::atom("p");
            assert_eq!(b.get(MetaVar::A), Some(&p), "{id}");
            assert_eq!(b.gamma.as_ref().unwrap(), &[p.clone()].into(), "{id}");
            assert_eq!(b.delta.as_ref().unwrap(), &[p.clone()].into(), "{id}");
        }
    }

    #[test]
    fn unified_reading_restores_everything() {
        let c = cfg(Reading::R2Unified, ContextRegime::Arbitrary, 2, 1);
        let report = audit_targets(&default_targets(), &[c]);
        for (t, row) in report.targets.iter().zip(&report.cells) {
            assert!(row[0].status.is_sound(), "{}", t.id());
        }
        assert!(translation_collapse_check(&report).passed());
    }

    #[test]
    fn independent_mode_has_no_reading() {
        let c = AuditConfig { mode: CoordinationMode::IndependentConstructions, ..AuditConfig::default() };
        assert_eq!(audit_rule(&meta("s2a"), &c).status, AuditStatus::NoSemanticReading);
        assert!(audit_rule(&AuditTarget::Base(find_rule("ax+").unwrap().clone()), &c).status.is_sound());
    }

    #[test]
    fn unsound_base_rule_is_caught() {
        // excluded middle as an axiom
        let bogus = RuleSchema {
            id: "lem".into(),
            premises: vec![],
            conclusion: SequentPattern {
                gamma: vec![],
                delta: vec![],
                sign: SignPattern::Fixed(Sign::Plus),
                succedent: Pattern::Binary(
                    Connective::Or,
                    Box::new(Pattern::Var(MetaVar::A)),
                    Box::new(Pattern::Binary(
                        Connective::Imp,
                        Box::new(Pattern::Var(MetaVar::A)),
                        Box::new(Pattern::Bot),
                    )),
                ),
            },
        };
        let target = AuditTarget::Base(bogus);
        let v = audit_rule(&target, &cfg(Reading::R1Absence, ContextRegime::Empty, 2, 1));
        let AuditStatus::Unsound(w) = &v.status else { panic!("{v:?}") };
        assert!(verify_violation(&target, w, Reading::R1Absence));
        let Violation::Local { model, .. } = w.as_ref() else { panic!() };
        assert_eq!(model.world_count(), 2);
    }

    #[test]
    fn rooted_models_agree_with_all_models() {
        let c = cfg(Reading::R1Absence, ContextRegime::Arbitrary, 2, 1);
        let all = enumerate_models(2, &c.atoms, c.model_class);
        let mut rooted = Auditor::new(&c);
        let mut full = Auditor::with_models(&c, all);
        assert!(full.model_count() > rooted.model_count());
        let targets: Vec<AuditTarget> = generate_variants(find_rule("imp-r+").unwrap())
            .into_iter()
            .map(AuditTarget::Meta)
            .chain(structural_rules().into_iter().map(AuditTarget::Meta))
            .chain(base_rules().iter().take(8).cloned().map(AuditTarget::Base))
            .collect();
        let a: Vec<bool> = rooted.audit_all(&targets).iter().map(|v| v.status.is_sound()).collect();
        let b: Vec<bool> = full.audit_all(&targets).iter().map(|v| v.status.is_sound()).collect();
        assert_eq!(a, b);
    }
}
