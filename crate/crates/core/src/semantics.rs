//! Finite Kripke models with separate truth support (`⊨⁺`) and falsity
//! support (`⊨⁻`).
//!
//! A model is a preorder of worlds with two persistent atom valuations.
//! Clauses, at world `w`:
//!
//! | formula  | `w ⊨⁺`                                 | `w ⊨⁻`                                 |
//! |----------|----------------------------------------|----------------------------------------|
//! | atom p   | p ∈ V⁺(w)                              | p ∈ V⁻(w)                              |
//! | T        | always                                 | never                                  |
//! | F        | never                                  | always                                 |
//! | A & B    | ⊨⁺A and ⊨⁺B                            | ⊨⁻A or ⊨⁻B                             |
//! | A \| B   | ⊨⁺A or ⊨⁺B                             | ⊨⁻A and ⊨⁻B                            |
//! | A -> B   | every v ≥ w with v ⊨⁺A has v ⊨⁺B       | ⊨⁺A and ⊨⁻B                            |
//! | A -< B   | ⊨⁻A and ⊨⁺B                            | every v ≥ w with v ⊨⁻A has v ⊨⁻B       |
//!
//! Co-implication is the sign-swapped mirror of implication. Which argument
//! plays the "excluded" role is a convention; this one keeps the clauses
//! exactly dual to the rule catalogue.
//!
//! V⁺ and V⁻ may overlap (non-exclusive models). Atoms missing from a
//! valuation are supported neither way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{check_derivation, DerivationTree};
use crate::metacalculus::translate_unified;
use crate::search::{prove, SearchBudget};
use crate::syntax::{AtomSet, Connective, Formula, LineType, MetaJudgment, Sequent, Sign};

/// Upper bound on worlds per model (masks are `u32`).
pub const MAX_WORLDS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct World(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelClass {
    NonExclusive,
    /// No world supports both the truth and the falsity of an atom.
    Exclusive,
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelClass::NonExclusive => "nonexclusive",
            ModelClass::Exclusive => "exclusive",
        })
    }
}

/// How a double-lined judgment is read semantically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reading {
    /// Double line: the sequent has no derivation.
    #[serde(rename = "r1")]
    R1Absence,
    /// Double line over `⊢σ`: a single line over the dual sequent `⊢σ̄`.
    #[serde(rename = "r2")]
    R2Unified,
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reading::R1Absence => "r1",
            Reading::R2Unified => "r2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    Empty,
    #[error("model has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("leq is not transitive: {0} <= {1} and {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),
    #[error("valuation V{sign} is not persistent: atom `{atom}` holds at `{lower}` but not at `{upper}` although {lower} <= {upper}")]
    NotPersistent { sign: Sign, atom: String, lower: String, upper: String },
    #[error("malformed model file: {0}")]
    Format(String),
}

/// Truth and falsity support of one formula, as world masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Support {
    pub plus: u32,
    pub minus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    names: Vec<String>,
    /// `up[w]` is the mask of worlds `v` with `w ≤ v`.
    up: Vec<u32>,
    vplus: BTreeMap<String, u32>,
    vminus: BTreeMap<String, u32>,
}

impl KripkeModel {
    /// Builds a model from world names, `≤` pairs and per-world valuations.
    /// The reflexive closure of `leq` is added; transitivity and
    /// persistence are checked.
    pub fn new(
        worlds: &[String],
        leq: &[(String, String)],
        vplus: &BTreeMap<String, BTreeSet<String>>,
        vminus: &BTreeMap<String, BTreeSet<String>>,
    ) -> Result<KripkeModel, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::Empty);
        }
        if worlds.len() > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(worlds.len()));
        }
        let mut index = BTreeMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.as_str(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let lookup = |w: &str| index.get(w).copied().ok_or_else(|| ModelError::UnknownWorld(w.to_string()));
        let mut up: Vec<u32> = (0..worlds.len()).map(|i| 1 << i).collect();
        for (a, b) in leq {
            let (i, j) = (lookup(a)?, lookup(b)?);
            up[i] |= 1 << j;
        }
        for i in 0..worlds.len() {
            for j in bits(up[i]) {
                for k in bits(up[j]) {
                    if up[i] & (1 << k) == 0 {
                        return Err(ModelError::NotTransitive(
                            worlds[i].clone(),
                            worlds[j].clone(),
                            worlds[k].clone(),
                        ));
                    }
                }
            }
        }
        let valuation = |v: &BTreeMap<String, BTreeSet<String>>| -> Result<BTreeMap<String, u32>, ModelError> {
            let mut out: BTreeMap<String, u32> = BTreeMap::new();
            for (w, atoms) in v {
                let i = lookup(w)?;
                for a in atoms {
                    *out.entry(a.clone()).or_default() |= 1 << i;
                }
            }
            Ok(out)
        };
        let model = KripkeModel { names: worlds.to_vec(), up, vplus: valuation(vplus)?, vminus: valuation(vminus)? };
        model.check_persistence()?;
        Ok(model)
    }

    fn from_masks(n: usize, up: Vec<u32>, vplus: BTreeMap<String, u32>, vminus: BTreeMap<String, u32>) -> KripkeModel {
        KripkeModel { names: (0..n).map(|i| format!("w{i}")).collect(), up, vplus, vminus }
    }

    fn check_persistence(&self) -> Result<(), ModelError> {
        for (sign, val) in [(Sign::Plus, &self.vplus), (Sign::Minus, &self.vminus)] {
            for (atom, &mask) in val {
                for w in bits(mask) {
                    let missing = self.up[w] & !mask;
                    if missing != 0 {
                        let v = missing.trailing_zeros() as usize;
                        return Err(ModelError::NotPersistent {
                            sign,
                            atom: atom.clone(),
                            lower: self.names[w].clone(),
                            upper: self.names[v].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn world_count(&self) -> usize {
        self.names.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.names.len()).map(World)
    }

    pub fn world_name(&self, w: World) -> &str {
        &self.names[w.0]
    }

    pub fn leq(&self, w: World, v: World) -> bool {
        self.up[w.0] & (1 << v.0) != 0
    }

    pub fn successors(&self, w: World) -> u32 {
        self.up[w.0]
    }

    pub fn all_worlds(&self) -> u32 {
        if self.names.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.names.len()) - 1
        }
    }

    pub fn valuation(&self, sign: Sign, atom: &str) -> u32 {
        let v = match sign {
            Sign::Plus => &self.vplus,
            Sign::Minus => &self.vminus,
        };
        v.get(atom).copied().unwrap_or(0)
    }

    pub fn is_exclusive(&self) -> bool {
        self.vplus.iter().all(|(a, m)| m & self.valuation(Sign::Minus, a) == 0)
    }

    /// Worlds where every successor in `a` is also in `b`.
    pub(crate) fn box_implies(&self, a: u32, b: u32) -> u32 {
        let mut out = 0;
        for w in 0..self.names.len() {
            if self.up[w] & a & !b == 0 {
                out |= 1 << w;
            }
        }
        out
    }

    pub fn support(&self, f: &Formula) -> Support {
        match f {
            Formula::Atom(a) => Support { plus: self.valuation(Sign::Plus, a), minus: self.valuation(Sign::Minus, a) },
            Formula::Top => Support { plus: self.all_worlds(), minus: 0 },
            Formula::Bot => Support { plus: 0, minus: self.all_worlds() },
            _ => {
                let (op, l, r) = f.as_binary().expect("binary");
                let (l, r) = (self.support(l), self.support(r));
                match op {
                    Connective::And => Support { plus: l.plus & r.plus, minus: l.minus | r.minus },
                    Connective::Or => Support { plus: l.plus | r.plus, minus: l.minus & r.minus },
                    Connective::Imp => Support { plus: self.box_implies(l.plus, r.plus), minus: l.plus & r.minus },
                    Connective::CoImp => Support { plus: l.minus & r.plus, minus: self.box_implies(l.minus, r.minus) },
                }
            }
        }
    }

    /// Worlds supporting every Γ formula true and every Δ formula false.
    pub fn context_worlds(&self, s: &Sequent) -> u32 {
        let mut ctx = self.all_worlds();
        for g in &s.gamma {
            ctx &= self.support(g).plus;
        }
        for d in &s.delta {
            ctx &= self.support(d).minus;
        }
        ctx
    }

    /// Worlds at which `s` fails.
    pub fn failing_worlds(&self, s: &Sequent) -> u32 {
        let succ = self.support(&s.succedent);
        let holds = match s.sign {
            Sign::Plus => succ.plus,
            Sign::Minus => succ.minus,
        };
        self.context_worlds(s) & !holds
    }

    pub fn to_file(&self) -> ModelFile {
        let mut leq = Vec::new();
        for w in self.worlds() {
            for v in self.worlds() {
                if w != v && self.leq(w, v) {
                    leq.push([self.names[w.0].clone(), self.names[v.0].clone()]);
                }
            }
        }
        let per_world = |val: &BTreeMap<String, u32>| {
            self.worlds()
                .map(|w| {
                    let atoms =
                        val.iter().filter(|(_, m)| *m & (1 << w.0) != 0).map(|(a, _)| a.clone()).collect::<Vec<_>>();
                    (self.names[w.0].clone(), atoms)
                })
                .collect::<BTreeMap<_, _>>()
        };
        ModelFile { worlds: self.names.clone(), leq, vplus: per_world(&self.vplus), vminus: per_world(&self.vminus) }
    }

    pub fn from_file(file: &ModelFile) -> Result<KripkeModel, ModelError> {
        let leq: Vec<(String, String)> = file.leq.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        let set = |m: &BTreeMap<String, Vec<String>>| {
            m.iter().map(|(w, atoms)| (w.clone(), atoms.iter().cloned().collect())).collect::<BTreeMap<_, _>>()
        };
        KripkeModel::new(&file.worlds, &leq, &set(&file.vplus), &set(&file.vminus))
    }

    pub fn from_json(text: &str) -> Result<KripkeModel, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        KripkeModel::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model file serializes")
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order: Vec<String> = self
            .worlds()
            .flat_map(|w| self.worlds().map(move |v| (w, v)))
            .filter(|(w, v)| w != v && self.leq(*w, *v))
            .map(|(w, v)| format!("{} <= {}", self.world_name(w), self.world_name(v)))
            .collect();
        writeln!(f, "worlds: {}", self.names.join(", "))?;
        writeln!(f, "order: {}", if order.is_empty() { "(discrete)".to_string() } else { order.join(", ") })?;
        for w in self.worlds() {
            let atoms = |val: &BTreeMap<String, u32>| {
                val.iter().filter(|(_, m)| *m & (1 << w.0) != 0).map(|(a, _)| a.as_str()).collect::<Vec<_>>().join(", ")
            };
            writeln!(f, "  {}: V+ {{{}}}  V- {{{}}}", self.world_name(w), atoms(&self.vplus), atoms(&self.vminus))?;
        }
        Ok(())
    }
}

/// Model file schema: `worlds`, `leq` pairs (reflexive pairs optional),
/// and per-world atom lists for `vplus` and `vminus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
    #[serde(default)]
    pub vplus: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub vminus: BTreeMap<String, Vec<String>>,
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

pub fn eval_plus(m: &KripkeModel, w: World, f: &Formula) -> bool {
    m.support(f).plus & (1 << w.0) != 0
}

pub fn eval_minus(m: &KripkeModel, w: World, f: &Formula) -> bool {
    m.support(f).minus & (1 << w.0) != 0
}

pub fn sequent_valid_in(m: &KripkeModel, s: &Sequent) -> bool {
    m.failing_worlds(s) == 0
}

// ---------------------------------------------------------------------------
// Enumeration

/// Reflexive-transitive relations on `n` labelled worlds, as successor masks.
pub(crate) fn preorders(n: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = Vec::new();
    for subset in 0u64..(1 << pairs.len()) {
        let mut up: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for (k, (i, j)) in pairs.iter().enumerate() {
            if subset & (1 << k) != 0 {
                up[*i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| bits(up[i]).all(|j| up[j] & !up[i] == 0));
        if transitive {
            out.push(up);
        }
    }
    out
}

fn upsets(up: &[u32]) -> Vec<u32> {
    let n = up.len();
    (0u32..(1 << n)).filter(|&s| bits(s).all(|w| up[w] & !s == 0)).collect()
}

fn permute_mask(mask: u32, perm: &[usize]) -> u32 {
    bits(mask).fold(0, |acc, w| acc | (1 << perm[w]))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Encoding compared for the isomorphism-canonical choice.
fn encode(up: &[u32], vals: &[u32], perm: &[usize]) -> Vec<u32> {
    let n = up.len();
    let mut relation = vec![0; n];
    for w in 0..n {
        relation[perm[w]] = permute_mask(up[w], perm);
    }
    relation.extend(vals.iter().map(|m| permute_mask(*m, perm)));
    relation
}

/// Which model space to walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    /// Every preorder.
    Preorders,
    /// Partial orders with a least world. Every point of every finite model
    /// is equivalent, for all formulas, to the root of such a model (its
    /// generated submodel with clusters collapsed).
    RootedPosets,
}

pub(crate) fn visit_models(
    max_worlds: usize,
    atoms: &AtomSet,
    class: ModelClass,
    shape: Shape,
    visit: &mut dyn FnMut(KripkeModel) -> ControlFlow<()>,
) {
    let atoms: Vec<&String> = atoms.iter().collect();
    for n in 1..=max_worlds.min(MAX_WORLDS) {
        let perms = permutations(n);
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for up in preorders(n) {
            if shape == Shape::RootedPosets {
                let antisymmetric = (0..n).all(|i| bits(up[i]).all(|j| i == j || up[j] & (1 << i) == 0));
                if !antisymmetric || !up.contains(&all) {
                    continue;
                }
            }
            let ups = upsets(&up);
            // valuation slots: p+, p-, q+, q-, ...
            let slots = 2 * atoms.len();
            let mut counter = vec![0usize; slots];
            loop {
                let vals: Vec<u32> = counter.iter().map(|&i| ups[i]).collect();
                let admissible = class == ModelClass::NonExclusive || vals.chunks(2).all(|pm| pm[0] & pm[1] == 0);
                if admissible {
                    let identity = encode(&up, &vals, &perms[0]);
                    let canonical = perms.iter().all(|p| encode(&up, &vals, p) >= identity);
                    if canonical {
                        let mut vplus = BTreeMap::new();
                        let mut vminus = BTreeMap::new();
                        for (k, a) in atoms.iter().enumerate() {
                            if vals[2 * k] != 0 {
                                vplus.insert((*a).clone(), vals[2 * k]);
                            }
                            if vals[2 * k + 1] != 0 {
                                vminus.insert((*a).clone(), vals[2 * k + 1]);
                            }
                        }
                        if visit(KripkeModel::from_masks(n, up.clone(), vplus, vminus)).is_break() {
                            return;
                        }
                    }
                }
                // advance the mixed-radix counter, last slot fastest
                let mut k = slots;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    counter[k] += 1;
                    if counter[k] < ups.len() {
                        break;
                    }
                    counter[k] = 0;
                }
                if counter.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
}

/// All models with at most `max_worlds` worlds over `atoms`, one per
/// isomorphism class, in a fixed order: fewer worlds first, the empty
/// valuation first.
pub fn enumerate_models(max_worlds: usize, atoms: &AtomSet, class: ModelClass) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    visit_models(max_worlds, atoms, class, Shape::Preorders, &mut |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

/// Rooted partial-order models, one per isomorphism class. Validity over
/// these coincides with validity over all models of the same size bound.
pub fn enumerate_rooted_models(max_worlds: usize, atoms: &AtomSet, class: ModelClass) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    visit_models(max_worlds, atoms, class, Shape::RootedPosets, &mut |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

/// First enumerated model and world at which `s` fails.
pub fn find_countermodel(s: &Sequent, max_worlds: usize, atoms: &AtomSet, class: ModelClass) -> Option<(KripkeModel, World)> {
    let mut atoms = atoms.clone();
    atoms.extend(s.atoms());
    let mut found = None;
    visit_models(max_worlds, &atoms, class, Shape::Preorders, &mut |m| {
        let failing = m.failing_worlds(s);
        if failing != 0 {
            found = Some((m, World(failing.trailing_zeros() as usize)));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

// ---------------------------------------------------------------------------
// Hygiene

/// Pointwise forcing, straight from the clauses, one world at a time.
fn forces(m: &KripkeModel, w: World, sign: Sign, f: &Formula) -> bool {
    let above = || m.worlds().filter(move |&v| m.leq(w, v));
    match (f, sign) {
        (Formula::Atom(a), _) => m.valuation(sign, a) & (1 << w.0) != 0,
        (Formula::Top, s) | (Formula::Bot, s) => (matches!(f, Formula::Top)) == (s == Sign::Plus),
        _ => {
            let (op, l, r) = f.as_binary().expect("binary");
            match (op, sign) {
                (Connective::And, Sign::Plus) | (Connective::Or, Sign::Minus) => forces(m, w, sign, l) && forces(m, w, sign, r),
                (Connective::And, Sign::Minus) | (Connective::Or, Sign::Plus) => forces(m, w, sign, l) || forces(m, w, sign, r),
                (Connective::Imp, Sign::Plus) => above().all(|v| !forces(m, v, Sign::Plus, l) || forces(m, v, Sign::Plus, r)),
                (Connective::Imp, Sign::Minus) => forces(m, w, Sign::Plus, l) && forces(m, w, Sign::Minus, r),
                (Connective::CoImp, Sign::Plus) => forces(m, w, Sign::Minus, l) && forces(m, w, Sign::Plus, r),
                (Connective::CoImp, Sign::Minus) => above().all(|v| !forces(m, v, Sign::Minus, l) || forces(m, v, Sign::Minus, r)),
            }
        }
    }
}

/// Violations found by [`check_semantic_hygiene`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct HygieneReport {
    pub models: usize,
    pub formulas: usize,
    /// Support sets that are not upward closed.
    pub persistence: Vec<String>,
    /// `T` / `F` not supported as required.
    pub constants: Vec<String>,
    /// Worlds where the set evaluator and pointwise forcing disagree.
    pub evaluator: Vec<String>,
}

impl HygieneReport {
    pub fn passed(&self) -> bool {
        self.persistence.is_empty() && self.constants.is_empty() && self.evaluator.is_empty()
    }
}

impl fmt::Display for HygieneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "semantic hygiene over {} models x {} formulas: {} persistence, {} constant, {} evaluator violations",
            self.models,
            self.formulas,
            self.persistence.len(),
            self.constants.len(),
            self.evaluator.len()
        )
    }
}

/// Checks persistence of every formula's support, the constant laws and
/// agreement of the set-based evaluator with pointwise forcing, over every
/// model with at most `max_worlds` worlds. Reports at most a few examples
/// of each kind.
pub fn check_semantic_hygiene(max_worlds: usize, atoms: &AtomSet, class: ModelClass, max_depth: usize) -> HygieneReport {
    const KEEP: usize = 5;
    let models = enumerate_models(max_worlds, atoms, class);
    let formulas = crate::syntax::enumerate_formulas(atoms, max_depth);
    let mut report = HygieneReport { models: models.len(), formulas: formulas.len(), ..HygieneReport::default() };
    let push = |list: &mut Vec<String>, entry: String| {
        if list.len() < KEEP {
            list.push(entry);
        }
    };
    for (mi, m) in models.iter().enumerate() {
        let all = m.all_worlds();
        if m.support(&Formula::Top) != (Support { plus: all, minus: 0 })
            || m.support(&Formula::Bot) != (Support { plus: 0, minus: all })
        {
            push(&mut report.constants, format!("model {mi}"));
        }
        for f in &formulas {
            let s = m.support(f);
            for (sign, mask) in [(Sign::Plus, s.plus), (Sign::Minus, s.minus)] {
                for w in m.worlds() {
                    let inside = mask & (1 << w.0) != 0;
                    if inside && m.successors(w) & !mask != 0 {
                        push(&mut report.persistence, format!("model {mi}, {}{f} at {}", sign.symbol(), m.world_name(w)));
                    }
                    if inside != forces(m, w, sign, f) {
                        push(&mut report.evaluator, format!("model {mi}, {}{f} at {}", sign.symbol(), m.world_name(w)));
                    }
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Meta-judgments

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub max_worlds: usize,
    pub atoms: AtomSet,
    pub class: ModelClass,
    /// Search budget for derivation witnesses.
    pub budget: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_worlds: 3, atoms: AtomSet::new(), class: ModelClass::NonExclusive, budget: 6 }
    }
}

/// Checkable evidence about a sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// The sequent fails at `world`.
    Countermodel { model: KripkeModel, world: World },
    /// The sequent is derivable.
    Derivation(DerivationTree),
}

impl Evidence {
    /// Re-checks the evidence against `s` by direct evaluation or by the
    /// derivation checker. Returns whether it shows `s` valid (`Some(true)`),
    /// invalid (`Some(false)`), or is not about `s` at all (`None`).
    pub fn verify(&self, s: &Sequent) -> Option<bool> {
        match self {
            Evidence::Countermodel { model, world } => {
                let fails = !model.context_worlds(s) & (1 << world.0) == 0 && {
                    let succ = &s.succedent;
                    let holds = match s.sign {
                        Sign::Plus => eval_plus(model, *world, succ),
                        Sign::Minus => eval_minus(model, *world, succ),
                    };
                    !holds
                };
                fails.then_some(false)
            }
            Evidence::Derivation(tree) => (tree.conclusion == *s && check_derivation(tree).is_accepted()).then_some(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriState {
    Holds(Evidence),
    Fails(Evidence),
    UnknownAtBound,
}

impl TriState {
    pub fn holds(&self) -> bool {
        matches!(self, TriState::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, TriState::Fails(_))
    }
}

/// Decides a meta-judgment with evidence. A single line holds when the
/// sequent has a derivation and fails when it has a countermodel. Under
/// the absence reading a double line holds when the sequent has a
/// countermodel (so no derivation can exist) and fails when it has a
/// derivation. Under the unified reading a double line is a single line
/// over the dual sequent. Anything else is unknown at the bound.
pub fn meta_holds(j: &MetaJudgment, reading: Reading, bounds: &Bounds) -> TriState {
    let (line, sequent) = match (j.line, reading) {
        (LineType::Double, Reading::R2Unified) => (LineType::Single, translate_unified(j)),
        _ => (j.line, j.sequent.clone()),
    };
    let countermodel = || {
        find_countermodel(&sequent, bounds.max_worlds, &bounds.atoms, bounds.class)
            .map(|(model, world)| Evidence::Countermodel { model, world })
    };
    let derivation = || prove(&sequent, SearchBudget::new(bounds.budget)).map(Evidence::Derivation);
    match line {
        LineType::Single => {
            if let Some(e) = countermodel() {
                TriState::Fails(e)
            } else if let Some(e) = derivation() {
                TriState::Holds(e)
            } else {
                TriState::UnknownAtBound
            }
        }
        LineType::Double => {
            if let Some(e) = countermodel() {
                TriState::Holds(e)
            } else if let Some(e) = derivation() {
                TriState::Fails(e)
            } else {
                TriState::UnknownAtBound
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{atom_set, parse_formula, parse_sequent};

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }
    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }
    fn one_world(plus: &[&str], minus: &[&str]) -> KripkeModel {
        let set = |a: &[&str]| [("w".to_string(), a.iter().map(|x| x.to_string()).collect())].into();
        KripkeModel::new(&["w".to_string()], &[], &set(plus), &set(minus)).unwrap()
    }
    fn chain(plus_at_top: &[&str]) -> KripkeModel {
        let worlds = vec!["w".to_string(), "v".to_string()];
        let vplus = [("v".to_string(), plus_at_top.iter().map(|x| x.to_string()).collect())].into();
        KripkeModel::new(&worlds, &[("w".into(), "v".into())], &vplus, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn atom_and_constant_clauses() {
        let m = one_world(&["p"], &[]);
        assert!(eval_plus(&m, World(0), &f("p")));
        assert!(!eval_plus(&m, World(0), &f("F")));
        assert!(!eval_minus(&m, World(0), &f("T")));
        assert!(!eval_plus(&m, World(0), &f("zz")) && !eval_minus(&m, World(0), &f("zz")));
    }

    #[test]
    fn non_exclusive_support() {
        let m = one_world(&["p"], &["p"]);
        assert!(eval_plus(&m, World(0), &f("p")) && eval_minus(&m, World(0), &f("p")));
        assert!(!m.is_exclusive());
        assert!(sequent_valid_in(&m, &s("p; p |-+ p")));
        assert!(sequent_valid_in(&m, &s("p; p |-- p")));
    }

    #[test]
    fn implication_looks_upward() {
        let m = chain(&["p"]);
        let w = World(0);
        assert!(eval_plus(&m, w, &f("p -> p")));
        assert!(!eval_plus(&m, w, &f("p")));
        assert!(!eval_plus(&m, w, &f("p | (p -> F)")));
    }

    #[test]
    fn validity_examples() {
        let empty = one_world(&[], &[]);
        assert!(!sequent_valid_in(&empty, &s("; |-+ p")));
        for m in enumerate_models(2, &atom_set(&["p"]), ModelClass::NonExclusive) {
            assert!(sequent_valid_in(&m, &s("p; |-+ p")));
        }
    }

    #[test]
    fn model_counts() {
        let p = atom_set(&["p"]);
        assert_eq!(enumerate_models(1, &p, ModelClass::NonExclusive).len(), 4);
        assert_eq!(enumerate_models(1, &p, ModelClass::Exclusive).len(), 3);
        assert_eq!(enumerate_models(1, &AtomSet::new(), ModelClass::NonExclusive).len(), 1);
        // two worlds: discrete (unordered pairs of the 4 one-world labels: 10)
        // plus the chain (3 up-sets per slot: 9)
        assert_eq!(enumerate_models(2, &AtomSet::new(), ModelClass::NonExclusive).len(), 1 + 3);
        assert_eq!(enumerate_models(2, &p, ModelClass::NonExclusive).len(), 4 + 10 + 9 + 4);
    }

    #[test]
    fn preorder_counts_match_known_sequence() {
        // labelled preorders: 1, 4, 29, 355
        let counts: Vec<usize> = (1..=4).map(|n| preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 29, 355]);
    }

    #[test]
    fn countermodel_examples() {
        let p = atom_set(&["p"]);
        let (m, w) = find_countermodel(&s("; |-+ p"), 3, &p, ModelClass::NonExclusive).unwrap();
        assert_eq!(m.world_count(), 1);
        assert_eq!(w, World(0));
        assert_eq!(m.valuation(Sign::Plus, "p") | m.valuation(Sign::Minus, "p"), 0);
        assert!(find_countermodel(&s("p; |-+ p"), 3, &p, ModelClass::NonExclusive).is_none());
        let (m, _) = find_countermodel(&s("; |-+ p | (p -> F)"), 2, &p, ModelClass::NonExclusive).unwrap();
        assert!(m.world_count() <= 2);
        assert!(!sequent_valid_in(&m, &s("; |-+ p | (p -> F)")));
    }

    #[test]
    fn model_file_round_trip_and_diagnostics() {
        let m = chain(&["p"]);
        let back = KripkeModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"worlds": ["a", "b"], "leq": [["a", "b"]], "vplus": {"a": ["p"]}}"#;
        match KripkeModel::from_json(bad) {
            Err(ModelError::NotPersistent { lower, upper, atom, .. }) => {
                assert_eq!((lower.as_str(), upper.as_str(), atom.as_str()), ("a", "b", "p"));
            }
            other => panic!("{other:?}"),
        }
        let intransitive = r#"{"worlds": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"]]}"#;
        assert!(matches!(KripkeModel::from_json(intransitive), Err(ModelError::NotTransitive(..))));
        let unknown = r#"{"worlds": ["a"], "vminus": {"z": ["p"]}}"#;
        assert!(matches!(KripkeModel::from_json(unknown), Err(ModelError::UnknownWorld(w)) if w == "z"));
    }

    #[test]
    fn meta_readings() {
        let bounds = Bounds { atoms: atom_set(&["p"]), ..Bounds::default() };
        let refuted = MetaJudgment::double(s("; |-+ p"));
        assert!(meta_holds(&refuted, Reading::R1Absence, &bounds).holds());
        assert!(meta_holds(&refuted, Reading::R2Unified, &bounds).fails());
        let axiom = MetaJudgment::single(s("p; |-+ p"));
        assert!(meta_holds(&axiom, Reading::R1Absence, &bounds).holds());
        assert!(meta_holds(&axiom, Reading::R2Unified, &bounds).holds());
        // a double line over a derivable sequent fails definitively
        assert!(meta_holds(&MetaJudgment::double(s("p; |-+ p")), Reading::R1Absence, &bounds).fails());
    }

    #[test]
    fn evidence_verification() {
        let bounds = Bounds { atoms: atom_set(&["p"]), ..Bounds::default() };
        let TriState::Fails(e) = meta_holds(&MetaJudgment::single(s("; |-+ p")), Reading::R1Absence, &bounds) else {
            panic!()
        };
        assert_eq!(e.verify(&s("; |-+ p")), Some(false));
        assert_eq!(e.verify(&s("; |-+ T")), None);
    }
}
